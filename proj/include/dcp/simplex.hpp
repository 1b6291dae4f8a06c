#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dcp {

/// Probability vector on the (n-1)-simplex. Construction checks that the
/// mass sums to one within 1e-10 and clamps entries in [-1e-14, 0) to zero;
/// anything more negative is rejected.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> p);

  static SimplexPoint uniform(std::size_t n);
  static SimplexPoint vertex(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const noexcept { return p_[i]; }
  const std::vector<double>& values() const noexcept { return p_; }
  std::span<const double> span() const noexcept { return p_; }

  double min_entry() const noexcept;

  auto begin() const noexcept { return p_.begin(); }
  auto end() const noexcept { return p_.end(); }

 private:
  std::vector<double> p_;
};

// Deterministic utilities are plain arrays; operations reject non-finite
// entries at their boundary.
using UtilityVector = std::vector<double>;

void require_finite(std::span<const double> values, const char* what);

double l1_distance(std::span<const double> a, std::span<const double> b);
double l1_norm(std::span<const double> a);
double linf_norm(std::span<const double> a);

}  // namespace dcp
