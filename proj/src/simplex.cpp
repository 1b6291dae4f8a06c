#include "dcp/simplex.hpp"

#include <cmath>
#include <string>

#include "dcp/errors.hpp"

namespace dcp {

SimplexPoint::SimplexPoint(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) fail(ErrorCode::InvalidArgument, "simplex point is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    double v = p_[i];
    if (!std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument,
           "simplex entry " + std::to_string(i) + " is not finite");
    }
    if (v < 0.0) {
      if (v < -1e-14) {
        fail(ErrorCode::InvalidArgument,
             "simplex entry " + std::to_string(i) + " = " + std::to_string(v) +
                 " is negative beyond tolerance");
      }
      p_[i] = 0.0;
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    fail(ErrorCode::InvalidArgument,
         "simplex mass " + std::to_string(sum) + " differs from 1 beyond 1e-10");
  }
}

SimplexPoint SimplexPoint::uniform(std::size_t n) {
  return SimplexPoint(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SimplexPoint SimplexPoint::vertex(std::size_t n, std::size_t i) {
  std::vector<double> p(n, 0.0);
  p.at(i) = 1.0;
  return SimplexPoint(std::move(p));
}

double SimplexPoint::min_entry() const noexcept {
  double m = p_[0];
  for (double v : p_) m = std::min(m, v);
  return m;
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      fail(ErrorCode::InvalidArgument,
           std::string(what) + " entry " + std::to_string(i) + " is not finite");
    }
  }
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double l1_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

double linf_norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace dcp
