#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dcp/gnl_model.hpp"

namespace dcp {

/// Minimal dense square matrix, row-major. Sizes here never exceed a few
/// dozen, so no linear-algebra package is pulled in.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t dim() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

SquareMatrix add(const SquareMatrix& a, const SquareMatrix& b);
SquareMatrix scale(const SquareMatrix& a, double factor);

/// Symmetric matrix with nonnegative diagonal, nonpositive off-diagonal and
/// zero row sums, checked with floating-point slack (1e-12 on signs, 1e-10
/// on row sums and symmetry). Construction throws NotClassA naming the
/// violated condition.
class ClassAMatrix {
 public:
  explicit ClassAMatrix(SquareMatrix a);

  std::size_t dim() const noexcept { return a_.dim(); }
  const SquareMatrix& matrix() const noexcept { return a_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_(i, j); }
  double trace() const noexcept;

 private:
  SquareMatrix a_;
};

/// Validates membership in the matrix class above.
ClassAMatrix check_class_a(const SquareMatrix& a);

/// Hessian of the surplus function split as full = R/mu + S with
/// R = diag(p) - p p^T and S the within-nest curvature part; all three are
/// class-A members.
struct HessianDecomposition {
  ClassAMatrix r;
  ClassAMatrix s;
  ClassAMatrix full;
};

/// Analytic Hessian of E at u. In probability terms,
///   full = R(p)/mu + sum_ell (1/mu_ell - 1/mu) q_ell R(p_{.|ell}),
/// with R(p) = diag(p) - p p^T over the two-stage probabilities.
HessianDecomposition hessian_surplus(const GnlModel& model,
                                     std::span<const double> u);

struct NormResult {
  double value;
  std::vector<int> witness;  // subset K attaining value = 4 sum_{i,j in K} a_ij
};

/// Exact infinity-to-one operator norm of a class-A matrix:
/// 4 max over K, |K| <= floor(n/2), of the K-block entry sum. Enumerates
/// subsets in Gray-code order with incremental sums; refuses n > 24
/// (TooLarge).
NormResult norm_inf1_exact(const ClassAMatrix& a);

/// Upper bound 2 tr(A) on the same norm.
double norm_inf1_trace_bound(const ClassAMatrix& a);

struct SmoothnessCertificate {
  double max_observed;
  double bound;  // 1/beta
  bool pass;     // max_observed <= bound + 1e-8
};

/// Samples utilities (u = 0 first, then uniform on [-4,4]^n from the seed),
/// takes the largest exact norm of the surplus Hessian, and compares it with
/// the theoretical bound 1/beta.
SmoothnessCertificate smoothness_certificate(const GnlModel& model,
                                             int sample_count,
                                             std::uint64_t seed);

}  // namespace dcp
