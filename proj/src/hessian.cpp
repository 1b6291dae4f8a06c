#include "dcp/hessian.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "dcp/errors.hpp"
#include "dcp/random.hpp"

namespace dcp {

namespace {

constexpr double sign_slack = 1e-12;
constexpr double row_sum_slack = 1e-10;
constexpr std::size_t max_norm_dim = 24;

SquareMatrix centered_outer(std::span<const double> p) {
  // diag(p) - p p^T
  const std::size_t n = p.size();
  SquareMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r(i, j) = (i == j ? p[i] : 0.0) - p[i] * p[j];
    }
  }
  return r;
}

}  // namespace

SquareMatrix add(const SquareMatrix& a, const SquareMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "matrix sizes differ");
  SquareMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) + b(i, j);
  }
  return c;
}

SquareMatrix scale(const SquareMatrix& a, double factor) {
  SquareMatrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = factor * a(i, j);
  }
  return c;
}

ClassAMatrix::ClassAMatrix(SquareMatrix a) : a_(std::move(a)) {
  const std::size_t n = a_.dim();
  if (n == 0) fail(ErrorCode::InvalidArgument, "empty matrix");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(a_(i, j) - a_(j, i)) > row_sum_slack) {
        fail(ErrorCode::NotClassA,
             "entry (" + std::to_string(i) + "," + std::to_string(j) +
                 ") is not symmetric");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (a_(i, i) < -sign_slack) {
      fail(ErrorCode::NotClassA,
           "(A1) diagonal entry " + std::to_string(i) + " is negative");
    }
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && a_(i, j) > sign_slack) {
        fail(ErrorCode::NotClassA,
             "(A1) off-diagonal entry (" + std::to_string(i) + "," +
                 std::to_string(j) + ") is positive");
      }
      row += a_(i, j);
    }
    if (std::abs(row) > row_sum_slack) {
      fail(ErrorCode::NotClassA,
           "(A2) row " + std::to_string(i) + " sums to " + std::to_string(row));
    }
  }
}

double ClassAMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < a_.dim(); ++i) t += a_(i, i);
  return t;
}

ClassAMatrix check_class_a(const SquareMatrix& a) { return ClassAMatrix(a); }

HessianDecomposition hessian_surplus(const GnlModel& model,
                                     std::span<const double> u) {
  const SimplexPoint p = choice_probabilities(model, u);
  const NestProbabilities stages = nest_probabilities(model, u);
  const std::size_t n = p.size();

  SquareMatrix r = centered_outer(p.span());

  SquareMatrix s(n);
  for (std::size_t ell = 0; ell < model.num_nests(); ++ell) {
    const double weight =
        (1.0 / model.nest(ell).mu_ell - 1.0 / model.mu()) * stages.nest_prob[ell];
    if (weight == 0.0) continue;
    const auto& cond = stages.conditional[ell];
    for (int i : model.nest(ell).alt) {
      const auto ii = static_cast<std::size_t>(i);
      for (int j : model.nest(ell).alt) {
        const auto jj = static_cast<std::size_t>(j);
        s(ii, jj) += weight * ((i == j ? cond[ii] : 0.0) - cond[ii] * cond[jj]);
      }
    }
  }

  SquareMatrix full = add(scale(r, 1.0 / model.mu()), s);
  return HessianDecomposition{ClassAMatrix(std::move(r)), ClassAMatrix(std::move(s)),
                              ClassAMatrix(std::move(full))};
}

NormResult norm_inf1_exact(const ClassAMatrix& a) {
  const std::size_t n = a.dim();
  if (n > max_norm_dim) {
    fail(ErrorCode::TooLarge,
         "exact norm enumerates subsets; dimension " + std::to_string(n) +
             " exceeds the cap of " + std::to_string(max_norm_dim));
  }
  const std::size_t half = n / 2;

  // Gray-code walk over all subsets; each step flips one element and updates
  // the block sum through column partial sums c_j = sum_{i in K} a_ij.
  std::vector<double> col(n, 0.0);
  double block = 0.0;  // sum_{i,j in K} a_ij
  std::size_t popcount = 0;
  std::uint32_t mask = 0;

  double best = 0.0;  // empty subset is admissible
  std::uint32_t best_mask = 0;

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const unsigned bit = std::countr_zero(step);
    const std::uint32_t flip = std::uint32_t{1} << bit;
    if (mask & flip) {
      block += a(bit, bit) - 2.0 * col[bit];
      for (std::size_t j = 0; j < n; ++j) col[j] -= a(bit, j);
      mask ^= flip;
      --popcount;
    } else {
      block += a(bit, bit) + 2.0 * col[bit];
      for (std::size_t j = 0; j < n; ++j) col[j] += a(bit, j);
      mask ^= flip;
      ++popcount;
    }
    if (popcount <= half && block > best) {
      best = block;
      best_mask = mask;
    }
  }

  NormResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (best_mask & (std::uint32_t{1} << i)) out.witness.push_back(static_cast<int>(i));
  }
  // The walk accumulates rounding drift over 2^n updates; re-sum the winning
  // block directly so the returned value carries only one summation's noise.
  double fresh = 0.0;
  for (int i : out.witness) {
    for (int j : out.witness) {
      fresh += a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  out.value = 4.0 * fresh;
  return out;
}

double norm_inf1_trace_bound(const ClassAMatrix& a) { return 2.0 * a.trace(); }

SmoothnessCertificate smoothness_certificate(const GnlModel& model,
                                             int sample_count,
                                             std::uint64_t seed) {
  if (sample_count < 1) fail(ErrorCode::BadCount, "need at least one sample");
  const std::size_t n = static_cast<std::size_t>(model.num_alternatives());
  if (n > max_norm_dim) {
    fail(ErrorCode::TooLarge,
         "certificate needs the exact norm; dimension exceeds " +
             std::to_string(max_norm_dim));
  }
  RandomStream rng(seed);
  std::vector<double> u(n, 0.0);
  double max_observed = 0.0;
  for (int sample = 0; sample < sample_count; ++sample) {
    if (sample > 0) {
      for (double& v : u) v = rng.uniform(-4.0, 4.0);
    }
    const HessianDecomposition hess = hessian_surplus(model, u);
    max_observed = std::max(max_observed, norm_inf1_exact(hess.full).value);
  }
  const double bound = 1.0 / convexity_parameter(model);
  return SmoothnessCertificate{max_observed, bound,
                               max_observed <= bound + 1e-8};
}

}  // namespace dcp
