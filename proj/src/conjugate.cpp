#include "dcp/conjugate.hpp"

#include <cmath>
#include <string>

#include "dcp/errors.hpp"

namespace dcp {

namespace {

constexpr double grad_tol = 1e-10;
constexpr long long max_ascent_iters = 100000;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void check_point_dimension(const GnlModel& model, const SimplexPoint& p) {
  if (p.size() != static_cast<std::size_t>(model.num_alternatives())) {
    fail(ErrorCode::DimensionMismatch,
         "point has length " + std::to_string(p.size()) + ", model has " +
             std::to_string(model.num_alternatives()) + " alternatives");
  }
}

}  // namespace

SimplexPoint prox_center(const GnlModel& model) {
  const std::vector<double> zero(static_cast<std::size_t>(model.num_alternatives()), 0.0);
  return choice_probabilities(model, zero);
}

ProxFunction make_prox_function(const GnlModel& model) {
  const std::vector<double> zero(static_cast<std::size_t>(model.num_alternatives()), 0.0);
  return ProxFunction{model, choice_probabilities(model, zero),
                      -surplus(model, zero), convexity_parameter(model)};
}

double conjugate_ml(const GnlModel& model, const SimplexPoint& p) {
  if (!model.is_ml()) {
    fail(ErrorCode::WrongModelKind, "closed-form conjugate needs a multinomial logit model");
  }
  check_point_dimension(model, p);
  double entropy = 0.0;
  for (double v : p) entropy += xlogx(v);
  return model.mu() * entropy - model.mu() * euler_gamma;
}

double conjugate_nl(const GnlModel& model, const SimplexPoint& p) {
  if (!model.is_nl()) {
    fail(ErrorCode::WrongModelKind,
         "closed-form conjugate needs a nested logit model (disjoint unit shares, mu = 1)");
  }
  check_point_dimension(model, p);
  double value = 0.0;
  for (const auto& nest : model.nests()) {
    double mass = 0.0;
    for (int i : nest.alt) {
      value += nest.mu_ell * xlogx(p[static_cast<std::size_t>(i)]);
      mass += p[static_cast<std::size_t>(i)];
    }
    value += (1.0 - nest.mu_ell) * xlogx(mass);
  }
  return value - model.mu() * euler_gamma;
}

ConjugateResult conjugate_numeric(const GnlModel& model, const SimplexPoint& p) {
  check_point_dimension(model, p);
  if (p.min_entry() < conjugate_interior_min) {
    fail(ErrorCode::BoundaryPoint,
         "numeric conjugate needs min_i p_i >= 1e-6; the maximizer diverges at the boundary");
  }
  const std::size_t n = p.size();
  const double step = 2.0 * convexity_parameter(model);

  // Warm start u = mu ln p, exact for ML. The ascent direction p - grad E(u)
  // sums to zero, so iterates stay in the affine slice of the start.
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = model.mu() * std::log(p[i]);

  long long iterations = 0;
  while (true) {
    const SimplexPoint grad = choice_probabilities(model, u);
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(grad[i] - p[i]);
    if (residual <= grad_tol) break;
    if (++iterations > max_ascent_iters) {
      fail(ErrorCode::NoConvergence,
           "conjugate ascent residual " + std::to_string(residual) +
               " still above 1e-10 after " + std::to_string(max_ascent_iters) +
               " iterations");
    }
    for (std::size_t i = 0; i < n; ++i) u[i] += step * (p[i] - grad[i]);
  }

  // Gauge: E* is invariant to shifts along the all-ones direction; pin u_n = 0.
  const double shift = u[n - 1];
  for (double& v : u) v -= shift;

  double inner = 0.0;
  for (std::size_t i = 0; i < n; ++i) inner += p[i] * u[i];
  const double value = inner - surplus(model, u);
  return ConjugateResult{value, std::move(u), iterations};
}

double conjugate_value(const GnlModel& model, const SimplexPoint& p,
                       bool* used_closed_form) {
  if (model.is_ml()) {
    if (used_closed_form) *used_closed_form = true;
    return conjugate_ml(model, p);
  }
  if (model.is_nl()) {
    if (used_closed_form) *used_closed_form = true;
    return conjugate_nl(model, p);
  }
  if (used_closed_form) *used_closed_form = false;
  return conjugate_numeric(model, p).value;
}

double prox_value(const ProxFunction& prox, const SimplexPoint& p) {
  return conjugate_value(prox.model, p) - prox.conjugate_min;
}

SimplexPoint prox_map(const ProxFunction& prox, std::span<const double> s,
                      double t) {
  require_finite(s, "aggregated subgradient");
  if (!(t > 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::InvalidArgument, "damping t must be positive and finite");
  }
  std::vector<double> u(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) u[i] = -t * s[i];
  return choice_probabilities(prox.model, u);
}

}  // namespace dcp
