#pragma once

#include <span>
#include <vector>

#include "dcp/gnl_model.hpp"
#include "dcp/simplex.hpp"

namespace dcp {

/// Prox-function d(p) = E*(p) - E*(p0) on the simplex, built from a model.
/// The minimizer p0 is the zero-utility choice probability vector and
/// E*(p0) = -E(0) is cached at construction. Immutable; all evaluations are
/// pure and concurrently callable.
struct ProxFunction {
  GnlModel model;
  SimplexPoint prox_center;
  double conjugate_min;  // E*(p0) = -E(0)
  double beta;           // convexity_parameter(model)
};

ProxFunction make_prox_function(const GnlModel& model);

/// Zero-utility choice probabilities, the unique minimizer of E*.
SimplexPoint prox_center(const GnlModel& model);

/// Closed-form conjugate for multinomial logit:
/// E*(p) = mu sum p ln p - mu gamma, with 0 ln 0 = 0.
/// Throws WrongModelKind unless the model is single-nest ML.
double conjugate_ml(const GnlModel& model, const SimplexPoint& p);

/// Closed-form conjugate for nested logit (disjoint unit-share nests, mu=1):
/// E*(p) = sum_ell mu_ell sum_{i in N_ell} p_i ln p_i
///       + sum_ell (1-mu_ell) P_ell ln P_ell - mu gamma,  P_ell = nest mass.
double conjugate_nl(const GnlModel& model, const SimplexPoint& p);

struct ConjugateResult {
  double value;                   // E*(p)
  std::vector<double> maximizer;  // u with grad E(u) = p, gauged so u_n = 0
  long long iterations;
};

/// Numeric conjugate at an interior point: maximizes <p,u> - E(u) by
/// fixed-step gradient ascent (step 2 beta, safe under 1/beta-smoothness),
/// warm-started at u = mu ln p, stopping at ||grad E(u) - p||_1 <= 1e-10.
/// Throws BoundaryPoint when min_i p_i < 1e-6 and NoConvergence past 1e5
/// iterations.
ConjugateResult conjugate_numeric(const GnlModel& model, const SimplexPoint& p);

/// E*(p) through the cheapest available route: closed form for ML and NL,
/// numeric ascent otherwise. `used_closed_form`, when given, reports which.
double conjugate_value(const GnlModel& model, const SimplexPoint& p,
                       bool* used_closed_form = nullptr);

/// d(p) = E*(p) - E*(p0).
double prox_value(const ProxFunction& prox, const SimplexPoint& p);

/// argmin_{p in simplex} { <s,p> + d(p)/t } = grad E(-t s).
SimplexPoint prox_map(const ProxFunction& prox, std::span<const double> s,
                      double t);

/// Interior threshold below which the numeric conjugate refuses a point.
inline constexpr double conjugate_interior_min = 1e-6;

}  // namespace dcp
