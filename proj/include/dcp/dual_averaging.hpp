#pragma once

#include <functional>
#include <vector>

#include "dcp/conjugate.hpp"
#include "dcp/simplex.hpp"

namespace dcp {

/// State of a weighted dual-averaging run. After k completed steps, `s` is
/// the plain average of the subgradients seen so far and `p` the current
/// iterate. History (iterates and subgradients, in step order) is kept only
/// on request.
struct DaState {
  long long k = 0;
  std::vector<double> s;
  SimplexPoint p;
  bool has_history = false;
  std::vector<std::vector<double>> history_p;
  std::vector<std::vector<double>> history_g;
};

using SubgradientOracle =
    std::function<std::vector<double>(const SimplexPoint&)>;

/// Runs the scheme: g_k = oracle(p_k), s_{k+1} = average of g_0..g_k,
/// p_{k+1} = prox_map(s_{k+1}, sqrt(k+1)), starting from the prox-center.
/// Throws OracleFailure on a non-finite or wrongly sized subgradient.
DaState da_run(const SubgradientOracle& oracle, const ProxFunction& prox,
               long long iters, bool keep_history);

/// Constants in the duality-gap envelope.
struct GapBoundInputs {
  double d;     // bound on max of the prox-function over the simplex
  double m;    // bound on the sup-norm of subgradients
  double beta;  // convexity parameter of the prox-function
};

/// (D + M^2/beta) / sqrt(k+1); uses sum_{l<=k} l^{-1/2} <= 2 sqrt(k+1) - 1.
double gap_bound(const GapBoundInputs& inputs, long long k);

/// Realized gap after step k (defaults to the last recorded step):
/// average of <g_l, p_l> minus the smallest entry of the average subgradient;
/// the inner maximum over the simplex sits at a vertex. Needs history.
double empirical_gap(const DaState& state, long long k);
double empirical_gap(const DaState& state);

}  // namespace dcp
