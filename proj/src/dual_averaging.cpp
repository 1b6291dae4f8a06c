#include "dcp/dual_averaging.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcp/errors.hpp"

namespace dcp {

DaState da_run(const SubgradientOracle& oracle, const ProxFunction& prox,
               long long iters, bool keep_history) {
  if (iters < 1) fail(ErrorCode::BadCount, "need at least one iteration");
  const std::size_t n = prox.prox_center.size();

  DaState state{0, std::vector<double>(n, 0.0), prox.prox_center, keep_history, {}, {}};
  if (keep_history) {
    state.history_p.reserve(static_cast<std::size_t>(iters));
    state.history_g.reserve(static_cast<std::size_t>(iters));
  }

  for (long long k = 0; k < iters; ++k) {
    std::vector<double> g = oracle(state.p);
    if (g.size() != n) {
      fail(ErrorCode::OracleFailure,
           "subgradient has length " + std::to_string(g.size()) + ", expected " +
               std::to_string(n));
    }
    for (double v : g) {
      if (!std::isfinite(v)) {
        fail(ErrorCode::OracleFailure, "subgradient has a non-finite entry");
      }
    }
    if (keep_history) {
      state.history_p.push_back(state.p.values());
      state.history_g.push_back(g);
    }
    // s_{k+1} = (k s_k + g_k) / (k+1)
    const double kk = static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i) {
      state.s[i] = (kk * state.s[i] + g[i]) / (kk + 1.0);
    }
    state.p = prox_map(prox, state.s, std::sqrt(kk + 1.0));
    state.k = k + 1;
  }
  return state;
}

double gap_bound(const GapBoundInputs& inputs, long long k) {
  if (k < 0) fail(ErrorCode::BadCount, "step index must be nonnegative");
  return (inputs.d + inputs.m * inputs.m / inputs.beta) /
         std::sqrt(static_cast<double>(k) + 1.0);
}

double empirical_gap(const DaState& state, long long k) {
  if (!state.has_history || state.history_g.empty()) {
    fail(ErrorCode::NoHistory, "empirical gap needs a run with history retained");
  }
  if (k < 0 || k >= static_cast<long long>(state.history_g.size())) {
    fail(ErrorCode::BadCount, "step " + std::to_string(k) + " was not recorded");
  }
  const std::size_t n = state.history_g[0].size();
  double inner_avg = 0.0;
  std::vector<double> s(n, 0.0);
  for (long long l = 0; l <= k; ++l) {
    const auto& g = state.history_g[static_cast<std::size_t>(l)];
    const auto& p = state.history_p[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < n; ++i) {
      inner_avg += g[i] * p[i];
      s[i] += g[i];
    }
  }
  const double count = static_cast<double>(k) + 1.0;
  inner_avg /= count;
  double s_min = s[0];
  for (double v : s) s_min = std::min(s_min, v);
  return inner_avg - s_min / count;
}

double empirical_gap(const DaState& state) {
  return empirical_gap(state, state.k - 1);
}

}  // namespace dcp
