#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dcp/gnl_model.hpp"
#include "dcp/random.hpp"
#include "dcp/simplex.hpp"

namespace dcp {

/// Gumbel distribution parameterized by scale and mode.
struct GumbelSpec {
  double scale = 1.0;
  double location = 0.0;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};

/// Inverse CDF: location - scale ln(-ln u) for u in (0,1).
double gumbel_quantile(const GumbelSpec& spec, double u);

/// `count` inverse-CDF draws from the stream; deterministic per seed.
std::vector<double> sample_gumbel(const GumbelSpec& spec, RandomStream& rng,
                                  long long count);

/// Sample mean and standard error of max_i (u_i + eps_i) under IID
/// Gumbel(0, mu) shocks. Only multinomial logit admits this shock
/// representation; other model kinds are rejected (WrongModelKind).
McEstimate mc_surplus_ml(const GnlModel& model, std::span<const double> u,
                         long long samples, std::uint64_t seed);

/// Empirical choice frequencies by simulating the two-stage decomposition
/// (nest by q, alternative by the conditional probabilities); valid for any
/// model of the family. Deterministic per seed.
SimplexPoint mc_choice_frequencies(const GnlModel& model,
                                   std::span<const double> u,
                                   long long samples, std::uint64_t seed);

}  // namespace dcp
