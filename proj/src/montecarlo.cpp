#include "dcp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dcp/errors.hpp"

namespace dcp {

namespace {

// Draws an index from a cumulative weight table via a single uniform.
std::size_t draw_index(const std::vector<double>& cumulative, double u) {
  const double target = u * cumulative.back();
  const auto it =
      std::lower_bound(cumulative.begin(), cumulative.end(), target);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()),
                  cumulative.size() - 1);
}

}  // namespace

double gumbel_quantile(const GumbelSpec& spec, double u) {
  if (!(spec.scale > 0.0)) {
    fail(ErrorCode::InvalidArgument, "Gumbel scale must be positive");
  }
  if (!(u > 0.0) || !(u < 1.0)) {
    fail(ErrorCode::InvalidArgument, "quantile argument must lie in (0,1)");
  }
  return spec.location - spec.scale * std::log(-std::log(u));
}

std::vector<double> sample_gumbel(const GumbelSpec& spec, RandomStream& rng,
                                  long long count) {
  if (count < 1) fail(ErrorCode::BadCount, "need at least one draw");
  if (!(spec.scale > 0.0)) {
    fail(ErrorCode::InvalidArgument, "Gumbel scale must be positive");
  }
  std::vector<double> draws(static_cast<std::size_t>(count));
  for (double& d : draws) {
    d = spec.location - spec.scale * std::log(-std::log(rng.uniform01()));
  }
  return draws;
}

McEstimate mc_surplus_ml(const GnlModel& model, std::span<const double> u,
                         long long samples, std::uint64_t seed) {
  if (!model.is_ml()) {
    fail(ErrorCode::WrongModelKind,
         "shock simulation of the surplus is implemented for multinomial logit only");
  }
  if (u.size() != static_cast<std::size_t>(model.num_alternatives())) {
    fail(ErrorCode::DimensionMismatch, "utility length does not match the model");
  }
  require_finite(u, "utilities");
  if (samples < 1) fail(ErrorCode::BadCount, "need at least one sample");

  RandomStream rng(seed);
  const double scale = model.mu();
  // Welford running mean/variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (long long s = 0; s < samples; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double eps = -scale * std::log(-std::log(rng.uniform01()));
      best = std::max(best, u[i] + eps);
    }
    const double delta = best - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (best - mean);
  }
  const double variance =
      samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return McEstimate{mean, std::sqrt(variance / static_cast<double>(samples)),
                    samples};
}

SimplexPoint mc_choice_frequencies(const GnlModel& model,
                                   std::span<const double> u,
                                   long long samples, std::uint64_t seed) {
  if (u.size() != static_cast<std::size_t>(model.num_alternatives())) {
    fail(ErrorCode::DimensionMismatch, "utility length does not match the model");
  }
  require_finite(u, "utilities");
  if (samples < 1) fail(ErrorCode::BadCount, "need at least one sample");

  const NestProbabilities stages = nest_probabilities(model, u);
  const std::size_t num_nests = stages.nest_prob.size();

  std::vector<double> nest_cumulative(num_nests);
  double acc = 0.0;
  for (std::size_t ell = 0; ell < num_nests; ++ell) {
    acc += stages.nest_prob[ell];
    nest_cumulative[ell] = acc;
  }
  // Conditional tables hold only nest members, aligned with nest(ell).alt.
  std::vector<std::vector<double>> cond_cumulative(num_nests);
  for (std::size_t ell = 0; ell < num_nests; ++ell) {
    const auto& alt = model.nest(ell).alt;
    cond_cumulative[ell].resize(alt.size());
    double c = 0.0;
    for (std::size_t k = 0; k < alt.size(); ++k) {
      c += stages.conditional[ell][static_cast<std::size_t>(alt[k])];
      cond_cumulative[ell][k] = c;
    }
  }

  RandomStream rng(seed);
  std::vector<long long> counts(u.size(), 0);
  for (long long s = 0; s < samples; ++s) {
    const std::size_t ell = draw_index(nest_cumulative, rng.uniform01());
    const std::size_t member = draw_index(cond_cumulative[ell], rng.uniform01());
    counts[static_cast<std::size_t>(model.nest(ell).alt[member])] += 1;
  }
  std::vector<double> freq(u.size());
  for (std::size_t i = 0; i < freq.size(); ++i) {
    freq[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
  }
  return SimplexPoint(std::move(freq));
}

}  // namespace dcp
