#include "dcp/gnl_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dcp/errors.hpp"

namespace dcp {

namespace {

constexpr double share_renorm_tol = 1e-9;
constexpr double kind_tol = 1e-12;

// log sum exp with max shift; `a` must be nonempty.
double log_sum_exp(std::span<const double> a) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : a) m = std::max(m, v);
  double s = 0.0;
  for (double v : a) s += std::exp(v - m);
  return m + std::log(s);
}

struct Eval {
  std::vector<double> nest_utility;            // v_ell
  std::vector<double> nest_prob;               // q_ell
  std::vector<std::vector<double>> cond;       // p_{alt[k] | ell}, nest-aligned
  std::vector<double> prob;                    // p_i, renormalized
  double surplus = 0.0;                        // E(u)
};

// Two-stage evaluation of the model at utilities u, entirely with shifted
// log-sum-exp so that |u_i| <= 700 never produces an intermediate overflow.
Eval evaluate(const GnlModel& model, std::span<const double> u) {
  const std::size_t num_nests = model.num_nests();
  Eval ev;
  ev.nest_utility.resize(num_nests);
  ev.cond.resize(num_nests);

  std::vector<double> scaled;
  for (std::size_t ell = 0; ell < num_nests; ++ell) {
    const auto& nest = model.nest(ell);
    scaled.resize(nest.alt.size());
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      scaled[k] = (u[static_cast<std::size_t>(nest.alt[k])] + nest.log_share[k]) / nest.mu_ell;
    }
    const double lse = log_sum_exp(scaled);
    ev.nest_utility[ell] = nest.mu_ell * lse;
    auto& cond = ev.cond[ell];
    cond.resize(nest.alt.size());
    double csum = 0.0;
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      cond[k] = std::exp(scaled[k] - lse);
      csum += cond[k];
    }
    for (double& c : cond) c /= csum;
  }

  std::vector<double> top(num_nests);
  for (std::size_t ell = 0; ell < num_nests; ++ell) {
    top[ell] = ev.nest_utility[ell] / model.mu();
  }
  const double top_lse = log_sum_exp(top);
  ev.surplus = model.mu() * top_lse + model.mu() * euler_gamma;

  ev.nest_prob.resize(num_nests);
  double qsum = 0.0;
  for (std::size_t ell = 0; ell < num_nests; ++ell) {
    ev.nest_prob[ell] = std::exp(top[ell] - top_lse);
    qsum += ev.nest_prob[ell];
  }
  for (double& q : ev.nest_prob) q /= qsum;

  ev.prob.assign(static_cast<std::size_t>(model.num_alternatives()), 0.0);
  for (std::size_t ell = 0; ell < num_nests; ++ell) {
    const auto& nest = model.nest(ell);
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      ev.prob[static_cast<std::size_t>(nest.alt[k])] += ev.nest_prob[ell] * ev.cond[ell][k];
    }
  }
  double psum = 0.0;
  for (double p : ev.prob) psum += p;
  for (double& p : ev.prob) p /= psum;
  return ev;
}

void check_dimension(const GnlModel& model, std::span<const double> v,
                     const char* what) {
  if (v.size() != static_cast<std::size_t>(model.num_alternatives())) {
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + " has length " + std::to_string(v.size()) +
             ", model has " + std::to_string(model.num_alternatives()) +
             " alternatives");
  }
}

}  // namespace

double GnlModel::min_nest_scale() const noexcept {
  double m = nests_[0].mu_ell;
  for (const auto& nest : nests_) m = std::min(m, nest.mu_ell);
  return m;
}

bool GnlModel::is_ml() const noexcept {
  if (nests_.size() != 1) return false;
  const auto& nest = nests_[0];
  if (nest.alt.size() != static_cast<std::size_t>(n_)) return false;
  return std::abs(nest.mu_ell - mu_) <= kind_tol * mu_;
}

bool GnlModel::is_nl() const noexcept {
  if (std::abs(mu_ - 1.0) > kind_tol) return false;
  std::vector<int> hits(static_cast<std::size_t>(n_), 0);
  for (const auto& nest : nests_) {
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      if (std::abs(nest.share[k] - 1.0) > kind_tol) return false;
      hits[static_cast<std::size_t>(nest.alt[k])] += 1;
    }
  }
  for (int h : hits) {
    if (h != 1) return false;
  }
  return true;
}

GnlModel construct_model(const GnlSpec& spec) {
  if (spec.n < 1) {
    fail(ErrorCode::InvalidArgument, "model needs at least one alternative");
  }
  if (!(spec.mu > 0.0) || !std::isfinite(spec.mu)) {
    fail(ErrorCode::InvalidArgument, "top-level scale mu must be positive and finite");
  }

  GnlModel model;
  model.n_ = spec.n;
  model.mu_ = spec.mu;

  std::vector<double> row_sum(static_cast<std::size_t>(spec.n), 0.0);
  for (std::size_t ell = 0; ell < spec.nests.size(); ++ell) {
    const NestSpec& ns = spec.nests[ell];
    if (!(ns.mu_ell > 0.0) || !std::isfinite(ns.mu_ell)) {
      fail(ErrorCode::InvalidArgument,
           "nest " + std::to_string(ell) + " scale must be positive and finite");
    }
    if (ns.mu_ell > spec.mu) {
      fail(ErrorCode::NestScaleTooLarge,
           "nest " + std::to_string(ell) + " scale " + std::to_string(ns.mu_ell) +
               " exceeds top-level scale " + std::to_string(spec.mu));
    }
    if (ns.shares.empty()) continue;  // empty nest contributes nothing

    GnlModel::Nest nest;
    nest.mu_ell = ns.mu_ell;
    std::vector<std::pair<int, double>> entries = ns.shares;
    std::sort(entries.begin(), entries.end());
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const auto [alt, share] = entries[k];
      if (alt < 0 || alt >= spec.n) {
        fail(ErrorCode::InvalidArgument,
             "nest " + std::to_string(ell) + " references alternative " +
                 std::to_string(alt) + " outside [0, " + std::to_string(spec.n) + ")");
      }
      if (k > 0 && entries[k - 1].first == alt) {
        fail(ErrorCode::InvalidArgument,
             "nest " + std::to_string(ell) + " lists alternative " +
                 std::to_string(alt) + " twice");
      }
      if (!(share > 0.0) || !std::isfinite(share)) {
        fail(ErrorCode::InvalidArgument,
             "share of alternative " + std::to_string(alt) + " in nest " +
                 std::to_string(ell) + " must be strictly positive");
      }
      nest.alt.push_back(alt);
      nest.share.push_back(share);
      row_sum[static_cast<std::size_t>(alt)] += share;
    }
    model.nests_.push_back(std::move(nest));
  }

  if (model.nests_.empty()) {
    fail(ErrorCode::InvalidArgument, "model has no nonempty nest");
  }

  for (int i = 0; i < spec.n; ++i) {
    const double s = row_sum[static_cast<std::size_t>(i)];
    if (s == 0.0) {
      fail(ErrorCode::OrphanAlternative,
           "alternative " + std::to_string(i) + " belongs to no nest");
    }
    if (std::abs(s - 1.0) >= share_renorm_tol) {
      fail(ErrorCode::SharesNotUnit,
           "shares of alternative " + std::to_string(i) + " sum to " +
               std::to_string(s));
    }
  }
  for (auto& nest : model.nests_) {
    nest.log_share.resize(nest.alt.size());
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      nest.share[k] /= row_sum[static_cast<std::size_t>(nest.alt[k])];
      nest.log_share[k] = std::log(nest.share[k]);
    }
  }
  return model;
}

GnlModel make_ml(int n, double mu) {
  GnlSpec spec;
  spec.n = n;
  spec.mu = mu;
  NestSpec nest;
  nest.mu_ell = mu;
  for (int i = 0; i < n; ++i) nest.shares.emplace_back(i, 1.0);
  spec.nests.push_back(std::move(nest));
  return construct_model(spec);
}

GnlModel make_nl(const std::vector<std::vector<int>>& nests,
                 const std::vector<double>& mu_ells) {
  if (nests.size() != mu_ells.size()) {
    fail(ErrorCode::DimensionMismatch, "one scale per nest is required");
  }
  int n = 0;
  for (const auto& members : nests) {
    for (int i : members) n = std::max(n, i + 1);
  }
  GnlSpec spec;
  spec.n = n;
  spec.mu = 1.0;
  for (std::size_t ell = 0; ell < nests.size(); ++ell) {
    NestSpec nest;
    nest.mu_ell = mu_ells[ell];
    for (int i : nests[ell]) nest.shares.emplace_back(i, 1.0);
    spec.nests.push_back(std::move(nest));
  }
  return construct_model(spec);
}

GnlModel make_ordered_gev(int n, int m, const std::vector<double>& shares,
                          const std::vector<double>& mu_ells) {
  if (n < 1 || m < 0) fail(ErrorCode::BadCount, "need n >= 1 and m >= 0");
  if (shares.size() != static_cast<std::size_t>(m + 1)) {
    fail(ErrorCode::DimensionMismatch, "need m+1 share weights");
  }
  if (mu_ells.size() != static_cast<std::size_t>(n + m)) {
    fail(ErrorCode::DimensionMismatch, "need n+m nest scales");
  }
  GnlSpec spec;
  spec.n = n;
  spec.mu = 1.0;
  // Nest ell (0-based) holds alternatives i with ell-m <= i <= ell.
  for (int ell = 0; ell < n + m; ++ell) {
    NestSpec nest;
    nest.mu_ell = mu_ells[static_cast<std::size_t>(ell)];
    for (int i = std::max(0, ell - m); i <= std::min(n - 1, ell); ++i) {
      nest.shares.emplace_back(i, shares[static_cast<std::size_t>(ell - i)]);
    }
    spec.nests.push_back(std::move(nest));
  }
  return construct_model(spec);
}

GnlModel make_ordered_gev(int n, int m, const std::vector<double>& shares,
                          double mu_ell) {
  return make_ordered_gev(n, m, shares,
                          std::vector<double>(static_cast<std::size_t>(n + m), mu_ell));
}

GnlModel make_pcl(int n, const std::vector<double>& mu_pairs) {
  if (n < 2) fail(ErrorCode::BadCount, "paired combinatorial logit needs n >= 2");
  const std::size_t num_pairs = static_cast<std::size_t>(n) * (n - 1);
  if (mu_pairs.size() != num_pairs) {
    fail(ErrorCode::DimensionMismatch, "need one scale per ordered pair");
  }
  const double share = 1.0 / (2.0 * (n - 1));
  GnlSpec spec;
  spec.n = n;
  spec.mu = 1.0;
  std::size_t ell = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      NestSpec nest;
      nest.mu_ell = mu_pairs[ell++];
      nest.shares.emplace_back(std::min(i, j), share);
      nest.shares.emplace_back(std::max(i, j), share);
      spec.nests.push_back(std::move(nest));
    }
  }
  return construct_model(spec);
}

GnlModel make_pcl(int n, double mu_pair) {
  const std::size_t num_pairs = n < 2 ? 0 : static_cast<std::size_t>(n) * (n - 1);
  return make_pcl(n, std::vector<double>(num_pairs, mu_pair));
}

GnlModel make_pod_gev(const std::vector<PodDimension>& dimensions) {
  if (dimensions.empty()) fail(ErrorCode::InvalidArgument, "need at least one dimension");
  int n = 0;
  for (const auto& dim : dimensions) {
    for (const auto& members : dim.nests) {
      for (int i : members) n = std::max(n, i + 1);
    }
  }
  GnlSpec spec;
  spec.n = n;
  spec.mu = 1.0;
  for (const auto& dim : dimensions) {
    for (const auto& members : dim.nests) {
      NestSpec nest;
      nest.mu_ell = dim.mu_d;
      for (int i : members) nest.shares.emplace_back(i, dim.sigma_d);
      spec.nests.push_back(std::move(nest));
    }
  }
  return construct_model(spec);
}

double generating_function(const GnlModel& model, std::span<const double> x) {
  check_dimension(model, x, "input");
  std::vector<double> log_x(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) {
      fail(ErrorCode::NonPositiveInput,
           "entry " + std::to_string(i) + " must be strictly positive");
    }
    log_x[i] = std::log(x[i]);
  }
  double g = 0.0;
  std::vector<double> scaled;
  for (const auto& nest : model.nests()) {
    scaled.resize(nest.alt.size());
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      scaled[k] = (log_x[static_cast<std::size_t>(nest.alt[k])] + nest.log_share[k]) / nest.mu_ell;
    }
    double m = scaled[0];
    for (double v : scaled) m = std::max(m, v);
    double s = 0.0;
    for (double v : scaled) s += std::exp(v - m);
    g += std::exp((nest.mu_ell / model.mu()) * (m + std::log(s)));
  }
  return g;
}

double surplus(const GnlModel& model, std::span<const double> u) {
  check_dimension(model, u, "utilities");
  require_finite(u, "utilities");
  return evaluate(model, u).surplus;
}

SimplexPoint choice_probabilities(const GnlModel& model,
                                  std::span<const double> u) {
  check_dimension(model, u, "utilities");
  require_finite(u, "utilities");
  return SimplexPoint(evaluate(model, u).prob);
}

NestProbabilities nest_probabilities(const GnlModel& model,
                                     std::span<const double> u) {
  check_dimension(model, u, "utilities");
  require_finite(u, "utilities");
  Eval ev = evaluate(model, u);
  NestProbabilities out;
  out.nest_prob = std::move(ev.nest_prob);
  out.conditional.reserve(model.num_nests());
  for (std::size_t ell = 0; ell < model.num_nests(); ++ell) {
    std::vector<double> full(static_cast<std::size_t>(model.num_alternatives()), 0.0);
    const auto& nest = model.nest(ell);
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      full[static_cast<std::size_t>(nest.alt[k])] = ev.cond[ell][k];
    }
    out.conditional.emplace_back(std::move(full));
  }
  return out;
}

double convexity_parameter(const GnlModel& model) {
  const double min_mu = model.min_nest_scale();
  if (min_mu == model.mu()) return model.mu();  // 1/(2/mu - 1/mu) = mu
  return 1.0 / (2.0 / min_mu - 1.0 / model.mu());
}

double convexity_parameter_iid(const IidShockSpec& spec) {
  if (spec.n < 2) {
    fail(ErrorCode::BadCount, "IID convexity parameter needs n >= 2");
  }
  if (!(spec.density_mode_value > 0.0) || !std::isfinite(spec.density_mode_value)) {
    fail(ErrorCode::InvalidArgument, "density mode value must be positive and finite");
  }
  return 1.0 / (2.0 * spec.n * (spec.n - 1) * spec.density_mode_value);
}

std::vector<double> expected_shock_means(const GnlModel& model) {
  const std::size_t n = static_cast<std::size_t>(model.num_alternatives());
  // ln sum_ell exp(ln sigma_il / mu) per alternative, shifted for stability.
  std::vector<std::vector<double>> terms(n);
  for (const auto& nest : model.nests()) {
    for (std::size_t k = 0; k < nest.alt.size(); ++k) {
      terms[static_cast<std::size_t>(nest.alt[k])].push_back(nest.log_share[k] / model.mu());
    }
  }
  std::vector<double> means(n);
  for (std::size_t i = 0; i < n; ++i) {
    means[i] = model.mu() * euler_gamma + model.mu() * log_sum_exp(terms[i]);
  }
  return means;
}

}  // namespace dcp
