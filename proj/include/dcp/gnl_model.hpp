#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dcp/simplex.hpp"

namespace dcp {

/// Euler's constant, pinned as a literal.
inline constexpr double euler_gamma = 0.5772156649015329;

/// One nest of a generalized nested logit model: its scale and the strictly
/// positive allocation shares of its member alternatives. An alternative
/// absent from `shares` has share zero and is not in the nest.
struct NestSpec {
  double mu_ell = 1.0;
  std::vector<std::pair<int, double>> shares;  // (alternative index, share)
};

/// Raw model description prior to validation.
struct GnlSpec {
  int n = 0;
  double mu = 1.0;
  std::vector<NestSpec> nests;
};

/// Validated generalized nested logit model. Immutable after construction;
/// every operation on it is a pure function and safe to call concurrently.
class GnlModel {
 public:
  struct Nest {
    double mu_ell;
    std::vector<int> alt;         // member alternatives, ascending
    std::vector<double> share;    // share[k] belongs to alt[k], > 0
    std::vector<double> log_share;
  };

  int num_alternatives() const noexcept { return n_; }
  double mu() const noexcept { return mu_; }
  std::size_t num_nests() const noexcept { return nests_.size(); }
  const Nest& nest(std::size_t ell) const noexcept { return nests_[ell]; }
  const std::vector<Nest>& nests() const noexcept { return nests_; }
  double min_nest_scale() const noexcept;

  /// Single nest containing every alternative with mu_1 = mu.
  bool is_ml() const noexcept;
  /// Mutually exclusive unit-share nests and mu = 1.
  bool is_nl() const noexcept;

 private:
  friend GnlModel construct_model(const GnlSpec& spec);
  GnlModel() = default;

  int n_ = 0;
  double mu_ = 1.0;
  std::vector<Nest> nests_;
};

/// Validates a raw description. Per-alternative share rows are renormalized
/// when they miss one by less than 1e-9 and rejected otherwise.
/// Throws NestScaleTooLarge, SharesNotUnit, OrphanAlternative, InvalidArgument.
GnlModel construct_model(const GnlSpec& spec);

/// Multinomial logit: one nest, unit shares, mu_1 = mu.
GnlModel make_ml(int n, double mu);

/// Nested logit: mutually exclusive unit-share nests, top scale mu = 1.
GnlModel make_nl(const std::vector<std::vector<int>>& nests,
                 const std::vector<double>& mu_ells);

/// Ordered GEV: n+m overlapping nests, nest ell holds alternatives
/// { i : ell-m <= i <= ell } (1-based in the construction, 0-based here).
/// `shares` has length m+1; shares[r] is the weight alternative i puts on
/// nest i+r. `mu_ells` has one entry per nest (n+m of them). mu = 1.
GnlModel make_ordered_gev(int n, int m, const std::vector<double>& shares,
                          const std::vector<double>& mu_ells);
GnlModel make_ordered_gev(int n, int m, const std::vector<double>& shares,
                          double mu_ell);

/// Paired combinatorial logit: one nest per ordered pair (i,j), i != j, in
/// lexicographic order; each nest holds {i,j} with share 1/(2(n-1)). mu = 1.
/// `mu_pairs` has one entry per nest (n(n-1) of them).
GnlModel make_pcl(int n, const std::vector<double>& mu_pairs);
GnlModel make_pcl(int n, double mu_pair);

/// One dimension of a principles-of-differentiation GEV: a weight, a common
/// nest scale, and a partition of all alternatives into disjoint nests.
struct PodDimension {
  double sigma_d = 1.0;
  double mu_d = 1.0;
  std::vector<std::vector<int>> nests;
};

/// Principles-of-differentiation GEV: per dimension d a partition into
/// disjoint nests, all with share sigma_d and scale mu_d; the sigma_d sum
/// to one over dimensions. mu = 1.
GnlModel make_pod_gev(const std::vector<PodDimension>& dimensions);

/// G(x) = sum_ell ( sum_i (sigma_il x_i)^(1/mu_ell) )^(mu_ell/mu).
/// Requires x > 0 componentwise (NonPositiveInput otherwise).
double generating_function(const GnlModel& model, std::span<const double> x);

/// Expected maximum utility E(u) = mu ln G(e^u) + mu gamma, evaluated with
/// per-nest max-shifted log-sum-exp so |u_i| <= 700 never overflows.
double surplus(const GnlModel& model, std::span<const double> u);

/// Gradient of the surplus: the choice probabilities, strictly positive and
/// summing to one. Computed in log space through the two-stage decomposition.
SimplexPoint choice_probabilities(const GnlModel& model,
                                  std::span<const double> u);

struct NestProbabilities {
  std::vector<double> nest_prob;          // q_ell, sums to one
  std::vector<SimplexPoint> conditional;  // p_{.|ell}, full length, zero off-nest
};

/// Two-stage decomposition: probability of each nest and the conditional
/// choice probabilities within it. sum_ell q_ell * cond_ell recovers
/// choice_probabilities.
NestProbabilities nest_probabilities(const GnlModel& model,
                                     std::span<const double> u);

/// Strong-convexity modulus of the conjugate surplus with respect to the
/// l1 norm: beta = 1 / (2/min_ell mu_ell - 1/mu). Returns mu exactly when
/// every nest scale equals mu (the expression simplifies algebraically).
double convexity_parameter(const GnlModel& model);

/// IID shocks with a known density value at the mode.
struct IidShockSpec {
  int n = 0;
  double density_mode_value = 0.0;  // f(zbar) > 0
};

/// beta = 1 / (2 n (n-1) f(zbar)) for IID shocks. Requires n >= 2 (BadCount).
double convexity_parameter_iid(const IidShockSpec& spec);

/// Mean of each marginal shock: the i-th marginal is Gumbel with scale mu
/// and location mu * ln sum_ell sigma_il^(1/mu), so the mean is that
/// location plus mu gamma. Equals lim_{t->inf} E(t e_i) - t.
std::vector<double> expected_shock_means(const GnlModel& model);

}  // namespace dcp
