#include "dcp/self_check.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "dcp/conjugate.hpp"
#include "dcp/dual_averaging.hpp"
#include "dcp/gnl_model.hpp"
#include "dcp/hessian.hpp"
#include "dcp/lancaster.hpp"
#include "dcp/montecarlo.hpp"
#include "dcp/random.hpp"

namespace dcp {

namespace {

struct Checker {
  std::ostream* log;
  int failures = 0;

  void operator()(const std::string& group, bool ok, const std::string& detail = "") {
    if (!ok) ++failures;
    if (log) {
      *log << (ok ? "ok   " : "FAIL ") << group;
      if (!ok && !detail.empty()) *log << "  (" << detail << ")";
      *log << "\n";
    }
  }
};

GnlModel random_gnl(RandomStream& rng, int n, int num_nests) {
  GnlSpec spec;
  spec.n = n;
  spec.mu = rng.uniform(0.4, 1.0);
  std::vector<NestSpec> nests(static_cast<std::size_t>(num_nests));
  for (auto& nest : nests) nest.mu_ell = spec.mu * rng.uniform(0.4, 1.0);
  for (int i = 0; i < n; ++i) {
    // every alternative joins at least one nest
    const int home = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(num_nests)));
    std::vector<double> weight(static_cast<std::size_t>(num_nests), 0.0);
    double total = 0.0;
    for (int ell = 0; ell < num_nests; ++ell) {
      if (ell == home || rng.uniform01() < 0.5) {
        weight[static_cast<std::size_t>(ell)] = rng.uniform(0.2, 1.0);
        total += weight[static_cast<std::size_t>(ell)];
      }
    }
    for (int ell = 0; ell < num_nests; ++ell) {
      if (weight[static_cast<std::size_t>(ell)] > 0.0) {
        nests[static_cast<std::size_t>(ell)].shares.emplace_back(
            i, weight[static_cast<std::size_t>(ell)] / total);
      }
    }
  }
  spec.nests = std::move(nests);
  return construct_model(spec);
}

std::vector<double> random_utilities(RandomStream& rng, int n, double radius) {
  std::vector<double> u(static_cast<std::size_t>(n));
  for (double& v : u) v = rng.uniform(-radius, radius);
  return u;
}

bool surplus_identities(RandomStream& rng, Checker& check) {
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    const GnlModel model = random_gnl(rng, n, 1 + static_cast<int>(rng.uniform_index(3)));
    const std::vector<double> u = random_utilities(rng, n, 4.0);

    // homogeneity of G
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(rng.uniform(-2.0, 2.0));
    const double lam = rng.uniform(0.1, 10.0);
    std::vector<double> lx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) lx[i] = lam * x[i];
    const double g = generating_function(model, x);
    const double gl = generating_function(model, lx);
    ok = ok && std::abs(gl - std::pow(lam, 1.0 / model.mu()) * g) <= 1e-10 * std::abs(gl);

    // translation and monotonicity of E
    const double c = rng.uniform(-3.0, 3.0);
    std::vector<double> shifted(u), dominated(u);
    for (double& v : shifted) v += c;
    for (double& v : dominated) v -= rng.uniform(0.0, 1.0);
    ok = ok && std::abs(surplus(model, shifted) - surplus(model, u) - c) <= 1e-10;
    ok = ok && surplus(model, u) >= surplus(model, dominated) - 1e-12;

    // gradient against central differences
    const SimplexPoint p = choice_probabilities(model, u);
    std::vector<double> up(u), dn(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double h = 1e-6;
      up[i] += h;
      dn[i] -= h;
      const double fd = (surplus(model, up) - surplus(model, dn)) / (2.0 * h);
      ok = ok && std::abs(fd - p[i]) <= 1e-5;
      up[i] = u[i];
      dn[i] = u[i];
    }

    // two-stage consistency
    const NestProbabilities stages = nest_probabilities(model, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      double mix = 0.0;
      for (std::size_t ell = 0; ell < stages.nest_prob.size(); ++ell) {
        mix += stages.nest_prob[ell] * stages.conditional[ell][i];
      }
      ok = ok && std::abs(mix - p[i]) <= 1e-12;
    }
  }
  check("surplus and probability identities", ok);
  return ok;
}

bool conjugate_relations(RandomStream& rng, Checker& check) {
  bool ok = true;
  const GnlModel ml = make_ml(3, 0.8);
  const GnlModel nl = make_nl({{0, 1}, {2}}, {0.5, 1.0});
  for (const GnlModel* model : {&ml, &nl}) {
    const ProxFunction prox = make_prox_function(*model);
    ok = ok && std::abs(prox_value(prox, prox.prox_center)) <= 1e-10;
    for (int trial = 0; trial < 25; ++trial) {
      const std::vector<double> u = random_utilities(rng, model->num_alternatives(), 1.2);
      const SimplexPoint p = choice_probabilities(*model, u);
      const double closed = conjugate_value(*model, p);
      const ConjugateResult numeric = conjugate_numeric(*model, p);
      ok = ok && std::abs(closed - numeric.value) <= 1e-8;
      // Fenchel-Young at the maximizer
      double inner = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) inner += p[i] * u[i];
      ok = ok && std::abs(surplus(*model, u) + closed - inner) <= 1e-8;
    }
  }
  // the entropic reduction: ML prox map is a softmax
  const GnlModel unit = make_ml(4, 1.0);
  const ProxFunction prox = make_prox_function(unit);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> s = random_utilities(rng, 4, 2.0);
    const SimplexPoint mapped = prox_map(prox, s, 1.0);
    double mx = -s[0];
    for (double v : s) mx = std::max(mx, -v);
    double total = 0.0;
    std::vector<double> soft(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      soft[i] = std::exp(-s[i] - mx);
      total += soft[i];
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      ok = ok && std::abs(mapped[i] - soft[i] / total) <= 1e-14;
    }
  }
  check("conjugate and prox relations", ok);
  return ok;
}

bool hessian_certificates(RandomStream& rng, Checker& check) {
  bool ok = true;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    const GnlModel model = random_gnl(rng, n, 1 + static_cast<int>(rng.uniform_index(3)));
    const std::vector<double> u = random_utilities(rng, n, 3.0);
    const HessianDecomposition hess = hessian_surplus(model, u);

    // exact norm against the sign-vertex brute force
    const std::size_t dim = hess.full.dim();
    double brute = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << dim); ++mask) {
      double norm1 = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
          row += hess.full(i, j) * ((mask >> j) & 1u ? 1.0 : -1.0);
        }
        norm1 += std::abs(row);
      }
      brute = std::max(brute, norm1);
    }
    const NormResult exact = norm_inf1_exact(hess.full);
    ok = ok && std::abs(exact.value - brute) <= 1e-12;
    ok = ok && exact.value <= norm_inf1_trace_bound(hess.full) + 1e-12;
    ok = ok && exact.value <= 1.0 / convexity_parameter(model) + 1e-8;
    ok = ok && norm_inf1_exact(hess.r).value <= 1.0 + 1e-12;
  }
  const SmoothnessCertificate cert = smoothness_certificate(make_ml(2, 1.0), 50, 7);
  ok = ok && cert.pass && std::abs(cert.max_observed - 1.0) <= 1e-10;
  check("hessian and norm certificates", ok);
  return ok;
}

bool averaging_envelopes(Checker& check) {
  bool ok = true;
  const GnlModel model = make_ml(3, 0.2);
  const ProxFunction prox = make_prox_function(model);
  const std::vector<double> cost = {0.0, 0.6, 1.0};
  const SubgradientOracle oracle = [&](const SimplexPoint&) { return cost; };
  const DaState state = da_run(oracle, prox, 400, /*keep_history=*/true);
  const GapBoundInputs inputs{model.mu() * std::log(3.0), 1.0,
                              convexity_parameter(model)};
  for (long long k = 0; k < state.k; k += 7) {
    ok = ok && empirical_gap(state, k) <= gap_bound(inputs, k) + 1e-9;
  }
  ok = ok && state.p[0] >= 0.99;  // concentrates on the cheapest vertex
  check("dual averaging gap envelope", ok);
  return ok;
}

bool consumption_cycle(Checker& check) {
  bool ok = true;
  const LancasterInstance inst({{2.0, 0.0}, {0.0, 1.0}}, {1.0, 1.0}, 1.0, {1.0, 1.0});
  const GnlModel model = make_ml(2, 0.05);
  const CycleTrace trace = run_cycle(inst, model, 2000);
  for (const CycleRecord& rec : trace.records) {
    double spend = 0.0;
    for (std::size_t j = 0; j < rec.demand.size(); ++j) {
      spend += inst.prices()[j] * rec.demand[j];
    }
    ok = ok && std::abs(spend - inst.budget()) <= 1e-9;
    double mass = 0.0;
    for (std::size_t i = 0; i < rec.prices.size(); ++i) {
      mass += inst.standards()[i] * rec.prices[i];
    }
    ok = ok && std::abs(mass - 1.0) <= 1e-10;
    ok = ok && rec.gap >= -1e-9 && rec.gap <= rec.bound + 1e-9;
  }
  ok = ok && std::abs(trace.records.back().utility_avg - 2.0 / 3.0) <= 0.05;
  ok = ok && std::abs(reference_optimum(inst).value - 2.0 / 3.0) <= 1e-9;
  check("consumption cycle invariants", ok);
  return ok;
}

bool monte_carlo(Checker& check) {
  bool ok = true;
  const GnlModel ml = make_ml(2, 1.0);
  const std::vector<double> u = {std::log(2.0), 0.0};
  const McEstimate est = mc_surplus_ml(ml, u, 200000, 11);
  ok = ok && std::abs(est.mean - surplus(ml, u)) <= 4.0 * est.std_error;
  const SimplexPoint freq = mc_choice_frequencies(ml, u, 200000, 12);
  const SimplexPoint p = choice_probabilities(ml, u);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double se = std::sqrt(p[i] * (1.0 - p[i]) / 200000.0);
    ok = ok && std::abs(freq[i] - p[i]) <= 4.0 * se;
  }
  check("Monte Carlo agreement", ok);
  return ok;
}

}  // namespace

bool run_self_check(std::ostream* log) {
  Checker check{log};
  RandomStream rng(20240917);
  surplus_identities(rng, check);
  conjugate_relations(rng, check);
  hessian_certificates(rng, check);
  averaging_envelopes(check);
  consumption_cycle(check);
  monte_carlo(check);
  if (log) {
    *log << (check.failures == 0 ? "all checks passed"
                                 : std::to_string(check.failures) + " check group(s) failed")
         << "\n";
  }
  return check.failures == 0;
}

}  // namespace dcp
