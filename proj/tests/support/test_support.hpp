// Shared generators and independent reference oracles for the test suites.
// Everything here is deliberately separate from the library's own
// computational paths: finite differences for derivatives, sign-vertex
// enumeration for norms, Euclidean projected gradient for prox mappings.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "dcp/conjugate.hpp"
#include "dcp/gnl_model.hpp"
#include "dcp/hessian.hpp"
#include "dcp/random.hpp"
#include "dcp/simplex.hpp"

namespace dcptest {

inline std::vector<double> random_utilities(dcp::RandomStream& rng, int n,
                                            double radius) {
  std::vector<double> u(static_cast<std::size_t>(n));
  for (double& v : u) v = rng.uniform(-radius, radius);
  return u;
}

// Valid random GNL model: top scale in [0.4, 1], nest scales a fraction of
// it, every alternative covered, rows normalized exactly at construction.
inline dcp::GnlModel random_gnl(dcp::RandomStream& rng, int n, int num_nests) {
  dcp::GnlSpec spec;
  spec.n = n;
  spec.mu = rng.uniform(0.4, 1.0);
  std::vector<dcp::NestSpec> nests(static_cast<std::size_t>(num_nests));
  for (auto& nest : nests) nest.mu_ell = spec.mu * rng.uniform(0.35, 1.0);
  for (int i = 0; i < n; ++i) {
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
  return dcp::construct_model(spec);
}

// Random GNL kept away from extreme nest scales, for tests that run the
// numeric conjugate: near-boundary gradients of models with tiny mu_ell make
// the fixed-step ascent exceed its iteration cap by design.
inline dcp::GnlModel tame_gnl(dcp::RandomStream& rng, int n, int num_nests) {
  dcp::GnlSpec spec;
  spec.n = n;
  spec.mu = rng.uniform(0.7, 1.0);
  std::vector<dcp::NestSpec> nests(static_cast<std::size_t>(num_nests));
  for (auto& nest : nests) nest.mu_ell = spec.mu * rng.uniform(0.6, 1.0);
  for (int i = 0; i < n; ++i) {
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
  return dcp::construct_model(spec);
}

// Random disjoint-nest partition with unit shares and mu = 1.
inline dcp::GnlModel random_nl(dcp::RandomStream& rng, int n) {
  const int num_nests = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
  std::vector<std::vector<int>> nests(static_cast<std::size_t>(num_nests));
  for (int i = 0; i < n; ++i) {
    const auto ell = rng.uniform_index(static_cast<std::uint64_t>(num_nests));
    nests[static_cast<std::size_t>(ell)].push_back(i);
  }
  std::vector<std::vector<int>> filled;
  std::vector<double> mu_ells;
  for (auto& members : nests) {
    if (members.empty()) continue;
    filled.push_back(std::move(members));
    mu_ells.push_back(rng.uniform(0.4, 1.0));
  }
  return dcp::make_nl(filled, mu_ells);
}

// Interior simplex point: exponential spacings mixed with a uniform floor,
// so the minimum entry stays comfortably above the 1e-6 interior threshold.
inline dcp::SimplexPoint interior_point(dcp::RandomStream& rng, int n) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(rng.uniform01());
    total += v;
  }
  for (double& v : p) {
    v = 0.99 * (v / total) + 0.01 / static_cast<double>(n);
  }
  double mass = 0.0;
  for (double v : p) mass += v;
  for (double& v : p) v /= mass;
  return dcp::SimplexPoint(std::move(p));
}

// Reference softmax with max shift, independent of the library's nest path.
inline std::vector<double> softmax(const std::vector<double>& z) {
  double m = z[0];
  for (double v : z) m = std::max(m, v);
  double total = 0.0;
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - m);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

// Central finite differences of the surplus.
inline std::vector<double> fd_gradient(const dcp::GnlModel& model,
                                       const std::vector<double>& u,
                                       double h = 1e-6) {
  std::vector<double> grad(u.size());
  std::vector<double> up(u), dn(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    up[i] = u[i] + h;
    dn[i] = u[i] - h;
    grad[i] = (dcp::surplus(model, up) - dcp::surplus(model, dn)) / (2.0 * h);
    up[i] = u[i];
    dn[i] = u[i];
  }
  return grad;
}

// Central finite differences of the choice probabilities.
inline dcp::SquareMatrix fd_hessian(const dcp::GnlModel& model,
                                    const std::vector<double>& u,
                                    double h = 1e-5) {
  const std::size_t n = u.size();
  dcp::SquareMatrix hess(n);
  std::vector<double> up(u), dn(u);
  for (std::size_t j = 0; j < n; ++j) {
    up[j] = u[j] + h;
    dn[j] = u[j] - h;
    const dcp::SimplexPoint pu = dcp::choice_probabilities(model, up);
    const dcp::SimplexPoint pd = dcp::choice_probabilities(model, dn);
    for (std::size_t i = 0; i < n; ++i) {
      hess(i, j) = (pu[i] - pd[i]) / (2.0 * h);
    }
    up[j] = u[j];
    dn[j] = u[j];
  }
  return hess;
}

// Exact infinity-to-one norm by enumerating all 2^n sign vertices.
inline double brute_force_norm_inf1(const dcp::SquareMatrix& a) {
  const std::size_t n = a.dim();
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double norm1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += a(i, j) * ((mask >> j) & 1u ? 1.0 : -1.0);
      }
      norm1 += std::abs(row);
    }
    best = std::max(best, norm1);
  }
  return best;
}

// Random member of the matrix class: nonpositive off-diagonal entries,
// diagonal set to cancel each row.
inline dcp::SquareMatrix random_class_a_matrix(dcp::RandomStream& rng,
                                               std::size_t n) {
  dcp::SquareMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rng.uniform01() < 0.3 ? 0.0 : -rng.uniform(0.0, 1.0);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) off += a(i, j);
    }
    a(i, i) = -off;
  }
  return a;
}

inline dcp::SimplexPoint random_simplex_point(dcp::RandomStream& rng, int n) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& v : p) {
    v = -std::log(rng.uniform01());
    total += v;
  }
  for (double& v : p) v /= total;
  return dcp::SimplexPoint(std::move(p));
}

// Euclidean projection onto the simplex (sort-based).
inline std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double running = 0.0;
  double tau = 0.0;
  std::size_t rho = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    running += sorted[i];
    const double candidate = (running - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) {
      rho = i + 1;
      tau = candidate;
    }
  }
  (void)rho;
  for (double& x : v) x = std::max(x - tau, 0.0);
  return v;
}

// Reference minimizer of <s,p> + d(p)/t over the simplex by projected
// gradient with backtracking. Uses the closed-form conjugate gradient for
// ML and NL models, so it shares no code with prox_map.
inline std::vector<double> projected_gradient_prox(const dcp::GnlModel& model,
                                                   const std::vector<double>& s,
                                                   double t) {
  const std::size_t n = s.size();
  const double floor = 1e-12;

  auto conjugate_grad = [&](const std::vector<double>& p) {
    std::vector<double> g(n, 0.0);
    if (model.is_ml()) {
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = model.mu() * (std::log(std::max(p[i], floor)) + 1.0);
      }
      return g;
    }
    // nested logit closed form
    for (const auto& nest : model.nests()) {
      double mass = 0.0;
      for (int i : nest.alt) mass += p[static_cast<std::size_t>(i)];
      for (int i : nest.alt) {
        g[static_cast<std::size_t>(i)] =
            nest.mu_ell * (std::log(std::max(p[static_cast<std::size_t>(i)], floor)) + 1.0) +
            (1.0 - nest.mu_ell) * (std::log(std::max(mass, floor)) + 1.0);
      }
    }
    return g;
  };
  auto objective = [&](const std::vector<double>& p) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) f += s[i] * p[i];
    return f + dcp::conjugate_value(model, dcp::SimplexPoint(p)) / t;
  };

  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  double fp = objective(p);
  double step = 1.0;
  const double probe_step = 1e-4;
  for (int iter = 0; iter < 500000; ++iter) {
    const std::vector<double> grad_conj = conjugate_grad(p);
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = s[i] + grad_conj[i] / t;

    // fixed-step projected-gradient residual as the optimality measure
    std::vector<double> probe(n);
    for (std::size_t i = 0; i < n; ++i) probe[i] = p[i] - probe_step * grad[i];
    probe = project_to_simplex(std::move(probe));
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual = std::max(residual, std::abs(probe[i] - p[i]) / probe_step);
    }
    if (residual <= 1e-9) return p;

    bool moved = false;
    for (int back = 0; back < 80; ++back) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = p[i] - step * grad[i];
      trial = project_to_simplex(std::move(trial));
      const double ft = objective(trial);
      if (ft < fp) {
        p = std::move(trial);
        fp = ft;
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // descent stalled at evaluation noise; take the probe if it helps
      const double fprobe = objective(probe);
      if (fprobe < fp) {
        p = std::move(probe);
        fp = fprobe;
        step = probe_step;
      } else {
        break;
      }
    }
  }

  // Interior polish: damped Newton-like steps in the diagonal metric of the
  // conjugate Hessian, with the equality multiplier eliminated. The target
  // minimizer is strictly interior, so reopen any component the projection
  // zeroed and let the metric pull it to its true scale.
  {
    double mass = 0.0;
    for (double& v : p) {
      v = std::max(v, 1e-9);
      mass += v;
    }
    for (double& v : p) v /= mass;

    std::vector<double> metric(n), direction(n);
    for (int k = 0; k < 400; ++k) {
      const std::vector<double> grad_conj = conjugate_grad(p);
      if (model.is_ml()) {
        for (std::size_t i = 0; i < n; ++i) metric[i] = model.mu() / p[i];
      } else {
        for (const auto& nest : model.nests()) {
          double nest_mass = 0.0;
          for (int i : nest.alt) nest_mass += p[static_cast<std::size_t>(i)];
          for (int i : nest.alt) {
            metric[static_cast<std::size_t>(i)] =
                nest.mu_ell / p[static_cast<std::size_t>(i)] +
                (1.0 - nest.mu_ell) / nest_mass;
          }
        }
      }
      double weighted = 0.0, inverse = 0.0;
      std::vector<double> grad(n);
      for (std::size_t i = 0; i < n; ++i) {
        grad[i] = s[i] + grad_conj[i] / t;
        weighted += grad[i] / (metric[i] / t);
        inverse += 1.0 / (metric[i] / t);
      }
      const double multiplier = -weighted / inverse;
      double tau = 1.0;
      double largest = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        direction[i] = -(grad[i] + multiplier) / (metric[i] / t);
        if (direction[i] < 0.0) tau = std::min(tau, -0.9 * p[i] / direction[i]);
        largest = std::max(largest, std::abs(direction[i]));
      }
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        p[i] += tau * direction[i];
        total += p[i];
      }
      for (double& v : p) v /= total;
      if (tau * largest < 1e-15) break;
    }
  }
  return p;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace dcptest
