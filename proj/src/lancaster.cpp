#include "dcp/lancaster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dcp/conjugate.hpp"
#include "dcp/dual_averaging.hpp"
#include "dcp/errors.hpp"

namespace dcp {

namespace {

constexpr double tie_rel_tol = 1e-12;

// Dense two-phase primal simplex for  max c'y  s.t.  Ay = b, y >= 0,
// with b >= 0. Bland's rule, so the degenerate rows cannot cycle.
// Sized for the tiny programs of this module.
struct LinearProgram {
  std::size_t rows, cols;
  std::vector<double> a;  // row-major rows x cols
  std::vector<double> b;
  std::vector<double> c;

  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct LpSolution {
  bool feasible;
  double value;
  std::vector<double> y;
};

LpSolution simplex_solve(LinearProgram lp) {
  const std::size_t rows = lp.rows;
  const std::size_t cols = lp.cols;
  const std::size_t wide = cols + rows;  // original + artificial columns
  constexpr double tol = 1e-11;

  // Tableau over [original | artificial] columns, artificials basic.
  std::vector<double> t(rows * wide, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return t[i * wide + j]; };
  std::vector<double> rhs = lp.b;
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) at(i, j) = lp.at(i, j);
    at(i, cols + i) = 1.0;
    basis[i] = cols + i;
  }

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const double pv = at(pr, pc);
    for (std::size_t j = 0; j < wide; ++j) at(pr, j) /= pv;
    rhs[pr] /= pv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == pr) continue;
      const double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < wide; ++j) at(i, j) -= f * at(pr, j);
      rhs[i] -= f * rhs[pr];
    }
    basis[pr] = pc;
  };

  // Maximizes c_full over the current tableau; Bland's rule throughout.
  auto run = [&](const std::vector<double>& c_full, std::size_t usable_cols) {
    std::vector<double> dual(rows);
    for (long long guard = 0; guard < 100000; ++guard) {
      for (std::size_t i = 0; i < rows; ++i) dual[i] = c_full[basis[i]];
      std::size_t enter = wide;
      for (std::size_t j = 0; j < usable_cols; ++j) {
        double reduced = c_full[j];
        for (std::size_t i = 0; i < rows; ++i) reduced -= dual[i] * at(i, j);
        if (reduced > tol) {
          enter = j;
          break;
        }
      }
      if (enter == wide) return true;  // optimal
      std::size_t leave = rows;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        if (at(i, enter) > tol) {
          const double ratio = rhs[i] / at(i, enter);
          if (leave == rows || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == rows) return false;  // unbounded
      pivot(leave, enter);
    }
    fail(ErrorCode::NoConvergence, "simplex iteration cap hit");
  };

  // Phase 1: minimize the artificial mass.
  std::vector<double> phase1(wide, 0.0);
  for (std::size_t i = 0; i < rows; ++i) phase1[cols + i] = -1.0;
  run(phase1, wide);
  double infeas = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= cols) infeas += rhs[i];
  }
  if (infeas > 1e-9) return LpSolution{false, 0.0, {}};

  // Drive lingering artificials out of the (degenerate) basis when possible.
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      if (std::abs(at(i, j)) > tol) {
        pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 over the original columns only.
  std::vector<double> phase2(wide, 0.0);
  for (std::size_t j = 0; j < cols; ++j) phase2[j] = lp.c[j];
  if (!run(phase2, cols)) return LpSolution{false, 0.0, {}};  // unbounded

  std::vector<double> y(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) y[basis[i]] = rhs[i];
  }
  double value = 0.0;
  for (std::size_t j = 0; j < cols; ++j) value += lp.c[j] * y[j];
  return LpSolution{true, value, std::move(y)};
}

// max t  s.t.  Qx >= t sigma, <pi,x> = w, x >= 0, with t split into
// t+ - t- so the whole program is in standard form.
LpSolution solve_consumption_lp(int n, int m,
                                const std::vector<double>& q_flat,
                                const std::vector<double>& pi, double w,
                                const std::vector<double>& sigma) {
  const std::size_t un = static_cast<std::size_t>(n);
  const std::size_t um = static_cast<std::size_t>(m);
  LinearProgram lp;
  lp.rows = un + 1;
  lp.cols = um + 2 + un;  // x, t+, t-, surplus per quality row
  lp.a.assign(lp.rows * lp.cols, 0.0);
  lp.b.assign(lp.rows, 0.0);
  lp.c.assign(lp.cols, 0.0);

  // Quality rows written as -Qx + t sigma + surplus = 0 so b stays at 0.
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = 0; j < um; ++j) lp.at(i, j) = -q_flat[i * um + j];
    lp.at(i, um) = sigma[i];
    lp.at(i, um + 1) = -sigma[i];
    lp.at(i, um + 2 + i) = 1.0;
  }
  for (std::size_t j = 0; j < um; ++j) lp.at(un, j) = pi[j];
  lp.b[un] = w;
  lp.c[um] = 1.0;
  lp.c[um + 1] = -1.0;
  return simplex_solve(std::move(lp));
}

}  // namespace

LancasterInstance::LancasterInstance(std::vector<std::vector<double>> quality_rows,
                                     std::vector<double> prices, double budget,
                                     std::vector<double> standards)
    : pi_(std::move(prices)), w_(budget), sigma_(std::move(standards)) {
  if (quality_rows.empty() || quality_rows[0].empty()) {
    fail(ErrorCode::InvalidArgument, "quality matrix must be nonempty");
  }
  n_ = static_cast<int>(quality_rows.size());
  m_ = static_cast<int>(quality_rows[0].size());
  q_.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(m_));
  for (const auto& row : quality_rows) {
    if (row.size() != static_cast<std::size_t>(m_)) {
      fail(ErrorCode::InvalidArgument, "quality matrix rows have unequal lengths");
    }
    for (double v : row) {
      if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "quality entry is not finite");
      q_.push_back(v);
    }
  }
  if (pi_.size() != static_cast<std::size_t>(m_)) {
    fail(ErrorCode::DimensionMismatch, "need one price per good");
  }
  if (sigma_.size() != static_cast<std::size_t>(n_)) {
    fail(ErrorCode::DimensionMismatch, "need one standard per quality");
  }
  for (double v : pi_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument, "prices must be strictly positive");
    }
  }
  for (double v : sigma_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument, "quality standards must be strictly positive");
    }
  }
  if (!(w_ > 0.0) || !std::isfinite(w_)) {
    fail(ErrorCode::InvalidArgument, "budget must be strictly positive");
  }

  // Positive-utility screen on single-good demands, with an exact solve as
  // fallback before rejecting.
  double best_single = 0.0;
  for (int j = 0; j < m_; ++j) {
    double u = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
      u = std::min(u, quality(i, j) * (w_ / pi_[static_cast<std::size_t>(j)]) /
                          sigma_[static_cast<std::size_t>(i)]);
    }
    best_single = std::max(best_single, u);
  }
  if (!(best_single > 0.0)) {
    const LpSolution ref = solve_consumption_lp(n_, m_, q_, pi_, w_, sigma_);
    if (!ref.feasible || !(ref.value > 1e-12)) {
      fail(ErrorCode::InfeasibleInstance,
           "no feasible demand delivers positive utility");
    }
  }
}

double primal_utility(const LancasterInstance& inst, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(inst.num_goods())) {
    fail(ErrorCode::DimensionMismatch, "demand length does not match the number of goods");
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= 0.0)) {
      fail(ErrorCode::NegativeDemand, "demand entry " + std::to_string(j) + " is negative");
    }
  }
  double u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < inst.num_qualities(); ++i) {
    double z = 0.0;
    for (int j = 0; j < inst.num_goods(); ++j) {
      z += inst.quality(i, j) * x[static_cast<std::size_t>(j)];
    }
    u = std::min(u, z / inst.standards()[static_cast<std::size_t>(i)]);
  }
  return u;
}

double dual_price(const LancasterInstance& inst, std::span<const double> lambda) {
  if (lambda.size() != static_cast<std::size_t>(inst.num_qualities())) {
    fail(ErrorCode::DimensionMismatch, "price length does not match the number of qualities");
  }
  double mass = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] >= 0.0)) {
      fail(ErrorCode::InfeasiblePrices, "internal price " + std::to_string(i) + " is negative");
    }
    mass += inst.standards()[i] * lambda[i];
  }
  if (std::abs(mass - 1.0) > 1e-8) {
    fail(ErrorCode::InfeasiblePrices,
         "<sigma, lambda> = " + std::to_string(mass) + " differs from 1 beyond 1e-8");
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < inst.num_goods(); ++j) {
    double v = 0.0;
    for (int i = 0; i < inst.num_qualities(); ++i) {
      v += inst.quality(i, j) * lambda[static_cast<std::size_t>(i)];
    }
    best = std::max(best, v / inst.prices()[static_cast<std::size_t>(j)]);
  }
  return inst.budget() * best;
}

OracleStep consumption_oracle(const LancasterInstance& inst,
                              const SimplexPoint& p) {
  const int n = inst.num_qualities();
  const int m = inst.num_goods();
  if (p.size() != static_cast<std::size_t>(n)) {
    fail(ErrorCode::DimensionMismatch, "p length does not match the number of qualities");
  }

  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    lambda[static_cast<std::size_t>(i)] =
        p[static_cast<std::size_t>(i)] / inst.standards()[static_cast<std::size_t>(i)];
  }

  std::vector<double> ratio(static_cast<std::size_t>(m));
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      v += inst.quality(i, j) * lambda[static_cast<std::size_t>(i)];
    }
    ratio[static_cast<std::size_t>(j)] = v / inst.prices()[static_cast<std::size_t>(j)];
    best = std::max(best, ratio[static_cast<std::size_t>(j)]);
  }

  OracleStep step;
  const double cutoff = best - tie_rel_tol * std::abs(best);
  for (int j = 0; j < m; ++j) {
    if (ratio[static_cast<std::size_t>(j)] >= cutoff) step.active.push_back(j);
  }
  step.sharing.assign(static_cast<std::size_t>(m), 0.0);
  step.demand.assign(static_cast<std::size_t>(m), 0.0);
  const double share = 1.0 / static_cast<double>(step.active.size());
  for (int j : step.active) {
    step.sharing[static_cast<std::size_t>(j)] = share;
    step.demand[static_cast<std::size_t>(j)] =
        inst.budget() * share / inst.prices()[static_cast<std::size_t>(j)];
  }
  step.grad.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = 0.0;
    for (int j : step.active) {
      z += inst.quality(i, j) * step.demand[static_cast<std::size_t>(j)];
    }
    step.grad[static_cast<std::size_t>(i)] = z / inst.standards()[static_cast<std::size_t>(i)];
  }
  return step;
}

GapCertificate gap_certificate(const LancasterInstance& inst,
                               const GnlModel& model, long long k) {
  if (model.num_alternatives() != inst.num_qualities()) {
    fail(ErrorCode::DimensionMismatch,
         "model alternatives must match instance qualities");
  }
  GapCertificate cert{};
  cert.beta = convexity_parameter(model);

  double worst = 0.0;
  for (int i = 0; i < inst.num_qualities(); ++i) {
    for (int j = 0; j < inst.num_goods(); ++j) {
      worst = std::max(worst, std::abs(inst.quality(i, j)) /
                                  (inst.standards()[static_cast<std::size_t>(i)] *
                                   inst.prices()[static_cast<std::size_t>(j)]));
    }
  }
  cert.m = inst.budget() * worst;

  const std::size_t n = static_cast<std::size_t>(model.num_alternatives());
  if (model.is_ml()) {
    cert.d = model.mu() * std::log(static_cast<double>(n));
    cert.d_certified = true;
  } else if (model.is_nl()) {
    // max of d over the simplex is attained at a vertex of the closed form.
    const std::vector<double> zero(n, 0.0);
    const double conj_min = -surplus(model, zero);
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best = std::max(best, conjugate_nl(model, SimplexPoint::vertex(n, i)) - conj_min);
    }
    cert.d = best;
    cert.d_certified = true;
  } else {
    // No closed-form conjugate is known; fall back to the multinomial-logit
    // majorant and mark the certificate as uncertified.
    cert.d = model.mu() * std::log(static_cast<double>(n));
    cert.d_certified = false;
  }
  cert.bound = gap_bound(GapBoundInputs{cert.d, cert.m, cert.beta}, k);
  return cert;
}

CycleTrace run_cycle(const LancasterInstance& inst, const GnlModel& model,
                     long long iters) {
  if (model.num_alternatives() != inst.num_qualities()) {
    fail(ErrorCode::DimensionMismatch,
         "model alternatives must match instance qualities");
  }
  const std::size_t n = static_cast<std::size_t>(inst.num_qualities());
  const std::size_t m = static_cast<std::size_t>(inst.num_goods());

  const ProxFunction prox = make_prox_function(model);
  GapCertificate cert = gap_certificate(inst, model, 0);

  std::vector<OracleStep> steps;
  steps.reserve(static_cast<std::size_t>(iters));
  const SubgradientOracle oracle = [&](const SimplexPoint& p) {
    steps.push_back(consumption_oracle(inst, p));
    return steps.back().grad;
  };
  const DaState da = da_run(oracle, prox, iters, /*keep_history=*/true);

  CycleTrace trace;
  trace.certificate = cert;
  trace.records.resize(static_cast<std::size_t>(iters));

  std::vector<double> demand_sum(m, 0.0);
  std::vector<double> price_sum(n, 0.0);
  for (long long k = 0; k < iters; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    CycleRecord& rec = trace.records[uk];
    rec.k = k;
    rec.sharing = steps[uk].sharing;
    rec.demand = steps[uk].demand;
    rec.p = da.history_p[uk];
    rec.prices.resize(n);
    for (std::size_t i = 0; i < n; ++i) rec.prices[i] = rec.p[i] / inst.standards()[i];

    const double count = static_cast<double>(k) + 1.0;
    rec.demand_avg.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      demand_sum[j] += rec.demand[j];
      rec.demand_avg[j] = demand_sum[j] / count;
    }
    rec.prices_avg.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      price_sum[i] += rec.prices[i];
      rec.prices_avg[i] = price_sum[i] / count;
    }
    rec.utility_avg = primal_utility(inst, rec.demand_avg);
    rec.phi_avg = dual_price(inst, rec.prices_avg);
    rec.gap = rec.phi_avg - rec.utility_avg;
    rec.bound = gap_bound(GapBoundInputs{cert.d, cert.m, cert.beta}, k);
  }
  return trace;
}

ReferenceSolution reference_optimum(const LancasterInstance& inst) {
  std::vector<double> q_flat;
  q_flat.reserve(static_cast<std::size_t>(inst.num_qualities()) *
                 static_cast<std::size_t>(inst.num_goods()));
  for (int i = 0; i < inst.num_qualities(); ++i) {
    for (int j = 0; j < inst.num_goods(); ++j) q_flat.push_back(inst.quality(i, j));
  }
  const LpSolution sol =
      solve_consumption_lp(inst.num_qualities(), inst.num_goods(), q_flat,
                           inst.prices(), inst.budget(), inst.standards());
  if (!sol.feasible) {
    fail(ErrorCode::InfeasibleInstance, "reference solve found no feasible demand");
  }
  return ReferenceSolution{
      sol.value, std::vector<double>(sol.y.begin(),
                                     sol.y.begin() + inst.num_goods())};
}

}  // namespace dcp
