#pragma once

#include <span>
#include <vector>

#include "dcp/gnl_model.hpp"
#include "dcp/simplex.hpp"

namespace dcp {

/// Consumption problem data: quality matrix Q (n qualities by m goods),
/// positive prices, a positive budget and positive quality standards.
/// Construction validates the data and requires that some feasible demand
/// yields positive utility (single-good screen first, then a small exact
/// linear-program solve).
class LancasterInstance {
 public:
  LancasterInstance(std::vector<std::vector<double>> quality,
                    std::vector<double> prices, double budget,
                    std::vector<double> standards);

  int num_qualities() const noexcept { return n_; }  // rows of Q
  int num_goods() const noexcept { return m_; }      // columns of Q
  double quality(int i, int j) const noexcept {
    return q_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
              static_cast<std::size_t>(j)];
  }
  const std::vector<double>& prices() const noexcept { return pi_; }
  double budget() const noexcept { return w_; }
  const std::vector<double>& standards() const noexcept { return sigma_; }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<double> q_;  // row-major
  std::vector<double> pi_;
  double w_ = 0.0;
  std::vector<double> sigma_;
};

/// Leontieff utility U(x) = min_i (Qx)_i / sigma_i for demand x >= 0.
double primal_utility(const LancasterInstance& inst, std::span<const double> x);

/// Dual objective Phi(lambda) = w max_j (Q^T lambda)_j / pi_j for internal
/// prices lambda >= 0 with <sigma, lambda> = 1 (within 1e-8).
double dual_price(const LancasterInstance& inst, std::span<const double> lambda);

/// One oracle step at p: internal prices lambda = p/sigma, active goods with
/// the best quality/price ratio (relative tie tolerance 1e-12), a uniform
/// sharing vector over them, the budget-tight demand, and the subgradient
/// Q x / sigma.
struct OracleStep {
  std::vector<double> grad;     // length n
  std::vector<double> demand;   // x, length m, <pi,x> = w
  std::vector<double> sharing;  // y, length m, uniform on the active set
  std::vector<int> active;      // J(lambda)
};
OracleStep consumption_oracle(const LancasterInstance& inst,
                              const SimplexPoint& p);

/// Constants of the duality-gap envelope (D + M^2/beta)/sqrt(k+1).
/// M = w max |q_ij| / (sigma_i pi_j). D is mu ln n for multinomial logit
/// (exact moments), the vertex maximum of the closed-form conjugate for
/// nested logit, and otherwise falls back to the multinomial-logit value
/// with `d_certified` cleared.
struct GapCertificate {
  double m;
  double d;
  double beta;
  double bound;
  bool d_certified;
};
GapCertificate gap_certificate(const LancasterInstance& inst,
                               const GnlModel& model, long long k);

struct CycleRecord {
  long long k = 0;
  std::vector<double> sharing;      // y_k
  std::vector<double> demand;       // x_k
  std::vector<double> prices;       // lambda_k
  std::vector<double> p;            // p_k
  std::vector<double> demand_avg;   // xbar_k
  std::vector<double> prices_avg;   // lambdabar_k
  double utility_avg = 0.0;         // U(xbar_k)
  double phi_avg = 0.0;             // Phi(lambdabar_k)
  double gap = 0.0;                 // phi_avg - utility_avg
  double bound = 0.0;
};

struct CycleTrace {
  std::vector<CycleRecord> records;
  GapCertificate certificate;  // constants used for the bound column
};

/// Runs the consumption cycle for `iters` steps of dual averaging with the
/// model's prox-function, recording demands, internal prices, running
/// averages, and the realized and bounded duality gaps.
CycleTrace run_cycle(const LancasterInstance& inst, const GnlModel& model,
                     long long iters);

/// Exact optimum of the consumption problem by a small dense two-phase
/// simplex solve; also used internally as the feasibility fallback.
struct ReferenceSolution {
  double value;
  std::vector<double> demand;
};
ReferenceSolution reference_optimum(const LancasterInstance& inst);

}  // namespace dcp
