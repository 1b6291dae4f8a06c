#include "dcprox.h"

#include <exception>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "dcp/conjugate.hpp"
#include "dcp/errors.hpp"
#include "dcp/gnl_model.hpp"
#include "dcp/hessian.hpp"
#include "dcp/lancaster.hpp"
#include "dcp/model_io.hpp"
#include "dcp/montecarlo.hpp"
#include "dcp/self_check.hpp"

struct dcp_model {
  dcp::GnlModel model;
  dcp::ProxFunction prox;
};

struct dcp_instance {
  dcp::LancasterInstance inst;
};

struct dcp_trace {
  dcp::CycleTrace trace;
};

namespace {

thread_local std::string g_last_error;

dcp_status status_of(const dcp::Error& e) {
  using dcp::ErrorCode;
  switch (e.code()) {
    case ErrorCode::ParseError:
      return DCP_ERR_PARSE;
    case ErrorCode::IoError:
      return DCP_ERR_IO;
    case ErrorCode::NoConvergence:
    case ErrorCode::BoundaryPoint:
    case ErrorCode::OracleFailure:
      return DCP_ERR_NUMERIC;
    case ErrorCode::InvalidArgument:
    case ErrorCode::BadCount:
    case ErrorCode::DimensionMismatch:
      return DCP_ERR_INVALID_ARGUMENT;
    default:
      return DCP_ERR_VALIDATION;
  }
}

dcp_status set_error(dcp_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
dcp_status guarded(Fn&& fn) {
  try {
    fn();
    return DCP_OK;
  } catch (const dcp::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DCP_ERR_INVALID_ARGUMENT;
  }
}

}  // namespace

extern "C" {

const char* dcp_status_name(dcp_status status) {
  switch (status) {
    case DCP_OK: return "ok";
    case DCP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case DCP_ERR_PARSE: return "parse error";
    case DCP_ERR_VALIDATION: return "validation error";
    case DCP_ERR_NUMERIC: return "numeric error";
    case DCP_ERR_IO: return "io error";
  }
  return "unknown";
}

const char* dcp_last_error(void) { return g_last_error.c_str(); }

dcp_status dcp_model_from_json(const char* json_text, dcp_model** out) {
  if (!json_text || !out) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    dcp::GnlModel model = dcp::parse_model_json(json_text, "model");
    dcp::ProxFunction prox = dcp::make_prox_function(model);
    *out = new dcp_model{std::move(model), std::move(prox)};
  });
}

dcp_status dcp_model_from_file(const char* path, dcp_model** out) {
  if (!path || !out) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    dcp::GnlModel model = dcp::load_model_file(path);
    dcp::ProxFunction prox = dcp::make_prox_function(model);
    *out = new dcp_model{std::move(model), std::move(prox)};
  });
}

void dcp_model_free(dcp_model* model) { delete model; }

int dcp_model_dim(const dcp_model* model) {
  return model ? model->model.num_alternatives() : 0;
}

int dcp_model_is_ml(const dcp_model* model) {
  return model && model->model.is_ml() ? 1 : 0;
}

dcp_status dcp_model_beta(const dcp_model* model, double* beta) {
  if (!model || !beta) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *beta = dcp::convexity_parameter(model->model); });
}

dcp_status dcp_surplus(const dcp_model* model, const double* u, double* value) {
  if (!model || !u || !value) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::span<const double> uu(u, static_cast<std::size_t>(dcp_model_dim(model)));
    *value = dcp::surplus(model->model, uu);
  });
}

dcp_status dcp_choice_probabilities(const dcp_model* model, const double* u,
                                    double* p) {
  if (!model || !u || !p) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::span<const double> uu(u, static_cast<std::size_t>(dcp_model_dim(model)));
    const dcp::SimplexPoint probs = dcp::choice_probabilities(model->model, uu);
    for (std::size_t i = 0; i < probs.size(); ++i) p[i] = probs[i];
  });
}

dcp_status dcp_prox_center(const dcp_model* model, double* p) {
  if (!model || !p) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    for (std::size_t i = 0; i < model->prox.prox_center.size(); ++i) {
      p[i] = model->prox.prox_center[i];
    }
  });
}

dcp_status dcp_prox_map(const dcp_model* model, const double* s, double t,
                        double* p) {
  if (!model || !s || !p) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::span<const double> ss(s, static_cast<std::size_t>(dcp_model_dim(model)));
    const dcp::SimplexPoint mapped = dcp::prox_map(model->prox, ss, t);
    for (std::size_t i = 0; i < mapped.size(); ++i) p[i] = mapped[i];
  });
}

dcp_status dcp_conjugate(const dcp_model* model, const double* p, double* value,
                         double* u, int* used_closed_form) {
  if (!model || !p || !value) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::size_t n = static_cast<std::size_t>(dcp_model_dim(model));
    const dcp::SimplexPoint point(std::vector<double>(p, p + n));
    bool closed = false;
    *value = dcp::conjugate_value(model->model, point, &closed);
    if (used_closed_form) *used_closed_form = closed ? 1 : 0;
    if (u) {
      const dcp::ConjugateResult rec = dcp::conjugate_numeric(model->model, point);
      for (std::size_t i = 0; i < n; ++i) u[i] = rec.maximizer[i];
    }
  });
}

dcp_status dcp_smoothness_certificate(const dcp_model* model, int samples,
                                      uint64_t seed, double* max_observed,
                                      double* bound, int* pass) {
  if (!model || !max_observed || !bound || !pass) {
    return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const dcp::SmoothnessCertificate cert =
        dcp::smoothness_certificate(model->model, samples, seed);
    *max_observed = cert.max_observed;
    *bound = cert.bound;
    *pass = cert.pass ? 1 : 0;
  });
}

dcp_status dcp_mc_surplus(const dcp_model* model, const double* u,
                          long long samples, uint64_t seed, double* mean,
                          double* std_error) {
  if (!model || !u || !mean || !std_error) {
    return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const std::span<const double> uu(u, static_cast<std::size_t>(dcp_model_dim(model)));
    const dcp::McEstimate est = dcp::mc_surplus_ml(model->model, uu, samples, seed);
    *mean = est.mean;
    *std_error = est.std_error;
  });
}

dcp_status dcp_mc_choice_frequencies(const dcp_model* model, const double* u,
                                     long long samples, uint64_t seed,
                                     double* freq) {
  if (!model || !u || !freq) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::span<const double> uu(u, static_cast<std::size_t>(dcp_model_dim(model)));
    const dcp::SimplexPoint f = dcp::mc_choice_frequencies(model->model, uu, samples, seed);
    for (std::size_t i = 0; i < f.size(); ++i) freq[i] = f[i];
  });
}

dcp_status dcp_instance_from_json(const char* json_text, dcp_instance** out) {
  if (!json_text || !out) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new dcp_instance{dcp::parse_instance_json(json_text, "instance")};
  });
}

dcp_status dcp_instance_from_file(const char* path, dcp_instance** out) {
  if (!path || !out) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new dcp_instance{dcp::load_instance_file(path)}; });
}

void dcp_instance_free(dcp_instance* inst) { delete inst; }

int dcp_instance_qualities(const dcp_instance* inst) {
  return inst ? inst->inst.num_qualities() : 0;
}

int dcp_instance_goods(const dcp_instance* inst) {
  return inst ? inst->inst.num_goods() : 0;
}

dcp_status dcp_gap_certificate(const dcp_instance* inst, const dcp_model* model,
                               long long k, double* m, double* d, double* bound,
                               int* d_certified) {
  if (!inst || !model) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const dcp::GapCertificate cert = dcp::gap_certificate(inst->inst, model->model, k);
    if (m) *m = cert.m;
    if (d) *d = cert.d;
    if (bound) *bound = cert.bound;
    if (d_certified) *d_certified = cert.d_certified ? 1 : 0;
  });
}

dcp_status dcp_run_cycle(const dcp_instance* inst, const dcp_model* model,
                         long long iters, dcp_trace** out) {
  if (!inst || !model || !out) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new dcp_trace{dcp::run_cycle(inst->inst, model->model, iters)};
  });
}

void dcp_trace_free(dcp_trace* trace) { delete trace; }

long long dcp_trace_size(const dcp_trace* trace) {
  return trace ? static_cast<long long>(trace->trace.records.size()) : 0;
}

dcp_status dcp_trace_row(const dcp_trace* trace, long long k, double* u_avg,
                         double* phi_avg, double* gap, double* bound) {
  if (!trace) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  if (k < 0 || k >= dcp_trace_size(trace)) {
    return set_error(DCP_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const dcp::CycleRecord& rec = trace->trace.records[static_cast<std::size_t>(k)];
  if (u_avg) *u_avg = rec.utility_avg;
  if (phi_avg) *phi_avg = rec.phi_avg;
  if (gap) *gap = rec.gap;
  if (bound) *bound = rec.bound;
  return DCP_OK;
}

dcp_status dcp_trace_averages(const dcp_trace* trace, long long k,
                              double* demand_avg, double* prices_avg) {
  if (!trace) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  if (k < 0 || k >= dcp_trace_size(trace)) {
    return set_error(DCP_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const dcp::CycleRecord& rec = trace->trace.records[static_cast<std::size_t>(k)];
  if (demand_avg) {
    for (std::size_t j = 0; j < rec.demand_avg.size(); ++j) demand_avg[j] = rec.demand_avg[j];
  }
  if (prices_avg) {
    for (std::size_t i = 0; i < rec.prices_avg.size(); ++i) prices_avg[i] = rec.prices_avg[i];
  }
  return DCP_OK;
}

dcp_status dcp_trace_write_csv(const dcp_trace* trace, const char* path) {
  if (!trace || !path) return set_error(DCP_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { dcp::write_trace_csv_file(trace->trace, path); });
}

int dcp_self_check(int verbose) {
  try {
    return dcp::run_self_check(verbose ? &std::cout : nullptr) ? 0 : 1;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return 1;
  }
}

}  // extern "C"
