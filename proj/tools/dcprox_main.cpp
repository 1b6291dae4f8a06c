// Command-line front end for the discrete-choice prox library. Talks to the
// shared library exclusively through the C interface in dcprox.h.
//
// Exit codes: 0 success, 1 verification/numeric failure, 2 input error,
// 3 I/O error.

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcprox.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_input_error = 2;
constexpr int exit_io_error = 3;

int exit_code_for(dcp_status status) {
  switch (status) {
    case DCP_OK: return exit_ok;
    case DCP_ERR_IO: return exit_io_error;
    case DCP_ERR_NUMERIC: return exit_verify_failed;
    default: return exit_input_error;
  }
}

int report(dcp_status status) {
  std::fprintf(stderr, "error: %s: %s\n", dcp_status_name(status), dcp_last_error());
  return exit_code_for(status);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_csv(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += fmt(values[i]);
  }
  return line;
}

// "0,1.5,-2" -> vector; returns false on malformed input.
bool parse_csv_doubles(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return !out.empty();
}

using ModelPtr = std::unique_ptr<dcp_model, decltype(&dcp_model_free)>;
using InstancePtr = std::unique_ptr<dcp_instance, decltype(&dcp_instance_free)>;
using TracePtr = std::unique_ptr<dcp_trace, decltype(&dcp_trace_free)>;

int load_model(const std::string& path, ModelPtr& model) {
  dcp_model* raw = nullptr;
  const dcp_status status = dcp_model_from_file(path.c_str(), &raw);
  if (status != DCP_OK) return report(status);
  model.reset(raw);
  return exit_ok;
}

int load_vector_for_model(const dcp_model* model, const std::string& text,
                          const char* what, std::vector<double>& out) {
  if (!parse_csv_doubles(text, out)) {
    std::fprintf(stderr, "error: %s is not a comma-separated number list\n", what);
    return exit_input_error;
  }
  if (out.size() != static_cast<std::size_t>(dcp_model_dim(model))) {
    std::fprintf(stderr, "error: %s has %zu entries, model has %d alternatives\n",
                 what, out.size(), dcp_model_dim(model));
    return exit_input_error;
  }
  return exit_ok;
}

int cmd_probs(const std::string& model_path, const std::string& u_text) {
  ModelPtr model(nullptr, dcp_model_free);
  if (int rc = load_model(model_path, model)) return rc;
  std::vector<double> u;
  if (int rc = load_vector_for_model(model.get(), u_text, "--u", u)) return rc;
  std::vector<double> p(u.size());
  const dcp_status status = dcp_choice_probabilities(model.get(), u.data(), p.data());
  if (status != DCP_OK) return report(status);
  std::printf("%s\n", join_csv(p).c_str());
  return exit_ok;
}

int cmd_beta(const std::string& model_path) {
  ModelPtr model(nullptr, dcp_model_free);
  if (int rc = load_model(model_path, model)) return rc;
  double beta = 0.0;
  const dcp_status status = dcp_model_beta(model.get(), &beta);
  if (status != DCP_OK) return report(status);
  std::printf("%s\n", fmt(beta).c_str());
  return exit_ok;
}

int cmd_conjugate(const std::string& model_path, const std::string& p_text) {
  ModelPtr model(nullptr, dcp_model_free);
  if (int rc = load_model(model_path, model)) return rc;
  std::vector<double> p;
  if (int rc = load_vector_for_model(model.get(), p_text, "--p", p)) return rc;

  double interior_min = p[0];
  for (double v : p) interior_min = std::min(interior_min, v);
  const bool recover_u = interior_min >= 1e-6;

  double value = 0.0;
  int closed = 0;
  std::vector<double> u(p.size());
  const dcp_status status = dcp_conjugate(model.get(), p.data(), &value,
                                          recover_u ? u.data() : nullptr, &closed);
  if (status != DCP_OK) return report(status);
  std::printf("conjugate: %s (%s)\n", fmt(value).c_str(),
              closed ? "closed form" : "numeric");
  if (recover_u) {
    std::printf("u: %s\n", join_csv(u).c_str());
  } else {
    std::printf("u: not recovered (boundary point)\n");
  }
  return exit_ok;
}

int cmd_certify(const std::string& model_path, int samples, std::uint64_t seed) {
  ModelPtr model(nullptr, dcp_model_free);
  if (int rc = load_model(model_path, model)) return rc;
  double max_observed = 0.0;
  double bound = 0.0;
  int pass = 0;
  const dcp_status status =
      dcp_smoothness_certificate(model.get(), samples, seed, &max_observed, &bound, &pass);
  if (status != DCP_OK) return report(status);
  std::printf("max_observed: %s\nbound: %s\n%s\n", fmt(max_observed).c_str(),
              fmt(bound).c_str(), pass ? "PASS" : "FAIL");
  return pass ? exit_ok : exit_verify_failed;
}

int cmd_solve(const std::string& instance_path, const std::string& model_path,
              long long iters, const std::string& out_path) {
  InstancePtr inst(nullptr, dcp_instance_free);
  {
    dcp_instance* raw = nullptr;
    const dcp_status status = dcp_instance_from_file(instance_path.c_str(), &raw);
    if (status != DCP_OK) return report(status);
    inst.reset(raw);
  }
  ModelPtr model(nullptr, dcp_model_free);
  if (int rc = load_model(model_path, model)) return rc;

  dcp_trace* raw = nullptr;
  dcp_status status = dcp_run_cycle(inst.get(), model.get(), iters, &raw);
  if (status != DCP_OK) return report(status);
  TracePtr trace(raw, dcp_trace_free);

  status = dcp_trace_write_csv(trace.get(), out_path.c_str());
  if (status != DCP_OK) return report(status);

  const long long last = dcp_trace_size(trace.get()) - 1;
  double u_avg = 0.0, phi_avg = 0.0, gap = 0.0, bound = 0.0;
  dcp_trace_row(trace.get(), last, &u_avg, &phi_avg, &gap, &bound);
  std::printf("k: %lld\nU_avg: %s\nPhi_avg: %s\ngap: %s\nbound: %s\ntrace: %s\n",
              last, fmt(u_avg).c_str(), fmt(phi_avg).c_str(), fmt(gap).c_str(),
              fmt(bound).c_str(), out_path.c_str());
  return exit_ok;
}

int cmd_mc(const std::string& model_path, const std::string& u_text,
           long long samples, std::uint64_t seed) {
  ModelPtr model(nullptr, dcp_model_free);
  if (int rc = load_model(model_path, model)) return rc;
  std::vector<double> u;
  if (int rc = load_vector_for_model(model.get(), u_text, "--u", u)) return rc;

  const std::size_t n = u.size();
  std::vector<double> p(n), freq(n);
  dcp_status status = dcp_choice_probabilities(model.get(), u.data(), p.data());
  if (status != DCP_OK) return report(status);
  status = dcp_mc_choice_frequencies(model.get(), u.data(), samples, seed, freq.data());
  if (status != DCP_OK) return report(status);

  std::printf("alternative, analytic, empirical, diff\n");
  for (std::size_t i = 0; i < n; ++i) {
    std::printf("%zu, %s, %s, %s\n", i, fmt(p[i]).c_str(), fmt(freq[i]).c_str(),
                fmt(freq[i] - p[i]).c_str());
  }

  if (dcp_model_is_ml(model.get())) {
    double analytic = 0.0, mean = 0.0, std_error = 0.0;
    status = dcp_surplus(model.get(), u.data(), &analytic);
    if (status != DCP_OK) return report(status);
    status = dcp_mc_surplus(model.get(), u.data(), samples, seed, &mean, &std_error);
    if (status != DCP_OK) return report(status);
    std::printf("surplus analytic: %s\nsurplus empirical: %s (se %s)\n",
                fmt(analytic).c_str(), fmt(mean).c_str(), fmt(std_error).c_str());
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-choice prox-functions, dual averaging, and the consumption cycle"};
  app.require_subcommand(1);

  std::string model_path, instance_path, u_text, p_text, out_path;
  long long iters = 10000;
  long long samples = 1000000;
  int cert_samples = 500;
  std::uint64_t seed = 42;

  CLI::App* probs = app.add_subcommand("probs", "Choice probabilities for utilities");
  probs->add_option("--model", model_path, "Model JSON file")->required();
  probs->add_option("--u", u_text, "Comma-separated utilities")->required();

  CLI::App* beta = app.add_subcommand("beta", "Convexity parameter of the model");
  beta->add_option("--model", model_path, "Model JSON file")->required();

  CLI::App* conj = app.add_subcommand("conjugate", "Conjugate surplus at a simplex point");
  conj->add_option("--model", model_path, "Model JSON file")->required();
  conj->add_option("--p", p_text, "Comma-separated probabilities")->required();

  CLI::App* certify = app.add_subcommand("certify", "Sampled smoothness certificate");
  certify->add_option("--model", model_path, "Model JSON file")->required();
  certify->add_option("--samples", cert_samples, "Utility samples")->check(CLI::PositiveNumber);
  certify->add_option("--seed", seed, "Random seed");

  CLI::App* solve = app.add_subcommand("solve", "Run the consumption cycle");
  solve->add_option("--instance", instance_path, "Instance JSON file")->required();
  solve->add_option("--model", model_path, "Model JSON file")->required();
  solve->add_option("--iters", iters, "Iterations")->check(CLI::PositiveNumber);
  solve->add_option("--out", out_path, "Trace CSV output path")->required();

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo versus analytic values");
  mc->add_option("--model", model_path, "Model JSON file")->required();
  mc->add_option("--u", u_text, "Comma-separated utilities")->required();
  mc->add_option("--samples", samples, "Sample count")->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "Random seed");

  CLI::App* verify = app.add_subcommand("verify", "Run the library property suites");
  (void)verify;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_input_error;
  }

  if (probs->parsed()) return cmd_probs(model_path, u_text);
  if (beta->parsed()) return cmd_beta(model_path);
  if (conj->parsed()) return cmd_conjugate(model_path, p_text);
  if (certify->parsed()) return cmd_certify(model_path, cert_samples, seed);
  if (solve->parsed()) return cmd_solve(instance_path, model_path, iters, out_path);
  if (mc->parsed()) return cmd_mc(model_path, u_text, samples, seed);
  return dcp_self_check(1) == 0 ? exit_ok : exit_verify_failed;
}
