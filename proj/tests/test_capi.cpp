// Exercises the shared-library C interface end to end: handle lifecycles,
// status codes, and numeric agreement with hand values.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "dcprox.h"

namespace {

const char* ml2_json = R"({
  "n": 2, "mu": 1.0,
  "nests": [ { "mu_ell": 1.0, "shares": { "0": 1.0, "1": 1.0 } } ]
})";

const char* nl3_json = R"({
  "n": 3, "mu": 1.0,
  "nests": [
    { "mu_ell": 0.5, "shares": { "0": 1.0, "1": 1.0 } },
    { "mu_ell": 1.0, "shares": { "2": 1.0 } }
  ]
})";

const char* asym_instance_json =
    R"({ "Q": [[2.0, 0.0], [0.0, 1.0]], "pi": [1.0, 1.0], "w": 1.0, "sigma": [1.0, 1.0] })";

constexpr double kEulerGamma = 0.5772156649015329;

}  // namespace

TEST_CASE("null and malformed inputs produce status codes with messages") {
  dcp_model* model = nullptr;
  CHECK(dcp_model_from_json(nullptr, &model) == DCP_ERR_INVALID_ARGUMENT);
  CHECK(dcp_model_from_json("{ garbage", &model) == DCP_ERR_PARSE);
  CHECK(std::strlen(dcp_last_error()) > 0);

  const char* too_large = R"({ "n": 1, "mu": 1.0,
      "nests": [ { "mu_ell": 2.0, "shares": { "0": 1.0 } } ] })";
  CHECK(dcp_model_from_json(too_large, &model) == DCP_ERR_VALIDATION);
  CHECK(std::string(dcp_last_error()).find("NestScaleTooLarge") != std::string::npos);

  dcp_instance* inst = nullptr;
  CHECK(dcp_instance_from_file("/nonexistent/i.json", &inst) == DCP_ERR_IO);
}

TEST_CASE("model evaluations through the C surface") {
  dcp_model* model = nullptr;
  REQUIRE(dcp_model_from_json(ml2_json, &model) == DCP_OK);
  CHECK(dcp_model_dim(model) == 2);
  CHECK(dcp_model_is_ml(model) == 1);

  double beta = 0.0;
  CHECK(dcp_model_beta(model, &beta) == DCP_OK);
  CHECK(beta == 1.0);

  const double u[2] = {std::log(2.0), 0.0};
  double value = 0.0;
  CHECK(dcp_surplus(model, u, &value) == DCP_OK);
  CHECK(value == doctest::Approx(std::log(3.0) + kEulerGamma).epsilon(1e-14));

  double p[2] = {0.0, 0.0};
  CHECK(dcp_choice_probabilities(model, u, p) == DCP_OK);
  CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  double center[2];
  CHECK(dcp_prox_center(model, center) == DCP_OK);
  CHECK(center[0] == doctest::Approx(0.5).epsilon(1e-14));

  const double s[2] = {1.0, 0.0};
  double mapped[2];
  CHECK(dcp_prox_map(model, s, 1.0, mapped) == DCP_OK);
  CHECK(mapped[1] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-14));

  double conj = 0.0;
  double recovered[2];
  int closed = 0;
  const double point[2] = {0.25, 0.75};
  CHECK(dcp_conjugate(model, point, &conj, recovered, &closed) == DCP_OK);
  CHECK(closed == 1);
  CHECK(conj == doctest::Approx(0.25 * std::log(0.25) + 0.75 * std::log(0.75) -
                                kEulerGamma)
                    .epsilon(1e-12));
  CHECK(recovered[0] == doctest::Approx(std::log(0.25 / 0.75)).epsilon(1e-9));
  CHECK(recovered[1] == 0.0);

  double max_observed = 0.0, bound = 0.0;
  int pass = 0;
  CHECK(dcp_smoothness_certificate(model, 50, 7, &max_observed, &bound, &pass) == DCP_OK);
  CHECK(pass == 1);
  CHECK(bound == doctest::Approx(1.0));

  double mean = 0.0, se = 0.0;
  CHECK(dcp_mc_surplus(model, u, 200000, 3, &mean, &se) == DCP_OK);
  CHECK(std::abs(mean - value) <= 4.0 * se);

  double freq[2];
  CHECK(dcp_mc_choice_frequencies(model, u, 200000, 3, freq) == DCP_OK);
  CHECK(std::abs(freq[0] - 2.0 / 3.0) <= 0.01);

  dcp_model_free(model);
}

TEST_CASE("numeric-only conjugate path is reported for non-ML/NL models") {
  const char* gnl = R"({ "n": 2, "mu": 1.0,
    "nests": [ { "mu_ell": 0.5, "shares": { "0": 0.5, "1": 0.5 } },
               { "mu_ell": 1.0, "shares": { "0": 0.5, "1": 0.5 } } ] })";
  dcp_model* model = nullptr;
  REQUIRE(dcp_model_from_json(gnl, &model) == DCP_OK);
  CHECK(dcp_model_is_ml(model) == 0);

  const double point[2] = {0.4, 0.6};
  double conj = 0.0;
  int closed = -1;
  CHECK(dcp_conjugate(model, point, &conj, nullptr, &closed) == DCP_OK);
  CHECK(closed == 0);

  // boundary points cannot recover utilities
  const double boundary[2] = {1e-9, 1.0 - 1e-9};
  double u[2];
  CHECK(dcp_conjugate(model, boundary, &conj, u, &closed) == DCP_ERR_NUMERIC);
  dcp_model_free(model);
}

TEST_CASE("consumption cycle through the C surface") {
  dcp_instance* inst = nullptr;
  REQUIRE(dcp_instance_from_json(asym_instance_json, &inst) == DCP_OK);
  CHECK(dcp_instance_qualities(inst) == 2);
  CHECK(dcp_instance_goods(inst) == 2);

  dcp_model* model = nullptr;
  REQUIRE(dcp_model_from_json(ml2_json, &model) == DCP_OK);

  double m = 0.0, d = 0.0, bound = 0.0;
  int certified = 0;
  CHECK(dcp_gap_certificate(inst, model, 0, &m, &d, &bound, &certified) == DCP_OK);
  CHECK(m == doctest::Approx(2.0));
  CHECK(d == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(certified == 1);

  dcp_trace* trace = nullptr;
  REQUIRE(dcp_run_cycle(inst, model, 500, &trace) == DCP_OK);
  CHECK(dcp_trace_size(trace) == 500);

  double u_avg = 0.0, phi_avg = 0.0, gap = 0.0, row_bound = 0.0;
  CHECK(dcp_trace_row(trace, 499, &u_avg, &phi_avg, &gap, &row_bound) == DCP_OK);
  CHECK(gap == doctest::Approx(phi_avg - u_avg));
  CHECK(gap >= -1e-9);
  CHECK(gap <= row_bound + 1e-9);

  std::vector<double> xbar(2), lbar(2);
  CHECK(dcp_trace_averages(trace, 499, xbar.data(), lbar.data()) == DCP_OK);
  CHECK(xbar[0] + xbar[1] == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(dcp_trace_row(trace, 500, &u_avg, &phi_avg, &gap, &row_bound) ==
        DCP_ERR_INVALID_ARGUMENT);

  const std::string path = std::string("capi_trace_test.csv");
  CHECK(dcp_trace_write_csv(trace, path.c_str()) == DCP_OK);
  std::remove(path.c_str());
  CHECK(dcp_trace_write_csv(trace, "/nonexistent/dir/trace.csv") == DCP_ERR_IO);

  dcp_trace_free(trace);
  dcp_model_free(model);
  dcp_instance_free(inst);

  // model/instance dimension mismatch
  dcp_model* nl = nullptr;
  REQUIRE(dcp_model_from_json(nl3_json, &nl) == DCP_OK);
  dcp_instance* inst2 = nullptr;
  REQUIRE(dcp_instance_from_json(asym_instance_json, &inst2) == DCP_OK);
  dcp_trace* bad = nullptr;
  CHECK(dcp_run_cycle(inst2, nl, 10, &bad) == DCP_ERR_INVALID_ARGUMENT);
  dcp_model_free(nl);
  dcp_instance_free(inst2);
}
