#include "dcp/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "dcp/errors.hpp"

namespace dcp {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) fail(ErrorCode::IoError, "cannot read " + path);
  return buf.str();
}

json parse_json(const std::string& text, const std::string& source_name) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    fail(ErrorCode::ParseError, source_name + ": not valid JSON");
  }
  return doc;
}

double require_number(const json& doc, const char* field,
                      const std::string& source_name) {
  if (!doc.contains(field) || !doc[field].is_number()) {
    fail(ErrorCode::ParseError,
         source_name + ": field '" + field + "' must be a number");
  }
  return doc[field].get<double>();
}

}  // namespace

GnlModel parse_model_json(const std::string& text, const std::string& source_name) {
  const json doc = parse_json(text, source_name);
  if (!doc.is_object()) fail(ErrorCode::ParseError, source_name + ": expected an object");

  GnlSpec spec;
  if (!doc.contains("n") || !doc["n"].is_number_integer()) {
    fail(ErrorCode::ParseError, source_name + ": field 'n' must be an integer");
  }
  spec.n = doc["n"].get<int>();
  spec.mu = require_number(doc, "mu", source_name);
  if (!doc.contains("nests") || !doc["nests"].is_array()) {
    fail(ErrorCode::ParseError, source_name + ": field 'nests' must be an array");
  }
  std::size_t index = 0;
  for (const json& jn : doc["nests"]) {
    const std::string where = source_name + ": nests[" + std::to_string(index) + "]";
    if (!jn.is_object()) fail(ErrorCode::ParseError, where + " must be an object");
    NestSpec nest;
    nest.mu_ell = require_number(jn, "mu_ell", where);
    if (!jn.contains("shares") || !jn["shares"].is_object()) {
      fail(ErrorCode::ParseError, where + ".shares must be an object");
    }
    for (const auto& [key, value] : jn["shares"].items()) {
      int alt = -1;
      try {
        std::size_t consumed = 0;
        alt = std::stoi(key, &consumed);
        if (consumed != key.size()) alt = -1;
      } catch (const std::exception&) {
        alt = -1;
      }
      if (alt < 0) {
        fail(ErrorCode::ParseError,
             where + ".shares key '" + key + "' is not a 0-based alternative index");
      }
      if (!value.is_number()) {
        fail(ErrorCode::ParseError, where + ".shares['" + key + "'] must be a number");
      }
      nest.shares.emplace_back(alt, value.get<double>());
    }
    spec.nests.push_back(std::move(nest));
    ++index;
  }
  return construct_model(spec);
}

GnlModel load_model_file(const std::string& path) {
  return parse_model_json(read_file(path), path);
}

LancasterInstance parse_instance_json(const std::string& text,
                                      const std::string& source_name) {
  const json doc = parse_json(text, source_name);
  if (!doc.is_object()) fail(ErrorCode::ParseError, source_name + ": expected an object");

  if (!doc.contains("Q") || !doc["Q"].is_array() || doc["Q"].empty()) {
    fail(ErrorCode::ParseError, source_name + ": field 'Q' must be a nonempty array of rows");
  }
  std::vector<std::vector<double>> quality;
  for (const json& jrow : doc["Q"]) {
    if (!jrow.is_array()) {
      fail(ErrorCode::ParseError, source_name + ": 'Q' rows must be arrays");
    }
    std::vector<double> row;
    for (const json& v : jrow) {
      if (!v.is_number()) fail(ErrorCode::ParseError, source_name + ": 'Q' entries must be numbers");
      row.push_back(v.get<double>());
    }
    quality.push_back(std::move(row));
  }

  auto vec_field = [&](const char* field) {
    if (!doc.contains(field) || !doc[field].is_array()) {
      fail(ErrorCode::ParseError,
           source_name + ": field '" + field + "' must be an array");
    }
    std::vector<double> out;
    for (const json& v : doc[field]) {
      if (!v.is_number()) {
        fail(ErrorCode::ParseError,
             source_name + ": '" + field + "' entries must be numbers");
      }
      out.push_back(v.get<double>());
    }
    return out;
  };

  std::vector<double> pi = vec_field("pi");
  std::vector<double> sigma = vec_field("sigma");
  const double w = require_number(doc, "w", source_name);
  return LancasterInstance(std::move(quality), std::move(pi), w, std::move(sigma));
}

LancasterInstance load_instance_file(const std::string& path) {
  return parse_instance_json(read_file(path), path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(const CycleTrace& trace, std::ostream& out) {
  if (trace.records.empty()) {
    fail(ErrorCode::InvalidArgument, "trace is empty");
  }
  const std::size_t m = trace.records[0].demand_avg.size();
  const std::size_t n = trace.records[0].prices_avg.size();
  out << "k,U_avg,Phi_avg,gap,bound";
  for (std::size_t j = 0; j < m; ++j) out << ",xbar_" << j;
  for (std::size_t i = 0; i < n; ++i) out << ",lambdabar_" << i;
  out << "\n";
  for (const CycleRecord& rec : trace.records) {
    out << rec.k << ',' << format_double(rec.utility_avg) << ','
        << format_double(rec.phi_avg) << ',' << format_double(rec.gap) << ','
        << format_double(rec.bound);
    for (double v : rec.demand_avg) out << ',' << format_double(v);
    for (double v : rec.prices_avg) out << ',' << format_double(v);
    out << "\n";
  }
}

void write_trace_csv_file(const CycleTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  write_trace_csv(trace, out);
  out.flush();
  if (!out.good()) fail(ErrorCode::IoError, "failed writing " + path);
}

}  // namespace dcp
