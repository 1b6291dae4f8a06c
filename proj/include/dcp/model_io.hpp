#pragma once

#include <iosfwd>
#include <string>

#include "dcp/gnl_model.hpp"
#include "dcp/lancaster.hpp"

namespace dcp {

/// Model file shape:
///   { "n": int, "mu": real,
///     "nests": [ { "mu_ell": real, "shares": { "<alt index>": real, ... } }, ... ] }
/// Alternative indices are 0-based strings. Parse failures throw ParseError
/// naming the source and field; invariant violations keep their own codes.
GnlModel parse_model_json(const std::string& text, const std::string& source_name);
GnlModel load_model_file(const std::string& path);

/// Instance file shape:
///   { "Q": [[...], ...], "pi": [...], "w": real, "sigma": [...] }
LancasterInstance parse_instance_json(const std::string& text,
                                      const std::string& source_name);
LancasterInstance load_instance_file(const std::string& path);

/// Shortest decimal form that round-trips the double (17 significant digits).
std::string format_double(double v);

/// Trace CSV: header then one row per iteration with columns
/// k, U_avg, Phi_avg, gap, bound, xbar_0.., lambdabar_0.., all floating
/// values printed with 17 significant digits, final line newline-terminated.
void write_trace_csv(const CycleTrace& trace, std::ostream& out);
void write_trace_csv_file(const CycleTrace& trace, const std::string& path);

}  // namespace dcp
