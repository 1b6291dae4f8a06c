#pragma once

#include <iosfwd>

namespace dcp {

/// Runs the library's property suites on deterministic inputs: surplus and
/// probability identities, conjugate and prox relations, Hessian and norm
/// certificates, dual-averaging gap envelopes, consumption-cycle
/// feasibility, and Monte Carlo agreement. Writes one line per check group
/// to `log` when given. Returns true when every check passes.
bool run_self_check(std::ostream* log);

}  // namespace dcp
