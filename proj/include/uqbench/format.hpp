#pragma once

#include <string>

namespace uqbench {

/// Shortest decimal string that parses back to the same double.
std::string format_roundtrip(double x);

/// Artifact formatting: at most 12 significant digits, falling back to the
/// shortest round-trip form when that is shorter. Non-finite values print
/// as `nan`, `inf`, `-inf`.
std::string format_sig12(double x);

} // namespace uqbench
