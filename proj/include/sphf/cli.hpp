#pragma once

// Command-line driver. Modes: plan, curve, generate, build, query, bench.
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration.
// Settings come from an optional JSON file (--config) overridden by flags.

#include <ostream>
#include <string>
#include <vector>

namespace sphf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Real number, also accepting "a^b", "pi", "pi/k" and "k*pi/j" forms.
double parse_real(const std::string& text);

}  // namespace sphf
