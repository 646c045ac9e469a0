#ifndef ENTROFLOW_CLI_HPP_
#define ENTROFLOW_CLI_HPP_

#include <ostream>
#include <string_view>

namespace entroflow {

inline constexpr std::string_view kVersion = "0.1.0";

// Parses a real number or a multiple of pi: "0.5", "pi", "-pi/2", "3pi/4",
// "2*pi", "pi*0.5". Throws std::invalid_argument otherwise.
double parse_real(std::string_view text);

// Entry point of the `entroflow` tool. CSV and reports go to `out` unless an
// --out file is given; diagnostics go to `err`. Returns 0 on success, 1 on a
// domain or verification failure, 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace entroflow

#endif  // ENTROFLOW_CLI_HPP_
