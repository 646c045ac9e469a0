#ifndef ENTROFLOW_VERIFY_HPP_
#define ENTROFLOW_VERIFY_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace entroflow {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  // One "PASS|FAIL name measured=... threshold=..." line per check followed by
  // a summary line. Contains no timings, so equal inputs give equal text.
  std::string to_text() const;
};

std::span<const std::string_view> verify_suite_names();

// Runs one battery: "identities", "mc-vs-analytic" or "fpe-residual".
// Throws std::invalid_argument for an unknown suite.
VerifyReport run_verify_suite(std::string_view suite, std::uint64_t seed, int threads = 0);

}  // namespace entroflow

#endif  // ENTROFLOW_VERIFY_HPP_
