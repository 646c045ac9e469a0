#ifndef ENTROFLOW_FORMAT_HPP_
#define ENTROFLOW_FORMAT_HPP_

#include <charconv>
#include <string>
#include <system_error>

namespace entroflow {

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  if (result.ec != std::errc{}) return "nan";
  return std::string(buf, result.ptr);
}

}  // namespace entroflow

#endif  // ENTROFLOW_FORMAT_HPP_
