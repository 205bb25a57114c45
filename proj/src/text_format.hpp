#ifndef QAOA_FIPSO_TEXT_FORMAT_HPP
#define QAOA_FIPSO_TEXT_FORMAT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace qaoa_fipso::detail {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace qaoa_fipso::detail

#endif  // QAOA_FIPSO_TEXT_FORMAT_HPP
