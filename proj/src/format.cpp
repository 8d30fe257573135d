#include "pqcdet/format.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace pqcdet {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_int(long long v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::pair<int, int> parse_int_range(const std::string& text) {
  auto parse_one = [](const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw std::invalid_argument("bad integer '" + s + "'");
    return v;
  };
  auto pos = text.find("..");
  if (pos == std::string::npos) {
    int v = parse_one(text);
    return {v, v};
  }
  int lo = parse_one(text.substr(0, pos));
  int hi = parse_one(text.substr(pos + 2));
  if (hi < lo) throw std::invalid_argument("empty range '" + text + "'");
  return {lo, hi};
}

}  // namespace pqcdet
