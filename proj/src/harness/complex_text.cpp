#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "cavishift/errors.hpp"
#include "cavishift/harness.hpp"

namespace cavishift::harness {
namespace {

// Parses one signed real at s[pos]; returns false if none is there.
bool read_real(const std::string& s, std::size_t& pos, double& out) {
  const char* begin = s.c_str() + pos;
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  pos += static_cast<std::size_t>(end - begin);
  return true;
}

}  // namespace

cplx parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto fail = [&] {
    return Error(ErrorKind::ConfigError, "malformed complex number '" + std::string(text) + "'");
  };
  if (s.empty()) throw fail();
  if (s.back() != 'j' && s.back() != 'i') {
    std::size_t pos = 0;
    double re;
    if (!read_real(s, pos, re) || pos != s.size()) throw fail();
    return {re, 0.0};
  }
  s.pop_back();
  // Pure imaginary: "j", "-j", "2.5j"
  if (s.empty() || s == "+" || s == "-") return {0.0, s == "-" ? -1.0 : 1.0};
  std::size_t pos = 0;
  double first;
  if (!read_real(s, pos, first)) throw fail();
  if (pos == s.size()) return {0.0, first};
  const std::string rest = s.substr(pos);
  if (rest == "+") return {first, 1.0};
  if (rest == "-") return {first, -1.0};
  std::size_t p2 = 0;
  double second;
  if ((rest[0] != '+' && rest[0] != '-') || !read_real(rest, p2, second) || p2 != rest.size())
    throw fail();
  return {first, second};
}

std::string format_complex(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

}  // namespace cavishift::harness
