// SPDX-License-Identifier: MIT
#include "pcw/prob.hpp"

#include <cctype>
#include <stdexcept>

namespace pcw {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Prob parse_prob(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("malformed probability '" + std::string(text) + "'");
  boost::multiprecision::cpp_int n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Prob(n, d);
}

std::string prob_str(const Prob& p) { return p.str(); }

}  // namespace pcw
