// SPDX-License-Identifier: MIT
#include "pcw/names.hpp"

namespace pcw {

std::string_view name_stem(std::string_view n) { return n.substr(0, n.find('%')); }

NameKind name_kind(std::string_view n) {
  auto s = name_stem(n);
  if (s == "#i") return NameKind::iota;
  if (s == "#t") return NameKind::tauhat;
  if (s.substr(0, 3) == "#C_") return NameKind::constant;
  if (s.substr(0, 2) == "s_") return NameKind::source;
  return NameKind::plain;
}

const char* name_kind_str(NameKind k) {
  switch (k) {
    case NameKind::plain: return "plain";
    case NameKind::source: return "source";
    case NameKind::iota: return "iota";
    case NameKind::tauhat: return "tauhat";
    case NameKind::constant: return "constant";
  }
  return "?";
}

std::string kind_prefix(NameKind k) {
  switch (k) {
    case NameKind::plain: return "v";
    case NameKind::source: return "s_";
    case NameKind::iota: return "#i";
    case NameKind::tauhat: return "#t";
    case NameKind::constant: return "#C_";
  }
  return "v";
}

std::string fresh_name(std::string_view base, const std::set<std::string>& avoid) {
  std::string stem(name_stem(base));
  for (unsigned k = 1;; ++k) {
    std::string c = stem + "%" + std::to_string(k);
    if (!avoid.count(c)) return c;
  }
}

std::string FreshSupply::operator()(std::string_view base) {
  std::string stem(name_stem(base));
  unsigned& k = next_[stem];
  for (;;) {
    std::string c = stem + "%" + std::to_string(++k);
    if (avoid_.insert(c).second) return c;
  }
}

std::string observable_str(const Observable& o) {
  switch (o.kind) {
    case ObsKind::name: return o.name;
    case ObsKind::coname: return "'" + o.name;
    case ObsKind::success: return "ok";
  }
  return "?";
}

}  // namespace pcw
