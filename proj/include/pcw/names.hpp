// SPDX-License-Identifier: MIT
// Channel names, their kinds, and fresh-name supply.
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>

namespace pcw {

// The kind of a name is read off its stem, the part before the first '%'.
// Fresh and canonical names keep the stem, so renaming never changes the kind.
enum class NameKind {
  plain,
  source,    // "s_..."  image of a source name
  iota,      // "#i"     reserved branch-selection channel
  tauhat,    // "#t"     reserved internal-choice channel
  constant,  // "#C_..." channel standing for a process constant
};

std::string_view name_stem(std::string_view n);
NameKind name_kind(std::string_view n);
const char* name_kind_str(NameKind k);

// Shortest stem that still determines the kind: "v", "s_", "#i", "#t", "#C_".
std::string kind_prefix(NameKind k);

// stem%k for the least k >= 1 not in avoid.
std::string fresh_name(std::string_view base, const std::set<std::string>& avoid);

// Fresh names that stay distinct from each other and from an initial avoid set.
class FreshSupply {
 public:
  explicit FreshSupply(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}
  std::string operator()(std::string_view base);
  void reserve(const std::string& n) { avoid_.insert(n); }

 private:
  std::set<std::string> avoid_;
  std::map<std::string, unsigned, std::less<>> next_;
};

using NameMap = std::map<std::string, std::string>;

inline std::string apply_name(const NameMap& s, const std::string& n) {
  auto it = s.find(n);
  return it == s.end() ? n : it->second;
}

// Barbs: an unrestricted input on a name, an output on it, or unguarded success.
enum class ObsKind { name, coname, success };

struct Observable {
  ObsKind kind = ObsKind::success;
  std::string name;
  friend bool operator==(const Observable&, const Observable&) = default;
  friend bool operator<(const Observable& a, const Observable& b) {
    return std::tie(a.kind, a.name) < std::tie(b.kind, b.name);
  }
};

std::string observable_str(const Observable& o);

}  // namespace pcw
