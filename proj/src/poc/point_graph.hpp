// SPDX-License-Identifier: MIT
// Point-level exploration shared by the checks in this directory.
#pragma once

#include "pcw/distribution.hpp"

#include <deque>
#include <map>
#include <set>

namespace pcw {

// Support points reachable in at most depth point steps, with their distance.
template <class T, class Next>
std::map<T, unsigned> point_reach(const T& start, Next&& next, unsigned depth, std::size_t cap, bool& truncated,
                                  bool& saturated) {
  std::map<T, unsigned> seen{{start, 0}};
  std::deque<T> q{start};
  truncated = false;
  saturated = true;
  while (!q.empty()) {
    T cur = q.front();
    q.pop_front();
    unsigned d = seen[cur];
    for (const auto& x : next(cur)) {
      if (seen.count(x)) continue;
      if (d >= depth) {
        saturated = false;
        continue;
      }
      if (seen.size() >= cap) {
        truncated = true;
        saturated = false;
        continue;
      }
      seen.emplace(x, d + 1);
      q.push_back(x);
    }
  }
  return seen;
}

template <class T>
std::set<T> support_points(const SuccList<T>& ds) {
  std::set<T> out;
  for (const auto& d : ds)
    for (const auto& [x, p] : d) out.insert(x);
  return out;
}

}  // namespace pcw
