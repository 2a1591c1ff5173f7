// SPDX-License-Identifier: MIT
// Lifting relations on terms to relations on distributions.
#pragma once

#include "pcw/distribution.hpp"

#include <concepts>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace pcw {

template <class A, class B>
using Coupling = std::map<std::pair<A, B>, Prob>;

template <class T>
using Relation = std::set<std::pair<T, T>>;

namespace detail {

struct FlowEdge {
  std::size_t to;
  Prob cap;
  std::size_t rev;
};

class FlowNet {
 public:
  explicit FlowNet(std::size_t n) : g_(n) {}

  std::size_t add(std::size_t u, std::size_t v, const Prob& c) {
    g_[u].push_back({v, c, g_[v].size()});
    g_[v].push_back({u, Prob(0), g_[u].size() - 1});
    return g_[u].size() - 1;
  }

  // Edmonds-Karp; exact because all capacities are rationals.
  Prob maxflow(std::size_t s, std::size_t t) {
    Prob total = 0;
    for (;;) {
      std::vector<std::pair<std::size_t, std::size_t>> prev(g_.size(), {SIZE_MAX, 0});
      std::deque<std::size_t> q{s};
      prev[s] = {s, 0};
      while (!q.empty() && prev[t].first == SIZE_MAX) {
        std::size_t u = q.front();
        q.pop_front();
        for (std::size_t k = 0; k < g_[u].size(); ++k) {
          const auto& e = g_[u][k];
          if (e.cap > 0 && prev[e.to].first == SIZE_MAX) {
            prev[e.to] = {u, k};
            q.push_back(e.to);
          }
        }
      }
      if (prev[t].first == SIZE_MAX) return total;
      Prob aug = -1;
      for (std::size_t v = t; v != s; v = prev[v].first) {
        const auto& e = g_[prev[v].first][prev[v].second];
        if (aug < 0 || e.cap < aug) aug = e.cap;
      }
      for (std::size_t v = t; v != s; v = prev[v].first) {
        auto& e = g_[prev[v].first][prev[v].second];
        e.cap -= aug;
        g_[e.to][e.rev].cap += aug;
      }
      total += aug;
    }
  }

  const FlowEdge& edge(std::size_t u, std::size_t k) const { return g_[u][k]; }
  const FlowEdge& reverse(std::size_t u, std::size_t k) const {
    const auto& e = g_[u][k];
    return g_[e.to][e.rev];
  }

 private:
  std::vector<std::vector<FlowEdge>> g_;
};

}  // namespace detail

// A coupling of d and t supported inside the relation, if one exists.
// related(a, b) decides membership of (a, b).
template <class A, class B, class Rel>
  requires std::predicate<Rel&, const A&, const B&>
std::optional<Coupling<A, B>> lift_check(Rel&& related, const Distribution<A>& d,
                                         const Distribution<B>& t) {
  std::vector<std::pair<const A*, Prob>> left;
  std::vector<std::pair<const B*, Prob>> right;
  for (const auto& [a, p] : d) left.emplace_back(&a, p);
  for (const auto& [b, q] : t) right.emplace_back(&b, q);
  const std::size_t n = left.size(), m = right.size();
  const std::size_t src = n + m, sink = n + m + 1;
  detail::FlowNet net(n + m + 2);
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> mids;  // (i, j, edge index)
  for (std::size_t i = 0; i < n; ++i) net.add(src, i, left[i].second);
  for (std::size_t j = 0; j < m; ++j) net.add(n + j, sink, right[j].second);
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (!related(*left[i].first, *right[j].first)) continue;
      any = true;
      Prob cap = left[i].second < right[j].second ? left[i].second : right[j].second;
      mids.emplace_back(i, j, net.add(i, n + j, cap));
    }
    if (!any) return std::nullopt;
  }
  if (net.maxflow(src, sink) != 1) return std::nullopt;
  Coupling<A, B> c;
  for (const auto& [i, j, k] : mids) {
    const Prob& f = net.reverse(i, k).cap;
    if (f > 0) c[{*left[i].first, *right[j].first}] = f;
  }
  return c;
}

template <class T>
std::optional<Coupling<T, T>> lift_check(const Relation<T>& r, const Distribution<T>& d,
                                         const Distribution<T>& t) {
  return lift_check([&](const T& a, const T& b) { return r.count({a, b}) != 0; }, d, t);
}

// Marginal and support conditions of a coupling, checked independently of how it was built.
template <class A, class B, class Rel>
bool is_coupling(Rel&& related, const Coupling<A, B>& c, const Distribution<A>& d,
                 const Distribution<B>& t) {
  std::map<A, Prob> rows;
  std::map<B, Prob> cols;
  for (const auto& [ab, w] : c) {
    if (w <= 0 || !related(ab.first, ab.second)) return false;
    rows[ab.first] += w;
    cols[ab.second] += w;
  }
  return rows == d.support() && cols == t.support();
}

}  // namespace pcw
