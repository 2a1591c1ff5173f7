// SPDX-License-Identifier: MIT
// Finite distributions over terms and their reductions.
#pragma once

#include "pcw/prob.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace pcw {

struct DistributionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class T>
class Distribution {
 public:
  using map_type = std::map<T, Prob>;
  using const_iterator = typename map_type::const_iterator;

  // Empty placeholder; not a valid distribution.
  Distribution() = default;

  Distribution(std::initializer_list<std::pair<T, Prob>> entries)
      : Distribution(std::vector<std::pair<T, Prob>>(entries)) {}

  // Equal keys are merged by adding their probabilities.
  explicit Distribution(const std::vector<std::pair<T, Prob>>& entries) {
    for (const auto& [t, p] : entries) {
      if (p <= 0) throw DistributionError("non-positive probability " + prob_str(p));
      m_[t] += p;
    }
    check_mass();
  }

  static Distribution point(T t) {
    Distribution d;
    d.m_.emplace(std::move(t), Prob(1));
    return d;
  }

  static Distribution from_map(map_type m) {
    Distribution d;
    d.m_ = std::move(m);
    for (const auto& [t, p] : d.m_)
      if (p <= 0) throw DistributionError("non-positive probability " + prob_str(p));
    d.check_mass();
    return d;
  }

  // For callers that already guarantee the invariants.
  static Distribution trusted(map_type m) {
    Distribution d;
    d.m_ = std::move(m);
    return d;
  }

  const map_type& support() const { return m_; }
  std::size_t size() const { return m_.size(); }
  bool empty() const { return m_.empty(); }
  const_iterator begin() const { return m_.begin(); }
  const_iterator end() const { return m_.end(); }

  Prob mass(const T& t) const {
    auto it = m_.find(t);
    return it == m_.end() ? Prob(0) : it->second;
  }

  bool is_point() const { return m_.size() == 1; }

  // Push-forward along f; images that coincide are merged.
  template <class F>
  auto map(F&& f) const {
    using U = std::decay_t<std::invoke_result_t<F, const T&>>;
    std::map<U, Prob> out;
    for (const auto& [t, p] : m_) out[f(t)] += p;
    return Distribution<U>::trusted(std::move(out));
  }

  friend bool operator==(const Distribution& a, const Distribution& b) { return a.m_ == b.m_; }
  friend bool operator!=(const Distribution& a, const Distribution& b) { return !(a == b); }
  friend bool operator<(const Distribution& a, const Distribution& b) { return a.m_ < b.m_; }

 private:
  void check_mass() const {
    if (m_.empty()) throw DistributionError("empty distribution");
    Prob sum = 0;
    for (const auto& [t, p] : m_) sum += p;
    if (sum != 1) throw DistributionError("probabilities sum to " + prob_str(sum) + ", not 1");
  }

  map_type m_;
};

template <class T>
Distribution<T> dist_point(T t) {
  return Distribution<T>::point(std::move(t));
}

// Weighted sum of distributions; the weights must be non-negative and sum to 1.
template <class T>
Distribution<T> dist_mix(const std::vector<std::pair<Prob, Distribution<T>>>& parts) {
  Prob total = 0;
  std::map<T, Prob> out;
  for (const auto& [w, d] : parts) {
    if (w < 0) throw DistributionError("negative mixture weight " + prob_str(w));
    total += w;
    if (w == 0) continue;
    for (const auto& [t, p] : d) out[t] += w * p;
  }
  if (total != 1) throw DistributionError("mixture weights sum to " + prob_str(total) + ", not 1");
  return Distribution<T>::from_map(std::move(out));
}

template <class T>
using SuccList = std::vector<Distribution<T>>;

// Memoised successor function; one instance per exploration, not shared between threads.
template <class T, class F>
class StepMemo {
 public:
  explicit StepMemo(F f) : f_(std::move(f)) {}
  const SuccList<T>& operator()(const T& t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) it = cache_.emplace(t, f_(t)).first;
    return it->second;
  }
  std::size_t size() const { return cache_.size(); }

 private:
  F f_;
  std::map<T, SuccList<T>> cache_;
};

template <class T, class F>
StepMemo<T, F> make_memo(F f) {
  return StepMemo<T, F>(std::move(f));
}

enum class StepMode {
  any_subset,   // every nonempty set of steppable points may move
  all_enabled,  // every steppable point moves
};

struct StepLimits {
  std::size_t combo_cap = 10000;
  StepMode mode = StepMode::any_subset;
};

// Per support point (in map order): -1 to stay, otherwise an index into its successor list.
using Move = std::vector<int>;

template <class T>
struct StepSet {
  std::vector<Distribution<T>> results;
  std::vector<Move> moves;  // first selector that produced each result
  bool truncated = false;
};

namespace detail {

template <class T, class Succ>
std::vector<const SuccList<T>*> successor_lists(const Distribution<T>& d, Succ& succ,
                                                std::vector<SuccList<T>>& owned) {
  std::vector<const SuccList<T>*> lists;
  lists.reserve(d.size());
  using R = decltype(succ(std::declval<const T&>()));
  if constexpr (std::is_lvalue_reference_v<R>) {
    for (const auto& [t, p] : d) lists.push_back(&succ(t));
  } else {
    owned.reserve(d.size());
    for (const auto& [t, p] : d) {
      owned.push_back(succ(t));
      lists.push_back(&owned.back());
    }
  }
  return lists;
}

template <class T>
Distribution<T> apply_move(const Distribution<T>& d, const std::vector<const SuccList<T>*>& lists,
                           const Move& mv) {
  std::map<T, Prob> out;
  std::size_t i = 0;
  for (const auto& [t, p] : d) {
    if (mv[i] < 0) {
      out[t] += p;
    } else {
      for (const auto& [u, q] : (*lists[i])[static_cast<std::size_t>(mv[i])]) out[u] += p * q;
    }
    ++i;
  }
  return Distribution<T>::trusted(std::move(out));
}

}  // namespace detail

// All distributions reachable from d in one step.
template <class T, class Succ>
StepSet<T> dist_step(const Distribution<T>& d, Succ&& succ, const StepLimits& lim = {}) {
  StepSet<T> out;
  std::vector<SuccList<T>> owned;
  auto lists = detail::successor_lists(d, succ, owned);
  const std::size_t n = lists.size();

  // digit i ranges over [lo_i, hi_i]; -1 means stay
  std::vector<int> lo(n), hi(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    int k = static_cast<int>(lists[i]->size());
    if (k > 0) any = true;
    hi[i] = k - 1;
    lo[i] = (lim.mode == StepMode::all_enabled && k > 0) ? 0 : -1;
  }
  if (!any) return out;

  std::set<Distribution<T>> seen;
  Move mv(lo);
  std::size_t combos = 0;
  for (;;) {
    bool moves = false;
    for (int x : mv)
      if (x >= 0) moves = true;
    if (moves) {
      if (combos >= lim.combo_cap) {
        out.truncated = true;
        break;
      }
      ++combos;
      auto r = detail::apply_move(d, lists, mv);
      if (seen.insert(r).second) {
        out.results.push_back(std::move(r));
        out.moves.push_back(mv);
      }
    }
    std::size_t i = 0;
    while (i < n && mv[i] == hi[i]) {
      mv[i] = lo[i];
      ++i;
    }
    if (i == n) break;
    ++mv[i];
  }
  return out;
}

struct ReachLimits {
  unsigned depth = 0;
  std::size_t state_cap = 100000;
  StepLimits step{};
};

template <class T>
struct Reach {
  std::vector<Distribution<T>> states;  // states[0] is the start
  std::vector<long> parent;
  std::vector<Move> move;
  std::vector<unsigned> depth;
  std::map<Distribution<T>, std::size_t> index;
  bool truncated = false;  // a cap cut the exploration short
  bool saturated = false;  // no further distribution is reachable at any depth

  bool contains(const Distribution<T>& d) const { return index.count(d) != 0; }
  std::optional<std::size_t> find(const Distribution<T>& d) const {
    auto it = index.find(d);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  std::vector<std::size_t> path(std::size_t i) const {
    std::vector<std::size_t> p;
    for (long j = static_cast<long>(i); j >= 0; j = parent[static_cast<std::size_t>(j)])
      p.push_back(static_cast<std::size_t>(j));
    return {p.rbegin(), p.rend()};
  }
};

// Everything reachable in 0..depth steps, breadth first and deduplicated.
template <class T, class Succ>
Reach<T> dist_multistep(const Distribution<T>& start, Succ&& succ, const ReachLimits& lim) {
  Reach<T> r;
  auto add = [&](Distribution<T> d, long par, Move mv, unsigned dep) {
    r.index.emplace(d, r.states.size());
    r.states.push_back(std::move(d));
    r.parent.push_back(par);
    r.move.push_back(std::move(mv));
    r.depth.push_back(dep);
  };
  add(start, -1, {}, 0);
  std::vector<std::size_t> frontier{0};
  for (unsigned dep = 1; dep <= lim.depth && !frontier.empty(); ++dep) {
    std::vector<std::size_t> next;
    for (std::size_t i : frontier) {
      auto st = dist_step(r.states[i], succ, lim.step);
      if (st.truncated) r.truncated = true;
      for (std::size_t k = 0; k < st.results.size(); ++k) {
        if (r.contains(st.results[k])) continue;
        if (r.states.size() >= lim.state_cap) {
          r.truncated = true;
          return r;
        }
        next.push_back(r.states.size());
        add(std::move(st.results[k]), static_cast<long>(i), std::move(st.moves[k]), dep);
      }
    }
    frontier = std::move(next);
  }
  if (r.truncated) return r;
  // probe the last layer: saturated iff it yields nothing new
  bool fresh = false;
  for (std::size_t i : frontier) {
    auto st = dist_step(r.states[i], succ, lim.step);
    if (st.truncated) {
      r.truncated = true;
      return r;
    }
    for (const auto& d : st.results)
      if (!r.contains(d)) {
        fresh = true;
        break;
      }
    if (fresh) break;
  }
  r.saturated = !fresh;
  return r;
}

template <class T>
struct SearchResult {
  std::optional<std::size_t> found;  // index into reach.states
  Reach<T> reach;
  bool complete = false;  // nothing found and nothing left to explore
};

// Breadth-first search for a distribution satisfying pred, stopping at the first hit.
template <class T, class Succ, class Pred>
SearchResult<T> dist_search(const Distribution<T>& start, Succ&& succ, const ReachLimits& lim, Pred&& pred) {
  SearchResult<T> out;
  Reach<T>& r = out.reach;
  auto add = [&](Distribution<T> d, long par, Move mv, unsigned dep) {
    r.index.emplace(d, r.states.size());
    r.states.push_back(std::move(d));
    r.parent.push_back(par);
    r.move.push_back(std::move(mv));
    r.depth.push_back(dep);
  };
  add(start, -1, {}, 0);
  if (pred(r.states[0])) {
    out.found = 0;
    return out;
  }
  std::vector<std::size_t> frontier{0};
  bool cut = false;
  for (unsigned dep = 1; !frontier.empty(); ++dep) {
    std::vector<std::size_t> next;
    for (std::size_t i : frontier) {
      auto st = dist_step(r.states[i], succ, lim.step);
      if (st.truncated) r.truncated = true;
      if (dep > lim.depth) {
        for (const auto& d : st.results)
          if (!r.contains(d)) cut = true;
        continue;
      }
      for (std::size_t k = 0; k < st.results.size(); ++k) {
        if (r.contains(st.results[k])) continue;
        if (r.states.size() >= lim.state_cap) {
          r.truncated = true;
          return out;
        }
        std::size_t j = r.states.size();
        add(std::move(st.results[k]), static_cast<long>(i), std::move(st.moves[k]), dep);
        if (pred(r.states[j])) {
          out.found = j;
          return out;
        }
        next.push_back(j);
      }
    }
    if (dep > lim.depth) break;
    frontier = std::move(next);
  }
  r.saturated = !cut && !r.truncated;
  out.complete = r.saturated;
  return out;
}

// One step written as an explicit index decomposition: the weights sum to 1 and every
// part either stays (next empty) or moves to one of its successors.
template <class T>
struct StepPart {
  Prob weight;
  T point;
  std::optional<Distribution<T>> next;
};

template <class T>
using Decomposition = std::vector<StepPart<T>>;

template <class T>
struct Derivation {
  Distribution<T> start;
  std::vector<Decomposition<T>> steps;
};

// Checks a decomposed step against the reduction relation; returns its result.
template <class T, class Succ>
std::optional<Distribution<T>> apply_decomposition(const Distribution<T>& from,
                                                   const Decomposition<T>& dec, Succ&& succ) {
  std::map<T, Prob> lhs, rhs;
  Prob total = 0;
  bool moved = false;
  for (const auto& part : dec) {
    if (part.weight <= 0) return std::nullopt;
    total += part.weight;
    lhs[part.point] += part.weight;
    if (!part.next) {
      rhs[part.point] += part.weight;
      continue;
    }
    const auto& options = succ(part.point);
    bool ok = false;
    for (const auto& o : options)
      if (o == *part.next) {
        ok = true;
        break;
      }
    if (!ok) return std::nullopt;
    moved = true;
    for (const auto& [u, q] : *part.next) rhs[u] += part.weight * q;
  }
  if (!moved || total != 1 || lhs != from.support()) return std::nullopt;
  return Distribution<T>::trusted(std::move(rhs));
}

template <class T, class Succ>
std::optional<Distribution<T>> replay(const Derivation<T>& der, Succ&& succ) {
  Distribution<T> cur = der.start;
  for (const auto& dec : der.steps) {
    auto nxt = apply_decomposition(cur, dec, succ);
    if (!nxt) return std::nullopt;
    cur = std::move(*nxt);
  }
  return cur;
}

template <class T, class Succ>
Decomposition<T> decompose_move(const Distribution<T>& from, const Move& mv, Succ&& succ) {
  Decomposition<T> dec;
  std::size_t i = 0;
  for (const auto& [t, p] : from) {
    StepPart<T> part{p, t, std::nullopt};
    if (mv[i] >= 0) part.next = succ(t)[static_cast<std::size_t>(mv[i])];
    dec.push_back(std::move(part));
    ++i;
  }
  return dec;
}

// The derivation that the breadth-first search recorded for states[i].
template <class T, class Succ>
Derivation<T> derivation_to(const Reach<T>& r, std::size_t i, Succ&& succ) {
  Derivation<T> der{r.states[0], {}};
  auto p = r.path(i);
  for (std::size_t k = 1; k < p.size(); ++k)
    der.steps.push_back(decompose_move(r.states[p[k - 1]], r.move[p[k]], succ));
  return der;
}

}  // namespace pcw
