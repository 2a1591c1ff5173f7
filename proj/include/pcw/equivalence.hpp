// SPDX-License-Identifier: MIT
// Bounded checkers for probabilistic (bi)simulations and preorders over any term type.
#pragma once

#include "pcw/distribution.hpp"
#include "pcw/lift.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pcw {

enum class Status { holds, fails, inconclusive };

const char* status_str(Status s);
// fails over inconclusive over holds
Status worst(Status a, Status b);
// 0 holds, 1 fails, 2 inconclusive
int status_exit_code(Status s);

struct Budget {
  unsigned depth = 4;
  std::size_t state_cap = 100000;
  std::size_t combo_cap = 10000;
  StepMode mode = StepMode::any_subset;

  ReachLimits at(unsigned d) const { return {d, state_cap, {combo_cap, mode}}; }
  ReachLimits limits() const { return at(depth); }
};

struct Verdict {
  Verdict() = default;
  explicit Verdict(std::string name) : check(std::move(name)) {}

  std::string check;
  Status status = Status::holds;
  std::size_t obligations = 0;
  std::vector<std::string> witnesses;
  std::optional<std::string> counterexample;  // set when status is fails
  std::vector<std::string> notes;             // budget exhaustion and the like

  void fail(std::string why);
  void inconclusive(std::string why);
  // Folds another verdict into this one; the first counterexample wins.
  void absorb(const Verdict& other);
};

std::string verdict_str(const Verdict& v);

template <class T>
using Related = std::function<bool(const T&, const T&)>;

template <class T>
using StepFn = std::function<const SuccList<T>&(const T&)>;

template <class T>
using Show = std::function<std::string(const T&)>;

template <class T>
std::string show_dist(const Distribution<T>& d, const Show<T>& show) {
  std::string out = "{";
  bool first = true;
  for (const auto& [t, p] : d) {
    out += (first ? "" : ", ") + prob_str(p) + ": " + show(t);
    first = false;
  }
  return out + "}";
}

template <class T>
std::string show_coupling(const Coupling<T, T>& c, const Show<T>& show) {
  std::string out = "{";
  bool first = true;
  for (const auto& [pq, w] : c) {
    out += (first ? "" : ", ") + prob_str(w) + ": (" + show(pq.first) + ", " + show(pq.second) + ")";
    first = false;
  }
  return out + "}";
}

// Inputs shared by the simulation checkers. Universal obligations range over what is
// reachable within `depth`; existential answers are searched within `answer_depth`.
template <class T>
struct SimSpec {
  std::vector<std::pair<T, T>> pairs;
  Related<T> related;
  StepFn<T> step;
  Show<T> show;
  Budget budget;
  unsigned answer_depth = 4;
  // Proposed answers; a proposal is replayed against `step` and lifted before it is used.
  std::function<std::optional<Derivation<T>>(const T& p, const T& q, const Distribution<T>& delta)> forward;
  // For clause 2: a derivation from p and one from theta (empty steps when not needed).
  std::function<std::optional<std::pair<Derivation<T>, Derivation<T>>>(const T& p, const T& q,
                                                                        const Distribution<T>& theta)>
      backward;
};

namespace detail {

template <class T>
class SimRun {
 public:
  explicit SimRun(const SimSpec<T>& s) : s_(s) {}

  const Reach<T>& reach(const Distribution<T>& d, unsigned depth) {
    auto key = std::make_pair(d, depth);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, dist_multistep(d, s_.step, s_.budget.at(depth))).first;
    return it->second;
  }

  std::optional<Coupling<T, T>> lift(const Distribution<T>& a, const Distribution<T>& b) const {
    return lift_check(s_.related, a, b);
  }

  bool verified(const Derivation<T>& der, const Distribution<T>& from, Distribution<T>& result) const {
    if (!(der.start == from) || der.steps.size() > s_.answer_depth + s_.budget.depth) return false;
    auto r = replay(der, s_.step);
    if (!r) return false;
    result = std::move(*r);
    return true;
  }

  // Clause 1: P ==> delta is answered by some Q ==> theta with (delta, theta) lifted.
  Status forward(const T& p, const T& q, const Distribution<T>& delta, Verdict& v) {
    if (p == q) {
      if (lift(delta, delta)) return Status::holds;
    }
    if (s_.forward) {
      if (auto der = s_.forward(p, q, delta)) {
        Distribution<T> theta;
        if (verified(*der, dist_point(q), theta)) {
          if (auto c = lift(delta, theta)) return Status::holds;
        }
      }
    }
    const auto& rq = reach(dist_point(q), s_.answer_depth);
    for (const auto& theta : rq.states)
      if (lift(delta, theta)) return Status::holds;
    std::string what = "(" + s_.show(p) + ", " + s_.show(q) + "): " + show_dist(delta, s_.show);
    if (rq.saturated && !rq.truncated) {
      v.fail("no answer for " + what);
      return Status::fails;
    }
    v.inconclusive("no answer within depth " + std::to_string(s_.answer_depth) + " for " + what);
    return Status::inconclusive;
  }

  // Clause 2 of the correspondence simulation: theta may still move before it is matched.
  Status backward_escape(const T& p, const T& q, const Distribution<T>& theta, Verdict& v) {
    if (p == q && lift(theta, theta)) return Status::holds;
    if (s_.backward) {
      if (auto ders = s_.backward(p, q, theta)) {
        Distribution<T> d1, t1;
        if (verified(ders->first, dist_point(p), d1) && verified(ders->second, theta, t1) && lift(d1, t1))
          return Status::holds;
      }
    }
    const auto& rp = reach(dist_point(p), s_.answer_depth);
    const auto& rt = reach(theta, s_.answer_depth);
    for (const auto& t1 : rt.states)
      for (const auto& d1 : rp.states)
        if (lift(d1, t1)) return Status::holds;
    std::string what = "(" + s_.show(p) + ", " + s_.show(q) + "): " + show_dist(theta, s_.show);
    if (rp.saturated && rt.saturated && !rp.truncated && !rt.truncated) {
      v.fail("no catch-up for " + what);
      return Status::fails;
    }
    v.inconclusive("no catch-up within depth " + std::to_string(s_.answer_depth) + " for " + what);
    return Status::inconclusive;
  }

  // Clause 2 of the bisimulation: theta itself must be matched.
  Status backward_exact(const T& p, const T& q, const Distribution<T>& theta, Verdict& v) {
    if (p == q && lift(theta, theta)) return Status::holds;
    if (s_.backward) {
      if (auto ders = s_.backward(p, q, theta)) {
        Distribution<T> d1;
        if (verified(ders->first, dist_point(p), d1) && lift(d1, theta)) return Status::holds;
      }
    }
    const auto& rp = reach(dist_point(p), s_.answer_depth);
    for (const auto& d1 : rp.states)
      if (lift(d1, theta)) return Status::holds;
    std::string what = "(" + s_.show(p) + ", " + s_.show(q) + "): " + show_dist(theta, s_.show);
    if (rp.saturated && !rp.truncated) {
      v.fail("unmatched " + what);
      return Status::fails;
    }
    v.inconclusive("unmatched within depth " + std::to_string(s_.answer_depth) + " " + what);
    return Status::inconclusive;
  }

  template <class Back>
  Status pair(const T& p, const T& q, Verdict& v, Back&& back) {
    Status st = Status::holds;
    const auto& rp = reach(dist_point(p), s_.budget.depth);
    if (rp.truncated) {
      v.inconclusive("exploration of " + s_.show(p) + " hit a cap");
      st = worst(st, Status::inconclusive);
    }
    for (const auto& delta : rp.states) {
      ++v.obligations;
      st = worst(st, forward(p, q, delta, v));
      if (st == Status::fails) return st;
    }
    const auto& rq = reach(dist_point(q), s_.budget.depth);
    if (rq.truncated) {
      v.inconclusive("exploration of " + s_.show(q) + " hit a cap");
      st = worst(st, Status::inconclusive);
    }
    for (const auto& theta : rq.states) {
      ++v.obligations;
      st = worst(st, back(p, q, theta, v));
      if (st == Status::fails) return st;
    }
    return st;
  }

  const SimSpec<T>& spec() const { return s_; }

 private:
  const SimSpec<T>& s_;
  std::map<std::pair<Distribution<T>, unsigned>, Reach<T>> cache_;
};

}  // namespace detail

template <class T>
Verdict check_prob_correspondence_sim(const SimSpec<T>& spec) {
  Verdict v{"correspondence-simulation"};
  detail::SimRun<T> run(spec);
  for (const auto& [p, q] : spec.pairs) {
    if (!spec.related(p, q)) {
      v.fail("pair (" + spec.show(p) + ", " + spec.show(q) + ") is not in the relation");
      return v;
    }
    run.pair(p, q, v, [&](const T& a, const T& b, const Distribution<T>& t, Verdict& vv) {
      return run.backward_escape(a, b, t, vv);
    });
    if (v.status == Status::fails) return v;
  }
  return v;
}

template <class T>
Verdict check_prob_bisimulation(const SimSpec<T>& spec) {
  Verdict v{"bisimulation"};
  detail::SimRun<T> run(spec);
  for (const auto& [p, q] : spec.pairs) {
    if (!spec.related(p, q)) {
      v.fail("pair (" + spec.show(p) + ", " + spec.show(q) + ") is not in the relation");
      return v;
    }
    run.pair(p, q, v, [&](const T& a, const T& b, const Distribution<T>& t, Verdict& vv) {
      return run.backward_exact(a, b, t, vv);
    });
    if (v.status == Status::fails) return v;
  }
  return v;
}

// Single reductions on both sides; exact, no depth involved.
template <class T>
Verdict check_strong_prob_bisimulation(const std::vector<std::pair<T, T>>& pairs, const Related<T>& related,
                                       const StepFn<T>& step, const Show<T>& show) {
  Verdict v{"strong-bisimulation"};
  auto one_way = [&](const T& a, const T& b, bool flip) {
    for (const auto& d : step(a)) {
      ++v.obligations;
      bool ok = false;
      for (const auto& e : step(b)) {
        ok = flip ? lift_check(related, e, d).has_value() : lift_check(related, d, e).has_value();
        if (ok) break;
      }
      if (!ok) {
        v.fail("step of " + show(a) + " to " + show_dist(d, show) + " is not matched by " + show(b));
        return false;
      }
    }
    return true;
  };
  for (const auto& [p, q] : pairs) {
    if (!related(p, q)) {
      v.fail("pair (" + show(p) + ", " + show(q) + ") is not in the relation");
      return v;
    }
    if (!one_way(p, q, false) || !one_way(q, p, true)) return v;
  }
  return v;
}

// Reflexive on the universe and transitive.
template <class T>
Verdict check_preorder(const Relation<T>& r, const std::set<T>& universe, const Show<T>& show) {
  Verdict v{"preorder"};
  for (const auto& u : universe) {
    ++v.obligations;
    if (!r.count({u, u})) {
      v.fail("not reflexive at " + show(u));
      return v;
    }
  }
  std::map<T, std::vector<T>> succ;
  for (const auto& [a, b] : r) succ[a].push_back(b);
  for (const auto& [a, b] : r) {
    auto it = succ.find(b);
    if (it == succ.end()) continue;
    for (const auto& c : it->second) {
      ++v.obligations;
      if (!r.count({a, c})) {
        v.fail("not transitive: (" + show(a) + ", " + show(b) + ") and (" + show(b) + ", " + show(c) + ")");
        return v;
      }
    }
  }
  return v;
}

template <class T>
Relation<T> reflexive_transitive_closure(Relation<T> r, const std::set<T>& universe) {
  for (const auto& u : universe) r.insert({u, u});
  // Warshall over the elements of the field
  std::set<T> field = universe;
  for (const auto& [a, b] : r) {
    field.insert(a);
    field.insert(b);
  }
  std::vector<T> xs(field.begin(), field.end());
  std::map<T, std::size_t> ix;
  for (std::size_t i = 0; i < xs.size(); ++i) ix[xs[i]] = i;
  const std::size_t n = xs.size();
  std::vector<std::vector<char>> m(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : r) m[ix[a]][ix[b]] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (m[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (m[k][j]) m[i][j] = 1;
  Relation<T> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m[i][j]) out.insert({xs[i], xs[j]});
  return out;
}

// Reflexive-transitive closure of r_t together with every (S, enc(S)), over the universe
// of the sources, their images and the field of r_t.
template <class T, class Enc>
Relation<T> build_induced_relation(const std::vector<T>& sources, Enc&& enc, const Relation<T>& r_t,
                                   std::set<T> universe = {}) {
  Relation<T> r = r_t;
  for (const auto& s : sources) {
    T e = enc(s);
    r.insert({s, e});
    universe.insert(s);
    universe.insert(e);
  }
  return reflexive_transitive_closure(std::move(r), universe);
}

enum class FixpointMode { bisim, strong, corr_sim };

template <class T>
struct FixpointResult {
  Relation<T> relation;
  bool partial = false;  // some pair was removed only for lack of budget
  unsigned rounds = 0;
};

// Largest relation over states that passes the chosen check, by removing failing pairs
// until nothing changes. Each sweep uses the relation of the previous sweep.
template <class T>
FixpointResult<T> greatest_fixpoint_bisim(const std::set<T>& states, const StepFn<T>& step, const Budget& budget,
                                          FixpointMode mode, const Show<T>& show) {
  FixpointResult<T> out;
  for (const auto& a : states)
    for (const auto& b : states) out.relation.insert({a, b});
  for (bool changed = true; changed;) {
    changed = false;
    ++out.rounds;
    Relation<T> cur = out.relation;
    Related<T> rel = [&cur](const T& a, const T& b) { return cur.count({a, b}) != 0; };
    Relation<T> next;
    for (const auto& pq : cur) {
      Verdict v;
      if (mode == FixpointMode::strong) {
        v = check_strong_prob_bisimulation<T>({pq}, rel, step, show);
      } else {
        SimSpec<T> spec{{pq}, rel, step, show, budget, budget.depth, {}, {}};
        v = mode == FixpointMode::bisim ? check_prob_bisimulation(spec) : check_prob_correspondence_sim(spec);
      }
      if (v.status == Status::holds) {
        next.insert(pq);
      } else {
        changed = true;
        if (v.status == Status::inconclusive) out.partial = true;
      }
    }
    out.relation = std::move(next);
  }
  return out;
}

}  // namespace pcw
