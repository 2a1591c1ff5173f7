// SPDX-License-Identifier: MIT
#include "pcw/pccs.hpp"

#include <algorithm>
#include <deque>

namespace pcw {

std::string pccs_label_str(const PccsLabel& l) {
  switch (l.kind) {
    case GuardKind::input: return l.name;
    case GuardKind::output: return "'" + l.name;
    case GuardKind::tau: return "tau";
  }
  return "?";
}

namespace {

void steps_into(const Pccs& p, const DefEnv& env, std::vector<PccsTransition>& out) {
  const auto& n = p.node();
  switch (n.kind) {
    case PccsKind::choice: {
      std::vector<std::pair<Pccs, Prob>> parts;
      for (const auto& b : n.branches) parts.emplace_back(b.cont, b.p);
      out.push_back({{n.guard.kind, n.guard.name}, Distribution<Pccs>(parts)});
      break;
    }
    case PccsKind::par: {
      const Pccs& l = n.kids[0];
      const Pccs& r = n.kids[1];
      std::vector<PccsTransition> ls, rs;
      steps_into(l, env, ls);
      steps_into(r, env, rs);
      for (const auto& t : ls)
        out.push_back({t.label, t.dist.map([&](const Pccs& x) { return pccs_par(x, r); })});
      for (const auto& t : rs)
        out.push_back({t.label, t.dist.map([&](const Pccs& x) { return pccs_par(l, x); })});
      // communication: one side inputs, the other outputs on the same name
      for (const auto& a : ls) {
        if (a.label.kind == GuardKind::tau) continue;
        for (const auto& b : rs) {
          if (b.label.kind == GuardKind::tau || b.label.name != a.label.name || b.label.kind == a.label.kind)
            continue;
          std::map<Pccs, Prob> prod;
          for (const auto& [x, px] : a.dist)
            for (const auto& [y, py] : b.dist) prod[pccs_par(x, y)] += px * py;
          out.push_back({{GuardKind::tau, ""}, Distribution<Pccs>::trusted(std::move(prod))});
        }
      }
      break;
    }
    case PccsKind::restrict: {
      std::vector<PccsTransition> inner;
      steps_into(n.kids[0], env, inner);
      for (const auto& t : inner) {
        if (t.label.kind != GuardKind::tau &&
            std::binary_search(n.names.begin(), n.names.end(), t.label.name))
          continue;
        out.push_back({t.label, t.dist.map([&](const Pccs& x) { return pccs_restrict(x, n.names); })});
      }
      break;
    }
    case PccsKind::relabel: {
      std::vector<PccsTransition> inner;
      steps_into(n.kids[0], env, inner);
      for (const auto& t : inner) {
        PccsLabel l = t.label;
        if (l.kind != GuardKind::tau) l.name = apply_name(n.rename, l.name);
        out.push_back({l, t.dist.map([&](const Pccs& x) { return pccs_relabel(x, n.rename); })});
      }
      break;
    }
    case PccsKind::call: {
      auto it = env.find(n.ident);
      if (it == env.end()) throw SemanticsError("unknown process constant " + n.ident);
      const auto& def = it->second;
      if (def.params.size() != n.names.size())
        throw SemanticsError("constant " + n.ident + " expects " + std::to_string(def.params.size()) +
                             " arguments, got " + std::to_string(n.names.size()));
      NameMap s;
      for (std::size_t i = 0; i < def.params.size(); ++i) s[def.params[i]] = n.names[i];
      out.push_back({{GuardKind::tau, ""}, dist_point(pccs_subst(def.body, s))});
      break;
    }
    case PccsKind::success:
    case PccsKind::inert:
      break;
  }
}

}  // namespace

std::vector<PccsTransition> pccs_labelled_steps(const Pccs& p, const DefEnv& env) {
  std::vector<PccsTransition> out;
  steps_into(p, env, out);
  return out;
}

std::vector<Distribution<Pccs>> pccs_reduce(const Pccs& p, const DefEnv& env) {
  std::vector<Distribution<Pccs>> out;
  std::set<Distribution<Pccs>> seen;
  for (auto& t : pccs_labelled_steps(p, env))
    if (t.label.kind == GuardKind::tau && seen.insert(t.dist).second) out.push_back(std::move(t.dist));
  return out;
}

namespace {

bool unguarded_success(const Pccs& p) {
  const auto& n = p.node();
  switch (n.kind) {
    case PccsKind::success: return true;
    case PccsKind::par: return unguarded_success(n.kids[0]) || unguarded_success(n.kids[1]);
    case PccsKind::restrict:
    case PccsKind::relabel: return unguarded_success(n.kids[0]);
    default: return false;
  }
}

}  // namespace

bool pccs_has_barb(const Pccs& p, const DefEnv& env, const Observable& o) {
  if (o.kind == ObsKind::success) return unguarded_success(p);
  GuardKind want = o.kind == ObsKind::name ? GuardKind::input : GuardKind::output;
  for (const auto& t : pccs_labelled_steps(p, env))
    if (t.label.kind == want && t.label.name == o.name) return true;
  return false;
}

BarbSearch pccs_reach_barb_search(const Pccs& p, const DefEnv& env, const Observable& o,
                                  unsigned depth, std::size_t state_cap) {
  BarbSearch res;
  res.complete = true;
  std::map<Pccs, unsigned> seen{{p, 0}};
  std::deque<Pccs> q{p};
  while (!q.empty()) {
    Pccs cur = q.front();
    q.pop_front();
    if (pccs_has_barb(cur, env, o)) {
      res.found = true;
      break;
    }
    unsigned d = seen[cur];
    auto succ = pccs_reduce(cur, env);
    if (succ.empty()) continue;
    if (d >= depth) {
      res.complete = false;
      continue;
    }
    for (const auto& dist : succ)
      for (const auto& [x, px] : dist) {
        if (seen.count(x)) continue;
        if (seen.size() >= state_cap) {
          res.complete = false;
          continue;
        }
        seen.emplace(x, d + 1);
        q.push_back(x);
      }
  }
  res.states = seen.size();
  return res;
}

bool pccs_reach_barb(const Pccs& p, const DefEnv& env, const Observable& o, unsigned depth) {
  return pccs_reach_barb_search(p, env, o, depth).found;
}

std::set<Observable> pccs_free_observables(const Pccs& p) {
  std::set<Observable> out;
  for (const auto& x : p.free_names()) {
    out.insert({ObsKind::name, x});
    out.insert({ObsKind::coname, x});
  }
  return out;
}

}  // namespace pcw
