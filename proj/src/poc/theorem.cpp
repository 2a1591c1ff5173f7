// SPDX-License-Identifier: MIT
#include "pcw/poc.hpp"
#include "point_graph.hpp"

namespace pcw {

namespace {

Distribution<AnyTerm> lift_any(const Distribution<Ppi>& d) {
  return d.map([](const Ppi& t) { return AnyTerm(t); });
}

Distribution<AnyTerm> lift_any(const Distribution<Pccs>& d) {
  return d.map([](const Pccs& s) { return AnyTerm(s); });
}

template <class T>
Derivation<AnyTerm> lift_any(const Derivation<T>& der) {
  Derivation<AnyTerm> out{lift_any(der.start), {}};
  for (const auto& dec : der.steps) {
    Decomposition<AnyTerm> d;
    for (const auto& part : dec) {
      std::optional<Distribution<AnyTerm>> nx;
      if (part.next) nx = lift_any(*part.next);
      d.push_back({part.weight, AnyTerm(part.point), std::move(nx)});
    }
    out.steps.push_back(std::move(d));
  }
  return out;
}

template <class T>
std::optional<Distribution<T>> project(const Distribution<AnyTerm>& d) {
  std::map<T, Prob> m;
  for (const auto& [x, p] : d) {
    if (!std::holds_alternative<T>(x)) return std::nullopt;
    m[std::get<T>(x)] += p;
  }
  return Distribution<T>::trusted(std::move(m));
}

void entry_check(const TheoremEntry& e, const PocConfig& cfg, PocFlavor f, TheoremReport& rep) {
  Verdict& v = rep.verdict;
  EncodingSystem sys(e.env, cfg);
  Emulator em(sys);
  const auto& b = cfg.budget;
  const std::string at = e.name.empty() ? e.term.str() : e.name;

  // the flavor's correspondence first
  v.absorb(check_poc(sys, e.term, f).verdict());
  if (v.status == Status::fails) return;

  bool truncated = false, saturated = false;
  auto spoints = point_reach(
      e.term, [&](const Pccs& p) { return support_points(sys.source_steps(p)); }, b.depth, b.state_cap, truncated,
      saturated);
  if (truncated) v.inconclusive(at + ": source exploration hit a cap");
  std::vector<AnyTerm> sources;
  std::set<AnyTerm> universe;
  for (const auto& [p, k] : spoints) {
    sources.emplace_back(p);
    universe.emplace(p);
    universe.emplace(sys.enc(p));
  }
  auto rt = dist_multistep(dist_point(sys.enc(e.term)), sys.target_fn(), b.limits());
  if (rt.truncated) v.inconclusive(at + ": target exploration hit a cap");
  std::set<AnyTerm> targets;
  for (const auto& d : rt.states)
    for (const auto& [t, p] : d) targets.emplace(t);
  for (const auto& u : universe)
    if (!is_source(u)) targets.insert(u);
  universe.insert(targets.begin(), targets.end());

  Relation<AnyTerm> r_t;
  for (const auto& t : targets) r_t.insert({t, t});
  auto enc_any = [&](const AnyTerm& s) { return AnyTerm(sys.enc(std::get<Pccs>(s))); };
  Relation<AnyTerm> r = build_induced_relation(sources, enc_any, r_t, universe);
  rep.relation_size += r.size();
  rep.universe_size += universe.size();

  Related<AnyTerm> related = [&sys](const AnyTerm& a, const AnyTerm& b) {
    if (a == b) return true;
    return is_source(a) && !is_source(b) && std::get<Ppi>(b) == sys.enc(std::get<Pccs>(a));
  };
  Show<AnyTerm> show = [](const AnyTerm& t) { return any_str(t); };

  for (const auto& s : sources) {
    ++v.obligations;
    if (!r.count({s, enc_any(s)})) return v.fail(at + ": (" + any_str(s) + ", its encoding) is missing");
  }
  for (const auto& [x, y] : r) {
    if (is_source(x) || is_source(y)) continue;
    ++v.obligations;
    if (!(x == y)) return v.fail(at + ": target pair (" + any_str(x) + ", " + any_str(y) + ") off the diagonal");
  }
  for (const auto& [x, y] : r) {
    if (!is_source(x) || is_source(y)) continue;
    ++v.obligations;
    // an encoding is related only to its own images among the targets
    for (const auto& [y2, z] : r)
      if (y2 == y && !is_source(z) && !(z == y))
        return v.fail(at + ": " + any_str(y) + " is related to " + any_str(z));
  }
  for (const auto& [x, y] : r) {
    ++v.obligations;
    if (!related(x, y)) return v.fail(at + ": (" + any_str(x) + ", " + any_str(y) + ") is not decided by the predicate");
  }
  for (const auto& x : universe)
    for (const auto& y : universe)
      if (related(x, y) && !r.count({x, y})) {
        ++v.obligations;
        return v.fail(at + ": the predicate relates (" + any_str(x) + ", " + any_str(y) + ") outside the relation");
      }
  v.absorb(check_preorder(r, universe, show));
  if (v.status == Status::fails) return;

  std::vector<std::pair<AnyTerm, AnyTerm>> pairs;
  for (const auto& s : sources) pairs.emplace_back(s, enc_any(s));

  Verdict sim;
  if (f == PocFlavor::strong) {
    sim = check_strong_prob_bisimulation(pairs, related, sys.any_fn(), show);
  } else {
    SimSpec<AnyTerm> spec{pairs, related, sys.any_fn(), show, b, b.depth * cfg.emulation_depth, {}, {}};
    spec.forward = [&](const AnyTerm& p, const AnyTerm&, const Distribution<AnyTerm>& delta)
        -> std::optional<Derivation<AnyTerm>> {
      auto d = project<Pccs>(delta);
      if (!d) return std::nullopt;
      const auto& src = em.source(std::get<Pccs>(p));
      auto i = src.reach.find(*d);
      if (!i) return std::nullopt;
      auto der = em.complete(derivation_to(src.reach, *i, sys.source_fn()));
      if (!der) return std::nullopt;
      return lift_any(*der);
    };
    const bool escape = f == PocFlavor::weak;
    spec.backward = [&, escape](const AnyTerm& p, const AnyTerm&, const Distribution<AnyTerm>& theta)
        -> std::optional<std::pair<Derivation<AnyTerm>, Derivation<AnyTerm>>> {
      auto t = project<Ppi>(theta);
      if (!t) return std::nullopt;
      bool complete = false;
      const Pccs& s = std::get<Pccs>(p);
      auto c = em.sound(s, *t, escape, complete);
      if (!c) return std::nullopt;
      const auto& src = em.source(s);
      return std::make_pair(lift_any(derivation_to(src.reach, c->source_state, sys.source_fn())),
                            lift_any(c->target));
    };
    sim = f == PocFlavor::weak ? check_prob_correspondence_sim(spec) : check_prob_bisimulation(spec);
  }
  if (sim.counterexample) sim.counterexample = at + ": " + *sim.counterexample;
  v.absorb(sim);
}

}  // namespace

TheoremReport theorem_instance_check(const std::vector<TheoremEntry>& corpus, const PocConfig& cfg, PocFlavor f) {
  TheoremReport rep;
  rep.verdict.check = std::string("theorem-instance-") + flavor_str(f);
  for (const auto& e : corpus) {
    entry_check(e, cfg, f, rep);
    if (rep.verdict.status == Status::fails) break;
  }
  return rep;
}

}  // namespace pcw
