// SPDX-License-Identifier: MIT
#include "pcw/poc.hpp"
#include "point_graph.hpp"

#include <algorithm>
#include <random>

namespace pcw {

namespace {

Status sensitiveness(const BarbSearch& s, const PpiBarbSearch& t, std::string& why) {
  if (s.found == t.found) {
    if (s.found || (s.complete && t.complete)) return Status::holds;
    why = "neither side reaches the barb within the bounds, and one search was cut";
    return Status::inconclusive;
  }
  const bool negative_complete = s.found ? t.complete : s.complete;
  why = s.found ? "the source reaches the barb, its encoding does not" : "the encoding reaches the barb, the source does not";
  return negative_complete ? Status::fails : Status::inconclusive;
}

}  // namespace

Verdict check_success_sensitiveness(EncodingSystem& sys, const Pccs& s) {
  Verdict v{"success-sensitiveness"};
  const auto& b = sys.config().budget;
  Observable ok{ObsKind::success, ""};
  auto src = pccs_reach_barb_search(s, sys.env(), ok, 2 * b.depth, b.state_cap);
  auto tgt = ppi_reach_barb_search(sys.enc(s), ok, 4 * b.depth, b.state_cap);
  ++v.obligations;
  std::string why;
  Status st = sensitiveness(src, tgt, why);
  if (st == Status::fails) v.fail(s.str() + ": " + why);
  if (st == Status::inconclusive) v.inconclusive(s.str() + ": " + why);
  return v;
}

Verdict check_barb_sensitiveness(EncodingSystem& sys, const Pccs& s) {
  Verdict v{"barb-sensitiveness"};
  const auto& b = sys.config().budget;
  RenamingPolicy pol;
  std::vector<std::pair<Observable, Observable>> obs{{{ObsKind::success, ""}, {ObsKind::success, ""}}};
  for (const auto& n : s.free_names()) {
    obs.push_back({{ObsKind::name, n}, {ObsKind::name, pol.phi(n)}});
    obs.push_back({{ObsKind::coname, n}, {ObsKind::coname, pol.phi(n)}});
  }
  for (const auto& [o, e] : obs) {
    auto src = pccs_reach_barb_search(s, sys.env(), o, 2 * b.depth, b.state_cap);
    auto tgt = ppi_reach_barb_search(sys.enc(s), e, 4 * b.depth, b.state_cap);
    ++v.obligations;
    std::string why;
    Status st = sensitiveness(src, tgt, why);
    if (st == Status::fails) v.fail(s.str() + " at " + observable_str(o) + ": " + why);
    if (st == Status::inconclusive) v.inconclusive(s.str() + " at " + observable_str(o) + ": " + why);
  }
  return v;
}

namespace {

// Depth-first search for a state that repeats along one path of point steps.
template <class T, class Next>
class CycleSearch {
 public:
  CycleSearch(Next next, std::size_t cap) : next_(std::move(next)), cap_(cap) {}

  DivergenceSearch run(const T& start, unsigned depth) {
    DivergenceSearch out;
    out.cycle = visit(start, depth);
    out.complete = !out.cycle && !cut_;
    out.states = done_.size() + path_.size();
    for (const auto& t : loop_) out.loop.push_back(t.str());
    return out;
  }

 private:
  bool visit(const T& t, unsigned left) {
    auto it = done_.find(t);
    if (it != done_.end() && it->second >= left) return false;
    if (done_.size() >= cap_) {
      cut_ = true;
      return false;
    }
    path_.push_back(t);
    on_path_.insert(t);
    const auto next = next_(t);
    for (const auto& u : next) {
      if (on_path_.count(u)) {
        auto from = std::find(path_.begin(), path_.end(), u);
        loop_.assign(from, path_.end());
        loop_.push_back(u);
        return true;
      }
      if (left == 0) {
        cut_ = true;
        continue;
      }
      if (visit(u, left - 1)) return true;
    }
    on_path_.erase(t);
    path_.pop_back();
    done_[t] = left;
    return false;
  }

  Next next_;
  std::size_t cap_;
  bool cut_ = false;
  std::vector<T> path_;
  std::set<T> on_path_;
  std::map<T, unsigned> done_;  // explored with this much depth left
  std::vector<T> loop_;
};

template <class T, class Next>
DivergenceSearch cycle_search(const T& start, Next next, unsigned depth, std::size_t cap) {
  return CycleSearch<T, Next>(std::move(next), cap).run(start, depth);
}

}  // namespace

DivergenceSearch source_divergence(EncodingSystem& sys, const Pccs& s, unsigned depth) {
  auto next = [&sys](const Pccs& p) { return support_points(sys.source_steps(p)); };
  return cycle_search(s, next, depth, sys.config().budget.state_cap);
}

DivergenceSearch target_divergence(EncodingSystem& sys, const Ppi& t, unsigned depth) {
  auto next = [&sys](const Ppi& p) { return support_points(sys.target_steps(p)); };
  return cycle_search(t, next, depth, sys.config().budget.state_cap);
}

Verdict check_divergence_reflection(EncodingSystem& sys, const Pccs& s) {
  Verdict v{"divergence-reflection"};
  const unsigned d = sys.config().budget.depth;
  auto tgt = target_divergence(sys, sys.enc(s), 4 * d);
  ++v.obligations;
  if (!tgt.cycle) {
    if (!tgt.complete) v.notes.push_back("target search cut at depth " + std::to_string(4 * d));
    return v;
  }
  auto src = source_divergence(sys, s, 2 * d);
  if (src.cycle) return v;
  std::string loop;
  for (const auto& x : tgt.loop) loop += (loop.empty() ? "" : " -> ") + x;
  if (src.complete) {
    v.fail(s.str() + " converges but its encoding diverges: " + loop);
  } else {
    v.inconclusive(s.str() + ": the encoding diverges, no source cycle within depth " + std::to_string(2 * d));
  }
  return v;
}

Verdict check_name_invariance(EncodingSystem& sys, const Pccs& s, unsigned samples, std::uint64_t seed) {
  Verdict v{"name-invariance"};
  RenamingPolicy pol;
  std::vector<std::string> dom(s.free_names().begin(), s.free_names().end());
  if (dom.empty()) {
    ++v.obligations;
    return v;
  }
  std::set<std::string> avoid = pccs_all_names(s);
  for (const auto& [c, def] : sys.env()) {
    auto a = pccs_all_names(def.body);
    avoid.insert(a.begin(), a.end());
    avoid.insert(def.params.begin(), def.params.end());
  }
  FreshSupply fresh(avoid);
  std::vector<std::string> range = dom;
  range.push_back(fresh("z"));
  range.push_back(fresh("z"));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, range.size() - 1);
  const Ppi base = encode_outer(s, sys.env(), pol, sys.config().mutation);
  for (unsigned k = 0; k < samples; ++k) {
    NameMap sigma, lifted;
    for (const auto& n : dom) {
      sigma[n] = range[pick(rng)];
      lifted[pol.phi(n)] = pol.phi(sigma[n]);
    }
    ++v.obligations;
    Ppi lhs = encode_outer(pccs_subst(s, sigma), sys.env(), pol, sys.config().mutation);
    Ppi rhs = ppi_subst(base, lifted);
    if (!(lhs == rhs)) {
      std::string m;
      for (const auto& [a, b] : sigma) m += (m.empty() ? "" : ", ") + a + "->" + b;
      v.fail(s.str() + " under {" + m + "}: " + lhs.str() + " differs from " + rhs.str());
      return v;
    }
  }
  return v;
}

namespace {

// The contexts of the encoding, written out once more independently of the encoder.
Ppi context_of(const Pccs& s, const std::vector<Ppi>& holes) {
  const auto& n = s.node();
  RenamingPolicy pol;
  switch (n.kind) {
    case PccsKind::choice: {
      std::vector<PpiBranch> bs;
      for (std::size_t i = 0; i < holes.size(); ++i)
        bs.push_back({static_cast<int>(i + 1), n.branches[i].p, {}, holes[i]});
      if (n.guard.kind == GuardKind::output) return ppi_select_out(pol.phi(n.guard.name), bs);
      const std::string c = n.guard.kind == GuardKind::input ? "#i" : "#t";
      Ppi local = ppi_restrict(c, ppi_par(ppi_select_out(c, bs), ppi_input(c, {}, ppi_nil())));
      return n.guard.kind == GuardKind::input ? ppi_input(pol.phi(n.guard.name), {}, local) : local;
    }
    case PccsKind::par:
      return ppi_par(holes[0], holes[1]);
    case PccsKind::restrict: {
      std::vector<std::string> xs;
      for (const auto& a : n.names) xs.push_back(pol.phi(a));
      return ppi_restrict(xs, holes[0]);
    }
    case PccsKind::relabel: {
      NameMap m;
      for (const auto& [a, b] : n.rename) m[pol.phi(a)] = pol.phi(b);
      return ppi_subst(holes[0], m);
    }
    case PccsKind::call: {
      std::vector<std::string> args;
      for (const auto& a : n.names) args.push_back(pol.phi(a));
      return ppi_output(pol.constant(n.ident), args, ppi_nil());
    }
    case PccsKind::success:
      return ppi_success();
    case PccsKind::inert:
      return ppi_nil();
  }
  return ppi_nil();
}

void compositional_at(const Pccs& s, Mutation m, Verdict& v) {
  const auto& n = s.node();
  std::vector<Pccs> ops;
  for (const auto& b : n.branches) ops.push_back(b.cont);
  for (const auto& k : n.kids) ops.push_back(k);
  std::vector<Ppi> holes;
  for (const auto& o : ops) holes.push_back(encode_inner(o, {}, m));
  ++v.obligations;
  Ppi want = context_of(s, holes);
  Ppi got = encode_inner(s, {}, m);
  if (!(want == got)) v.fail("at " + s.str() + ": encoding " + got.str() + ", context gives " + want.str());
  for (const auto& o : ops)
    if (v.status != Status::fails) compositional_at(o, m, v);
}

}  // namespace

Verdict check_weak_compositionality(EncodingSystem& sys, const Pccs& s) {
  Verdict v{"weak-compositionality"};
  const Mutation m = sys.config().mutation;
  compositional_at(s, m, v);
  for (const auto& [c, def] : sys.env())
    if (v.status != Status::fails) compositional_at(def.body, m, v);
  if (v.status == Status::fails || sys.env().empty()) return v;
  RenamingPolicy pol;
  std::vector<Ppi> parts{encode_inner(s, pol, m)};
  std::vector<std::string> chans;
  for (const auto& [c, def] : sys.env()) {
    chans.push_back(pol.constant(c));
    std::vector<std::string> ps;
    for (const auto& x : def.params) ps.push_back(pol.phi(x));
    parts.push_back(ppi_rep_in(chans.back(), ps, encode_inner(def.body, pol, m)));
  }
  ++v.obligations;
  Ppi want = ppi_restrict(chans, ppi_par(parts));
  Ppi got = encode_outer(s, sys.env(), pol, m);
  if (!(want == got)) v.fail("outer context of " + s.str() + ": " + got.str() + " versus " + want.str());
  return v;
}

Verdict check_step_taxonomy(EncodingSystem& sys, const Pccs& s) {
  Verdict v{"step-taxonomy"};
  const auto& b = sys.config().budget;
  bool truncated = false, saturated = false;
  auto next = [&sys](const Ppi& t) { return support_points(sys.target_steps(t)); };
  auto points = point_reach(sys.enc(s), next, 2 * b.depth, b.state_cap, truncated, saturated);
  if (truncated) v.inconclusive("target exploration hit a cap");
  for (const auto& [t, k] : points) {
    const auto& rs = sys.target_classified(t);
    for (const auto& [d, c] : rs) {
      ++v.obligations;
      if (c.kind == StepClassKind::other) {
        v.fail(t.str() + " reduces on " + c.channel + ", which is neither reserved nor a source name");
        return v;
      }
      if (c.kind != StepClassKind::B) continue;
      std::size_t same = 0;
      for (const auto& [d2, c2] : rs)
        if (c2.channel == c.channel) ++same;
      if (same != 1) {
        v.fail(t.str() + " has " + std::to_string(same) + " reductions on " + c.channel);
        return v;
      }
      // the B-step stays enabled after any other reduction
      for (const auto& [d2, c2] : rs) {
        if (c2 == c) continue;
        for (const auto& [u, p] : d2) {
          bool has_b = false;
          for (const auto& [d3, c3] : sys.target_classified(u))
            if (c3.kind == StepClassKind::B) has_b = true;
          if (!has_b) {
            v.fail("the " + c.channel + " step of " + t.str() + " is disabled by a " + step_class_str(c2) + " step");
            return v;
          }
        }
      }
    }
  }
  return v;
}

std::vector<TraceLine> emulation_trace(EncodingSystem& sys, const Pccs& s, unsigned depth) {
  std::vector<TraceLine> out;
  Emulator em(sys);
  auto sfn = sys.source_fn();
  auto tfn = sys.target_fn();
  Distribution<Pccs> cur = dist_point(s);
  for (unsigned k = 0; k < depth; ++k) {
    auto st = dist_step(cur, sfn, {sys.config().budget.combo_cap, StepMode::all_enabled});
    if (st.results.empty()) break;
    Derivation<Pccs> one{cur, {decompose_move(cur, st.moves[0], sfn)}};
    TraceLine line;
    line.source = show_dist<Pccs>(st.results[0], show_pccs);
    if (auto der = em.complete(one)) {
      Distribution<Ppi> t = der->start;
      for (const auto& dec : der->steps) {
        auto nx = apply_decomposition(t, dec, tfn);
        if (!nx) break;
        Derivation<Ppi> single{t, {dec}};
        line.classes.push_back(em.trace(single));
        t = std::move(*nx);
        line.target.push_back(show_dist<Ppi>(t, show_ppi));
      }
    } else {
      line.classes.push_back("?");
      line.target.push_back("no emulation within depth " + std::to_string(sys.config().emulation_depth));
    }
    out.push_back(std::move(line));
    cur = st.results[0];
  }
  return out;
}

}  // namespace pcw
