// SPDX-License-Identifier: MIT
#include "pcw/poc.hpp"
#include "point_graph.hpp"

namespace pcw {

namespace {

ReachLimits limits_any(const PocConfig& c, unsigned depth) {
  ReachLimits l = c.budget.at(depth);
  l.step.mode = StepMode::any_subset;
  return l;
}

std::string coupling_str(const Distribution<Pccs>& d, EncodingSystem& sys) {
  std::string out = "{";
  bool first = true;
  for (const auto& [s, p] : d) {
    out += (first ? "" : ", ") + prob_str(p) + ": (" + s.str() + ", " + sys.enc(s).str() + ")";
    first = false;
  }
  return out + "}";
}

}  // namespace

const std::optional<Derivation<Ppi>>& Emulator::emulate(const Pccs& s, const Distribution<Pccs>& next) {
  auto key = std::make_pair(s, next);
  auto it = emu_.find(key);
  if (it != emu_.end()) return it->second;
  Distribution<Ppi> want = sys_.enc(next);
  auto fn = sys_.target_fn();
  auto res = dist_search(dist_point(sys_.enc(s)), fn, limits_any(sys_.config(), sys_.config().emulation_depth),
                         [&](const Distribution<Ppi>& d) { return d == want; });
  std::optional<Derivation<Ppi>> out;
  if (res.found) out = derivation_to(res.reach, *res.found, fn);
  return emu_.emplace(key, std::move(out)).first->second;
}

std::optional<Derivation<Ppi>> Emulator::complete(const Derivation<Pccs>& src) {
  Derivation<Ppi> out{sys_.enc(src.start), {}};
  auto fn = sys_.target_fn();
  for (const auto& dec : src.steps) {
    struct Part {
      Prob w;
      const Derivation<Ppi>* emu = nullptr;
      std::vector<Distribution<Ppi>> stages;
    };
    std::vector<Part> parts;
    std::size_t len = 0;
    for (const auto& sp : dec) {
      Part part{sp.weight, nullptr, {dist_point(sys_.enc(sp.point))}};
      if (sp.next) {
        const auto& e = emulate(sp.point, *sp.next);
        if (!e) return std::nullopt;
        part.emu = &*e;
        for (const auto& d : e->steps) {
          auto nx = apply_decomposition(part.stages.back(), d, fn);
          if (!nx) return std::nullopt;
          part.stages.push_back(std::move(*nx));
        }
        len = std::max(len, e->steps.size());
      }
      parts.push_back(std::move(part));
    }
    for (std::size_t j = 0; j < len; ++j) {
      Decomposition<Ppi> d;
      for (const auto& part : parts) {
        if (part.emu && j < part.emu->steps.size()) {
          for (const auto& q : part.emu->steps[j]) d.push_back({part.w * q.weight, q.point, q.next});
        } else {
          const auto& cur = part.stages[std::min(j, part.stages.size() - 1)];
          for (const auto& [x, p] : cur) d.push_back({part.w * p, x, std::nullopt});
        }
      }
      out.steps.push_back(std::move(d));
    }
  }
  return out;
}

const Emulator::Source& Emulator::source(const Pccs& s) {
  auto it = src_.find(s);
  if (it != src_.end()) return it->second;
  Source src{dist_multistep(dist_point(s), sys_.source_fn(), limits_any(sys_.config(), sys_.config().budget.depth)),
             {}};
  for (std::size_t i = 0; i < src.reach.states.size(); ++i) src.by_image.emplace(sys_.enc(src.reach.states[i]), i);
  return src_.emplace(s, std::move(src)).first->second;
}

std::optional<Emulator::Catchup> Emulator::sound(const Pccs& s, const Distribution<Ppi>& theta, bool escape,
                                                 bool& complete) {
  const auto& src = source(s);
  complete = false;
  bool source_known = src.reach.saturated && !src.reach.truncated;
  auto hit = src.by_image.find(theta);
  if (hit != src.by_image.end()) return Catchup{{theta, {}}, hit->second};
  if (!escape) {
    complete = source_known;
    return std::nullopt;
  }
  // pending B-steps first: every point with one takes it, round after round
  Derivation<Ppi> der{theta, {}};
  Distribution<Ppi> cur = theta;
  for (unsigned round = 0; round < 16; ++round) {
    Decomposition<Ppi> dec;
    bool moved = false;
    for (const auto& [x, p] : cur) {
      std::optional<Distribution<Ppi>> nx;
      for (const auto& [d, c] : sys_.target_classified(x))
        if (c.kind == StepClassKind::B) {
          nx = d;
          break;
        }
      moved = moved || nx.has_value();
      dec.push_back({p, x, nx});
    }
    if (!moved) break;
    auto nxt = apply_decomposition(cur, dec, sys_.target_fn());
    if (!nxt) break;
    cur = std::move(*nxt);
    der.steps.push_back(std::move(dec));
    auto h = src.by_image.find(cur);
    if (h != src.by_image.end()) return Catchup{der, h->second};
  }
  auto fn = sys_.target_fn();
  auto res = dist_search(theta, fn, limits_any(sys_.config(), sys_.config().catchup_depth),
                         [&](const Distribution<Ppi>& d) { return src.by_image.count(d) != 0; });
  if (res.found) {
    const auto& d = res.reach.states[*res.found];
    return Catchup{derivation_to(res.reach, *res.found, fn), src.by_image.at(d)};
  }
  complete = res.complete && source_known;
  return std::nullopt;
}

std::string Emulator::trace(const Derivation<Ppi>& der) {
  std::string out;
  for (const auto& dec : der.steps) {
    std::set<std::string> cs;
    for (const auto& part : dec)
      if (part.next) {
        auto c = sys_.class_of(part.point, *part.next);
        cs.insert(c ? step_class_str(*c) : "?");
      }
    std::string step;
    for (const auto& c : cs) step += (step.empty() ? "" : "+") + c;
    out += (out.empty() ? "" : " ") + step;
  }
  return out;
}

namespace {

void completeness(EncodingSystem& sys, Emulator& em, const Pccs& s, PocReport& rep) {
  const auto& src = em.source(s);
  auto sfn = sys.source_fn();
  auto tfn = sys.target_fn();
  const auto& cfg = sys.config();
  std::optional<SearchResult<Ppi>> scan;  // fallback, computed once
  for (std::size_t i = 0; i < src.reach.states.size(); ++i) {
    const auto& delta = src.reach.states[i];
    Distribution<Ppi> want = sys.enc(delta);
    Obligation o{"completeness", show_dist<Pccs>(delta, show_pccs), show_dist<Ppi>(want, show_ppi),
                 coupling_str(delta, sys)};
    auto der = em.complete(derivation_to(src.reach, i, sfn));
    if (der) {
      auto r = replay(*der, tfn);
      if (r && *r == want) {
        o.trace = em.trace(*der);
        rep.add(std::move(o));
        continue;
      }
    }
    if (!scan) {
      scan = dist_search(dist_point(sys.enc(s)), tfn,
                         limits_any(cfg, cfg.budget.depth * cfg.emulation_depth),
                         [](const Distribution<Ppi>&) { return false; });
    }
    if (auto k = scan->reach.find(want)) {
      o.trace = em.trace(derivation_to(scan->reach, *k, tfn));
      o.note = "found by search";
      rep.add(std::move(o));
      continue;
    }
    o.target = "none";
    o.coupling.clear();
    if (scan->complete) {
      o.status = Status::fails;
      o.note = "no target derivation reaches the encoded distribution";
    } else {
      o.status = Status::inconclusive;
      o.note = "not reached within depth " + std::to_string(cfg.budget.depth * cfg.emulation_depth);
    }
    rep.add(std::move(o));
  }
}

void soundness(EncodingSystem& sys, Emulator& em, const Pccs& s, bool escape, PocReport& rep) {
  const auto& src = em.source(s);
  const auto& cfg = sys.config();
  auto rt = dist_multistep(dist_point(sys.enc(s)), sys.target_fn(), limits_any(cfg, cfg.budget.depth));
  rep.target_states = rt.states.size();
  if (rt.truncated) {
    rep.notes.push_back("target exploration hit a cap");
    rep.status = worst(rep.status, Status::inconclusive);
  }
  for (const auto& theta : rt.states) {
    bool complete = false;
    auto c = em.sound(s, theta, escape, complete);
    Obligation o{"soundness", "", show_dist<Ppi>(theta, show_ppi)};
    if (c) {
      const auto& delta = src.reach.states[c->source_state];
      o.source = show_dist<Pccs>(delta, show_pccs);
      o.coupling = coupling_str(delta, sys);
      if (!c->target.steps.empty()) {
        auto end = replay(c->target, sys.target_fn());
        o.target += " ==> " + (end ? show_dist<Ppi>(*end, show_ppi) : std::string("?"));
        o.trace = em.trace(c->target);
      }
    } else {
      o.source = "none";
      o.status = complete ? Status::fails : Status::inconclusive;
      o.note = escape ? "no source distribution matches any continuation"
                      : "no source distribution matches this target distribution";
    }
    rep.add(std::move(o));
  }
}

PocReport start_report(const char* name, EncodingSystem& sys, Emulator& em, const Pccs& s) {
  PocReport rep{name, s.str()};
  const auto& src = em.source(s);
  rep.source_states = src.reach.states.size();
  if (src.reach.truncated) {
    rep.notes.push_back("source exploration hit a cap");
    rep.status = Status::inconclusive;
  }
  return rep;
}

}  // namespace

PocReport check_weak_poc(EncodingSystem& sys, const Pccs& s) {
  Emulator em(sys);
  auto rep = start_report("weak-poc", sys, em, s);
  completeness(sys, em, s, rep);
  soundness(sys, em, s, true, rep);
  return rep;
}

PocReport check_mid_poc(EncodingSystem& sys, const Pccs& s) {
  Emulator em(sys);
  auto rep = start_report("mid-poc", sys, em, s);
  completeness(sys, em, s, rep);
  soundness(sys, em, s, false, rep);
  return rep;
}

PocReport check_strong_poc(EncodingSystem& sys, const Pccs& s) {
  PocReport rep{"strong-poc", s.str()};
  const auto& cfg = sys.config();
  bool truncated = false, saturated = false;
  auto points = point_reach(
      s, [&](const Pccs& p) { return support_points(sys.source_steps(p)); }, cfg.budget.depth,
      cfg.budget.state_cap, truncated, saturated);
  rep.source_states = points.size();
  if (truncated) {
    rep.notes.push_back("source exploration hit a cap");
    rep.status = Status::inconclusive;
  }
  std::size_t targets = 0;
  for (const auto& [p, dist] : points) {
    Ppi t = sys.enc(p);
    const auto& tsteps = sys.target_steps(t);
    targets += tsteps.size();
    for (const auto& d : sys.source_steps(p)) {
      Distribution<Ppi> want = sys.enc(d);
      Obligation o{"completeness", show_dist<Pccs>(d, show_pccs), show_dist<Ppi>(want, show_ppi),
                   coupling_str(d, sys)};
      bool ok = false;
      for (const auto& e : tsteps)
        if (e == want) ok = true;
      if (ok) {
        auto c = sys.class_of(t, want);
        o.trace = c ? step_class_str(*c) : "";
      } else {
        o.status = Status::fails;
        o.target = "none";
        o.coupling.clear();
        o.note = "no single target step from " + t.str();
      }
      rep.add(std::move(o));
    }
    for (const auto& e : tsteps) {
      Obligation o{"soundness", "none", show_dist<Ppi>(e, show_ppi)};
      if (auto c = sys.class_of(t, e)) o.trace = step_class_str(*c);
      bool ok = false;
      for (const auto& d : sys.source_steps(p))
        if (sys.enc(d) == e) {
          o.source = show_dist<Pccs>(d, show_pccs);
          o.coupling = coupling_str(d, sys);
          ok = true;
          break;
        }
      if (!ok) {
        o.status = Status::fails;
        o.note = "no single source step from " + p.str();
      }
      rep.add(std::move(o));
    }
  }
  rep.target_states = targets;
  return rep;
}

PocReport check_poc(EncodingSystem& sys, const Pccs& s, PocFlavor f) {
  switch (f) {
    case PocFlavor::weak: return check_weak_poc(sys, s);
    case PocFlavor::mid: return check_mid_poc(sys, s);
    case PocFlavor::strong: return check_strong_poc(sys, s);
  }
  return check_weak_poc(sys, s);
}

PocReport check_nonprob_oc(EncodingSystem& sys, const Pccs& s, OcVariant v) {
  PocReport rep{std::string(oc_variant_str(v)) + "-oc", s.str()};
  const auto& cfg = sys.config();
  const unsigned d = cfg.budget.depth;
  auto snext = [&](const Pccs& p) { return support_points(sys.source_steps(p)); };
  auto tnext = [&](const Ppi& t) { return support_points(sys.target_steps(t)); };
  bool s_trunc = false, s_sat = false;
  auto spoints = point_reach(s, snext, d, cfg.budget.state_cap, s_trunc, s_sat);
  rep.source_states = spoints.size();
  if (s_trunc) {
    rep.notes.push_back("source exploration hit a cap");
    rep.status = Status::inconclusive;
  }

  if (v == OcVariant::strong) {
    for (const auto& [p, k] : spoints) {
      Ppi t = sys.enc(p);
      auto tn = tnext(t);
      auto sn = snext(p);
      for (const auto& p2 : sn) {
        Obligation o{"completeness", p2.str(), sys.enc(p2).str()};
        if (!tn.count(sys.enc(p2))) {
          o.status = Status::fails;
          o.note = "no single target step from " + t.str();
        }
        rep.add(std::move(o));
      }
      for (const auto& t2 : tn) {
        Obligation o{"soundness", "none", t2.str()};
        for (const auto& p2 : sn)
          if (sys.enc(p2) == t2) o.source = p2.str();
        if (o.source == "none") {
          o.status = Status::fails;
          o.note = "no single source step from " + p.str();
        }
        rep.add(std::move(o));
      }
    }
    return rep;
  }

  std::map<Ppi, Pccs> image;
  for (const auto& [p, k] : spoints) image.emplace(sys.enc(p), p);

  bool t_trunc = false, t_sat = false;
  auto tpoints = point_reach(sys.enc(s), tnext, d * cfg.emulation_depth, cfg.budget.state_cap, t_trunc, t_sat);
  rep.target_states = tpoints.size();
  for (const auto& [p, k] : spoints) {
    Obligation o{"completeness", p.str(), sys.enc(p).str()};
    if (!tpoints.count(sys.enc(p))) {
      o.status = t_sat && !t_trunc ? Status::fails : Status::inconclusive;
      o.note = "encoding not reached from " + sys.enc(s).str();
    }
    rep.add(std::move(o));
  }
  for (const auto& [t, k] : tpoints) {
    if (k > d) continue;
    Obligation o{"soundness", "none", t.str()};
    auto it = image.find(t);
    if (it != image.end()) {
      o.source = it->second.str();
    } else if (v == OcVariant::weak) {
      bool tr = false, sat = false;
      auto ahead = point_reach(t, tnext, cfg.catchup_depth + 2, cfg.budget.state_cap, tr, sat);
      for (const auto& [t2, k2] : ahead) {
        auto jt = image.find(t2);
        if (jt != image.end()) {
          o.source = jt->second.str();
          o.target += " ==> " + t2.str();
          break;
        }
      }
      if (o.source == "none") {
        o.status = sat && !tr && s_sat && !s_trunc ? Status::fails : Status::inconclusive;
        o.note = "no continuation is the encoding of a reachable source term";
      }
    } else {
      o.status = s_sat && !s_trunc ? Status::fails : Status::inconclusive;
      o.note = "not the encoding of a reachable source term";
    }
    rep.add(std::move(o));
  }
  return rep;
}

}  // namespace pcw
