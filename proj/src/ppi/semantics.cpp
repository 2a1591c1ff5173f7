// SPDX-License-Identifier: MIT
#include "pcw/ppi.hpp"

#include <algorithm>
#include <deque>

namespace pcw {

namespace {

std::string join(const std::vector<std::string>& ys) {
  std::string out;
  for (std::size_t j = 0; j < ys.size(); ++j) out += (j ? "," : "") + ys[j];
  return out;
}

using LK = PpiLabel::Kind;

bool is_output(const StepBundle& b) {
  auto k = b.alts.front().label.kind;
  return k == LK::select_out || k == LK::plain_out;
}

bool is_input(const StepBundle& b) {
  auto k = b.alts.front().label.kind;
  return k == LK::select_in || k == LK::plain_in;
}

// The partial pairing of an output label with an input label. A plain input also
// receives any selection, which the encoding relies on for x().P and for the
// reserved-name inputs.
bool pairs(const PpiLabel& out, const PpiLabel& in) {
  if (out.subj != in.subj || out.obj.size() != in.obj.size()) return false;
  if (out.kind == LK::select_out)
    return in.kind == LK::plain_in || (in.kind == LK::select_in && in.branch == out.branch);
  return out.kind == LK::plain_out && in.kind == LK::plain_in;
}

Ppi par_elide(const Ppi& l, const Ppi& r) {
  if (l.kind() == PpiKind::nil) return r;
  if (r.kind() == PpiKind::nil) return l;
  return ppi_par(l, r);
}

std::vector<std::string> fresh_all(const std::vector<std::string>& ys, FreshSupply& fs, NameMap& s) {
  std::vector<std::string> zs;
  for (const auto& y : ys) {
    zs.push_back(fs(y));
    s[y] = zs.back();
  }
  return zs;
}

class Generator {
 public:
  explicit Generator(const Ppi& top) : fs_(ppi_all_names(top)) {}

  std::vector<StepBundle> run(const Ppi& p, const std::string& path) {
    std::vector<StepBundle> out;
    const auto& n = p.node();
    switch (n.kind) {
      case PpiKind::branch_in:
        for (const auto& b : n.branches) {
          NameMap s;
          auto zs = fresh_all(b.names, fs_, s);
          StepBundle sb;
          sb.origin = path;
          sb.alts.push_back({{LK::select_in, n.chan, b.index, zs}, Prob(1), ppi_subst(b.cont, s)});
          out.push_back(std::move(sb));
        }
        break;
      case PpiKind::input:
      case PpiKind::rep_in: {
        NameMap s;
        auto zs = fresh_all(n.names, fs_, s);
        Ppi succ = ppi_subst(n.kids[0], s);
        StepBundle sb;
        sb.origin = path;
        if (n.kind == PpiKind::rep_in) {
          succ = ppi_par(succ, p);
          sb.replicated = true;
        }
        sb.alts.push_back({{LK::plain_in, n.chan, 0, zs}, Prob(1), succ});
        out.push_back(std::move(sb));
        break;
      }
      case PpiKind::select_out: {
        StepBundle sb;
        sb.origin = path;
        for (const auto& b : n.branches) {
          NameMap s;
          auto zs = fresh_all(b.names, fs_, s);
          sb.alts.push_back({{LK::select_out, n.chan, b.index, zs}, b.p, ppi_subst(b.cont, s)});
        }
        out.push_back(std::move(sb));
        break;
      }
      case PpiKind::output: {
        StepBundle sb;
        sb.origin = path;
        sb.alts.push_back({{LK::plain_out, n.chan, 0, n.names}, Prob(1), n.kids[0]});
        out.push_back(std::move(sb));
        break;
      }
      case PpiKind::restrict:
        for (auto& b : run(n.kids[0], path + "n")) {
          const std::string& x = n.chan;
          bool blocked = false;
          for (const auto& a : b.alts) blocked = blocked || (a.label.kind != LK::tau && a.label.subj == x);
          if (blocked) continue;
          auto& a0 = b.alts.front();
          if (a0.label.kind == LK::plain_out &&
              std::find(a0.label.obj.begin(), a0.label.obj.end(), x) != a0.label.obj.end()) {
            // scope extrusion: the restriction is opened and travels with the label
            std::string x2 = fs_(x);
            NameMap s{{x, x2}};
            for (auto& y : a0.label.obj)
              if (y == x) y = x2;
            a0.succ = ppi_subst(a0.succ, s);
            b.extruded.push_back(x2);
          } else {
            for (auto& a : b.alts) a.succ = ppi_restrict(x, a.succ);
          }
          out.push_back(std::move(b));
        }
        break;
      case PpiKind::par: {
        const Ppi& l = n.kids[0];
        const Ppi& r = n.kids[1];
        auto ls = run(l, path + "L");
        auto rs = run(r, path + "R");
        communicate(ls, rs, true, path, out);
        communicate(rs, ls, false, path, out);
        for (auto b : ls) {
          for (auto& a : b.alts) a.succ = ppi_par(a.succ, r);
          out.push_back(std::move(b));
        }
        for (auto b : rs) {
          for (auto& a : b.alts) a.succ = ppi_par(l, a.succ);
          out.push_back(std::move(b));
        }
        break;
      }
      case PpiKind::nil:
      case PpiKind::success:
        break;
    }
    return out;
  }

 private:
  // Outputs of `outs` against inputs of `ins`; each output bundle is answered by the
  // inputs of a single prefix, one alternative each.
  void communicate(const std::vector<StepBundle>& outs, const std::vector<StepBundle>& ins, bool out_left,
                   const std::string& path, std::vector<StepBundle>& res) {
    std::map<std::string, std::vector<const StepBundle*>> by_origin;
    for (const auto& b : ins)
      if (is_input(b)) by_origin[b.origin].push_back(&b);
    for (const auto& ob : outs) {
      if (!is_output(ob)) continue;
      for (const auto& [origin, group] : by_origin) {
        StepBundle tb;
        tb.origin = path;
        tb.channel = ob.alts.front().label.subj;
        bool ok = true;
        for (const auto& a : ob.alts) {
          const StepBundle* match = nullptr;
          for (const auto* ib : group)
            if (pairs(a.label, ib->alts.front().label)) {
              match = ib;
              break;
            }
          if (!match) {
            ok = false;
            break;
          }
          const auto& ia = match->alts.front();
          NameMap s;
          for (std::size_t j = 0; j < a.label.obj.size(); ++j) s[ia.label.obj[j]] = a.label.obj[j];
          Ppi q = ppi_subst(ia.succ, s);
          Ppi body = out_left ? par_elide(a.succ, q) : par_elide(q, a.succ);
          const auto& bound = a.label.kind == LK::select_out ? a.label.obj : ob.extruded;
          tb.replicated = match->replicated;
          tb.alts.push_back({{LK::tau, "", 0, {}}, a.p, ppi_restrict(bound, body)});
        }
        if (ok) res.push_back(std::move(tb));
      }
    }
  }

  FreshSupply fs_;
};

}  // namespace

std::string ppi_label_str(const PpiLabel& l) {
  switch (l.kind) {
    case LK::select_in: return l.subj + "?" + std::to_string(l.branch) + "(" + join(l.obj) + ")";
    case LK::select_out: return l.subj + "!" + std::to_string(l.branch) + "(" + join(l.obj) + ")";
    case LK::plain_in: return l.subj + "(" + join(l.obj) + ")";
    case LK::plain_out: return l.subj + "!<" + join(l.obj) + ">";
    case LK::tau: return "tau";
  }
  return "?";
}

std::vector<StepBundle> ppi_step_bundles(const Ppi& p) { return Generator(p).run(p, ""); }

std::string step_class_str(const StepClass& c) {
  switch (c.kind) {
    case StepClassKind::A: return "A";
    case StepClassKind::B: return "B";
    case StepClassKind::TAU: return "TAU";
    case StepClassKind::REP: return "REP";
    case StepClassKind::other: return "other(" + c.channel + ")";
  }
  return "?";
}

StepClass classify_step(const std::string& channel, bool replicated) {
  if (replicated) return {StepClassKind::REP, channel};
  switch (name_kind(channel)) {
    case NameKind::source: return {StepClassKind::A, channel};
    case NameKind::iota: return {StepClassKind::B, channel};
    case NameKind::tauhat: return {StepClassKind::TAU, channel};
    default: return {StepClassKind::other, channel};
  }
}

std::vector<PpiReduction> ppi_reduce(const Ppi& p) {
  std::vector<PpiReduction> out;
  std::set<std::pair<Distribution<Ppi>, std::pair<int, std::string>>> seen;
  for (const auto& b : ppi_step_bundles(p)) {
    if (b.alts.front().label.kind != LK::tau) continue;
    std::vector<std::pair<Ppi, Prob>> parts;
    for (const auto& a : b.alts) parts.emplace_back(a.succ, a.p);
    Distribution<Ppi> d(parts);
    StepClass c = classify_step(b.channel, b.replicated);
    // the class is determined by kind alone, the spelling of a bound channel is not
    auto tag = std::make_pair(static_cast<int>(c.kind), c.kind == StepClassKind::other ? c.channel : "");
    if (seen.emplace(d, tag).second) out.push_back({std::move(d), std::move(c)});
  }
  return out;
}

namespace {

bool barb_walk(const Ppi& p, const Observable& o, std::set<std::string>& bound) {
  const auto& n = p.node();
  switch (n.kind) {
    case PpiKind::success: return o.kind == ObsKind::success;
    case PpiKind::nil: return false;
    case PpiKind::par: return barb_walk(n.kids[0], o, bound) || barb_walk(n.kids[1], o, bound);
    case PpiKind::restrict: {
      if (o.kind != ObsKind::success && n.chan == o.name) return false;
      return barb_walk(n.kids[0], o, bound);
    }
    case PpiKind::branch_in:
    case PpiKind::input:
    case PpiKind::rep_in:
      return o.kind == ObsKind::name && n.chan == o.name;
    case PpiKind::select_out:
    case PpiKind::output:
      return o.kind == ObsKind::coname && n.chan == o.name;
  }
  return false;
}

}  // namespace

bool ppi_has_barb(const Ppi& p, const Observable& o) {
  std::set<std::string> bound;
  return barb_walk(p, o, bound);
}

PpiBarbSearch ppi_reach_barb_search(const Ppi& p, const Observable& o, unsigned depth, std::size_t state_cap) {
  PpiBarbSearch res;
  res.complete = true;
  Ppi start = ppi_normal_form(p);
  std::map<Ppi, unsigned> seen{{start, 0}};
  std::deque<Ppi> q{start};
  while (!q.empty()) {
    Ppi cur = q.front();
    q.pop_front();
    if (ppi_has_barb(cur, o)) {
      res.found = true;
      break;
    }
    unsigned d = seen[cur];
    auto succ = ppi_reduce(cur);
    if (succ.empty()) continue;
    if (d >= depth) {
      res.complete = false;
      continue;
    }
    for (const auto& r : succ)
      for (const auto& [x0, px] : r.dist) {
        Ppi x = ppi_normal_form(x0);
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

bool ppi_reach_barb(const Ppi& p, const Observable& o, unsigned depth) {
  return ppi_reach_barb_search(p, o, depth).found;
}

}  // namespace pcw
