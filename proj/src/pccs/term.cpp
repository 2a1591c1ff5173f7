// SPDX-License-Identifier: MIT
#include "pcw/pccs.hpp"

#include <algorithm>

namespace pcw {

namespace {

// Bound name -> binder level. Markers are de Bruijn style distances, so the key of a
// subterm without free bound names is the same standalone and in context.
using Env = std::map<std::string, unsigned>;

bool touches(const std::set<std::string>& fn, const Env& env) {
  for (const auto& [n, m] : env)
    if (fn.count(n)) return true;
  return false;
}

std::string mark(const Env& env, const std::string& n, unsigned level) {
  auto it = env.find(n);
  return it == env.end() ? n : "^" + std::to_string(level - 1 - it->second);
}

// Names of `targets` in order of first free occurrence, following the order of key_into.
void first_occurrences(const Pccs& p, const std::set<std::string>& targets,
                       std::set<std::string>& seen, std::vector<std::string>& order) {
  const auto& n = p.node();
  auto hit = [&](const std::string& x) {
    if (targets.count(x) && seen.insert(x).second) order.push_back(x);
  };
  switch (n.kind) {
    case PccsKind::choice:
      if (n.guard.kind != GuardKind::tau) hit(n.guard.name);
      for (const auto& b : n.branches) first_occurrences(b.cont, targets, seen, order);
      break;
    case PccsKind::par:
      first_occurrences(n.kids[0], targets, seen, order);
      first_occurrences(n.kids[1], targets, seen, order);
      break;
    case PccsKind::restrict: {
      std::set<std::string> inner;
      for (const auto& x : targets)
        if (!std::binary_search(n.names.begin(), n.names.end(), x)) inner.insert(x);
      first_occurrences(n.kids[0], inner, seen, order);
      break;
    }
    case PccsKind::relabel:
      for (const auto& x : n.kids[0].free_names()) hit(apply_name(n.rename, x));
      break;
    case PccsKind::call:
      for (const auto& a : n.names) hit(a);
      break;
    case PccsKind::success:
    case PccsKind::inert:
      break;
  }
}

void key_into(const Pccs& p, const Env& env, unsigned level, std::string& out) {
  if (env.empty() || !touches(p.free_names(), env)) {
    out += p.key();
    return;
  }
  const auto& n = p.node();
  switch (n.kind) {
    case PccsKind::choice:
      if (n.guard.kind == GuardKind::tau) out += "t";
      else out += (n.guard.kind == GuardKind::input ? "i:" : "o:") + mark(env, n.guard.name, level);
      out += ".(";
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        if (i) out += "+";
        out += prob_str(n.branches[i].p) + ":";
        key_into(n.branches[i].cont, env, level, out);
      }
      out += ")";
      break;
    case PccsKind::par:
      out += "(";
      key_into(n.kids[0], env, level, out);
      out += "|";
      key_into(n.kids[1], env, level, out);
      out += ")";
      break;
    case PccsKind::restrict: {
      std::set<std::string> targets(n.names.begin(), n.names.end()), seen;
      std::vector<std::string> order;
      first_occurrences(n.kids[0], targets, seen, order);
      Env inner = env;
      for (const auto& x : n.names) inner.erase(x);
      for (std::size_t j = 0; j < order.size(); ++j) inner[order[j]] = level + static_cast<unsigned>(j);
      out += "(";
      key_into(n.kids[0], inner, level + static_cast<unsigned>(order.size()), out);
      out += ")\\" + std::to_string(n.names.size());
      break;
    }
    case PccsKind::relabel: {
      out += "[" + n.kids[0].key() + "]{";
      bool first = true;
      for (const auto& x : n.kids[0].free_names()) {
        if (!first) out += ",";
        first = false;
        out += x + ">" + mark(env, apply_name(n.rename, x), level);
      }
      out += "}";
      break;
    }
    case PccsKind::call:
      out += n.ident + "<";
      for (std::size_t i = 0; i < n.names.size(); ++i) {
        if (i) out += ",";
        out += mark(env, n.names[i], level);
      }
      out += ">";
      break;
    case PccsKind::success: out += "ok"; break;
    case PccsKind::inert: out += "0"; break;
  }
}

// The key of a fresh node: serialise with every restricted name replaced by its marker.
std::string compute_key(const PccsNode& n) {
  std::string out;
  switch (n.kind) {
    case PccsKind::restrict: {
      std::set<std::string> targets(n.names.begin(), n.names.end()), seen;
      std::vector<std::string> order;
      first_occurrences(n.kids[0], targets, seen, order);
      Env env;
      for (std::size_t j = 0; j < order.size(); ++j) env[order[j]] = static_cast<unsigned>(j);
      out += "(";
      key_into(n.kids[0], env, static_cast<unsigned>(order.size()), out);
      out += ")\\" + std::to_string(n.names.size());
      return out;
    }
    case PccsKind::choice:
      if (n.guard.kind == GuardKind::tau) out += "t";
      else out += (n.guard.kind == GuardKind::input ? "i:" : "o:") + n.guard.name;
      out += ".(";
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        if (i) out += "+";
        out += prob_str(n.branches[i].p) + ":" + n.branches[i].cont.key();
      }
      return out + ")";
    case PccsKind::par: return "(" + n.kids[0].key() + "|" + n.kids[1].key() + ")";
    case PccsKind::relabel: {
      out += "[" + n.kids[0].key() + "]{";
      bool first = true;
      for (const auto& x : n.kids[0].free_names()) {
        if (!first) out += ",";
        first = false;
        out += x + ">" + apply_name(n.rename, x);
      }
      return out + "}";
    }
    case PccsKind::call: {
      out += n.ident + "<";
      for (std::size_t i = 0; i < n.names.size(); ++i) out += (i ? "," : "") + n.names[i];
      return out + ">";
    }
    case PccsKind::success: return "ok";
    case PccsKind::inert: return "0";
  }
  return out;
}

Pccs finish(PccsNode n) {
  switch (n.kind) {
    case PccsKind::choice:
      if (n.guard.kind != GuardKind::tau) n.fn.insert(n.guard.name);
      for (const auto& b : n.branches) n.fn.insert(b.cont.free_names().begin(), b.cont.free_names().end());
      break;
    case PccsKind::par:
      for (const auto& k : n.kids) n.fn.insert(k.free_names().begin(), k.free_names().end());
      break;
    case PccsKind::restrict:
      for (const auto& x : n.kids[0].free_names())
        if (!std::binary_search(n.names.begin(), n.names.end(), x)) n.fn.insert(x);
      break;
    case PccsKind::relabel:
      for (const auto& x : n.kids[0].free_names()) n.fn.insert(apply_name(n.rename, x));
      break;
    case PccsKind::call:
      n.fn.insert(n.names.begin(), n.names.end());
      break;
    case PccsKind::success:
    case PccsKind::inert:
      break;
  }
  n.key = compute_key(n);
  return Pccs(std::make_shared<const PccsNode>(std::move(n)));
}

const Pccs& inert_singleton() {
  static const Pccs p = [] {
    PccsNode n;
    n.kind = PccsKind::inert;
    return finish(std::move(n));
  }();
  return p;
}

}  // namespace

Pccs::Pccs() : n_(inert_singleton().n_) {}

PccsKind Pccs::kind() const { return n_->kind; }
const std::string& Pccs::key() const { return n_->key; }
const std::set<std::string>& Pccs::free_names() const { return n_->fn; }
std::string Pccs::str() const { return pccs_pretty(*this); }

Pccs pccs_choice(Guard g, std::vector<PccsBranch> branches) {
  if (branches.empty()) throw SemanticsError("choice without branches");
  Prob sum = 0;
  for (const auto& b : branches) {
    if (b.p <= 0) throw SemanticsError("non-positive branch probability " + prob_str(b.p));
    sum += b.p;
  }
  if (sum != 1) throw SemanticsError("branch probabilities sum to " + prob_str(sum));
  if (g.kind == GuardKind::tau) g.name.clear();
  PccsNode n;
  n.kind = PccsKind::choice;
  n.guard = std::move(g);
  n.branches = std::move(branches);
  return finish(std::move(n));
}

Pccs pccs_par(Pccs l, Pccs r) {
  PccsNode n;
  n.kind = PccsKind::par;
  n.kids = {std::move(l), std::move(r)};
  return finish(std::move(n));
}

Pccs pccs_restrict(Pccs body, std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  if (names.empty()) return body;
  PccsNode n;
  n.kind = PccsKind::restrict;
  n.kids = {std::move(body)};
  n.names = std::move(names);
  return finish(std::move(n));
}

Pccs pccs_relabel(Pccs body, const NameMap& f) {
  NameMap g;
  for (const auto& x : body.free_names()) {
    auto y = apply_name(f, x);
    if (y != x) g[x] = y;
  }
  if (g.empty()) return body;
  PccsNode n;
  n.kind = PccsKind::relabel;
  n.kids = {std::move(body)};
  n.rename = std::move(g);
  return finish(std::move(n));
}

Pccs pccs_call(std::string constant, std::vector<std::string> args) {
  PccsNode n;
  n.kind = PccsKind::call;
  n.ident = std::move(constant);
  n.names = std::move(args);
  return finish(std::move(n));
}

Pccs pccs_success() {
  static const Pccs p = [] {
    PccsNode n;
    n.kind = PccsKind::success;
    return finish(std::move(n));
  }();
  return p;
}

Pccs pccs_inert() { return inert_singleton(); }

void check_def_env(const DefEnv& env) {
  for (const auto& [c, d] : env) {
    std::set<std::string> ps(d.params.begin(), d.params.end());
    if (ps.size() != d.params.size()) throw SemanticsError("repeated parameter in definition of " + c);
    for (const auto& x : d.body.free_names())
      if (!ps.count(x)) throw SemanticsError("definition of " + c + " has free name " + x + " outside its parameters");
  }
}

std::set<std::string> pccs_free_names(const Pccs& p) { return p.free_names(); }

namespace {

void all_names_into(const Pccs& p, std::set<std::string>& out) {
  const auto& n = p.node();
  if (n.kind == PccsKind::choice && n.guard.kind != GuardKind::tau) out.insert(n.guard.name);
  out.insert(n.names.begin(), n.names.end());
  for (const auto& [a, b] : n.rename) {
    out.insert(a);
    out.insert(b);
  }
  for (const auto& b : n.branches) all_names_into(b.cont, out);
  for (const auto& k : n.kids) all_names_into(k, out);
}

}  // namespace

std::set<std::string> pccs_all_names(const Pccs& p) {
  std::set<std::string> out;
  all_names_into(p, out);
  return out;
}

Pccs pccs_subst(const Pccs& p, const NameMap& s0) {
  NameMap s;
  for (const auto& x : p.free_names()) {
    auto y = apply_name(s0, x);
    if (y != x) s[x] = y;
  }
  if (s.empty()) return p;
  const auto& n = p.node();
  switch (n.kind) {
    case PccsKind::choice: {
      Guard g = n.guard;
      if (g.kind != GuardKind::tau) g.name = apply_name(s, g.name);
      std::vector<PccsBranch> bs;
      for (const auto& b : n.branches) bs.push_back({b.p, pccs_subst(b.cont, s)});
      return pccs_choice(std::move(g), std::move(bs));
    }
    case PccsKind::par:
      return pccs_par(pccs_subst(n.kids[0], s), pccs_subst(n.kids[1], s));
    case PccsKind::restrict: {
      // s already excludes the bound names (they are not free in p)
      std::set<std::string> range;
      for (const auto& [x, y] : s) range.insert(y);
      std::set<std::string> avoid = pccs_all_names(n.kids[0]);
      avoid.insert(range.begin(), range.end());
      for (const auto& [x, y] : s) avoid.insert(x);
      NameMap inner = s;
      std::vector<std::string> names;
      for (const auto& a : n.names) {
        if (range.count(a)) {
          auto a2 = fresh_name(a, avoid);
          avoid.insert(a2);
          inner[a] = a2;
          names.push_back(a2);
        } else {
          names.push_back(a);
        }
      }
      return pccs_restrict(pccs_subst(n.kids[0], inner), std::move(names));
    }
    case PccsKind::relabel: {
      NameMap f;
      for (const auto& x : n.kids[0].free_names()) f[x] = apply_name(s, apply_name(n.rename, x));
      return pccs_relabel(n.kids[0], f);
    }
    case PccsKind::call: {
      std::vector<std::string> args;
      for (const auto& a : n.names) args.push_back(apply_name(s, a));
      return pccs_call(n.ident, std::move(args));
    }
    case PccsKind::success:
    case PccsKind::inert:
      return p;
  }
  return p;
}

namespace {

void pretty_into(const Pccs& p, bool unary, std::string& out) {
  const auto& n = p.node();
  switch (n.kind) {
    case PccsKind::choice:
      if (n.guard.kind == GuardKind::tau) out += "tau";
      else out += (n.guard.kind == GuardKind::output ? "'" : "") + n.guard.name;
      out += ".(";
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        if (i) out += " + ";
        out += prob_str(n.branches[i].p) + ": ";
        pretty_into(n.branches[i].cont, false, out);
      }
      out += ")";
      break;
    case PccsKind::par:
      if (unary) out += "(";
      pretty_into(n.kids[0], false, out);
      out += " | ";
      pretty_into(n.kids[1], true, out);
      if (unary) out += ")";
      break;
    case PccsKind::restrict:
      out += "(";
      pretty_into(n.kids[0], false, out);
      out += ")\\{";
      for (std::size_t i = 0; i < n.names.size(); ++i) out += (i ? "," : "") + n.names[i];
      out += "}";
      break;
    case PccsKind::relabel: {
      out += "(";
      pretty_into(n.kids[0], false, out);
      out += ")[";
      bool first = true;
      for (const auto& [a, b] : n.rename) {
        if (!first) out += ",";
        first = false;
        out += a + "->" + b;
      }
      out += "]";
      break;
    }
    case PccsKind::call:
      out += n.ident + "<";
      for (std::size_t i = 0; i < n.names.size(); ++i) out += (i ? "," : "") + n.names[i];
      out += ">";
      break;
    case PccsKind::success: out += "ok"; break;
    case PccsKind::inert: out += "0"; break;
  }
}

}  // namespace

std::string pccs_pretty(const Pccs& p) {
  std::string out;
  pretty_into(p, false, out);
  return out;
}

std::string pccs_pretty(const DefEnv& env) {
  std::string out;
  for (const auto& [c, d] : env) {
    out += "def " + c + "(";
    for (std::size_t i = 0; i < d.params.size(); ++i) out += (i ? "," : "") + d.params[i];
    out += ") = " + pccs_pretty(d.body) + "\n";
  }
  return out;
}

std::size_t pccs_size(const Pccs& p) {
  std::size_t k = 1;
  for (const auto& b : p.node().branches) k += pccs_size(b.cont);
  for (const auto& c : p.node().kids) k += pccs_size(c);
  return k;
}

bool pccs_has_call(const Pccs& p) {
  if (p.kind() == PccsKind::call) return true;
  for (const auto& b : p.node().branches)
    if (pccs_has_call(b.cont)) return true;
  for (const auto& c : p.node().kids)
    if (pccs_has_call(c)) return true;
  return false;
}

}  // namespace pcw
