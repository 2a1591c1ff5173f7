// SPDX-License-Identifier: MIT
#include "pcw/ppi.hpp"

#include <algorithm>

namespace pcw {

namespace {

// Bound name -> binder level; markers carry the kind and the de Bruijn distance.
using Env = std::map<std::string, unsigned>;

bool touches(const std::set<std::string>& fn, const Env& env) {
  if (env.size() < fn.size()) {
    for (const auto& [n, m] : env)
      if (fn.count(n)) return true;
  } else {
    for (const auto& n : fn)
      if (env.count(n)) return true;
  }
  return false;
}

std::string mark(const Env& env, const std::string& n, unsigned level) {
  auto it = env.find(n);
  if (it == env.end()) return n;
  return kind_prefix(name_kind(n)) + "^" + std::to_string(level - 1 - it->second);
}

void key_into(const Ppi& p, const Env& env, unsigned level, std::string& out);

// Binds names at consecutive levels and serialises the continuation.
void bound_into(const std::vector<std::string>& ys, const Ppi& cont, const Env& env, unsigned level,
                std::string& out) {
  Env inner = env;
  for (std::size_t j = 0; j < ys.size(); ++j) inner[ys[j]] = level + static_cast<unsigned>(j);
  out += "(";
  for (std::size_t j = 0; j < ys.size(); ++j) out += (j ? "," : "") + kind_prefix(name_kind(ys[j]));
  out += "):";
  key_into(cont, inner, level + static_cast<unsigned>(ys.size()), out);
}

void node_key(const PpiNode& n, const Env& env, unsigned level, std::string& out) {
  switch (n.kind) {
    case PpiKind::branch_in:
    case PpiKind::select_out: {
      out += mark(env, n.chan, level) + (n.kind == PpiKind::branch_in ? "?{" : "!{");
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        const auto& b = n.branches[i];
        if (i) out += ",";
        if (n.kind == PpiKind::select_out) out += prob_str(b.p) + " ";
        out += std::to_string(b.index);
        bound_into(b.names, b.cont, env, level, out);
      }
      out += "}";
      break;
    }
    case PpiKind::input:
      out += mark(env, n.chan, level) + "?";
      bound_into(n.names, n.kids[0], env, level, out);
      break;
    case PpiKind::rep_in:
      out += "!" + mark(env, n.chan, level);
      bound_into(n.names, n.kids[0], env, level, out);
      break;
    case PpiKind::output:
      out += mark(env, n.chan, level) + "!<";
      for (std::size_t j = 0; j < n.names.size(); ++j) out += (j ? "," : "") + mark(env, n.names[j], level);
      out += ">.";
      key_into(n.kids[0], env, level, out);
      break;
    case PpiKind::restrict: {
      Env inner = env;
      inner[n.chan] = level;
      out += "new " + kind_prefix(name_kind(n.chan)) + ".";
      key_into(n.kids[0], inner, level + 1, out);
      break;
    }
    case PpiKind::par:
      out += "(";
      key_into(n.kids[0], env, level, out);
      out += "|";
      key_into(n.kids[1], env, level, out);
      out += ")";
      break;
    case PpiKind::nil: out += "0"; break;
    case PpiKind::success: out += "ok"; break;
  }
}

void key_into(const Ppi& p, const Env& env, unsigned level, std::string& out) {
  if (env.empty() || !touches(p.free_names(), env)) {
    out += p.key();
    return;
  }
  node_key(p.node(), env, level, out);
}

void add_free(std::set<std::string>& fn, const Ppi& cont, const std::vector<std::string>& bound) {
  for (const auto& x : cont.free_names())
    if (std::find(bound.begin(), bound.end(), x) == bound.end()) fn.insert(x);
}

Ppi finish(PpiNode n) {
  switch (n.kind) {
    case PpiKind::branch_in:
    case PpiKind::select_out:
      n.fn.insert(n.chan);
      for (const auto& b : n.branches) add_free(n.fn, b.cont, b.names);
      break;
    case PpiKind::input:
    case PpiKind::rep_in:
      n.fn.insert(n.chan);
      add_free(n.fn, n.kids[0], n.names);
      break;
    case PpiKind::output:
      n.fn.insert(n.chan);
      n.fn.insert(n.names.begin(), n.names.end());
      n.fn.insert(n.kids[0].free_names().begin(), n.kids[0].free_names().end());
      break;
    case PpiKind::restrict:
      add_free(n.fn, n.kids[0], {n.chan});
      break;
    case PpiKind::par:
      for (const auto& k : n.kids) n.fn.insert(k.free_names().begin(), k.free_names().end());
      break;
    case PpiKind::nil:
    case PpiKind::success:
      break;
  }
  std::string key;
  node_key(n, {}, 0, key);
  n.key = std::move(key);
  return Ppi(std::make_shared<const PpiNode>(std::move(n)));
}

const Ppi& nil_singleton() {
  static const Ppi p = [] {
    PpiNode n;
    n.kind = PpiKind::nil;
    return finish(std::move(n));
  }();
  return p;
}

void check_distinct(const std::vector<std::string>& ys, const std::string& where) {
  std::set<std::string> s(ys.begin(), ys.end());
  if (s.size() != ys.size()) throw PpiError("repeated bound name in " + where);
}

void check_branches(std::vector<PpiBranch>& bs, const std::string& x, bool probabilistic) {
  if (bs.empty()) throw PpiError("branching on " + x + " without branches");
  std::sort(bs.begin(), bs.end(), [](const PpiBranch& a, const PpiBranch& b) { return a.index < b.index; });
  Prob sum = 0;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (bs[i].index <= 0) throw PpiError("branch index must be positive on " + x);
    if (i && bs[i].index == bs[i - 1].index)
      throw PpiError("duplicate branch index " + std::to_string(bs[i].index) + " on " + x);
    check_distinct(bs[i].names, "branch on " + x);
    if (probabilistic) {
      if (bs[i].p <= 0) throw PpiError("non-positive branch probability " + prob_str(bs[i].p));
      sum += bs[i].p;
    } else {
      bs[i].p = 1;
    }
  }
  if (probabilistic && sum != 1) throw PpiError("branch probabilities on " + x + " sum to " + prob_str(sum));
}

}  // namespace

Ppi::Ppi() : n_(nil_singleton().n_) {}

PpiKind Ppi::kind() const { return n_->kind; }
const std::string& Ppi::key() const { return n_->key; }
const std::set<std::string>& Ppi::free_names() const { return n_->fn; }
std::string Ppi::str() const { return ppi_pretty(*this); }

Ppi ppi_branch_in(std::string x, std::vector<PpiBranch> branches) {
  check_branches(branches, x, false);
  PpiNode n;
  n.kind = PpiKind::branch_in;
  n.chan = std::move(x);
  n.branches = std::move(branches);
  return finish(std::move(n));
}

Ppi ppi_select_out(std::string x, std::vector<PpiBranch> branches) {
  check_branches(branches, x, true);
  PpiNode n;
  n.kind = PpiKind::select_out;
  n.chan = std::move(x);
  n.branches = std::move(branches);
  return finish(std::move(n));
}

Ppi ppi_input(std::string x, std::vector<std::string> params, Ppi cont) {
  check_distinct(params, "input on " + x);
  PpiNode n;
  n.kind = PpiKind::input;
  n.chan = std::move(x);
  n.names = std::move(params);
  n.kids = {std::move(cont)};
  return finish(std::move(n));
}

Ppi ppi_rep_in(std::string x, std::vector<std::string> params, Ppi body) {
  check_distinct(params, "replicated input on " + x);
  PpiNode n;
  n.kind = PpiKind::rep_in;
  n.chan = std::move(x);
  n.names = std::move(params);
  n.kids = {std::move(body)};
  return finish(std::move(n));
}

Ppi ppi_output(std::string x, std::vector<std::string> args, Ppi cont) {
  PpiNode n;
  n.kind = PpiKind::output;
  n.chan = std::move(x);
  n.names = std::move(args);
  n.kids = {std::move(cont)};
  return finish(std::move(n));
}

Ppi ppi_restrict(std::string x, Ppi body) {
  PpiNode n;
  n.kind = PpiKind::restrict;
  n.chan = std::move(x);
  n.kids = {std::move(body)};
  return finish(std::move(n));
}

Ppi ppi_restrict(const std::vector<std::string>& xs, Ppi body) {
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = ppi_restrict(*it, std::move(body));
  return body;
}

Ppi ppi_par(Ppi l, Ppi r) {
  PpiNode n;
  n.kind = PpiKind::par;
  n.kids = {std::move(l), std::move(r)};
  return finish(std::move(n));
}

Ppi ppi_par(const std::vector<Ppi>& parts) {
  if (parts.empty()) return ppi_nil();
  Ppi acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = ppi_par(acc, parts[i]);
  return acc;
}

Ppi ppi_nil() { return nil_singleton(); }

Ppi ppi_success() {
  static const Ppi p = [] {
    PpiNode n;
    n.kind = PpiKind::success;
    return finish(std::move(n));
  }();
  return p;
}

std::set<std::string> ppi_free_names(const Ppi& p) { return p.free_names(); }

namespace {

void all_names_into(const Ppi& p, std::set<std::string>& out) {
  const auto& n = p.node();
  if (!n.chan.empty()) out.insert(n.chan);
  out.insert(n.names.begin(), n.names.end());
  for (const auto& b : n.branches) {
    out.insert(b.names.begin(), b.names.end());
    all_names_into(b.cont, out);
  }
  for (const auto& k : n.kids) all_names_into(k, out);
}

// Renames the binders ys where they would capture a name of the range of s, then
// substitutes in the continuation.
std::pair<std::vector<std::string>, Ppi> subst_under(const std::vector<std::string>& ys, const Ppi& cont,
                                                     const NameMap& s) {
  NameMap inner;
  for (const auto& [x, y] : s)
    if (std::find(ys.begin(), ys.end(), x) == ys.end() && cont.free_names().count(x)) inner[x] = y;
  if (inner.empty()) return {ys, cont};
  std::set<std::string> range;
  for (const auto& [x, y] : inner) range.insert(y);
  std::set<std::string> avoid;
  bool clash = false;
  for (const auto& y : ys) clash = clash || range.count(y);
  std::vector<std::string> out = ys;
  if (clash) {
    all_names_into(cont, avoid);
    avoid.insert(range.begin(), range.end());
    avoid.insert(ys.begin(), ys.end());
    for (const auto& [x, y] : inner) avoid.insert(x);
    for (auto& y : out) {
      if (!range.count(y)) continue;
      auto y2 = fresh_name(y, avoid);
      avoid.insert(y2);
      inner[y] = y2;
      y = y2;
    }
  }
  return {std::move(out), ppi_subst(cont, inner)};
}

}  // namespace

std::set<std::string> ppi_all_names(const Ppi& p) {
  std::set<std::string> out;
  all_names_into(p, out);
  return out;
}

Ppi ppi_subst(const Ppi& p, const NameMap& s0) {
  NameMap s;
  for (const auto& [x, y] : s0)
    if (x != y && p.free_names().count(x)) s[x] = y;
  if (s.empty()) return p;
  const auto& n = p.node();
  switch (n.kind) {
    case PpiKind::branch_in:
    case PpiKind::select_out: {
      std::vector<PpiBranch> bs;
      for (const auto& b : n.branches) {
        auto [ys, c] = subst_under(b.names, b.cont, s);
        bs.push_back({b.index, b.p, std::move(ys), std::move(c)});
      }
      auto x = apply_name(s, n.chan);
      return n.kind == PpiKind::branch_in ? ppi_branch_in(x, std::move(bs)) : ppi_select_out(x, std::move(bs));
    }
    case PpiKind::input:
    case PpiKind::rep_in: {
      auto [ys, c] = subst_under(n.names, n.kids[0], s);
      auto x = apply_name(s, n.chan);
      return n.kind == PpiKind::input ? ppi_input(x, std::move(ys), std::move(c))
                                      : ppi_rep_in(x, std::move(ys), std::move(c));
    }
    case PpiKind::output: {
      std::vector<std::string> args;
      for (const auto& a : n.names) args.push_back(apply_name(s, a));
      return ppi_output(apply_name(s, n.chan), std::move(args), ppi_subst(n.kids[0], s));
    }
    case PpiKind::restrict: {
      auto [ys, c] = subst_under({n.chan}, n.kids[0], s);
      return ppi_restrict(ys[0], std::move(c));
    }
    case PpiKind::par:
      return ppi_par(ppi_subst(n.kids[0], s), ppi_subst(n.kids[1], s));
    case PpiKind::nil:
    case PpiKind::success:
      return p;
  }
  return p;
}

namespace {

void names_into(const std::vector<std::string>& ys, std::string& out) {
  for (std::size_t j = 0; j < ys.size(); ++j) out += (j ? "," : "") + ys[j];
}

// unary: the position binds tighter than '|'.
void pretty_into(const Ppi& p, bool unary, std::string& out) {
  const auto& n = p.node();
  switch (n.kind) {
    case PpiKind::branch_in:
    case PpiKind::select_out:
      out += n.chan + (n.kind == PpiKind::branch_in ? "?{" : "!{");
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        const auto& b = n.branches[i];
        if (i) out += ", ";
        if (n.kind == PpiKind::select_out) out += prob_str(b.p) + " ";
        out += std::to_string(b.index) + "(";
        names_into(b.names, out);
        out += "): ";
        pretty_into(b.cont, false, out);
      }
      out += "}";
      break;
    case PpiKind::input:
    case PpiKind::rep_in:
      out += (n.kind == PpiKind::rep_in ? "!" : "") + n.chan + (n.kind == PpiKind::input ? "?(" : "(");
      names_into(n.names, out);
      out += ").";
      pretty_into(n.kids[0], true, out);
      break;
    case PpiKind::output:
      out += n.chan + "!<";
      names_into(n.names, out);
      out += ">.";
      pretty_into(n.kids[0], true, out);
      break;
    case PpiKind::restrict:
      out += "new " + n.chan + ". ";
      pretty_into(n.kids[0], true, out);
      break;
    case PpiKind::par:
      if (unary) out += "(";
      pretty_into(n.kids[0], false, out);
      out += " | ";
      pretty_into(n.kids[1], true, out);
      if (unary) out += ")";
      break;
    case PpiKind::nil: out += "0"; break;
    case PpiKind::success: out += "ok"; break;
  }
}

}  // namespace

std::string ppi_pretty(const Ppi& p) {
  std::string out;
  pretty_into(p, false, out);
  return out;
}

std::size_t ppi_size(const Ppi& p) {
  std::size_t k = 1;
  for (const auto& b : p.node().branches) k += ppi_size(b.cont);
  for (const auto& c : p.node().kids) k += ppi_size(c);
  return k;
}

}  // namespace pcw
