// SPDX-License-Identifier: MIT
#include "pcw/encoder.hpp"

#include <stdexcept>

namespace pcw {

const char* mutation_str(Mutation m) {
  switch (m) {
    case Mutation::none: return "none";
    case Mutation::drop_iota_input: return "drop-iota-input";
    case Mutation::swap_branch_probs: return "swap-branch-probs";
    case Mutation::omit_replicated_defs: return "omit-replicated-defs";
  }
  return "?";
}

Mutation parse_mutation(const std::string& s) {
  for (auto m : {Mutation::none, Mutation::drop_iota_input, Mutation::swap_branch_probs,
                 Mutation::omit_replicated_defs})
    if (s == mutation_str(m)) return m;
  throw std::invalid_argument("unknown mutation '" + s + "'");
}

namespace {

class Encoder {
 public:
  Encoder(const RenamingPolicy& pol, Mutation m, std::map<std::string, std::string>& prov)
      : pol_(pol), m_(m), prov_(prov) {}

  Ppi enc(const Pccs& s) {
    const auto& n = s.node();
    switch (n.kind) {
      case PccsKind::choice: {
        std::vector<PpiBranch> bs;
        for (std::size_t i = 0; i < n.branches.size(); ++i)
          bs.push_back({static_cast<int>(i + 1), n.branches[i].p, {}, enc(n.branches[i].cont)});
        if (m_ == Mutation::swap_branch_probs && bs.size() >= 2) std::swap(bs[0].p, bs[1].p);
        switch (n.guard.kind) {
          case GuardKind::output:
            return ppi_select_out(pol_.phi(n.guard.name), std::move(bs));
          case GuardKind::input: {
            std::string i = instance(pol_.iota(), "input choice on " + n.guard.name);
            Ppi sel = ppi_select_out(i, std::move(bs));
            Ppi body = m_ == Mutation::drop_iota_input ? sel : ppi_par(sel, ppi_input(i, {}, ppi_nil()));
            return ppi_input(pol_.phi(n.guard.name), {}, ppi_restrict(i, body));
          }
          case GuardKind::tau: {
            std::string t = instance(pol_.tauhat(), "tau choice");
            return ppi_restrict(t, ppi_par(ppi_select_out(t, std::move(bs)), ppi_input(t, {}, ppi_nil())));
          }
        }
        break;
      }
      case PccsKind::par:
        return ppi_par(enc(n.kids[0]), enc(n.kids[1]));
      case PccsKind::restrict: {
        std::vector<std::string> xs;
        for (const auto& a : n.names) xs.push_back(pol_.phi(a));
        return ppi_restrict(xs, enc(n.kids[0]));
      }
      case PccsKind::relabel: {
        NameMap s2;
        for (const auto& [a, b] : n.rename) s2[pol_.phi(a)] = pol_.phi(b);
        return ppi_subst(enc(n.kids[0]), s2);
      }
      case PccsKind::call: {
        std::vector<std::string> args;
        for (const auto& a : n.names) args.push_back(pol_.phi(a));
        std::string c = pol_.constant(n.ident);
        prov_.emplace(c, "constant " + n.ident);
        return ppi_output(c, std::move(args), ppi_nil());
      }
      case PccsKind::success:
        return ppi_success();
      case PccsKind::inert:
        return ppi_nil();
    }
    return ppi_nil();
  }

 private:
  std::string instance(const std::string& base, const std::string& what) {
    std::string x = base + "%" + std::to_string(++count_);
    prov_.emplace(x, what);
    return x;
  }

  const RenamingPolicy& pol_;
  Mutation m_;
  std::map<std::string, std::string>& prov_;
  unsigned count_ = 0;
};

void calls_into(const Pccs& p, std::set<std::string>& out) {
  if (p.kind() == PccsKind::call) out.insert(p.node().ident);
  for (const auto& b : p.node().branches) calls_into(b.cont, out);
  for (const auto& k : p.node().kids) calls_into(k, out);
}

}  // namespace

EncodedTerm encode_inner_traced(const Pccs& s, const RenamingPolicy& pol, Mutation m) {
  EncodedTerm out;
  Encoder e(pol, m, out.provenance);
  out.term = e.enc(s);
  return out;
}

Ppi encode_inner(const Pccs& s, const RenamingPolicy& pol, Mutation m) {
  return encode_inner_traced(s, pol, m).term;
}

EncodedTerm encode_outer_traced(const Pccs& s, const DefEnv& env, const RenamingPolicy& pol, Mutation m) {
  std::set<std::string> used;
  calls_into(s, used);
  for (const auto& [c, d] : env) calls_into(d.body, used);
  for (const auto& c : used)
    if (!env.count(c)) throw EncodeError("no definition for process constant " + c);

  EncodedTerm out;
  Encoder e(pol, m, out.provenance);
  out.term = e.enc(s);
  if (env.empty()) return out;
  std::vector<Ppi> parts{out.term};
  std::vector<std::string> chans;
  for (const auto& [c, d] : env) {  // std::map: sorted by constant
    chans.push_back(pol.constant(c));
    out.provenance.emplace(chans.back(), "constant " + c);
    if (m == Mutation::omit_replicated_defs) continue;
    std::vector<std::string> ps;
    for (const auto& x : d.params) ps.push_back(pol.phi(x));
    parts.push_back(ppi_rep_in(chans.back(), std::move(ps), e.enc(d.body)));
  }
  out.term = ppi_restrict(chans, ppi_par(parts));
  return out;
}

Ppi encode_outer(const Pccs& s, const DefEnv& env, const RenamingPolicy& pol, Mutation m) {
  return encode_outer_traced(s, env, pol, m).term;
}

Distribution<Ppi> encode_dist(const Distribution<Pccs>& d, const DefEnv& env, const RenamingPolicy& pol,
                              Mutation m) {
  return d.map([&](const Pccs& s) { return encode_outer(s, env, pol, m); });
}

StepClass classify_target_step(const std::string& channel, bool replicated, const RenamingPolicy& pol) {
  return classify_step(channel, replicated);
}

std::string check_policy_hygiene(const Pccs& s, const DefEnv& env, const Ppi& encoded, const RenamingPolicy& pol) {
  std::set<std::string> images;
  for (const auto& x : pccs_all_names(s)) {
    auto y = pol.phi(x);
    if (name_kind(y) != NameKind::source) return "image " + y + " of " + x + " is not a source-kind name";
    if (!images.insert(y).second) return "renaming is not injective at " + x;
  }
  std::set<std::string> want;
  for (const auto& x : s.free_names()) want.insert(pol.phi(x));
  if (encoded.free_names() != want) {
    std::string got;
    for (const auto& x : encoded.free_names()) got += (got.empty() ? "" : ",") + x;
    return "free names of the encoding {" + got + "} differ from the renamed source names";
  }
  return "";
}

}  // namespace pcw
