// SPDX-License-Identifier: MIT
#include "pcw/poc.hpp"

#include <stdexcept>

namespace pcw {

std::string any_str(const AnyTerm& t) {
  return std::holds_alternative<Pccs>(t) ? std::get<Pccs>(t).str() : std::get<Ppi>(t).str();
}

bool is_source(const AnyTerm& t) { return std::holds_alternative<Pccs>(t); }

const char* relation_str(TargetRelation r) {
  return r == TargetRelation::congruence ? "congruence" : "identity";
}

TargetRelation parse_relation(const std::string& s) {
  if (s == "congruence") return TargetRelation::congruence;
  if (s == "identity") return TargetRelation::identity;
  throw std::invalid_argument("unknown relation '" + s + "'");
}

const char* flavor_str(PocFlavor f) {
  switch (f) {
    case PocFlavor::weak: return "weak";
    case PocFlavor::mid: return "mid";
    case PocFlavor::strong: return "strong";
  }
  return "?";
}

const char* oc_variant_str(OcVariant v) {
  switch (v) {
    case OcVariant::strong: return "strong";
    case OcVariant::plain: return "plain";
    case OcVariant::weak: return "weak";
  }
  return "?";
}

std::string show_pccs(const Pccs& s) { return s.str(); }
std::string show_ppi(const Ppi& t) { return t.str(); }

EncodingSystem::EncodingSystem(DefEnv env, PocConfig cfg) : env_(std::move(env)), cfg_(cfg) {
  check_def_env(env_);
}

const SuccList<Pccs>& EncodingSystem::source_steps(const Pccs& s) {
  auto it = src_.find(s);
  if (it == src_.end()) it = src_.emplace(s, pccs_reduce(s, env_)).first;
  return it->second;
}

Ppi EncodingSystem::canon(const Ppi& t) const {
  return cfg_.relation == TargetRelation::congruence ? ppi_normal_form(t) : t;
}

Distribution<Ppi> EncodingSystem::canon(const Distribution<Ppi>& d) const {
  return d.map([this](const Ppi& t) { return canon(t); });
}

const std::vector<std::pair<Distribution<Ppi>, StepClass>>& EncodingSystem::target_classified(const Ppi& t) {
  auto it = cls_.find(t);
  if (it != cls_.end()) return it->second;
  std::vector<std::pair<Distribution<Ppi>, StepClass>> out;
  for (auto& r : ppi_reduce(t)) out.emplace_back(canon(r.dist), r.cls);
  return cls_.emplace(t, std::move(out)).first->second;
}

const SuccList<Ppi>& EncodingSystem::target_steps(const Ppi& t) {
  auto it = tgt_.find(t);
  if (it != tgt_.end()) return it->second;
  SuccList<Ppi> out;
  std::set<Distribution<Ppi>> seen;
  for (const auto& [d, c] : target_classified(t))
    if (seen.insert(d).second) out.push_back(d);
  return tgt_.emplace(t, std::move(out)).first->second;
}

std::optional<StepClass> EncodingSystem::class_of(const Ppi& t, const Distribution<Ppi>& d) {
  for (const auto& [e, c] : target_classified(t))
    if (e == d) return c;
  return std::nullopt;
}

const SuccList<AnyTerm>& EncodingSystem::any_steps(const AnyTerm& t) {
  auto it = any_.find(t);
  if (it != any_.end()) return it->second;
  SuccList<AnyTerm> out;
  auto lift = [](const auto& d) { return d.map([](const auto& x) { return AnyTerm(x); }); };
  if (is_source(t)) {
    for (const auto& d : source_steps(std::get<Pccs>(t))) out.push_back(lift(d));
  } else {
    for (const auto& d : target_steps(std::get<Ppi>(t))) out.push_back(lift(d));
  }
  return any_.emplace(t, std::move(out)).first->second;
}

Ppi EncodingSystem::enc(const Pccs& s) {
  auto it = enc_.find(s);
  if (it == enc_.end()) it = enc_.emplace(s, canon(encode_outer(s, env_, {}, cfg_.mutation))).first;
  return it->second;
}

Distribution<Ppi> EncodingSystem::enc(const Distribution<Pccs>& d) {
  return d.map([this](const Pccs& s) { return enc(s); });
}

StepFn<Pccs> EncodingSystem::source_fn() {
  return [this](const Pccs& s) -> const SuccList<Pccs>& { return source_steps(s); };
}

StepFn<Ppi> EncodingSystem::target_fn() {
  return [this](const Ppi& t) -> const SuccList<Ppi>& { return target_steps(t); };
}

StepFn<AnyTerm> EncodingSystem::any_fn() {
  return [this](const AnyTerm& t) -> const SuccList<AnyTerm>& { return any_steps(t); };
}

void PocReport::add(Obligation o) {
  status = worst(status, o.status);
  obligations.push_back(std::move(o));
}

Verdict PocReport::verdict() const {
  Verdict v{check};
  v.status = status;
  v.obligations = obligations.size();
  for (const auto& o : obligations) {
    if (o.status == Status::fails && !v.counterexample)
      v.counterexample = o.direction + " of " + term + ": " + o.source + " / " + o.target +
                         (o.note.empty() ? "" : " (" + o.note + ")");
    if (o.status == Status::inconclusive && v.notes.size() < 20) v.notes.push_back(o.direction + ": " + o.note);
  }
  for (const auto& n : notes)
    if (v.notes.size() < 20) v.notes.push_back(n);
  return v;
}

}  // namespace pcw
