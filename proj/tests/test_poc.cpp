// SPDX-License-Identifier: MIT
#include "pcw/poc.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace pcw;

namespace {

Pccs leaf(const std::string& x) { return pccs_choice({GuardKind::output, x}, {{Prob(1), pccs_inert()}}); }
Pccs in(const std::string& x, Pccs p) { return pccs_choice({GuardKind::input, x}, {{Prob(1), std::move(p)}}); }
Pccs tau2(Prob p, Pccs a, Pccs b) { return pccs_choice({GuardKind::tau, ""}, {{p, std::move(a)}, {1 - p, std::move(b)}}); }

Pccs tau_steps() {
  return pccs_par(tau2(Prob(1, 8), leaf("P"), leaf("Q")), tau2(Prob(3, 5), leaf("R"), leaf("S1")));
}

DefEnv r_env() {
  DefEnv env;
  env["C"] = {{}, pccs_success()};
  return env;
}

DefEnv loop_env() {
  DefEnv env;
  env["C"] = {{}, pccs_call("C", {})};
  return env;
}

Pccs comm_choice() {
  return pccs_par(pccs_choice({GuardKind::input, "x"}, {{Prob(1, 2), pccs_success()}, {Prob(1, 2), pccs_inert()}}),
                  pccs_choice({GuardKind::output, "x"}, {{Prob(1, 3), leaf("A")}, {Prob(2, 3), leaf("B")}}));
}

PocConfig cfg(unsigned depth = 4, Mutation m = Mutation::none) {
  PocConfig c;
  c.budget.depth = depth;
  c.mutation = m;
  return c;
}

}  // namespace

TEST_CASE("weak correspondence on the internal-choice example") {
  EncodingSystem sys({}, cfg());
  auto rep = check_weak_poc(sys, tau_steps());
  CHECK(rep.status == Status::holds);
  CHECK(rep.obligations.size() >= 5);
  // the two-step source distribution is answered by a two-step target derivation
  Distribution<Pccs> ds2{{pccs_par(leaf("P"), leaf("R")), Prob(3, 40)},
                         {pccs_par(leaf("P"), leaf("S1")), Prob(2, 40)},
                         {pccs_par(leaf("Q"), leaf("R")), Prob(21, 40)},
                         {pccs_par(leaf("Q"), leaf("S1")), Prob(14, 40)}};
  bool cited = false;
  for (const auto& o : rep.obligations)
    if (o.direction == "completeness" && o.source == show_dist<Pccs>(ds2, show_pccs)) {
      cited = true;
      CHECK(o.status == Status::holds);
      CHECK(o.trace == "TAU TAU");
    }
  CHECK(cited);
  CHECK(check_mid_poc(sys, tau_steps()).status == Status::holds);
}

TEST_CASE("recursion example") {
  EncodingSystem sys(r_env(), cfg(2));
  Pccs s = pccs_call("C", {});
  CHECK(check_weak_poc(sys, s).status == Status::holds);
  CHECK(check_strong_poc(sys, s).status == Status::holds);
  CHECK(check_nonprob_oc(sys, s, OcVariant::plain).status == Status::holds);
  CHECK(check_nonprob_oc(sys, s, OcVariant::strong).status == Status::holds);
  // exact equality of the encoded result and the target result, no congruence needed
  auto steps = sys.target_steps(sys.enc(s));
  REQUIRE(steps.size() == 1);
  CHECK(steps[0] == sys.enc(dist_point(pccs_success())));
  CHECK(sys.class_of(sys.enc(s), steps[0])->kind == StepClassKind::REP);
}

TEST_CASE("inert term holds vacuously") {
  EncodingSystem sys({}, cfg());
  for (auto f : {PocFlavor::weak, PocFlavor::mid, PocFlavor::strong})
    CHECK(check_poc(sys, pccs_inert(), f).status == Status::holds);
  for (auto v : {OcVariant::strong, OcVariant::plain, OcVariant::weak})
    CHECK(check_nonprob_oc(sys, pccs_inert(), v).status == Status::holds);
}

TEST_CASE("communication needs intermediate states") {
  EncodingSystem sys({}, cfg());
  auto strong = check_strong_poc(sys, comm_choice());
  CHECK(strong.status == Status::fails);
  CHECK(strong.verdict().counterexample);
  CHECK(check_weak_poc(sys, comm_choice()).status == Status::holds);
}

TEST_CASE("identity target relation") {
  PocConfig c = cfg();
  c.relation = TargetRelation::identity;
  EncodingSystem sys(r_env(), c);
  CHECK(check_weak_poc(sys, pccs_call("C", {})).status == Status::holds);
  CHECK(parse_relation(relation_str(TargetRelation::identity)) == TargetRelation::identity);
  CHECK_THROWS(parse_relation("nope"));
}

TEST_CASE("mutations break correspondence") {
  Pccs s = comm_choice();
  EncodingSystem drop({}, cfg(4, Mutation::drop_iota_input));
  auto rep = check_weak_poc(drop, s);
  CHECK(rep.status == Status::fails);
  CHECK(rep.verdict().counterexample);
  EncodingSystem swap({}, cfg(4, Mutation::swap_branch_probs));
  CHECK(check_weak_poc(swap, tau_steps()).status == Status::fails);
  EncodingSystem omit(r_env(), cfg(4, Mutation::omit_replicated_defs));
  CHECK(check_weak_poc(omit, pccs_call("C", {})).status == Status::fails);
  CHECK(check_success_sensitiveness(omit, pccs_call("C", {})).status == Status::fails);
}

TEST_CASE("success sensitiveness") {
  EncodingSystem r(r_env(), cfg());
  CHECK(check_success_sensitiveness(r, pccs_call("C", {})).status == Status::holds);
  EncodingSystem sys({}, cfg());
  CHECK(check_success_sensitiveness(sys, in("x", pccs_success())).status == Status::holds);
  CHECK(check_success_sensitiveness(sys, tau2(Prob(1, 2), pccs_success(), pccs_inert())).status == Status::holds);
}

TEST_CASE("barb sensitiveness") {
  EncodingSystem sys({}, cfg());
  CHECK(check_barb_sensitiveness(sys, leaf("a")).status == Status::holds);
  CHECK(check_barb_sensitiveness(sys, pccs_restrict(in("a", pccs_success()), {"a"})).status == Status::holds);
  CHECK(check_barb_sensitiveness(sys, pccs_choice({GuardKind::tau, ""}, {{Prob(1), leaf("a")}})).status == Status::holds);
  CHECK(check_barb_sensitiveness(sys, comm_choice()).status == Status::holds);
}

TEST_CASE("divergence") {
  EncodingSystem loop(loop_env(), cfg());
  Pccs c = pccs_call("C", {});
  auto src = source_divergence(loop, c, 6);
  auto tgt = target_divergence(loop, loop.enc(c), 6);
  CHECK(src.cycle);
  CHECK(tgt.cycle);
  CHECK_FALSE(src.loop.empty());
  CHECK(check_divergence_reflection(loop, c).status == Status::holds);

  EncodingSystem sys({}, cfg());
  for (const Pccs& s : {tau_steps(), pccs_inert(), comm_choice()}) {
    auto a = source_divergence(sys, s, 6);
    auto b = target_divergence(sys, sys.enc(s), 6);
    CHECK_FALSE(a.cycle);
    CHECK(a.complete);
    CHECK_FALSE(b.cycle);
    CHECK(b.complete);
    CHECK(check_divergence_reflection(sys, s).status == Status::holds);
  }
}

TEST_CASE("name invariance, compositionality and step taxonomy on generated terms") {
  testing::PccsGen gen(23);
  EncodingSystem sys({}, cfg(2));
  for (int i = 0; i < 40; ++i) {
    Pccs s = gen.term(2);
    CHECK(check_name_invariance(sys, s, 10, static_cast<std::uint64_t>(i)).status == Status::holds);
    CHECK(check_weak_compositionality(sys, s).status == Status::holds);
    CHECK(check_step_taxonomy(sys, s).status == Status::holds);
  }
}

TEST_CASE("compositionality notices a mutated encoder") {
  EncodingSystem sys({}, cfg(2, Mutation::drop_iota_input));
  CHECK(check_weak_compositionality(sys, in("a", pccs_success())).status == Status::fails);
}

TEST_CASE("theorem instances") {
  std::vector<TheoremEntry> corpus{{"tau-steps", tau_steps(), {}}, {"r-step", pccs_call("C", {}), r_env()}};
  auto rep = theorem_instance_check(corpus, cfg(), PocFlavor::weak);
  CHECK(rep.verdict.status == Status::holds);
  CHECK(rep.relation_size > 0);
  CHECK(rep.universe_size <= 80);

  CHECK(theorem_instance_check({}, cfg(), PocFlavor::weak).verdict.status == Status::holds);

  std::vector<TheoremEntry> comm{{"comm-choice", comm_choice(), {}}};
  CHECK(theorem_instance_check(comm, cfg(4, Mutation::drop_iota_input), PocFlavor::weak).verdict.status ==
        Status::fails);
  CHECK(theorem_instance_check({{"r-step", pccs_call("C", {}), r_env()}}, cfg(2), PocFlavor::strong).verdict.status ==
        Status::holds);
}

TEST_CASE("emulation trace") {
  EncodingSystem sys({}, cfg());
  auto lines = emulation_trace(sys, tau_steps(), 4);
  // a single point takes one reduction per step, so the components move one after the other
  REQUIRE(lines.size() == 2);
  for (const auto& l : lines) {
    REQUIRE(l.classes.size() == 1);
    CHECK(l.classes[0] == "TAU");
  }
}
