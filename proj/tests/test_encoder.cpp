// SPDX-License-Identifier: MIT
#include "pcw/encoder.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace pcw;

namespace {

Pccs leaf(const std::string& x) { return pccs_choice({GuardKind::output, x}, {{Prob(1), pccs_inert()}}); }
Pccs in(const std::string& x, Pccs p) { return pccs_choice({GuardKind::input, x}, {{Prob(1), std::move(p)}}); }
Pccs tau2(Prob p, Pccs a, Pccs b) { return pccs_choice({GuardKind::tau, ""}, {{p, std::move(a)}, {1 - p, std::move(b)}}); }

Ppi sel1(const std::string& x, Ppi p) { return ppi_select_out(x, {{1, Prob(1), {}, std::move(p)}}); }

}  // namespace

TEST_CASE("extension clauses") {
  CHECK(encode_inner(pccs_inert()) == ppi_nil());
  CHECK(encode_inner(pccs_success()) == ppi_success());
  CHECK(encode_outer(pccs_inert(), {}) == ppi_nil());
}

TEST_CASE("output prefix becomes a selecting output on the image name") {
  CHECK(encode_inner(leaf("a")) == sel1("s_a", ppi_nil()));
  CHECK(ppi_has_barb(encode_inner(leaf("a")), {ObsKind::coname, "s_a"}));
}

TEST_CASE("internal choice") {
  Pccs s = tau2(Prob(1, 8), leaf("P"), leaf("Q"));
  Ppi expect = ppi_restrict("#t", ppi_par(ppi_select_out("#t", {{1, Prob(1, 8), {}, sel1("s_P", ppi_nil())},
                                                               {2, Prob(7, 8), {}, sel1("s_Q", ppi_nil())}}),
                                          ppi_input("#t", {}, ppi_nil())));
  CHECK(encode_inner(s) == expect);
  CHECK(encode_outer(s, {}) == encode_inner(s));
  auto rs = ppi_reduce(encode_inner(s));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].cls.kind == StepClassKind::TAU);
  CHECK(ppi_struct_congruent(rs[0].dist, encode_dist(Distribution<Pccs>{{leaf("P"), Prob(1, 8)}, {leaf("Q"), Prob(7, 8)}}, {})));
}

TEST_CASE("input choice keeps a local branch selection") {
  Pccs s = pccs_choice({GuardKind::input, "a"}, {{Prob(1, 2), pccs_success()}, {Prob(1, 2), pccs_inert()}});
  Ppi expect = ppi_input("s_a", {}, ppi_restrict("#i", ppi_par(ppi_select_out("#i", {{1, Prob(1, 2), {}, ppi_success()},
                                                                                     {2, Prob(1, 2), {}, ppi_nil()}}),
                                                              ppi_input("#i", {}, ppi_nil()))));
  CHECK(encode_inner(s) == expect);
  auto mutated = encode_inner(s, {}, Mutation::drop_iota_input);
  CHECK(mutated != expect);
}

TEST_CASE("restriction and relabelling") {
  CHECK(encode_inner(pccs_restrict(in("a", pccs_success()), {"a"})) ==
        ppi_restrict("s_a", encode_inner(in("a", pccs_success()))));
  CHECK(encode_inner(pccs_relabel(leaf("a"), {{"a", "b"}})) == encode_inner(leaf("b")));
}

TEST_CASE("outer encoding of a constant") {
  DefEnv env;
  env["C"] = {{}, pccs_success()};
  Ppi expect = ppi_restrict("#C_C", ppi_par(ppi_output("#C_C", {}, ppi_nil()), ppi_rep_in("#C_C", {}, ppi_success())));
  CHECK(encode_outer(pccs_call("C", {}), env) == expect);
  auto rs = ppi_reduce(expect);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].cls.kind == StepClassKind::REP);
  CHECK(encode_dist(dist_point(pccs_success()), env) == rs[0].dist);

  CHECK_THROWS_AS(encode_outer(pccs_call("D", {}), env), EncodeError);
  Ppi omitted = encode_outer(pccs_call("C", {}), env, {}, Mutation::omit_replicated_defs);
  CHECK(ppi_reduce(omitted).empty());
}

TEST_CASE("constants with parameters") {
  DefEnv env;
  env["F"] = {{"x"}, leaf("x")};
  Ppi t = encode_outer(pccs_call("F", {"b"}), env);
  CHECK(ppi_free_names(t) == std::set<std::string>{"s_b"});
  CHECK(check_policy_hygiene(pccs_call("F", {"b"}), env, t).empty());
}

TEST_CASE("swapping branch probabilities") {
  Pccs s = tau2(Prob(1, 8), leaf("P"), leaf("Q"));
  Ppi m = encode_inner(s, {}, Mutation::swap_branch_probs);
  auto rs = ppi_reduce(m);
  REQUIRE(rs.size() == 1);
  CHECK(ppi_struct_congruent(rs[0].dist, encode_dist(Distribution<Pccs>{{leaf("P"), Prob(7, 8)}, {leaf("Q"), Prob(1, 8)}}, {})));
}

TEST_CASE("mutation names") {
  for (auto m : {Mutation::none, Mutation::drop_iota_input, Mutation::swap_branch_probs, Mutation::omit_replicated_defs})
    CHECK(parse_mutation(mutation_str(m)) == m);
  CHECK_THROWS_AS(parse_mutation("bogus"), std::invalid_argument);
}

TEST_CASE("provenance of reserved names") {
  auto e = encode_inner_traced(pccs_par(tau2(Prob(1, 2), pccs_success(), pccs_inert()), in("a", pccs_success())));
  CHECK(e.provenance.size() == 2);
  for (const auto& [n, from] : e.provenance) {
    CHECK((name_kind(n) == NameKind::iota || name_kind(n) == NameKind::tauhat));
    CHECK_FALSE(from.empty());
  }
}

TEST_CASE("target step classes") {
  CHECK(classify_target_step("s_a", false).kind == StepClassKind::A);
  CHECK(classify_target_step("#i%2", false).kind == StepClassKind::B);
  CHECK(classify_target_step("#t", false).kind == StepClassKind::TAU);
  CHECK(classify_target_step("#C_C", true).kind == StepClassKind::REP);
}

TEST_CASE("hygiene and compositionality on generated terms") {
  testing::PccsGen gen(17);
  for (int i = 0; i < 200; ++i) {
    Pccs a = gen.term(3), b = gen.term(2);
    Ppi ea = encode_inner(a);
    CHECK(check_policy_hygiene(a, {}, ea).empty());
    CHECK(encode_inner(pccs_par(a, b)) == ppi_par(ea, encode_inner(b)));
    for (const auto& n : ppi_free_names(ea)) CHECK(name_kind(n) == NameKind::source);
  }
}
