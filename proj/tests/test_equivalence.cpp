// SPDX-License-Identifier: MIT
#include "pcw/equivalence.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <string>

using namespace pcw;
using S = std::string;

namespace {

// A small hand-written system over string states.
struct Plts {
  std::map<S, SuccList<S>> succ;
  SuccList<S> none;

  StepFn<S> fn() const {
    return [this](const S& s) -> const SuccList<S>& {
      auto it = succ.find(s);
      return it == succ.end() ? none : it->second;
    };
  }
};

Show<S> show = [](const S& s) { return s; };

Related<S> rel_of(const Relation<S>& r) {
  return [r](const S& a, const S& b) { return r.count({a, b}) != 0; };
}

Relation<S> diagonal(const std::set<S>& xs) {
  Relation<S> r;
  for (const auto& x : xs) r.insert({x, x});
  return r;
}

}  // namespace

TEST_CASE("status helpers") {
  CHECK(worst(Status::holds, Status::inconclusive) == Status::inconclusive);
  CHECK(worst(Status::fails, Status::inconclusive) == Status::fails);
  CHECK(status_exit_code(Status::holds) == 0);
  CHECK(status_exit_code(Status::fails) == 1);
  CHECK(status_exit_code(Status::inconclusive) == 2);
  Verdict v{"x"};
  v.inconclusive("budget");
  v.fail("broken");
  v.inconclusive("again");
  CHECK(v.status == Status::fails);
  CHECK(v.counterexample == "broken");
  Verdict w{"y"};
  w.absorb(v);
  CHECK(w.status == Status::fails);
}

TEST_CASE("preorder") {
  std::set<S> u{"A", "B", "C"};
  CHECK(check_preorder(diagonal(u), u, show).status == Status::holds);
  CHECK(check_preorder(Relation<S>{{"A", "B"}}, {"A", "B"}, show).status == Status::fails);
  Relation<S> r{{"A", "A"}, {"B", "B"}, {"C", "C"}, {"A", "B"}, {"B", "C"}};
  auto v = check_preorder(r, u, show);
  CHECK(v.status == Status::fails);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->find("transitive") != std::string::npos);
}

TEST_CASE("closure agrees with iterated composition") {
  std::mt19937 rng(5);
  for (int round = 0; round < 60; ++round) {
    std::set<std::pair<int, int>> r;
    for (int k = 0; k < 6; ++k)
      r.insert({std::uniform_int_distribution<int>(0, 5)(rng), std::uniform_int_distribution<int>(0, 5)(rng)});
    std::set<int> u{0, 1, 2, 3, 4, 5};
    auto c = reflexive_transitive_closure<int>(r, u);
    CHECK(c == testing::closure_by_iteration(r, 6));
    CHECK(check_preorder<int>(c, u, [](const int& i) { return std::to_string(i); }).status == Status::holds);
  }
}

TEST_CASE("correspondence simulation") {
  Plts sys;
  sys.succ["P"] = {Distribution<S>{{"A", Prob(1, 2)}, {"B", Prob(1, 2)}}};
  sys.succ["A"] = {dist_point(S("D"))};
  std::set<S> all{"P", "A", "B", "D", "N"};

  SimSpec<S> id{{{"P", "P"}}, rel_of(diagonal(all)), sys.fn(), show, Budget{}, 4, {}, {}};
  CHECK(check_prob_correspondence_sim(id).status == Status::holds);

  // P can step, N cannot
  Relation<S> bad = diagonal(all);
  bad.insert({"P", "N"});
  SimSpec<S> stuck{{{"P", "N"}}, rel_of(bad), sys.fn(), show, Budget{}, 4, {}, {}};
  auto v = check_prob_correspondence_sim(stuck);
  CHECK(v.status == Status::fails);
  CHECK(v.counterexample);

  SimSpec<S> outside{{{"P", "A"}}, rel_of(diagonal(all)), sys.fn(), show, Budget{}, 4, {}, {}};
  CHECK(check_prob_correspondence_sim(outside).status == Status::fails);
}

TEST_CASE("correspondence simulation allows catching up, bisimulation does not") {
  // Q reaches the image of P's result only after an extra administrative step.
  Plts sys;
  sys.succ["P"] = {dist_point(S("P1"))};
  sys.succ["Q"] = {dist_point(S("Qm"))};
  sys.succ["Qm"] = {dist_point(S("Q1"))};
  std::set<S> all{"P", "P1", "Q", "Qm", "Q1"};
  Relation<S> r = diagonal(all);
  r.insert({"P", "Q"});
  r.insert({"P1", "Q1"});
  r.insert({"P", "Qm"});
  SimSpec<S> spec{{{"P", "Q"}}, rel_of(r), sys.fn(), show, Budget{}, 4, {}, {}};
  CHECK(check_prob_correspondence_sim(spec).status == Status::holds);

  Relation<S> r2 = diagonal(all);
  r2.insert({"P", "Q"});
  r2.insert({"P1", "Q1"});
  SimSpec<S> spec2{{{"P", "Q"}}, rel_of(r2), sys.fn(), show, Budget{}, 4, {}, {}};
  CHECK(check_prob_correspondence_sim(spec2).status == Status::holds);
  CHECK(check_prob_bisimulation(spec2).status == Status::fails);
}

TEST_CASE("bisimulation") {
  Plts sys;
  // L and M alternate forever, N is stuck
  sys.succ["L"] = {dist_point(S("M"))};
  sys.succ["M"] = {dist_point(S("L"))};
  std::set<S> all{"L", "M", "N", "T", "T1"};
  SimSpec<S> id{{{"L", "L"}, {"N", "N"}}, rel_of(diagonal(all)), sys.fn(), show, Budget{}, 4, {}, {}};
  CHECK(check_prob_bisimulation(id).status == Status::holds);
  Relation<S> r = diagonal(all);
  r.insert({"L", "N"});
  SimSpec<S> div{{{"L", "N"}}, rel_of(r), sys.fn(), show, Budget{}, 4, {}, {}};
  CHECK(check_prob_bisimulation(div).status == Status::fails);

  // both sides reach the same point distribution
  sys.succ["T"] = {dist_point(S("T1"))};
  sys.succ["U"] = {dist_point(S("T1"))};
  all.insert("U");
  Relation<S> tu = diagonal(all);
  tu.insert({"T", "U"});
  SimSpec<S> same{{{"T", "U"}}, rel_of(tu), sys.fn(), show, Budget{2}, 2, {}, {}};
  CHECK(check_prob_bisimulation(same).status == Status::holds);
}

TEST_CASE("an unbounded system yields inconclusive rather than fails") {
  Plts sys;
  // two chains that count up forever; p_i is related to q_i only
  for (int i = 0; i < 40; ++i) {
    sys.succ["p" + std::to_string(i)] = {dist_point("p" + std::to_string(i + 1))};
    sys.succ["q" + std::to_string(i)] = {dist_point("q" + std::to_string(i + 1))};
  }
  Related<S> rel = [](const S& a, const S& b) { return a.substr(1) == b.substr(1); };
  SimSpec<S> spec{{{"p0", "q0"}}, rel, sys.fn(), show, Budget{3}, 1, {}, {}};
  CHECK(check_prob_bisimulation(spec).status == Status::inconclusive);
}

TEST_CASE("strong bisimulation") {
  Plts sys;
  sys.succ["X"] = {Distribution<S>{{"A", Prob(1, 2)}, {"B", Prob(1, 2)}}};
  sys.succ["Y"] = {Distribution<S>{{"B", Prob(1, 2)}, {"A", Prob(1, 2)}}};
  sys.succ["Z"] = {dist_point(S("A")), dist_point(S("B"))};
  std::set<S> all{"X", "Y", "Z", "A", "B"};
  Relation<S> r = diagonal(all);
  r.insert({"X", "Y"});
  CHECK(check_strong_prob_bisimulation<S>({{"X", "Y"}}, rel_of(r), sys.fn(), show).status == Status::holds);
  r.insert({"X", "Z"});
  CHECK(check_strong_prob_bisimulation<S>({{"X", "Z"}}, rel_of(r), sys.fn(), show).status == Status::fails);
  CHECK(check_strong_prob_bisimulation<S>({{"Z", "Z"}}, rel_of(diagonal(all)), sys.fn(), show).status == Status::holds);
}

TEST_CASE("greatest fixpoint") {
  Plts inert;
  std::set<S> xs{"a", "b", "c"};
  auto full = greatest_fixpoint_bisim(xs, inert.fn(), Budget{}, FixpointMode::strong, show);
  CHECK(full.relation.size() == 9);

  Plts one;
  one.succ["P"] = {dist_point(S("N"))};
  auto pn = greatest_fixpoint_bisim<S>({"P", "N"}, one.fn(), Budget{}, FixpointMode::strong, show);
  CHECK_FALSE(pn.relation.count({"P", "N"}));
  CHECK(pn.relation.count({"P", "P"}));

  // twins: 0 -> 2 and 1 -> 3, with 2 and 3 stuck
  Plts twins;
  twins.succ["0"] = {dist_point(S("2"))};
  twins.succ["1"] = {dist_point(S("3"))};
  std::set<S> st{"0", "1", "2", "3"};
  Relation<S> expect = diagonal(st);
  expect.insert({"0", "1"});
  expect.insert({"1", "0"});
  expect.insert({"2", "3"});
  expect.insert({"3", "2"});
  auto res = greatest_fixpoint_bisim(st, twins.fn(), Budget{4}, FixpointMode::strong, show);
  CHECK(res.relation == expect);
  CHECK_FALSE(res.partial);
  // unobservable steps: everything is weakly bisimilar
  auto weak = greatest_fixpoint_bisim(st, twins.fn(), Budget{4}, FixpointMode::bisim, show);
  CHECK(weak.relation.size() == 16);
}

TEST_CASE("induced relation") {
  auto r = build_induced_relation<S>({"S"}, [](const S& s) { return "[" + s + "]"; }, {});
  CHECK(r == Relation<S>{{"S", "S"}, {"[S]", "[S]"}, {"S", "[S]"}});
  auto empty = build_induced_relation<S>({}, [](const S& s) { return s; }, Relation<S>{{"t", "t"}});
  CHECK(empty == Relation<S>{{"t", "t"}});
}
