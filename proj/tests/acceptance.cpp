// SPDX-License-Identifier: MIT
// One line per acceptance criterion. Exits non-zero if any criterion fails.
#include "pcw/cli.hpp"
#include "support/oracles.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace pcw;
using json = nlohmann::json;

namespace {

const std::string kCorpus = PCW_CORPUS_DIR;
const std::string kSuite = kCorpus + "/encoding_suite.pccs";
const std::string kFixtures = kCorpus + "/fixtures.pccs";

// Pinned limits. Probabilities are exact rationals, so every comparison is exact equality.
constexpr double kExampleSeconds = 1.0;
constexpr double kSuiteSeconds = 60.0;
constexpr double kLiftSeconds = 30.0;
constexpr unsigned kSuiteDepth = 4;
constexpr std::size_t kMinEntries = 20;
constexpr int kLiftInstances = 500;
constexpr std::size_t kLiftSupport = 5;
constexpr int kLiftDenominator = 12;
constexpr int kPreorders = 200;
constexpr int kSpotChecksPerPreorder = 5;
constexpr unsigned kDivergenceDepth = 6;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double s) {
  std::ostringstream o;
  o.precision(3);
  o << std::fixed << s << " s";
  return o.str();
}

int cli(const std::vector<std::string>& args, std::string& out) {
  std::ostringstream o, e;
  int code = run_cli(args, o, e);
  out = o.str();
  return code;
}

std::vector<json> records(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

const CorpusEntry& entry(const Corpus& c, const std::string& name) {
  for (const auto& e : c.entries)
    if (e.name == name) return e;
  throw std::runtime_error("no entry " + name);
}

Pccs leaf(const std::string& x) { return pccs_choice({GuardKind::output, x}, {{Prob(1), pccs_inert()}}); }

// Probability/term pairs of a record distribution, in record order.
std::map<std::string, std::string> dist_of(const json& rec) {
  std::map<std::string, std::string> m;
  for (const auto& pt : rec.at("distribution")) m[pt.at("term").get<std::string>()] = pt.at("p").get<std::string>();
  return m;
}

std::map<std::string, std::string> shown(const Distribution<Pccs>& d) {
  std::map<std::string, std::string> m;
  for (const auto& [t, p] : d) m[show_pccs(t)] = prob_str(p);
  return m;
}

Distribution<Pccs> tau_steps_ds1() {
  Pccs right = pccs_choice({GuardKind::tau, ""}, {{Prob(3, 5), leaf("R")}, {Prob(2, 5), leaf("S1")}});
  return {{pccs_par(leaf("P"), right), Prob(1, 8)}, {pccs_par(leaf("Q"), right), Prob(7, 8)}};
}

Distribution<Pccs> tau_steps_ds2() {
  return {{pccs_par(leaf("P"), leaf("R")), Prob(3, 40)},
          {pccs_par(leaf("P"), leaf("S1")), Prob(2, 40)},
          {pccs_par(leaf("Q"), leaf("R")), Prob(21, 40)},
          {pccs_par(leaf("Q"), leaf("S1")), Prob(14, 40)}};
}

void walk(const Pccs& p, const std::function<void(const Pccs&)>& f) {
  f(p);
  for (const auto& k : p.node().kids) walk(k, f);
  for (const auto& b : p.node().branches) walk(b.cont, f);
}

// Some constant of env can reach a call of itself.
bool recursive(const DefEnv& env) {
  std::map<std::string, std::set<std::string>> calls;
  for (const auto& [c, d] : env)
    walk(d.body, [&](const Pccs& q) {
      if (q.kind() == PccsKind::call) calls[c].insert(q.node().ident);
    });
  for (const auto& [c, d] : env) {
    std::set<std::string> seen;
    std::vector<std::string> todo(calls[c].begin(), calls[c].end());
    while (!todo.empty()) {
      std::string x = todo.back();
      todo.pop_back();
      if (x == c) return true;
      if (!seen.insert(x).second) continue;
      for (const auto& y : calls[x]) todo.push_back(y);
    }
  }
  return false;
}

Outcome criterion1() {
  Outcome o;
  Timer t;
  std::string out;
  int code = cli({"steps", kFixtures, "--entry", "tau-steps", "--depth", "2", "--format", "records"}, out);
  o.require(code == 0, "steps exited with " + std::to_string(code));
  bool has1 = false, has2 = false;
  for (const auto& r : records(out)) {
    if (r.at("side") != "source") continue;
    if (r.at("depth") == 1 && dist_of(r) == shown(tau_steps_ds1())) has1 = true;
    if (r.at("depth") == 2 && dist_of(r) == shown(tau_steps_ds2())) has2 = true;
  }
  o.require(has1, "layer 1 lacks {1/8, 7/8}");
  o.require(has2, "layer 2 lacks {3/40, 2/40, 21/40, 14/40}");
  // with every enabled point moving, the second layer is that distribution alone
  code = cli({"steps", kFixtures, "--entry", "tau-steps", "--depth", "2", "--format", "records", "--maximal"}, out);
  std::size_t layer2 = 0;
  bool only = true;
  for (const auto& r : records(out))
    if (r.at("side") == "source" && r.at("depth") == 2) {
      ++layer2;
      only = only && dist_of(r) == shown(tau_steps_ds2());
    }
  o.require(code == 0 && layer2 == 1 && only, "maximal layer 2 is not exactly the expected distribution");
  double s = t.seconds();
  o.require(s < kExampleSeconds, "took " + fmt(s));
  if (o.pass) o.detail = "both layers exact, " + fmt(s);
  return o;
}

Outcome criterion2() {
  Outcome o;
  Timer t;
  Corpus c = load_corpus(kFixtures);
  const auto& e = entry(c, "tau-steps");
  Ppi t0 = encode_outer(e.program.term, e.program.env);
  Distribution<Ppi> dt1;
  bool found = false;
  for (const auto& r : ppi_reduce(t0)) {
    if (!ppi_struct_congruent(r.dist, encode_dist(tau_steps_ds1(), {}))) continue;
    o.require(r.cls.kind == StepClassKind::TAU, "first step is " + step_class_str(r.cls));
    dt1 = r.dist;
    found = true;
  }
  o.require(found, "no first step matches the encoded one-step distribution");
  if (!found) return o;
  for (const auto& [p, w] : dt1) {
    auto rs = ppi_reduce(p);
    o.require(rs.size() == 1, "an intermediate point has " + std::to_string(rs.size()) + " reductions");
    for (const auto& r : rs) o.require(r.cls.kind == StepClassKind::TAU, "second step is " + step_class_str(r.cls));
  }
  auto succ = [](const Ppi& p) {
    SuccList<Ppi> out;
    for (const auto& r : ppi_reduce(p)) out.push_back(r.dist);
    return out;
  };
  auto st = dist_step(dt1, succ, {10000, StepMode::all_enabled});
  o.require(st.results.size() == 1, "second step is not unique");
  if (st.results.size() == 1) {
    o.require(ppi_struct_congruent(encode_dist(tau_steps_ds2(), {}), st.results[0]),
              "two-step target is not congruent to the encoded two-step source");
    o.require(st.results[0].size() == 4, "two-step target does not have four points");
  }
  double s = t.seconds();
  o.require(s < kExampleSeconds, "took " + fmt(s));
  if (o.pass) o.detail = "TAU, TAU; congruent, " + fmt(s);
  return o;
}

Outcome criterion3() {
  Outcome o;
  Timer t;
  Corpus c = load_corpus(kFixtures);
  const auto& e = entry(c, "r-step");
  Ppi t0 = encode_outer(e.program.term, e.program.env);
  // enumerate maximal reduction sequences of distributions
  std::size_t maximal = 0;
  std::vector<std::vector<StepClass>> seqs;
  std::function<void(const Distribution<Ppi>&, std::vector<StepClass>&, unsigned)> dfs =
      [&](const Distribution<Ppi>& d, std::vector<StepClass>& cls, unsigned depth) {
        bool moved = false;
        if (depth < 10)
          for (const auto& [p, w] : d)
            for (const auto& r : ppi_reduce(p)) {
              moved = true;
              std::map<Ppi, Prob> next;
              for (const auto& [q, v] : d)
                if (!(q == p)) next[q] += v;
              for (const auto& [q, v] : r.dist) next[q] += w * v;
              cls.push_back(r.cls);
              dfs(Distribution<Ppi>::from_map(next), cls, depth + 1);
              cls.pop_back();
            }
        if (!moved) {
          ++maximal;
          seqs.push_back(cls);
          o.require(d == encode_dist(dist_point(pccs_success()), e.program.env),
                    "final distribution differs from the encoded source result");
        }
      };
  std::vector<StepClass> cls;
  dfs(dist_point(t0), cls, 0);
  o.require(maximal == 1, std::to_string(maximal) + " maximal sequences");
  o.require(maximal == 1 && seqs[0].size() == 1 && seqs[0][0].kind == StepClassKind::REP,
            "the sequence is not a single REP step");
  double s = t.seconds();
  o.require(s < kExampleSeconds, "took " + fmt(s));
  if (o.pass) o.detail = "one maximal sequence, one REP step, exact equality, " + fmt(s);
  return o;
}

bool has_a_step(const CorpusEntry& e) {
  PocConfig cfg;
  EncodingSystem sys(e.program.env, cfg);
  std::set<Ppi> seen{sys.enc(e.program.term)};
  std::vector<Ppi> todo(seen.begin(), seen.end());
  for (unsigned d = 0; d < 8 && !todo.empty(); ++d) {
    std::vector<Ppi> next;
    for (const auto& p : todo)
      for (const auto& [dist, cls] : sys.target_classified(p)) {
        if (cls.kind == StepClassKind::A) return true;
        for (const auto& [q, w] : dist)
          if (seen.insert(q).second) next.push_back(q);
      }
    todo = std::move(next);
  }
  return false;
}

Outcome criterion4() {
  Outcome o;
  Timer t;
  std::string out;
  int code = cli({"suite", kSuite, "--depth", std::to_string(kSuiteDepth), "--format", "records"}, out);
  double s = t.seconds();
  o.require(code == 0, "suite exited with " + std::to_string(code));
  std::map<std::string, std::size_t> status;
  std::map<std::string, std::set<std::string>> checks;
  std::size_t entries = 0;
  for (const auto& r : records(out)) {
    if (r.contains("summary")) {
      entries = r.at("entries").get<std::size_t>();
      continue;
    }
    if (!r.contains("status") || !r.contains("obligations")) continue;
    ++status[r.at("status").get<std::string>()];
    checks[r.at("entry").get<std::string>()].insert(r.at("check").get<std::string>());
  }
  o.require(entries >= kMinEntries, std::to_string(entries) + " entries");
  o.require(status["fails"] == 0, std::to_string(status["fails"]) + " fails");
  o.require(status["inconclusive"] == 0, std::to_string(status["inconclusive"]) + " inconclusive");
  const std::set<std::string> want{"weak-compositionality", "name-invariance", "weak-poc", "divergence-reflection",
                                   "success-sensitiveness"};
  for (const auto& [name, cs] : checks) o.require(cs == want, "entry " + name + " misses a check");
  o.require(checks.size() == entries, "not every entry reported");

  Corpus c = load_corpus(kSuite);
  std::set<std::string> seen;
  bool comm = false, rec = false;
  for (const auto& e : c.entries) {
    walk(e.program.term, [&](const Pccs& q) {
      switch (q.kind()) {
        case PccsKind::choice:
          seen.insert(q.node().guard.kind == GuardKind::tau     ? "tau"
                      : q.node().guard.kind == GuardKind::input ? "input"
                                                                : "output");
          break;
        case PccsKind::par: seen.insert("par"); break;
        case PccsKind::restrict: seen.insert("restrict"); break;
        case PccsKind::relabel: seen.insert("relabel"); break;
        case PccsKind::call: seen.insert("call"); break;
        case PccsKind::success: seen.insert("success"); break;
        case PccsKind::inert: seen.insert("inert"); break;
      }
    });
    rec = rec || recursive(e.program.env);
    comm = comm || has_a_step(e);
  }
  o.require(seen.size() == 9, "operator coverage is " + std::to_string(seen.size()) + " of 9");
  o.require(comm, "no communication");
  o.require(rec, "no recursion");
  o.require(s < kSuiteSeconds, "took " + fmt(s));
  if (o.pass)
    o.detail = std::to_string(entries) + " entries, " + std::to_string(status["holds"]) + " verdicts hold, " + fmt(s);
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::string out;
  int strong = cli({"check", "strong-poc", kFixtures, "--entry", "comm-choice"}, out);
  int weak = cli({"check", "weak-poc", kFixtures, "--entry", "comm-choice"}, out);
  o.require(strong == 1, "strong-poc exit " + std::to_string(strong));
  o.require(weak == 0, "weak-poc exit " + std::to_string(weak));
  if (o.pass) o.detail = "strong fails, weak holds";
  return o;
}

Outcome criterion6() {
  Outcome o;
  Timer t;
  std::mt19937 rng(2024);
  int agree = 0, positive = 0;
  for (int i = 0; i < kLiftInstances; ++i) {
    auto d = testing::random_int_dist(rng, 6, kLiftSupport, kLiftDenominator);
    auto th = testing::random_int_dist(rng, 6, kLiftSupport, kLiftDenominator);
    Relation<int> r;
    int density = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        if (std::uniform_int_distribution<int>(0, 4)(rng) < density) r.insert({a, b});
    auto rel = [&](int a, int b) { return r.count({a, b}) != 0; };
    auto c = lift_check(r, d, th);
    bool oracle = testing::hall_lift(rel, d, th);
    bool ok = c.has_value() == oracle && (!c || testing::marginals_match(rel, *c, d, th));
    agree += ok;
    positive += oracle;
  }
  double s = t.seconds();
  o.require(agree == kLiftInstances, std::to_string(kLiftInstances - agree) + " disagreements");
  o.require(s < kLiftSeconds, "took " + fmt(s));
  if (o.pass)
    o.detail = std::to_string(agree) + "/" + std::to_string(kLiftInstances) + " agree (" + std::to_string(positive) +
               " liftable), " + fmt(s);
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937 rng(77);
  int checks = 0, violations = 0;
  for (int i = 0; i < kPreorders; ++i) {
    int n = std::uniform_int_distribution<int>(2, 6)(rng);
    std::set<std::pair<int, int>> base;
    int edges = std::uniform_int_distribution<int>(0, n)(rng);
    for (int k = 0; k < edges; ++k)
      base.insert({std::uniform_int_distribution<int>(0, n - 1)(rng), std::uniform_int_distribution<int>(0, n - 1)(rng)});
    auto r = testing::closure_by_iteration(base, n);
    for (int k = 0; k < kSpotChecksPerPreorder; ++k) {
      auto d = testing::random_int_dist(rng, n, 4, 10);
      ++checks;
      if (!lift_check(r, d, d)) ++violations;
      auto th = testing::push_along(rng, d, r);
      auto ph = testing::push_along(rng, th, r);
      ++checks;
      if (!lift_check(r, d, th) || !lift_check(r, th, ph)) ++violations;
      ++checks;
      if (!lift_check(r, d, ph)) ++violations;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  if (o.pass) o.detail = std::to_string(checks) + " spot checks, no violations";
  return o;
}

Outcome criterion8() {
  Outcome o;
  Timer t;
  Corpus c = load_corpus(kSuite);
  PocConfig cfg;
  cfg.budget.depth = kSuiteDepth;
  auto rep = theorem_instance_check(theorem_entries(c), cfg, PocFlavor::weak);
  o.require(rep.verdict.status == Status::holds,
            std::string(status_str(rep.verdict.status)) + ": " + rep.verdict.counterexample.value_or(""));
  if (o.pass)
    o.detail = std::to_string(rep.verdict.obligations) + " obligations, " + std::to_string(c.entries.size()) +
               " entries, " + fmt(t.seconds());
  return o;
}

Outcome criterion9() {
  Outcome o;
  Corpus c = load_corpus(kSuite);
  std::string summary;
  for (auto m : {Mutation::drop_iota_input, Mutation::swap_branch_probs, Mutation::omit_replicated_defs}) {
    std::size_t fails = 0, inconclusive = 0;
    for (const auto& e : c.entries) {
      PocConfig cfg;
      cfg.budget.depth = kSuiteDepth;
      cfg.mutation = m;
      EncodingSystem sys(e.program.env, cfg);
      for (Status st : {check_weak_poc(sys, e.program.term).status,
                        check_success_sensitiveness(sys, e.program.term).status,
                        check_divergence_reflection(sys, e.program.term).status}) {
        fails += st == Status::fails;
        inconclusive += st == Status::inconclusive;
      }
    }
    o.require(fails > 0, std::string(mutation_str(m)) + " is not detected");
    summary += std::string(summary.empty() ? "" : ", ") + mutation_str(m) + ": " + std::to_string(fails) + " fails";
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome criterion10() {
  Outcome o;
  Corpus f = load_corpus(kFixtures);
  const auto& div = entry(f, "divergent");
  PocConfig cfg;
  EncodingSystem sys(div.program.env, cfg);
  o.require(source_divergence(sys, div.program.term, kDivergenceDepth).cycle, "source does not diverge");
  o.require(target_divergence(sys, sys.enc(div.program.term), kDivergenceDepth).cycle, "target does not diverge");
  Corpus c = load_corpus(kSuite);
  std::size_t checked = 0;
  for (const auto& e : c.entries) {
    if (recursive(e.program.env)) continue;
    EncodingSystem s(e.program.env, cfg);
    auto a = source_divergence(s, e.program.term, kDivergenceDepth);
    auto b = target_divergence(s, s.enc(e.program.term), kDivergenceDepth);
    o.require(!a.cycle && !b.cycle, e.name + " diverges");
    o.require(a.complete && b.complete, e.name + " was not fully explored");
    ++checked;
  }
  if (o.pass) o.detail = "cycle on both sides; " + std::to_string(checked) + " non-recursive entries terminate";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
