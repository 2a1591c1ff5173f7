// SPDX-License-Identifier: MIT
#include "report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <functional>

namespace pcw {

namespace {

struct Options {
  std::string file;
  std::string term;
  std::vector<std::string> entries;
  unsigned depth = 4;
  std::size_t state_cap = 100000;
  std::size_t combo_cap = 10000;
  std::string relation = "congruence";
  std::string format = "text";
  std::string mutation = "none";
  std::uint64_t seed = 1;
  std::string side = "source";
  bool maximal = false;
  bool inner = false;
  bool normal = false;
  bool verbose = false;
  std::string check;
};

struct Run {
  Options opt;
  PocConfig cfg;
  Format format = Format::text;
  Corpus corpus;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t parse_count(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size() || n == 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw UsageError("@" + key + " needs a positive integer, got '" + v + "'");
  }
}

// Flags given on the command line win over corpus settings.
void prepare(Run& run, const CLI::App& sub) {
  const auto& o = run.opt;
  if (o.file.empty() == o.term.empty()) throw UsageError("give either a corpus file or --term");
  run.corpus = o.file.empty() ? Corpus{} : load_corpus(o.file);
  if (!o.term.empty()) run.corpus.entries.push_back({"term", o.term, 1, parse_pccs(o.term)});
  if (!o.entries.empty()) {
    std::vector<CorpusEntry> keep;
    for (const auto& name : o.entries) {
      auto it = std::find_if(run.corpus.entries.begin(), run.corpus.entries.end(),
                             [&](const CorpusEntry& e) { return e.name == name; });
      if (it == run.corpus.entries.end()) throw UsageError("no entry named " + name);
      keep.push_back(*it);
    }
    run.corpus.entries = std::move(keep);
  }
  Budget& b = run.cfg.budget;
  b.depth = o.depth;
  b.state_cap = o.state_cap;
  b.combo_cap = o.combo_cap;
  const auto& d = run.corpus.defaults;
  auto given = [&](const char* flag) { return sub.count(flag) > 0; };
  if (d.count("depth") && !given("--depth")) b.depth = static_cast<unsigned>(parse_count("depth", d.at("depth")));
  if (d.count("state-cap") && !given("--state-cap")) b.state_cap = parse_count("state-cap", d.at("state-cap"));
  if (d.count("combo-cap") && !given("--combo-cap")) b.combo_cap = parse_count("combo-cap", d.at("combo-cap"));
  if (b.state_cap == 0 || b.combo_cap == 0) throw UsageError("caps must be positive");
  if (o.maximal) b.mode = StepMode::all_enabled;
  run.cfg.relation = parse_relation(o.relation);
  run.cfg.mutation = parse_mutation(o.mutation);
  run.format = o.format == "records" ? Format::records : Format::text;
}

template <class T, class Succ>
std::vector<std::vector<Distribution<T>>> layers(const T& start, Succ&& succ, const Budget& b, bool& truncated) {
  std::vector<std::vector<Distribution<T>>> out{{dist_point(start)}};
  std::size_t total = 1;
  truncated = false;
  for (unsigned k = 1; k <= b.depth; ++k) {
    std::set<Distribution<T>> seen;
    std::vector<Distribution<T>> next;
    for (const auto& d : out.back()) {
      auto st = dist_step(d, succ, {b.combo_cap, b.mode});
      truncated = truncated || st.truncated;
      for (auto& r : st.results)
        if (seen.insert(r).second) next.push_back(std::move(r));
    }
    total += next.size();
    if (total > b.state_cap) {
      truncated = true;
      break;
    }
    if (next.empty()) break;
    out.push_back(std::move(next));
  }
  return out;
}

template <class T, class Succ>
void print_layers(Run& run, std::ostream& out, const std::string& entry, const char* side, const T& start,
                  Succ&& succ) {
  bool truncated = false;
  auto ls = layers(start, succ, run.cfg.budget, truncated);
  for (std::size_t k = 0; k < ls.size(); ++k)
    for (const auto& d : ls[k]) {
      if (run.format == Format::records) {
        emit(out, Record{{"entry", entry}, {"side", side}, {"depth", k}, {"distribution", dist_record(d)}});
      } else {
        out << side << " " << k << ": " << show_dist<T>(d, [](const T& t) { return t.str(); }) << "\n";
      }
    }
  if (truncated) {
    if (run.format == Format::records)
      emit(out, Record{{"entry", entry}, {"side", side}, {"note", "exploration hit a cap"}});
    else
      out << side << ": exploration hit a cap\n";
  }
}

int cmd_steps(Run& run, std::ostream& out) {
  const auto& side = run.opt.side;
  if (side != "source" && side != "target" && side != "both") throw UsageError("--side is source, target or both");
  for (const auto& e : run.corpus.entries) {
    if (run.format == Format::text) out << "== " << e.name << "\n";
    EncodingSystem sys(e.program.env, run.cfg);
    if (side != "target") print_layers(run, out, e.name, "source", e.program.term, sys.source_fn());
    if (side != "source") print_layers(run, out, e.name, "target", sys.enc(e.program.term), sys.target_fn());
  }
  return 0;
}

int cmd_encode(Run& run, std::ostream& out) {
  for (const auto& e : run.corpus.entries) {
    Ppi t = run.opt.inner ? encode_inner(e.program.term, {}, run.cfg.mutation)
                          : encode_outer(e.program.term, e.program.env, {}, run.cfg.mutation);
    if (run.opt.normal) t = ppi_normal_form(t);
    if (run.format == Format::records)
      emit(out, Record{{"entry", e.name}, {"source", e.program.term.str()}, {"encoding", t.str()}});
    else
      out << (run.corpus.entries.size() > 1 ? e.name + ": " : "") << t.str() << "\n";
  }
  return 0;
}

int cmd_trace(Run& run, std::ostream& out) {
  for (const auto& e : run.corpus.entries) {
    EncodingSystem sys(e.program.env, run.cfg);
    auto lines = emulation_trace(sys, e.program.term, run.cfg.budget.depth);
    if (run.format == Format::text) out << "== " << e.name << "\nsource 0: " << e.program.term.str() << "\n";
    for (std::size_t k = 0; k < lines.size(); ++k) {
      const auto& l = lines[k];
      if (run.format == Format::records) {
        emit(out, Record{{"entry", e.name}, {"step", k + 1}, {"source", l.source}, {"target", l.target},
                         {"classes", l.classes}});
        continue;
      }
      out << "source " << k + 1 << ": " << l.source << "\n";
      for (std::size_t j = 0; j < l.target.size(); ++j)
        out << "  [" << (j < l.classes.size() ? l.classes[j] : "") << "] " << l.target[j] << "\n";
    }
  }
  return 0;
}

using PocFn = std::function<PocReport(EncodingSystem&, const Pccs&)>;
using VerdictFn = std::function<Verdict(EncodingSystem&, const Pccs&)>;

std::map<std::string, PocFn> poc_checks() {
  return {
      {"weak-poc", check_weak_poc},
      {"mid-poc", check_mid_poc},
      {"strong-poc", check_strong_poc},
      {"strong-oc", [](EncodingSystem& s, const Pccs& p) { return check_nonprob_oc(s, p, OcVariant::strong); }},
      {"plain-oc", [](EncodingSystem& s, const Pccs& p) { return check_nonprob_oc(s, p, OcVariant::plain); }},
      {"weak-oc", [](EncodingSystem& s, const Pccs& p) { return check_nonprob_oc(s, p, OcVariant::weak); }},
  };
}

std::map<std::string, VerdictFn> verdict_checks(std::uint64_t seed) {
  return {
      {"success-sensitiveness", check_success_sensitiveness},
      {"barb-sensitiveness", check_barb_sensitiveness},
      {"divergence-reflection", check_divergence_reflection},
      {"name-invariance", [seed](EncodingSystem& s, const Pccs& p) { return check_name_invariance(s, p, 10, seed); }},
      {"weak-compositionality", check_weak_compositionality},
      {"step-taxonomy", check_step_taxonomy},
  };
}

const std::map<std::string, PocFlavor> kTheorems{
    {"theorem-weak", PocFlavor::weak}, {"theorem-mid", PocFlavor::mid}, {"theorem-strong", PocFlavor::strong}};

Status report_poc(Run& run, std::ostream& out, const std::string& entry, const PocReport& rep) {
  Verdict v = rep.verdict();
  if (run.format == Format::records) {
    for (const auto& o : rep.obligations) emit(out, obligation_record(entry, rep.check, o));
    emit(out, verdict_record(entry, v));
    return v.status;
  }
  print_verdict(out, entry, v);
  if (run.opt.verbose)
    for (const auto& o : rep.obligations) {
      out << "  " << o.direction << " [" << status_str(o.status) << "] " << o.source << " ~ " << o.target;
      if (!o.trace.empty()) out << "  via " << o.trace;
      out << "\n";
    }
  return v.status;
}

Status report_verdict(Run& run, std::ostream& out, const std::string& entry, const Verdict& v) {
  if (run.format == Format::records)
    emit(out, verdict_record(entry, v));
  else
    print_verdict(out, entry, v);
  return v.status;
}

int cmd_check(Run& run, std::ostream& out) {
  const auto& name = run.opt.check;
  Status st = Status::holds;
  if (auto it = kTheorems.find(name); it != kTheorems.end()) {
    for (const auto& e : run.corpus.entries) {
      auto rep = theorem_instance_check({{e.name, e.program.term, e.program.env}}, run.cfg, it->second);
      st = worst(st, report_verdict(run, out, e.name, rep.verdict));
    }
    return status_exit_code(st);
  }
  auto pocs = poc_checks();
  auto verdicts = verdict_checks(run.opt.seed);
  for (const auto& e : run.corpus.entries) {
    EncodingSystem sys(e.program.env, run.cfg);
    if (auto it = pocs.find(name); it != pocs.end()) {
      st = worst(st, report_poc(run, out, e.name, it->second(sys, e.program.term)));
    } else {
      st = worst(st, report_verdict(run, out, e.name, verdicts.at(name)(sys, e.program.term)));
    }
  }
  return status_exit_code(st);
}

int cmd_suite(Run& run, std::ostream& out) {
  Status st = Status::holds;
  std::size_t n = 0, fails = 0, inconclusive = 0;
  auto verdicts = verdict_checks(run.opt.seed);
  for (const auto& e : run.corpus.entries) {
    EncodingSystem sys(e.program.env, run.cfg);
    std::vector<Verdict> vs;
    vs.push_back(verdicts.at("weak-compositionality")(sys, e.program.term));
    vs.push_back(verdicts.at("name-invariance")(sys, e.program.term));
    vs.push_back(check_weak_poc(sys, e.program.term).verdict());
    vs.push_back(verdicts.at("divergence-reflection")(sys, e.program.term));
    vs.push_back(verdicts.at("success-sensitiveness")(sys, e.program.term));
    for (const auto& v : vs) {
      ++n;
      fails += v.status == Status::fails;
      inconclusive += v.status == Status::inconclusive;
      st = worst(st, report_verdict(run, out, e.name, v));
    }
  }
  if (run.format == Format::records) {
    emit(out, Record{{"summary", "suite"}, {"entries", run.corpus.entries.size()}, {"verdicts", n},
                     {"fails", fails}, {"inconclusive", inconclusive}, {"status", status_str(st)}});
  } else {
    out << "suite: " << run.corpus.entries.size() << " entries, " << n << " verdicts, " << fails << " fails, "
        << inconclusive << " inconclusive: " << status_str(st) << "\n";
  }
  return status_exit_code(st);
}

void common_options(CLI::App* sub, Options& o, bool positional = true) {
  sub->add_option("file", o.file, "corpus file");
  sub->add_option("--term", o.term, "program text instead of a corpus file");
  sub->add_option("--entry", o.entries, "run only these entries")->take_all();
  sub->add_option("--depth", o.depth, "step bound")->check(CLI::PositiveNumber);
  sub->add_option("--state-cap", o.state_cap, "distributions explored per search")->check(CLI::PositiveNumber);
  sub->add_option("--combo-cap", o.combo_cap, "move combinations per step")->check(CLI::PositiveNumber);
  sub->add_option("--relation", o.relation, "target relation")->check(CLI::IsMember({"congruence", "identity"}));
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "records"}));
  sub->add_option("--mutation", o.mutation, "encoder fault")
      ->check(CLI::IsMember({"none", "drop-iota-input", "swap-branch-probs", "omit-replicated-defs"}));
  sub->add_flag("--maximal", o.maximal, "every enabled point moves in each step");
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, f] : poc_checks()) out.push_back(n);
    for (const auto& [n, f] : verdict_checks(1)) out.push_back(n);
    for (const auto& [n, f] : kTheorems) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
  }();
  return names;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Run run;
  Options& o = run.opt;
  CLI::App app{"pcw: encoding workbench for probabilistic CCS and the probabilistic pi-calculus", "pcw"};
  app.require_subcommand(1);
  auto* steps = app.add_subcommand("steps", "reachable distributions, layer by layer");
  common_options(steps, o);
  steps->add_option("--side", o.side, "source, target or both");
  auto* encode = app.add_subcommand("encode", "print the encoding");
  common_options(encode, o);
  encode->add_flag("--inner", o.inner, "without the definitions context");
  encode->add_flag("--normal", o.normal, "in structural normal form");
  auto* trace = app.add_subcommand("trace", "source run with its target emulation");
  common_options(trace, o);
  auto* check = app.add_subcommand("check", "run one checker");
  check->add_option("name", o.check, "checker")->required()->check(CLI::IsMember(check_names()));
  common_options(check, o);
  check->add_option("--seed", o.seed, "seed of the sampled substitutions");
  check->add_flag("--verbose", o.verbose, "list every obligation");
  auto* suite = app.add_subcommand("suite", "the encodability battery over a corpus");
  common_options(suite, o);
  suite->add_option("--seed", o.seed, "seed of the sampled substitutions");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pcw: " << e.what() << "\n";
    return 3;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    prepare(run, *sub);
    if (sub == steps) return cmd_steps(run, out);
    if (sub == encode) return cmd_encode(run, out);
    if (sub == trace) return cmd_trace(run, out);
    if (sub == check) return cmd_check(run, out);
    return cmd_suite(run, out);
  } catch (const ParseError& e) {
    err << "pcw: parse error at " << e.what() << "\n";
  } catch (const UsageError& e) {
    err << "pcw: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "pcw: " << e.what() << "\n";
  }
  return 3;
}

}  // namespace pcw
