// SPDX-License-Identifier: MIT
// Operational correspondence and the other encodability criteria for the encoding.
#pragma once

#include "pcw/encoder.hpp"
#include "pcw/equivalence.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pcw {

using AnyTerm = std::variant<Pccs, Ppi>;

std::string any_str(const AnyTerm& t);
bool is_source(const AnyTerm& t);

// The target relation. Target states are kept in a canonical form for it, so that the
// relation itself becomes equality of canonical forms.
enum class TargetRelation { congruence, identity };

const char* relation_str(TargetRelation r);
TargetRelation parse_relation(const std::string& s);  // throws std::invalid_argument

struct PocConfig {
  Budget budget;
  TargetRelation relation = TargetRelation::congruence;
  Mutation mutation = Mutation::none;
  unsigned emulation_depth = 3;  // target steps tried per source step of one point
  unsigned catchup_depth = 2;    // extra target steps when B-completion does not close the gap
};

// Reduction systems of one definition environment, memoised.
class EncodingSystem {
 public:
  EncodingSystem(DefEnv env, PocConfig cfg);

  const DefEnv& env() const { return env_; }
  const PocConfig& config() const { return cfg_; }

  const SuccList<Pccs>& source_steps(const Pccs& s);
  // Successors of a canonical target term, canonicalised and without duplicates.
  const SuccList<Ppi>& target_steps(const Ppi& t);
  // Every reduction of a canonical target term with its class (duplicates kept).
  const std::vector<std::pair<Distribution<Ppi>, StepClass>>& target_classified(const Ppi& t);
  const SuccList<AnyTerm>& any_steps(const AnyTerm& t);

  Ppi canon(const Ppi& t) const;
  Distribution<Ppi> canon(const Distribution<Ppi>& d) const;
  // Canonical outer encoding.
  Ppi enc(const Pccs& s);
  Distribution<Ppi> enc(const Distribution<Pccs>& d);

  StepFn<Pccs> source_fn();
  StepFn<Ppi> target_fn();
  StepFn<AnyTerm> any_fn();

  // Class of the reduction of point t that yields d, if any.
  std::optional<StepClass> class_of(const Ppi& t, const Distribution<Ppi>& d);

 private:
  DefEnv env_;
  PocConfig cfg_;
  std::map<Pccs, SuccList<Pccs>> src_;
  std::map<Ppi, SuccList<Ppi>> tgt_;
  std::map<Ppi, std::vector<std::pair<Distribution<Ppi>, StepClass>>> cls_;
  std::map<AnyTerm, SuccList<AnyTerm>> any_;
  std::map<Pccs, Ppi> enc_;
};

std::string show_pccs(const Pccs& s);
std::string show_ppi(const Ppi& t);

struct Obligation {
  std::string direction;  // completeness | soundness
  std::string source;     // source distribution
  std::string target;     // target distribution
  std::string coupling;
  std::string trace;      // step classes of the target derivation
  Status status = Status::holds;
  std::string note;
};

struct PocReport {
  std::string check;
  std::string term;
  Status status = Status::holds;
  std::vector<Obligation> obligations;
  std::size_t source_states = 0;
  std::size_t target_states = 0;
  std::vector<std::string> notes;

  void add(Obligation o);
  Verdict verdict() const;
};

enum class PocFlavor { weak, mid, strong };
const char* flavor_str(PocFlavor f);

// Witness machinery shared by the correspondence checks and the theorem check.
class Emulator {
 public:
  explicit Emulator(EncodingSystem& sys) : sys_(sys) {}

  // Target derivation from the point of enc(S) emulating a source derivation from the
  // point of S, built point by point and replayed.
  std::optional<Derivation<Ppi>> complete(const Derivation<Pccs>& src);
  // Derivation of one source point step, searched from the point of enc(s).
  const std::optional<Derivation<Ppi>>& emulate(const Pccs& s, const Distribution<Pccs>& next);

  struct Source {
    Reach<Pccs> reach;
    std::map<Distribution<Ppi>, std::size_t> by_image;  // encoded image -> state
  };
  const Source& source(const Pccs& s);

  struct Catchup {
    Derivation<Ppi> target;     // theta ==> theta'
    std::size_t source_state;   // in source(s).reach
  };
  // theta ==> theta' with theta' the image of a reachable source distribution: the
  // identity first, then B-steps only, then a bounded search when `escape` is set.
  // `complete` tells whether the searches were exhaustive when nothing was found.
  std::optional<Catchup> sound(const Pccs& s, const Distribution<Ppi>& theta, bool escape, bool& complete);

  std::string trace(const Derivation<Ppi>& der);

 private:
  EncodingSystem& sys_;
  std::map<std::pair<Pccs, Distribution<Pccs>>, std::optional<Derivation<Ppi>>> emu_;
  std::map<Pccs, Source> src_;
};

PocReport check_weak_poc(EncodingSystem& sys, const Pccs& s);
PocReport check_mid_poc(EncodingSystem& sys, const Pccs& s);
PocReport check_strong_poc(EncodingSystem& sys, const Pccs& s);
PocReport check_poc(EncodingSystem& sys, const Pccs& s, PocFlavor f);

enum class OcVariant { strong, plain, weak };
const char* oc_variant_str(OcVariant v);
PocReport check_nonprob_oc(EncodingSystem& sys, const Pccs& s, OcVariant v);

Verdict check_success_sensitiveness(EncodingSystem& sys, const Pccs& s);
Verdict check_barb_sensitiveness(EncodingSystem& sys, const Pccs& s);

struct DivergenceSearch {
  bool cycle = false;     // a state repeats along a path
  bool complete = false;  // no cycle and the whole graph was explored
  std::size_t states = 0;
  std::vector<std::string> loop;  // the repeating path, when found
};

DivergenceSearch source_divergence(EncodingSystem& sys, const Pccs& s, unsigned depth);
DivergenceSearch target_divergence(EncodingSystem& sys, const Ppi& t, unsigned depth);
Verdict check_divergence_reflection(EncodingSystem& sys, const Pccs& s);

// Sample substitutions on the free names of s (plus fresh names) and compare
// enc(s sigma) with enc(s) sigma' up to alpha-equivalence.
Verdict check_name_invariance(EncodingSystem& sys, const Pccs& s, unsigned samples = 10, std::uint64_t seed = 1);
// The inner encoding of every operator is its fixed context around the encodings of
// the operands, and the outer encoding is the fixed outer context.
Verdict check_weak_compositionality(EncodingSystem& sys, const Pccs& s);
// Every reachable target reduction is an A-, B-, tau- or rep-step; each B-step is the
// only reduction of its reserved channel and commutes with the other reductions.
Verdict check_step_taxonomy(EncodingSystem& sys, const Pccs& s);

struct TheoremEntry {
  std::string name;
  Pccs term;
  DefEnv env;
};

struct TheoremReport {
  Verdict verdict;
  std::size_t relation_size = 0;
  std::size_t universe_size = 0;
};

// Constructive forward direction of the theorems, per entry: the flavor's
// correspondence, then the induced relation and its four properties.
TheoremReport theorem_instance_check(const std::vector<TheoremEntry>& corpus, const PocConfig& cfg, PocFlavor f);

struct TraceLine {
  std::string source;            // source distribution after the step
  std::vector<std::string> target;  // target distributions of the emulation
  std::vector<std::string> classes;
};

// Follows the maximal-move source run for up to depth steps and shows the emulation.
std::vector<TraceLine> emulation_trace(EncodingSystem& sys, const Pccs& s, unsigned depth);

}  // namespace pcw
