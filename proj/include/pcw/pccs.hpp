// SPDX-License-Identifier: MIT
// Probabilistic CCS: terms, labelled and reduction semantics, barbs.
#pragma once

#include "pcw/distribution.hpp"
#include "pcw/names.hpp"

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcw {

struct SemanticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GuardKind { input, output, tau };

struct Guard {
  GuardKind kind = GuardKind::tau;
  std::string name;  // empty for tau
  friend bool operator==(const Guard&, const Guard&) = default;
};

enum class PccsKind { choice, par, restrict, relabel, call, success, inert };

struct PccsNode;

// Immutable term handle. Equality and ordering are alpha-equivalence and a
// total order on alpha-classes, both through the cached key().
class Pccs {
 public:
  Pccs();  // inert
  explicit Pccs(std::shared_ptr<const PccsNode> n) : n_(std::move(n)) {}

  const PccsNode& node() const { return *n_; }
  PccsKind kind() const;
  const std::string& key() const;
  const std::set<std::string>& free_names() const;
  std::string str() const;

  friend bool operator==(const Pccs& a, const Pccs& b) { return a.key() == b.key(); }
  friend bool operator!=(const Pccs& a, const Pccs& b) { return !(a == b); }
  friend bool operator<(const Pccs& a, const Pccs& b) { return a.key() < b.key(); }

 private:
  std::shared_ptr<const PccsNode> n_;
};

struct PccsBranch {
  Prob p;
  Pccs cont;
};

struct PccsNode {
  PccsKind kind = PccsKind::inert;
  Guard guard;                       // choice
  std::vector<PccsBranch> branches;  // choice
  std::vector<Pccs> kids;            // par: 2; restrict, relabel: 1
  std::vector<std::string> names;    // restrict: sorted set; call: arguments
  NameMap rename;                    // relabel, only non-identity entries on free names of the body
  std::string ident;                 // call: constant
  std::set<std::string> fn;
  std::string key;
};

Pccs pccs_choice(Guard g, std::vector<PccsBranch> branches);
Pccs pccs_par(Pccs l, Pccs r);
Pccs pccs_restrict(Pccs body, std::vector<std::string> names);
// Entries outside the free names of body and identity entries are dropped;
// an empty renaming yields body itself.
Pccs pccs_relabel(Pccs body, const NameMap& f);
Pccs pccs_call(std::string constant, std::vector<std::string> args);
Pccs pccs_success();
Pccs pccs_inert();

struct PccsDef {
  std::vector<std::string> params;
  Pccs body;
};

using DefEnv = std::map<std::string, PccsDef>;

// Parameters distinct and free names of every body within its parameters.
void check_def_env(const DefEnv& env);

std::set<std::string> pccs_free_names(const Pccs& p);
// Every name occurring in p, bound or free (relabel domains included).
std::set<std::string> pccs_all_names(const Pccs& p);

// Capture-avoiding simultaneous substitution.
Pccs pccs_subst(const Pccs& p, const NameMap& s);

// Parseable rendering.
std::string pccs_pretty(const Pccs& p);
std::string pccs_pretty(const DefEnv& env);

// Number of operator nodes.
std::size_t pccs_size(const Pccs& p);
// True if any call occurs in p.
bool pccs_has_call(const Pccs& p);

struct PccsLabel {
  GuardKind kind = GuardKind::tau;
  std::string name;
  friend bool operator==(const PccsLabel&, const PccsLabel&) = default;
};

std::string pccs_label_str(const PccsLabel& l);

struct PccsTransition {
  PccsLabel label;
  Distribution<Pccs> dist;
};

// Throws SemanticsError for unknown constants and arity mismatches.
std::vector<PccsTransition> pccs_labelled_steps(const Pccs& p, const DefEnv& env);
// The tau-labelled distributions, without duplicates, in a deterministic order.
std::vector<Distribution<Pccs>> pccs_reduce(const Pccs& p, const DefEnv& env);


bool pccs_has_barb(const Pccs& p, const DefEnv& env, const Observable& o);

struct BarbSearch {
  bool found = false;
  bool complete = false;  // the whole reachable state graph within the limits was visited
  std::size_t states = 0;
};

// Breadth-first search over support points; a point reached in k point steps lies in the
// support of some distribution reached in k distribution steps, and conversely.
BarbSearch pccs_reach_barb_search(const Pccs& p, const DefEnv& env, const Observable& o,
                                  unsigned depth, std::size_t state_cap = 100000);
bool pccs_reach_barb(const Pccs& p, const DefEnv& env, const Observable& o, unsigned depth);

// Observables of p at step zero: free names with their input/output polarity.
std::set<Observable> pccs_free_observables(const Pccs& p);

}  // namespace pcw
