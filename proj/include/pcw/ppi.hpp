// SPDX-License-Identifier: MIT
// Probabilistic pi-calculus: terms, structural congruence, step bundles, reduction.
#pragma once

#include "pcw/distribution.hpp"
#include "pcw/names.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace pcw {

enum class PpiKind {
  branch_in,   // x?{i(y): P, ...}
  select_out,  // x!{p i(y): P, ...}
  input,       // x?(y).P      plain input, receives on any branch
  rep_in,      // !x(y).P
  output,      // x!<y>.P      free objects
  restrict,    // new x. P
  par,
  nil,
  success,
};

struct PpiNode;

// Immutable term handle; == and < are alpha-equivalence (kind-preserving) via key().
class Ppi {
 public:
  Ppi();  // nil
  explicit Ppi(std::shared_ptr<const PpiNode> n) : n_(std::move(n)) {}

  const PpiNode& node() const { return *n_; }
  PpiKind kind() const;
  const std::string& key() const;
  const std::set<std::string>& free_names() const;
  std::string str() const;

  friend bool operator==(const Ppi& a, const Ppi& b) { return a.key() == b.key(); }
  friend bool operator!=(const Ppi& a, const Ppi& b) { return !(a == b); }
  friend bool operator<(const Ppi& a, const Ppi& b) { return a.key() < b.key(); }

 private:
  std::shared_ptr<const PpiNode> n_;
};

struct PpiBranch {
  int index = 1;
  Prob p = 1;                      // select_out only
  std::vector<std::string> names;  // bound: parameters or transmitted names
  Ppi cont;
};

struct PpiNode {
  PpiKind kind = PpiKind::nil;
  std::string chan;                // subject; restrict: the bound name
  std::vector<PpiBranch> branches; // branch_in, select_out: sorted by index
  std::vector<std::string> names;  // input, rep_in: parameters; output: objects
  std::vector<Ppi> kids;           // prefix continuation / body (1), par (2)
  std::set<std::string> fn;
  std::string key;
};

struct PpiError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Ppi ppi_branch_in(std::string x, std::vector<PpiBranch> branches);
Ppi ppi_select_out(std::string x, std::vector<PpiBranch> branches);
Ppi ppi_input(std::string x, std::vector<std::string> params, Ppi cont);
Ppi ppi_rep_in(std::string x, std::vector<std::string> params, Ppi body);
Ppi ppi_output(std::string x, std::vector<std::string> args, Ppi cont);
Ppi ppi_restrict(std::string x, Ppi body);
Ppi ppi_restrict(const std::vector<std::string>& xs, Ppi body);  // first name outermost
Ppi ppi_par(Ppi l, Ppi r);
Ppi ppi_par(const std::vector<Ppi>& parts);  // left-nested; nil when empty
Ppi ppi_nil();
Ppi ppi_success();

std::set<std::string> ppi_free_names(const Ppi& p);
std::set<std::string> ppi_all_names(const Ppi& p);

// Capture-avoiding simultaneous substitution.
Ppi ppi_subst(const Ppi& p, const NameMap& s);

std::string ppi_pretty(const Ppi& p);
std::size_t ppi_size(const Ppi& p);

// Structural congruence. The normal form flattens parallel composition, drops nil and
// dead restrictions, scopes every restriction over the smallest connected group of
// components, names bound names canonically, and sorts components.
Ppi ppi_normal_form(const Ppi& p);
bool ppi_struct_congruent(const Ppi& a, const Ppi& b);
bool ppi_struct_congruent(const Distribution<Ppi>& a, const Distribution<Ppi>& b);
Distribution<Ppi> ppi_normal_form(const Distribution<Ppi>& d);

// Labels of the labelled semantics.
struct PpiLabel {
  enum class Kind { select_in, select_out, plain_in, plain_out, tau };
  Kind kind = Kind::tau;
  std::string subj;
  int branch = 0;                // select_in, select_out
  std::vector<std::string> obj;  // parameters or transmitted names
};

std::string ppi_label_str(const PpiLabel& l);

struct PpiAlt {
  PpiLabel label;
  Prob p;
  Ppi succ;
};

// One instance of a rule: a family of alternatives whose probabilities sum to 1.
struct StepBundle {
  std::vector<PpiAlt> alts;
  std::string origin;                 // position of the prefix that produced the bundle
  std::vector<std::string> extruded;  // plain output objects whose restriction was opened
  std::string channel;                // tau bundles: communication subject
  bool replicated = false;            // consumes a replicated input
};

std::vector<StepBundle> ppi_step_bundles(const Ppi& p);

enum class StepClassKind { A, B, TAU, REP, other };

struct StepClass {
  StepClassKind kind = StepClassKind::other;
  std::string channel;
  friend bool operator==(const StepClass&, const StepClass&) = default;
};

std::string step_class_str(const StepClass& c);

// Replicated input first, then the kind of the communication subject.
StepClass classify_step(const std::string& channel, bool replicated);

struct PpiReduction {
  Distribution<Ppi> dist;
  StepClass cls;
};

std::vector<PpiReduction> ppi_reduce(const Ppi& p);

bool ppi_has_barb(const Ppi& p, const Observable& o);

struct PpiBarbSearch {
  bool found = false;
  bool complete = false;
  std::size_t states = 0;
};

// Point-level search over structural-congruence classes.
PpiBarbSearch ppi_reach_barb_search(const Ppi& p, const Observable& o, unsigned depth,
                                    std::size_t state_cap = 100000);
bool ppi_reach_barb(const Ppi& p, const Observable& o, unsigned depth);

}  // namespace pcw
