// SPDX-License-Identifier: MIT
// Translation of PCCS into the probabilistic pi-calculus.
#pragma once

#include "pcw/pccs.hpp"
#include "pcw/ppi.hpp"

#include <map>
#include <string>

namespace pcw {

// phi(n) = "s_" + n; reserved "#i" and "#t" instances; "#C_" + C for constant C.
// The stems fix the kind of every target name (see names.hpp).
struct RenamingPolicy {
  std::string phi(const std::string& n) const { return "s_" + n; }
  std::string iota() const { return "#i"; }
  std::string tauhat() const { return "#t"; }
  std::string constant(const std::string& c) const { return "#C_" + c; }
};

// Deliberate faults, used to show that the checkers can fail.
enum class Mutation {
  none,
  drop_iota_input,       // input choice loses its local #i partner
  swap_branch_probs,     // the first two probabilities of every selecting output trade places
  omit_replicated_defs,  // the outer encoding keeps its restrictions but not the definitions
};

const char* mutation_str(Mutation m);
Mutation parse_mutation(const std::string& s);  // throws std::invalid_argument

struct EncodedTerm {
  Ppi term;
  // reserved-name instance -> the source construct it came from
  std::map<std::string, std::string> provenance;
};

struct EncodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

EncodedTerm encode_inner_traced(const Pccs& s, const RenamingPolicy& pol = {}, Mutation m = Mutation::none);
Ppi encode_inner(const Pccs& s, const RenamingPolicy& pol = {}, Mutation m = Mutation::none);

// new #C_1 ... new #C_n ( [[S]] | !#C_1(x1).[[S1]] | ... ), constants sorted; with an
// empty environment this is the inner encoding. Throws EncodeError for a constant
// without definition.
EncodedTerm encode_outer_traced(const Pccs& s, const DefEnv& env, const RenamingPolicy& pol = {},
                                Mutation m = Mutation::none);
Ppi encode_outer(const Pccs& s, const DefEnv& env, const RenamingPolicy& pol = {}, Mutation m = Mutation::none);

Distribution<Ppi> encode_dist(const Distribution<Pccs>& d, const DefEnv& env, const RenamingPolicy& pol = {},
                              Mutation m = Mutation::none);

StepClass classify_target_step(const std::string& channel, bool replicated, const RenamingPolicy& pol = {});

// Free names of the encoding are exactly the phi-images of the free source names, and
// no phi-image is a reserved or constant channel. Returns a description of the first
// violation, or an empty string.
std::string check_policy_hygiene(const Pccs& s, const DefEnv& env, const Ppi& encoded,
                                 const RenamingPolicy& pol = {});

}  // namespace pcw
