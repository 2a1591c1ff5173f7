// SPDX-License-Identifier: MIT
#include "pcw/equivalence.hpp"

namespace pcw {

const char* status_str(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

Status worst(Status a, Status b) {
  if (a == Status::fails || b == Status::fails) return Status::fails;
  if (a == Status::inconclusive || b == Status::inconclusive) return Status::inconclusive;
  return Status::holds;
}

int status_exit_code(Status s) {
  switch (s) {
    case Status::holds: return 0;
    case Status::fails: return 1;
    case Status::inconclusive: return 2;
  }
  return 2;
}

void Verdict::fail(std::string why) {
  if (!counterexample) counterexample = std::move(why);
  status = Status::fails;
}

void Verdict::inconclusive(std::string why) {
  status = worst(status, Status::inconclusive);
  if (notes.size() < 20) notes.push_back(std::move(why));
}

void Verdict::absorb(const Verdict& o) {
  status = worst(status, o.status);
  obligations += o.obligations;
  if (!counterexample && o.counterexample) counterexample = o.counterexample;
  witnesses.insert(witnesses.end(), o.witnesses.begin(), o.witnesses.end());
  for (const auto& n : o.notes)
    if (notes.size() < 20) notes.push_back(n);
}

std::string verdict_str(const Verdict& v) {
  std::string out = v.check + ": " + status_str(v.status) + " (" + std::to_string(v.obligations) + " obligations)";
  if (v.counterexample) out += "\n  counterexample: " + *v.counterexample;
  for (const auto& n : v.notes) out += "\n  note: " + n;
  return out;
}

}  // namespace pcw
