// SPDX-License-Identifier: MIT
#include "report.hpp"

namespace pcw {

Record obligation_record(const std::string& entry, const std::string& check, const Obligation& o) {
  Record r;
  r["entry"] = entry;
  r["check"] = check;
  r["direction"] = o.direction;
  r["source"] = o.source;
  r["witness"] = o.target;
  r["coupling"] = o.coupling;
  r["trace"] = o.trace;
  r["status"] = status_str(o.status);
  if (!o.note.empty()) r["note"] = o.note;
  return r;
}

Record verdict_record(const std::string& entry, const Verdict& v) {
  Record r;
  r["entry"] = entry;
  r["check"] = v.check;
  r["status"] = status_str(v.status);
  r["obligations"] = v.obligations;
  r["counterexample"] = v.counterexample ? Record(*v.counterexample) : Record(nullptr);
  r["notes"] = v.notes;
  return r;
}

void emit(std::ostream& out, const Record& r) { out << r.dump() << "\n"; }

void print_verdict(std::ostream& out, const std::string& entry, const Verdict& v) {
  out << entry << "  " << verdict_str(v) << "\n";
}

}  // namespace pcw
