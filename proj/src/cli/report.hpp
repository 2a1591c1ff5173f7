// SPDX-License-Identifier: MIT
#pragma once

#include "pcw/cli.hpp"

#include <json.hpp>

#include <ostream>

namespace pcw {

using Record = nlohmann::ordered_json;

enum class Format { text, records };

Record obligation_record(const std::string& entry, const std::string& check, const Obligation& o);
Record verdict_record(const std::string& entry, const Verdict& v);
template <class T>
Record dist_record(const Distribution<T>& d) {
  Record out = Record::array();
  for (const auto& [t, p] : d) out.push_back(Record{{"p", prob_str(p)}, {"term", t.str()}});
  return out;
}

// One line per record, keys in insertion order.
void emit(std::ostream& out, const Record& r);
void print_verdict(std::ostream& out, const std::string& entry, const Verdict& v);

}  // namespace pcw
