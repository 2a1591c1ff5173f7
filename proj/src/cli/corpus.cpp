// SPDX-License-Identifier: MIT
#include "pcw/cli.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace pcw {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

const std::set<std::string> kDefaultKeys{"depth", "state-cap", "combo-cap"};

}  // namespace

Corpus parse_corpus(std::string_view text) {
  Corpus c;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  CorpusEntry* cur = nullptr;
  int body_line = 0;
  std::set<std::string> names;
  auto finish = [&] {
    if (!cur) return;
    if (trim(cur->text).empty()) throw ParseError(cur->line, 1, "entry " + cur->name + " has no term");
    cur->program = parse_pccs(cur->text, body_line);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.rfind("===", 0) == 0) {
      finish();
      std::string name = trim(std::string_view(line).substr(3));
      if (name.empty()) throw ParseError(lineno, 1, "entry without a name");
      if (!names.insert(name).second) throw ParseError(lineno, 1, "duplicate entry " + name);
      c.entries.push_back({name, "", lineno, {}});
      cur = &c.entries.back();
      body_line = lineno + 1;
      continue;
    }
    const bool comment = !line.empty() && line[0] == '#';
    if (comment) line.clear();
    if (!cur) {
      if (line.empty()) continue;
      if (line[0] != '@') throw ParseError(lineno, 1, "text before the first entry");
      auto sp = line.find_first_of(" \t");
      std::string key = line.substr(1, sp == std::string::npos ? std::string::npos : sp - 1);
      if (!kDefaultKeys.count(key)) throw ParseError(lineno, 1, "unknown setting @" + key);
      if (sp == std::string::npos) throw ParseError(lineno, 1, "setting @" + key + " without a value");
      c.defaults[key] = trim(std::string_view(line).substr(sp));
      continue;
    }
    cur->text += (comment ? std::string() : raw) + "\n";  // blank comments keep positions intact
  }
  finish();
  return c;
}

Corpus load_corpus(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_corpus(ss.str());
}

std::vector<TheoremEntry> theorem_entries(const Corpus& c) {
  std::vector<TheoremEntry> out;
  for (const auto& e : c.entries) out.push_back({e.name, e.program.term, e.program.env});
  return out;
}

}  // namespace pcw
