// SPDX-License-Identifier: MIT
// Concrete syntax, corpus files and the command-line surface.
#pragma once

#include "pcw/poc.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcw {

struct ParseError : std::runtime_error {
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}
  int line;
  int col;
};

enum class Tok { ident, number, sym, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 1;
  int col = 1;
};

// Identifiers are [A-Za-z_#][A-Za-z0-9_#%]*; symbols are single characters except "->".
std::vector<Token> lex(std::string_view text, int first_line = 1);

struct PccsProgram {
  Pccs term;
  DefEnv env;
};

// Definitions followed by one term. A bare identifier X that is not a call stands for
// the stub leaf 'X.(1: 0); G.A abbreviates G.(1: A).
PccsProgram parse_pccs(std::string_view text, int first_line = 1);
Pccs parse_pccs_term(std::string_view text);
Ppi parse_ppi(std::string_view text);

struct CorpusEntry {
  std::string name;
  std::string text;
  int line = 0;  // of the header
  PccsProgram program;
};

struct Corpus {
  std::vector<CorpusEntry> entries;
  // "@key value" lines before the first entry: depth, state-cap, combo-cap.
  std::map<std::string, std::string> defaults;
};

// Entries start at "=== name" lines; lines whose first non-blank character is '#' are comments.
Corpus parse_corpus(std::string_view text);
Corpus load_corpus(const std::string& path);

std::vector<TheoremEntry> theorem_entries(const Corpus& c);

// Check names accepted by `check`.
const std::vector<std::string>& check_names();

// Runs one invocation; args exclude the program name. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcw
