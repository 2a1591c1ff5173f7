// SPDX-License-Identifier: MIT
#include "pcw/cli.hpp"

#include <cctype>

namespace pcw {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '#'; }
bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '%'; }

}  // namespace

std::vector<Token> lex(std::string_view text, int first_line) {
  std::vector<Token> out;
  int line = first_line, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::sym, "", line, col};
    std::size_t j = i;
    if (ident_start(c)) {
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::number;
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      j = i + 2;
    } else if (std::string_view("(){}<>[].,:|+'?!=/\\").find(c) != std::string_view::npos) {
      j = i + 1;
    } else {
      throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(text.substr(i, j - i));
    out.push_back(std::move(t));
    advance(j - i);
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

}  // namespace pcw
