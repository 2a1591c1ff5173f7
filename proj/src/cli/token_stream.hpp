// SPDX-License-Identifier: MIT
#pragma once

#include "pcw/cli.hpp"

namespace pcw {

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : t_(std::move(toks)) {}

  const Token& peek(std::size_t k = 0) const { return t_[std::min(i_ + k, t_.size() - 1)]; }
  bool at(std::string_view sym, std::size_t k = 0) const {
    const auto& t = peek(k);
    return t.kind != Tok::end && t.text == sym;
  }
  bool at_end() const { return peek().kind == Tok::end; }
  Token next() {
    Token t = peek();
    if (i_ < t_.size() - 1) ++i_;
    return t;
  }
  bool accept(std::string_view sym) {
    if (!at(sym)) return false;
    next();
    return true;
  }
  Token expect(std::string_view sym) {
    if (!at(sym)) fail("expected '" + std::string(sym) + "'");
    return next();
  }
  std::string ident(const char* what = "a name") {
    if (peek().kind != Tok::ident) fail(std::string("expected ") + what);
    return next().text;
  }
  int integer() {
    if (peek().kind != Tok::number) fail("expected a number");
    const Token t = next();
    try {
      return std::stoi(t.text);
    } catch (const std::exception&) {
      throw ParseError(t.line, t.col, "number out of range");
    }
  }
  Prob prob() {
    const Token& first = peek();
    if (first.kind != Tok::number) fail("expected a probability");
    std::string text = next().text;
    if (accept("/")) {
      if (peek().kind != Tok::number) fail("expected a denominator");
      text += "/" + next().text;
    }
    try {
      return parse_prob(text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(first.line, first.col, e.what());
    }
  }
  // Comma-separated names up to `close`, which is consumed.
  std::vector<std::string> names(std::string_view close) {
    std::vector<std::string> out;
    if (accept(close)) return out;
    do out.push_back(ident()); while (accept(","));
    expect(close);
    return out;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    throw ParseError(t.line, t.col, msg + (t.kind == Tok::end ? " at end of input" : ", found '" + t.text + "'"));
  }

 private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
};

}  // namespace pcw
