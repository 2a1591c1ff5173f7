// SPDX-License-Identifier: MIT
#include "token_stream.hpp"

namespace pcw {

namespace {

class PpiParser {
 public:
  explicit PpiParser(TokenStream& ts) : ts_(ts) {}

  Ppi term() {
    Ppi p = unary();
    while (ts_.accept("|")) p = ppi_par(p, unary());
    return p;
  }

 private:
  template <class F>
  Ppi guarded(const Token& at, F&& build) {
    try {
      return build();
    } catch (const PpiError& e) {
      throw ParseError(at.line, at.col, e.what());
    }
  }

  Ppi unary() {
    const Token t = ts_.peek();
    if (ts_.accept("(")) {
      Ppi p = term();
      ts_.expect(")");
      return p;
    }
    if (t.kind == Tok::number) {
      if (t.text != "0") ts_.fail("expected a process");
      ts_.next();
      return ppi_nil();
    }
    if (ts_.accept("ok")) return ppi_success();
    if (ts_.at("new") && ts_.peek(1).kind == Tok::ident) {
      ts_.next();
      std::string x = ts_.ident();
      ts_.expect(".");
      return ppi_restrict(x, unary());
    }
    if (ts_.accept("!")) {
      std::string x = ts_.ident();
      ts_.expect("(");
      auto ps = ts_.names(")");
      ts_.expect(".");
      Ppi body = unary();
      return guarded(t, [&] { return ppi_rep_in(x, ps, body); });
    }
    if (t.kind != Tok::ident) ts_.fail("expected a process");
    std::string x = ts_.next().text;
    if (ts_.accept("?")) {
      if (ts_.accept("(")) {
        auto ps = ts_.names(")");
        ts_.expect(".");
        Ppi cont = unary();
        return guarded(t, [&] { return ppi_input(x, ps, cont); });
      }
      ts_.expect("{");
      auto bs = branches(false);
      return guarded(t, [&] { return ppi_branch_in(x, bs); });
    }
    if (ts_.accept("!")) {
      if (ts_.accept("<")) {
        auto ys = ts_.names(">");
        ts_.expect(".");
        Ppi cont = unary();
        return guarded(t, [&] { return ppi_output(x, ys, cont); });
      }
      ts_.expect("{");
      auto bs = branches(true);
      return guarded(t, [&] { return ppi_select_out(x, bs); });
    }
    ts_.fail("expected '?' or '!' after " + x);
  }

  std::vector<PpiBranch> branches(bool weighted) {
    std::vector<PpiBranch> out;
    do {
      PpiBranch b;
      if (weighted) b.p = ts_.prob();
      b.index = ts_.integer();
      ts_.expect("(");
      b.names = ts_.names(")");
      ts_.expect(":");
      b.cont = term();
      out.push_back(std::move(b));
    } while (ts_.accept(","));
    ts_.expect("}");
    return out;
  }

  TokenStream& ts_;
};

}  // namespace

Ppi parse_ppi(std::string_view text) {
  TokenStream ts(lex(text));
  Ppi p = PpiParser(ts).term();
  if (!ts.at_end()) ts.fail("unexpected input after the term");
  return p;
}

}  // namespace pcw
