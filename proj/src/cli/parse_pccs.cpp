// SPDX-License-Identifier: MIT
#include "token_stream.hpp"

namespace pcw {

namespace {

class PccsParser {
 public:
  explicit PccsParser(TokenStream& ts) : ts_(ts) {}

  PccsProgram program() {
    PccsProgram out;
    while (ts_.at("def")) {
      const Token at = ts_.next();
      std::string c = name();
      ts_.expect("(");
      auto params = ts_.names(")");
      for (const auto& x : params) check_name(x, at);
      ts_.expect("=");
      Pccs body = term();
      if (out.env.count(c)) throw ParseError(at.line, at.col, "duplicate definition of " + c);
      out.env.emplace(c, PccsDef{std::move(params), std::move(body)});
    }
    try {
      check_def_env(out.env);
    } catch (const SemanticsError& e) {
      throw ParseError(ts_.peek().line, ts_.peek().col, e.what());
    }
    out.term = term();
    if (!ts_.at_end()) ts_.fail("unexpected input after the term");
    return out;
  }

  Pccs term() {
    Pccs p = postfix();
    while (ts_.accept("|")) p = pccs_par(p, postfix());
    return p;
  }

 private:
  void check_name(const std::string& x, const Token& at) const {
    if (x.find('#') != std::string::npos)
      throw ParseError(at.line, at.col, "source names may not contain '#': " + x);
  }

  std::string name() {
    const Token& t = ts_.peek();
    std::string x = ts_.ident();
    check_name(x, t);
    return x;
  }

  Pccs postfix() {
    Pccs p = atom();
    for (;;) {
      if (ts_.at("\\")) {
        const Token at = ts_.next();
        ts_.expect("{");
        auto xs = ts_.names("}");
        for (const auto& x : xs) check_name(x, at);
        if (xs.empty()) throw ParseError(at.line, at.col, "empty restriction");
        p = pccs_restrict(p, xs);
      } else if (ts_.at("[")) {
        ts_.next();
        NameMap m;
        if (!ts_.accept("]")) {
          do {
            const Token at = ts_.peek();
            std::string a = name();
            ts_.expect("->");
            std::string b = name();
            if (m.count(a)) throw ParseError(at.line, at.col, "name " + a + " relabelled twice");
            m[a] = b;
          } while (ts_.accept(","));
          ts_.expect("]");
        }
        p = pccs_relabel(p, m);
      } else {
        return p;
      }
    }
  }

  Pccs atom() {
    const Token t = ts_.peek();
    if (ts_.accept("(")) {
      Pccs p = term();
      ts_.expect(")");
      return p;
    }
    if (t.kind == Tok::number) {
      if (t.text != "0") ts_.fail("expected a process");
      ts_.next();
      return pccs_inert();
    }
    if (ts_.accept("ok")) return pccs_success();
    if (ts_.accept("tau")) return choice({GuardKind::tau, ""}, t);
    if (ts_.accept("'")) {
      std::string x = name();
      return choice({GuardKind::output, x}, t);
    }
    if (t.kind != Tok::ident) ts_.fail("expected a process");
    if (ts_.at(".", 1)) {
      std::string x = name();
      return choice({GuardKind::input, x}, t);
    }
    std::string x = name();
    if (ts_.accept("<")) return pccs_call(x, ts_.names(">"));
    // stub leaf
    return pccs_choice({GuardKind::output, x}, {{Prob(1), pccs_inert()}});
  }

  Pccs choice(Guard g, const Token& at) {
    ts_.expect(".");
    std::vector<PccsBranch> bs;
    bool listed = ts_.at("(") && ts_.peek(1).kind == Tok::number && (ts_.at(":", 2) || ts_.at("/", 2));
    if (listed) {
      ts_.expect("(");
      do {
        Prob p = ts_.prob();
        ts_.expect(":");
        bs.push_back({p, term()});
      } while (ts_.accept("+"));
      ts_.expect(")");
    } else {
      bs.push_back({Prob(1), postfix()});
    }
    try {
      return pccs_choice(std::move(g), std::move(bs));
    } catch (const SemanticsError& e) {
      throw ParseError(at.line, at.col, e.what());
    }
  }

  TokenStream& ts_;
};

}  // namespace

PccsProgram parse_pccs(std::string_view text, int first_line) {
  TokenStream ts(lex(text, first_line));
  return PccsParser(ts).program();
}

Pccs parse_pccs_term(std::string_view text) {
  auto prog = parse_pccs(text);
  if (!prog.env.empty()) throw ParseError(1, 1, "definitions are not allowed here");
  return prog.term;
}

}  // namespace pcw
