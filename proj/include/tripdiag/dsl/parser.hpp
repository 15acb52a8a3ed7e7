// SPDX-License-Identifier: Apache-2.0
#pragma once

// Recursive-descent parser for the constraint language, followed by a
// type-checking pass. Grammar (loosest binding first):
//
//   top        := ['result' '='] expr
//   expr       := conj (('or' | '||') conj)*
//   conj       := unary (('and' | '&&') unary)*
//   unary      := ('not' | '!') unary | relation
//   relation   := sum [('not')? 'in' sum | cmp sum (cmp sum)*]
//   sum        := product (('+' | '-') product)*
//   product    := sign ('*' sign)*
//   sign       := '-' sign | primary
//   primary    := number | string | 'true' | 'false' | '{' strings '}'
//               | '(' expr ')' | call | 'item' '.' field | variable

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tripdiag/core/error.hpp"
#include "tripdiag/dsl/render.hpp"

namespace tripdiag::dsl {

inline constexpr int kAliasTableVersion = 1;

/// Maps surface spellings (including other benchmarks' names) to heads.
inline std::optional<Head> resolve_head(std::string_view name) {
  if (auto h = kHeadNames.find(name)) return h;
  struct Alias {
    std::string_view spelling;
    Head head;
  };
  static constexpr Alias kAliases[] = {
      {"day_count", Head::days},
      {"num_days", Head::days},
      {"duration", Head::days},
      {"people_count", Head::people_number},
      {"people", Head::people_number},
      {"num_people", Head::people_number},
      {"total_cost", Head::total_budget},
      {"budget", Head::total_budget},
      {"total_price", Head::total_budget},
      {"cost", Head::cost_of},
      {"cost_by_kind", Head::cost_of},
      {"room_type", Head::room_types},
      {"room_type_set", Head::room_types},
      {"house_rule", Head::house_rules},
      {"house_rule_set", Head::house_rules},
      {"transport_mode", Head::transport_modes},
      {"transportation", Head::transport_modes},
      {"transport_mode_set", Head::transport_modes},
      {"cuisine", Head::cuisines},
      {"cuisine_set", Head::cuisines},
      {"visited_city", Head::visited_cities},
      {"visited_city_set", Head::visited_cities},
      {"cities", Head::visited_cities},
      {"rating", Head::rating_of},
      {"visited", Head::poi_visited},
      {"visit_poi", Head::poi_visited},
  };
  for (const auto& a : kAliases)
    if (a.spelling == name) return a.head;
  return std::nullopt;
}

struct ParseOptions {
  /// Bare identifier bound to an item field, e.g. the `x` of `lambda x: x <= 400`.
  std::optional<std::pair<std::string, ItemField>> variable;
  /// When false, `item.field` is rejected, so the variable is the only field reference.
  bool item_syntax = true;
};

namespace detail {

enum class Tok : std::uint8_t { ident, integer, decimal, string, op, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t offset = 0;
  std::int64_t int_value = 0;  // integer value, or tenths for decimals
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.offset = pos_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::end;
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        t.kind = Tok::ident;
        t.text = std::string(src_.substr(t.offset, pos_ - t.offset));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (c == '\'' || c == '"') {
        lex_string(t, c);
      } else {
        lex_op(t);
      }
      out.push_back(std::move(t));
    }
  }

private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  void lex_number(Token& t) {
    std::int64_t whole = 0;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      if (whole > (INT64_MAX - 9) / 10) throw ParseError("integer literal too large", t.offset, {});
      whole = whole * 10 + (src_[pos_++] - '0');
    }
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      ++pos_;
      const std::size_t frac_start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const auto frac = src_.substr(frac_start, pos_ - frac_start);
      for (std::size_t i = 1; i < frac.size(); ++i)
        if (frac[i] != '0') throw ParseError("fixed-point literals carry one decimal place", t.offset, {});
      t.kind = Tok::decimal;
      t.int_value = whole * 10 + (frac[0] - '0');
    } else {
      t.kind = Tok::integer;
      t.int_value = whole;
    }
    t.text = std::string(src_.substr(t.offset, pos_ - t.offset));
  }

  void lex_string(Token& t, char quote) {
    ++pos_;
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != quote) {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
      value += src_[pos_++];
    }
    if (pos_ >= src_.size()) throw ParseError("unterminated string literal", t.offset, {std::string(1, quote)});
    ++pos_;
    t.kind = Tok::string;
    t.text = std::move(value);
  }

  void lex_op(Token& t) {
    static constexpr std::string_view kTwo[] = {"==", "!=", "<=", ">=", "&&", "||"};
    for (auto op : kTwo)
      if (src_.substr(pos_, 2) == op) {
        t.kind = Tok::op;
        t.text = std::string(op);
        pos_ += 2;
        return;
      }
    static constexpr std::string_view kOne = "<>=+-*(){},.!";
    if (kOne.find(src_[pos_]) == std::string_view::npos)
      throw ParseError(std::string("unexpected character '") + src_[pos_] + "'", pos_, {});
    t.kind = Tok::op;
    t.text = std::string(1, src_[pos_++]);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  Parser(std::string_view src, const ParseOptions& opts) : toks_(Lexer(src).run()), opts_(opts) {}

  Expr top() {
    Expr e;
    if (peek().kind == Tok::ident && peek().text == "result" && peek(1).kind == Tok::op && peek(1).text == "=") {
      pos_ += 2;
      e = result_wrap(expr());
    } else {
      e = expr();
    }
    if (peek().kind != Tok::end) fail("unexpected trailing input", {"and", "or", "end of input"});
    return e;
  }

private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    const auto& t = peek();
    throw ParseError(msg + (t.kind == Tok::end ? " at end of input" : " near '" + t.text + "'"), t.offset, std::move(expected));
  }

  bool accept_op(std::string_view op) {
    if (peek().kind == Tok::op && peek().text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_word(std::string_view w) {
    if (peek().kind == Tok::ident && peek().text == w) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_op(std::string_view op) {
    if (!accept_op(op)) fail("expected '" + std::string(op) + "'", {std::string(op)});
  }

  Expr expr() {
    std::vector<Expr> parts{conj_expr()};
    while (accept_word("or") || accept_op("||")) parts.push_back(conj_expr());
    return parts.size() == 1 ? std::move(parts[0]) : disj(std::move(parts));
  }

  Expr conj_expr() {
    std::vector<Expr> parts{unary()};
    while (accept_word("and") || accept_op("&&")) parts.push_back(unary());
    return parts.size() == 1 ? std::move(parts[0]) : conj(std::move(parts));
  }

  Expr unary() {
    // `not` followed by `in` belongs to a membership test, handled in relation().
    if (peek().kind == Tok::ident && peek().text == "not" && !(peek(1).kind == Tok::ident && peek(1).text == "in")) {
      ++pos_;
      return negation(unary());
    }
    if (accept_op("!")) return negation(unary());
    return relation();
  }

  std::optional<CmpOp> peek_cmp() const {
    if (peek().kind != Tok::op) return std::nullopt;
    const auto& s = peek().text;
    if (s == "==") return CmpOp::eq;
    if (s == "!=") return CmpOp::ne;
    if (s == "<") return CmpOp::lt;
    if (s == "<=") return CmpOp::le;
    if (s == ">") return CmpOp::gt;
    if (s == ">=") return CmpOp::ge;
    return std::nullopt;
  }

  Expr relation() {
    Expr lhs = sum();
    if (peek().kind == Tok::ident && peek().text == "not" && peek(1).kind == Tok::ident && peek(1).text == "in") {
      pos_ += 2;
      return membership(std::move(lhs), sum(), true);
    }
    if (accept_word("in")) return membership(std::move(lhs), sum(), false);
    auto op = peek_cmp();
    if (!op) return lhs;
    ++pos_;
    Expr rhs = sum();
    if (!peek_cmp()) return compare(std::move(lhs), *op, std::move(rhs));
    // chained comparison a < b <= c means (a < b) and (b <= c)
    std::vector<Expr> links;
    links.push_back(compare(std::move(lhs), *op, rhs));
    while (auto next = peek_cmp()) {
      ++pos_;
      Expr following = sum();
      links.push_back(compare(rhs, *next, following));
      rhs = std::move(following);
    }
    return conj(std::move(links));
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept_op("+")) e = arith(std::move(e), ArithOp::add, product());
      else if (accept_op("-")) e = arith(std::move(e), ArithOp::sub, product());
      else return e;
    }
  }

  Expr product() {
    Expr e = sign();
    while (accept_op("*")) e = arith(std::move(e), ArithOp::mul, sign());
    return e;
  }

  Expr sign() {
    if (accept_op("-")) {
      Expr inner = sign();
      if (inner.kind == NodeKind::literal) {
        if (auto* i = std::get_if<std::int64_t>(&inner.value)) return int_lit(-*i);
        if (auto* f = std::get_if<Fixed1>(&inner.value)) return fixed_lit(-f->tenths);
      }
      return arith(int_lit(0), ArithOp::sub, std::move(inner));
    }
    return primary();
  }

  std::string string_arg(const char* what) {
    if (peek().kind != Tok::string) fail(std::string("expected a quoted ") + what, {"string"});
    return toks_[pos_++].text;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer: ++pos_; return int_lit(t.int_value);
      case Tok::decimal: ++pos_; return fixed_lit(t.int_value);
      case Tok::string: ++pos_; return str_lit(t.text);
      case Tok::end: fail("unexpected end of input", {"number", "string", "accessor", "("});
      case Tok::op: break;
      case Tok::ident: return identifier();
    }
    if (accept_op("(")) {
      Expr e = expr();
      expect_op(")");
      return e;
    }
    if (accept_op("{")) {
      std::vector<std::string> items;
      if (!accept_op("}")) {
        do items.push_back(string_arg("set element"));
        while (accept_op(","));
        expect_op("}");
      }
      return set_lit(std::move(items));
    }
    fail("unexpected token", {"number", "string", "accessor", "(", "{"});
  }

  Expr identifier() {
    const Token t = toks_[pos_++];
    if (t.text == "true") return bool_lit(true);
    if (t.text == "false") return bool_lit(false);
    if (t.text == "item" && opts_.item_syntax && accept_op(".")) {
      if (peek().kind != Tok::ident) fail("expected an item field", {"field name"});
      const auto name = toks_[pos_++].text;
      auto f = kItemFieldNames.find(name);
      if (!f) throw ParseError("unknown item field '" + name + "'", toks_[pos_ - 1].offset, {"price", "rating", "name"});
      return item_field(*f);
    }
    if (opts_.variable && t.text == opts_.variable->first) return item_field(opts_.variable->second);
    if (peek().kind != Tok::op || peek().text != "(")
      throw ParseError("unknown identifier '" + t.text + "'", t.offset, {"accessor call"});
    ++pos_;
    if (!accept_word("plan")) fail("accessor's first argument must be 'plan'", {"plan"});
    if (t.text == "all_items" || t.text == "any_item") {
      expect_op(",");
      auto kind = string_arg("record kind");
      expect_op(",");
      Expr body = expr();
      expect_op(")");
      return quantifier(t.text == "all_items" ? NodeKind::forall : NodeKind::exists, std::move(kind), std::move(body));
    }
    auto head = resolve_head(t.text);
    if (!head) throw ParseError("unknown accessor '" + t.text + "'", t.offset, {"days", "total_budget", "..."});
    std::string arg;
    if (head_takes_argument(*head)) {
      expect_op(",");
      arg = string_arg("accessor argument");
    }
    expect_op(")");
    return accessor(*head, std::move(arg));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseOptions& opts_;
};

// ---- type checking -----------------------------------------------------------------

[[noreturn]] inline void type_fail(const std::string& msg) { throw TypeError("type error: " + msg); }

inline std::int64_t fold_int(const Expr& e) {
  if (e.kind == NodeKind::literal) return std::get<std::int64_t>(e.value);
  const auto a = fold_int(e.lhs());
  const auto b = fold_int(e.rhs());
  switch (e.arith) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
  }
  return 0;
}

inline bool valid_kind_arg(const std::string& s, bool allow_any) {
  return (allow_any && s == "any") || kPoiKindNames.find(s).has_value();
}

/// Infers the type of `e`, promoting integer constants compared with
/// fixed-point operands. `in_body` is true inside a quantifier body.
inline ValueType check(Expr& e, bool in_body) {
  switch (e.kind) {
    case NodeKind::literal: return type_of(e.value);
    case NodeKind::accessor:
      if (in_body) type_fail("plan accessor " + std::string(to_string(e.head)) + " inside an item predicate");
      if (e.head == Head::cost_of && !valid_kind_arg(e.arg, false)) type_fail("cost_of needs a record kind, got '" + e.arg + "'");
      return head_type(e.head);
    case NodeKind::item_field:
      if (!in_body) type_fail("item." + std::string(to_string(e.field)) + " outside all_items/any_item");
      return field_type(e.field);
    case NodeKind::arith: {
      const auto a = check(e.children[0], in_body);
      const auto b = check(e.children[1], in_body);
      if (a != ValueType::integer || b != ValueType::integer)
        type_fail("arithmetic needs integers, got " + std::string(to_string(a)) + " and " + std::string(to_string(b)));
      return ValueType::integer;
    }
    case NodeKind::compare: {
      auto a = check(e.children[0], in_body);
      auto b = check(e.children[1], in_body);
      if (a == ValueType::fixed && b == ValueType::integer && is_constant(e.children[1])) {
        e.children[1] = fixed_lit(fold_int(e.children[1]) * 10);
        b = ValueType::fixed;
      } else if (b == ValueType::fixed && a == ValueType::integer && is_constant(e.children[0])) {
        e.children[0] = fixed_lit(fold_int(e.children[0]) * 10);
        a = ValueType::fixed;
      }
      if (a != b)
        type_fail("cannot compare " + std::string(to_string(a)) + " with " + std::string(to_string(b)) + " in '" +
                  render(e) + "'");
      const bool ordered = e.cmp != CmpOp::eq && e.cmp != CmpOp::ne;
      if (ordered && a != ValueType::integer && a != ValueType::fixed)
        type_fail("ordering comparison on " + std::string(to_string(a)));
      return ValueType::boolean;
    }
    case NodeKind::membership: {
      const auto a = check(e.children[0], in_body);
      const auto b = check(e.children[1], in_body);
      if (a != ValueType::string || b != ValueType::string_set)
        type_fail("membership needs a string and a string set, got " + std::string(to_string(a)) + " and " +
                  std::string(to_string(b)));
      return ValueType::boolean;
    }
    case NodeKind::conjunction:
    case NodeKind::disjunction:
    case NodeKind::negation:
    case NodeKind::result_wrap:
      for (auto& c : e.children)
        if (check(c, in_body) != ValueType::boolean) type_fail("logical operand is not boolean: '" + render(c) + "'");
      return ValueType::boolean;
    case NodeKind::forall:
    case NodeKind::exists:
      if (in_body) type_fail("nested quantifiers are not supported");
      if (!valid_kind_arg(e.arg, true)) type_fail("unknown record kind '" + e.arg + "'");
      if (check(e.children[0], true) != ValueType::boolean) type_fail("quantifier body is not boolean");
      return ValueType::boolean;
  }
  return ValueType::boolean;
}

}  // namespace detail

/// Rebuilds every connective bottom-up so operand order is canonical again
/// after a rewrite.
inline Expr renormalize(Expr e) {
  for (auto& c : e.children) c = renormalize(std::move(c));
  if (e.kind == NodeKind::conjunction || e.kind == NodeKind::disjunction)
    return detail::connective(e.kind, std::move(e.children));
  return e;
}

/// Parses and type-checks one constraint. Throws ParseError or TypeError.
inline Expr parse(std::string_view text, const ParseOptions& opts = {}) {
  Expr e = detail::Parser(text, opts).top();
  const bool body_scope = opts.variable.has_value();
  if (detail::check(e, body_scope) != ValueType::boolean) throw TypeError("type error: constraint is not a predicate");
  return renormalize(std::move(e));
}

}  // namespace tripdiag::dsl
