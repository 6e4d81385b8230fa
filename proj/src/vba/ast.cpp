#include "exact/vba/ast.hpp"

#include <cctype>

namespace exact::vba {

Expr make_number(std::string lexeme, int line) { return {Literal{Literal::Kind::Number, std::move(lexeme)}, line}; }
Expr make_string(std::string text, int line) { return {Literal{Literal::Kind::String, std::move(text)}, line}; }
Expr make_name(std::string name, int line) { return {Name{std::move(name)}, line}; }

Expr make_member(Expr base, std::string name) {
  int line = base.line;
  return {Member{std::move(base), std::move(name)}, line};
}

Expr make_apply(Expr base, std::vector<Expr> args) {
  int line = base.line;
  return {Apply{std::move(base), std::move(args)}, line};
}

Expr make_binary(std::string op, Expr lhs, Expr rhs) {
  int line = lhs.line;
  return {Binary{std::move(op), std::move(lhs), std::move(rhs)}, line};
}

std::optional<long long> int_literal(const Expr& e) {
  const auto* lit = e.as<Literal>();
  if (!lit || lit->kind != Literal::Kind::Number || lit->text.empty()) return std::nullopt;
  std::string digits = lit->text;
  // integer type suffixes
  if (digits.back() == '%' || digits.back() == '&') digits.pop_back();
  if (digits.empty() || digits.size() > 15) return std::nullopt;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  return std::stoll(digits);
}

std::optional<std::string> string_literal(const Expr& e) {
  const auto* lit = e.as<Literal>();
  if (!lit || lit->kind != Literal::Kind::String) return std::nullopt;
  return lit->text;
}

const char* to_string(ProcKind k) { return k == ProcKind::Sub ? "sub" : "function"; }
const char* to_string(Visibility v) { return v == Visibility::Public ? "public" : "private"; }

std::string ProcedureAst::signature() const {
  std::string out = kind == ProcKind::Sub ? "Sub " : "Function ";
  out += name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    const auto& p = params[i];
    if (p.optional) out += "Optional ";
    if (p.by_val) out += "ByVal ";
    out += p.name;
    if (p.type) out += " As " + *p.type;
  }
  out += ")";
  if (return_type) out += " As " + *return_type;
  return out;
}

}  // namespace exact::vba
