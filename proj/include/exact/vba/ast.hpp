#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "exact/diagnostics.hpp"
#include "exact/workbook.hpp"

namespace exact::vba {

/// Owning, deep-copying pointer used for recursive AST links.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Expr;

struct Literal {
  enum class Kind { Number, String, Boolean, Nothing, Empty, Missing };
  Kind kind = Kind::Empty;
  std::string text;  // number lexeme, decoded string, "True"/"False"

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Name {
  std::string name;
  friend bool operator==(const Name& a, const Name& b) { return iequals(a.name, b.name); }
};

struct Member {
  Box<Expr> base;
  std::string name;
  friend bool operator==(const Member& a, const Member& b) { return iequals(a.name, b.name) && a.base == b.base; }
};

/// Call or indexed access: `Foo(1)`, `Range("A1")`, `Cells(2, 3)`.
struct Apply {
  Box<Expr> base;
  std::vector<Expr> args;
  friend bool operator==(const Apply&, const Apply&) = default;
};

/// Leading-dot member inside a With block (`.Range("A1")`).
struct WithRef {
  std::string name;
  friend bool operator==(const WithRef& a, const WithRef& b) { return iequals(a.name, b.name); }
};

struct Unary {
  std::string op;  // "-", "+", "Not", "New"
  Box<Expr> operand;
  friend bool operator==(const Unary& a, const Unary& b) { return iequals(a.op, b.op) && a.operand == b.operand; }
};

struct Binary {
  std::string op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  friend bool operator==(const Binary& a, const Binary& b) {
    return iequals(a.op, b.op) && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

struct Expr {
  std::variant<Literal, Name, Member, Apply, WithRef, Unary, Binary> node;
  int line = 0;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  /// Structural equality; source lines are ignored.
  friend bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
};

// Construction helpers, mostly for tests and the parser.
Expr make_number(std::string lexeme, int line = 0);
Expr make_string(std::string text, int line = 0);
Expr make_name(std::string name, int line = 0);
Expr make_member(Expr base, std::string name);
Expr make_apply(Expr base, std::vector<Expr> args);
Expr make_binary(std::string op, Expr lhs, Expr rhs);

/// Integer value of a numeric literal without fraction or exponent.
std::optional<long long> int_literal(const Expr& e);
std::optional<std::string> string_literal(const Expr& e);

struct Span {
  int start_line = 0;
  int end_line = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct Assign {
  Expr target;
  Expr value;
  bool is_set = false;
  friend bool operator==(const Assign&, const Assign&) = default;
};

struct CallStmt {
  Expr callee;
  std::vector<Expr> args;
  friend bool operator==(const CallStmt&, const CallStmt&) = default;
};

struct VarDecl {
  std::string name;
  std::optional<std::string> type;
  friend bool operator==(const VarDecl& a, const VarDecl& b) {
    return iequals(a.name, b.name) && a.type.has_value() == b.type.has_value() &&
           (!a.type || iequals(*a.type, *b.type));
  }
};

struct Dim {
  std::vector<VarDecl> vars;
  friend bool operator==(const Dim&, const Dim&) = default;
};

struct IfBranch {
  Expr cond;
  Block body;
  friend bool operator==(const IfBranch&, const IfBranch&) = default;
};

struct If {
  std::vector<IfBranch> branches;  // If and ElseIf arms in order
  Block else_body;
  friend bool operator==(const If&, const If&) = default;
};

struct ForNext {
  Expr var;
  Expr from;
  Expr to;
  std::optional<Expr> step;
  Block body;
  friend bool operator==(const ForNext&, const ForNext&) = default;
};

struct ForEach {
  Expr var;
  Expr collection;
  Block body;
  friend bool operator==(const ForEach&, const ForEach&) = default;
};

struct DoLoop {
  std::optional<Expr> cond;
  bool until = false;    // `Until` rather than `While`
  bool pretest = true;   // condition on the `Do` line
  Block body;
  friend bool operator==(const DoLoop&, const DoLoop&) = default;
};

struct WhileWend {
  Expr cond;
  Block body;
  friend bool operator==(const WhileWend&, const WhileWend&) = default;
};

struct With {
  Expr object;
  Block body;
  friend bool operator==(const With&, const With&) = default;
};

struct ExitStmt {
  std::string kind;  // Sub, Function, For, Do, Property
  friend bool operator==(const ExitStmt& a, const ExitStmt& b) { return iequals(a.kind, b.kind); }
};

/// A logical line the parser could not (or does not) handle.
struct Unknown {
  std::string raw;
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

struct Stmt {
  std::variant<Assign, CallStmt, Dim, If, ForNext, ForEach, DoLoop, WhileWend, With, ExitStmt, Unknown> node;
  Span span;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  /// Structural equality; spans are ignored.
  friend bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }
};

enum class ProcKind { Sub, Function };
enum class Visibility { Public, Private };

const char* to_string(ProcKind k);
const char* to_string(Visibility v);

struct Param {
  std::string name;
  std::optional<std::string> type;
  bool optional = false;
  bool by_val = false;
  friend bool operator==(const Param&, const Param&) = default;
};

struct ProcedureAst {
  std::string name;
  ProcKind kind = ProcKind::Sub;
  Visibility visibility = Visibility::Public;
  std::vector<Param> params;
  std::optional<std::string> return_type;
  Block body;
  Span span;

  /// `Sub Name(a As Integer, b)` style signature text.
  std::string signature() const;

  friend bool operator==(const ProcedureAst&, const ProcedureAst&) = default;
};

struct ModuleAst {
  std::string module_name;
  ModuleKind kind = ModuleKind::Standard;
  std::vector<ProcedureAst> procedures;
  std::vector<VarDecl> declarations;  // module-level variables and constants
  Diagnostics diagnostics;
};

/// Calls `fn(stmt)` for every statement, nested bodies included, in source order.
template <typename Fn>
void for_each_stmt(const Block& body, Fn&& fn);

template <typename Fn>
void for_each_stmt(const Stmt& s, Fn&& fn) {
  fn(s);
  auto walk = [&](const Block& b) { for_each_stmt(b, fn); };
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, If>) {
          for (const auto& br : n.branches) walk(br.body);
          walk(n.else_body);
        } else if constexpr (std::is_same_v<N, ForNext> || std::is_same_v<N, ForEach> ||
                             std::is_same_v<N, DoLoop> || std::is_same_v<N, WhileWend> ||
                             std::is_same_v<N, With>) {
          walk(n.body);
        }
      },
      s.node);
}

template <typename Fn>
void for_each_stmt(const Block& body, Fn&& fn) {
  for (const auto& s : body) for_each_stmt(s, fn);
}

}  // namespace exact::vba
