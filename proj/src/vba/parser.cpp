#include "exact/vba/parser.hpp"

#include <algorithm>
#include <set>

#include "exact/vba/lexer.hpp"

namespace exact::vba {

namespace {

std::string unexpected(const Token& t) {
  if (t.kind == TokenKind::Newline) return "unexpected end of line";
  if (t.kind == TokenKind::Eof) return "unexpected end of file";
  return "unexpected '" + spell(t) + "'";
}

struct ParseFailure {
  std::string message;
};

enum class BlockKind { Procedure, If, For, Do, While, With };

/// What sits at the start of the current statement, as far as block
/// structure is concerned.
enum class Term { None, ProcEnd, NewProc, Eof, EndIf, ElseArm, Next, Loop, Wend, EndWith };

std::optional<BlockKind> owner_of(Term t) {
  switch (t) {
    case Term::EndIf:
    case Term::ElseArm: return BlockKind::If;
    case Term::Next: return BlockKind::For;
    case Term::Loop: return BlockKind::Do;
    case Term::Wend: return BlockKind::While;
    case Term::EndWith: return BlockKind::With;
    default: return std::nullopt;
  }
}

const char* closer_text(BlockKind k) {
  switch (k) {
    case BlockKind::If: return "End If";
    case BlockKind::For: return "Next";
    case BlockKind::Do: return "Loop";
    case BlockKind::While: return "Wend";
    case BlockKind::With: return "End With";
    case BlockKind::Procedure: return "End Sub";
  }
  return "";
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class Parser {
 public:
  Parser(std::string_view name, ModuleKind kind, std::string_view source) {
    module_.module_name = std::string(name);
    module_.kind = kind;
    LexResult lexed = tokenize(source);
    tokens_ = std::move(lexed.tokens);
    for (auto& d : lexed.diagnostics) {
      d.where = module_.module_name;
      module_.diagnostics.push_back(std::move(d));
    }
    std::size_t start = 0;
    for (std::size_t i = 0; i <= source.size(); ++i) {
      if (i == source.size() || source[i] == '\n') {
        lines_.push_back(trim(source.substr(start, i - start)));
        start = i + 1;
      }
    }
  }

  ModuleAst run() {
    for (;;) {
      skip_separators();
      if (peek().kind == TokenKind::Eof) break;
      module_item();
    }
    check_duplicates();
    std::stable_sort(module_.diagnostics.begin(), module_.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    return std::move(module_);
  }

 private:
  // Token access ------------------------------------------------------------

  const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }

  const Token& advance() {
    const Token& t = peek();
    if (t.kind != TokenKind::Eof) {
      last_line_ = t.line;
      ++pos_;
    }
    return t;
  }

  bool at_line_end() const { return peek().kind == TokenKind::Newline || peek().kind == TokenKind::Eof; }
  bool at_eos() const { return at_line_end() || peek().is_punct(":"); }
  bool at_inline_else() const { return inline_if_depth_ > 0 && peek().is_keyword("Else"); }

  void skip_separators() {
    while (peek().kind == TokenKind::Newline || peek().is_punct(":")) advance();
  }

  void skip_line() {
    while (!at_line_end()) advance();
    if (peek().kind == TokenKind::Newline) advance();
  }

  bool accept_keyword(std::string_view kw) {
    if (!peek().is_keyword(kw)) return false;
    advance();
    return true;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected '" + std::string(kw) + "'");
  }

  void expect_punct(std::string_view p) {
    if (!peek().is_punct(p)) fail("expected '" + std::string(p) + "'");
    advance();
  }

  void expect_eos() {
    if (!at_eos() && !at_inline_else()) fail(unexpected(peek()));
  }

  [[noreturn]] void fail(std::string message) const {
    if (peek().kind == TokenKind::Eof) message += " at end of input";
    throw ParseFailure{std::move(message)};
  }

  void diag(int line, std::string message) {
    module_.diagnostics.push_back({Severity::Warning, module_.module_name, line, std::move(message)});
  }

  bool name_token(const Token& t) const { return t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword; }

  std::string raw_lines(int from, int to) const {
    std::string out;
    for (int l = from; l <= to && l >= 1 && l <= static_cast<int>(lines_.size()); ++l) {
      if (lines_[l - 1].empty()) continue;
      if (!out.empty()) out += ' ';
      out += lines_[l - 1];
    }
    return out;
  }

  // Module level --------------------------------------------------------------

  bool at_procedure_header(bool include_property) const {
    std::size_t k = 0;
    while (peek(k).is_keyword("Public") || peek(k).is_keyword("Private") || peek(k).is_keyword("Friend") ||
           peek(k).is_keyword("Static")) {
      ++k;
    }
    const Token& t = peek(k);
    if (t.is_keyword("Sub") || t.is_keyword("Function")) return true;
    return include_property && t.is_keyword("Property");
  }

  bool at_declaration_start() const {
    const Token& t = peek();
    return t.is_keyword("Dim") || t.is_keyword("Private") || t.is_keyword("Public") || t.is_keyword("Global") ||
           t.is_keyword("Const") || t.is_keyword("Static");
  }

  void module_item() {
    const Token& t = peek();
    int line = t.line;
    if (at_procedure_header(false)) {
      procedure();
      return;
    }
    if (at_procedure_header(true)) {
      diag(line, "Property procedures are not analyzed; block skipped");
      skip_block_until("Property");
      return;
    }
    if (t.is_keyword("Attribute")) {
      attribute_line();
      return;
    }
    if (t.is_keyword("Option")) {
      skip_line();
      return;
    }
    if (t.is(TokenKind::Identifier, "VERSION") || (t.is(TokenKind::Identifier, "Object") && peek(1).is_op("="))) {
      skip_line();  // export-file header
      return;
    }
    if (t.is(TokenKind::Identifier, "Begin")) {
      skip_export_block();
      return;
    }
    if (t.is_keyword("End") && (peek(1).is_keyword("Sub") || peek(1).is_keyword("Function"))) {
      diag(line, "'End " + peek(1).lexeme + "' without matching header");
      skip_line();
      return;
    }
    if (at_declaration_start()) {
      module_declaration();
      return;
    }
    if (t.is_keyword("Declare")) {
      skip_line();
      return;
    }
    if (t.is_keyword("Type") || t.is_keyword("Enum")) {
      skip_block_until(t.lexeme);
      return;
    }
    diag(line, "unexpected text outside a procedure: '" + raw_lines(line, line) + "'");
    skip_line();
  }

  void attribute_line() {
    int line = peek().line;
    advance();
    if (peek().is(TokenKind::Identifier, "VB_Name") && peek(1).is_op("=") && peek(2).kind == TokenKind::String) {
      const std::string& declared = peek(2).lexeme;
      if (!iequals(declared, module_.module_name)) {
        diag(line, "Attribute VB_Name '" + declared + "' does not match module name '" + module_.module_name + "'");
      }
    }
    skip_line();
  }

  // Begin ... End blocks of exported .frm/.cls files, possibly nested.
  void skip_export_block() {
    int depth = 0;
    while (peek().kind != TokenKind::Eof) {
      if (peek().is(TokenKind::Identifier, "Begin") || peek().is(TokenKind::Identifier, "BeginProperty")) {
        ++depth;
      } else if ((peek().is_keyword("End") || peek().is(TokenKind::Identifier, "EndProperty")) &&
                 (peek(1).kind == TokenKind::Newline || peek(1).kind == TokenKind::Eof)) {
        --depth;
      }
      skip_line();
      skip_separators();
      if (depth <= 0 || at_procedure_header(true)) return;
    }
  }

  // Skips `X ... End X`; stops early (without consuming) at the next header.
  void skip_block_until(const std::string& kind) {
    skip_line();
    for (;;) {
      skip_separators();
      if (peek().kind == TokenKind::Eof) {
        diag(last_line_, "missing 'End " + kind + "'");
        return;
      }
      if (at_procedure_header(true)) {
        diag(peek().line, "missing 'End " + kind + "'");
        return;
      }
      bool closes = peek().is_keyword("End") && peek(1).is(peek(1).kind, kind);
      skip_line();
      if (closes) return;
    }
  }

  void module_declaration() {
    int line = peek().line;
    // modifiers may introduce Declare/Type/Enum/Event instead of variables
    std::size_t k = 0;
    while (peek(k).is_keyword("Private") || peek(k).is_keyword("Public") || peek(k).is_keyword("Global") ||
           peek(k).is_keyword("Dim") || peek(k).is_keyword("Static")) {
      ++k;
    }
    const Token& head = peek(k);
    if (head.is_keyword("Declare")) {
      skip_line();
      return;
    }
    if (head.is_keyword("Type") || head.is_keyword("Enum")) {
      skip_block_until(head.lexeme);
      return;
    }
    if (head.is(TokenKind::Identifier, "Event")) {
      skip_line();
      return;
    }
    try {
      for (std::size_t i = 0; i < k; ++i) advance();
      accept_keyword("Const");
      for (auto& v : var_list()) module_.declarations.push_back(std::move(v));
      expect_eos();
    } catch (const ParseFailure& f) {
      diag(line, "malformed declaration: " + f.message);
      skip_line();
    }
  }

  // Procedures ----------------------------------------------------------------

  void procedure() {
    ProcedureAst proc;
    int start = peek().line;
    while (!peek().is_keyword("Sub") && !peek().is_keyword("Function")) {
      if (peek().is_keyword("Private")) proc.visibility = Visibility::Private;
      advance();
    }
    proc.kind = advance().is_keyword("Sub") ? ProcKind::Sub : ProcKind::Function;
    if (!name_token(peek())) {
      diag(start, "malformed procedure header: missing name");
      skip_line();
      return;
    }
    proc.name = advance().lexeme;
    try {
      if (peek().is_punct("(")) proc.params = parameters();
      if (accept_keyword("As")) proc.return_type = type_name();
      if (!at_eos()) fail(unexpected(peek()));
    } catch (const ParseFailure& f) {
      diag(start, "malformed procedure header: " + f.message);
    }
    skip_line();

    open_.push_back(BlockKind::Procedure);
    proc.body = block(BlockKind::Procedure);
    open_.pop_back();

    skip_separators();
    const char* expected = proc.kind == ProcKind::Sub ? "Sub" : "Function";
    if (terminator() == Term::ProcEnd) {
      if (!peek(1).is_keyword(expected)) {
        diag(peek().line, "'End " + peek(1).lexeme + "' closes " + expected + " '" + proc.name + "'");
      }
      advance();
      advance();
      proc.span = {start, last_line_};
      if (!at_eos()) diag(peek().line, "unexpected text after End " + std::string(expected));
      skip_line();
    } else {
      proc.span = {start, std::max(start, last_line_)};
      diag(start, "missing 'End " + std::string(expected) + "' for '" + proc.name + "'");
    }
    module_.procedures.push_back(std::move(proc));
  }

  std::vector<Param> parameters() {
    std::vector<Param> out;
    expect_punct("(");
    if (peek().is_punct(")")) {
      advance();
      return out;
    }
    for (;;) {
      Param p;
      for (;;) {
        if (accept_keyword("Optional")) {
          p.optional = true;
        } else if (accept_keyword("ByVal")) {
          p.by_val = true;
        } else if (accept_keyword("ByRef") || accept_keyword("ParamArray")) {
        } else {
          break;
        }
      }
      if (peek().kind != TokenKind::Identifier) fail("expected parameter name");
      p.name = advance().lexeme;
      if (peek().is_punct("(")) {
        advance();
        expect_punct(")");
      }
      if (accept_keyword("As")) p.type = type_name();
      if (peek().is_op("=")) {
        advance();
        expression();
      }
      out.push_back(std::move(p));
      if (peek().is_punct(",")) {
        advance();
        continue;
      }
      expect_punct(")");
      return out;
    }
  }

  std::string type_name() {
    accept_keyword("New");
    if (!name_token(peek())) fail("expected type name");
    std::string out = advance().lexeme;
    while (peek().is_punct(".") && name_token(peek(1))) {
      advance();
      out += "." + advance().lexeme;
    }
    if (peek().is_op("*")) {  // fixed-length String * n
      advance();
      if (peek().kind != TokenKind::Number && peek().kind != TokenKind::Identifier) fail("expected string length");
      out += " * " + advance().lexeme;
    }
    return out;
  }

  std::vector<VarDecl> var_list() {
    std::vector<VarDecl> out;
    for (;;) {
      accept_keyword("WithEvents");
      if (peek().kind != TokenKind::Identifier) fail("expected variable name");
      VarDecl v{advance().lexeme, std::nullopt};
      if (peek().is_punct("(")) skip_parens();
      if (accept_keyword("As")) v.type = type_name();
      if (peek().is_op("=")) {
        advance();
        expression();
      }
      out.push_back(std::move(v));
      if (!peek().is_punct(",")) return out;
      advance();
    }
  }

  void skip_parens() {
    int depth = 0;
    do {
      if (at_line_end()) fail("unbalanced parentheses");
      if (peek().is_punct("(")) ++depth;
      if (peek().is_punct(")")) --depth;
      advance();
    } while (depth > 0);
  }

  // Blocks --------------------------------------------------------------------

  Term terminator() const {
    const Token& t = peek();
    if (t.kind == TokenKind::Eof) return Term::Eof;
    if (t.is_keyword("End")) {
      const Token& n = peek(1);
      if (n.is_keyword("Sub") || n.is_keyword("Function") || n.is_keyword("Property")) return Term::ProcEnd;
      if (n.is_keyword("If")) return Term::EndIf;
      if (n.is_keyword("With")) return Term::EndWith;
      return Term::None;
    }
    if (t.is_keyword("Else") || t.is_keyword("ElseIf")) return Term::ElseArm;
    if (t.is_keyword("Next")) return Term::Next;
    if (t.is_keyword("Loop")) return Term::Loop;
    if (t.is_keyword("Wend")) return Term::Wend;
    if (at_procedure_header(true)) return Term::NewProc;
    return Term::None;
  }

  bool enclosing(BlockKind k) const { return std::find(open_.begin(), open_.end(), k) != open_.end(); }

  Block block(BlockKind kind) {
    Block body;
    for (;;) {
      skip_separators();
      Term t = terminator();
      if (t == Term::None) {
        body.push_back(statement());
        continue;
      }
      if (t == Term::ProcEnd || t == Term::NewProc || t == Term::Eof) return body;
      auto owner = owner_of(t);
      if (owner == kind || (owner && enclosing(*owner))) return body;
      int line = peek().line;
      std::string what = spell(peek());
      if (t == Term::EndIf || t == Term::EndWith) what += " " + spell(peek(1));
      skip_line();
      body.push_back(unknown(line, "'" + what + "' without an open block"));
    }
  }

  // Consumes the closer of `kind` if present, else records a diagnostic.
  bool close_block(BlockKind kind, Term closer, int open_line) {
    skip_separators();
    if (terminator() == closer) {
      advance();
      if (closer == Term::EndIf || closer == Term::EndWith) advance();
      // `Next i` / `Loop While x` tails are handled by callers before this point
      return true;
    }
    diag(open_line, std::string("missing '") + closer_text(kind) + "'");
    return false;
  }

  Stmt unknown(int line, std::string message) {
    int end = std::max(line, last_line_);
    diag(line, std::move(message));
    return {Unknown{raw_lines(line, end)}, {line, end}};
  }

  // Statements ----------------------------------------------------------------

  Stmt statement() {
    std::size_t start_pos = pos_;
    int line = peek().line;
    try {
      const Token& t = peek();
      bool line_start = start_pos == 0 || tokens_[start_pos - 1].kind == TokenKind::Newline;
      if (line_start && t.kind == TokenKind::Identifier && peek(1).is_punct(":")) {
        advance();
        advance();
        return unknown(line, "labels are not supported");
      }
      if (line_start && t.kind == TokenKind::Number) {
        skip_line();
        return unknown(line, "line numbers are not supported");
      }
      if (t.is_keyword("If")) return if_statement();
      if (t.is_keyword("For")) return for_statement();
      if (t.is_keyword("Do")) return do_statement();
      if (t.is_keyword("While")) return while_statement();
      if (t.is_keyword("With")) return with_statement();
      if (unsupported_start(t)) {
        std::string what = unsupported_name();
        skip_line();
        return unknown(line, "unsupported statement '" + what + "'");
      }
      Stmt s = simple_statement();
      expect_eos();
      return s;
    } catch (const ParseFailure& f) {
      inline_if_depth_ = 0;
      skip_line();
      return unknown(line, "cannot parse statement: " + f.message);
    }
  }

  static bool unsupported_start(const Token& t) {
    for (const char* kw : {"Select", "Case", "GoTo", "GoSub", "On", "Resume", "End", "Type", "Enum", "Declare",
                           "Option", "Attribute", "Property"}) {
      if (t.is_keyword(kw)) return true;
    }
    return false;
  }

  std::string unsupported_name() const {
    std::string what = peek().lexeme;
    if (peek().is_keyword("End") && name_token(peek(1))) what += " " + peek(1).lexeme;
    return what;
  }

  Stmt simple_statement() {
    int line = peek().line;
    auto done = [&](auto node) { return Stmt{std::move(node), {line, last_line_}}; };
    const Token& t = peek();

    if (t.is_keyword("Dim") || t.is_keyword("Static") || t.is_keyword("Const") || t.is_keyword("ReDim")) {
      advance();
      accept_keyword("Preserve");
      accept_keyword("Const");
      return done(Dim{var_list()});
    }
    if (t.is_keyword("Exit")) {
      advance();
      if (!name_token(peek())) fail("expected Sub, Function, For, Do or Property after Exit");
      return done(ExitStmt{advance().lexeme});
    }
    if (t.is_keyword("Set") || t.is_keyword("Let")) {
      bool is_set = t.is_keyword("Set");
      advance();
      Expr target = postfix();
      if (!peek().is_op("=")) fail("expected '='");
      advance();
      Expr value = expression();
      return done(Assign{std::move(target), std::move(value), is_set});
    }
    if (t.is_keyword("Call")) {
      advance();
      Expr callee = postfix();
      return done(as_call(std::move(callee), {}));
    }
    if (t.kind == TokenKind::Identifier || t.is_punct(".") || t.is_op("!")) {
      Expr lhs = postfix();
      if (peek().is_op("=")) {
        advance();
        Expr value = expression();
        return done(Assign{std::move(lhs), std::move(value), false});
      }
      if (at_eos() || at_inline_else()) return done(as_call(std::move(lhs), {}));
      return no_paren_call(std::move(lhs));
    }
    fail(unexpected(t));
  }

  static CallStmt as_call(Expr callee, std::vector<Expr> extra) {
    if (const auto* apply = callee.as<Apply>(); apply && extra.empty()) {
      return CallStmt{*apply->base, apply->args};
    }
    return CallStmt{std::move(callee), std::move(extra)};
  }

  // `Foo a, b` and `obj.Method x:=1`
  Stmt no_paren_call(Expr callee) {
    int line = callee.line;
    std::vector<Expr> args;
    if (const auto* apply = callee.as<Apply>(); apply && apply->args.size() == 1 && peek().is_punct(",")) {
      // `Foo (a), b`: the parenthesised first argument was taken as an index
      args.push_back(apply->args.front());
      Expr base = *apply->base;
      callee = std::move(base);
      advance();
    }
    for (;;) {
      if (peek().is_punct(",")) {
        args.push_back({Literal{Literal::Kind::Missing, {}}, peek().line});
        advance();
        continue;
      }
      if (at_eos() || at_inline_else()) break;
      args.push_back(argument());
      if (peek().is_punct(",") || peek().is_punct(";")) {
        advance();
        continue;
      }
      break;
    }
    return Stmt{CallStmt{std::move(callee), std::move(args)}, {line, last_line_}};
  }

  Stmt if_statement() {
    int line = peek().line;
    advance();
    Expr cond = expression();
    expect_keyword("Then");

    if (!at_line_end()) {
      If node;
      ++inline_if_depth_;
      Block then_body = inline_statements();
      Block else_body;
      if (accept_keyword("Else")) else_body = inline_statements();
      --inline_if_depth_;
      node.branches.push_back({std::move(cond), std::move(then_body)});
      node.else_body = std::move(else_body);
      if (!at_line_end() && !at_inline_else()) fail(unexpected(peek()));
      return {std::move(node), {line, last_line_}};
    }

    If node;
    open_.push_back(BlockKind::If);
    node.branches.push_back({std::move(cond), block(BlockKind::If)});
    bool in_else = false;
    for (;;) {
      skip_separators();
      Term t = terminator();
      if (t == Term::ElseArm && peek().is_keyword("ElseIf") && !in_else) {
        int arm_line = peek().line;
        advance();
        try {
          Expr c = expression();
          expect_keyword("Then");
          expect_eos();
          node.branches.push_back({std::move(c), block(BlockKind::If)});
        } catch (const ParseFailure& f) {
          skip_line();
          node.branches.back().body.push_back(unknown(arm_line, "cannot parse ElseIf: " + f.message));
        }
        continue;
      }
      if (t == Term::ElseArm && peek().is_keyword("Else") && !in_else) {
        advance();
        in_else = true;
        node.else_body = block(BlockKind::If);
        continue;
      }
      if (t == Term::ElseArm) {
        int arm_line = peek().line;
        std::string what = peek().lexeme;
        skip_line();
        Block& target = in_else ? node.else_body : node.branches.back().body;
        target.push_back(unknown(arm_line, "'" + what + "' after Else"));
        Block more = block(BlockKind::If);
        target.insert(target.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
        continue;
      }
      break;
    }
    open_.pop_back();
    close_block(BlockKind::If, Term::EndIf, line);
    return {std::move(node), {line, std::max(line, last_line_)}};
  }

  Block inline_statements() {
    Block out;
    for (;;) {
      while (peek().is_punct(":")) advance();
      if (at_line_end() || peek().is_keyword("Else")) return out;
      if (peek().is_keyword("If")) {
        out.push_back(if_statement());
        continue;
      }
      if (unsupported_start(peek())) {
        int line = peek().line;
        std::string what = unsupported_name();
        while (!at_line_end() && !peek().is_punct(":") && !peek().is_keyword("Else")) advance();
        out.push_back(unknown(line, "unsupported statement '" + what + "'"));
        continue;
      }
      out.push_back(simple_statement());
      if (!at_eos() && !peek().is_keyword("Else")) fail(unexpected(peek()));
    }
  }

  Stmt for_statement() {
    int line = peek().line;
    advance();
    if (accept_keyword("Each")) {
      Expr var = postfix();
      expect_keyword("In");
      Expr coll = expression();
      expect_eos();
      open_.push_back(BlockKind::For);
      ForEach node{std::move(var), std::move(coll), block(BlockKind::For)};
      open_.pop_back();
      finish_next(line);
      return {std::move(node), {line, std::max(line, last_line_)}};
    }
    Expr var = postfix();
    if (!peek().is_op("=")) fail("expected '='");
    advance();
    Expr from = expression();
    expect_keyword("To");
    Expr to = expression();
    std::optional<Expr> step;
    if (accept_keyword("Step")) step = expression();
    expect_eos();
    open_.push_back(BlockKind::For);
    ForNext node{std::move(var), std::move(from), std::move(to), std::move(step), block(BlockKind::For)};
    open_.pop_back();
    finish_next(line);
    return {std::move(node), {line, std::max(line, last_line_)}};
  }

  void finish_next(int open_line) {
    if (close_block(BlockKind::For, Term::Next, open_line)) {
      while (!at_eos()) advance();  // loop variable(s)
    }
  }

  Stmt do_statement() {
    int line = peek().line;
    advance();
    DoLoop node;
    if (peek().is_keyword("While") || peek().is_keyword("Until")) {
      node.until = advance().is_keyword("Until");
      node.cond = expression();
    }
    expect_eos();
    open_.push_back(BlockKind::Do);
    node.body = block(BlockKind::Do);
    open_.pop_back();
    if (close_block(BlockKind::Do, Term::Loop, line)) {
      if (peek().is_keyword("While") || peek().is_keyword("Until")) {
        int tail_line = peek().line;
        bool until = advance().is_keyword("Until");
        try {
          Expr cond = expression();
          if (node.cond) {
            diag(tail_line, "Do loop has conditions on both Do and Loop");
          } else {
            node.cond = std::move(cond);
            node.until = until;
            node.pretest = false;
          }
        } catch (const ParseFailure& f) {
          diag(tail_line, "cannot parse Loop condition: " + f.message);
        }
      }
      if (!at_eos()) diag(peek().line, "unexpected text after Loop");
      while (!at_eos()) advance();
    }
    return {std::move(node), {line, std::max(line, last_line_)}};
  }

  Stmt while_statement() {
    int line = peek().line;
    advance();
    Expr cond = expression();
    expect_eos();
    open_.push_back(BlockKind::While);
    WhileWend node{std::move(cond), block(BlockKind::While)};
    open_.pop_back();
    close_block(BlockKind::While, Term::Wend, line);
    return {std::move(node), {line, std::max(line, last_line_)}};
  }

  Stmt with_statement() {
    int line = peek().line;
    advance();
    Expr object = expression();
    expect_eos();
    open_.push_back(BlockKind::With);
    With node{std::move(object), block(BlockKind::With)};
    open_.pop_back();
    close_block(BlockKind::With, Term::EndWith, line);
    return {std::move(node), {line, std::max(line, last_line_)}};
  }

  // Expressions ---------------------------------------------------------------

  Expr expression() { return binary_level(0); }

  // Lowest to highest precedence; `Not` and unary minus are handled between
  // their neighbouring levels.
  static constexpr int kNotLevel = 5;
  static constexpr int kLevels = 12;

  bool level_op(int level, const Token& t) const {
    switch (level) {
      case 0: return t.is_keyword("Imp");
      case 1: return t.is_keyword("Eqv");
      case 2: return t.is_keyword("Xor");
      case 3: return t.is_keyword("Or");
      case 4: return t.is_keyword("And");
      case 6:
        return t.is_op("=") || t.is_op("<>") || t.is_op("<") || t.is_op(">") || t.is_op("<=") || t.is_op(">=") ||
               t.is_keyword("Like") || t.is_keyword("Is");
      case 7: return t.is_op("&");
      case 8: return t.is_op("+") || t.is_op("-");
      case 9: return t.is_keyword("Mod");
      case 10: return t.is_op("\\");
      case 11: return t.is_op("*") || t.is_op("/");
      default: return false;
    }
  }

  Expr binary_level(int level) {
    if (level == kNotLevel) {
      if (peek().is_keyword("Not")) {
        int line = advance().line;
        return {Unary{"Not", binary_level(kNotLevel)}, line};
      }
      return binary_level(level + 1);
    }
    if (level == kLevels) return negation();
    Expr lhs = binary_level(level + 1);
    while (level_op(level, peek())) {
      std::string op = advance().lexeme;
      Expr rhs = binary_level(level + 1);
      lhs = make_binary(std::move(op), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr negation() {
    if (peek().is_op("-") || peek().is_op("+")) {
      const Token& t = advance();
      int line = t.line;
      std::string op = t.lexeme;
      return {Unary{std::move(op), negation()}, line};
    }
    Expr lhs = postfix();
    while (peek().is_op("^")) {
      advance();
      Expr rhs = peek().is_op("-") || peek().is_op("+") ? negation() : postfix();
      lhs = make_binary("^", std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr primary() {
    const Token& t = peek();
    int line = t.line;
    switch (t.kind) {
      case TokenKind::Number: return {Literal{Literal::Kind::Number, advance().lexeme}, line};
      case TokenKind::String: return {Literal{Literal::Kind::String, advance().lexeme}, line};
      case TokenKind::Identifier: return {Name{advance().lexeme}, line};
      default: break;
    }
    if (t.is_keyword("True") || t.is_keyword("False")) {
      std::string text = t.is_keyword("True") ? "True" : "False";
      advance();
      return {Literal{Literal::Kind::Boolean, std::move(text)}, line};
    }
    if (t.is_keyword("Nothing")) {
      advance();
      return {Literal{Literal::Kind::Nothing, "Nothing"}, line};
    }
    if (t.is_keyword("Empty") || t.is_keyword("Null")) return {Literal{Literal::Kind::Empty, advance().lexeme}, line};
    if (t.is_keyword("New")) {
      advance();
      return {Unary{"New", postfix()}, line};
    }
    if (t.is_punct("(")) {
      advance();
      Expr inner = expression();
      expect_punct(")");
      return inner;
    }
    if ((t.is_punct(".") || t.is_op("!")) && name_token(peek(1))) {
      advance();
      return {WithRef{advance().lexeme}, line};
    }
    fail(unexpected(t));
  }

  Expr postfix() {
    Expr e = primary();
    for (;;) {
      if ((peek().is_punct(".") || peek().is_op("!")) && name_token(peek(1))) {
        advance();
        e = make_member(std::move(e), advance().lexeme);
      } else if (peek().is_punct("(")) {
        e = make_apply(std::move(e), arguments());
      } else {
        return e;
      }
    }
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    expect_punct("(");
    if (peek().is_punct(")")) {
      advance();
      return args;
    }
    for (;;) {
      if (peek().is_punct(",") || peek().is_punct(")")) {
        args.push_back({Literal{Literal::Kind::Missing, {}}, peek().line});
      } else {
        args.push_back(argument());
      }
      if (peek().is_punct(",")) {
        advance();
        continue;
      }
      expect_punct(")");
      return args;
    }
  }

  // Named arguments keep only their value.
  Expr argument() {
    if (peek().kind == TokenKind::Identifier && peek(1).is_op(":=")) {
      advance();
      advance();
    }
    accept_keyword("ByVal");
    accept_keyword("ByRef");
    return expression();
  }

  void check_duplicates() {
    std::set<std::string> seen;
    for (const auto& p : module_.procedures) {
      if (!seen.insert(to_lower(p.name)).second) {
        diag(p.span.start_line, "duplicate procedure '" + p.name + "'");
      }
    }
  }

  ModuleAst module_;
  std::vector<Token> tokens_;
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
  int last_line_ = 1;
  int inline_if_depth_ = 0;
  std::vector<BlockKind> open_;
};

}  // namespace

ModuleAst parse_module(std::string_view name, ModuleKind kind, std::string_view source) {
  return Parser(name, kind, source).run();
}

}  // namespace exact::vba
