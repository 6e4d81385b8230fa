#include "exact/vba/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "exact/workbook.hpp"

namespace exact::vba {

namespace {

constexpr std::array kKeywords = {
    "And",     "As",       "Attribute", "ByRef",  "ByVal",   "Call",      "Case",   "Const",  "Declare",
    "Dim",     "Do",       "Each",      "Else",   "ElseIf",  "Empty",     "End",    "Enum",   "Eqv",
    "Exit",    "False",    "For",       "Friend", "Function", "Global",   "GoSub",  "GoTo",   "If",
    "Imp",     "In",       "Is",        "Let",    "Like",    "Loop",      "Mod",    "New",    "Next",
    "Not",     "Nothing",  "Null",      "On",     "Option",  "Optional",  "Or",     "ParamArray",
    "Preserve", "Private", "Property",  "Public", "ReDim",   "Rem",       "Resume", "Select", "Set",
    "Static",  "Step",     "Sub",       "Then",   "To",      "True",      "Type",   "Until",  "Wend",
    "While",   "With",     "WithEvents", "Xor",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool blank(char c) { return c == ' ' || c == '\t'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  LexResult run() {
    while (pos_ < src_.size()) step();
    out_.tokens.push_back({TokenKind::Eof, "", line_, col_});
    return std::move(out_);
  }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  bool at_newline() const { return peek() == '\n' || peek() == '\r'; }

  // " _" followed by optional blanks and a line break.
  bool at_continuation() const {
    if (peek() != '_') return false;
    if (pos_ > 0 && !blank(src_[pos_ - 1])) return false;
    std::size_t i = pos_ + 1;
    while (i < src_.size() && blank(src_[i])) ++i;
    return i >= src_.size() || src_[i] == '\n' || src_[i] == '\r';
  }

  void consume_newline() {
    if (peek() == '\r' && peek(1) == '\n') {
      advance(2);
    } else {
      advance();
    }
  }

  bool at_statement_start() const {
    if (out_.tokens.empty()) return true;
    const Token& last = out_.tokens.back();
    return last.kind == TokenKind::Newline || last.is_punct(":");
  }

  void push(TokenKind kind, std::string lexeme, int line, int col) {
    out_.tokens.push_back({kind, std::move(lexeme), line, col});
  }

  // Comment text runs to end of line; a trailing " _" continues it.
  void skip_comment() {
    for (;;) {
      std::size_t eol = pos_;
      while (eol < src_.size() && src_[eol] != '\n' && src_[eol] != '\r') ++eol;
      std::size_t last = eol;
      while (last > pos_ && blank(src_[last - 1])) --last;
      bool continued = last > pos_ && src_[last - 1] == '_' && (last - 1 == pos_ || blank(src_[last - 2]));
      advance(eol - pos_);
      if (!continued || pos_ >= src_.size()) return;
      consume_newline();
    }
  }

  void step() {
    char c = peek();
    if (blank(c) || c == '\f' || c == '\v') {
      advance();
      return;
    }
    if (at_continuation()) {
      advance();
      while (blank(peek())) advance();
      if (at_newline()) consume_newline();
      return;
    }
    int line = line_, col = col_;
    if (at_newline()) {
      consume_newline();
      push(TokenKind::Newline, "\n", line, col);
      return;
    }
    if (c == '\'') {
      skip_comment();
      return;
    }
    if (c == '"') {
      lex_string(line, col);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number(line, col);
      return;
    }
    if (c == '&' && (peek(1) == 'H' || peek(1) == 'h' || peek(1) == 'O' || peek(1) == 'o') &&
        std::isxdigit(static_cast<unsigned char>(peek(2)))) {
      std::size_t start = pos_;
      advance(2);
      while (std::isxdigit(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '&') advance();
      push(TokenKind::Number, std::string(src_.substr(start, pos_ - start)), line, col);
      return;
    }
    if (ident_start(c)) {
      std::size_t start = pos_;
      while (ident_char(peek())) advance();
      if (peek() == '$') advance();
      std::string word(src_.substr(start, pos_ - start));
      if (iequals(word, "Rem") && at_statement_start() && (blank(peek()) || at_newline() || peek() == '\0')) {
        skip_comment();
        return;
      }
      TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
      push(kind, std::move(word), line, col);
      return;
    }
    static constexpr std::array<std::string_view, 4> kTwoChar = {"<=", ">=", "<>", ":="};
    for (auto op : kTwoChar) {
      if (src_.substr(pos_, 2) == op) {
        advance(2);
        push(TokenKind::Operator, std::string(op), line, col);
        return;
      }
    }
    if (std::string_view("=<>+-*/\\^&!").find(c) != std::string_view::npos) {
      advance();
      push(TokenKind::Operator, std::string(1, c), line, col);
      return;
    }
    advance();
    push(TokenKind::Punct, std::string(1, c), line, col);
  }

  void lex_string(int line, int col) {
    advance();  // opening quote
    std::string text;
    for (;;) {
      if (pos_ >= src_.size() || at_newline()) {
        push(TokenKind::String, std::move(text), line, col);
        out_.diagnostics.push_back({Severity::Warning, {}, line, "unterminated string literal"});
        // drop the rest of the line; the newline itself still terminates it
        return;
      }
      char c = peek();
      if (c == '"') {
        if (peek(1) == '"') {
          text += '"';
          advance(2);
          continue;
        }
        advance();
        break;
      }
      text += c;
      advance();
    }
    push(TokenKind::String, std::move(text), line, col);
  }

  void lex_number(int line, int col) {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if ((peek() == 'E' || peek() == 'e') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      advance(2);
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (std::string_view("%&!#@^").find(peek()) != std::string_view::npos && peek() != '\0' &&
        !ident_char(peek(1))) {
      advance();
    }
    push(TokenKind::Number, std::string(src_.substr(start, pos_ - start)), line, col);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  LexResult out_;
};

}  // namespace

const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punct: return "punct";
    case TokenKind::Newline: return "newline";
    case TokenKind::Eof: return "eof";
  }
  return "eof";
}

bool Token::is(TokenKind k, std::string_view text) const {
  if (kind != k) return false;
  return k == TokenKind::Keyword || k == TokenKind::Identifier ? iequals(lexeme, text) : lexeme == text;
}

bool is_keyword(std::string_view word) {
  return std::any_of(kKeywords.begin(), kKeywords.end(), [&](const char* kw) { return iequals(kw, word); });
}

LexResult tokenize(std::string_view source) { return Lexer(source).run(); }

std::string spell(const Token& t) {
  switch (t.kind) {
    case TokenKind::String: {
      std::string out = "\"";
      for (char c : t.lexeme) {
        out += c;
        if (c == '"') out += '"';
      }
      return out + "\"";
    }
    case TokenKind::Eof: return "";
    default: return t.lexeme;
  }
}

}  // namespace exact::vba
