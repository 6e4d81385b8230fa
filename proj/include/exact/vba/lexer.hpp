#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "exact/diagnostics.hpp"

namespace exact::vba {

enum class TokenKind { Keyword, Identifier, Number, String, Operator, Punct, Newline, Eof };

const char* to_string(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::Eof;
  /// Keyword lexemes keep the source spelling; string lexemes hold the
  /// decoded text (no quotes, `""` collapsed).
  std::string lexeme;
  int line = 1;
  int col = 1;

  bool is(TokenKind k, std::string_view text) const;
  bool is_keyword(std::string_view kw) const { return is(TokenKind::Keyword, kw); }
  bool is_punct(std::string_view p) const { return is(TokenKind::Punct, p); }
  bool is_op(std::string_view op) const { return is(TokenKind::Operator, op); }
};

struct LexResult {
  std::vector<Token> tokens;  // always ends with Eof
  Diagnostics diagnostics;
};

/// Splits VBA source into tokens. Comments are dropped, ` _` line
/// continuations are joined into one logical line, and an unterminated string
/// yields its partial text plus a diagnostic before lexing resumes on the next
/// line.
LexResult tokenize(std::string_view source);

/// Source spelling of a token; re-quotes string literals.
std::string spell(const Token& t);

bool is_keyword(std::string_view word);

}  // namespace exact::vba
