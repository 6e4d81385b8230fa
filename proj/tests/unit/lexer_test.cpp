#include <gtest/gtest.h>

#include <random>

#include "exact/vba/lexer.hpp"

using namespace exact::vba;

namespace {

std::vector<Token> until_newline(const LexResult& r) {
  std::vector<Token> out;
  for (const auto& t : r.tokens) {
    if (t.kind == TokenKind::Newline || t.kind == TokenKind::Eof) break;
    out.push_back(t);
  }
  return out;
}

}  // namespace

TEST(Lexer, DropsComments) {
  auto r = tokenize("x = 1 ' note\n");
  ASSERT_EQ(r.tokens.size(), 5u);
  EXPECT_EQ(r.tokens[0].kind, TokenKind::Identifier);
  EXPECT_EQ(r.tokens[0].lexeme, "x");
  EXPECT_TRUE(r.tokens[1].is_op("="));
  EXPECT_EQ(r.tokens[2].kind, TokenKind::Number);
  EXPECT_EQ(r.tokens[2].lexeme, "1");
  EXPECT_EQ(r.tokens[3].kind, TokenKind::Newline);
  EXPECT_EQ(r.tokens[4].kind, TokenKind::Eof);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(Lexer, RemStartsACommentOnlyAtStatementStart) {
  auto r = tokenize("Rem all of this\nremainder = 2\n");
  ASSERT_GE(r.tokens.size(), 2u);
  EXPECT_EQ(r.tokens[0].kind, TokenKind::Newline);
  EXPECT_EQ(r.tokens[1].lexeme, "remainder");
}

TEST(Lexer, DoubledQuoteEscape) {
  auto r = tokenize("s = \"a\"\"b\"");
  ASSERT_GE(r.tokens.size(), 3u);
  EXPECT_EQ(r.tokens[2].kind, TokenKind::String);
  EXPECT_EQ(r.tokens[2].lexeme, "a\"b");
  EXPECT_EQ(spell(r.tokens[2]), "\"a\"\"b\"");
}

TEST(Lexer, ContinuationJoinsLogicalLine) {
  auto r = tokenize("Call Foo(1, _\n 2)\n");
  auto line = until_newline(r);
  // hand-tokenized: Call Foo ( 1 , 2 )
  std::vector<std::pair<TokenKind, std::string>> want = {
      {TokenKind::Keyword, "Call"}, {TokenKind::Identifier, "Foo"}, {TokenKind::Punct, "("}, {TokenKind::Number, "1"},
      {TokenKind::Punct, ","},      {TokenKind::Number, "2"},       {TokenKind::Punct, ")"}};
  ASSERT_EQ(line.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(line[i].kind, want[i].first) << i;
    EXPECT_EQ(line[i].lexeme, want[i].second) << i;
  }
  EXPECT_EQ(line[5].line, 2);
}

TEST(Lexer, CommentContinuationSwallowsNextLine) {
  auto r = tokenize("' first _\nSub Hidden()\nx = 1\n");
  std::vector<std::string> lexemes;
  for (const auto& t : r.tokens) {
    if (t.kind != TokenKind::Newline && t.kind != TokenKind::Eof) lexemes.push_back(t.lexeme);
  }
  EXPECT_EQ(lexemes, (std::vector<std::string>{"x", "=", "1"}));
}

TEST(Lexer, UnterminatedStringRecovers) {
  auto r = tokenize("s = \"open\ny = 2\n");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].line, 1);
  EXPECT_EQ(r.tokens[2].kind, TokenKind::String);
  EXPECT_EQ(r.tokens[2].lexeme, "open");
  bool saw_y = false;
  for (const auto& t : r.tokens) saw_y = saw_y || (t.lexeme == "y" && t.line == 2);
  EXPECT_TRUE(saw_y);
}

TEST(Lexer, KeywordsAreCaseInsensitiveAndKeepSpelling) {
  auto r = tokenize("end SUB");
  EXPECT_TRUE(r.tokens[0].is_keyword("End"));
  EXPECT_EQ(r.tokens[0].lexeme, "end");
  EXPECT_TRUE(r.tokens[1].is_keyword("Sub"));
}

TEST(Lexer, TwoCharacterOperators) {
  auto r = tokenize("a <> b <= c >= d");
  EXPECT_TRUE(r.tokens[1].is_op("<>"));
  EXPECT_TRUE(r.tokens[3].is_op("<="));
  EXPECT_TRUE(r.tokens[5].is_op(">="));
}

TEST(Lexer, TracksLinesAndColumns) {
  auto r = tokenize("a\n  b");
  EXPECT_EQ(r.tokens[0].line, 1);
  EXPECT_EQ(r.tokens[0].col, 1);
  EXPECT_EQ(r.tokens[2].line, 2);
  EXPECT_EQ(r.tokens[2].col, 3);
}

TEST(Lexer, AlwaysEndsWithEof) {
  for (const char* src : {"", "\n", "x", "\"", "' c _"}) {
    auto r = tokenize(src);
    ASSERT_FALSE(r.tokens.empty());
    EXPECT_EQ(r.tokens.back().kind, TokenKind::Eof) << src;
  }
}

// Spelling tokens back with single spaces and re-lexing yields the same tokens.
TEST(LexerProperty, SpelledTokensRelexIdentically) {
  const std::vector<std::string> words = {"foo", "x1", "Total_2", "Range", "Cells", "Worksheets", "If", "Then",
                                          "Dim", "As", "Sub", "End", "With", "Not", "And", "Mod", "Call"};
  const std::vector<std::string> ops = {"=", "<>", "<=", ">=", "<", ">", "+", "-", "*", "/", "\\", "^", "&"};
  const std::vector<std::string> puncts = {"(", ")", ",", ".", ":", ";"};
  const std::vector<std::string> strings = {"", "a", "say \"hi\"", "x ' not a comment", "_"};
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> kind(0, 4), len(1, 25), num(0, 5000);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Token> want;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
      Token t;
      switch (kind(rng)) {
        case 0: {
          t.lexeme = words[rng() % words.size()];
          t.kind = is_keyword(t.lexeme) ? TokenKind::Keyword : TokenKind::Identifier;
          break;
        }
        case 1: t = {TokenKind::Number, std::to_string(num(rng))}; break;
        case 2: t = {TokenKind::String, strings[rng() % strings.size()]}; break;
        case 3: t = {TokenKind::Operator, ops[rng() % ops.size()]}; break;
        default: t = {TokenKind::Punct, puncts[rng() % puncts.size()]}; break;
      }
      want.push_back(t);
    }
    std::string text;
    for (const auto& t : want) text += spell(t) + " ";
    auto got = tokenize(text);
    ASSERT_TRUE(got.diagnostics.empty()) << text;
    ASSERT_EQ(got.tokens.size(), want.size() + 1) << text;
    for (std::size_t i = 0; i < want.size(); ++i) {
      ASSERT_EQ(got.tokens[i].kind, want[i].kind) << text << " @" << i;
      ASSERT_EQ(got.tokens[i].lexeme, want[i].lexeme) << text << " @" << i;
    }
  }
}
