#include <regex>
#include <string>

#include "exact/vba/parser.hpp"

namespace exact::vba {

namespace {

// Joins ` _` continuations and blanks out comments and string contents, line
// by line, without going through the lexer.
std::vector<std::string> logical_lines(std::string_view source) {
  std::vector<std::string> out;
  std::string current;
  std::string physical;
  bool comment_carry = false;
  auto continues = [](std::string_view text) {
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    return text.size() >= 2 && text.back() == '_' && (text[text.size() - 2] == ' ' || text[text.size() - 2] == '\t');
  };
  auto flush_physical = [&]() {
    if (comment_carry) {
      comment_carry = continues(physical);
      if (!comment_carry) {
        out.push_back(std::move(current));
        current.clear();
      }
      physical.clear();
      return;
    }
    // strip comment and string bodies
    std::string cleaned;
    bool in_string = false;
    for (std::size_t i = 0; i < physical.size(); ++i) {
      char c = physical[i];
      if (in_string) {
        if (c == '"') {
          if (i + 1 < physical.size() && physical[i + 1] == '"') {
            ++i;
            continue;
          }
          in_string = false;
          cleaned += '"';
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
        cleaned += '"';
        continue;
      }
      if (c == '\'') {
        comment_carry = continues(std::string_view(physical).substr(i));
        break;
      }
      cleaned += c;
    }
    while (!cleaned.empty() && (cleaned.back() == ' ' || cleaned.back() == '\t' || cleaned.back() == '\r')) {
      cleaned.pop_back();
    }
    bool continued = cleaned.size() >= 2 && cleaned.back() == '_' &&
                     (cleaned[cleaned.size() - 2] == ' ' || cleaned[cleaned.size() - 2] == '\t');
    if (comment_carry) {
      current += cleaned;
    } else if (continued) {
      cleaned.pop_back();
      current += cleaned;
    } else {
      current += cleaned;
      out.push_back(std::move(current));
      current.clear();
    }
    physical.clear();
  };
  for (char c : source) {
    if (c == '\n') {
      flush_physical();
    } else {
      physical += c;
    }
  }
  flush_physical();
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace

int count_procedures_oracle(std::string_view source) {
  static const std::regex header(R"(^[ \t]*((public|private|friend|static)[ \t]+)*(sub|function)[ \t]+[a-z][a-z0-9_]*)",
                                 std::regex::icase);
  int count = 0;
  for (const auto& line : logical_lines(source)) {
    if (std::regex_search(line, header)) ++count;
  }
  return count;
}

}  // namespace exact::vba
