#include <algorithm>
#include <cctype>

#include "exact/workbook.hpp"

namespace exact {

namespace {

bool is_plain_sheet_name(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

[[noreturn]] void fail(std::string_view ref, std::string_view fragment, std::string_view why) {
  throw ReferenceError("malformed reference '" + std::string(ref) + "': " + std::string(why) + " at '" +
                       std::string(fragment) + "'");
}

struct Cell {
  int row;
  int col;
};

Cell parse_cell(std::string_view ref, std::string_view part) {
  std::size_t i = 0;
  if (i < part.size() && part[i] == '$') ++i;
  std::size_t letters_begin = i;
  while (i < part.size() && std::isalpha(static_cast<unsigned char>(part[i]))) ++i;
  std::string_view letters = part.substr(letters_begin, i - letters_begin);
  if (letters.empty()) fail(ref, part, "expected column letters");
  if (letters.size() > 3) fail(ref, part, "more than three column letters");
  if (i < part.size() && part[i] == '$') ++i;
  std::size_t digits_begin = i;
  while (i < part.size() && std::isdigit(static_cast<unsigned char>(part[i]))) ++i;
  std::string_view digits = part.substr(digits_begin, i - digits_begin);
  if (digits.empty()) fail(ref, part, "expected row number");
  if (i != part.size()) fail(ref, part.substr(i), "unexpected trailing text");
  if (digits.size() > 7) fail(ref, part, "row out of range");

  int col = column_index(letters);
  if (col > kMaxCol) fail(ref, part, "column out of range");
  long row = std::stol(std::string(digits));
  if (row < 1 || row > kMaxRow) fail(ref, part, "row out of range");
  return {static_cast<int>(row), col};
}

}  // namespace

int column_index(std::string_view letters) {
  int col = 0;
  for (char c : letters) {
    col = col * 26 + (std::toupper(static_cast<unsigned char>(c)) - 'A' + 1);
  }
  return col;
}

std::string column_letters(int col) {
  std::string out;
  while (col > 0) {
    int rem = (col - 1) % 26;
    out.insert(out.begin(), static_cast<char>('A' + rem));
    col = (col - 1) / 26;
  }
  return out;
}

CellRect parse_a1(std::string_view ref) {
  CellRect rect;
  std::string_view rest = ref;

  if (!rest.empty() && rest.front() == '\'') {
    // 'Sheet name'!A1 with '' as an escaped quote
    std::string sheet;
    std::size_t i = 1;
    for (;;) {
      if (i >= rest.size()) fail(ref, rest, "unterminated sheet quote");
      if (rest[i] == '\'') {
        if (i + 1 < rest.size() && rest[i + 1] == '\'') {
          sheet += '\'';
          i += 2;
          continue;
        }
        break;
      }
      sheet += rest[i++];
    }
    if (i + 1 >= rest.size() || rest[i + 1] != '!') fail(ref, rest.substr(i), "expected '!' after sheet name");
    if (sheet.empty()) fail(ref, rest.substr(0, i + 1), "empty sheet name");
    rect.sheet = std::move(sheet);
    rest = rest.substr(i + 2);
  } else if (auto bang = rest.find('!'); bang != std::string_view::npos) {
    if (bang == 0) fail(ref, rest.substr(0, 1), "empty sheet name");
    rect.sheet = std::string(rest.substr(0, bang));
    rest = rest.substr(bang + 1);
  }

  if (rest.empty()) fail(ref, ref, "missing cell reference");

  auto colon = rest.find(':');
  Cell a = parse_cell(ref, rest.substr(0, colon));
  Cell b = a;
  if (colon != std::string_view::npos) b = parse_cell(ref, rest.substr(colon + 1));

  rect.top = std::min(a.row, b.row);
  rect.bottom = std::max(a.row, b.row);
  rect.left = std::min(a.col, b.col);
  rect.right = std::max(a.col, b.col);
  return rect;
}

std::string to_a1(const CellRect& rect) {
  std::string out;
  if (!rect.sheet.empty()) {
    if (is_plain_sheet_name(rect.sheet)) {
      out = rect.sheet;
    } else {
      out = "'";
      for (char c : rect.sheet) {
        out += c;
        if (c == '\'') out += '\'';
      }
      out += "'";
    }
    out += '!';
  }
  out += column_letters(rect.left) + std::to_string(rect.top);
  if (rect.top != rect.bottom || rect.left != rect.right) {
    out += ':' + column_letters(rect.right) + std::to_string(rect.bottom);
  }
  return out;
}

CellRect bounding_box(const CellRect& a, const CellRect& b) {
  return {a.sheet, std::min(a.top, b.top), std::min(a.left, b.left), std::max(a.bottom, b.bottom),
          std::max(a.right, b.right)};
}

std::optional<CellRect> used_range(const SheetSnapshot& sheet) {
  std::optional<CellRect> out;
  for (const auto& cell : sheet.cells()) {
    if (cell.blank()) continue;
    CellRect one{sheet.name(), cell.address.row, cell.address.col, cell.address.row, cell.address.col};
    out = out ? bounding_box(*out, one) : one;
  }
  return out;
}

}  // namespace exact
