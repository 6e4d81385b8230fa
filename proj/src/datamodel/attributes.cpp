#include <algorithm>
#include <cmath>
#include <set>

#include "lines.hpp"

namespace exact::datamodel {

namespace detail {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1));
}

std::string Line::name() const {
  std::string t = trim(header);
  return t.empty() ? "col" + std::to_string(position) : t;
}

std::vector<Line> block_lines(const Block& block, const SheetSnapshot& sheet) {
  std::vector<Line> out;
  if (!block.body) return out;
  const CellRect& b = *block.body;
  switch (block.orientation) {
    case HeaderOrientation::Row:
    case HeaderOrientation::None:
      for (int c = b.left; c <= b.right; ++c) {
        Line line{c - b.left + 1, c, {}, {}};
        if (block.orientation == HeaderOrientation::Row) {
          if (const CellSnapshot* h = sheet.at(b.top - 1, c)) line.header = h->text();
        }
        for (int r = b.top; r <= b.bottom; ++r) line.body.push_back(sheet.at(r, c));
        out.push_back(std::move(line));
      }
      break;
    case HeaderOrientation::Column:
      for (int r = b.top; r <= b.bottom; ++r) {
        Line line{r - b.top + 1, r, {}, {}};
        if (const CellSnapshot* h = sheet.at(r, b.left - 1)) line.header = h->text();
        for (int c = b.left; c <= b.right; ++c) line.body.push_back(sheet.at(r, c));
        out.push_back(std::move(line));
      }
      break;
    case HeaderOrientation::Matrix:
      break;
  }
  return out;
}

}  // namespace detail

namespace {

using detail::is_blank;

// nullopt for blanks and for formulas without a cached value.
std::optional<AttrType> classify(const CellSnapshot* c) {
  if (is_blank(c)) return std::nullopt;
  struct Visitor {
    std::optional<AttrType> operator()(std::monostate) const { return std::nullopt; }
    std::optional<AttrType> operator()(const std::string&) const { return AttrType::Text; }
    std::optional<AttrType> operator()(double d) const {
      return std::floor(d) == d && std::abs(d) < 9.007199254740992e15 ? AttrType::Integer : AttrType::Real;
    }
    std::optional<AttrType> operator()(bool) const { return AttrType::Boolean; }
    std::optional<AttrType> operator()(const DateValue&) const { return AttrType::Date; }
  };
  return std::visit(Visitor{}, c->value);
}

std::optional<AttrType> join(std::optional<AttrType> a, std::optional<AttrType> b) {
  if (!a) return b;
  if (!b || *a == *b) return a;
  auto numeric = [](AttrType t) { return t == AttrType::Integer || t == AttrType::Real; };
  if (numeric(*a) && numeric(*b)) return AttrType::Real;
  return AttrType::Mixed;
}

AttributeDef attribute_of(std::string name, int source, const std::vector<const CellSnapshot*>& cells) {
  std::optional<AttrType> type;
  bool optional = false;
  for (const auto* c : cells) {
    optional = optional || is_blank(c);
    type = join(type, classify(c));
  }
  return {std::move(name), type.value_or(AttrType::Text), optional, source, {}};
}

}  // namespace

const char* to_string(AttrType t) {
  switch (t) {
    case AttrType::Integer: return "integer";
    case AttrType::Real: return "real";
    case AttrType::Text: return "text";
    case AttrType::Boolean: return "boolean";
    case AttrType::Date: return "date";
    case AttrType::Mixed: return "mixed";
  }
  return "mixed";
}

std::optional<AttrType> attr_type_from_string(std::string_view s) {
  for (auto t : {AttrType::Integer, AttrType::Real, AttrType::Text, AttrType::Boolean, AttrType::Date, AttrType::Mixed}) {
    if (s == to_string(t)) return t;
  }
  return std::nullopt;
}

std::vector<AttributeDef> infer_column_types(const Block& block, const SheetSnapshot& sheet) {
  std::vector<AttributeDef> out;
  if (block.orientation == HeaderOrientation::Matrix) {
    const CellRect& b = *block.body;
    std::vector<const CellSnapshot*> cells;
    for (int r = b.top; r <= b.bottom; ++r) {
      for (int c = b.left; c <= b.right; ++c) cells.push_back(sheet.at(r, c));
    }
    out.push_back({"rowLabel", AttrType::Text, false, b.left - 1, {}});
    out.push_back({"colLabel", AttrType::Text, false, b.top - 1, {}});
    out.push_back(attribute_of("value", b.left, cells));
    return out;
  }

  std::set<std::string> taken;
  for (const auto& line : detail::block_lines(block, sheet)) {
    std::string name = line.name();
    if (!taken.insert(to_lower(name)).second) {
      for (int n = 2;; ++n) {
        std::string candidate = name + "_" + std::to_string(n);
        if (taken.insert(to_lower(candidate)).second) {
          name = candidate;
          break;
        }
      }
    }
    out.push_back(attribute_of(std::move(name), line.source, line.body));
  }
  return out;
}

std::vector<Enumeration> detect_enumerations(const Block& block, const SheetSnapshot& sheet,
                                             const AbstractionOptions& options) {
  std::vector<Enumeration> out;
  if (block.orientation != HeaderOrientation::Row || !block.body) return out;
  auto attributes = infer_column_types(block, sheet);
  auto lines = detail::block_lines(block, sheet);
  int rows = block.body->rows();
  int cap = std::max(options.enum_min_cap, static_cast<int>(std::ceil(options.enum_row_ratio * rows - 1e-9)));

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (attributes[i].type != AttrType::Text) continue;
    std::vector<std::string> literals;
    std::set<std::string> seen;
    int filled = 0;
    for (const auto* c : lines[i].body) {
      if (is_blank(c)) continue;
      ++filled;
      if (seen.insert(c->text()).second) literals.push_back(c->text());
    }
    int d = static_cast<int>(literals.size());
    if (d < 2 || d > cap || filled == d) continue;

    const std::string& attr = attributes[i].name;
    ClassDef cls;
    cls.id = "enum:" + block.id.substr(block.id.find(':') + 1) + ":" + attr;
    cls.name = attr;
    cls.stereotype = Stereotype::Enumeration;
    cls.literals = std::move(literals);
    cls.provenance = to_a1(CellRect{block.sheet, block.body->top, lines[i].source, block.body->bottom, lines[i].source});
    out.push_back({std::move(cls), attr});
  }
  return out;
}

}  // namespace exact::datamodel
