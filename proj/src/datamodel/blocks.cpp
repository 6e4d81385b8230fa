#include <algorithm>
#include <deque>
#include <set>

#include "exact/datamodel/model.hpp"

namespace exact::datamodel {

namespace {

bool occupied(const SheetSnapshot& sheet, int row, int col) {
  const CellSnapshot* c = sheet.at(row, col);
  return c && !c->blank();
}

// Cell at a position, or a blank stand-in carrying the address.
CellSnapshot cell_or_blank(const SheetSnapshot& sheet, int row, int col) {
  if (const CellSnapshot* c = sheet.at(row, col)) return *c;
  CellSnapshot blank;
  blank.address = {sheet.name(), row, col};
  return blank;
}

struct AxisResult {
  bool pass = false;
  bool styled = false;  // passed through bold or fill rather than text/type contrast
};

std::optional<std::string> majority_fill(const std::vector<const CellSnapshot*>& cells) {
  std::map<std::string, int> counts;
  for (const auto* c : cells) ++counts[c->style.fill.value_or("")];
  for (const auto& [fill, n] : counts) {
    if (2 * n > static_cast<int>(cells.size())) return fill;
  }
  return std::nullopt;
}

// Header tests on the first line of `r` along one axis. `at(k, j)` yields the
// j-th cell of line k, line 0 being the candidate header.
template <typename At>
AxisResult test_axis(int lines, int width, At at) {
  if (lines < 2) return {};
  std::vector<const CellSnapshot*> head, body;
  for (int j = 0; j < width; ++j) {
    if (const CellSnapshot* c = at(0, j); c && !c->blank()) head.push_back(c);
  }
  for (int k = 1; k < lines; ++k) {
    for (int j = 0; j < width; ++j) {
      if (const CellSnapshot* c = at(k, j); c && !c->blank()) body.push_back(c);
    }
  }
  if (head.empty()) return {};

  bool bold = std::all_of(head.begin(), head.end(), [](const CellSnapshot* c) { return c->style.bold; });

  bool fill = false;
  if (!body.empty()) {
    auto h = majority_fill(head), b = majority_fill(body);
    fill = h && b && *h != *b;
  }

  bool typed = false;
  if (std::all_of(head.begin(), head.end(), [](const CellSnapshot* c) { return c->is_text(); })) {
    for (int j = 0; j < width && !typed; ++j) {
      int seen = 0;
      bool non_text = true;
      for (int k = 1; k < lines; ++k) {
        const CellSnapshot* c = at(k, j);
        if (!c || c->blank()) continue;
        ++seen;
        non_text = non_text && !c->is_text();
      }
      typed = seen > 0 && non_text;
    }
  }
  return {bold || fill || typed, bold || fill};
}

std::optional<std::string> merged_title(const Block& block, const SheetSnapshot& sheet) {
  const CellRect& r = block.rect;
  if (r.rows() < 2) return std::nullopt;
  for (const CellRect& m : sheet.merged()) {
    if (m.top != r.top || m.left != r.left || m.rows() != 1 || m.cols() < 2) continue;
    for (int c = r.left + 1; c <= r.right; ++c) {
      if (occupied(sheet, r.top, c)) return std::nullopt;
    }
    const CellSnapshot* cell = sheet.at(r.top, r.left);
    if (!cell || !cell->is_text()) return std::nullopt;
    std::string text = cell->text();
    auto b = text.find_first_not_of(" \t");
    if (b == std::string::npos) return std::nullopt;
    return text.substr(b, text.find_last_not_of(" \t") - b + 1);
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(HeaderOrientation o) {
  switch (o) {
    case HeaderOrientation::Row: return "row";
    case HeaderOrientation::Column: return "column";
    case HeaderOrientation::Matrix: return "matrix";
    case HeaderOrientation::None: return "none";
  }
  return "none";
}

std::optional<HeaderOrientation> header_orientation_from_string(std::string_view s) {
  for (auto o : {HeaderOrientation::Row, HeaderOrientation::Column, HeaderOrientation::Matrix, HeaderOrientation::None}) {
    if (s == to_string(o)) return o;
  }
  return std::nullopt;
}

std::vector<Block> detect_blocks(const SheetSnapshot& sheet) {
  std::vector<CellRect> boxes;
  std::set<std::pair<int, int>> visited;
  for (const auto& cell : sheet.cells()) {
    if (cell.blank()) continue;
    std::pair start{cell.address.row, cell.address.col};
    if (!visited.insert(start).second) continue;
    CellRect box{{}, start.first, start.second, start.first, start.second};
    std::deque<std::pair<int, int>> queue{start};
    while (!queue.empty()) {
      auto [r, c] = queue.front();
      queue.pop_front();
      box = bounding_box(box, CellRect{{}, r, c, r, c});
      const std::pair<int, int> next[] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& n : next) {
        if (occupied(sheet, n.first, n.second) && visited.insert(n).second) queue.push_back(n);
      }
    }
    boxes.push_back(box);
  }

  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < boxes.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        if (boxes[i].overlaps(boxes[j])) {
          boxes[i] = bounding_box(boxes[i], boxes[j]);
          boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
          break;
        }
      }
    }
  }
  std::sort(boxes.begin(), boxes.end(),
            [](const CellRect& a, const CellRect& b) { return std::pair(a.top, a.left) < std::pair(b.top, b.left); });

  std::vector<Block> out;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    Block b;
    b.id = "block:" + sheet.name() + ":" + std::to_string(i + 1);
    b.sheet = sheet.name();
    b.rect = boxes[i];
    b.rect.sheet = sheet.name();
    b.body = b.rect;
    out.push_back(std::move(b));
  }
  return out;
}

void detect_header(Block& block, const SheetSnapshot& sheet) {
  block.title = merged_title(block, sheet);
  CellRect r = block.rect;
  if (block.title) ++r.top;

  AxisResult row = test_axis(r.rows(), r.cols(), [&](int k, int j) { return sheet.at(r.top + k, r.left + j); });
  AxisResult col = test_axis(r.cols(), r.rows(), [&](int k, int j) { return sheet.at(r.top + j, r.left + k); });

  HeaderOrientation o = HeaderOrientation::None;
  if (row.pass && col.pass) {
    bool corner_blank = !occupied(sheet, r.top, r.left);
    if ((row.styled && col.styled) || corner_blank) {
      o = HeaderOrientation::Matrix;
    } else if (row.styled || !col.styled) {
      o = HeaderOrientation::Row;
    } else {
      o = HeaderOrientation::Column;
    }
  } else if (row.pass) {
    o = HeaderOrientation::Row;
  } else if (col.pass) {
    o = HeaderOrientation::Column;
  }

  block.orientation = o;
  block.header_cells.clear();
  switch (o) {
    case HeaderOrientation::Row:
      for (int c = r.left; c <= r.right; ++c) block.header_cells.push_back(cell_or_blank(sheet, r.top, c));
      block.body = CellRect{sheet.name(), r.top + 1, r.left, r.bottom, r.right};
      break;
    case HeaderOrientation::Column:
      for (int row_i = r.top; row_i <= r.bottom; ++row_i) block.header_cells.push_back(cell_or_blank(sheet, row_i, r.left));
      block.body = CellRect{sheet.name(), r.top, r.left + 1, r.bottom, r.right};
      break;
    case HeaderOrientation::Matrix:
      for (int c = r.left + 1; c <= r.right; ++c) block.header_cells.push_back(cell_or_blank(sheet, r.top, c));
      for (int row_i = r.top + 1; row_i <= r.bottom; ++row_i) {
        block.header_cells.push_back(cell_or_blank(sheet, row_i, r.left));
      }
      block.body = CellRect{sheet.name(), r.top + 1, r.left + 1, r.bottom, r.right};
      break;
    case HeaderOrientation::None:
      block.body = r;
      break;
  }
}

}  // namespace exact::datamodel
