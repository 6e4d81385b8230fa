#pragma once

#include <string>
#include <vector>

#include "exact/datamodel/model.hpp"

namespace exact::datamodel::detail {

/// One attribute-carrying column of a block (a row under column orientation).
struct Line {
  int position = 0;  // 1-based within the block
  int source = 0;    // sheet column or row
  std::string header;
  std::vector<const CellSnapshot*> body;  // nullptr for missing cells

  std::string name() const;  // trimmed header, or col<position>
};

/// Lines of a row, column, or header-less block; empty for matrices.
std::vector<Line> block_lines(const Block& block, const SheetSnapshot& sheet);

std::string trim(std::string_view s);

inline bool is_blank(const CellSnapshot* c) { return !c || c->blank(); }

}  // namespace exact::datamodel::detail
