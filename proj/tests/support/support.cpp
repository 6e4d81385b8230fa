#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace exact::testing {

namespace fs = std::filesystem;

fs::path fixture_dir(const std::string& name) { return fs::path(EXACT_FIXTURE_ROOT) / name; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& tag) {
  static std::mt19937_64 rng{std::random_device{}()};
  fs::path dir = fs::temp_directory_path() / ("exact-" + tag + "-" + std::to_string(rng()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CellSnapshot text_cell(int row, int col, std::string text, bool bold) {
  CellSnapshot c;
  c.address = {std::nullopt, row, col};
  c.value = std::move(text);
  c.style.bold = bold;
  return c;
}

CellSnapshot number_cell(int row, int col, double v, bool bold) {
  CellSnapshot c;
  c.address = {std::nullopt, row, col};
  c.value = v;
  c.style.bold = bold;
  return c;
}

SheetSnapshot grid_sheet(const std::string& name, const std::vector<std::string>& rows, const std::set<int>& bold_rows,
                         const std::set<int>& bold_cols) {
  std::vector<CellSnapshot> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      char ch = rows[r][c];
      if (ch == '.' || ch == ' ') continue;
      int row = static_cast<int>(r) + 1, col = static_cast<int>(c) + 1;
      bool bold = bold_rows.count(row) || bold_cols.count(col);
      if (ch >= '0' && ch <= '9') {
        cells.push_back(number_cell(row, col, ch - '0', bold));
      } else {
        cells.push_back(text_cell(row, col, std::string(1, ch), bold));
      }
    }
  }
  return SheetSnapshot(name, std::move(cells));
}

SheetSnapshot random_sheet(std::mt19937& rng, int rows, int cols, double blank_density) {
  std::bernoulli_distribution blank(blank_density);
  std::uniform_int_distribution<int> value(0, 99);
  std::vector<CellSnapshot> cells;
  for (int r = 1; r <= rows; ++r) {
    for (int c = 1; c <= cols; ++c) {
      if (blank(rng)) continue;
      int v = value(rng);
      cells.push_back(v % 3 == 0 ? text_cell(r, c, "t" + std::to_string(v)) : number_cell(r, c, v));
    }
  }
  return SheetSnapshot("Random", std::move(cells));
}

std::vector<CellRect> oracle_blocks(const SheetSnapshot& sheet) {
  std::set<std::pair<int, int>> filled;
  for (const auto& c : sheet.cells()) {
    if (!std::holds_alternative<std::monostate>(c.value) || c.formula) filled.insert({c.address.row, c.address.col});
  }
  std::set<std::pair<int, int>> seen;
  std::vector<CellRect> boxes;
  for (const auto& start : filled) {
    if (seen.count(start)) continue;
    CellRect box{sheet.name(), start.first, start.second, start.first, start.second};
    std::vector<std::pair<int, int>> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      auto [r, c] = stack.back();
      stack.pop_back();
      box.top = std::min(box.top, r);
      box.bottom = std::max(box.bottom, r);
      box.left = std::min(box.left, c);
      box.right = std::max(box.right, c);
      for (auto [dr, dc] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        std::pair<int, int> next{r + dr, c + dc};
        if (filled.count(next) && seen.insert(next).second) stack.push_back(next);
      }
    }
    boxes.push_back(box);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < boxes.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < boxes.size() && !changed; ++j) {
        const CellRect &a = boxes[i], &b = boxes[j];
        if (a.top > b.bottom || b.top > a.bottom || a.left > b.right || b.left > a.right) continue;
        boxes[i] = CellRect{a.sheet, std::min(a.top, b.top), std::min(a.left, b.left), std::max(a.bottom, b.bottom),
                            std::max(a.right, b.right)};
        boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }
  std::sort(boxes.begin(), boxes.end(),
            [](const CellRect& a, const CellRect& b) { return std::tie(a.top, a.left) < std::tie(b.top, b.left); });
  return boxes;
}

std::vector<logic::CellAccess> random_accesses(std::mt19937& rng, int count, int n, const std::vector<std::string>& procs,
                                               const std::vector<std::string>& sheets) {
  std::uniform_int_distribution<int> coord(1, n);
  std::uniform_int_distribution<int> extent(0, 2);
  std::uniform_int_distribution<std::size_t> proc(0, procs.size() - 1), sheet(0, sheets.size() - 1);
  std::bernoulli_distribution write(0.5), wide(0.25), dynamic(0.05);
  std::vector<logic::CellAccess> out;
  for (int i = 0; i < count; ++i) {
    logic::CellAccess a;
    a.procedure = {"M", procs[proc(rng)]};
    a.kind = write(rng) ? logic::AccessKind::Write : logic::AccessKind::Read;
    a.site_line = i + 1;
    if (dynamic(rng)) {
      a.dynamic_reason = "non-literal";
    } else {
      int top = coord(rng), left = coord(rng);
      int bottom = top, right = left;
      if (wide(rng)) {
        bottom = std::min(n, top + extent(rng));
        right = std::min(n, left + extent(rng));
      }
      a.target = CellRect{sheets[sheet(rng)], top, left, bottom, right};
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::set<std::set<std::size_t>> oracle_groups(const std::vector<logic::CellAccess>& accesses) {
  std::vector<std::size_t> label(accesses.size());
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = i;
  auto touching = [](const CellRect& a, const CellRect& b) {
    // grow `a` by one cell on every side and test for intersection
    return a.top - 1 <= b.bottom && b.top <= a.bottom + 1 && a.left - 1 <= b.right && b.left <= a.right + 1;
  };
  auto same_bucket = [](const logic::CellAccess& a, const logic::CellAccess& b) {
    return a.procedure == b.procedure && a.kind == b.kind && to_lower(a.target->sheet) == to_lower(b.target->sheet);
  };
  for (std::size_t i = 0; i < accesses.size(); ++i) {
    if (accesses[i].dynamic()) continue;
    for (std::size_t j = i + 1; j < accesses.size(); ++j) {
      if (accesses[j].dynamic() || !same_bucket(accesses[i], accesses[j])) continue;
      if (!touching(*accesses[i].target, *accesses[j].target)) continue;
      std::size_t from = label[j], to = label[i];
      if (from == to) continue;
      for (auto& l : label) {
        if (l == from) l = to;
      }
    }
  }
  std::map<std::size_t, std::set<std::size_t>> by_label;
  for (std::size_t i = 0; i < label.size(); ++i) by_label[label[i]].insert(i);
  std::set<std::set<std::size_t>> out;
  for (auto& [_, members] : by_label) out.insert(members);
  return out;
}

std::set<std::set<std::size_t>> partition_of(const std::vector<logic::CellGroup>& groups,
                                             const std::vector<logic::CellAccess>& accesses) {
  std::set<std::set<std::size_t>> out;
  std::vector<bool> used(accesses.size(), false);
  for (const auto& g : groups) {
    std::set<std::size_t> members;
    for (const auto& m : g.members) {
      for (std::size_t i = 0; i < accesses.size(); ++i) {
        if (!used[i] && accesses[i] == m) {
          used[i] = true;
          members.insert(i);
          break;
        }
      }
    }
    out.insert(members);
  }
  return out;
}

namespace {

struct Column {
  std::string header;
  std::vector<std::string> values;  // "" for blank
};

std::vector<Column> columns_of(const WorkbookSnapshot& wb, const std::string& provenance) {
  CellRect rect = parse_a1(provenance);
  const SheetSnapshot* sheet = wb.find_sheet(rect.sheet);
  if (!sheet) return {};
  std::vector<Column> out;
  for (int c = rect.left; c <= rect.right; ++c) {
    Column col;
    if (const auto* h = sheet->at(rect.top, c)) col.header = h->text();
    while (!col.header.empty() && col.header.back() == ' ') col.header.pop_back();
    while (!col.header.empty() && col.header.front() == ' ') col.header.erase(col.header.begin());
    for (int r = rect.top + 1; r <= rect.bottom; ++r) {
      const auto* cell = sheet->at(r, c);
      col.values.push_back(cell ? cell->text() : std::string());
    }
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace

std::string verify_association(const WorkbookSnapshot& wb, const datamodel::ConceptualModel& model,
                               const datamodel::RelationshipDef& rel, const datamodel::SynonymDictionary& syn) {
  const auto* source = model.find(rel.source);
  const auto* target = model.find(rel.target);
  if (!source || !target) return "endpoint missing";
  if (rel.source == rel.target) return "self association";
  auto b_cols = columns_of(wb, source->provenance);
  auto a_cols = columns_of(wb, target->provenance);
  auto c = std::find_if(b_cols.begin(), b_cols.end(), [&](const Column& col) { return col.header == rel.label; });
  if (c == b_cols.end()) return "no source column '" + rel.label + "'";

  std::set<std::string> referenced;
  bool blanks = false;
  for (const auto& v : c->values) {
    if (v.empty()) {
      blanks = true;
    } else {
      referenced.insert(v);
    }
  }
  if (referenced.empty()) return "source column has no values";

  for (const auto& k : a_cols) {
    if (!syn.match(k.header, c->header)) continue;
    std::set<std::string> keys(k.values.begin(), k.values.end());
    if (keys.count("") || keys.size() != k.values.size()) continue;
    if (!std::includes(keys.begin(), keys.end(), referenced.begin(), referenced.end())) continue;
    std::string want_source = referenced == keys ? "1..*" : "0..*";
    std::string want_target = blanks ? "0..1" : "1";
    if (rel.source_card != want_source) return "source card " + rel.source_card + " != " + want_source;
    if (rel.target_card != want_target) return "target card " + rel.target_card + " != " + want_target;
    return {};
  }
  return "no unique key column contains the referenced values";
}

WorkbookSnapshot random_two_block_workbook(std::mt19937& rng, bool break_containment) {
  std::uniform_int_distribution<int> parent_rows(2, 12), child_rows(1, 20);
  std::bernoulli_distribution blank(0.1), numeric_keys(0.3);
  int np = parent_rows(rng);
  bool numeric = numeric_keys(rng);
  std::vector<std::string> keys;
  std::vector<CellSnapshot> parent{text_cell(1, 1, "Id", true), text_cell(1, 2, "Name", true)};
  for (int i = 0; i < np; ++i) {
    int r = i + 2;
    if (numeric) {
      parent.push_back(number_cell(r, 1, 100 + i * 7));
      keys.push_back(format_number(100 + i * 7));
    } else {
      parent.push_back(text_cell(r, 1, "K" + std::to_string(i * 3 + 1)));
      keys.push_back("K" + std::to_string(i * 3 + 1));
    }
    parent.push_back(text_cell(r, 2, "name " + std::to_string(i)));
  }

  std::uniform_int_distribution<std::size_t> pick(0, keys.size() - 1);
  int nc = child_rows(rng);
  std::vector<CellSnapshot> child{text_cell(1, 1, "Line", true), text_cell(1, 2, "ParentId", true),
                                  text_cell(1, 3, "Qty", true)};
  std::uniform_int_distribution<int> foreign_row(0, nc - 1);
  int foreign = break_containment ? foreign_row(rng) : -1;
  for (int i = 0; i < nc; ++i) {
    int r = i + 2;
    child.push_back(number_cell(r, 1, i + 1));
    if (i == foreign) {
      child.push_back(text_cell(r, 2, "ZZ-foreign"));
    } else if (!blank(rng)) {
      const std::string& k = keys[pick(rng)];
      child.push_back(numeric ? number_cell(r, 2, std::stod(k)) : text_cell(r, 2, k));
    }
    child.push_back(number_cell(r, 3, (i * 5) % 9 + 1));
  }

  WorkbookSnapshot wb;
  wb.name = "Random.xlsx";
  wb.sheets.emplace_back("Parent", std::move(parent));
  wb.sheets.emplace_back("Child", std::move(child));
  return wb;
}

WorkbookSnapshot with_cell(const WorkbookSnapshot& wb, const std::string& sheet, int row, int col, std::string text) {
  WorkbookSnapshot out = wb;
  for (auto& s : out.sheets) {
    if (s.name() != sheet) continue;
    std::vector<CellSnapshot> cells;
    for (const auto& c : s.cells()) {
      if (c.address.row != row || c.address.col != col) cells.push_back(c);
    }
    cells.push_back(text_cell(row, col, std::move(text)));
    s = SheetSnapshot(s.name(), std::move(cells), s.merged());
  }
  return out;
}

std::optional<WorkbookSnapshot> corrupt_source_value(const WorkbookSnapshot& wb, const datamodel::ConceptualModel& model,
                                                     const datamodel::RelationshipDef& rel) {
  const auto* source = model.find(rel.source);
  if (!source) return std::nullopt;
  CellRect rect = parse_a1(source->provenance);
  const SheetSnapshot* sheet = wb.find_sheet(rect.sheet);
  if (!sheet) return std::nullopt;
  for (int c = rect.left; c <= rect.right; ++c) {
    const auto* h = sheet->at(rect.top, c);
    if (!h || h->text() != rel.label) continue;
    for (int r = rect.top + 1; r <= rect.bottom; ++r) {
      if (!sheet->blank_at(r, c)) return with_cell(wb, sheet->name(), r, c, "ZZ-mutant");
    }
  }
  return std::nullopt;
}

bool has_association(const datamodel::ConceptualModel& model, const datamodel::RelationshipDef& rel) {
  return std::any_of(model.relationships.begin(), model.relationships.end(), [&](const datamodel::RelationshipDef& r) {
    return r.kind == rel.kind && r.source == rel.source && r.target == rel.target && r.label == rel.label &&
           r.rule_id == rel.rule_id;
  });
}

datamodel::SynonymDictionary two_block_synonyms() { return datamodel::SynonymDictionary(std::vector<std::vector<std::string>>{{"Id", "ParentId"}}); }

}  // namespace exact::testing
