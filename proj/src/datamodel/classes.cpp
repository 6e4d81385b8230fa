#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "lines.hpp"

namespace exact::datamodel {

namespace {

using detail::is_blank;

std::string sheet_class_id(const std::string& sheet) { return "sheet:" + sheet; }

bool rel_less(const RelationshipDef& a, const RelationshipDef& b) {
  return std::tie(a.kind, a.source, a.target, a.label) < std::tie(b.kind, b.source, b.target, b.label);
}

}  // namespace

const char* to_string(Stereotype s) {
  switch (s) {
    case Stereotype::Sheet: return "sheet";
    case Stereotype::Data: return "data";
    case Stereotype::Enumeration: return "enumeration";
  }
  return "data";
}

std::optional<Stereotype> stereotype_from_string(std::string_view s) {
  for (auto v : {Stereotype::Sheet, Stereotype::Data, Stereotype::Enumeration}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

const char* to_string(RelationKind k) { return k == RelationKind::Composition ? "composition" : "association"; }

std::optional<RelationKind> relation_kind_from_string(std::string_view s) {
  for (auto v : {RelationKind::Composition, RelationKind::Association}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

const ClassDef* ConceptualModel::find(std::string_view id) const {
  for (const auto& c : classes) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::string normalize_label(std::string_view s) {
  std::string out;
  std::istringstream words{std::string(s)};
  for (std::string w; words >> w;) {
    if (!out.empty()) out += ' ';
    out += to_lower(w);
  }
  return out;
}

SynonymDictionary::SynonymDictionary(std::vector<std::vector<std::string>> groups) {
  for (auto& group : groups) {
    std::vector<std::string> normalized;
    for (const auto& label : group) {
      std::string n = normalize_label(label);
      if (n.empty()) continue;
      auto [it, inserted] = group_of_.emplace(n, groups_.size());
      if (!inserted && it->second != groups_.size()) throw Error("synonym '" + n + "' appears in two groups");
      if (inserted) normalized.push_back(n);
    }
    groups_.push_back(std::move(normalized));
  }
}

SynonymDictionary SynonymDictionary::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("synonym dictionary is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array()) {
    throw Error("synonym dictionary needs a \"groups\" array");
  }
  std::vector<std::vector<std::string>> groups;
  for (const auto& g : doc["groups"]) {
    if (!g.is_array()) throw Error("each synonym group must be an array of strings");
    auto& out = groups.emplace_back();
    for (const auto& label : g) {
      if (!label.is_string()) throw Error("each synonym group must be an array of strings");
      out.push_back(label.get<std::string>());
    }
  }
  return SynonymDictionary(std::move(groups));
}

bool SynonymDictionary::match(std::string_view a, std::string_view b) const {
  std::string na = normalize_label(a), nb = normalize_label(b);
  if (na.empty() || nb.empty()) return false;
  if (na == nb) return true;
  auto ia = group_of_.find(na), ib = group_of_.find(nb);
  return ia != group_of_.end() && ib != group_of_.end() && ia->second == ib->second;
}

ConceptualModel abstract_classes(const SheetSnapshot& sheet, const std::vector<Block>& blocks) {
  ConceptualModel model;
  if (blocks.empty()) return model;
  model.classes.push_back({sheet_class_id(sheet.name()), sheet.name(), Stereotype::Sheet, {}, {}, sheet.name()});
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    ClassDef cls;
    cls.id = b.id;
    cls.name = b.title ? *b.title : sheet.name() + "_Block" + std::to_string(i + 1);
    cls.stereotype = Stereotype::Data;
    cls.attributes = infer_column_types(b, sheet);
    cls.provenance = to_a1(b.rect);
    model.classes.push_back(std::move(cls));
    model.relationships.push_back(
        {RelationKind::Composition, sheet_class_id(sheet.name()), b.id, "1", "1", "sheet-contains-block", {}});
    if (b.orientation == HeaderOrientation::None) {
      model.diagnostics.push_back(
          {Severity::Info, sheet.name(), 0, "no header detected for block " + to_a1(b.rect) + "; columns named colN"});
    }
  }
  return model;
}

std::vector<RelationshipDef> detect_associations(const WorkbookSnapshot& wb, const std::vector<Block>& blocks,
                                                 const SynonymDictionary& synonyms) {
  struct Table {
    const Block* block;
    std::vector<detail::Line> lines;
  };
  std::vector<Table> tables;
  for (const auto& b : blocks) {
    if (b.orientation != HeaderOrientation::Row) continue;
    const SheetSnapshot* sheet = wb.find_sheet(b.sheet);
    if (!sheet) continue;
    tables.push_back({&b, detail::block_lines(b, *sheet)});
  }

  auto is_key = [](const detail::Line& line) {
    std::set<std::string> seen;
    for (const auto* c : line.body) {
      if (is_blank(c) || !seen.insert(c->text()).second) return false;
    }
    return !seen.empty();
  };

  std::vector<RelationshipDef> out;
  for (const auto& a : tables) {
    std::vector<const detail::Line*> keys;
    for (const auto& line : a.lines) {
      if (!detail::trim(line.header).empty() && is_key(line)) keys.push_back(&line);
    }
    if (keys.empty()) continue;
    for (const auto& b : tables) {
      if (&a == &b) continue;
      for (const auto& c : b.lines) {
        std::set<std::string> values;
        bool blanks = false;
        for (const auto* cell : c.body) {
          if (is_blank(cell)) {
            blanks = true;
          } else {
            values.insert(cell->text());
          }
        }
        if (values.empty()) continue;
        for (const auto* k : keys) {
          if (!synonyms.match(k->header, c.header)) continue;
          std::set<std::string> key_values;
          for (const auto* cell : k->body) key_values.insert(cell->text());
          if (!std::includes(key_values.begin(), key_values.end(), values.begin(), values.end())) continue;
          out.push_back({RelationKind::Association, b.block->id, a.block->id, values == key_values ? "1..*" : "0..*",
                         blanks ? "0..1" : "1", "key-containment", c.name()});
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), rel_less);
  return out;
}

ConceptualModel build_conceptual_model(const WorkbookSnapshot& wb, const SynonymDictionary& synonyms,
                                       const AbstractionOptions& options) {
  ConceptualModel model;
  std::vector<Block> all_blocks;
  for (const auto& sheet : wb.sheets) {
    auto blocks = detect_blocks(sheet);
    for (auto& b : blocks) detect_header(b, sheet);
    ConceptualModel part = abstract_classes(sheet, blocks);

    std::vector<ClassDef> enums;
    for (const auto& b : blocks) {
      for (auto& e : detect_enumerations(b, sheet, options)) {
        auto cls = std::find_if(part.classes.begin(), part.classes.end(), [&](const ClassDef& c) { return c.id == b.id; });
        for (auto& attr : cls->attributes) {
          if (attr.name == e.attribute) attr.enumeration = e.cls.id;
        }
        part.relationships.push_back({RelationKind::Association, b.id, e.cls.id, "*", "1", "repeated-values", e.attribute});
        enums.push_back(std::move(e.cls));
      }
    }
    model.classes.insert(model.classes.end(), part.classes.begin(), part.classes.end());
    model.classes.insert(model.classes.end(), enums.begin(), enums.end());
    model.relationships.insert(model.relationships.end(), part.relationships.begin(), part.relationships.end());
    model.diagnostics.insert(model.diagnostics.end(), part.diagnostics.begin(), part.diagnostics.end());
    all_blocks.insert(all_blocks.end(), blocks.begin(), blocks.end());
  }
  auto assoc = detect_associations(wb, all_blocks, synonyms);
  model.relationships.insert(model.relationships.end(), assoc.begin(), assoc.end());
  std::sort(model.relationships.begin(), model.relationships.end(), rel_less);
  return model;
}

}  // namespace exact::datamodel
