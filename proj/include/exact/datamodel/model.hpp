#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exact/workbook.hpp"

namespace exact::datamodel {

enum class HeaderOrientation { Row, Column, Matrix, None };

const char* to_string(HeaderOrientation o);
std::optional<HeaderOrientation> header_orientation_from_string(std::string_view s);

struct Block {
  std::string id;  // "block:<Sheet>:<i>", 1-based in (top, left) order
  std::string sheet;
  CellRect rect;
  HeaderOrientation orientation = HeaderOrientation::None;
  std::vector<CellSnapshot> header_cells;
  std::optional<CellRect> body;
  std::optional<std::string> title;  // text of a merged title row, excluded from header and body

  friend bool operator==(const Block&, const Block&) = default;
};

enum class AttrType { Integer, Real, Text, Boolean, Date, Mixed };

const char* to_string(AttrType t);
std::optional<AttrType> attr_type_from_string(std::string_view s);

struct AttributeDef {
  std::string name;
  AttrType type = AttrType::Text;
  bool optional = false;
  int source = 0;           // sheet column (row under column orientation)
  std::string enumeration;  // id of the enumeration class this attribute refers to

  friend bool operator==(const AttributeDef&, const AttributeDef&) = default;
};

enum class Stereotype { Sheet, Data, Enumeration };

const char* to_string(Stereotype s);
std::optional<Stereotype> stereotype_from_string(std::string_view s);

struct ClassDef {
  std::string id;
  std::string name;
  Stereotype stereotype = Stereotype::Data;
  std::vector<AttributeDef> attributes;
  std::vector<std::string> literals;  // enumerations only
  std::string provenance;             // A1 rect, or the sheet name for sheet classes

  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

enum class RelationKind { Composition, Association };

const char* to_string(RelationKind k);
std::optional<RelationKind> relation_kind_from_string(std::string_view s);

struct RelationshipDef {
  RelationKind kind = RelationKind::Composition;
  std::string source;
  std::string target;
  std::string source_card;
  std::string target_card;
  std::string rule_id;
  std::string label;  // attribute carrying the reference, for associations

  friend bool operator==(const RelationshipDef&, const RelationshipDef&) = default;
};

struct ConceptualModel {
  std::vector<ClassDef> classes;
  std::vector<RelationshipDef> relationships;
  Diagnostics diagnostics;

  const ClassDef* find(std::string_view id) const;

  friend bool operator==(const ConceptualModel&, const ConceptualModel&) = default;
};

/// Trim, lower-case, collapse internal whitespace.
std::string normalize_label(std::string_view s);

class SynonymDictionary {
 public:
  SynonymDictionary() = default;
  /// Throws Error on overlapping groups.
  explicit SynonymDictionary(std::vector<std::vector<std::string>> groups);

  /// `{"groups": [["customer", "client"], ...]}`; throws Error on bad shape.
  static SynonymDictionary from_json(std::string_view text);

  const std::vector<std::vector<std::string>>& groups() const { return groups_; }
  /// Labels match when equal after normalization or listed in one group.
  bool match(std::string_view a, std::string_view b) const;

 private:
  std::vector<std::vector<std::string>> groups_;  // normalized
  std::map<std::string, std::size_t> group_of_;
};

struct AbstractionOptions {
  int enum_min_cap = 5;        // an enumeration may have this many literals regardless of size
  double enum_row_ratio = 0.2;  // or up to this fraction of the body rows
};

/// 4-connected components of non-blank cells, bounding boxes merged until
/// disjoint, sorted by (top, left). Ids are assigned; headers are not.
std::vector<Block> detect_blocks(const SheetSnapshot& sheet);

/// Fills orientation, header cells, body, and title of `block`.
void detect_header(Block& block, const SheetSnapshot& sheet);

std::vector<AttributeDef> infer_column_types(const Block& block, const SheetSnapshot& sheet);

/// Sheet class, one data class per block, and the sheet→block compositions.
ConceptualModel abstract_classes(const SheetSnapshot& sheet, const std::vector<Block>& blocks);

struct Enumeration {
  ClassDef cls;
  std::string attribute;  // attribute of the block's class that takes the literals
};

std::vector<Enumeration> detect_enumerations(const Block& block, const SheetSnapshot& sheet,
                                             const AbstractionOptions& options = {});

/// Key/containment associations between row-oriented blocks, possibly on
/// different sheets of `wb`.
std::vector<RelationshipDef> detect_associations(const WorkbookSnapshot& wb, const std::vector<Block>& blocks,
                                                 const SynonymDictionary& synonyms);

ConceptualModel build_conceptual_model(const WorkbookSnapshot& wb, const SynonymDictionary& synonyms = {},
                                       const AbstractionOptions& options = {});

}  // namespace exact::datamodel
