#include <gtest/gtest.h>

#include <random>

#include "exact/datamodel/model.hpp"
#include "exact/report/report.hpp"
#include "support.hpp"

using namespace exact;
using namespace exact::datamodel;
using exact::testing::number_cell;
using exact::testing::text_cell;

namespace {

// One bold header "v" in A1 over the given column values (nullopt = blank).
SheetSnapshot column_sheet(const std::vector<std::optional<CellValue>>& values) {
  std::vector<CellSnapshot> cells = {text_cell(1, 1, "v", true), text_cell(1, 2, "id", true)};
  for (std::size_t i = 0; i < values.size(); ++i) {
    int row = static_cast<int>(i) + 2;
    cells.push_back(number_cell(row, 2, row));
    if (!values[i]) continue;
    CellSnapshot c;
    c.address = {std::nullopt, row, 1};
    c.value = *values[i];
    cells.push_back(c);
  }
  return SheetSnapshot("S", cells);
}

AttributeDef first_attribute(const SheetSnapshot& sheet) {
  auto blocks = detect_blocks(sheet);
  EXPECT_EQ(blocks.size(), 1u);
  detect_header(blocks.at(0), sheet);
  return infer_column_types(blocks.at(0), sheet).at(0);
}

std::vector<Enumeration> enumerations(const SheetSnapshot& sheet) {
  auto blocks = detect_blocks(sheet);
  detect_header(blocks.at(0), sheet);
  return detect_enumerations(blocks.at(0), sheet);
}

WorkbookSnapshot orders_and_customers(bool blank_order) {
  std::vector<CellSnapshot> customers = {text_cell(1, 1, "CustomerId", true), text_cell(1, 2, "Name", true)};
  const std::vector<std::string> ids = {"C1", "C2", "C3"};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    int r = static_cast<int>(i) + 2;
    customers.push_back(text_cell(r, 1, ids[i]));
    customers.push_back(text_cell(r, 2, "Customer " + ids[i]));
  }
  std::vector<CellSnapshot> orders = {text_cell(1, 1, "OrderNo", true), text_cell(1, 2, "CustomerId", true)};
  const std::vector<std::string> refs = {"C1", "C2", "C3", "C1"};
  for (std::size_t i = 0; i < refs.size(); ++i) {
    int r = static_cast<int>(i) + 2;
    orders.push_back(number_cell(r, 1, 100 + r));
    if (!(blank_order && i == 3)) orders.push_back(text_cell(r, 2, refs[i]));
  }
  WorkbookSnapshot wb;
  wb.name = "x";
  wb.sheets.emplace_back("Orders", orders);
  wb.sheets.emplace_back("Customers", customers);
  return wb;
}

std::vector<RelationshipDef> key_associations(const ConceptualModel& m) {
  std::vector<RelationshipDef> out;
  for (const auto& r : m.relationships) {
    if (r.rule_id == "key-containment") out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(Labels, Normalize) {
  EXPECT_EQ(normalize_label("  Unit   Price "), "unit price");
  EXPECT_EQ(normalize_label("\tA\nB"), "a b");
}

TEST(Synonyms, MatchWithinGroupOnly) {
  SynonymDictionary syn(std::vector<std::vector<std::string>>{{"Customer", "Client"}, {"Qty", "Quantity"}});
  EXPECT_TRUE(syn.match(" customer", "CLIENT"));
  EXPECT_TRUE(syn.match("Price", "price"));
  EXPECT_FALSE(syn.match("Customer", "Quantity"));
  EXPECT_FALSE(syn.match("", ""));
}

TEST(Synonyms, OverlappingGroupsRejected) {
  EXPECT_THROW(SynonymDictionary(std::vector<std::vector<std::string>>{{"a", "b"}, {"B", "c"}}), Error);
}

TEST(Synonyms, FromJson) {
  auto syn = SynonymDictionary::from_json(R"({"groups":[["customer","client"]]})");
  EXPECT_TRUE(syn.match("Client", "Customer"));
  EXPECT_THROW(SynonymDictionary::from_json(R"({"groups":[[1]]})"), Error);
  EXPECT_THROW(SynonymDictionary::from_json("[]"), Error);
}

TEST(Types, IntegerColumn) {
  auto a = first_attribute(column_sheet({1.0, 2.0, 3.0}));
  EXPECT_EQ(a.name, "v");
  EXPECT_EQ(a.type, AttrType::Integer);
  EXPECT_FALSE(a.optional);
}

TEST(Types, IntegerWidensToReal) { EXPECT_EQ(first_attribute(column_sheet({1.0, 2.5})).type, AttrType::Real); }

TEST(Types, NumberAndTextIsMixed) {
  EXPECT_EQ(first_attribute(column_sheet({1.0, std::string("x")})).type, AttrType::Mixed);
}

TEST(Types, BlanksMakeOptionalText) {
  auto a = first_attribute(column_sheet({std::string("a"), std::nullopt, std::string("b")}));
  EXPECT_EQ(a.type, AttrType::Text);
  EXPECT_TRUE(a.optional);
}

TEST(Types, BooleansAndDates) {
  EXPECT_EQ(first_attribute(column_sheet({true, false})).type, AttrType::Boolean);
  EXPECT_EQ(first_attribute(column_sheet({DateValue{"2024-01-02"}, DateValue{"2024-02-03"}})).type, AttrType::Date);
}

TEST(Enumerations, RepeatedTwoValues) {
  std::vector<std::optional<CellValue>> values;
  for (int i = 0; i < 10; ++i) values.push_back(std::string(i % 2 ? "green" : "red"));
  auto e = enumerations(column_sheet(values));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].attribute, "v");
  EXPECT_EQ(e[0].cls.stereotype, Stereotype::Enumeration);
  EXPECT_EQ(e[0].cls.literals, (std::vector<std::string>{"red", "green"}));
}

TEST(Enumerations, AllDistinctIsNotAnEnumeration) {
  std::vector<std::optional<CellValue>> values;
  for (int i = 0; i < 10; ++i) values.push_back(std::string("name") + std::to_string(i));
  EXPECT_TRUE(enumerations(column_sheet(values)).empty());
}

TEST(Enumerations, SingleLiteralIsNotAnEnumeration) {
  EXPECT_TRUE(enumerations(column_sheet({std::string("a"), std::string("a")})).empty());
}

TEST(Enumerations, ThresholdIsConfigurable) {
  std::vector<std::optional<CellValue>> values;
  for (int i = 0; i < 12; ++i) values.push_back(std::string(1, static_cast<char>('a' + i % 6)));
  auto sheet = column_sheet(values);
  auto blocks = detect_blocks(sheet);
  detect_header(blocks[0], sheet);
  EXPECT_TRUE(detect_enumerations(blocks[0], sheet).empty());
  EXPECT_EQ(detect_enumerations(blocks[0], sheet, {6, 0.2}).size(), 1u);
}

TEST(Associations, ForeignKeyContainment) {
  auto wb = orders_and_customers(false);
  auto assoc = key_associations(build_conceptual_model(wb));
  ASSERT_EQ(assoc.size(), 1u);
  EXPECT_EQ(assoc[0].source, "block:Orders:1");
  EXPECT_EQ(assoc[0].target, "block:Customers:1");
  EXPECT_EQ(assoc[0].source_card, "1..*");
  EXPECT_EQ(assoc[0].target_card, "1");
  EXPECT_EQ(assoc[0].label, "CustomerId");
}

TEST(Associations, BlankReferenceMakesTargetOptional) {
  auto wb = orders_and_customers(true);
  auto model = build_conceptual_model(wb);
  auto assoc = key_associations(model);
  ASSERT_EQ(assoc.size(), 1u);
  EXPECT_EQ(assoc[0].target_card, "0..1");
  EXPECT_EQ(assoc[0].source_card, "1..*");
  EXPECT_EQ(exact::testing::verify_association(wb, model, assoc[0]), "");
}

TEST(Associations, NoSelfAssociation) {
  auto wb = orders_and_customers(false);
  wb.sheets.erase(wb.sheets.begin());
  EXPECT_TRUE(key_associations(build_conceptual_model(wb)).empty());
}

TEST(Associations, SynonymHeadersMatch) {
  std::mt19937 rng(1);
  auto wb = exact::testing::random_two_block_workbook(rng, false);
  EXPECT_TRUE(key_associations(build_conceptual_model(wb)).empty());
  auto model = build_conceptual_model(wb, exact::testing::two_block_synonyms());
  auto assoc = key_associations(model);
  ASSERT_FALSE(assoc.empty());
  EXPECT_EQ(assoc[0].source, "block:Child:1");
}

TEST(AssociationsProperty, SoundAndMutationSensitive) {
  std::mt19937 rng(47);
  auto syn = exact::testing::two_block_synonyms();
  int emitted = 0;
  for (int trial = 0; trial < 100; ++trial) {
    bool broken = trial % 4 == 3;
    auto wb = exact::testing::random_two_block_workbook(rng, broken);
    auto model = build_conceptual_model(wb, syn);
    for (const auto& rel : key_associations(model)) {
      ++emitted;
      ASSERT_EQ(exact::testing::verify_association(wb, model, rel, syn), "") << "trial " << trial;
      ASSERT_FALSE(broken && rel.source == "block:Child:1");
      auto mutated = exact::testing::corrupt_source_value(wb, model, rel);
      ASSERT_TRUE(mutated);
      ASSERT_FALSE(exact::testing::has_association(build_conceptual_model(*mutated, syn), rel)) << "trial " << trial;
    }
  }
  EXPECT_GT(emitted, 50);
}

TEST(Model, Fig1ThreeClassesTwoCompositions) {
  auto wb = load_bundle(exact::testing::fixture_dir("fig1"));
  auto m = build_conceptual_model(wb);
  ASSERT_EQ(m.classes.size(), 3u);
  int sheets = 0, data = 0, compositions = 0;
  std::vector<std::string> names;
  for (const auto& c : m.classes) {
    sheets += c.stereotype == Stereotype::Sheet;
    data += c.stereotype == Stereotype::Data;
    for (const auto& a : c.attributes) names.push_back(a.name);
  }
  for (const auto& r : m.relationships) compositions += r.kind == RelationKind::Composition;
  EXPECT_EQ(sheets, 1);
  EXPECT_EQ(data, 2);
  EXPECT_EQ(compositions, 2);
  EXPECT_EQ(names, (std::vector<std::string>{"Code", "Description", "Unit Price", "Supplier", "City", "Phone"}));
}

TEST(Model, EmptyWorkbook) {
  WorkbookSnapshot wb;
  EXPECT_EQ(build_conceptual_model(wb), ConceptualModel{});
  EXPECT_EQ(build_conceptual_model(load_bundle(exact::testing::fixture_dir("empty"))), ConceptualModel{});
}

TEST(Model, IntegerMatrix) {
  auto m = build_conceptual_model(load_bundle(exact::testing::fixture_dir("matrix")));
  std::vector<const ClassDef*> data;
  for (const auto& c : m.classes) {
    if (c.stereotype == Stereotype::Data) data.push_back(&c);
  }
  ASSERT_EQ(data.size(), 1u);
  ASSERT_EQ(data[0]->attributes.size(), 3u);
  EXPECT_EQ(data[0]->attributes[0].name, "rowLabel");
  EXPECT_EQ(data[0]->attributes[1].name, "colLabel");
  EXPECT_EQ(data[0]->attributes[2].name, "value");
  EXPECT_EQ(data[0]->attributes[2].type, AttrType::Integer);
}

TEST(Model, Fig2OrdersReferenceCustomers) {
  auto m = build_conceptual_model(load_bundle(exact::testing::fixture_dir("fig2")));
  auto assoc = key_associations(m);
  ASSERT_EQ(assoc.size(), 1u);
  EXPECT_EQ(assoc[0].source, "block:Orders:1");
  EXPECT_EQ(assoc[0].target, "block:Customers:1");
}

TEST(ModelProperty, IntegrityMonotonicityDeterminism) {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    WorkbookSnapshot wb;
    wb.name = "r";
    int sheets = 1 + trial % 3;
    for (int s = 0; s < sheets; ++s) {
      auto sheet = exact::testing::random_sheet(rng, 12, 12, 0.5);
      wb.sheets.emplace_back("S" + std::to_string(s), sheet.cells());
    }
    auto m = build_conceptual_model(wb);
    ASSERT_EQ(report::canonical(report::to_json(m)), report::canonical(report::to_json(build_conceptual_model(wb))));
    std::map<std::string, int> data_per_sheet, comps_per_sheet;
    for (const auto& c : m.classes) {
      if (c.stereotype == Stereotype::Data) data_per_sheet[parse_a1(c.provenance).sheet]++;
    }
    for (const auto& r : m.relationships) {
      const auto* src = m.find(r.source);
      ASSERT_NE(src, nullptr);
      ASSERT_NE(m.find(r.target), nullptr);
      if (r.kind == RelationKind::Composition) {
        ASSERT_EQ(src->stereotype, Stereotype::Sheet);
        comps_per_sheet[src->name]++;
      }
    }
    ASSERT_EQ(data_per_sheet, comps_per_sheet);
  }
}
