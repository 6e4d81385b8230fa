#include <gtest/gtest.h>

#include "exact/logic/analyzer.hpp"
#include "exact/vba/parser.hpp"

using namespace exact;
using namespace exact::logic;

namespace {

WorkbookSnapshot book() {
  WorkbookSnapshot wb;
  wb.name = "Book.xlsm";
  wb.sheets.emplace_back("Data", std::vector<CellSnapshot>{});
  wb.sheets.emplace_back("S1", std::vector<CellSnapshot>{});
  wb.named_ranges.push_back({"Rate", CellRect{"Data", 1, 2, 1, 2}});
  return wb;
}

std::vector<CellAccess> accesses(const std::string& body, ModuleKind kind = ModuleKind::Standard,
                                 BoundTo bound = BoundTo::none()) {
  static const WorkbookSnapshot wb = book();
  auto ast = vba::parse_module("M", kind, "Sub P()\n" + body + "\nEnd Sub\n");
  EXPECT_TRUE(ast.diagnostics.empty()) << body;
  AccessContext ctx{&wb, "M", kind, std::move(bound)};
  return extract_cell_accesses(ast.procedures.at(0), ctx);
}

CellRect rect(std::string_view a1) { return parse_a1(a1); }

}  // namespace

TEST(Accesses, QualifiedRangeWrite) {
  auto a = accesses("Worksheets(\"Data\").Range(\"B2\").Value = 1");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].kind, AccessKind::Write);
  EXPECT_EQ(a[0].target, rect("Data!B2"));
  EXPECT_EQ(a[0].procedure, (ProcedureId{"M", "P"}));
  EXPECT_EQ(a[0].site_line, 2);
}

TEST(Accesses, UnqualifiedCellsInSheetModuleIsDynamic) {
  auto a = accesses("x = Cells(2, 3).Value", ModuleKind::Document, BoundTo::sheet("S1"));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].kind, AccessKind::Read);
  EXPECT_TRUE(a[0].dynamic());
  EXPECT_EQ(a[0].dynamic_reason, "unqualified");
}

TEST(Accesses, MeCellsInSheetModuleResolves) {
  auto a = accesses("x = Me.Cells(2,3).Value", ModuleKind::Document, BoundTo::sheet("S1"));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].kind, AccessKind::Read);
  EXPECT_EQ(a[0].target, rect("S1!C2"));
}

TEST(Accesses, VariableRangeIsNonLiteral) {
  auto a = accesses("Dim nm\nx = Worksheets(\"Data\").Range(nm).Value");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].dynamic_reason, "non-literal");
}

TEST(Accesses, TwoCornerRangeAndCellsLetters) {
  auto a = accesses(
      "Sheets(\"Data\").Range(\"A1\", \"C3\").Value = 0\n"
      "y = Sheets(\"Data\").Cells(4, \"AB\").Value\n"
      "Sheets(\"Data\").Range(Sheets(\"Data\").Cells(1, 1), Sheets(\"Data\").Cells(2, 2)).Formula = \"=1\"");
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].target, rect("Data!A1:C3"));
  EXPECT_EQ(a[1].target, rect("Data!AB4"));
  EXPECT_EQ(a[1].kind, AccessKind::Read);
  EXPECT_EQ(a[2].target, rect("Data!A1:B2"));
  EXPECT_EQ(a[2].kind, AccessKind::Write);
}

TEST(Accesses, WithBlockQualifiesLeadingDot) {
  auto a = accesses("With Worksheets(\"Data\")\n  .Range(\"A1:B2\").Value = 1\n  z = .Cells(3, 1).Value\nEnd With");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].target, rect("Data!A1:B2"));
  EXPECT_EQ(a[0].kind, AccessKind::Write);
  EXPECT_EQ(a[1].target, rect("Data!A3"));
  EXPECT_EQ(a[1].kind, AccessKind::Read);
}

TEST(Accesses, NamedRangeAndSheetQualifiedText) {
  auto a = accesses("x = Range(\"Rate\").Value\ny = Range(\"S1!D4\").Value");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].target, rect("Data!B1"));
  EXPECT_EQ(a[1].target, rect("S1!D4"));
}

TEST(Accesses, DynamicReasons) {
  auto a = accesses(
      "x = Range(\"A1\").Value\n"
      "x = Worksheets(\"Nope\").Range(\"A1\").Value\n"
      "x = ActiveSheet.Range(\"A1\").Value\n"
      "x = Worksheets(\"Data\").Range(\"A1,B5\").Value\n"
      "x = Worksheets(\"Data\").Range(\"NoSuchName\").Value");
  ASSERT_EQ(a.size(), 5u);
  std::vector<std::string> reasons;
  for (const auto& x : a) reasons.push_back(x.dynamic_reason);
  EXPECT_EQ(reasons, (std::vector<std::string>{"unqualified", "unknown-sheet", "active-sheet", "union", "unknown-name"}));
}

TEST(Accesses, WorkbookQualifiedSheet) {
  auto a = accesses("ThisWorkbook.Worksheets(\"Data\").Range(\"E5\").Value = 2");
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].target, rect("Data!E5"));
}

TEST(Accesses, NoAccessesWithoutCellReferences) { EXPECT_TRUE(accesses("x = 1\nMsgBox x").empty()); }

TEST(Accesses, SortedByLine) {
  auto a = accesses("Sheets(\"Data\").Range(\"A2\").Value = 1\nSheets(\"Data\").Range(\"A1\").Value = 1");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_LT(a[0].site_line, a[1].site_line);
  EXPECT_EQ(to_string(AccessKind::Read), std::string("read"));
  EXPECT_EQ(to_string(AccessKind::Write), std::string("write"));
}
