#pragma once

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "exact/datamodel/model.hpp"
#include "exact/logic/analyzer.hpp"
#include "exact/workbook.hpp"

namespace exact::testing {

std::filesystem::path fixture_dir(const std::string& name);
std::string read_text(const std::filesystem::path& path);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

/// Builds a sheet from rows of text: '.' or ' ' is blank, a digit run is a
/// number, anything else a string. `bold_rows`/`bold_cols` are 1-based.
SheetSnapshot grid_sheet(const std::string& name, const std::vector<std::string>& rows,
                         const std::set<int>& bold_rows = {}, const std::set<int>& bold_cols = {});

CellSnapshot text_cell(int row, int col, std::string text, bool bold = false);
CellSnapshot number_cell(int row, int col, double v, bool bold = false);

/// Random sheet of `rows`×`cols` with each cell blank with probability `blank_density`.
SheetSnapshot random_sheet(std::mt19937& rng, int rows, int cols, double blank_density);

/// Flood fill over 4-neighbours, then merge intersecting bounding boxes until
/// none intersect; sorted by (top, left).
std::vector<CellRect> oracle_blocks(const SheetSnapshot& sheet);

/// Random accesses on a `n`×`n` grid of one sheet, some spanning small rects.
std::vector<logic::CellAccess> random_accesses(std::mt19937& rng, int count, int n,
                                               const std::vector<std::string>& procs,
                                               const std::vector<std::string>& sheets);

/// Groups as sets of member indices into `accesses`, by quick-find union over
/// a brute-force adjacency test.
std::set<std::set<std::size_t>> oracle_groups(const std::vector<logic::CellAccess>& accesses);

/// The same partition read back from a grouping result.
std::set<std::set<std::size_t>> partition_of(const std::vector<logic::CellGroup>& groups,
                                             const std::vector<logic::CellAccess>& accesses);

/// Re-checks one key-containment association against raw cells. Returns an
/// empty string when sound, else what failed.
std::string verify_association(const WorkbookSnapshot& wb, const datamodel::ConceptualModel& model,
                               const datamodel::RelationshipDef& rel, const datamodel::SynonymDictionary& syn = {});

/// Copy of `wb` with the first non-blank value of the association's source
/// column replaced by a value no key column holds; nullopt if none is found.
std::optional<WorkbookSnapshot> corrupt_source_value(const WorkbookSnapshot& wb, const datamodel::ConceptualModel& model,
                                                     const datamodel::RelationshipDef& rel);

/// Whether `model` still has an association with the same ends and label.
bool has_association(const datamodel::ConceptualModel& model, const datamodel::RelationshipDef& rel);

/// Two sheets "Parent" and "Child", each one bold-headed row block. The child
/// column "ParentId" draws from the parent key "Id", possibly with blanks and,
/// when `break_containment`, one foreign value.
WorkbookSnapshot random_two_block_workbook(std::mt19937& rng, bool break_containment);
/// Copy of `wb` with the cell at (`row`, `col`) of `sheet` replaced by `text`.
WorkbookSnapshot with_cell(const WorkbookSnapshot& wb, const std::string& sheet, int row, int col, std::string text);

/// Dictionary pairing "Id" with "ParentId".
datamodel::SynonymDictionary two_block_synonyms();

}  // namespace exact::testing
