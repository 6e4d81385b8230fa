#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "exact/diagnostics.hpp"

namespace exact {

inline constexpr int kMaxRow = 1048576;
inline constexpr int kMaxCol = 16384;  // XFD

struct CellAddress {
  std::optional<std::string> sheet;
  int row = 1;
  int col = 1;

  friend bool operator==(const CellAddress&, const CellAddress&) = default;
};

/// Rectangular cell region. An empty `sheet` means the reference carried no
/// sheet qualifier.
struct CellRect {
  std::string sheet;
  int top = 1;
  int left = 1;
  int bottom = 1;
  int right = 1;

  bool contains(int row, int col) const {
    return row >= top && row <= bottom && col >= left && col <= right;
  }
  bool contains(const CellRect& o) const {
    return o.top >= top && o.bottom <= bottom && o.left >= left && o.right <= right;
  }
  bool overlaps(const CellRect& o) const {
    return top <= o.bottom && o.top <= bottom && left <= o.right && o.left <= right;
  }
  int rows() const { return bottom - top + 1; }
  int cols() const { return right - left + 1; }

  friend bool operator==(const CellRect&, const CellRect&) = default;
  friend auto operator<=>(const CellRect&, const CellRect&) = default;
};

/// Smallest rect covering both inputs; keeps the sheet of `a`.
CellRect bounding_box(const CellRect& a, const CellRect& b);

/// ISO-8601 date text, carried verbatim.
struct DateValue {
  std::string iso;
  friend bool operator==(const DateValue&, const DateValue&) = default;
};

using CellValue = std::variant<std::monostate, std::string, double, bool, DateValue>;

struct CellStyle {
  bool bold = false;
  std::optional<std::string> fill;  // "#RRGGBB", upper-case

  friend bool operator==(const CellStyle&, const CellStyle&) = default;
};

struct CellSnapshot {
  CellAddress address;
  CellValue value;
  std::optional<std::string> formula;
  CellStyle style;

  bool blank() const { return std::holds_alternative<std::monostate>(value) && !formula; }
  bool is_text() const { return std::holds_alternative<std::string>(value); }
  /// Display text of the value ("" for empty, canonical number spelling).
  std::string text() const;

  friend bool operator==(const CellSnapshot&, const CellSnapshot&) = default;
};

/// Canonical spelling of a number: integral values print without a fraction.
std::string format_number(double v);

class SheetSnapshot {
 public:
  SheetSnapshot() = default;
  SheetSnapshot(std::string name, std::vector<CellSnapshot> cells, std::vector<CellRect> merged = {});

  const std::string& name() const { return name_; }
  /// Cells in row-major order.
  const std::vector<CellSnapshot>& cells() const { return cells_; }
  const std::vector<CellRect>& merged() const { return merged_; }

  /// nullptr when no cell is recorded at (row, col).
  const CellSnapshot* at(int row, int col) const;
  bool blank_at(int row, int col) const;

 private:
  std::string name_;
  std::vector<CellSnapshot> cells_;
  std::vector<CellRect> merged_;
  std::map<std::pair<int, int>, std::size_t> index_;
};

enum class ControlType {
  CommandButton,
  TextBox,
  Label,
  ComboBox,
  ListBox,
  CheckBox,
  OptionButton,
  Frame,
  Image,
  SpinButton,
};

const char* to_string(ControlType t);
std::optional<ControlType> control_type_from_string(std::string_view s);

struct ControlSnapshot {
  std::string name;
  ControlType type = ControlType::CommandButton;
  std::optional<std::string> caption;

  friend bool operator==(const ControlSnapshot&, const ControlSnapshot&) = default;
};

struct UserFormSnapshot {
  std::string name;
  std::vector<ControlSnapshot> controls;

  const ControlSnapshot* find_control(std::string_view name) const;

  friend bool operator==(const UserFormSnapshot&, const UserFormSnapshot&) = default;
};

enum class ModuleKind { Standard, Class, Document, Form };

const char* to_string(ModuleKind k);
std::optional<ModuleKind> module_kind_from_string(std::string_view s);

struct BoundTo {
  enum class Kind { None, Workbook, Sheet, Form };
  Kind kind = Kind::None;
  std::string name;  // sheet or form name

  static BoundTo none() { return {}; }
  static BoundTo workbook() { return {Kind::Workbook, {}}; }
  static BoundTo sheet(std::string n) { return {Kind::Sheet, std::move(n)}; }
  static BoundTo form(std::string n) { return {Kind::Form, std::move(n)}; }

  friend bool operator==(const BoundTo&, const BoundTo&) = default;
};

struct VbaModuleRef {
  std::string name;
  ModuleKind kind = ModuleKind::Standard;
  BoundTo bound_to;
  std::string file;    // bundle-relative path
  std::string source;  // verbatim

  friend bool operator==(const VbaModuleRef&, const VbaModuleRef&) = default;
};

struct NamedRange {
  std::string name;
  CellRect target;

  friend bool operator==(const NamedRange&, const NamedRange&) = default;
};

struct WorkbookSnapshot {
  std::string name;
  std::vector<SheetSnapshot> sheets;
  std::vector<UserFormSnapshot> forms;
  std::vector<NamedRange> named_ranges;
  std::vector<VbaModuleRef> modules;

  // Lookups are case-insensitive, matching spreadsheet and VBA naming.
  const SheetSnapshot* find_sheet(std::string_view name) const;
  const UserFormSnapshot* find_form(std::string_view name) const;
  const NamedRange* find_named_range(std::string_view name) const;
  const VbaModuleRef* find_module(std::string_view name) const;
};

/// Checks every snapshot invariant; returns one diagnostic per violation.
Diagnostics validate(const WorkbookSnapshot& wb);

// A1 references ------------------------------------------------------------

/// Column letters to 1-based index ("A" = 1, "XFD" = 16384).
int column_index(std::string_view letters);
std::string column_letters(int col);

CellRect parse_a1(std::string_view ref);
std::string to_a1(const CellRect& rect);

/// Tightest rect around all non-blank cells; nullopt for a sheet with none.
std::optional<CellRect> used_range(const SheetSnapshot& sheet);

// Bundle ingestion -----------------------------------------------------------

/// Loads `<dir>/workbook.json` and the module sources it names. Throws
/// BundleError listing every problem found.
WorkbookSnapshot load_bundle(const std::filesystem::path& dir);

/// Same as load_bundle but from an in-memory manifest; module files are read
/// relative to `base`.
WorkbookSnapshot load_manifest(std::string_view manifest_json, const std::filesystem::path& base);

// Case-insensitive text helpers shared by the analyses.
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

}  // namespace exact
