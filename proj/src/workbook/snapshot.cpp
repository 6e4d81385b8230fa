#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "exact/workbook.hpp"

namespace exact {

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "error";
}

bool has_errors(const Diagnostics& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

std::string summarize(const Diagnostics& issues) {
  std::string out = "invalid bundle";
  for (const auto& d : issues) {
    out += "\n  " + d.where + ": " + d.message;
  }
  return out;
}

}  // namespace

BundleError::BundleError(Diagnostics issues) : Error(summarize(issues)), issues_(std::move(issues)) {}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string CellSnapshot::text() const {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(bool b) const { return b ? "TRUE" : "FALSE"; }
    std::string operator()(const DateValue& d) const { return d.iso; }
  };
  return std::visit(Visitor{}, value);
}

SheetSnapshot::SheetSnapshot(std::string name, std::vector<CellSnapshot> cells, std::vector<CellRect> merged)
    : name_(std::move(name)), cells_(std::move(cells)), merged_(std::move(merged)) {
  std::stable_sort(cells_.begin(), cells_.end(), [](const CellSnapshot& a, const CellSnapshot& b) {
    return std::pair(a.address.row, a.address.col) < std::pair(b.address.row, b.address.col);
  });
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    cells_[i].address.sheet = name_;
    index_.try_emplace({cells_[i].address.row, cells_[i].address.col}, i);
  }
  for (auto& m : merged_) m.sheet = name_;
}

const CellSnapshot* SheetSnapshot::at(int row, int col) const {
  auto it = index_.find({row, col});
  return it == index_.end() ? nullptr : &cells_[it->second];
}

bool SheetSnapshot::blank_at(int row, int col) const {
  const CellSnapshot* c = at(row, col);
  return c == nullptr || c->blank();
}

namespace {

constexpr std::pair<ControlType, const char*> kControlNames[] = {
    {ControlType::CommandButton, "CommandButton"}, {ControlType::TextBox, "TextBox"},
    {ControlType::Label, "Label"},                 {ControlType::ComboBox, "ComboBox"},
    {ControlType::ListBox, "ListBox"},             {ControlType::CheckBox, "CheckBox"},
    {ControlType::OptionButton, "OptionButton"},   {ControlType::Frame, "Frame"},
    {ControlType::Image, "Image"},                 {ControlType::SpinButton, "SpinButton"},
};

constexpr std::pair<ModuleKind, const char*> kModuleKindNames[] = {
    {ModuleKind::Standard, "standard"},
    {ModuleKind::Class, "class"},
    {ModuleKind::Document, "document"},
    {ModuleKind::Form, "form"},
};

template <typename T>
const T* find_named(const std::vector<T>& items, std::string_view name) {
  for (const auto& item : items) {
    if (iequals(item.name, name)) return &item;
  }
  return nullptr;
}

}  // namespace

const char* to_string(ControlType t) {
  for (auto [type, name] : kControlNames) {
    if (type == t) return name;
  }
  return "CommandButton";
}

std::optional<ControlType> control_type_from_string(std::string_view s) {
  for (auto [type, name] : kControlNames) {
    if (iequals(name, s)) return type;
  }
  return std::nullopt;
}

const char* to_string(ModuleKind k) {
  for (auto [kind, name] : kModuleKindNames) {
    if (kind == k) return name;
  }
  return "standard";
}

std::optional<ModuleKind> module_kind_from_string(std::string_view s) {
  for (auto [kind, name] : kModuleKindNames) {
    if (s == name) return kind;
  }
  return std::nullopt;
}

const ControlSnapshot* UserFormSnapshot::find_control(std::string_view n) const { return find_named(controls, n); }

const SheetSnapshot* WorkbookSnapshot::find_sheet(std::string_view n) const {
  for (const auto& s : sheets) {
    if (iequals(s.name(), n)) return &s;
  }
  return nullptr;
}

const UserFormSnapshot* WorkbookSnapshot::find_form(std::string_view n) const { return find_named(forms, n); }
const NamedRange* WorkbookSnapshot::find_named_range(std::string_view n) const { return find_named(named_ranges, n); }
const VbaModuleRef* WorkbookSnapshot::find_module(std::string_view n) const { return find_named(modules, n); }

Diagnostics validate(const WorkbookSnapshot& wb) {
  Diagnostics out;
  auto issue = [&](std::string where, std::string message) {
    out.push_back({Severity::Error, std::move(where), 0, std::move(message)});
  };

  std::set<std::string> seen;
  for (std::size_t i = 0; i < wb.sheets.size(); ++i) {
    const auto& sheet = wb.sheets[i];
    std::string where = "sheets[" + std::to_string(i) + "]";
    if (sheet.name().empty()) issue(where + ".name", "sheet name is empty");
    if (!seen.insert(to_lower(sheet.name())).second) issue(where + ".name", "duplicate sheet name '" + sheet.name() + "'");

    std::optional<CellRect> declared;
    std::set<std::pair<int, int>> addresses;
    for (const auto& cell : sheet.cells()) {
      const auto& a = cell.address;
      if (a.row < 1 || a.col < 1 || a.row > kMaxRow || a.col > kMaxCol) {
        issue(where + ".cells", "cell coordinates out of range in sheet '" + sheet.name() + "'");
        continue;
      }
      CellRect one{sheet.name(), a.row, a.col, a.row, a.col};
      if (!addresses.insert({a.row, a.col}).second) {
        issue(where + ".cells", "duplicate cell " + to_a1(one) + "");
      }
      declared = declared ? bounding_box(*declared, one) : one;
    }
    for (const auto& m : sheet.merged()) {
      if (!declared || !declared->contains(m)) {
        issue(where + ".merged", "merged range " + to_a1(m) + " lies outside the declared cells");
      }
    }
  }

  seen.clear();
  for (std::size_t i = 0; i < wb.forms.size(); ++i) {
    const auto& form = wb.forms[i];
    std::string where = "forms[" + std::to_string(i) + "]";
    if (form.name.empty()) issue(where + ".name", "form name is empty");
    if (!seen.insert(to_lower(form.name)).second) issue(where + ".name", "duplicate form name '" + form.name + "'");
    std::set<std::string> controls;
    for (std::size_t j = 0; j < form.controls.size(); ++j) {
      const auto& c = form.controls[j];
      std::string cw = where + ".controls[" + std::to_string(j) + "].name";
      if (c.name.empty()) issue(cw, "control name is empty");
      if (!controls.insert(to_lower(c.name)).second) {
        issue(cw, "duplicate control '" + c.name + "' in form '" + form.name + "'");
      }
    }
  }

  seen.clear();
  for (std::size_t i = 0; i < wb.named_ranges.size(); ++i) {
    const auto& nr = wb.named_ranges[i];
    std::string where = "namedRanges[" + std::to_string(i) + "]";
    if (nr.name.empty()) issue(where + ".name", "named range name is empty");
    if (!seen.insert(to_lower(nr.name)).second) issue(where + ".name", "duplicate named range '" + nr.name + "'");
    if (!wb.find_sheet(nr.target.sheet)) {
      issue(where + ".ref", "named range '" + nr.name + "' targets unknown sheet '" + nr.target.sheet + "'");
    }
  }

  seen.clear();
  bool workbook_bound = false;
  std::set<std::string> bound_sheets;
  for (std::size_t i = 0; i < wb.modules.size(); ++i) {
    const auto& m = wb.modules[i];
    std::string where = "modules[" + std::to_string(i) + "]";
    if (m.name.empty()) issue(where + ".name", "module name is empty");
    if (!seen.insert(to_lower(m.name)).second) issue(where + ".name", "duplicate module name '" + m.name + "'");
    using K = BoundTo::Kind;
    const auto& b = m.bound_to;
    std::string bw = where + ".boundTo";
    switch (m.kind) {
      case ModuleKind::Document:
        if (b.kind == K::Workbook) {
          if (workbook_bound) issue(bw, "module '" + m.name + "': second document module bound to the workbook");
          workbook_bound = true;
        } else if (b.kind == K::Sheet) {
          if (!wb.find_sheet(b.name)) {
            issue(bw, "module '" + m.name + "' is bound to unknown sheet '" + b.name + "'");
          } else if (!bound_sheets.insert(to_lower(b.name)).second) {
            issue(bw, "module '" + m.name + "': second document module bound to sheet '" + b.name + "'");
          }
        } else {
          issue(bw, "document module '" + m.name + "' must be bound to the workbook or a sheet");
        }
        break;
      case ModuleKind::Form:
        if (b.kind != K::Form) {
          issue(bw, "form module '" + m.name + "' must be bound to a form");
        } else if (!wb.find_form(b.name)) {
          issue(bw, "module '" + m.name + "' is bound to unknown form '" + b.name + "'");
        }
        break;
      case ModuleKind::Standard:
      case ModuleKind::Class:
        if (b.kind != K::None) issue(bw, "module '" + m.name + "' of kind " + to_string(m.kind) + " cannot be bound");
        break;
    }
  }
  return out;
}

}  // namespace exact
