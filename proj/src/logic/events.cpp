#include <algorithm>
#include <array>
#include <set>

#include "exact/logic/analyzer.hpp"

namespace exact::logic {

namespace {

constexpr std::array kWorkbookEvents = {"Open", "BeforeClose", "BeforeSave", "SheetChange", "NewSheet", "Activate",
                                        "Deactivate"};
constexpr std::array kSheetEvents = {"Change", "SelectionChange", "Activate", "Deactivate", "Calculate",
                                     "BeforeDoubleClick", "BeforeRightClick"};
constexpr std::array kFormEvents = {"Initialize", "Activate", "Terminate", "Click"};
constexpr std::array kControlEvents = {"Click", "Change", "DblClick", "KeyDown", "KeyUp", "Enter", "Exit",
                                       "AfterUpdate"};

/// Canonical event spelling if `event` is in `table`.
template <std::size_t N>
std::optional<std::string> lookup(const std::array<const char*, N>& table, std::string_view event) {
  for (const char* e : table) {
    if (iequals(e, event)) return std::string(e);
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(EventSource s) {
  switch (s) {
    case EventSource::Workbook: return "workbook";
    case EventSource::Sheet: return "sheet";
    case EventSource::Form: return "form";
    case EventSource::Control: return "control";
  }
  return "workbook";
}

std::optional<EventSource> event_source_from_string(std::string_view s) {
  for (auto k : {EventSource::Workbook, EventSource::Sheet, EventSource::Form, EventSource::Control}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

std::vector<EventBinding> detect_event_handlers(const std::vector<vba::ModuleAst>& modules, const WorkbookSnapshot& wb,
                                                Diagnostics& diags) {
  std::vector<EventBinding> out;
  for (const auto& ast : modules) {
    const VbaModuleRef* ref = wb.find_module(ast.module_name);
    if (!ref) continue;
    if (ref->kind != ModuleKind::Document && ref->kind != ModuleKind::Form) continue;

    std::set<std::string> seen;
    for (const auto& proc : ast.procedures) {
      if (!seen.insert(to_lower(proc.name)).second) continue;  // duplicates are not indexed
      auto underscore = proc.name.rfind('_');
      if (underscore == std::string::npos || underscore == 0 || underscore + 1 == proc.name.size()) continue;
      std::string object = proc.name.substr(0, underscore);
      std::string event = proc.name.substr(underscore + 1);
      ProcedureId handler{ast.module_name, proc.name};
      const auto& b = ref->bound_to;

      if (ref->kind == ModuleKind::Document) {
        if (b.kind == BoundTo::Kind::Workbook && iequals(object, "Workbook")) {
          if (auto e = lookup(kWorkbookEvents, event)) out.push_back({EventSource::Workbook, wb.name, *e, handler});
        } else if (b.kind == BoundTo::Kind::Sheet && iequals(object, "Worksheet")) {
          const SheetSnapshot* sheet = wb.find_sheet(b.name);
          if (auto e = lookup(kSheetEvents, event)) {
            out.push_back({EventSource::Sheet, sheet ? sheet->name() : b.name, *e, handler});
          }
        }
        continue;
      }

      const UserFormSnapshot* form = wb.find_form(b.name);
      if (!form) continue;
      if (iequals(object, "UserForm")) {
        if (auto e = lookup(kFormEvents, event)) out.push_back({EventSource::Form, form->name, *e, handler});
        continue;
      }
      auto e = lookup(kControlEvents, event);
      if (!e) continue;
      if (const ControlSnapshot* control = form->find_control(object)) {
        out.push_back({EventSource::Control, control->name, *e, handler});
      } else {
        diags.push_back({Severity::Warning, ast.module_name, proc.span.start_line,
                         "'" + proc.name + "' looks like a " + *e + " handler but form '" + form->name +
                             "' has no control '" + object + "'"});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const EventBinding& a, const EventBinding& b) {
    if (!(a.handler == b.handler)) return a.handler < b.handler;
    return a.event_name < b.event_name;
  });
  return out;
}

}  // namespace exact::logic
