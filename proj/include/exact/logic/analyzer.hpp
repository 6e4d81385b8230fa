#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "exact/vba/ast.hpp"
#include "exact/workbook.hpp"

namespace exact::logic {

/// `<Module>.<Name>`; comparisons ignore case.
struct ProcedureId {
  std::string module;
  std::string name;

  std::string str() const { return module + "." + name; }
  std::string key() const { return to_lower(str()); }

  friend bool operator==(const ProcedureId& a, const ProcedureId& b) {
    return iequals(a.module, b.module) && iequals(a.name, b.name);
  }
  friend bool operator<(const ProcedureId& a, const ProcedureId& b) { return a.key() < b.key(); }
};

/// Parses "Module.Name"; nullopt when there is no dot.
std::optional<ProcedureId> parse_procedure_id(std::string_view text);

struct ProcedureInfo {
  ProcedureId id;
  ModuleKind module_kind = ModuleKind::Standard;
  vba::ProcKind kind = vba::ProcKind::Sub;
  vba::Visibility visibility = vba::Visibility::Public;
  std::string signature;
  vba::Span span;

  friend bool operator==(const ProcedureInfo&, const ProcedureInfo&) = default;
};

class ProcedureIndex {
 public:
  const std::vector<ProcedureInfo>& procedures() const { return procedures_; }

  const ProcedureInfo* find(std::string_view module, std::string_view name) const;
  /// Every indexed procedure with this bare name, in any module.
  std::vector<const ProcedureInfo*> candidates(std::string_view name) const;
  /// Public procedures of standard modules with this name, excluding `except_module`.
  std::vector<const ProcedureInfo*> global_candidates(std::string_view name, std::string_view except_module = {}) const;
  /// More than one public standard-module procedure carries this name.
  bool ambiguous(std::string_view name) const { return global_candidates(name).size() > 1; }

  bool has_module(std::string_view module) const;
  std::optional<ModuleKind> module_kind(std::string_view module) const;

 private:
  friend ProcedureIndex build_procedure_index(const std::vector<vba::ModuleAst>&, Diagnostics&);

  std::vector<ProcedureInfo> procedures_;
  std::map<std::string, std::size_t> by_qualified_;           // lower "module.name"
  std::multimap<std::string, std::size_t> by_name_;           // lower name
  std::map<std::string, ModuleKind> modules_;                 // lower module name
};

/// Indexes every procedure; a duplicate within one module keeps the first and
/// adds a diagnostic.
ProcedureIndex build_procedure_index(const std::vector<vba::ModuleAst>& modules, Diagnostics& diags);

struct CallEdge {
  ProcedureId caller;
  std::optional<ProcedureId> callee;
  std::string unresolved_name;  // set iff callee is empty
  std::string reason;           // ambiguous, not-found, dynamic-receiver, private
  int site_line = 0;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

/// Names that never produce call edges (VBA runtime and host object model).
bool is_builtin(std::string_view name);
const std::set<std::string>& builtin_names();

/// Call edges of one procedure, one per call site. `builtins_used` collects the
/// canonical names of builtins called, when given.
std::vector<CallEdge> resolve_calls(const vba::ProcedureAst& proc, const vba::ModuleAst& owner,
                                    const ProcedureIndex& index, std::set<std::string>* builtins_used = nullptr);

enum class EventSource { Workbook, Sheet, Form, Control };

const char* to_string(EventSource s);
std::optional<EventSource> event_source_from_string(std::string_view s);

struct EventBinding {
  EventSource source_kind = EventSource::Workbook;
  std::string source_name;
  std::string event_name;
  ProcedureId handler;

  friend bool operator==(const EventBinding&, const EventBinding&) = default;
};

/// Binds `<Object>_<Event>` procedures of document and form modules to their
/// event sources. `modules` must be parsed from `wb.modules`.
std::vector<EventBinding> detect_event_handlers(const std::vector<vba::ModuleAst>& modules, const WorkbookSnapshot& wb,
                                                Diagnostics& diags);

enum class AccessKind { Read, Write };

const char* to_string(AccessKind k);

struct CellAccess {
  ProcedureId procedure;
  AccessKind kind = AccessKind::Read;
  std::optional<CellRect> target;  // resolved, with sheet
  std::string dynamic_reason;      // set iff target is empty
  int site_line = 0;

  bool dynamic() const { return !target.has_value(); }

  friend bool operator==(const CellAccess&, const CellAccess&) = default;
};

/// Where a module sits in the workbook, as needed to resolve cell references.
struct AccessContext {
  const WorkbookSnapshot* workbook = nullptr;
  std::string module;
  ModuleKind kind = ModuleKind::Standard;
  BoundTo bound_to;
};

std::vector<CellAccess> extract_cell_accesses(const vba::ProcedureAst& proc, const AccessContext& ctx);

struct CellGroup {
  std::string id;  // "<Module>.<Proc>/w1"
  ProcedureId procedure;
  std::string sheet;
  std::optional<CellRect> rect;  // empty for dynamic groups
  AccessKind kind = AccessKind::Read;
  std::vector<CellAccess> members;
  bool dynamic = false;

  friend bool operator==(const CellGroup&, const CellGroup&) = default;
};

/// Whether two rects touch or overlap on both axes.
bool adjacent(const CellRect& a, const CellRect& b);

/// Partitions resolved accesses per (procedure, sheet, kind) into
/// adjacency-connected components; each dynamic access gets its own group.
std::vector<CellGroup> group_cell_accesses(const std::vector<CellAccess>& accesses);

struct DependencyModel {
  std::vector<ProcedureInfo> procedures;
  std::vector<CallEdge> call_edges;
  std::vector<EventBinding> event_bindings;
  std::vector<CellGroup> cell_groups;
  std::vector<std::string> builtins_used;
  Diagnostics diagnostics;

  const ProcedureInfo* find(const ProcedureId& id) const;

  friend bool operator==(const DependencyModel&, const DependencyModel&) = default;
};

/// Parses every module of the workbook, in manifest order.
std::vector<vba::ModuleAst> parse_modules(const WorkbookSnapshot& wb);

DependencyModel build_dependency_model(const WorkbookSnapshot& wb, const std::vector<vba::ModuleAst>& asts);

}  // namespace exact::logic
