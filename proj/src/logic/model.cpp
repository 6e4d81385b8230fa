#include <algorithm>

#include "exact/logic/analyzer.hpp"
#include "exact/vba/parser.hpp"

namespace exact::logic {

std::vector<vba::ModuleAst> parse_modules(const WorkbookSnapshot& wb) {
  std::vector<vba::ModuleAst> out;
  out.reserve(wb.modules.size());
  for (const auto& m : wb.modules) out.push_back(vba::parse_module(m.name, m.kind, m.source));
  return out;
}

DependencyModel build_dependency_model(const WorkbookSnapshot& wb, const std::vector<vba::ModuleAst>& asts) {
  DependencyModel model;
  for (const auto& ast : asts) {
    model.diagnostics.insert(model.diagnostics.end(), ast.diagnostics.begin(), ast.diagnostics.end());
  }
  ProcedureIndex index = build_procedure_index(asts, model.diagnostics);
  model.procedures = index.procedures();
  std::sort(model.procedures.begin(), model.procedures.end(),
            [](const ProcedureInfo& a, const ProcedureInfo& b) { return a.id < b.id; });

  std::set<std::string> builtins;
  std::vector<CellAccess> accesses;
  for (const auto& ast : asts) {
    AccessContext ctx{&wb, ast.module_name, ast.kind, {}};
    if (const VbaModuleRef* ref = wb.find_module(ast.module_name)) ctx.bound_to = ref->bound_to;
    std::set<std::string> seen;
    for (const auto& proc : ast.procedures) {
      if (!seen.insert(to_lower(proc.name)).second) continue;
      auto edges = resolve_calls(proc, ast, index, &builtins);
      model.call_edges.insert(model.call_edges.end(), edges.begin(), edges.end());
      auto found = extract_cell_accesses(proc, ctx);
      accesses.insert(accesses.end(), found.begin(), found.end());
    }
  }
  std::stable_sort(model.call_edges.begin(), model.call_edges.end(), [](const CallEdge& a, const CallEdge& b) {
    if (!(a.caller == b.caller)) return a.caller < b.caller;
    return a.site_line < b.site_line;
  });

  model.event_bindings = detect_event_handlers(asts, wb, model.diagnostics);
  model.cell_groups = group_cell_accesses(accesses);
  model.builtins_used.assign(builtins.begin(), builtins.end());
  std::stable_sort(model.diagnostics.begin(), model.diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.where != b.where) return a.where < b.where;
    return a.line < b.line;
  });
  return model;
}

}  // namespace exact::logic
