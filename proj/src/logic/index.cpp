#include "exact/logic/analyzer.hpp"

namespace exact::logic {

std::optional<ProcedureId> parse_procedure_id(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 >= text.size()) return std::nullopt;
  return ProcedureId{std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

ProcedureIndex build_procedure_index(const std::vector<vba::ModuleAst>& modules, Diagnostics& diags) {
  ProcedureIndex index;
  for (const auto& m : modules) {
    index.modules_.emplace(to_lower(m.module_name), m.kind);
    for (const auto& p : m.procedures) {
      ProcedureInfo info{{m.module_name, p.name}, m.kind, p.kind, p.visibility, p.signature(), p.span};
      auto [it, inserted] = index.by_qualified_.try_emplace(info.id.key(), index.procedures_.size());
      if (!inserted) {
        diags.push_back({Severity::Warning, m.module_name, p.span.start_line,
                         "duplicate procedure '" + p.name + "'; the first definition is used"});
        continue;
      }
      index.by_name_.emplace(to_lower(p.name), index.procedures_.size());
      index.procedures_.push_back(std::move(info));
    }
  }
  return index;
}

const ProcedureInfo* ProcedureIndex::find(std::string_view module, std::string_view name) const {
  auto it = by_qualified_.find(to_lower(module) + "." + to_lower(name));
  return it == by_qualified_.end() ? nullptr : &procedures_[it->second];
}

std::vector<const ProcedureInfo*> ProcedureIndex::candidates(std::string_view name) const {
  std::vector<const ProcedureInfo*> out;
  auto [lo, hi] = by_name_.equal_range(to_lower(name));
  for (auto it = lo; it != hi; ++it) out.push_back(&procedures_[it->second]);
  return out;
}

std::vector<const ProcedureInfo*> ProcedureIndex::global_candidates(std::string_view name,
                                                                     std::string_view except_module) const {
  std::vector<const ProcedureInfo*> out;
  for (const auto* p : candidates(name)) {
    if (p->module_kind != ModuleKind::Standard || p->visibility != vba::Visibility::Public) continue;
    if (!except_module.empty() && iequals(p->id.module, except_module)) continue;
    out.push_back(p);
  }
  return out;
}

bool ProcedureIndex::has_module(std::string_view module) const { return modules_.count(to_lower(module)) > 0; }

std::optional<ModuleKind> ProcedureIndex::module_kind(std::string_view module) const {
  auto it = modules_.find(to_lower(module));
  if (it == modules_.end()) return std::nullopt;
  return it->second;
}

const ProcedureInfo* DependencyModel::find(const ProcedureId& id) const {
  for (const auto& p : procedures) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

}  // namespace exact::logic
