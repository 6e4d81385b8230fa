#include <algorithm>

#include "exact/report/report.hpp"

namespace exact::report {

namespace {

Json bound_to_json(const BoundTo& b) {
  switch (b.kind) {
    case BoundTo::Kind::None: return nullptr;
    case BoundTo::Kind::Workbook: return "workbook";
    case BoundTo::Kind::Sheet: return "sheet:" + b.name;
    case BoundTo::Kind::Form: return "form:" + b.name;
  }
  return nullptr;
}

bool name_less(const std::string& a, const std::string& b) {
  auto la = to_lower(a), lb = to_lower(b);
  return la != lb ? la < lb : a < b;
}

TreeNode empty_root(const std::string& workbook) {
  TreeNode root{"workbook", "workbook", workbook, Json::object(), {}};
  root.children.push_back({"worksheets", "worksheets", "Worksheets", Json::object(), {}});
  root.children.push_back({"vbproject", "vbproject", "VBAProject", Json::object(), {}});
  root.children.push_back({"userforms", "userforms", "UserForms", Json::object(), {}});
  return root;
}

}  // namespace

StructuralTree build_structure_tree(const WorkbookSnapshot& wb, const logic::DependencyModel& deps) {
  StructuralTree tree{empty_root(wb.name)};
  auto& sheets = tree.root.children[0];
  auto& project = tree.root.children[1];
  auto& forms = tree.root.children[2];

  for (const auto& s : wb.sheets) {
    TreeNode n{"sheet:" + s.name(), "worksheet", s.name(), Json::object(), {}};
    auto used = used_range(s);
    n.attrs["usedRange"] = used ? Json(to_a1(*used)) : Json(nullptr);
    n.attrs["blocks"] = datamodel::detect_blocks(s).size();
    sheets.children.push_back(std::move(n));
  }

  std::vector<const VbaModuleRef*> modules;
  for (const auto& m : wb.modules) modules.push_back(&m);
  std::sort(modules.begin(), modules.end(), [](auto* a, auto* b) { return name_less(a->name, b->name); });
  for (const auto* m : modules) {
    TreeNode n{"module:" + m->name, "module", m->name, Json::object(), {}};
    n.attrs["kind"] = to_string(m->kind);
    n.attrs["boundTo"] = bound_to_json(m->bound_to);
    n.attrs["file"] = m->file;
    std::vector<const logic::ProcedureInfo*> procs;
    for (const auto& p : deps.procedures) {
      if (iequals(p.id.module, m->name)) procs.push_back(&p);
    }
    std::sort(procs.begin(), procs.end(), [](auto* a, auto* b) { return name_less(a->id.name, b->id.name); });
    for (const auto* p : procs) {
      TreeNode pn{"proc:" + p->id.str(), "procedure", p->id.name, Json::object(), {}};
      pn.attrs["kind"] = to_string(p->kind);
      pn.attrs["visibility"] = to_string(p->visibility);
      pn.attrs["signature"] = p->signature;
      pn.attrs["startLine"] = p->span.start_line;
      pn.attrs["endLine"] = p->span.end_line;
      n.children.push_back(std::move(pn));
    }
    project.children.push_back(std::move(n));
  }

  std::vector<const UserFormSnapshot*> fs;
  for (const auto& f : wb.forms) fs.push_back(&f);
  std::sort(fs.begin(), fs.end(), [](auto* a, auto* b) { return name_less(a->name, b->name); });
  for (const auto* f : fs) {
    TreeNode n{"form:" + f->name, "userform", f->name, Json::object(), {}};
    std::vector<const ControlSnapshot*> controls;
    for (const auto& c : f->controls) controls.push_back(&c);
    std::sort(controls.begin(), controls.end(), [](auto* a, auto* b) { return name_less(a->name, b->name); });
    for (const auto* c : controls) {
      TreeNode cn{"control:" + f->name + "." + c->name, "control", c->name, Json::object(), {}};
      cn.attrs["type"] = to_string(c->type);
      cn.attrs["caption"] = c->caption ? Json(*c->caption) : Json(nullptr);
      n.children.push_back(std::move(cn));
    }
    forms.children.push_back(std::move(n));
  }
  return tree;
}

MetricsSummary compute_metrics(const WorkbookSnapshot& wb, const logic::DependencyModel& deps) {
  MetricsSummary m;
  m.worksheets = static_cast<int>(wb.sheets.size());
  m.code_modules = static_cast<int>(wb.modules.size());
  m.procedures = static_cast<int>(deps.procedures.size());
  m.user_forms = static_cast<int>(wb.forms.size());
  for (const auto& f : wb.forms) m.controls += static_cast<int>(f.controls.size());
  m.event_handlers = static_cast<int>(deps.event_bindings.size());
  m.call_edges = static_cast<int>(deps.call_edges.size());
  for (const auto& g : deps.cell_groups) ++(g.kind == logic::AccessKind::Read ? m.read_groups : m.write_groups);
  return m;
}

WorkbookSummary summarize(const WorkbookSnapshot& wb) {
  WorkbookSummary s;
  s.name = wb.name;
  for (const auto& sheet : wb.sheets) s.sheets.push_back(sheet.name());
  for (const auto& f : wb.forms) s.forms.push_back(f.name);
  for (auto m : wb.modules) {
    m.source.clear();
    s.modules.push_back(std::move(m));
  }
  s.named_ranges = wb.named_ranges;
  return s;
}

namespace {

void sort_diagnostics(Diagnostics& d) {
  std::stable_sort(d.begin(), d.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.where != b.where) return a.where < b.where;
    return a.line < b.line;
  });
}

}  // namespace

AnalysisBundle analyze(const WorkbookSnapshot& wb, const datamodel::SynonymDictionary& synonyms) {
  AnalysisBundle b;
  b.workbook = summarize(wb);
  auto asts = logic::parse_modules(wb);
  b.dependencies = logic::build_dependency_model(wb, asts);
  b.conceptual_model = datamodel::build_conceptual_model(wb, synonyms);
  b.structure = build_structure_tree(wb, b.dependencies);
  b.metrics = compute_metrics(wb, b.dependencies);
  b.diagnostics = validate(wb);
  b.diagnostics.insert(b.diagnostics.end(), b.dependencies.diagnostics.begin(), b.dependencies.diagnostics.end());
  b.diagnostics.insert(b.diagnostics.end(), b.conceptual_model.diagnostics.begin(),
                       b.conceptual_model.diagnostics.end());
  sort_diagnostics(b.diagnostics);
  return b;
}

AnalysisBundle failed_bundle(std::string workbook_name, Diagnostics diagnostics) {
  AnalysisBundle b;
  b.workbook.name = workbook_name;
  b.structure.root = empty_root(workbook_name);
  b.diagnostics = std::move(diagnostics);
  sort_diagnostics(b.diagnostics);
  return b;
}

}  // namespace exact::report
