#include "exact/report/report.hpp"

namespace exact::report {

namespace {

using namespace exact::logic;
using namespace exact::datamodel;

template <typename T, typename F>
T parse_enum(const Json& j, F from_string, const char* what) {
  auto v = from_string(j.get<std::string>());
  if (!v) throw Error(std::string("unknown ") + what + " '" + j.get<std::string>() + "'");
  return *v;
}

ProcedureId proc_id(const Json& j) {
  auto id = parse_procedure_id(j.get<std::string>());
  if (!id) throw Error("malformed procedure id '" + j.get<std::string>() + "'");
  return *id;
}

Json rect_json(const std::optional<CellRect>& r) { return r ? Json(to_a1(*r)) : Json(nullptr); }

std::optional<CellRect> rect_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_a1(j.get<std::string>());
}

Json bound_json(const BoundTo& b) {
  switch (b.kind) {
    case BoundTo::Kind::None: return nullptr;
    case BoundTo::Kind::Workbook: return {{"workbook", true}};
    case BoundTo::Kind::Sheet: return {{"sheet", b.name}};
    case BoundTo::Kind::Form: return {{"form", b.name}};
  }
  return nullptr;
}

BoundTo bound_from(const Json& j) {
  if (j.is_null()) return BoundTo::none();
  if (j.contains("workbook")) return BoundTo::workbook();
  if (j.contains("sheet")) return BoundTo::sheet(j.at("sheet"));
  return BoundTo::form(j.at("form"));
}

std::optional<Severity> severity_from(std::string_view s) {
  for (auto v : {Severity::Info, Severity::Warning, Severity::Error}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

std::optional<vba::ProcKind> proc_kind_from(std::string_view s) {
  for (auto v : {vba::ProcKind::Sub, vba::ProcKind::Function}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

std::optional<vba::Visibility> visibility_from(std::string_view s) {
  for (auto v : {vba::Visibility::Public, vba::Visibility::Private}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

std::optional<AccessKind> access_kind_from(std::string_view s) {
  for (auto v : {AccessKind::Read, AccessKind::Write}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

Json node_json(const TreeNode& n) {
  Json j = {{"id", n.id}, {"kind", n.kind}, {"name", n.name}, {"attrs", n.attrs},
            {"count", n.children.size()}, {"children", Json::array()}};
  for (const auto& c : n.children) j["children"].push_back(node_json(c));
  return j;
}

TreeNode node_from(const Json& j) {
  TreeNode n{j.at("id"), j.at("kind"), j.at("name"), j.at("attrs"), {}};
  for (const auto& c : j.at("children")) n.children.push_back(node_from(c));
  return n;
}

Diagnostics diagnostics_from(const Json& j) {
  Diagnostics out;
  for (const auto& d : j) {
    out.push_back({parse_enum<Severity>(d.at("severity"), severity_from, "severity"), d.at("where"), d.at("line"),
                   d.at("message")});
  }
  return out;
}

Json summary_json(const WorkbookSummary& s) {
  Json j = {{"name", s.name}, {"sheets", s.sheets}, {"forms", s.forms}, {"modules", Json::array()},
            {"namedRanges", Json::array()}};
  for (const auto& m : s.modules) {
    j["modules"].push_back(
        {{"name", m.name}, {"kind", to_string(m.kind)}, {"boundTo", bound_json(m.bound_to)}, {"file", m.file}});
  }
  for (const auto& n : s.named_ranges) j["namedRanges"].push_back({{"name", n.name}, {"target", to_a1(n.target)}});
  return j;
}

WorkbookSummary summary_from(const Json& j) {
  WorkbookSummary s;
  s.name = j.at("name");
  s.sheets = j.at("sheets").get<std::vector<std::string>>();
  s.forms = j.at("forms").get<std::vector<std::string>>();
  for (const auto& m : j.at("modules")) {
    VbaModuleRef ref;
    ref.name = m.at("name");
    ref.kind = parse_enum<ModuleKind>(m.at("kind"), module_kind_from_string, "module kind");
    ref.bound_to = bound_from(m.at("boundTo"));
    ref.file = m.at("file");
    s.modules.push_back(std::move(ref));
  }
  for (const auto& n : j.at("namedRanges")) s.named_ranges.push_back({n.at("name"), parse_a1(n.at("target").get<std::string>())});
  return s;
}

MetricsSummary metrics_from(const Json& j) {
  MetricsSummary m;
  m.worksheets = j.at("worksheets");
  m.code_modules = j.at("codeModules");
  m.procedures = j.at("procedures");
  m.user_forms = j.at("userForms");
  m.controls = j.at("controls");
  m.event_handlers = j.at("eventHandlers");
  m.call_edges = j.at("callEdges");
  m.read_groups = j.at("readGroups");
  m.write_groups = j.at("writeGroups");
  return m;
}

DependencyModel dependencies_from(const Json& j) {
  DependencyModel d;
  for (const auto& p : j.at("procedures")) {
    ProcedureInfo info;
    info.id = {p.at("module"), p.at("name")};
    info.module_kind = parse_enum<ModuleKind>(p.at("moduleKind"), module_kind_from_string, "module kind");
    info.kind = parse_enum<vba::ProcKind>(p.at("kind"), proc_kind_from, "procedure kind");
    info.visibility = parse_enum<vba::Visibility>(p.at("visibility"), visibility_from, "visibility");
    info.signature = p.at("signature");
    info.span = {p.at("startLine"), p.at("endLine")};
    d.procedures.push_back(std::move(info));
  }
  for (const auto& e : j.at("callEdges")) {
    CallEdge edge;
    edge.caller = proc_id(e.at("caller"));
    if (!e.at("callee").is_null()) edge.callee = proc_id(e.at("callee"));
    edge.unresolved_name = e.at("unresolvedName");
    edge.reason = e.at("reason");
    edge.site_line = e.at("line");
    d.call_edges.push_back(std::move(edge));
  }
  for (const auto& b : j.at("eventBindings")) {
    d.event_bindings.push_back({parse_enum<EventSource>(b.at("sourceKind"), event_source_from_string, "event source"),
                                b.at("sourceName"), b.at("eventName"), proc_id(b.at("handler"))});
  }
  for (const auto& g : j.at("cellGroups")) {
    CellGroup group;
    group.id = g.at("id");
    group.procedure = proc_id(g.at("procedure"));
    group.sheet = g.at("sheet");
    group.rect = rect_from(g.at("rect"));
    group.kind = parse_enum<AccessKind>(g.at("kind"), access_kind_from, "access kind");
    group.dynamic = g.at("dynamic");
    for (const auto& m : g.at("members")) {
      group.members.push_back({group.procedure, group.kind, rect_from(m.at("target")), m.at("dynamicReason"), m.at("line")});
    }
    d.cell_groups.push_back(std::move(group));
  }
  d.builtins_used = j.at("builtinsUsed").get<std::vector<std::string>>();
  d.diagnostics = diagnostics_from(j.at("diagnostics"));
  return d;
}

ConceptualModel model_from(const Json& j) {
  ConceptualModel m;
  for (const auto& c : j.at("classes")) {
    ClassDef cls;
    cls.id = c.at("id");
    cls.name = c.at("name");
    cls.stereotype = parse_enum<Stereotype>(c.at("stereotype"), stereotype_from_string, "stereotype");
    cls.provenance = c.at("provenance");
    cls.literals = c.at("literals").get<std::vector<std::string>>();
    for (const auto& a : c.at("attributes")) {
      AttributeDef attr;
      attr.name = a.at("name");
      attr.type = parse_enum<AttrType>(a.at("type"), attr_type_from_string, "attribute type");
      attr.optional = a.at("optional");
      attr.source = a.at("source");
      if (!a.at("enumeration").is_null()) attr.enumeration = a.at("enumeration");
      cls.attributes.push_back(std::move(attr));
    }
    m.classes.push_back(std::move(cls));
  }
  for (const auto& r : j.at("relationships")) {
    m.relationships.push_back({parse_enum<RelationKind>(r.at("kind"), relation_kind_from_string, "relationship kind"),
                               r.at("source"), r.at("target"), r.at("sourceCard"), r.at("targetCard"), r.at("ruleId"),
                               r.at("label")});
  }
  m.diagnostics = diagnostics_from(j.at("diagnostics"));
  return m;
}

}  // namespace

Json to_json(const Diagnostics& diags) {
  Json j = Json::array();
  for (const auto& d : diags) {
    j.push_back({{"severity", to_string(d.severity)}, {"where", d.where}, {"line", d.line}, {"message", d.message}});
  }
  return j;
}

Json to_json(const StructuralTree& t) { return node_json(t.root); }

Json to_json(const MetricsSummary& m) {
  return {{"worksheets", m.worksheets},       {"codeModules", m.code_modules}, {"procedures", m.procedures},
          {"userForms", m.user_forms},        {"controls", m.controls},        {"eventHandlers", m.event_handlers},
          {"callEdges", m.call_edges},        {"readGroups", m.read_groups},   {"writeGroups", m.write_groups}};
}

Json to_json(const DependencyModel& d) {
  Json j = {{"procedures", Json::array()},    {"callEdges", Json::array()}, {"eventBindings", Json::array()},
            {"cellGroups", Json::array()},    {"builtinsUsed", d.builtins_used},
            {"diagnostics", to_json(d.diagnostics)}};
  for (const auto& p : d.procedures) {
    j["procedures"].push_back({{"id", p.id.str()},
                               {"module", p.id.module},
                               {"name", p.id.name},
                               {"moduleKind", to_string(p.module_kind)},
                               {"kind", to_string(p.kind)},
                               {"visibility", to_string(p.visibility)},
                               {"signature", p.signature},
                               {"startLine", p.span.start_line},
                               {"endLine", p.span.end_line}});
  }
  for (const auto& e : d.call_edges) {
    j["callEdges"].push_back({{"caller", e.caller.str()},
                              {"callee", e.callee ? Json(e.callee->str()) : Json(nullptr)},
                              {"unresolvedName", e.unresolved_name},
                              {"reason", e.reason},
                              {"line", e.site_line}});
  }
  for (const auto& b : d.event_bindings) {
    j["eventBindings"].push_back({{"sourceKind", to_string(b.source_kind)},
                                  {"sourceName", b.source_name},
                                  {"eventName", b.event_name},
                                  {"handler", b.handler.str()}});
  }
  for (const auto& g : d.cell_groups) {
    Json members = Json::array();
    for (const auto& m : g.members) {
      members.push_back({{"target", rect_json(m.target)}, {"dynamicReason", m.dynamic_reason}, {"line", m.site_line}});
    }
    j["cellGroups"].push_back({{"id", g.id},
                               {"procedure", g.procedure.str()},
                               {"sheet", g.sheet},
                               {"rect", rect_json(g.rect)},
                               {"label", group_label(g)},
                               {"kind", to_string(g.kind)},
                               {"dynamic", g.dynamic},
                               {"members", members}});
  }
  return j;
}

Json to_json(const ConceptualModel& m) {
  Json j = {{"classes", Json::array()}, {"relationships", Json::array()}, {"diagnostics", to_json(m.diagnostics)}};
  for (const auto& c : m.classes) {
    Json attrs = Json::array();
    for (const auto& a : c.attributes) {
      attrs.push_back({{"name", a.name},
                       {"type", to_string(a.type)},
                       {"optional", a.optional},
                       {"source", a.source},
                       {"enumeration", a.enumeration.empty() ? Json(nullptr) : Json(a.enumeration)}});
    }
    j["classes"].push_back({{"id", c.id},
                            {"name", c.name},
                            {"stereotype", to_string(c.stereotype)},
                            {"provenance", c.provenance},
                            {"attributes", attrs},
                            {"literals", c.literals}});
  }
  for (const auto& r : m.relationships) {
    j["relationships"].push_back({{"kind", to_string(r.kind)},
                                  {"source", r.source},
                                  {"target", r.target},
                                  {"sourceCard", r.source_card},
                                  {"targetCard", r.target_card},
                                  {"ruleId", r.rule_id},
                                  {"label", r.label}});
  }
  return j;
}

Json to_json(const AnalysisBundle& b) {
  return {{"workbook", summary_json(b.workbook)},      {"structure", to_json(b.structure)},
          {"metrics", to_json(b.metrics)},             {"dependencies", to_json(b.dependencies)},
          {"conceptualModel", to_json(b.conceptual_model)}, {"diagnostics", to_json(b.diagnostics)}};
}

AnalysisBundle bundle_from_json(const Json& j) {
  try {
    AnalysisBundle b;
    b.workbook = summary_from(j.at("workbook"));
    b.structure.root = node_from(j.at("structure"));
    b.metrics = metrics_from(j.at("metrics"));
    b.dependencies = dependencies_from(j.at("dependencies"));
    b.conceptual_model = model_from(j.at("conceptualModel"));
    b.diagnostics = diagnostics_from(j.at("diagnostics"));
    return b;
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed analysis bundle: ") + e.what());
  } catch (const ReferenceError& e) {
    throw Error(std::string("malformed analysis bundle: ") + e.what());
  }
}

std::string canonical(const Json& j) { return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n"; }

std::string export_bundle_json(const AnalysisBundle& b) { return canonical(to_json(b)); }

}  // namespace exact::report
