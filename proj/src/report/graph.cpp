#include <algorithm>
#include <set>
#include <tuple>

#include "exact/report/report.hpp"

namespace exact::report {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

const char* shape(const std::string& kind) {
  if (kind == "procedure") return "shape=box";
  if (kind == "group") return "shape=note";
  if (kind == "event") return "shape=ellipse";
  return "shape=box, style=dashed";
}

}  // namespace

std::string procedure_node_id(const logic::ProcedureId& id) { return "p:" + id.str(); }

std::string group_label(const logic::CellGroup& g) {
  std::string suffix = g.kind == logic::AccessKind::Read ? " [r]" : " [w]";
  if (g.dynamic || !g.rect) return "<dynamic: " + g.members.front().dynamic_reason + ">" + suffix;
  return to_a1(*g.rect) + suffix;
}

DependencyGraph dependency_graph(const logic::DependencyModel& deps, const std::optional<logic::ProcedureId>& focus) {
  std::map<std::string, GraphNode> nodes;
  std::set<std::tuple<std::string, std::string, std::string>> edges;

  for (const auto& p : deps.procedures) nodes[procedure_node_id(p.id)] = {procedure_node_id(p.id), "procedure", p.id.str()};
  // canonical spelling for ids that name a procedure with different case
  auto proc_node = [&](const logic::ProcedureId& id) {
    if (const auto* p = deps.find(id)) return procedure_node_id(p->id);
    return procedure_node_id(id);
  };

  for (const auto& e : deps.call_edges) {
    std::string to;
    if (e.callee) {
      to = proc_node(*e.callee);
    } else {
      to = "u:" + e.unresolved_name;
      nodes[to] = {to, "unresolved", e.unresolved_name + " (" + e.reason + ")"};
    }
    edges.insert({proc_node(e.caller), to, "calls"});
  }
  for (const auto& g : deps.cell_groups) {
    std::string id = "g:" + g.id;
    nodes[id] = {id, "group", group_label(g)};
    edges.insert({proc_node(g.procedure), id, g.kind == logic::AccessKind::Read ? "reads" : "writes"});
  }
  for (const auto& b : deps.event_bindings) {
    std::string id = std::string("e:") + logic::to_string(b.source_kind) + ":" + b.source_name + "." + b.event_name;
    nodes[id] = {id, "event", b.source_name + "." + b.event_name};
    edges.insert({id, proc_node(b.handler), "handles"});
  }

  DependencyGraph g;
  if (!focus) {
    for (auto& [id, n] : nodes) g.nodes.push_back(std::move(n));
    for (const auto& [from, to, kind] : edges) g.edges.push_back({from, to, kind});
    return g;
  }

  const auto* p = deps.find(*focus);
  if (!p) throw Error("unknown procedure '" + focus->str() + "'");
  std::string center = procedure_node_id(p->id);
  std::set<std::string> keep{center};
  for (const auto& [from, to, kind] : edges) {
    if (from != center && to != center) continue;
    g.edges.push_back({from, to, kind});
    keep.insert(from);
    keep.insert(to);
  }
  for (const auto& id : keep) g.nodes.push_back(nodes.at(id));
  return g;
}

std::string to_dot(const DependencyGraph& g) {
  std::string out = "digraph dependencies {\n  rankdir=LR;\n";
  for (const auto& n : g.nodes) out += "  " + quote(n.id) + " [label=" + quote(n.label) + ", " + shape(n.kind) + "];\n";
  for (const auto& e : g.edges) out += "  " + quote(e.from) + " -> " + quote(e.to) + " [label=" + quote(e.kind) + "];\n";
  return out + "}\n";
}

Json to_json(const DependencyGraph& g) {
  Json j = {{"nodes", Json::array()}, {"edges", Json::array()}};
  for (const auto& n : g.nodes) j["nodes"].push_back({{"id", n.id}, {"kind", n.kind}, {"label", n.label}});
  for (const auto& e : g.edges) j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"kind", e.kind}});
  return j;
}

DependencyGraph graph_from_json(const Json& j) {
  DependencyGraph g;
  try {
    for (const auto& n : j.at("nodes")) g.nodes.push_back({n.at("id"), n.at("kind"), n.at("label")});
    for (const auto& e : j.at("edges")) g.edges.push_back({e.at("from"), e.at("to"), e.at("kind")});
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed graph JSON: ") + e.what());
  }
  return g;
}

std::string export_dependency_dot(const logic::DependencyModel& deps, const std::optional<logic::ProcedureId>& focus) {
  return to_dot(dependency_graph(deps, focus));
}

}  // namespace exact::report
