#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exact/datamodel/model.hpp"
#include "exact/logic/analyzer.hpp"
#include "exact/workbook.hpp"

namespace exact::report {

using Json = nlohmann::json;

/// Generic tree node. `attrs` holds per-kind details (used range, signature, ...).
struct TreeNode {
  std::string id;
  std::string kind;  // workbook, worksheets, worksheet, vbproject, module, procedure, userforms, userform, control
  std::string name;
  Json attrs = Json::object();
  std::vector<TreeNode> children;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Root: workbook → {worksheets, vbproject, userforms}.
struct StructuralTree {
  TreeNode root;

  const TreeNode& worksheets() const { return root.children.at(0); }
  const TreeNode& vb_project() const { return root.children.at(1); }
  const TreeNode& user_forms() const { return root.children.at(2); }

  friend bool operator==(const StructuralTree&, const StructuralTree&) = default;
};

StructuralTree build_structure_tree(const WorkbookSnapshot& wb, const logic::DependencyModel& deps);

struct MetricsSummary {
  int worksheets = 0;
  int code_modules = 0;
  int procedures = 0;
  int user_forms = 0;
  int controls = 0;
  int event_handlers = 0;
  int call_edges = 0;
  int read_groups = 0;
  int write_groups = 0;

  friend bool operator==(const MetricsSummary&, const MetricsSummary&) = default;
};

MetricsSummary compute_metrics(const WorkbookSnapshot& wb, const logic::DependencyModel& deps);

struct GraphNode {
  std::string id;    // p:<proc>, g:<group>, e:<kind>:<source>.<event>, u:<name>
  std::string kind;  // procedure, group, event, unresolved
  std::string label;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string from;
  std::string to;
  std::string kind;  // calls, reads, writes, handles

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct DependencyGraph {
  std::vector<GraphNode> nodes;  // sorted by id
  std::vector<GraphEdge> edges;  // sorted

  friend bool operator==(const DependencyGraph&, const DependencyGraph&) = default;
};

std::string procedure_node_id(const logic::ProcedureId& id);
/// `Data!B2:B10 [w]`, or `<dynamic: reason> [r]`.
std::string group_label(const logic::CellGroup& g);

/// Whole-project graph, or the focus procedure with its direct neighbours and
/// only the edges touching it. Throws Error naming an unknown focus.
DependencyGraph dependency_graph(const logic::DependencyModel& deps,
                                 const std::optional<logic::ProcedureId>& focus = std::nullopt);

std::string to_dot(const DependencyGraph& g);
Json to_json(const DependencyGraph& g);
DependencyGraph graph_from_json(const Json& j);

std::string export_dependency_dot(const logic::DependencyModel& deps,
                                  const std::optional<logic::ProcedureId>& focus = std::nullopt);

enum class DiagramFormat { Dot, PlantUml };

std::string export_class_diagram(const datamodel::ConceptualModel& model, DiagramFormat format);

struct WorkbookSummary {
  std::string name;
  std::vector<std::string> sheets;
  std::vector<std::string> forms;
  std::vector<VbaModuleRef> modules;  // sources are not serialized
  std::vector<NamedRange> named_ranges;

  friend bool operator==(const WorkbookSummary&, const WorkbookSummary&) = default;
};

WorkbookSummary summarize(const WorkbookSnapshot& wb);

struct AnalysisBundle {
  WorkbookSummary workbook;
  StructuralTree structure;
  MetricsSummary metrics;
  logic::DependencyModel dependencies;
  datamodel::ConceptualModel conceptual_model;
  Diagnostics diagnostics;

  friend bool operator==(const AnalysisBundle&, const AnalysisBundle&) = default;
};

/// Runs the whole pipeline on a loaded snapshot.
AnalysisBundle analyze(const WorkbookSnapshot& wb, const datamodel::SynonymDictionary& synonyms = {});

/// Bundle for a workbook that failed validation: only diagnostics are filled.
AnalysisBundle failed_bundle(std::string workbook_name, Diagnostics diagnostics);

Json to_json(const StructuralTree& t);
Json to_json(const MetricsSummary& m);
Json to_json(const logic::DependencyModel& d);
Json to_json(const datamodel::ConceptualModel& m);
Json to_json(const Diagnostics& d);
Json to_json(const AnalysisBundle& b);

/// Inverse of to_json; throws Error on malformed input.
AnalysisBundle bundle_from_json(const Json& j);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical(const Json& j);
std::string export_bundle_json(const AnalysisBundle& b);

}  // namespace exact::report
