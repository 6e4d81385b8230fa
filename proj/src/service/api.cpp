#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "exact/service/service.hpp"

namespace exact::service {

namespace {

Response json_response(int status, const Json& body) { return {status, "application/json", report::canonical(body)}; }

Response error_response(int status, const std::string& message) { return json_response(status, {{"error", message}}); }

}  // namespace

XrefResult xref(const report::AnalysisBundle& bundle, std::string_view cell_ref) {
  CellRect rect = parse_a1(cell_ref);
  if (rect.sheet.empty()) throw ReferenceError("cell reference '" + std::string(cell_ref) + "' needs a sheet");
  if (rect.rows() != 1 || rect.cols() != 1) {
    throw ReferenceError("'" + std::string(cell_ref) + "' is a range; give a single cell");
  }
  auto sheet = std::find_if(bundle.workbook.sheets.begin(), bundle.workbook.sheets.end(),
                            [&](const std::string& s) { return iequals(s, rect.sheet); });
  if (sheet == bundle.workbook.sheets.end()) throw Error("unknown sheet '" + rect.sheet + "'");

  XrefResult r;
  r.query = {*sheet, rect.top, rect.left};
  std::set<logic::ProcedureId> readers, writers;
  for (const auto& g : bundle.dependencies.cell_groups) {
    if (!g.rect || !iequals(g.rect->sheet, *sheet) || !g.rect->contains(rect.top, rect.left)) continue;
    r.groups.push_back(g.id);
    (g.kind == logic::AccessKind::Read ? readers : writers).insert(g.procedure);
  }
  r.readers.assign(readers.begin(), readers.end());
  r.writers.assign(writers.begin(), writers.end());
  return r;
}

Json to_json(const XrefResult& r) {
  Json j = {{"query", to_a1(CellRect{*r.query.sheet, r.query.row, r.query.col, r.query.row, r.query.col})},
            {"readers", Json::array()},
            {"writers", Json::array()},
            {"groups", r.groups}};
  for (const auto& p : r.readers) j["readers"].push_back(p.str());
  for (const auto& p : r.writers) j["writers"].push_back(p.str());
  return j;
}

LoadedAnalysis load_analysis(const std::filesystem::path& out_dir) {
  auto path = out_dir / "analysis.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  LoadedAnalysis a;
  try {
    a.document = Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw Error(path.string() + " is not valid JSON: " + e.what());
  }
  a.bundle = report::bundle_from_json(a.document);
  return a;
}

ApiRouter::ApiRouter(LoadedAnalysis analysis) : analysis_(std::move(analysis)) {}

Response ApiRouter::get(std::string_view path, const std::map<std::string, std::string>& query) const {
  static const std::map<std::string, std::string, std::less<>> slices = {
      {"/api/structure", "structure"},          {"/api/metrics", "metrics"},
      {"/api/model", "conceptualModel"},        {"/api/dependencies", "dependencies"},
      {"/api/diagnostics", "diagnostics"},
  };
  if (auto it = slices.find(path); it != slices.end()) return json_response(200, analysis_.document.at(it->second));

  constexpr std::string_view prefix = "/api/procedures/", suffix = "/deps";
  if (path.starts_with(prefix) && path.ends_with(suffix) && path.size() > prefix.size() + suffix.size()) {
    std::string_view text = path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
    auto id = logic::parse_procedure_id(text);
    if (!id || !analysis_.bundle.dependencies.find(*id)) {
      return error_response(404, "unknown procedure '" + std::string(text) + "'");
    }
    return json_response(200, report::to_json(report::dependency_graph(analysis_.bundle.dependencies, *id)));
  }

  if (path == "/api/xref") {
    auto cell = query.find("cell");
    if (cell == query.end() || cell->second.empty()) return error_response(400, "missing 'cell' parameter");
    try {
      return json_response(200, to_json(xref(analysis_.bundle, cell->second)));
    } catch (const ReferenceError& e) {
      return error_response(400, e.what());
    } catch (const Error& e) {
      return error_response(404, e.what());
    }
  }
  return error_response(404, "no route for '" + std::string(path) + "'");
}

}  // namespace exact::service
