#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exact/report/report.hpp"

namespace exact::service {

using report::Json;

struct XrefResult {
  CellAddress query;
  std::vector<logic::ProcedureId> readers;
  std::vector<logic::ProcedureId> writers;
  std::vector<std::string> groups;

  friend bool operator==(const XrefResult&, const XrefResult&) = default;
};

/// Procedures whose resolved groups contain the cell. `cell_ref` must be a
/// sheet-qualified single cell; throws ReferenceError when malformed and Error
/// for an unknown sheet.
XrefResult xref(const report::AnalysisBundle& bundle, std::string_view cell_ref);
Json to_json(const XrefResult& r);

/// Loaded `analysis.json`: the raw document plus its decoded form.
struct LoadedAnalysis {
  Json document;
  report::AnalysisBundle bundle;
};

/// Throws Error when the file is missing or malformed.
LoadedAnalysis load_analysis(const std::filesystem::path& out_dir);

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Read-only HTTP API over one analysis; transport-free so it can be tested directly.
class ApiRouter {
 public:
  explicit ApiRouter(LoadedAnalysis analysis);

  /// `path` without the query string; `query` holds decoded parameters.
  Response get(std::string_view path, const std::map<std::string, std::string>& query = {}) const;

 private:
  LoadedAnalysis analysis_;
};

/// httplib wiring around an ApiRouter, plus static files from `ui_dir` when given.
class HttpService {
 public:
  HttpService(LoadedAnalysis analysis, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~HttpService();

  /// Binds to `port` (0 picks a free one) and returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  /// Blocks until a listen() running on another thread accepts connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Command implementations behind the `exact` executable. Each returns the
// process exit status and writes human output to `out`, problems to `err`.

int cmd_analyze(const std::filesystem::path& bundle_dir, const std::filesystem::path& out_dir,
                const std::optional<std::filesystem::path>& synonyms, std::ostream& out, std::ostream& err);
int cmd_graph(const std::filesystem::path& out_dir, const std::string& proc, const std::string& format,
              std::ostream& out, std::ostream& err);
int cmd_xref(const std::filesystem::path& out_dir, const std::string& cell, std::ostream& out, std::ostream& err);
int cmd_serve(const std::filesystem::path& out_dir, int port, const std::optional<std::filesystem::path>& ui_dir,
              std::ostream& out, std::ostream& err);

}  // namespace exact::service
