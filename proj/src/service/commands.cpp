#include <fstream>
#include <iostream>
#include <sstream>

#include "exact/service/service.hpp"

namespace exact::service {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_diagnostics(const Diagnostics& diags, std::ostream& err) {
  for (const auto& d : diags) {
    err << to_string(d.severity) << ": " << d.where;
    if (d.line > 0) err << ":" << d.line;
    err << ": " << d.message << "\n";
  }
}

void clear_stale_outputs(const fs::path& out_dir) {
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    std::string name = entry.path().filename().string();
    if (name.starts_with("deps-") && name.ends_with(".dot")) fs::remove(entry.path());
  }
}

}  // namespace

int cmd_analyze(const fs::path& bundle_dir, const fs::path& out_dir, const std::optional<fs::path>& synonyms,
                std::ostream& out, std::ostream& err) {
  try {
    fs::path manifest = bundle_dir / "workbook.json";
    if (!fs::is_regular_file(manifest)) {
      err << "error: cannot read " << manifest.string() << "\n";
      return 1;
    }
    datamodel::SynonymDictionary dictionary;
    if (synonyms) dictionary = datamodel::SynonymDictionary::from_json(read_file(*synonyms));

    fs::create_directories(out_dir);
    clear_stale_outputs(out_dir);

    WorkbookSnapshot wb;
    try {
      wb = load_bundle(bundle_dir);
    } catch (const BundleError& e) {
      auto failed = report::failed_bundle(bundle_dir.filename().string(), e.issues());
      write_file(out_dir / "analysis.json", report::export_bundle_json(failed));
      print_diagnostics(e.issues(), err);
      err << "error: " << bundle_dir.string() << " failed validation (" << e.issues().size() << " issue"
          << (e.issues().size() == 1 ? "" : "s") << ")\n";
      return 2;
    }

    report::AnalysisBundle bundle = report::analyze(wb, dictionary);
    write_file(out_dir / "analysis.json", report::export_bundle_json(bundle));
    write_file(out_dir / "structure.json", report::canonical(report::to_json(bundle.structure)));
    write_file(out_dir / "deps.dot", report::export_dependency_dot(bundle.dependencies));
    for (const auto& p : bundle.dependencies.procedures) {
      write_file(out_dir / ("deps-" + p.id.str() + ".dot"), report::export_dependency_dot(bundle.dependencies, p.id));
    }
    write_file(out_dir / "model.puml",
               report::export_class_diagram(bundle.conceptual_model, report::DiagramFormat::PlantUml));
    write_file(out_dir / "model.dot", report::export_class_diagram(bundle.conceptual_model, report::DiagramFormat::Dot));

    print_diagnostics(bundle.diagnostics, err);
    const auto& m = bundle.metrics;
    out << "analyzed " << bundle.workbook.name << ": " << m.worksheets << " worksheets, " << m.code_modules
        << " modules, " << m.procedures << " procedures, " << m.user_forms << " forms, " << m.controls
        << " controls\n";
    out << "wrote " << out_dir.string() << "\n";
    return has_errors(bundle.diagnostics) ? 2 : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_graph(const fs::path& out_dir, const std::string& proc, const std::string& format, std::ostream& out,
              std::ostream& err) {
  try {
    if (format != "dot" && format != "json") {
      err << "error: unknown format '" << format << "' (expected dot or json)\n";
      return 1;
    }
    auto analysis = load_analysis(out_dir);
    const auto& deps = analysis.bundle.dependencies;
    auto id = logic::parse_procedure_id(proc);
    if (!id || !deps.find(*id)) {
      err << "error: unknown procedure '" << proc << "'; known procedures:\n";
      for (const auto& p : deps.procedures) err << "  " << p.id.str() << "\n";
      return 1;
    }
    auto graph = report::dependency_graph(deps, *id);
    out << (format == "dot" ? report::to_dot(graph) : report::canonical(report::to_json(graph)));
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_xref(const fs::path& out_dir, const std::string& cell, std::ostream& out, std::ostream& err) {
  try {
    auto analysis = load_analysis(out_dir);
    out << report::canonical(to_json(xref(analysis.bundle, cell)));
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_serve(const fs::path& out_dir, int port, const std::optional<fs::path>& ui_dir, std::ostream& out,
              std::ostream& err) {
  try {
    HttpService service(load_analysis(out_dir), ui_dir);
    int bound = service.bind("127.0.0.1", port);
    out << "serving " << out_dir.string() << " on http://127.0.0.1:" << bound << "\n" << std::flush;
    service.listen();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace exact::service
