#include <iostream>

#include <CLI11.hpp>

#include "exact/service/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact: static analysis and model recovery for spreadsheet workbooks with VBA"};
  app.require_subcommand(1);

  std::string bundle_dir, out_dir, synonyms, proc, format = "dot", cell, ui_dir;
  int port = 8080;

  auto* analyze = app.add_subcommand("analyze", "analyze a workbook bundle and write all views");
  analyze->add_option("bundle", bundle_dir, "bundle directory containing workbook.json")->required();
  analyze->add_option("-o,--out", out_dir, "output directory")->required();
  analyze->add_option("--synonyms", synonyms, "synonym dictionary JSON file");

  auto* graph = app.add_subcommand("graph", "print the dependency graph of one procedure");
  graph->add_option("out", out_dir, "directory holding analysis.json")->required();
  graph->add_option("--proc", proc, "procedure id, Module.Name")->required();
  graph->add_option("--format", format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

  auto* xref = app.add_subcommand("xref", "list procedures reading or writing a cell");
  xref->add_option("out", out_dir, "directory holding analysis.json")->required();
  xref->add_option("--cell", cell, "sheet-qualified cell, e.g. Data!B2")->required();

  auto* serve = app.add_subcommand("serve", "serve the analysis over HTTP");
  serve->add_option("out", out_dir, "directory holding analysis.json")->required();
  serve->add_option("--port", port, "port to listen on")->check(CLI::Range(0, 65535));
  serve->add_option("--ui", ui_dir, "static UI directory (default: <out>/ui when present)");

  CLI11_PARSE(app, argc, argv);

  using namespace exact::service;
  if (analyze->parsed()) {
    std::optional<std::filesystem::path> syn;
    if (!synonyms.empty()) syn = synonyms;
    return cmd_analyze(bundle_dir, out_dir, syn, std::cout, std::cerr);
  }
  if (graph->parsed()) return cmd_graph(out_dir, proc, format, std::cout, std::cerr);
  if (xref->parsed()) return cmd_xref(out_dir, cell, std::cout, std::cerr);
  std::filesystem::path ui = ui_dir.empty() ? std::filesystem::path(out_dir) / "ui" : std::filesystem::path(ui_dir);
  return cmd_serve(out_dir, port, ui, std::cout, std::cerr);
}
