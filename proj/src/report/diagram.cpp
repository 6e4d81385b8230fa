#include <algorithm>

#include "exact/report/report.hpp"

namespace exact::report {

namespace {

using namespace exact::datamodel;

std::string attribute_text(const AttributeDef& a, const ConceptualModel& model) {
  std::string type = to_string(a.type);
  if (!a.enumeration.empty()) {
    if (const ClassDef* e = model.find(a.enumeration)) type = e->name;
  }
  return a.name + ": " + type + (a.optional ? "?" : "");
}

std::string escape(std::string_view s, std::string_view specials) {
  std::string out;
  for (char c : s) {
    if (specials.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

std::vector<const ClassDef*> sorted_classes(const ConceptualModel& model) {
  std::vector<const ClassDef*> out;
  for (const auto& c : model.classes) out.push_back(&c);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
  return out;
}

std::string plantuml(const ConceptualModel& model) {
  auto classes = sorted_classes(model);
  std::map<std::string, std::string> alias;
  for (std::size_t i = 0; i < classes.size(); ++i) alias[classes[i]->id] = "C" + std::to_string(i + 1);

  std::string out = "@startuml\nhide empty methods\n";
  for (const auto* c : classes) {
    std::string name = "\"" + escape(c->name, "\"") + "\"";
    if (c->stereotype == Stereotype::Enumeration) {
      out += "enum " + name + " as " + alias[c->id] + " <<enumeration>> {\n";
      for (const auto& lit : c->literals) out += "  " + lit + "\n";
    } else {
      out += "class " + name + " as " + alias[c->id] + " <<" + to_string(c->stereotype) + ">> {\n";
      for (const auto& a : c->attributes) out += "  " + attribute_text(a, model) + "\n";
    }
    out += "}\n";
  }
  for (const auto& r : model.relationships) {
    std::string arrow = r.kind == RelationKind::Composition ? " *-- " : " --> ";
    out += alias[r.source] + " \"" + r.source_card + "\"" + arrow + "\"" + r.target_card + "\" " + alias[r.target];
    if (!r.label.empty()) out += " : " + r.label;
    out += "\n";
  }
  return out + "@enduml\n";
}

std::string dot(const ConceptualModel& model) {
  std::string out = "digraph model {\n  node [shape=record];\n";
  const std::string specials = "\"\\{}|<>";
  for (const auto* c : sorted_classes(model)) {
    std::string label = "{" + escape(c->name, specials) + "\\n\\<\\<" + to_string(c->stereotype) + "\\>\\>|";
    if (c->stereotype == Stereotype::Enumeration) {
      for (const auto& lit : c->literals) label += escape(lit, specials) + "\\l";
    } else {
      for (const auto& a : c->attributes) label += escape(attribute_text(a, model), specials) + "\\l";
    }
    label += "}";
    out += "  \"" + escape(c->id, "\"\\") + "\" [label=\"" + label + "\"];\n";
  }
  for (const auto& r : model.relationships) {
    out += "  \"" + escape(r.source, "\"\\") + "\" -> \"" + escape(r.target, "\"\\") + "\" [";
    if (r.kind == RelationKind::Composition) {
      out += "dir=back, arrowtail=diamond, ";
    } else {
      out += "arrowhead=vee, ";
    }
    out += "taillabel=\"" + r.source_card + "\", headlabel=\"" + r.target_card + "\"";
    if (!r.label.empty()) out += ", label=\"" + escape(r.label, "\"\\") + "\"";
    out += "];\n";
  }
  return out + "}\n";
}

}  // namespace

std::string export_class_diagram(const ConceptualModel& model, DiagramFormat format) {
  return format == DiagramFormat::Dot ? dot(model) : plantuml(model);
}

}  // namespace exact::report
