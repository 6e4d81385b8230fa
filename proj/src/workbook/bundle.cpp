#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "exact/workbook.hpp"

namespace exact {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::regex kIsoDate(R"(\d{4}-\d{2}-\d{2}(T\d{2}:\d{2}(:\d{2}(\.\d+)?)?)?)");
const std::regex kFill(R"(#[0-9A-Fa-f]{6})");

class ManifestReader {
 public:
  ManifestReader(std::string manifest_name, fs::path base) : manifest_(std::move(manifest_name)), base_(std::move(base)) {}

  WorkbookSnapshot read(const json& doc) {
    WorkbookSnapshot wb;
    if (!doc.is_object()) {
      issue("", "manifest must be a JSON object");
      return wb;
    }
    if (auto* name = require(doc, "name", "", json::value_t::string)) wb.name = name->get<std::string>();

    if (auto* sheets = require_array(doc, "sheets", "")) {
      for (std::size_t i = 0; i < sheets->size(); ++i) read_sheet((*sheets)[i], "sheets[" + std::to_string(i) + "]", wb);
    }
    if (auto* forms = require_array(doc, "forms", "")) {
      for (std::size_t i = 0; i < forms->size(); ++i) read_form((*forms)[i], "forms[" + std::to_string(i) + "]", wb);
    }
    if (auto* ranges = require_array(doc, "namedRanges", "")) {
      for (std::size_t i = 0; i < ranges->size(); ++i) {
        read_named_range((*ranges)[i], "namedRanges[" + std::to_string(i) + "]", wb);
      }
    }
    if (auto* modules = require_array(doc, "modules", "")) {
      for (std::size_t i = 0; i < modules->size(); ++i) {
        read_module((*modules)[i], "modules[" + std::to_string(i) + "]", wb);
      }
    }
    return wb;
  }

  Diagnostics& issues() { return issues_; }

  void issue(const std::string& field, std::string message) {
    issues_.push_back({Severity::Error, field.empty() ? manifest_ : manifest_ + ":" + field, 0, std::move(message)});
  }

 private:
  static const char* type_name(json::value_t t) {
    switch (t) {
      case json::value_t::string: return "a string";
      case json::value_t::array: return "an array";
      case json::value_t::object: return "an object";
      case json::value_t::boolean: return "a boolean";
      default: return "a value";
    }
  }

  static std::string join(const std::string& parent, const char* key) {
    return parent.empty() ? std::string(key) : parent + "." + key;
  }

  const json* require(const json& obj, const char* key, const std::string& parent, json::value_t type) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      issue(join(parent, key), "missing required field");
      return nullptr;
    }
    if (it->type() != type) {
      issue(join(parent, key), std::string("expected ") + type_name(type));
      return nullptr;
    }
    return &*it;
  }

  const json* require_array(const json& obj, const char* key, const std::string& parent) {
    return require(obj, key, parent, json::value_t::array);
  }

  const json* optional(const json& obj, const char* key, const std::string& parent, json::value_t type) {
    auto it = obj.find(key);
    if (it == obj.end()) return nullptr;
    if (it->type() != type) {
      issue(join(parent, key), std::string("expected ") + type_name(type));
      return nullptr;
    }
    return &*it;
  }

  std::optional<CellRect> reference(const json& value, const std::string& field) {
    try {
      return parse_a1(value.get<std::string>());
    } catch (const ReferenceError& e) {
      issue(field, e.what());
      return std::nullopt;
    }
  }

  void read_sheet(const json& j, const std::string& where, WorkbookSnapshot& wb) {
    if (!j.is_object()) {
      issue(where, "expected an object");
      return;
    }
    std::string name;
    if (auto* n = require(j, "name", where, json::value_t::string)) name = n->get<std::string>();

    std::vector<CellSnapshot> cells;
    if (auto* list = require_array(j, "cells", where)) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        if (auto cell = read_cell((*list)[i], where + ".cells[" + std::to_string(i) + "]")) {
          cells.push_back(std::move(*cell));
        }
      }
    }
    std::vector<CellRect> merged;
    if (auto* list = optional(j, "merged", where, json::value_t::array)) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        std::string field = where + ".merged[" + std::to_string(i) + "]";
        if (!(*list)[i].is_string()) {
          issue(field, "expected a string");
          continue;
        }
        if (auto rect = reference((*list)[i], field)) {
          if (!rect->sheet.empty()) {
            issue(field, "merged range must not carry a sheet prefix");
            continue;
          }
          merged.push_back(*rect);
        }
      }
    }
    wb.sheets.emplace_back(std::move(name), std::move(cells), std::move(merged));
  }

  std::optional<CellSnapshot> read_cell(const json& j, const std::string& where) {
    if (!j.is_object()) {
      issue(where, "expected an object");
      return std::nullopt;
    }
    CellSnapshot cell;
    const json* ref = require(j, "ref", where, json::value_t::string);
    if (!ref) return std::nullopt;
    auto rect = reference(*ref, where + ".ref");
    if (!rect) return std::nullopt;
    if (!rect->sheet.empty() || rect->rows() != 1 || rect->cols() != 1) {
      issue(where + ".ref", "cell ref must be a single unqualified cell, got '" + ref->get<std::string>() + "'");
      return std::nullopt;
    }
    cell.address = {std::nullopt, rect->top, rect->left};

    auto vit = j.find("value");
    if (vit == j.end()) {
      issue(where + ".value", "missing required field");
      return std::nullopt;
    }
    const json& value = *vit;
    std::string type;
    if (auto* t = optional(j, "type", where, json::value_t::string)) type = t->get<std::string>();

    std::string vfield = where + ".value";
    if (value.is_null()) {
      if (!type.empty() && type != "text" && type != "number" && type != "bool" && type != "date") {
        issue(where + ".type", "unknown cell type '" + type + "'");
      }
    } else if (type.empty()) {
      if (value.is_string()) {
        cell.value = value.get<std::string>();
      } else if (value.is_boolean()) {
        cell.value = value.get<bool>();
      } else if (value.is_number()) {
        cell.value = value.get<double>();
      } else {
        issue(vfield, "expected string, number, boolean or null");
      }
    } else if (type == "text") {
      if (!value.is_string()) issue(vfield, "type text requires a string value");
      else cell.value = value.get<std::string>();
    } else if (type == "number") {
      if (!value.is_number()) issue(vfield, "type number requires a numeric value");
      else cell.value = value.get<double>();
    } else if (type == "bool") {
      if (!value.is_boolean()) issue(vfield, "type bool requires a boolean value");
      else cell.value = value.get<bool>();
    } else if (type == "date") {
      if (!value.is_string() || !std::regex_match(value.get<std::string>(), kIsoDate)) {
        issue(vfield, "type date requires an ISO-8601 date string");
      } else {
        cell.value = DateValue{value.get<std::string>()};
      }
    } else {
      issue(where + ".type", "unknown cell type '" + type + "'");
    }

    if (auto* f = optional(j, "formula", where, json::value_t::string)) cell.formula = f->get<std::string>();
    if (auto* b = optional(j, "bold", where, json::value_t::boolean)) cell.style.bold = b->get<bool>();
    if (auto* f = optional(j, "fill", where, json::value_t::string)) {
      std::string fill = f->get<std::string>();
      if (!std::regex_match(fill, kFill)) {
        issue(where + ".fill", "fill must be #RRGGBB, got '" + fill + "'");
      } else {
        for (auto& c : fill) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        cell.style.fill = fill;
      }
    }
    return cell;
  }

  void read_form(const json& j, const std::string& where, WorkbookSnapshot& wb) {
    if (!j.is_object()) {
      issue(where, "expected an object");
      return;
    }
    UserFormSnapshot form;
    if (auto* n = require(j, "name", where, json::value_t::string)) form.name = n->get<std::string>();
    if (auto* list = require_array(j, "controls", where)) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        const json& c = (*list)[i];
        std::string cw = where + ".controls[" + std::to_string(i) + "]";
        if (!c.is_object()) {
          issue(cw, "expected an object");
          continue;
        }
        ControlSnapshot control;
        if (auto* n = require(c, "name", cw, json::value_t::string)) control.name = n->get<std::string>();
        if (auto* t = require(c, "type", cw, json::value_t::string)) {
          auto type = control_type_from_string(t->get<std::string>());
          if (!type) {
            issue(cw + ".type", "unknown control type '" + t->get<std::string>() + "'");
            continue;
          }
          control.type = *type;
        }
        if (auto* cap = optional(c, "caption", cw, json::value_t::string)) control.caption = cap->get<std::string>();
        form.controls.push_back(std::move(control));
      }
    }
    wb.forms.push_back(std::move(form));
  }

  void read_named_range(const json& j, const std::string& where, WorkbookSnapshot& wb) {
    if (!j.is_object()) {
      issue(where, "expected an object");
      return;
    }
    NamedRange nr;
    if (auto* n = require(j, "name", where, json::value_t::string)) nr.name = n->get<std::string>();
    const json* ref = require(j, "ref", where, json::value_t::string);
    if (!ref) return;
    auto rect = reference(*ref, where + ".ref");
    if (!rect) return;
    if (rect->sheet.empty()) {
      issue(where + ".ref", "named range ref needs a sheet prefix");
      return;
    }
    nr.target = *rect;
    wb.named_ranges.push_back(std::move(nr));
  }

  void read_module(const json& j, const std::string& where, WorkbookSnapshot& wb) {
    if (!j.is_object()) {
      issue(where, "expected an object");
      return;
    }
    VbaModuleRef m;
    if (auto* n = require(j, "name", where, json::value_t::string)) m.name = n->get<std::string>();
    if (auto* k = require(j, "kind", where, json::value_t::string)) {
      auto kind = module_kind_from_string(k->get<std::string>());
      if (!kind) issue(where + ".kind", "unknown module kind '" + k->get<std::string>() + "'");
      else m.kind = *kind;
    }

    auto bit = j.find("boundTo");
    if (bit == j.end()) {
      issue(where + ".boundTo", "missing required field");
    } else if (!bit->is_null()) {
      const json& b = *bit;
      if (!b.is_object() || b.size() != 1) {
        issue(where + ".boundTo", "expected null or one of {\"workbook\":true}, {\"sheet\":..}, {\"form\":..}");
      } else if (b.contains("workbook")) {
        if (b["workbook"] != true) issue(where + ".boundTo.workbook", "expected true");
        m.bound_to = BoundTo::workbook();
      } else if (b.contains("sheet") && b["sheet"].is_string()) {
        m.bound_to = BoundTo::sheet(b["sheet"].get<std::string>());
      } else if (b.contains("form") && b["form"].is_string()) {
        m.bound_to = BoundTo::form(b["form"].get<std::string>());
      } else {
        issue(where + ".boundTo", "expected null or one of {\"workbook\":true}, {\"sheet\":..}, {\"form\":..}");
      }
    }

    if (auto* f = require(j, "file", where, json::value_t::string)) {
      m.file = f->get<std::string>();
      fs::path rel(m.file);
      bool escapes = rel.is_absolute();
      for (const auto& part : rel) escapes = escapes || part == "..";
      if (escapes) {
        issue(where + ".file", "module file must stay inside the bundle: '" + m.file + "'");
      } else {
        std::ifstream in(base_ / rel, std::ios::binary);
        if (!in) {
          issue(where + ".file", "cannot read module source '" + (base_ / rel).string() + "'");
        } else {
          std::ostringstream ss;
          ss << in.rdbuf();
          m.source = ss.str();
        }
      }
    }
    wb.modules.push_back(std::move(m));
  }

  std::string manifest_;
  fs::path base_;
  Diagnostics issues_;
};

WorkbookSnapshot load_with(ManifestReader& reader, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    reader.issue("", std::string("malformed JSON: ") + e.what());
    throw BundleError(reader.issues());
  }
  WorkbookSnapshot wb = reader.read(doc);
  auto& issues = reader.issues();
  if (issues.empty()) {
    for (auto& d : validate(wb)) reader.issue(d.where, d.message);
  }
  if (!issues.empty()) throw BundleError(issues);
  return wb;
}

}  // namespace

WorkbookSnapshot load_manifest(std::string_view manifest_json, const fs::path& base) {
  ManifestReader reader((base / "workbook.json").string(), base);
  return load_with(reader, manifest_json);
}

WorkbookSnapshot load_bundle(const fs::path& dir) {
  fs::path manifest = dir / "workbook.json";
  ManifestReader reader(manifest.string(), dir);
  std::ifstream in(manifest, std::ios::binary);
  if (!in) {
    reader.issue("", "cannot read manifest");
    throw BundleError(reader.issues());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_with(reader, ss.str());
}

}  // namespace exact
