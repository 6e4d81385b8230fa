#include <algorithm>

#include "exact/logic/analyzer.hpp"

namespace exact::logic {

namespace {

using namespace exact::vba;

// VBA runtime functions and host-object roots. Calls to these never become
// edges, and member calls rooted at one of them are object-model calls.
// Keyed by lower-case name; values keep the canonical spelling.
const std::map<std::string, std::string>& builtin_table() {
  static const std::map<std::string, std::string> names = [] {
    const char* list[] = {
        // runtime
        "MsgBox", "InputBox", "Val", "CInt", "CLng", "CDbl", "CStr", "CBool", "CDate", "CSng", "CVar", "CCur",
        "Format", "Len", "UBound", "LBound", "IsEmpty", "IsNumeric", "IsDate", "IsArray", "IsNull", "IsObject",
        "IsMissing", "Left", "Right", "Mid", "Left$", "Right$", "Mid$", "Trim", "LTrim", "RTrim", "Trim$", "UCase",
        "LCase", "UCase$", "LCase$", "InStr", "InStrRev", "Replace", "Split", "Join", "Array", "Chr", "Chr$", "Asc",
        "Str", "Space", "String", "StrComp", "IIf", "Abs", "Int", "Fix", "Round", "Sqr", "Rnd", "Randomize", "Now",
        "Date", "Time", "Timer", "Year", "Month", "Day", "Hour", "Minute", "Second", "DateAdd", "DateDiff",
        "DateSerial", "DateValue", "Weekday", "TypeName", "VarType", "Erase", "DoEvents", "Unload", "Load", "Beep",
        "CreateObject", "GetObject", "Dir", "Kill", "Environ", "Err", "Debug", "Error", "RGB",
        // host object model
        "Range", "Cells", "Worksheets", "Sheets", "Workbooks", "ActiveSheet", "ActiveWorkbook", "ActiveCell",
        "ThisWorkbook", "Application", "Selection", "WorksheetFunction", "Columns", "Rows", "Me", "VBA", "Union",
        "Intersect", "Names", "Charts", "Shapes",
    };
    std::map<std::string, std::string> m;
    for (const char* n : list) m.emplace(to_lower(n), n);
    return m;
  }();
  return names;
}

class CallWalker {
 public:
  CallWalker(const ProcedureAst& proc, const ModuleAst& owner, const ProcedureIndex& index,
             std::set<std::string>* builtins)
      : proc_(proc), owner_(owner), index_(index), builtins_(builtins), caller_{owner.module_name, proc.name} {
    for (const auto& d : owner.declarations) locals_.insert(to_lower(d.name));
    for (const auto& p : proc.params) locals_.insert(to_lower(p.name));
    for_each_stmt(proc.body, [&](const Stmt& s) {
      if (const auto* dim = s.as<Dim>()) {
        for (const auto& v : dim->vars) locals_.insert(to_lower(v.name));
      } else if (const auto* f = s.as<ForNext>()) {
        if (const auto* n = f->var.as<Name>()) locals_.insert(to_lower(n->name));
      } else if (const auto* f = s.as<ForEach>()) {
        if (const auto* n = f->var.as<Name>()) locals_.insert(to_lower(n->name));
      }
    });
  }

  std::vector<CallEdge> run() {
    for_each_stmt(proc_.body, [&](const Stmt& s) { statement(s); });
    return std::move(edges_);
  }

 private:
  bool local(std::string_view name) const { return locals_.count(to_lower(name)) > 0; }

  void edge_to(const ProcedureInfo& callee, int line) { edges_.push_back({caller_, callee.id, {}, {}, line}); }

  void unresolved(std::string name, std::string reason, int line) {
    edges_.push_back({caller_, std::nullopt, std::move(name), std::move(reason), line});
  }

  void note_builtin(std::string_view name) {
    if (builtins_) builtins_->insert(builtin_table().at(to_lower(name)));
  }

  // Resolution order: same module, unique public procedure in a standard
  // module, builtin, unresolved. `must_call` is false for bare names in
  // expressions, which are usually variables.
  void bare_name(const std::string& name, int line, bool must_call) {
    if (const auto* p = index_.find(owner_.module_name, name)) {
      edge_to(*p, line);
      return;
    }
    auto globals = index_.global_candidates(name, owner_.module_name);
    if (globals.size() == 1) {
      edge_to(*globals.front(), line);
      return;
    }
    if (globals.size() > 1) {
      unresolved(name, "ambiguous", line);
      return;
    }
    if (is_builtin(name)) {
      note_builtin(name);
      return;
    }
    if (must_call) unresolved(name, "not-found", line);
  }

  // `Module.Proc`; returns false when `module` is not a module name.
  bool qualified(const std::string& module, const std::string& name, int line) {
    if (!index_.has_module(module) || local(module)) return false;
    if (const auto* p = index_.find(module, name)) {
      if (p->visibility == Visibility::Private && !iequals(module, owner_.module_name)) {
        unresolved(module + "." + name, "private", line);
      } else {
        edge_to(*p, line);
      }
      return true;
    }
    auto kind = index_.module_kind(module);
    if (kind == ModuleKind::Standard) unresolved(module + "." + name, "not-found", line);
    // document/form/class members such as UserForm1.Show are object-model calls
    return true;
  }

  static const Expr* root(const Expr& e) {
    const Expr* cur = &e;
    for (;;) {
      if (const auto* m = cur->as<Member>()) {
        cur = &*m->base;
      } else if (const auto* a = cur->as<Apply>()) {
        cur = &*a->base;
      } else {
        return cur;
      }
    }
  }

  static std::string describe(const Expr& e) {
    if (const auto* n = e.as<Name>()) return n->name;
    if (const auto* w = e.as<WithRef>()) return "." + w->name;
    if (const auto* m = e.as<Member>()) return describe(*m->base) + "." + m->name;
    if (const auto* a = e.as<Apply>()) return describe(*a->base) + "(..)";
    return "<expr>";
  }

  // Statement-level callee: every form is a call.
  void callee(const Expr& e) {
    if (const auto* n = e.as<Name>()) {
      bare_name(n->name, e.line, true);
      return;
    }
    if (const auto* m = e.as<Member>()) {
      const Expr& base = *m->base;
      if (const auto* b = base.as<Name>()) {
        if (qualified(b->name, m->name, e.line)) return;
        if (iequals(b->name, "Me")) {
          if (const auto* p = index_.find(owner_.module_name, m->name)) {
            edge_to(*p, e.line);
            return;
          }
        }
      }
      expression(base);
      const Expr* r = root(base);
      bool host = r->as<WithRef>() != nullptr;
      if (const auto* rn = r->as<Name>()) host = is_builtin(rn->name) || index_.has_module(rn->name);
      if (!host) unresolved(describe(e), "dynamic-receiver", e.line);
      return;
    }
    expression(e);
  }

  void expression(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Name>) {
            if (!local(n.name) && !iequals(n.name, proc_.name)) bare_name(n.name, e.line, false);
          } else if constexpr (std::is_same_v<N, Member>) {
            if (const auto* b = n.base->template as<Name>(); b && qualified(b->name, n.name, e.line)) return;
            expression(*n.base);
          } else if constexpr (std::is_same_v<N, Apply>) {
            const Expr& base = *n.base;
            if (const auto* b = base.template as<Name>()) {
              if (!local(b->name)) bare_name(b->name, base.line, true);
            } else {
              expression(base);
            }
            for (const auto& a : n.args) expression(a);
          } else if constexpr (std::is_same_v<N, Unary>) {
            if (n.op != "New") expression(*n.operand);
          } else if constexpr (std::is_same_v<N, Binary>) {
            expression(*n.lhs);
            expression(*n.rhs);
          }
        },
        e.node);
  }

  // Assignment targets name storage, not calls, at their outermost level.
  void target(const Expr& e) {
    if (e.as<Name>()) return;
    if (const auto* a = e.as<Apply>()) {
      if (!a->base->as<Name>()) expression(*a->base);
      for (const auto& arg : a->args) expression(arg);
      return;
    }
    if (const auto* m = e.as<Member>()) {
      expression(*m->base);
      return;
    }
    expression(e);
  }

  void statement(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Assign>) {
            target(n.target);
            expression(n.value);
          } else if constexpr (std::is_same_v<N, CallStmt>) {
            callee(n.callee);
            for (const auto& a : n.args) expression(a);
          } else if constexpr (std::is_same_v<N, If>) {
            for (const auto& br : n.branches) expression(br.cond);
          } else if constexpr (std::is_same_v<N, ForNext>) {
            expression(n.from);
            expression(n.to);
            if (n.step) expression(*n.step);
          } else if constexpr (std::is_same_v<N, ForEach>) {
            expression(n.collection);
          } else if constexpr (std::is_same_v<N, DoLoop>) {
            if (n.cond) expression(*n.cond);
          } else if constexpr (std::is_same_v<N, WhileWend>) {
            expression(n.cond);
          } else if constexpr (std::is_same_v<N, With>) {
            expression(n.object);
          }
        },
        s.node);
  }

  const ProcedureAst& proc_;
  const ModuleAst& owner_;
  const ProcedureIndex& index_;
  std::set<std::string>* builtins_;
  ProcedureId caller_;
  std::set<std::string> locals_;
  std::vector<CallEdge> edges_;
};

}  // namespace

bool is_builtin(std::string_view name) { return builtin_table().count(to_lower(name)) > 0; }

const std::set<std::string>& builtin_names() {
  static const std::set<std::string> names = [] {
    std::set<std::string> s;
    for (const auto& [lower, canonical] : builtin_table()) s.insert(canonical);
    return s;
  }();
  return names;
}

std::vector<CallEdge> resolve_calls(const ProcedureAst& proc, const ModuleAst& owner, const ProcedureIndex& index,
                                    std::set<std::string>* builtins_used) {
  auto edges = CallWalker(proc, owner, index, builtins_used).run();
  std::stable_sort(edges.begin(), edges.end(), [](const CallEdge& a, const CallEdge& b) { return a.site_line < b.site_line; });
  return edges;
}

}  // namespace exact::logic
