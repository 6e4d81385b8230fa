#include <algorithm>

#include "exact/logic/analyzer.hpp"

namespace exact::logic {

namespace {

using namespace exact::vba;

struct Target {
  std::optional<CellRect> rect;
  std::string reason;

  static Target dynamic(std::string why) { return {std::nullopt, std::move(why)}; }
};

struct SheetRef {
  std::optional<std::string> sheet;
  std::string reason;
};

struct WithContext {
  enum class Kind { Sheet, Range, Other };
  Kind kind = Kind::Other;
  SheetRef sheet;  // Kind::Sheet
  Target range;    // Kind::Range
};

bool is_value_member(std::string_view name) { return iequals(name, "Value") || iequals(name, "Formula"); }

class AccessWalker {
 public:
  AccessWalker(const ProcedureAst& proc, const AccessContext& ctx) : ctx_(ctx), proc_id_{ctx.module, proc.name} {}

  std::vector<CellAccess> run(const Block& body) {
    block(body);
    std::stable_sort(out_.begin(), out_.end(),
                     [](const CellAccess& a, const CellAccess& b) { return a.site_line < b.site_line; });
    return std::move(out_);
  }

 private:
  const SheetSnapshot* sheet(std::string_view name) const {
    return ctx_.workbook ? ctx_.workbook->find_sheet(name) : nullptr;
  }

  SheetRef known_sheet(std::string_view name) const {
    if (const auto* s = sheet(name)) return {s->name(), {}};
    return {std::nullopt, "unknown-sheet"};
  }

  /// Resolves an expression used as a sheet; nullopt if it is not recognizably one.
  std::optional<SheetRef> sheet_of(const Expr& q) const {
    if (const auto* a = q.as<Apply>()) {
      const Expr& base = *a->base;
      bool collection = false;
      if (const auto* n = base.as<Name>()) collection = iequals(n->name, "Worksheets") || iequals(n->name, "Sheets");
      if (const auto* w = base.as<WithRef>()) collection = iequals(w->name, "Worksheets") || iequals(w->name, "Sheets");
      if (const auto* m = base.as<Member>()) {
        const auto* owner = m->base->as<Name>();
        collection = owner && iequals(owner->name, "ThisWorkbook") &&
                     (iequals(m->name, "Worksheets") || iequals(m->name, "Sheets"));
      }
      if (!collection) return std::nullopt;
      if (a->args.size() == 1) {
        if (auto name = string_literal(a->args.front())) return known_sheet(*name);
      }
      return SheetRef{std::nullopt, "non-literal"};
    }
    if (const auto* n = q.as<Name>()) {
      if (iequals(n->name, "Me")) {
        if (ctx_.kind == ModuleKind::Document && ctx_.bound_to.kind == BoundTo::Kind::Sheet) {
          return known_sheet(ctx_.bound_to.name);
        }
        return SheetRef{std::nullopt, "unknown-sheet"};
      }
      if (iequals(n->name, "ActiveSheet")) return SheetRef{std::nullopt, "active-sheet"};
      if (ctx_.workbook) {
        // sheet code name, i.e. the document module bound to the sheet
        const VbaModuleRef* m = ctx_.workbook->find_module(n->name);
        if (m && m->kind == ModuleKind::Document && m->bound_to.kind == BoundTo::Kind::Sheet) {
          return known_sheet(m->bound_to.name);
        }
      }
    }
    return std::nullopt;
  }

  static bool is_cells(const Expr& e) {
    const auto* a = e.as<Apply>();
    if (!a) return false;
    const Expr& b = *a->base;
    if (const auto* n = b.as<Name>()) return iequals(n->name, "Cells");
    if (const auto* m = b.as<Member>()) return iequals(m->name, "Cells");
    if (const auto* w = b.as<WithRef>()) return iequals(w->name, "Cells");
    return false;
  }

  static std::optional<CellRect> cells_rect(const std::vector<Expr>& args) {
    if (args.size() != 2) return std::nullopt;
    auto row = int_literal(args[0]);
    std::optional<long long> col = int_literal(args[1]);
    if (!col) {
      if (auto letters = string_literal(args[1]); letters && !letters->empty() && letters->size() <= 3 &&
                                                  std::all_of(letters->begin(), letters->end(), ::isalpha)) {
        col = column_index(*letters);
      }
    }
    if (!row || !col || *row < 1 || *row > kMaxRow || *col < 1 || *col > kMaxCol) return std::nullopt;
    int r = static_cast<int>(*row), c = static_cast<int>(*col);
    return CellRect{{}, r, c, r, c};
  }

  // A1 text or a workbook name; the rect carries a sheet only when the text did.
  Target range_text(const std::string& text) const {
    if (text.find(',') != std::string::npos) return Target::dynamic("union");
    try {
      return {parse_a1(text), {}};
    } catch (const ReferenceError&) {
    }
    if (ctx_.workbook) {
      if (const NamedRange* nr = ctx_.workbook->find_named_range(text)) return {nr->target, {}};
    }
    return Target::dynamic("unknown-name");
  }

  // Rect described by the arguments alone. `consumed` reports whether the
  // arguments were fully understood (so no nested accesses remain in them).
  Target from_args(bool cells, const std::vector<Expr>& args, bool& consumed) const {
    consumed = false;
    if (cells) {
      if (auto r = cells_rect(args)) {
        consumed = true;
        return {r, {}};
      }
      return Target::dynamic("non-literal");
    }
    if (args.size() == 1) {
      if (auto text = string_literal(args[0])) {
        consumed = true;
        return range_text(*text);
      }
      return Target::dynamic("non-literal");
    }
    if (args.size() == 2) {
      std::optional<CellRect> corners[2];
      for (int i = 0; i < 2; ++i) {
        if (auto text = string_literal(args[i])) {
          Target t = range_text(*text);
          if (t.rect && t.rect->rows() == 1 && t.rect->cols() == 1 && t.rect->sheet.empty()) corners[i] = t.rect;
        } else if (is_cells(args[i])) {
          corners[i] = cells_rect(args[i].as<Apply>()->args);
        }
      }
      if (corners[0] && corners[1]) {
        consumed = true;
        return {bounding_box(*corners[0], *corners[1]), {}};
      }
    }
    return Target::dynamic("non-literal");
  }

  Target qualify(Target t, const SheetRef& ref) const {
    if (!t.rect) return t;
    if (!ref.sheet) return Target::dynamic(ref.reason);
    t.rect->sheet = *ref.sheet;
    return t;
  }

  /// Target of a `Range(..)`/`Cells(..)` node; nullopt for anything else.
  std::optional<Target> access_of(const Expr& e, bool* consumed_out = nullptr) const {
    const auto* a = e.as<Apply>();
    if (!a) return std::nullopt;
    const Expr& base = *a->base;

    enum class Qual { None, Expr, With } qual;
    const Expr* qualifier = nullptr;
    std::string_view member;
    if (const auto* n = base.as<Name>()) {
      member = n->name;
      qual = Qual::None;
    } else if (const auto* m = base.as<Member>()) {
      member = m->name;
      qualifier = &*m->base;
      qual = Qual::Expr;
    } else if (const auto* w = base.as<WithRef>()) {
      member = w->name;
      qual = Qual::With;
    } else {
      return std::nullopt;
    }
    bool cells = iequals(member, "Cells");
    if (!cells && !iequals(member, "Range")) return std::nullopt;

    bool consumed = false;
    Target t = from_args(cells, a->args, consumed);
    if (consumed_out) *consumed_out = consumed;
    if (!t.rect) return t;

    if (!t.rect->sheet.empty()) {
      // sheet given by the text itself (named range or "Sheet!A1")
      const SheetSnapshot* s = sheet(t.rect->sheet);
      if (!s) return Target::dynamic("unknown-sheet");
      t.rect->sheet = s->name();
      return t;
    }

    switch (qual) {
      case Qual::None: return Target::dynamic("unqualified");
      case Qual::Expr: {
        auto ref = sheet_of(*qualifier);
        if (!ref) return Target::dynamic("unknown-sheet");
        return qualify(std::move(t), *ref);
      }
      case Qual::With: {
        if (with_.empty()) return Target::dynamic("unknown-sheet");
        const WithContext& top = with_.back();
        if (top.kind == WithContext::Kind::Sheet) return qualify(std::move(t), top.sheet);
        if (top.kind == WithContext::Kind::Range) return Target::dynamic("relative");
        return Target::dynamic("unknown-sheet");
      }
    }
    return t;
  }

  void record(const Target& t, AccessKind kind, int line) {
    out_.push_back({proc_id_, kind, t.rect, t.rect ? std::string() : t.reason, line});
  }

  void expression(const Expr& e, bool write_target) {
    bool consumed = false;
    if (auto t = access_of(e, &consumed)) {
      record(*t, write_target ? AccessKind::Write : AccessKind::Read, e.line);
      if (!consumed) {
        for (const auto& arg : e.as<Apply>()->args) expression(arg, false);
      }
      return;
    }
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Member>) {
            if (write_target && is_value_member(n.name)) {
              if (auto t = access_of(*n.base, &consumed)) {
                record(*t, AccessKind::Write, e.line);
                if (!consumed) {
                  for (const auto& arg : n.base->template as<Apply>()->args) expression(arg, false);
                }
                return;
              }
              if (n.base->template as<WithRef>()) {
                expression(*n.base, false);
                return;
              }
            }
            expression(*n.base, false);
          } else if constexpr (std::is_same_v<N, WithRef>) {
            if (!with_.empty() && with_.back().kind == WithContext::Kind::Range) {
              bool write = write_target && is_value_member(n.name);
              record(with_.back().range, write ? AccessKind::Write : AccessKind::Read, e.line);
            }
          } else if constexpr (std::is_same_v<N, Apply>) {
            expression(*n.base, false);
            for (const auto& arg : n.args) expression(arg, false);
          } else if constexpr (std::is_same_v<N, Unary>) {
            expression(*n.operand, false);
          } else if constexpr (std::is_same_v<N, Binary>) {
            expression(*n.lhs, false);
            expression(*n.rhs, false);
          }
        },
        e.node);
  }

  void block(const Block& body) {
    for (const auto& s : body) statement(s);
  }

  void statement(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Assign>) {
            expression(n.target, true);
            expression(n.value, false);
          } else if constexpr (std::is_same_v<N, CallStmt>) {
            expression(n.callee, false);
            for (const auto& a : n.args) expression(a, false);
          } else if constexpr (std::is_same_v<N, If>) {
            for (const auto& br : n.branches) {
              expression(br.cond, false);
              block(br.body);
            }
            block(n.else_body);
          } else if constexpr (std::is_same_v<N, ForNext>) {
            expression(n.from, false);
            expression(n.to, false);
            if (n.step) expression(*n.step, false);
            block(n.body);
          } else if constexpr (std::is_same_v<N, ForEach>) {
            expression(n.collection, false);
            block(n.body);
          } else if constexpr (std::is_same_v<N, DoLoop>) {
            if (n.cond) expression(*n.cond, false);
            block(n.body);
          } else if constexpr (std::is_same_v<N, WhileWend>) {
            expression(n.cond, false);
            block(n.body);
          } else if constexpr (std::is_same_v<N, With>) {
            with_.push_back(with_context(n.object));
            block(n.body);
            with_.pop_back();
          }
        },
        s.node);
  }

  WithContext with_context(const Expr& object) {
    WithContext c;
    bool consumed = false;
    if (auto t = access_of(object, &consumed)) {
      c.kind = WithContext::Kind::Range;
      c.range = *t;
      if (!consumed) {
        for (const auto& arg : object.as<Apply>()->args) expression(arg, false);
      }
      return c;
    }
    if (auto ref = sheet_of(object)) {
      c.kind = WithContext::Kind::Sheet;
      c.sheet = *ref;
      return c;
    }
    expression(object, false);
    return c;
  }

  const AccessContext& ctx_;
  ProcedureId proc_id_;
  std::vector<WithContext> with_;
  std::vector<CellAccess> out_;
};

}  // namespace

const char* to_string(AccessKind k) { return k == AccessKind::Read ? "read" : "write"; }

std::vector<CellAccess> extract_cell_accesses(const ProcedureAst& proc, const AccessContext& ctx) {
  return AccessWalker(proc, ctx).run(proc.body);
}

}  // namespace exact::logic
