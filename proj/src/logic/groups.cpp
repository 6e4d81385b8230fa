#include <algorithm>
#include <numeric>
#include <tuple>

#include "exact/logic/analyzer.hpp"

namespace exact::logic {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::vector<std::size_t> parent;
};

bool member_less(const CellAccess& a, const CellAccess& b) {
  if (a.site_line != b.site_line) return a.site_line < b.site_line;
  if (a.target && b.target) return *a.target < *b.target;
  return a.dynamic_reason < b.dynamic_reason;
}

}  // namespace

bool adjacent(const CellRect& a, const CellRect& b) {
  return a.top <= b.bottom + 1 && b.top <= a.bottom + 1 && a.left <= b.right + 1 && b.left <= a.right + 1;
}

std::vector<CellGroup> group_cell_accesses(const std::vector<CellAccess>& accesses) {
  using Bucket = std::tuple<std::string, std::string, AccessKind>;  // procedure key, lower sheet, kind
  std::map<std::string, ProcedureId> procs;
  std::map<Bucket, std::vector<const CellAccess*>> buckets;
  std::map<std::string, std::vector<const CellAccess*>> dynamic;
  for (const auto& a : accesses) {
    procs.emplace(a.procedure.key(), a.procedure);
    if (a.target) {
      buckets[{a.procedure.key(), to_lower(a.target->sheet), a.kind}].push_back(&a);
    } else {
      dynamic[a.procedure.key()].push_back(&a);
    }
  }

  std::map<std::string, std::vector<CellGroup>> per_proc;
  for (auto& [bucket, items] : buckets) {
    DisjointSets sets(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      for (std::size_t j = i + 1; j < items.size(); ++j) {
        if (adjacent(*items[i]->target, *items[j]->target)) sets.unite(i, j);
      }
    }
    std::map<std::size_t, CellGroup> components;
    for (std::size_t i = 0; i < items.size(); ++i) {
      CellGroup& g = components[sets.find(i)];
      const CellAccess& a = *items[i];
      if (g.members.empty()) {
        g.procedure = a.procedure;
        g.sheet = a.target->sheet;
        g.kind = a.kind;
        g.rect = a.target;
      } else {
        g.rect = bounding_box(*g.rect, *a.target);
        g.rect->sheet = g.sheet;
      }
      g.members.push_back(a);
    }
    auto& out = per_proc[std::get<0>(bucket)];
    for (auto& [root, g] : components) {
      std::sort(g.members.begin(), g.members.end(), member_less);
      out.push_back(std::move(g));
    }
  }

  std::vector<CellGroup> result;
  for (const auto& [key, proc] : procs) {
    auto& groups = per_proc[key];
    std::sort(groups.begin(), groups.end(), [](const CellGroup& a, const CellGroup& b) {
      return std::tuple(to_lower(a.sheet), a.kind, a.rect->top, a.rect->left, a.rect->bottom, a.rect->right,
                        a.members.front().site_line) <
             std::tuple(to_lower(b.sheet), b.kind, b.rect->top, b.rect->left, b.rect->bottom, b.rect->right,
                        b.members.front().site_line);
    });
    std::vector<CellGroup> dyn;
    for (const CellAccess* a : dynamic[key]) {
      CellGroup g;
      g.procedure = a->procedure;
      g.kind = a->kind;
      g.dynamic = true;
      g.members.push_back(*a);
      dyn.push_back(std::move(g));
    }
    std::stable_sort(dyn.begin(), dyn.end(), [](const CellGroup& a, const CellGroup& b) {
      return std::tuple(a.kind, a.members.front().site_line) < std::tuple(b.kind, b.members.front().site_line);
    });
    for (auto& g : dyn) groups.push_back(std::move(g));

    int reads = 0, writes = 0;
    for (auto& g : groups) {
      int n = g.kind == AccessKind::Read ? ++reads : ++writes;
      g.id = proc.str() + (g.kind == AccessKind::Read ? "/r" : "/w") + std::to_string(n);
      result.push_back(std::move(g));
    }
  }
  return result;
}

}  // namespace exact::logic
