#ifndef PYTS_MRO_HPP
#define PYTS_MRO_HPP

// C3 linearization and the two nominal relations built on it:
// subclass-of (MRO membership plus virtual-subclass edges) and
// object-instance-of (the metaclass).

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pyts/class_info.hpp"
#include "pyts/prelude.hpp"

namespace pyts {

/// Computes linearizations against one registry, remembering results.
/// Not synchronized; use one per thread.
class Linearizer {
 public:
  explicit Linearizer(const ClassRegistry& registry) : registry_(registry) {}

  const std::vector<std::string>& linearize(const std::string& name) {
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    if (std::find(active_.begin(), active_.end(), name) != active_.end()) {
      std::string cycle;
      for (const auto& n : active_) cycle += n + " -> ";
      throw Error(ErrorCode::cyclic_hierarchy, "cyclic inheritance: " + cycle + name);
    }
    auto cls = registry_.find(name);
    if (!cls) throw Error(ErrorCode::unknown_base, "unknown class '" + name + "'");
    active_.push_back(name);
    std::vector<std::string> result;
    try {
      result = compute(*cls);
    } catch (...) {
      active_.pop_back();
      throw;
    }
    active_.pop_back();
    return cache_.emplace(name, std::move(result)).first->second;
  }

 private:
  std::vector<std::string> compute(const ClassInfo& cls) {
    std::vector<std::string> bases;
    for (const auto& b : cls.bases) {
      if (!registry_.contains(b.name))
        throw Error(ErrorCode::unknown_base, cls.name + ": unknown base class '" + b.name + "'");
      if (std::find(bases.begin(), bases.end(), b.name) != bases.end())
        throw Error(ErrorCode::inconsistent_hierarchy, cls.name + ": duplicate base class " + b.name);
      bases.push_back(b.name);
    }
    if (bases.empty() && cls.name != "object") bases.push_back("object");

    std::vector<std::vector<std::string>> seqs;
    for (const auto& b : bases) seqs.push_back(linearize(b));
    seqs.push_back(bases);

    std::vector<std::string> out{cls.name};
    for (;;) {
      seqs.erase(std::remove_if(seqs.begin(), seqs.end(), [](const auto& s) { return s.empty(); }),
                 seqs.end());
      if (seqs.empty()) return out;
      const std::string* head = nullptr;
      for (const auto& s : seqs) {
        const std::string& candidate = s.front();
        bool in_tail = std::any_of(seqs.begin(), seqs.end(), [&](const auto& other) {
          return std::find(other.begin() + 1, other.end(), candidate) != other.end();
        });
        if (!in_tail) {
          head = &candidate;
          break;
        }
      }
      if (!head) {
        std::set<std::string> pending;
        for (const auto& s : seqs) pending.insert(s.front());
        std::string names;
        for (const auto& p : pending) names += (names.empty() ? "" : ", ") + p;
        throw Error(ErrorCode::inconsistent_hierarchy,
                    "cannot create a consistent method resolution order for " + cls.name + " (bases " +
                        names + ")");
      }
      std::string next = *head;
      out.push_back(next);
      for (auto& s : seqs)
        if (!s.empty() && s.front() == next) s.erase(s.begin());
    }
  }

  const ClassRegistry& registry_;
  std::map<std::string, std::vector<std::string>> cache_;
  std::vector<std::string> active_;
};

/// L(C) = C + merge(L(B1), ..., L(Bn), [B1, ..., Bn]); a class without
/// declared bases has the implicit base `object`.
inline std::vector<std::string> c3_linearize(const ClassInfo& cls, const ClassRegistry& registry) {
  if (registry.find(cls.name).get() == &cls) {
    return Linearizer(registry).linearize(cls.name);
  }
  ClassRegistry extended = registry;
  extended.add(cls);
  return Linearizer(extended).linearize(cls.name);
}

inline std::vector<std::string> c3_linearize(const std::string& name, const ClassRegistry& registry) {
  return Linearizer(registry).linearize(name);
}

/// `a` inherits from `b`, explicitly or through a virtual-subclass edge
/// (closed under inheritance on both sides).
inline bool subclass_of(const std::string& a, const std::string& b, const ClassRegistry& registry,
                        const VirtualTable& virtual_table = {}) {
  Linearizer lin(registry);
  std::set<std::string> reached;
  std::vector<std::string> todo{a};
  while (!todo.empty()) {
    std::string cur = todo.back();
    todo.pop_back();
    for (const auto& c : lin.linearize(cur)) {
      if (!reached.insert(c).second) continue;
      for (const auto& [sub, base] : virtual_table.edges)
        if (sub == c && registry.contains(base)) todo.push_back(base);
    }
  }
  return reached.count(b) != 0;
}

/// The class's metaclass as the interpreter derives it: the declared one
/// (default `type`) unless a base's metaclass is more derived.
inline std::string effective_metaclass(const std::string& name, const ClassRegistry& registry) {
  Linearizer lin(registry);
  std::map<std::string, std::string> memo;
  auto rec = [&](auto&& self, const std::string& n) -> std::string {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    auto cls = registry.find(n);
    if (!cls) throw Error(ErrorCode::unknown_base, "unknown class '" + n + "'");
    lin.linearize(n);  // rejects cycles before recursing into bases
    std::string winner = cls->metaclass.value_or("type");
    for (const auto& b : cls->bases) {
      std::string meta = self(self, b.name);
      const auto& lw = lin.linearize(winner);
      const auto& lm = lin.linearize(meta);
      if (std::find(lw.begin(), lw.end(), meta) != lw.end()) continue;
      if (std::find(lm.begin(), lm.end(), winner) != lm.end()) {
        winner = meta;
        continue;
      }
      throw Error(ErrorCode::inconsistent_hierarchy,
                  n + ": metaclass conflict between " + winner + " and " + meta);
    }
    memo.emplace(n, winner);
    return winner;
  };
  return rec(rec, name);
}

/// The class this class is an instance of. `type` is an instance of itself.
inline std::string object_instance_of(const ClassInfo& cls, const ClassRegistry& registry) {
  if (registry.find(cls.name).get() == &cls) return effective_metaclass(cls.name, registry);
  ClassRegistry extended = registry;
  extended.add(cls);
  return effective_metaclass(cls.name, extended);
}

}  // namespace pyts

#endif
