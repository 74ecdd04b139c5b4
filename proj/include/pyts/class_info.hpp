#ifndef PYTS_CLASS_INFO_HPP
#define PYTS_CLASS_INFO_HPP

// Surface model of Python classes, before any type is assigned: names,
// bases as written, member declarations and the protocol/ABC flags.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pyts/python/ast.hpp"

namespace pyts {

enum class ClassKind { plain, protocol, abc };

inline std::string_view to_string(ClassKind k) {
  switch (k) {
    case ClassKind::plain: return "plain";
    case ClassKind::protocol: return "protocol";
    case ClassKind::abc: return "abc";
  }
  return "plain";
}

/// A base as written: `list`, `Protocol[T]`, `typing.Generic[K, V]`.
struct BaseRef {
  std::string name;
  std::vector<py::ExprPtr> args;
  SourceLoc loc;
};

enum class MemberKind { method, classmethod, staticmethod, property, attribute, function };

struct ParamDecl {
  std::string name;
  py::ExprPtr annotation;
  py::ParamKind kind = py::ParamKind::positional;
  bool has_default = false;
};

/// A member as declared in a class body.
struct MemberDecl {
  std::string name;
  MemberKind kind = MemberKind::method;
  std::vector<ParamDecl> params;
  py::ExprPtr returns;
  /// Attributes: the annotation (if any) and the assigned value (if any).
  py::ExprPtr annotation;
  py::ExprPtr value;
  bool abstract = false;
  /// Declared through `self.name = ...` inside `__init__`.
  bool instance_attribute = false;
  SourceLoc loc;
};

struct ClassInfo {
  std::string name;
  std::vector<BaseRef> bases;
  std::vector<std::string> type_params;
  std::vector<MemberDecl> members;
  ClassKind kind = ClassKind::plain;
  std::optional<std::string> metaclass;
  bool runtime_checkable = false;
  /// Built into the interpreter (object, int, type, Protocol, ...).
  bool builtin = false;
  /// Created by a literal `type(name, bases, dict)` call.
  bool dynamic = false;
  SourceLoc loc;

  const MemberDecl* find_member(std::string_view n) const {
    for (const auto& m : members)
      if (m.name == n) return &m;
    return nullptr;
  }
};

using ClassInfoPtr = std::shared_ptr<const ClassInfo>;

/// Classes by name: the interpreter's built-in classes plus everything a
/// program defines.
class ClassRegistry {
 public:
  void add(ClassInfo info) {
    std::string key = info.name;
    classes_.insert_or_assign(std::move(key), std::make_shared<const ClassInfo>(std::move(info)));
  }

  ClassInfoPtr find(std::string_view name) const {
    auto it = classes_.find(name);
    return it == classes_.end() ? nullptr : it->second;
  }

  bool contains(std::string_view name) const { return classes_.count(name) != 0; }

  const std::map<std::string, ClassInfoPtr, std::less<>>& all() const { return classes_; }

 private:
  std::map<std::string, ClassInfoPtr, std::less<>> classes_;
};

namespace detail {

inline ClassInfo builtin_class(std::string name, std::vector<std::string> bases,
                               std::optional<std::string> metaclass = std::nullopt,
                               ClassKind kind = ClassKind::plain) {
  ClassInfo c;
  c.name = std::move(name);
  for (auto& b : bases) c.bases.push_back(BaseRef{std::move(b), {}, {}});
  c.metaclass = std::move(metaclass);
  c.kind = kind;
  c.builtin = true;
  return c;
}

}  // namespace detail

/// Built-in classes of the interpreter that programs can name as bases.
inline ClassRegistry builtin_registry() {
  using detail::builtin_class;
  ClassRegistry r;
  r.add(builtin_class("object", {}));
  r.add(builtin_class("type", {"object"}));
  for (const char* n : {"int", "float", "complex", "str", "bytes", "bytearray", "list", "tuple", "set",
                        "frozenset", "dict", "NoneType", "TypeVar"})
    r.add(builtin_class(n, {"object"}));
  r.add(builtin_class("bool", {"int"}));
  r.add(builtin_class("ABCMeta", {"type"}));
  r.add(builtin_class("_ProtocolMeta", {"ABCMeta"}));
  r.add(builtin_class("ABC", {"object"}, "ABCMeta", ClassKind::abc));
  r.add(builtin_class("Generic", {"object"}));
  r.add(builtin_class("Protocol", {"Generic"}, "_ProtocolMeta", ClassKind::protocol));
  return r;
}

/// Names the parser recognizes as the special typing bases.
inline bool is_protocol_base(std::string_view n) { return n == "Protocol"; }
inline bool is_generic_base(std::string_view n) { return n == "Generic"; }

}  // namespace pyts

#endif
