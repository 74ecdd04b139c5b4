#ifndef PYTS_ERROR_HPP
#define PYTS_ERROR_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pyts {

enum class ErrorCode {
  arity_mismatch,
  not_generic,
  invalid_type,
  invalid_arity,
  unknown_name,
  not_an_interface,
  inconsistent_hierarchy,
  unknown_base,
  cyclic_hierarchy,
  missing_member,
  bound_violated,
  unknown_annotation,
  misused_type_var,
  name_clash,
  syntax_error,
  usage,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::arity_mismatch: return "ArityMismatch";
    case ErrorCode::not_generic: return "NotGeneric";
    case ErrorCode::invalid_type: return "InvalidType";
    case ErrorCode::invalid_arity: return "InvalidArity";
    case ErrorCode::unknown_name: return "UnknownName";
    case ErrorCode::not_an_interface: return "NotAnInterface";
    case ErrorCode::inconsistent_hierarchy: return "InconsistentHierarchy";
    case ErrorCode::unknown_base: return "UnknownBase";
    case ErrorCode::cyclic_hierarchy: return "CyclicHierarchy";
    case ErrorCode::missing_member: return "MissingMember";
    case ErrorCode::bound_violated: return "BoundViolated";
    case ErrorCode::unknown_annotation: return "UnknownAnnotation";
    case ErrorCode::misused_type_var: return "MisusedTypeVar";
    case ErrorCode::name_clash: return "NameClash";
    case ErrorCode::syntax_error: return "SyntaxError";
    case ErrorCode::usage: return "UsageError";
  }
  return "Error";
}

struct SourceLoc {
  std::string file;
  int line = 0;
  int column = 0;
};

inline std::string to_string(const SourceLoc& loc) {
  std::string s = loc.file.empty() ? std::string("<input>") : loc.file;
  s += ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column);
  return s;
}

/// Every failure raised by the engine carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  Error(ErrorCode code, const SourceLoc& loc, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + to_string(loc) + ": " + message),
        code_(code),
        message_(message),
        loc_(loc) {}

  ErrorCode code() const noexcept { return code_; }
  /// The text without the code prefix (and without the location, when the
  /// error carries one).
  const std::string& message() const noexcept { return message_; }
  const std::optional<SourceLoc>& loc() const noexcept { return loc_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<SourceLoc> loc_;
};

/// A non-fatal finding (a skipped construct) or a collected error.
struct Diagnostic {
  enum class Severity { warning, error };
  Severity severity = Severity::warning;
  std::string code;
  SourceLoc loc;
  std::string message;
};

inline std::string to_string(const Diagnostic& d) {
  return to_string(d.loc) + ": " + (d.severity == Diagnostic::Severity::warning ? "warning" : "error") +
         " [" + d.code + "] " + d.message;
}

inline Error syntax_error(const SourceLoc& loc, const std::string& what) {
  return Error(ErrorCode::syntax_error, loc, what);
}

}  // namespace pyts

#endif
