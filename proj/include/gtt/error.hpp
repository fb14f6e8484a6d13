#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtt {

enum class ErrorKind {
  IndexOutOfRange,
  PremiseMismatch,
  ChildCountMismatch,
  FillerConclusionMismatch,
  ScopeMismatch,
  ClassMismatch,
  ArityMismatch,
  SignatureMismatch,
  HeadRequired,
  HeadForbidden,
  TrivialityViolated,
  NotObjectRule,
  NotObjectJudgement,
  NotTight,
  NotSubstitutive,
  NotCongruous,
  NotTypeRespecting,
  NotSubstitutionFree,
  NotHypothesisFree,
  NotAcceptable,
  NotSequential,
  MetaNode,
  MissingWitness,
  MissingRuleImage,
  WitnessFailure,
  StageViolation,
  SymbolArityMismatch,
  SymbolRequired,
  SymbolForbidden,
  CyclicOrder,
  UnknownName,
  ParseError,
};

const char* error_kind_name(ErrorKind k);

// Errors raised by the kernel. `path` is the list of child indices from the
// root of the derivation being processed, when one applies.
class KernelError : public std::runtime_error {
 public:
  KernelError(ErrorKind kind, const std::string& msg, std::vector<std::size_t> path = {});

  ErrorKind kind() const { return kind_; }
  const std::vector<std::size_t>& path() const { return path_; }
  const std::string& detail() const { return detail_; }

  // copy with a child index prepended to the path
  KernelError under(std::size_t child) const;

 private:
  static std::string render(ErrorKind kind, const std::string& msg, const std::vector<std::size_t>& path);
  ErrorKind kind_;
  std::string detail_;
  std::vector<std::size_t> path_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg);

}  // namespace gtt
