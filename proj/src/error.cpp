#include "gtt/error.hpp"

#include <sstream>

namespace gtt {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::PremiseMismatch: return "PremiseMismatch";
    case ErrorKind::ChildCountMismatch: return "ChildCountMismatch";
    case ErrorKind::FillerConclusionMismatch: return "FillerConclusionMismatch";
    case ErrorKind::ScopeMismatch: return "ScopeMismatch";
    case ErrorKind::ClassMismatch: return "ClassMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::HeadRequired: return "HeadRequired";
    case ErrorKind::HeadForbidden: return "HeadForbidden";
    case ErrorKind::TrivialityViolated: return "TrivialityViolated";
    case ErrorKind::NotObjectRule: return "NotObjectRule";
    case ErrorKind::NotObjectJudgement: return "NotObjectJudgement";
    case ErrorKind::NotTight: return "NotTight";
    case ErrorKind::NotSubstitutive: return "NotSubstitutive";
    case ErrorKind::NotCongruous: return "NotCongruous";
    case ErrorKind::NotTypeRespecting: return "NotTypeRespecting";
    case ErrorKind::NotSubstitutionFree: return "NotSubstitutionFree";
    case ErrorKind::NotHypothesisFree: return "NotHypothesisFree";
    case ErrorKind::NotAcceptable: return "NotAcceptable";
    case ErrorKind::NotSequential: return "NotSequential";
    case ErrorKind::MetaNode: return "MetaNode";
    case ErrorKind::MissingWitness: return "MissingWitness";
    case ErrorKind::MissingRuleImage: return "MissingRuleImage";
    case ErrorKind::WitnessFailure: return "WitnessFailure";
    case ErrorKind::StageViolation: return "StageViolation";
    case ErrorKind::SymbolArityMismatch: return "SymbolArityMismatch";
    case ErrorKind::SymbolRequired: return "SymbolRequired";
    case ErrorKind::SymbolForbidden: return "SymbolForbidden";
    case ErrorKind::CyclicOrder: return "CyclicOrder";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

KernelError::KernelError(ErrorKind kind, const std::string& msg, std::vector<std::size_t> path)
    : std::runtime_error(render(kind, msg, path)), kind_(kind), detail_(msg), path_(std::move(path)) {}

KernelError KernelError::under(std::size_t child) const {
  std::vector<std::size_t> p;
  p.reserve(path_.size() + 1);
  p.push_back(child);
  p.insert(p.end(), path_.begin(), path_.end());
  return KernelError(kind_, detail_, std::move(p));
}

std::string KernelError::render(ErrorKind kind, const std::string& msg, const std::vector<std::size_t>& path) {
  std::ostringstream os;
  os << error_kind_name(kind);
  if (!path.empty()) {
    os << " at /";
    for (std::size_t i = 0; i < path.size(); ++i) os << (i ? "/" : "") << path[i];
  }
  os << ": " << msg;
  return os.str();
}

void fail(ErrorKind kind, const std::string& msg) { throw KernelError(kind, msg); }

}  // namespace gtt
