#pragma once

// JSON reading and writing for every kernel object. Emission is canonical:
// object keys sorted, so equal objects print byte-equal. Names resolve
// against the signature (symbols) and the ambient arity (metavariables);
// metavariables are written by name when the name is unique, by index
// otherwise. Malformed input is KernelError(ParseError) with a location,
// unresolved names are UnknownName.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gtt/maps.hpp"

namespace gtt::io {

using nlohmann::json;

// text -> json; syntax errors carry line and column
json parse_json_text(const std::string& text, const std::string& origin = "<input>");
json read_json_file(const std::filesystem::path& p);
std::string dump_canonical(const json& j);  // two-space indent, sorted keys, trailing newline
void write_text(const std::optional<std::filesystem::path>& out, const std::string& text);

// ---- syntax

json arity_to_json(const Arity& a);
Arity arity_from_json(const json& j, const std::string& where = "arity");

json signature_to_json(const Signature& sig);
Signature signature_from_json(const json& j, const std::string& where = "signature");

json expr_to_json(const Signature& sig, const Arity& metas, const Expr& e);
Expr expr_from_json(const Signature& sig, const Arity& metas, const json& j, const std::string& where = "expr");

json context_to_json(const Signature& sig, const Arity& metas, const RawContext& G);
RawContext context_from_json(const Signature& sig, const Arity& metas, const json& j, const std::string& where = "cxt");

json judgement_to_json(const Signature& sig, const Arity& metas, const Judgement& J);
Judgement judgement_from_json(const Signature& sig, const Arity& metas, const json& j,
                              const std::string& where = "judgement");

// boundary slots only, keyed as in judgements
json slots_to_json(const Signature& sig, const Arity& metas, JudgementForm form, Scope scope,
                   const std::vector<Expr>& slots);
std::vector<Expr> slots_from_json(const Signature& sig, const Arity& metas, JudgementForm form, const json& j,
                                  const std::string& where);

json rule_to_json(const Signature& sig, const RawRule& R);
RawRule rule_from_json(const Signature& sig, const json& j, const std::string& where = "rule");

// ---- derivations

// Rule nodes name rules of T; metas is the ambient arity.
json derivation_to_json(const RawTypeTheory& T, const Arity& metas, const Derivation& d);
Derivation derivation_from_json(const RawTypeTheory& T, const Arity& metas, const json& j,
                                const std::string& where = "derivation");

json witnesses_to_json(const RawTypeTheory& T, const TheoryWitnesses& W);
// witnesses of a rule use that rule's arity
TheoryWitnesses witnesses_from_json(const RawTypeTheory& T, const json& j, const std::string& where = "witnesses");

// A derivation file: {"arity", "hypotheses", "derivation"}; a bare node is
// accepted too.
struct DerivationFile {
  Arity arity;
  Family<Judgement> hyps;
  Derivation deriv;
};
json derivation_file_to_json(const RawTypeTheory& T, const DerivationFile& f);
DerivationFile derivation_file_from_json(const RawTypeTheory& T, const json& j);

// ---- theories

struct TheoryFile {
  std::string name;
  RawTypeTheory theory;
  TheoryWitnesses witnesses;
  std::optional<std::vector<std::pair<std::size_t, std::size_t>>> order;
};
json theory_to_json(const TheoryFile& f);
TheoryFile theory_from_json(const json& j);

// well-presented specs: rules carry premise families and conclusion boundaries
json spec_to_json(const WellPresentedTheorySpec& s);
WellPresentedTheorySpec spec_from_json(const json& j);
// a document is a spec when its rules carry conclusion boundaries
bool is_spec_document(const json& j);

// ---- maps and replacement

json syntax_map_to_json(const RawSyntaxMap& f);
// rule images named by src rule, null when absent
json theory_map_to_json(const RawTypeTheory& src, const RawTypeTheory& dst, const RawTheoryMap& F);

// A step is parsed over the theory built so far and the target.
json step_to_json(const RawTypeTheory& current, const RawTypeTheory& target, const ReplacementStep& s);
ReplacementStep step_from_json(const RawTypeTheory& current, const RawTypeTheory& target, const json& j,
                               const std::string& where = "step");

}  // namespace gtt::io
