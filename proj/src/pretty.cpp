#include "gtt/pretty.hpp"

#include <algorithm>
#include <sstream>

namespace gtt::pretty {

namespace {

std::string args_of(const Signature& sig, const Arity& metas, const Expr& e) {
  if (e.args().empty()) return {};
  std::string s = "(";
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) s += ", ";
    if (e.is_sym() && e.binder(i) > 0) s += "\\" + std::to_string(e.binder(i)) + ".";
    s += show_expr(sig, metas, e.args()[i]);
  }
  return s + ")";
}

}  // namespace

std::string show_expr(const Signature& sig, const Arity& metas, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Var:
      return "#" + std::to_string(e.index());
    case Expr::Kind::Meta: {
      std::string n = e.index() < metas.size() && !metas[e.index()].name.empty() ? metas[e.index()].name
                                                                                 : "?" + std::to_string(e.index());
      return n + args_of(sig, metas, e);
    }
    case Expr::Kind::Sym:
      break;
  }
  const std::string n = e.index() < sig.symbols.size() ? sig.symbols[e.index()].name : "$" + std::to_string(e.index());
  return n + args_of(sig, metas, e);
}

std::string show_context(const Signature& sig, const Arity& metas, const RawContext& G) {
  std::string s;
  for (Position p = 0; p < G.scope(); ++p) {
    if (p) s += ", ";
    s += "#" + std::to_string(p) + " : " + show_expr(sig, metas, G[p]);
  }
  return s;
}

std::string show_judgement(const Signature& sig, const Arity& metas, const Judgement& J) {
  auto x = [&](std::size_t i) { return show_expr(sig, metas, J.slots.at(i)); };
  std::string body;
  switch (J.form) {
    case JudgementForm::IsTy: body = x(0) + " type"; break;
    case JudgementForm::IsTm: body = x(1) + " : " + x(0); break;
    case JudgementForm::TyEq: body = x(0) + " == " + x(1); break;
    case JudgementForm::TmEq: body = x(0) + " == " + x(1) + " : " + x(2); break;
  }
  const std::string c = show_context(sig, metas, J.ctx);
  return (c.empty() ? "" : c + " ") + "|- " + body;
}

std::string show_rule(const Signature& sig, const RawRule& R) {
  std::string top;
  for (std::size_t i = 0; i < R.premises.size(); ++i) {
    if (i) top += "    ";
    top += show_judgement(sig, R.arity, R.premises[i]);
  }
  const std::string bottom = show_judgement(sig, R.arity, R.conclusion);
  const std::size_t w = std::max(top.size(), bottom.size());
  return top + "\n" + std::string(w, '-') + " " + R.name + "\n" + bottom + "\n";
}

namespace {

void show_node(const RawTypeTheory& T, const Arity& metas, const Family<Judgement>& hyps, const Derivation& d,
               std::size_t depth, std::ostringstream& out) {
  std::string label = derivation_kind_name(d.kind);
  switch (d.kind) {
    case Derivation::Kind::Hyp:
    case Derivation::Kind::Var:
      label += " " + std::to_string(d.index);
      break;
    case Derivation::Kind::Equiv:
      label += std::string(" ") + equiv_rule_name(static_cast<EquivRule>(d.index));
      break;
    case Derivation::Kind::Conv:
      label += std::string(" ") + conv_rule_name(static_cast<ConvRule>(d.index));
      break;
    case Derivation::Kind::Rule:
      label += " " + (d.index < T.rules.size() ? T.rules[d.index].name : std::to_string(d.index));
      break;
    default:
      break;
  }
  std::string concl;
  try {
    concl = show_judgement(T.sig, metas, conclusion_of(T, hyps, d));
  } catch (const std::exception& e) {
    concl = std::string("<") + e.what() + ">";
  }
  out << std::string(2 * depth, ' ') << label << "   " << concl << "\n";
  for (const auto& c : d.children) show_node(T, metas, hyps, c, depth + 1, out);
}

}  // namespace

std::string show_derivation(const RawTypeTheory& T, const Arity& metas, const Family<Judgement>& hyps,
                            const Derivation& d) {
  std::ostringstream out;
  show_node(T, metas, hyps, d, 0, out);
  return out.str();
}

std::string show_acceptability(const AcceptabilityReport& r) {
  std::ostringstream out;
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  out << "tight: " << yn(r.tight) << "\npresuppositive: " << yn(r.presuppositive) << "\nsubstitutive: "
      << yn(r.substitutive) << "\ncongruous: " << yn(r.congruous) << "\nacceptable: " << yn(r.acceptable()) << "\n";
  for (const auto& d : r.diagnostics) out << "  " << d << "\n";
  return out.str();
}

}  // namespace gtt::pretty
