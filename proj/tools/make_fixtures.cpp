// Writes the bundled theories, the well-presented MLTT spec, the type-in-type
// replacement script and a few derivations as JSON fixtures.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "gtt/bundled.hpp"
#include "gtt/json_io.hpp"
#include "support/corpus.hpp"

using namespace gtt;
namespace fs = std::filesystem;

namespace {

void put(const fs::path& p, const io::json& j) {
  io::write_text(p, io::dump_canonical(j));
  std::cout << "wrote " << p.string() << "\n";
}

io::TheoryFile file_of(const bundled::Bundle& b) {
  io::TheoryFile f{b.name, b.theory, b.witnesses, std::nullopt};
  if (!b.order.empty()) f.order = b.order;
  return f;
}

const Derivation& find_item(const std::vector<corpus::Item>& items, const std::string& prefix) {
  for (const auto& it : items)
    if (it.label.rfind(prefix, 0) == 0) return it.deriv;
  throw std::runtime_error("no corpus item " + prefix);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"write JSON fixtures"};
  std::string dir = "theories";
  app.add_option("dir", dir, "output directory");
  CLI11_PARSE(app, argc, argv);
  const fs::path out(dir);
  fs::create_directories(out / "derivations");

  put(out / "mltt_pi.json", io::theory_to_json(file_of(bundled::mltt_pi())));
  const bundled::Bundle base = bundled::mltt_pi_base();
  put(out / "mltt_pi_base.json", io::theory_to_json(file_of(base)));
  const bundled::Bundle tt = bundled::type_in_type();
  put(out / "type_in_type.json", io::theory_to_json(file_of(tt)));
  put(out / "cyclic_quantifier.json", io::theory_to_json(file_of(bundled::cyclic_quantifier())));
  put(out / "universe_el.json", io::theory_to_json(file_of(bundled::universe_el())));
  for (int k = 1; k <= 6; ++k)
    put(out / ("app_" + std::to_string(k) + ".json"), io::theory_to_json(file_of(bundled::app_variant(k))));
  put(out / "mltt_pi_spec.json", io::spec_to_json(bundled::mltt_pi_spec()));
  put(out / "pi_congruence_expected.json", io::rule_to_json(bundled::mltt_pi().theory.sig, bundled::pi_congruence_expected()));

  {
    io::json steps = io::json::array();
    ReplacementBuilder B = start_replacement(tt.theory);
    for (const auto& s : bundled::type_in_type_replacement()) {
      steps.push_back(io::step_to_json(B.theory, tt.theory, s));
      replacement_step(B, s);
    }
    put(out / "type_in_type_replacement.json", io::json{{"target", "type_in_type.json"}, {"steps", steps}});
  }

  const RawTypeTheory& T = base.theory;
  auto deriv = [&](const Derivation& d) { return io::derivation_file_to_json(T, io::DerivationFile{{}, {}, d}); };
  const auto subst = corpus::substitution_corpus(base, 7, 12);
  put(out / "derivations" / "closing_subst.json", deriv(find_item(subst, "closing substitution")));
  put(out / "derivations" / "weakening.json", deriv(find_item(subst, "weakening")));
  put(out / "derivations" / "eq_subst.json", deriv(find_item(subst, "equality substitution")));
  put(out / "derivations" / "app_hypothetical_closed.json", deriv(find_item(subst, "hypothetical application ")));
  {
    corpus::Generator gen(base, 11);
    const corpus::SimpleType O{corpus::SimpleType::Kind::O, nullptr, nullptr};
    put(out / "derivations" / "app_hypothetical.json", deriv(corpus::hypothetical_app(gen, O, O)));
  }
  const auto pairs = corpus::typing_pairs(base, 5, 2);
  put(out / "derivations" / "typing_direct.json", deriv(pairs[0].d1));
  put(out / "derivations" / "typing_converted.json", deriv(pairs[0].d2));
  {
    // app(A, B, s, t) over metavariables, for natural-type
    const bundled::Bundle m = bundled::mltt_pi();
    const Signature& sig = m.theory.sig;
    Arity a{ArityArg{SyntacticClass::Ty, 0, "A"}, ArityArg{SyntacticClass::Ty, 1, "B"},
            ArityArg{SyntacticClass::Tm, 0, "s"}, ArityArg{SyntacticClass::Tm, 0, "t"}};
    const Expr app = make_sym(sig, m.theory.symbol_index("app"),
                              {Expr::meta(0), Expr::meta(1, {Expr::var(0)}), Expr::meta(2), Expr::meta(3)});
    put(out / "derivations" / "app_term.json",
        io::json{{"arity", io::arity_to_json(a)}, {"cxt", io::json::array()}, {"term", io::expr_to_json(sig, a, app)}});
  }
  return 0;
}
