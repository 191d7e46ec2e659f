#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "diffiety/commands.hpp"

int main(int argc, char** argv) {
  using namespace diffiety;
  CLI::App app{"Standard filtrations, variations, morphisms and variational data of ODE diffieties"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommandOptions opt;
  opt.order = default_order();
  bool json = false;
  std::vector<std::string> files;
  std::optional<int> max_level;

  const std::map<std::string, std::string> about{
      {"stats", "L, K, mu, dim R0 and nu of the standard filtration"},
      {"standard-basis", "residual basis and initial forms with entry levels"},
      {"controllability", "exit 0 iff the residual module vanishes"},
      {"check-filtration", "good-filtration axioms of the seed filtration"},
      {"check-variation", "exit 0 iff the field is a variation to the order"},
      {"evolution", "generators of the evolutional diffiety of a variation"},
      {"determining", "determining system of an infinitesimal symmetry ansatz"},
      {"check-morphism", "exit 0 iff the pullback table preserves Omega"},
      {"prolong", "chain images of a morphism filled by the recurrence"},
      {"symmetry-criterion", "verified / not verified up to the order"},
      {"wave-check", "exit 0 iff the wave construction identities hold"},
      {"euler-lagrange", "Euler-Lagrange coefficients e^j"},
      {"poincare-cartan", "Poincare-Cartan form and its correction"},
      {"noether", "charge of a symmetry and its constancy on extremals"},
      {"closed-form", "closed-form data of the constrained problem w' = F"},
  };
  for (const auto& name : command_names()) {
    auto it = about.find(name);
    CLI::App* sub = app.add_subcommand(name, it == about.end() ? "" : it->second);
    sub->add_option("files", files, "problem file, then a morphism file where needed")->required();
    sub->add_option("--order", opt.order, "truncation order")->check(CLI::NonNegativeNumber);
    sub->add_flag("--json", json, "print the report as JSON");
    sub->add_option("--max-level", max_level, "cap on filtration levels")->check(CLI::NonNegativeNumber);
    sub->add_option("--assume", opt.assume, "expression added to the assumption set");
    if (name == "euler-lagrange" || name == "poincare-cartan" || name == "noether")
      sub->add_option("--lagrangian", opt.lagrangian, "Lagrangian f of f dx, or a named id");
    if (name == "check-variation" || name == "evolution" || name == "noether") {
      sub->add_option("--component", opt.components, "field component coordinate=expr");
      sub->add_flag("--prolong", opt.prolong_field, "fill unassigned chain components by the variation rule");
      sub->add_option("--z", opt.z, "z of the spec formula");
      sub->add_option("--p", opt.p, "p^j of the spec formula, one per chain");
      sub->add_option("--zr", opt.zr, "zr entries in the potentials t1, t2, ...");
    }
    if (name == "determining") {
      sub->add_option("--p", opt.p, "p^j, one per chain");
      sub->add_option("--target", opt.targets, "ansatz j:k1,k2 (1-based)");
    }
    if (name == "closed-form") {
      sub->add_option("--F", opt.F, "constraint w' = F");
      sub->add_option("--f", opt.f, "Lagrangian f");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.max_level = max_level;

  std::string command = app.get_subcommands().front()->get_name();
  try {
    Report r = dispatch(command, files, opt);
    std::cout << (json ? r.render_json() : r.render_text());
    if (r.exit_code == 2)
      for (const auto& d : r.diagnostics) std::cerr << d << "\n";
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
