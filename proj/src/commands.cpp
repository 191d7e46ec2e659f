#include <cstdlib>
#include <functional>
#include <map>

#include "diffiety/commands.hpp"
#include "diffiety/problem.hpp"
#include "diffiety/variational.hpp"
#include "diffiety/variations.hpp"

namespace diffiety {

int default_order() {
  if (const char* env = std::getenv("DIFFIETY_ORDER")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && end != env && v >= 0 && v <= 1000) return static_cast<int>(v);
  }
  return 8;
}

namespace {

struct Context {
  const std::vector<std::string>& files;
  const CommandOptions& opt;
  Report& report;

  const std::string& file(std::size_t i, const char* what) const {
    if (files.size() <= i) throw MalformedInput(std::string("missing ") + what + " file argument");
    return files[i];
  }
};

ProblemFile problem(const Context& c) {
  ProblemFile p = load_problem(c.file(0, "problem"));
  for (const auto& a : c.opt.assume) p.diffiety.assumptions().add(p.parse(a));
  return p;
}

std::optional<int> level_cap(const Context& c, const ProblemFile& p) { return c.opt.max_level ? c.opt.max_level : p.max_level; }

StandardBasis basis(const Context& c, const ProblemFile& p) { return standard_basis(p.lifted(), level_cap(c, p)); }

AtomId single_atom_of(const Expr& e, const std::string& text) {
  auto atoms = free_atoms(e);
  if (atoms.size() != 1 || e != Expr::atom(atoms.front())) throw MalformedInput("'" + text + "' is not a coordinate");
  return atoms.front();
}

VectorField field(const Context& c, const ProblemFile& p, const Diffiety& d, const StandardBasis* b) {
  if (c.opt.z || !c.opt.p.empty() || !c.opt.zr.empty()) {
    if (!b) throw MalformedInput("spec fields need the standard basis");
    VariationSpec spec;
    spec.z = c.opt.z ? p.parse(*c.opt.z) : Expr();
    for (const auto& s : c.opt.p) spec.p.push_back(p.parse(s));
    Scope sc = p.scope();
    auto base = sc.resolve;
    sc.resolve = [base](const std::string& name, std::optional<int> index) -> std::optional<Expr> {
      if (!index && name.size() > 1 && name[0] == 't' && name.find_first_not_of("0123456789", 1) == std::string::npos)
        return var(name);
      return base(name, index);
    };
    for (const auto& s : c.opt.zr) spec.zr.push_back(parse_expr(s, sc));
    return variation_from_spec(*b, spec, c.opt.order);
  }
  if (c.opt.components.empty()) throw MalformedInput("give the field with --component coordinate=expr or --z/--p");
  VectorField z;
  for (const auto& s : c.opt.components) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw MalformedInput("expected coordinate=expr, got '" + s + "'");
    AtomId a = single_atom_of(p.parse(s.substr(0, eq)), s.substr(0, eq));
    if (!d.is_coordinate(a) || d.classify(a)->role == Role::Parameter) throw MalformedInput("'" + s.substr(0, eq) + "' is not a coordinate");
    z.set(a, p.parse(s.substr(eq + 1)));
  }
  return c.opt.prolong_field ? prolonged(d, z) : z;
}

Expr lagrangian(const Context& c, const ProblemFile& p) {
  if (c.opt.lagrangian) {
    if (auto it = p.named.find(*c.opt.lagrangian); it != p.named.end()) return it->second;
    return p.parse(*c.opt.lagrangian);
  }
  if (auto it = p.named.find("lagrangian"); it != p.named.end()) return it->second;
  throw MalformedInput("no Lagrangian: pass --lagrangian or add 'lagrangian = ...' under [named]");
}

Json expr_list(const std::vector<Expr>& es) {
  Json out = Json::array();
  for (const auto& e : es) out.push_back(e.str());
  return out;
}

void stats(const Context& c) {
  ProblemFile p = problem(c);
  StandardBasis b = basis(c, p);
  DiffietyStats s = b.stats();
  Json& r = c.report.results;
  r["mu"] = s.mu;
  r["dim_R0"] = s.dim_r0;
  r["L"] = s.L;
  r["K"] = s.K;
  r["nu"] = s.nu;
  Json levels = Json::array();
  for (const auto& f : b.initial_forms()) levels.push_back(f.entry_level);
  r["initial_entry_levels"] = levels;
}

void standard_basis_cmd(const Context& c) {
  ProblemFile p = problem(c);
  StandardBasis b = basis(c, p);
  const Diffiety& d = b.diffiety();
  Json& r = c.report.results;
  r["L"] = b.filtration().L;
  r["K"] = b.filtration().K;
  r["residual"] = forms_json(d, b.tau());
  Json chains = Json::array();
  for (std::size_t j = 0; j < b.mu(); ++j) {
    Json chain;
    chain["entry_level"] = b.initial_forms()[j].entry_level;
    Json forms = Json::array();
    for (int s = 0; s <= c.opt.order; ++s) forms.push_back(form_json(d, b.chain(j, s)));
    chain["pi"] = forms;
    chains.push_back(chain);
  }
  r["chains"] = chains;
  r["order"] = c.opt.order;
}

void controllability(const Context& c) {
  ProblemFile p = problem(c);
  Diffiety d = p.lifted();
  ResidualModule m = residual_module(d, level_cap(c, p));
  Json& r = c.report.results;
  bool ok = m.span.is_zero();
  r["controllable"] = ok;
  r["rank_R0"] = m.span.rank();
  r["R0"] = forms_json(d, m.span.basis());
  r["flat"] = m.flat;
  if (m.potentials.functions) r["potentials"] = expr_list(*m.potentials.functions);
  r["potentials_status"] = m.potentials.status;
  c.report.exit_code = ok ? 0 : 1;
}

void check_filtration(const Context& c) {
  ProblemFile p = problem(c);
  Diffiety d = p.lifted();
  int l_max = c.opt.max_level.value_or(c.opt.order);
  FiltrationCheck f = check_good_filtration(d, l_max);
  Json& r = c.report.results;
  r["l_max"] = l_max;
  r["good"] = f.good;
  Json levels = Json::array();
  for (const auto& l : f.levels) levels.push_back(Json{{"level", l.level}, {"contained", l.contained}, {"generating", l.generating}});
  r["levels"] = levels;
  r["first_failure"] = f.first_failure ? Json(*f.first_failure) : Json(nullptr);
  r["equality_from"] = f.equality_from ? Json(*f.equality_from) : Json(nullptr);
}

bool needs_basis(const CommandOptions& o) { return o.z || !o.p.empty() || !o.zr.empty(); }

void check_variation_cmd(const Context& c) {
  ProblemFile p = problem(c);
  Diffiety d = p.lifted();
  std::optional<StandardBasis> b;
  if (needs_basis(c.opt)) b = basis(c, p);
  VectorField z = field(c, p, d, b ? &*b : nullptr);
  VariationCheck v = check_variation(d, z, c.opt.order);
  Json& r = c.report.results;
  r["variation"] = v.ok;
  r["order"] = c.opt.order;
  if (!v.ok) {
    r["failing"] = coordinate_name(*v.failing);
    r["defect"] = v.defect.str();
  }
  c.report.exit_code = v.ok ? 0 : 1;
}

void evolution(const Context& c) {
  ProblemFile p = problem(c);
  Diffiety d = p.lifted();
  std::optional<StandardBasis> b;
  if (needs_basis(c.opt)) b = basis(c, p);
  EvolutionalDiffiety ev = evolutional_generators(d, field(c, p, d, b ? &*b : nullptr), c.opt.order);
  Json& r = c.report.results;
  r["t"] = coordinate_name(ev.t);
  Json gens = Json::array();
  for (const auto& g : ev.generators) gens.push_back(Json{{"coordinate", coordinate_name(g.coordinate)}, {"form", form_json(d, g.form)}});
  r["generators"] = gens;
}

void determining(const Context& c) {
  ProblemFile p = problem(c);
  StandardBasis b = basis(c, p);
  std::vector<Expr> ps;
  for (const auto& s : c.opt.p) ps.push_back(p.parse(s));
  std::vector<AnsatzTarget> ansatz;
  for (const auto& t : c.opt.targets) {
    auto colon = t.find(':');
    if (colon == std::string::npos) throw MalformedInput("target must look like j:k1,k2, got '" + t + "'");
    AnsatzTarget a;
    try {
      a.chain = static_cast<std::size_t>(std::stoi(t.substr(0, colon)) - 1);
      std::string rest = t.substr(colon + 1);
      for (std::size_t pos = 0; pos < rest.size();) {
        std::size_t comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        a.support.push_back(static_cast<std::size_t>(std::stoi(rest.substr(pos, comma - pos)) - 1));
        pos = comma + 1;
      }
    } catch (const std::logic_error&) {
      throw MalformedInput("target must look like j:k1,k2, got '" + t + "'");
    }
    ansatz.push_back(a);
  }
  if (ansatz.empty()) ansatz.push_back({0, {0}});
  DeterminingSystem ds = determining_system(b, ansatz, ps, c.opt.order);
  Json& r = c.report.results;
  Json solved = Json::object();
  for (const auto& [k, v] : ds.solved) solved[k] = v.str();
  r["solved"] = solved;
  r["constraints"] = expr_list(ds.constraints);
}

MorphismSpec morphism(const Context& c, const ProblemFile& p) {
  return parse_morphism(p, read_text_file(c.file(1, "morphism")));
}

void check_morphism_cmd(const Context& c) {
  ProblemFile p = problem(c);
  const Diffiety& d = p.diffiety;
  MorphismSpec m = prolong(d, morphism(c, p), c.opt.order + d.max_seed_level() + 1);
  MorphismCheck k = check_morphism(d, m, c.opt.order);
  Json& r = c.report.results;
  r["morphism"] = k.ok;
  r["order"] = c.opt.order;
  if (!k.ok) {
    r["failing"] = coordinate_name(*k.failing);
    r["remainder"] = form_json(d, k.remainder);
  }
  c.report.exit_code = k.ok ? 0 : 1;
}

void prolong_cmd(const Context& c) {
  ProblemFile p = problem(c);
  const Diffiety& d = p.diffiety;
  MorphismSpec m = prolong(d, morphism(c, p), c.opt.order);
  Json& r = c.report.results;
  r["X"] = m.X.str();
  std::vector<AtomId> keys;
  for (const auto& [a, e] : m.images) keys.push_back(a);
  std::sort(keys.begin(), keys.end(), [&d](AtomId a, AtomId b) {
    auto ka = d.classify(a), kb = d.classify(b);
    if (ka->role != kb->role) return ka->role == Role::Single;
    if (ka->decl != kb->decl) return ka->decl < kb->decl;
    return ka->index < kb->index;
  });
  Json images = Json::object();
  for (AtomId a : keys) images[coordinate_name(a)] = m.images.at(a).str();
  r["images"] = images;
  r["order"] = m.order;
}

void symmetry(const Context& c) {
  ProblemFile p = problem(c);
  StandardBasis b = basis(c, p);
  SymmetryReport s = symmetry_criterion(b, morphism(c, p), c.opt.order);
  Json& r = c.report.results;
  r["residual_ok"] = s.residual_ok;
  r["initial_forms_recovered"] = s.initial_forms_recovered;
  r["verified_to"] = s.verified_to;
  r["verdict"] = s.verified() ? "symmetry verified at order " + std::to_string(s.verified_to)
                              : "not verified up to order " + std::to_string(s.verified_to);
}

void wave(const Context& c) {
  WaveData w = parse_wave(read_text_file(c.file(0, "wave")));
  WaveReport rep = wave_check(w);
  Json& r = c.report.results;
  Json ids = Json::array();
  for (const auto& i : rep.identities) ids.push_back(Json{{"identity", i.label}, {"holds", i.holds}, {"residual", i.residual.str()}});
  r["identities"] = ids;
  r["forward_jacobian_nonzero"] = rep.forward_jacobian_nonzero;
  r["backward_jacobian_nonzero"] = rep.backward_jacobian_nonzero;
  r["all_hold"] = rep.all_hold();
  c.report.exit_code = rep.all_hold() ? 0 : 1;
}

void euler_lagrange_cmd(const Context& c) {
  ProblemFile p = problem(c);
  StandardBasis b = basis(c, p);
  c.report.results["e"] = expr_list(euler_lagrange(b, lagrangian(c, p)));
}

void poincare_cartan_cmd(const Context& c) {
  ProblemFile p = problem(c);
  StandardBasis b = basis(c, p);
  PoincareCartanData pc = poincare_cartan(b, lagrangian(c, p));
  const Diffiety& d = b.diffiety();
  Json& r = c.report.results;
  r["correction"] = form_json(d, pc.correction);
  r["pc_form"] = form_json(d, pc.pc_form);
  r["e"] = expr_list(pc.el_coefficients);
}

void noether(const Context& c) {
  ProblemFile p = problem(c);
  StandardBasis b = basis(c, p);
  const Diffiety& d = b.diffiety();
  NoetherCharge q = noether_charge(b, lagrangian(c, p), field(c, p, d, &b), c.opt.order);
  Json& r = c.report.results;
  r["charge"] = q.charge.str();
  r["constant_on_extremals"] = q.constant_on_extremals;
  if (!q.note.empty()) r["note"] = q.note;
}

void closed_form(const Context& c) {
  ProblemFile p = problem(c);
  auto pick = [&](const std::optional<std::string>& flag, const char* name) {
    if (flag) return p.parse(*flag);
    if (auto it = p.named.find(name); it != p.named.end()) return it->second;
    throw MalformedInput(std::string("closed form needs --") + (std::string(name) == "constraint" ? "F" : "f") +
                         " or a named '" + name + "'");
  };
  Expr F = pick(c.opt.F, "constraint"), f = pick(c.opt.f, "lagrangian");
  ClosedFormData cf = closed_form_problem(F, f);
  Diffiety d = constrained_problem(F);
  Json& r = c.report.results;
  r["a"] = cf.a.str();
  r["b"] = cf.b.str();
  r["A"] = cf.A.str();
  r["B"] = cf.B.str();
  r["e1"] = cf.e1.str();
  r["e2"] = cf.e2.str();
  r["pc_form_reference"] = form_json(d, cf.pc_form);
  r["pc_form_consistent"] = form_json(d, cf.pc_form_consistent);
  StandardBasis b = standard_basis(d);
  PoincareCartanData pc = poincare_cartan(b, f);
  r["generic_el_form_agrees"] = pc.el_form == cf.el_form;
  r["generic_pc_form_agrees_reference"] = pc.pc_form == cf.pc_form;
  r["generic_pc_form_agrees_consistent"] = pc.pc_form == cf.pc_form_consistent;
}

const std::map<std::string, std::function<void(const Context&)>>& table() {
  static const std::map<std::string, std::function<void(const Context&)>> t{
      {"stats", stats},
      {"standard-basis", standard_basis_cmd},
      {"controllability", controllability},
      {"check-filtration", check_filtration},
      {"check-variation", check_variation_cmd},
      {"evolution", evolution},
      {"determining", determining},
      {"check-morphism", check_morphism_cmd},
      {"prolong", prolong_cmd},
      {"symmetry-criterion", symmetry},
      {"wave-check", wave},
      {"euler-lagrange", euler_lagrange_cmd},
      {"poincare-cartan", poincare_cartan_cmd},
      {"noether", noether},
      {"closed-form", closed_form},
  };
  return t;
}

} // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : table()) out.push_back(k);
    return out;
  }();
  return names;
}

Report dispatch(const std::string& command, const std::vector<std::string>& files, const CommandOptions& opt) {
  Report report;
  report.command = command;
  report.args = files;
  report.args.push_back("--order=" + std::to_string(opt.order));
  if (opt.max_level) report.args.push_back("--max-level=" + std::to_string(*opt.max_level));
  auto it = table().find(command);
  if (it == table().end()) {
    report.exit_code = 2;
    report.diagnostics.push_back("error: unknown command '" + command + "'");
    return report;
  }
  try {
    it->second(Context{files, opt, report});
  } catch (const Error& e) {
    report.results = Json::object();
    report.exit_code = 2;
    report.diagnostics.push_back(std::string("error: ") + e.what());
  }
  return report;
}

} // namespace diffiety
