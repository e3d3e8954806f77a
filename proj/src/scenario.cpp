#include "pem/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pem/checks.hpp"

namespace pem {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') depth++;
    if (c == ')') depth--;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    return Rational::from_double(std::stod(s));
  }
  return Rational::from_double(std::stod(s.substr(0, slash))) /
         Rational::from_double(std::stod(s.substr(slash + 1)));
}

struct CheckInfo {
  double analytic_tol;
  double fd_tol;  // < 0: same as analytic (check has no fd variant)
  const char* requires_stage;  // nullptr: factors only
};

const std::map<std::string, CheckInfo>& check_registry() {
  static const std::map<std::string, CheckInfo> reg = {
      {"factor-einstein", {1e-7, 1e-4, nullptr}},
      {"poincare-einstein", {1e-7, 1e-4, "poincare"}},
      {"stage-einstein", {1e-7, 1e-4, "recursion"}},
      {"ambient", {1e-7, 1e-4, "ambient"}},
      {"cone-einstein", {1e-7, 1e-4, "cone"}},
      {"cone-flatness", {1e-8, -1, "cone"}},
      {"loop-identity", {1e-7, -1, "cone"}},
      {"cone-equivalence", {1e-9, -1, "cone_product"}},
      {"coord-roundtrip", {1e-12, -1, nullptr}},
      {"dilation", {1e-9, -1, nullptr}},
      {"homothety-gradient", {1e-9, -1, "ambient"}},
      {"killing", {1e-7, -1, "killing"}},
      {"bach-boundary", {1e-5, -1, nullptr}},
      {"bach-flat4", {1e-10, -1, nullptr}},
      {"drag", {1e-6, -1, nullptr}},
      {"transverse", {1e-5, -1, "cone"}},
      {"normal-form", {1e-6, -1, "ambient"}},
      {"mu-arithmetic", {0.0, -1, nullptr}},
  };
  return reg;
}

const std::set<std::string>& known_stages() {
  static const std::set<std::string> s = {"cone",    "cone_product", "ambient",
                                          "poincare", "killing",     "recursion"};
  return s;
}

}  // namespace

double default_tolerance(const std::string& check, TolTier tier) {
  const auto& reg = check_registry();
  auto it = reg.find(check);
  if (it == reg.end()) throw ValidationError("unknown check '" + check + "'");
  if (tier == TolTier::finite_difference && it->second.fd_tol >= 0.0) {
    return it->second.fd_tol;
  }
  return it->second.analytic_tol;
}

ScenarioConfig load_scenario_text(const std::string& text, const std::string& origin) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  std::vector<std::string> problems;

  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ParseError(origin + ":" + std::to_string(lineno) + ":" +
                         std::to_string(line.find('[') + 1) + ": unterminated section");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ":1: expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ":1: empty key");
    }

    try {
      if (section == "scenario") {
        if (key == "name") cfg.name = value;
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "samples") cfg.samples = std::stoi(value);
        else problems.push_back("unknown [scenario] key '" + key + "'");
      } else if (section == "factors") {
        cfg.factor_names[key] = value;
      } else if (section == "construct") {
        if (key == "chain") {
          cfg.chain = split_list(value);
        } else if (key == "mu") {
          if (value != "auto") cfg.mu_override = parse_rational(value);
        } else if (key == "dilation_alpha") {
          cfg.dilation_alpha = std::stod(value);
        } else {
          problems.push_back("unknown [construct] key '" + key + "'");
        }
      } else if (section == "checks") {
        CheckRequest req{key, std::nullopt};
        if (value != "default") req.tol = std::stod(value);
        cfg.checks.push_back(req);
      } else if (section == "expect") {
        cfg.expects[key] = value;
      } else if (section == "output") {
        if (key == "path") cfg.out_path = value;
        else if (key == "format") cfg.format = value;
        else problems.push_back("unknown [output] key '" + key + "'");
      } else {
        problems.push_back("line " + std::to_string(lineno) + ": unknown section [" +
                           section + "]");
      }
    } catch (const ValidationError& e) {
      problems.push_back(e.what());
    } catch (const std::exception& e) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ":" +
                       std::to_string(eq + 2) + ": bad value '" + value + "' (" +
                       e.what() + ")");
    }
  }

  // resolve factors
  auto resolve = [&](const std::string& key) -> std::optional<EinsteinSpec> {
    auto it = cfg.factor_names.find(key);
    if (it == cfg.factor_names.end()) return std::nullopt;
    try {
      return catalog_lookup(it->second);
    } catch (const ValidationError& e) {
      problems.push_back(std::string(e.what()));
      return std::nullopt;
    }
  };
  cfg.g1 = resolve("g1");
  cfg.g2 = resolve("g2");
  cfg.g0 = resolve("g0");
  if (auto it = cfg.factor_names.find("list"); it != cfg.factor_names.end()) {
    for (const auto& nm : split_list(it->second)) {
      try {
        cfg.recursion_list.push_back(catalog_lookup(nm));
      } catch (const ValidationError& e) {
        problems.push_back(std::string(e.what()));
      }
    }
  }

  // validate chain and checks
  for (const auto& st : cfg.chain) {
    if (!known_stages().count(st)) problems.push_back("unknown chain stage '" + st + "'");
  }
  auto has_stage = [&](const char* st) {
    return std::find(cfg.chain.begin(), cfg.chain.end(), st) != cfg.chain.end();
  };
  if (has_stage("killing") && !has_stage("poincare")) {
    problems.push_back("chain stage 'killing' requires a 'poincare' stage");
  }
  if (has_stage("recursion") && (!cfg.g0 || cfg.recursion_list.empty())) {
    problems.push_back("chain stage 'recursion' requires factors g0 and list");
  }
  const auto& reg = check_registry();
  for (const auto& c : cfg.checks) {
    auto it = reg.find(c.name);
    if (it == reg.end()) {
      problems.push_back("unknown check '" + c.name + "'");
      continue;
    }
    if (it->second.requires_stage && !has_stage(it->second.requires_stage)) {
      problems.push_back("check '" + c.name + "' requires chain stage '" +
                         it->second.requires_stage + "'");
    }
  }
  const bool needs_g1 =
      !cfg.checks.empty() &&
      !(cfg.checks.size() == 1 && cfg.checks[0].name == "bach-flat4");
  if (needs_g1 && !cfg.g1 && !cfg.g0) {
    problems.push_back("no factors declared");
  }

  // abstract factors (no coordinate model) only admit arithmetic checks
  auto is_abstract = [](const std::optional<EinsteinSpec>& s) {
    return s && s->m > 0 && s->patch.dim() == 0;
  };
  if (is_abstract(cfg.g1) || is_abstract(cfg.g2)) {
    for (const auto& c : cfg.checks) {
      if (c.name != "mu-arithmetic") {
        problems.push_back("abstract factors admit only 'mu-arithmetic', not '" +
                           c.name + "'");
      }
    }
  }

  if (!problems.empty()) {
    std::string msg = "scenario '" + cfg.name + "' invalid:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
  return cfg;
}

const std::map<std::string, std::string>& builtin_scenarios() {
  static const std::map<std::string, std::string> reg = {
      {"s2xh2-full-pipeline", R"(
[scenario]
name = s2xh2-full-pipeline
seed = 0
samples = 20

[factors]
g1 = sphere(2,1)
g2 = hyperbolic(2,1)

[construct]
chain = ambient, poincare, cone_product, killing
dilation_alpha = 4

[checks]
poincare-einstein = default
ambient = default
cone-equivalence = default
dilation = default
killing = default
bach-boundary = default
drag = default
)"},
      {"einstein-product-s2s2", R"(
[scenario]
name = einstein-product-s2s2
seed = 0
samples = 20

[factors]
g1 = einstein_product(sphere(2,1),sphere(2,1),+1)

[construct]
chain = cone

[checks]
factor-einstein = default
cone-einstein = default
)"},
      {"so4-arithmetic", R"(
[scenario]
name = so4-arithmetic
seed = 0
samples = 1

[factors]
g1 = abstract(6,3/2)
g2 = abstract(6,-3/2)

[checks]
mu-arithmetic = default

[expect]
mu = 1/40
r_excluded_squared = 80
)"},
      {"recursion-l2", R"(
[scenario]
name = recursion-l2
seed = 0
samples = 20

[factors]
g0 = hyperbolic(2,1)
list = sphere(2,1), sphere(2,1)

[construct]
chain = recursion

[checks]
stage-einstein = default
)"},
      {"flat-ambient", R"(
[scenario]
name = flat-ambient
seed = 0
samples = 20

[factors]
g1 = flat(3)
g2 = flat(2)

[construct]
chain = ambient

[checks]
ambient = default
normal-form = default
)"},
      {"cone-flatness", R"(
[scenario]
name = cone-flatness
seed = 0
samples = 20

[factors]
g1 = sphere(2,1)

[construct]
chain = cone

[checks]
cone-flatness = default
cone-einstein = default
loop-identity = default
)"},
      {"drag-lemma-grid", R"(
[scenario]
name = drag-lemma-grid
seed = 0
samples = 20

[factors]
g1 = einstein_product(sphere(2,1),sphere(2,1),+1)

[construct]
chain = cone

[checks]
drag = default
)"},
      {"transverse-holonomy", R"(
[scenario]
name = transverse-holonomy
seed = 0
samples = 20

[factors]
g1 = einstein_product(sphere(2,1),sphere(2,1),+1)

[construct]
chain = cone

[checks]
transverse = default
)"},
      {"bach-boundary-4d", R"(
[scenario]
name = bach-boundary-4d
seed = 0
samples = 20

[factors]
g1 = sphere(2,1)
g2 = hyperbolic(2,1)

[checks]
bach-boundary = default
bach-flat4 = default
)"},
  };
  return reg;
}

ScenarioConfig load_scenario(const std::string& path_or_builtin) {
  const auto& builtins = builtin_scenarios();
  if (auto it = builtins.find(path_or_builtin); it != builtins.end()) {
    return load_scenario_text(it->second, "builtin:" + path_or_builtin);
  }
  std::ifstream f(path_or_builtin);
  if (!f) {
    throw IoError("scenario '" + path_or_builtin +
                  "' is neither a builtin name nor a readable file");
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return load_scenario_text(ss.str(), path_or_builtin);
}

namespace {

// deterministic closed loop: coords oscillate around a center point;
// coordinate i starts exactly at center[i] when its phase is zero
PathSpec make_loop(const std::vector<double>& center, const std::vector<double>& amp,
                   const std::string& chart_id, int zero_phase_coord = -1) {
  const int dim = static_cast<int>(center.size());
  std::vector<double> phase(dim);
  for (int i = 0; i < dim; ++i) phase[i] = (i == zero_phase_coord) ? 0.0 : 0.13 * i;
  auto curve = [center, amp, phase, chart_id, dim](double t) {
    std::vector<double> c(dim);
    for (int i = 0; i < dim; ++i) {
      c[i] = center[i] + amp[i] * std::sin(2.0 * M_PI * (t + phase[i]));
    }
    return ChartPoint{c, chart_id};
  };
  auto velocity = [amp, phase, dim](double t) {
    std::vector<double> v(dim);
    for (int i = 0; i < dim; ++i) {
      v[i] = amp[i] * 2.0 * M_PI * std::cos(2.0 * M_PI * (t + phase[i]));
    }
    return v;
  };
  return PathSpec{curve, true, velocity};
}

std::vector<double> box_centers(const Domain& dom) {
  std::vector<double> c;
  for (const auto& [lo, hi] : dom.box) c.push_back(0.5 * (lo + hi));
  return c;
}

}  // namespace

std::vector<CheckReport> run_scenario(const ScenarioConfig& cfg, TolTier tier) {
  std::vector<CheckReport> reports;
  const SamplePlan plan{cfg.seed, cfg.samples, std::nullopt};
  const JetMode emode =
      (tier == TolTier::finite_difference) ? JetMode::finite_difference
                                           : JetMode::analytic;

  auto has_stage = [&](const char* st) {
    return std::find(cfg.chain.begin(), cfg.chain.end(), st) != cfg.chain.end();
  };

  // lazily built constructions, shared between checks
  std::optional<MuSolution> mu;
  auto get_mu = [&]() -> const MuSolution& {
    if (!mu) {
      if (cfg.mu_override) {
        mu = MuSolution{*cfg.mu_override, false, true};
      } else {
        const EinsteinSpec& a = *cfg.g1;
        EinsteinSpec b = cfg.g2 ? *cfg.g2 : point_spec();
        mu = solve_mu(a.m, a.sc, b.m, b.sc);
      }
    }
    return *mu;
  };
  std::optional<ProductAmbientSpec> amb;
  auto get_ambient = [&]() -> const ProductAmbientSpec& {
    if (!amb) {
      amb = ambient_metric(*cfg.g1, cfg.g2 ? *cfg.g2 : point_spec(), get_mu());
    }
    return *amb;
  };
  std::optional<PoincareSpec> poin;
  auto get_poincare = [&]() -> const PoincareSpec& {
    if (!poin) {
      poin = poincare_metric(*cfg.g1, cfg.g2 ? *cfg.g2 : point_spec(), get_mu());
    }
    return *poin;
  };
  std::optional<ConeSpec> cone;
  auto get_cone = [&]() -> const ConeSpec& {
    if (!cone) cone = metric_cone(*cfg.g1);
    return *cone;
  };
  std::optional<MultiSubProductSpec> rec;
  auto get_recursion = [&]() -> const MultiSubProductSpec& {
    if (!rec) rec = multi_subproduct(*cfg.g0, cfg.recursion_list);
    return *rec;
  };

  for (const auto& req : cfg.checks) {
    const double tol = req.tol ? *req.tol : default_tolerance(req.name, tier);
    try {
      if (req.name == "factor-einstein") {
        auto run_factor = [&](const EinsteinSpec& s, const std::string& label) {
          if (s.m == 0) return;
          CheckReport r = check_einstein(s.patch, s.sc_value() / s.m, plan, tol,
                                         ResidualNorm::component, emode,
                                         "factor-einstein(" + label + ")");
          reports.push_back(std::move(r));
        };
        if (cfg.g1) run_factor(*cfg.g1, cfg.g1->label);
        if (cfg.g2) run_factor(*cfg.g2, cfg.g2->label);
      } else if (req.name == "poincare-einstein") {
        const auto& p = get_poincare();
        reports.push_back(check_einstein(p.interior_patch, -p.n(), plan, tol,
                                         ResidualNorm::metric_operator, emode,
                                         "poincare-einstein"));
      } else if (req.name == "stage-einstein") {
        const auto& r = get_recursion();
        for (int s = 0; s < r.levels(); ++s) {
          const auto& st = r.stages[s];
          reports.push_back(check_einstein(
              st.interior_patch, -st.n(), plan, tol, ResidualNorm::metric_operator,
              emode, "stage-" + std::to_string(s + 1) + "-einstein"));
        }
      } else if (req.name == "ambient") {
        for (auto& r : check_ambient_conditions(get_ambient(), plan, tol)) {
          reports.push_back(std::move(r));
        }
      } else if (req.name == "cone-einstein") {
        reports.push_back(check_einstein(get_cone().cone_patch, 0.0, plan, tol,
                                         ResidualNorm::component, emode,
                                         "cone-einstein"));
      } else if (req.name == "cone-flatness") {
        reports.push_back(check_flatness(get_cone().cone_patch, plan, tol,
                                         "cone-flatness"));
      } else if (req.name == "loop-identity") {
        const auto& c = get_cone();
        auto center = box_centers(c.cone_patch.domain());
        center[c.s_coord()] = 1.0;
        std::vector<double> amp(center.size(), 0.25);
        amp[c.s_coord()] = 0.3;
        reports.push_back(check_loop_identity(
            c.cone_patch, make_loop(center, amp, c.cone_patch.chart_id()), tol));
      } else if (req.name == "cone-equivalence") {
        const auto& a = get_ambient();
        ConeSpec c1 = metric_cone(*cfg.g1);
        ConeSpec c2 = metric_cone(*cfg.g2);
        ConeProductSpec cp = cone_product(c1, c2);
        reports.push_back(check_coordinate_equivalence(cp, a, plan, tol));
      } else if (req.name == "coord-roundtrip") {
        reports.push_back(check_coord_roundtrip(2.0 * get_mu().value(), plan, tol));
      } else if (req.name == "dilation") {
        reports.push_back(check_dilation_invariance(
            *cfg.g1, cfg.g2 ? *cfg.g2 : point_spec(), cfg.dilation_alpha, plan, tol));
      } else if (req.name == "homothety-gradient") {
        const auto& a = get_ambient();
        reports.push_back(check_homothety_gradient(a.ambient_patch, a.euler_field, 2.0,
                                                   plan, tol, "homothety-gradient"));
      } else if (req.name == "killing") {
        PoincareSpec p = normalized_positive_mu(
            *cfg.g1, cfg.g2 ? *cfg.g2 : point_spec(), get_mu());
        KillingFormSpec k = special_killing_form(p);
        reports.push_back(check_special_killing(k, plan, tol));
      } else if (req.name == "bach-boundary") {
        MetricPatch boundary = product_metric(*cfg.g1, cfg.g2 ? *cfg.g2 : point_spec());
        reports.push_back(check_bach_vanishing(boundary, plan, tol, "bach-boundary"));
      } else if (req.name == "bach-flat4") {
        EinsteinSpec flat4 = constant_curvature_metric(4, 0.0);
        reports.push_back(check_bach_vanishing(flat4.patch, plan, tol, "bach-flat4"));
      } else if (req.name == "drag") {
        // ambient dilation field when an ambient stage exists, else the cone
        if (has_stage("ambient")) {
          const auto& a = get_ambient();
          auto center = box_centers(a.ambient_patch.domain());
          center[a.t_coord()] = 1.0;
          center[a.rho_coord()] = 0.0;
          std::vector<double> amp(center.size(), 0.25);
          amp[a.t_coord()] = 0.2;
          amp[a.rho_coord()] = 0.3;
          TransportProbe probe{a.euler_field, 2.0, a.t_coord(), a.t_coord(), 1.0,
                               make_loop(center, amp, a.ambient_patch.chart_id())};
          reports.push_back(check_drag_lemma(a.ambient_patch, probe, 10, 10, 0.4, tol));
        } else {
          const auto& c = get_cone();
          auto center = box_centers(c.cone_patch.domain());
          center[c.s_coord()] = 1.0;
          std::vector<double> amp(center.size(), 0.25);
          amp[c.s_coord()] = 0.2;
          TransportProbe probe{c.euler_field, 2.0, c.s_coord(), c.s_coord(), 1.0,
                               make_loop(center, amp, c.cone_patch.chart_id())};
          reports.push_back(check_drag_lemma(c.cone_patch, probe, 10, 10, 0.4, tol));
        }
      } else if (req.name == "transverse") {
        const auto& c = get_cone();
        auto center = box_centers(c.cone_patch.domain());
        center[c.s_coord()] = 1.0;
        std::vector<double> amp(center.size(), 0.25);
        amp[c.s_coord()] = 0.3;
        // the loop is based exactly on the transverse hypersurface {s = 1}
        PathSpec loop =
            make_loop(center, amp, c.cone_patch.chart_id(), c.s_coord());
        TransportProbe probe{c.euler_field, 2.0, c.s_coord(), c.s_coord(), 1.0, loop};
        reports.push_back(check_transverse_holonomy(c.cone_patch, probe, tol));
      } else if (req.name == "normal-form") {
        reports.push_back(check_normal_form_agreement(get_ambient().family, plan, tol));
      } else if (req.name == "mu-arithmetic") {
        const EinsteinSpec& a = *cfg.g1;
        const EinsteinSpec& b = *cfg.g2;
        MuSolution m = solve_mu(a.m, a.sc, b.m, b.sc);
        double resid = 0.0;
        std::string notes = "mu=" + m.mu.str();
        if (auto it = cfg.expects.find("mu"); it != cfg.expects.end()) {
          if (!(m.mu == parse_rational(it->second))) resid = 1.0;
        }
        if (m.mu.sign() != 0) {
          const Rational r2 = Rational(2) / m.mu.abs();
          notes += ";r_excluded=sqrt(" + r2.str() + ")";
          if (auto it = cfg.expects.find("r_excluded_squared"); it != cfg.expects.end()) {
            if (!(r2 == parse_rational(it->second))) resid = 1.0;
          }
        }
        std::vector<double> rs{resid};
        reports.push_back(
            CheckReport::from_residuals("mu-arithmetic", rs, tol, notes));
      } else {
        throw ValidationError("unknown check '" + req.name + "'");
      }
    } catch (const Error& e) {
      throw Error("check '" + req.name + "' in stage construction failed: " + e.what());
    }
  }

  for (auto& r : reports) r.scenario = cfg.name;
  return reports;
}

void emit_report(std::span<const CheckReport> reports, const std::string& format,
                 const std::string& path) {
  if (path.empty()) return;
  if (format == "csv") {
    write_text_file(path, to_csv(reports));
  } else if (format == "plain") {
    write_text_file(path, to_plain(reports));
  } else {
    throw ValidationError("unknown report format '" + format + "'");
  }
}

bool all_pass(std::span<const CheckReport> reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.pass; });
}

}  // namespace pem
