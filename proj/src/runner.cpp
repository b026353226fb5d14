#include "oulab/runner.hpp"

#include "oulab/chaos.hpp"
#include "oulab/galerkin.hpp"
#include "oulab/random.hpp"
#include "oulab/registry.hpp"
#include "oulab/semigroup.hpp"
#include "oulab/surface.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace oulab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(where + "." + k, "unknown field");
}

template <typename T>
void read(const json& j, const std::string& key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key, std::string("wrong type (") + e.what() + ")");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string short_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Csv {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct Partial {
  std::vector<CheckRecord> checks;
  std::vector<std::string> warnings;
  std::vector<Csv> csv;
  std::size_t solves = 0;
  double seconds = 0.0;
};

McParams with_jobs(McParams mc, int jobs) {
  mc.jobs = std::max(1, jobs);
  return mc;
}

Partial suite_solve(const ExperimentConfig& cfg, int jobs) {
  (void)jobs;
  Partial out;
  const SpectralModel model = cfg.spectral_model();
  const DomainSpec domain = cfg.domain_spec();
  const GalerkinOperator base = assemble(model, domain, cfg.degree_cap, cfg.eps_ladder.front());
  const SmoothField f = make_testfunction(cfg.test_function, model, domain);
  const int order = std::max(2 * cfg.degree_cap + 2, 20);
  const Vec fc = project_field(f.value, base.basis(), model, order);

  Csv csv{"solve.csv", {"eps", "l2", "l2_bound", "grad", "grad_bound", "penalty", "penalty_bound", "weak_residual"}, {}};
  for (double eps : cfg.eps_ladder) {
    const SolveReport s = solve_penalized(base.with_eps(eps), cfg.lambda, fc);
    const std::string tag = "solve/eps=" + short_num(eps) + "/";
    for (const Bound* b : {&s.l2, &s.grad, &s.penalty}) {
      CheckRecord c = make_check(tag + b->name, b->estimate, b->bound, kBoundRoundoff * std::abs(b->bound), "le", false);
      c.pass = b->pass;
      out.checks.push_back(c);
    }
    csv.rows.push_back({eps, s.l2.estimate, s.l2.bound, s.grad.estimate, s.grad.bound, s.penalty.estimate,
                        s.penalty.bound, s.weak_residual});
    ++out.solves;
  }
  out.csv.push_back(std::move(csv));
  return out;
}

Partial suite_spectral(const ExperimentConfig& cfg, int jobs) {
  (void)jobs;
  Partial out;
  const SpectralModel model = cfg.spectral_model();
  const DomainSpec domain = cfg.domain_spec();
  const GalerkinOperator op = assemble(model, domain, cfg.degree_cap, std::nullopt);

  // fixed smooth test vectors with decaying coefficients
  Vec a(op.size()), b(op.size());
  for (std::size_t i = 0; i < op.size(); ++i) {
    const double deg = op.basis()[i].degree();
    a(i) = 1.0 / (1.0 + deg);
    b(i) = (i % 2 == 0 ? 1.0 : -1.0) / (1.0 + deg * deg);
  }
  const ChaosVector pa = ChaosVector::from_dense(op.basis(), a);
  const ChaosVector pb = ChaosVector::from_dense(op.basis(), b);
  const FormCheck form = dirichlet_form_check(op, pa, pb);
  const FormCheck energy = energy_identity_check(op, pa);
  out.checks.push_back(make_check("spectral/dirichlet_form_residual", form.residual, 0.0, 1e-10, "le", false));
  out.checks.push_back(make_check("spectral/energy_identity_residual", energy.residual, 0.0, 1e-10, "le", false));

  const PoincareResult p = poincare_check(model, std::max(cfg.degree_cap, 1));
  out.checks.push_back(make_check("spectral/poincare_ratio_max", p.ratio_max, p.constant, 1e-12, "eq", false));
  return out;
}

Partial suite_semigroup(const ExperimentConfig& cfg, int jobs) {
  Partial out;
  const SpectralModel model = cfg.spectral_model();
  const DomainSpec domain = cfg.domain_spec();
  const TestFunctionInfo& info = testfunction_info(cfg.test_function);
  const SmoothField phi = make_testfunction(cfg.test_function, model, domain);
  Vec x = Vec::Zero(model.dim());
  if (!cfg.semigroup.probe.empty()) x = Eigen::Map<const Vec>(cfg.semigroup.probe.data(), model.dim());

  const McParams mc = with_jobs(cfg.mc, jobs);
  const PenalizationLadder lad = penalization_ladder(phi.value, cfg.semigroup.t, x, cfg.eps_ladder, domain, model, mc);
  if (info.nonnegative)
    out.checks.push_back(make_check("semigroup/domination_violations", static_cast<double>(lad.domination_violations),
                                    0.0, 0.0, "le", false));
  for (std::size_t i = 0; i + 1 < lad.gap.size(); ++i)
    out.checks.push_back(make_check("semigroup/gap_decrease/eps=" + short_num(lad.eps[i + 1]), lad.gap[i + 1].value,
                                    lad.gap[i].value, 3.0 * lad.increment[i].std_error, "le", true));

  McParams inner = mc;
  inner.paths = std::max<std::size_t>(50, cfg.mc.paths / std::max<std::size_t>(cfg.semigroup.outer, 1));
  inner.seed = derive_seed(cfg.mc.seed, 17);
  const ContractionCheck cc = l2_contraction_check(phi.value, cfg.semigroup.t, domain, model, inner, cfg.semigroup.outer);
  out.checks.push_back(make_check("semigroup/sub_invariance", cc.lhs, cc.rhs, 3.0 * cc.std_error, "le", true));

  Csv csv{"semigroup.csv", {"eps", "penalized", "penalized_se", "gap", "gap_se"}, {}};
  for (std::size_t i = 0; i < lad.eps.size(); ++i)
    csv.rows.push_back({lad.eps[i], lad.penalized[i].value, lad.penalized[i].std_error, lad.gap[i].value,
                        lad.gap[i].std_error});
  out.csv.push_back(std::move(csv));
  return out;
}

DomainSpec surface_domain(const ExperimentConfig& cfg) {
  const int d = cfg.spectral_model().dim();
  const std::string& v = cfg.surface.g_variant;
  if (v == "half_space") {
    Vec b = Vec::Zero(d);
    b(0) = 1.0;
    return DomainSpec::half_space(b);
  }
  if (v == "quadratic") {
    Vec t(d);
    for (int k = 0; k < d; ++k) t(k) = 1.0 / (k + 1.0);
    return DomainSpec::quadratic(t);
  }
  if (v == "ball") return DomainSpec::ball_of_modes(d, d);
  return cfg.domain_spec();
}

Partial suite_surface(const ExperimentConfig& cfg, int jobs) {
  Partial out;
  const SpectralModel model = cfg.spectral_model();
  const DomainSpec dom = surface_domain(cfg);
  if (dom.kind() == DomainKind::WholeSpace) throw ConfigError("config: surface.g_variant: whole space has no level sets");
  const LevelFunction g(dom);
  McParams mc = with_jobs(cfg.mc, jobs);
  mc.paths = cfg.surface.samples;

  for (int order : {1, 2}) {
    const IdentityCheck ic = pushforward_ibp_check(g, Profile::sine(), order, model, mc);
    out.checks.push_back(make_check("surface/pushforward_sin_g/order=" + std::to_string(order), ic.lhs.value,
                                    ic.rhs.value, 3.0 * ic.difference.std_error, "eq", true));
    if (ic.singular_flag) out.warnings.push_back("surface: singular fraction above threshold in order " + std::to_string(order));
  }

  const SmoothField f = make_testfunction(cfg.surface.f, model, dom);
  ShellOptions so;
  so.width = cfg.surface.shell_width;
  const SurfaceIntegral si = surface_integral(f.value, g, cfg.surface.r, model, mc, so);
  out.checks.push_back(make_check("surface/routes_agree/r=" + short_num(cfg.surface.r), si.thin_shell.value,
                                  si.density_route, 3.0 * si.combined_error(), "eq", true));

  // grid over mean +- 7 sd of g
  double mean = 0.0, var = 0.0;
  for (int k = 0; k < model.dim(); ++k) {
    const double l = model.lambda(k), b = dom.linear()(k), t = dom.quad_diag()(k);
    mean += t * l;
    var += b * b * l + 2.0 * t * t * l * l;
  }
  const double sd = std::sqrt(var);
  const double lo = std::max(g.range_lower(), mean - 7.0 * sd), hi = mean + 7.0 * sd;
  std::vector<double> grid(141);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = lo + (hi - lo) * i / (grid.size() - 1.0);
  DensityOptions dopt;
  dopt.min_local = 0;
  const DensityCurve dc = density_estimate(g, model, mc, grid, std::nullopt, dopt);
  out.checks.push_back(make_check("surface/density_mass", dc.mass, 1.0, 0.01, "eq", true));

  Csv csv{"density.csv", {"r", "k", "k_se", "k_prime"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) csv.rows.push_back({grid[i], dc.k_values[i], dc.k_std_error[i], dc.k_prime[i]});
  out.csv.push_back(std::move(csv));
  return out;
}

using SuiteFn = std::function<Partial(const ExperimentConfig&, int)>;

std::vector<std::pair<std::string, SuiteFn>> parts_of(const std::string& suite) {
  if (suite == "empty" || suite.empty()) return {};
  if (suite == "solve") return {{"solve", suite_solve}};
  if (suite == "semigroup") return {{"semigroup", suite_semigroup}};
  if (suite == "surface") return {{"surface", suite_surface}};
  if (suite == "validate-all")
    return {{"solve", suite_solve}, {"spectral", suite_spectral}, {"semigroup", suite_semigroup}, {"surface", suite_surface}};
  throw std::invalid_argument("unknown suite: " + suite);
}

void write_csv(const std::filesystem::path& path, const std::string& hash, const Csv& csv) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "# config_hash=" << hash << "\n";
  for (std::size_t i = 0; i < csv.header.size(); ++i) os << (i ? "," : "") << csv.header[i];
  os << "\n";
  for (const auto& row : csv.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << "\n";
  }
}

}  // namespace

SpectralModel ExperimentConfig::spectral_model() const {
  if (!model.lambdas.empty())
    return SpectralModel(Eigen::Map<const Vec>(model.lambdas.data(), static_cast<Eigen::Index>(model.lambdas.size())),
                         alpha);
  return SpectralModel::power_law(model.d, model.c, model.p, alpha);
}

DomainSpec ExperimentConfig::domain_spec() const {
  const int d = spectral_model().dim();
  const auto& k = domain.kind;
  if (k == "whole_space") return DomainSpec::whole_space(d);
  if (k == "half_space") {
    Vec b = Vec::Zero(d);
    if (domain.b.empty())
      b(0) = 1.0;
    else
      b = Eigen::Map<const Vec>(domain.b.data(), static_cast<Eigen::Index>(domain.b.size()));
    return DomainSpec::half_space(b, domain.penalty_cap);
  }
  if (k == "quadratic")
    return DomainSpec::quadratic(Eigen::Map<const Vec>(domain.t.data(), static_cast<Eigen::Index>(domain.t.size())),
                                 domain.penalty_cap);
  if (k == "ball_of_modes") return DomainSpec::ball_of_modes(d, domain.m, domain.penalty_cap);
  fail("domain.kind", "unknown kind " + k);
}

void validate(const ExperimentConfig& c) {
  if (c.schema_version != kConfigSchemaVersion)
    fail("schema_version", "expected " + std::to_string(kConfigSchemaVersion) + ", got " + std::to_string(c.schema_version));
  int d = c.model.d;
  if (!c.model.lambdas.empty()) {
    d = static_cast<int>(c.model.lambdas.size());
    for (double l : c.model.lambdas)
      if (!(l > 0.0) || !std::isfinite(l)) fail("model.lambdas", "entries must be positive");
  } else {
    if (c.model.d < 1) fail("model.d", "must be at least 1");
    if (!(c.model.c > 0.0)) fail("model.c", "must be positive");
    if (!(c.model.p >= 0.0)) fail("model.p", "must be non-negative");
  }
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) fail("alpha", "must lie in [0, 1]");
  if (!(c.lambda > 0.0)) fail("lambda", "must be positive");
  if (c.eps_ladder.empty()) fail("eps_ladder", "must not be empty");
  for (std::size_t i = 0; i < c.eps_ladder.size(); ++i) {
    if (!(c.eps_ladder[i] > 0.0)) fail("eps_ladder", "entries must be positive");
    if (i > 0 && !(c.eps_ladder[i] < c.eps_ladder[i - 1])) fail("eps_ladder", "must be strictly decreasing");
  }
  if (c.mc.paths < 2) fail("mc.paths", "must be at least 2");
  if (!(c.mc.dt > 0.0)) fail("mc.dt", "must be positive");
  if (c.degree_cap < 0) fail("degree_cap", "must be non-negative");

  const auto& k = c.domain.kind;
  if (k == "half_space") {
    if (!c.domain.b.empty() && static_cast<int>(c.domain.b.size()) != d) fail("domain.b", "length must equal the dimension");
  } else if (k == "quadratic") {
    if (static_cast<int>(c.domain.t.size()) != d) fail("domain.t", "length must equal the dimension");
  } else if (k == "ball_of_modes") {
    if (c.domain.m < 1 || c.domain.m > d) fail("domain.m", "need 1 <= m <= dimension");
  } else if (k != "whole_space") {
    fail("domain.kind", "unknown kind " + k);
  }
  if (!(c.domain.penalty_cap > 0.0)) fail("domain.penalty_cap", "must be positive");

  if (!has_testfunction(c.test_function)) fail("test_function", "unknown name " + c.test_function);
  if (!has_testfunction(c.surface.f)) fail("surface.f", "unknown name " + c.surface.f);
  if (!(c.semigroup.t > 0.0)) fail("semigroup.t", "must be positive");
  if (c.semigroup.outer < 1) fail("semigroup.outer", "must be at least 1");
  if (!c.semigroup.probe.empty() && static_cast<int>(c.semigroup.probe.size()) != d)
    fail("semigroup.probe", "length must equal the dimension");
  static const std::set<std::string> variants{"domain", "half_space", "quadratic", "ball"};
  if (!variants.count(c.surface.g_variant)) fail("surface.g_variant", "unknown variant " + c.surface.g_variant);
  if (!(c.surface.shell_width >= 0.0)) fail("surface.shell_width", "must be non-negative");
  if (c.surface.samples < 100) fail("surface.samples", "must be at least 100");

  DomainSpec dom = c.domain_spec();
  if (k != "whole_space" && !c.semigroup.probe.empty()) {
    Vec x = Eigen::Map<const Vec>(c.semigroup.probe.data(), d);
    if (!dom.contains(x)) fail("semigroup.probe", "must lie in K");
  }
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  only_keys(j, "config", {"schema_version", "model", "domain", "alpha", "lambda", "eps_ladder", "mc", "degree_cap",
                          "outputs", "test_function", "semigroup", "surface"});
  if (!j.contains("schema_version")) fail("schema_version", "missing");
  read(j, "schema_version", "config", c.schema_version);
  if (c.schema_version != kConfigSchemaVersion)
    fail("schema_version", "expected " + std::to_string(kConfigSchemaVersion) + ", got " + std::to_string(c.schema_version));
  if (j.contains("model")) {
    const json& m = j["model"];
    only_keys(m, "model", {"lambdas", "d", "c", "p"});
    read(m, "lambdas", "model", c.model.lambdas);
    read(m, "d", "model", c.model.d);
    read(m, "c", "model", c.model.c);
    read(m, "p", "model", c.model.p);
  }
  if (j.contains("domain")) {
    const json& m = j["domain"];
    only_keys(m, "domain", {"kind", "b", "t", "m", "penalty_cap"});
    read(m, "kind", "domain", c.domain.kind);
    read(m, "b", "domain", c.domain.b);
    read(m, "t", "domain", c.domain.t);
    read(m, "m", "domain", c.domain.m);
    read(m, "penalty_cap", "domain", c.domain.penalty_cap);
  }
  read(j, "alpha", "config", c.alpha);
  read(j, "lambda", "config", c.lambda);
  read(j, "eps_ladder", "config", c.eps_ladder);
  if (j.contains("mc")) {
    const json& m = j["mc"];
    only_keys(m, "mc", {"paths", "dt", "seed"});
    read(m, "paths", "mc", c.mc.paths);
    read(m, "dt", "mc", c.mc.dt);
    read(m, "seed", "mc", c.mc.seed);
  }
  read(j, "degree_cap", "config", c.degree_cap);
  read(j, "outputs", "config", c.outputs);
  read(j, "test_function", "config", c.test_function);
  if (j.contains("semigroup")) {
    const json& m = j["semigroup"];
    only_keys(m, "semigroup", {"t", "probe", "outer"});
    read(m, "t", "semigroup", c.semigroup.t);
    read(m, "probe", "semigroup", c.semigroup.probe);
    read(m, "outer", "semigroup", c.semigroup.outer);
  }
  if (j.contains("surface")) {
    const json& m = j["surface"];
    only_keys(m, "surface", {"g_variant", "r", "f", "shell_width", "samples"});
    read(m, "g_variant", "surface", c.surface.g_variant);
    read(m, "r", "surface", c.surface.r);
    read(m, "f", "surface", c.surface.f);
    read(m, "shell_width", "surface", c.surface.shell_width);
    read(m, "samples", "surface", c.surface.samples);
  }
  validate(c);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  json m;
  if (!c.model.lambdas.empty()) {
    m["lambdas"] = c.model.lambdas;
  } else {
    m["d"] = c.model.d;
    m["c"] = c.model.c;
    m["p"] = c.model.p;
  }
  j["model"] = m;
  json d;
  d["kind"] = c.domain.kind;
  if (!c.domain.b.empty()) d["b"] = c.domain.b;
  if (!c.domain.t.empty()) d["t"] = c.domain.t;
  if (c.domain.kind == "ball_of_modes") d["m"] = c.domain.m;
  d["penalty_cap"] = c.domain.penalty_cap;
  j["domain"] = d;
  j["alpha"] = c.alpha;
  j["lambda"] = c.lambda;
  j["eps_ladder"] = c.eps_ladder;
  j["mc"] = {{"paths", c.mc.paths}, {"dt", c.mc.dt}, {"seed", c.mc.seed}};
  j["degree_cap"] = c.degree_cap;
  j["outputs"] = c.outputs;
  j["test_function"] = c.test_function;
  j["semigroup"] = {{"t", c.semigroup.t}, {"probe", c.semigroup.probe}, {"outer", c.semigroup.outer}};
  j["surface"] = {{"g_variant", c.surface.g_variant},
                  {"r", c.surface.r},
                  {"f", c.surface.f},
                  {"shell_width", c.surface.shell_width},
                  {"samples", c.surface.samples}};
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string s = config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

CheckRecord make_check(std::string name, double lhs, double rhs, double tolerance, const std::string& relation,
                       bool statistical) {
  CheckRecord c{std::move(name), lhs, rhs, tolerance, relation, statistical, false};
  if (relation == "le")
    c.pass = lhs <= rhs + tolerance;
  else if (relation == "eq")
    c.pass = std::abs(lhs - rhs) <= tolerance;
  else
    throw std::invalid_argument("make_check: relation must be le or eq");
  return c;
}

bool RunReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [&](const CheckRecord& c) { return c.pass || (c.statistical && !statistical_enforced); });
}

json RunReport::to_json(bool with_timing) const {
  json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["suite"] = suite;
  j["environment"] = {{"version", kOulabVersion}, {"seed", seed}, {"config_hash", config_hash}};
  if (with_timing) j["environment"]["timing"] = timing;
  j["statistical_enforced"] = statistical_enforced;
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"lhs", c.lhs},
                   {"rhs", c.rhs},
                   {"tolerance", c.tolerance},
                   {"relation", c.relation},
                   {"statistical", c.statistical},
                   {"pass", c.pass}});
  j["checks"] = arr;
  j["warnings"] = warnings;
  j["artifacts"] = artifacts;
  j["solves"] = solves;
  j["all_pass"] = all_pass();
  return j;
}

bool report_complete(const RunReport& r) {
  std::map<std::string, std::map<std::string, int>> seen;
  for (const auto& c : r.checks) {
    if (c.name.rfind("solve/", 0) != 0) continue;
    const auto slash = c.name.rfind('/');
    ++seen[c.name.substr(0, slash)][c.name.substr(slash + 1)];
  }
  if (seen.size() != r.solves) return false;
  for (const auto& [solve, kinds] : seen) {
    if (kinds.size() != 3) return false;
    for (const char* k : {"l2", "grad", "penalty"}) {
      auto it = kinds.find(k);
      if (it == kinds.end() || it->second != 1) return false;
    }
  }
  return true;
}

std::vector<std::string> suite_names() { return {"solve", "semigroup", "surface", "validate-all", "empty"}; }

RunReport run(const ExperimentConfig& cfg, const std::string& suite, const RunOptions& opt) {
  validate(cfg);
  const auto t0 = Clock::now();
  const auto parts = parts_of(suite);
  const int jobs = std::max(1, opt.jobs > 0 ? opt.jobs : cfg.mc.jobs);

  RunReport rep;
  rep.suite = suite.empty() ? "empty" : suite;
  rep.config_hash = config_hash(cfg);
  rep.seed = cfg.mc.seed;
  rep.jobs = jobs;
  rep.statistical_enforced = opt.enforce_statistical;

  std::vector<Partial> results(parts.size());
  const int concurrent = std::min<int>(jobs, std::max<int>(1, static_cast<int>(parts.size())));
  const int inner = std::max(1, jobs / concurrent);
  parallel_for(parts.size(), concurrent, [&](std::size_t i) {
    const auto ts = Clock::now();
    results[i] = parts[i].second(cfg, inner);
    results[i].seconds = seconds_since(ts);
  });

  std::vector<std::pair<std::string, Csv>> csvs;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto& p = results[i];
    rep.checks.insert(rep.checks.end(), p.checks.begin(), p.checks.end());
    rep.warnings.insert(rep.warnings.end(), p.warnings.begin(), p.warnings.end());
    rep.solves += p.solves;
    rep.timing[parts[i].first] = p.seconds;
    for (auto& c : p.csv) {
      rep.artifacts.push_back(c.name);
      csvs.emplace_back(c.name, std::move(c));
    }
  }
  for (const auto& c : rep.checks)
    if (c.statistical && !c.pass)
      rep.warnings.push_back(c.name + ": outside 3 sigma" + (opt.enforce_statistical ? "" : " (warning only)"));
  rep.timing["total"] = seconds_since(t0);

  const std::string dir = opt.out_dir.empty() ? cfg.outputs : opt.out_dir;
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, csv] : csvs) write_csv(std::filesystem::path(dir) / name, rep.config_hash, csv);
    std::ofstream os(std::filesystem::path(dir) / "report.json");
    if (!os) throw std::runtime_error("cannot write " + dir + "/report.json");
    os << rep.to_json().dump(2) << "\n";
  }
  return rep;
}

}  // namespace oulab
