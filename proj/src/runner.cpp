#include "bdl/runner.hpp"

#include "bdl/appendix.hpp"
#include "bdl/determinants.hpp"
#include "bdl/linalg.hpp"
#include "bdl/oracle.hpp"
#include "bdl/system.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace bdl {

using nlohmann::json;

// ---------------------------------------------------------------- config

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      {"det_scaled", 1e-8},     {"lse", 1e-8},           {"omega_paths", 1e-10}, {"w_det", 1e-10},
      {"w_row", 1e-9},          {"w_closed_form", 1e-9}, {"ray", 1e-8},          {"izergin", 1e-8},
      {"gaudin_spread", 1e-7},  {"gaudin_fd", 1e-6},     {"slavnov", 1e-8},      {"maba", 1e-7},
      {"asymptotic_slope", 0.9}, {"appendix", 1e-9},     {"residue_sum", 1e-10}, {"transfer_action", 1e-9},
      {"degenerate", 1e-10}};
  return tol;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

cplx parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad(where + ": expected a number or [re, im]");
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) bad(where + ": missing '" + key + "'");
  return obj.at(key);
}

std::size_t parse_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

TwistSpec parse_twist(const json& t) {
  if (!t.is_object()) bad("model.twist: expected an object");
  const auto get = [&](const char* k) { return parse_complex(require(t, k, "model.twist"), std::string("model.twist.") + k); };
  try {
    return TwistSpec::from_rho1(get("kappa"), get("kappa_tilde"), get("kappa_plus"), get("kappa_minus"), get("rho1"));
  } catch (const std::invalid_argument& e) {
    bad(std::string("model.twist: ") + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) bad("config: expected a JSON object");
  static const std::set<std::string> top{"model", "suite", "sizes", "seed", "trials", "tolerances", "output"};
  for (const auto& [k, _] : j.items())
    if (!top.count(k)) bad("config: unknown key '" + k + "'");

  ExperimentConfig cfg;
  cfg.echo = j;
  const json& m = require(j, "model", "config");
  if (!m.is_object()) bad("model: expected an object");
  const json& type = require(m, "type", "model");
  if (!type.is_string()) bad("model.type: expected a string");
  cfg.model_type = type.get<std::string>();
  if (cfg.model_type == "periodic-xxx")
    cfg.kind = ModelKind::periodic;
  else if (cfg.model_type == "maba-xxx")
    cfg.kind = ModelKind::maba;
  else if (cfg.model_type == "degenerate-ytr")
    cfg.kind = ModelKind::degenerate;
  else
    bad("model.type: expected periodic-xxx, maba-xxx or degenerate-ytr");

  cfg.spec.c = parse_complex(require(m, "c", "model"), "model.c");
  if (cfg.spec.c == cplx(0.0)) bad("model.c: must be nonzero");

  if (cfg.kind != ModelKind::degenerate) {
    const std::size_t N = parse_count(require(m, "N", "model"), "model.N");
    const json& th = require(m, "theta", "model");
    if (!th.is_array() || th.size() != N) bad("model.theta: expected N entries");
    for (std::size_t i = 0; i < N; ++i) cfg.spec.theta.push_back(parse_complex(th[i], "model.theta"));
    if (m.contains("spins")) {
      const json& sp = m.at("spins");
      if (!sp.is_array() || sp.size() != N) bad("model.spins: expected N entries");
      for (const auto& s : sp) {
        if (!s.is_number()) bad("model.spins: expected numbers");
        cfg.spec.spins.push_back(s.get<double>());
      }
    } else {
      cfg.spec.spins.assign(N, 0.5);
    }
    try {
      cfg.spec.validate();
    } catch (const std::invalid_argument& e) {
      bad(std::string("model: ") + e.what());
    }
  }
  if (cfg.kind == ModelKind::maba)
    cfg.twist = parse_twist(require(m, "twist", "model"));
  else if (m.contains("twist"))
    bad("model.twist: only valid for maba-xxx");

  if (j.contains("suite")) {
    const json& s = j.at("suite");
    if (!s.is_array()) bad("suite: expected an array of check names");
    for (const auto& name : s) {
      if (!name.is_string() || !find_check(name.get<std::string>()))
        bad("suite: unknown check " + name.dump());
      cfg.suite.push_back(name.get<std::string>());
    }
  } else {
    for (const auto& c : check_registry()) cfg.suite.push_back(c.name);
  }

  if (j.contains("sizes")) {
    const json& sz = j.at("sizes");
    if (!sz.is_object()) bad("sizes: expected an object");
    const json& n = require(sz, "n", "sizes");
    if (n.is_array()) {
      for (const auto& x : n) cfg.sizes.push_back(parse_count(x, "sizes.n"));
    } else {
      cfg.sizes.push_back(parse_count(n, "sizes.n"));
    }
  }
  if (cfg.sizes.empty()) cfg.sizes.push_back(1);
  for (auto n : cfg.sizes)
    if (n > 6) bad("sizes.n: values above 6 are outside the supported range");

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) bad("seed: expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("trials")) {
    cfg.trials = parse_count(j.at("trials"), "trials");
    if (cfg.trials == 0) bad("trials: must be positive");
  }

  cfg.tolerances = default_tolerances();
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) bad("tolerances: expected an object");
    for (const auto& [k, v] : t.items()) {
      if (!cfg.tolerances.count(k)) bad("tolerances: unknown name '" + k + "'");
      if (!v.is_number() || v.get<double>() < 0) bad("tolerances." + k + ": expected a non-negative number");
      cfg.tolerances[k] = v.get<double>();
    }
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) bad("output: expected an object");
    if (o.contains("path")) {
      if (!o.at("path").is_string()) bad("output.path: expected a string");
      cfg.output_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) bad("output.format: expected a string");
      cfg.format = o.at("format").get<std::string>();
    }
  }
  if (cfg.format != "json" && cfg.format != "csv") bad("output.format: expected json or csv");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad(path + ": " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------- registry

const std::vector<CheckInfo>& check_registry() {
  using K = ModelKind;
  static const std::vector<CheckInfo> reg{
      {"det-M-zero", "scaled det M vanishes for on-shell roots; rank 0 is reported for the degenerate model",
       "Prop. 3.1, Eq. (Mkj)", {K::periodic, K::maba, K::degenerate}},
      {"lse-residual", "oracle scalar products X_k solve M X = 0", "Eq. (LSE), Eq. (Mkj)", {K::periodic, K::maba}},
      {"omega-two-paths", "Omega from the shifted set agrees with Omega from the derivative of Lambda",
       "Eq. (Sjk), Eq. (Sjk1)", {K::periodic, K::maba, K::degenerate}},
      {"w-transform", "det W, closed form of W M, vanishing last row, Omega rows, same solution ray",
       "Eq. (W1), Eq. (wtM1), Eq. (wtMn1), Eq. (wtMjk1), Eq. (LSE01)", {K::periodic, K::maba}},
      {"solution-ray", "X_l / (Delta(u_l) Omega-hat_l) is one constant over l and over u draws",
       "Eq. (XlXm), Eq. (SolX1)", {K::periodic, K::maba}},
      {"izergin-oracle", "domain-wall determinant against the oracle after one calibration at n = N = 1",
       "Eq. (SPIze)", {K::periodic}},
      {"gaudin-norm", "norm over Delta Delta' det(Gaudin) is one constant per sector; entries vs differences",
       "Eq. (Gaud)", {K::periodic}},
      {"slavnov-oracle", "minor formula against oracle scalar products, normalization calibrated once",
       "Eq. (SolX1)", {K::periodic}},
      {"maba-oracle", "all X_l of the twisted chain against the oracle", "Eq. (Xresmaba), Eq. (Phires)", {K::maba}},
      {"maba-asymptotics", "1/U approach of the large-u limits", "Eq. (asyLL), Eq. (asyLY), Eq. (nu12), Eq. (XB2)",
       {K::maba}},
      {"appendix-A", "first summation identity and its auxiliary sum", "Eq. (H-LA), Eq. (G-LA2), Eq. (H-LA2)",
       {K::periodic, K::maba, K::degenerate}},
      {"appendix-B", "second summation identity and its auxiliary sum", "Eq. (H-XB), Eq. (G-XB2), Eq. (H-XB2)",
       {K::periodic, K::maba, K::degenerate}},
      {"transfer-action", "transfer matrix on off-shell vectors expands over L_jk", "Eq. (actright), Eq. (LjkL)",
       {K::periodic, K::maba}},
  };
  return reg;
}

const CheckInfo* find_check(const std::string& name) {
  for (const auto& c : check_registry())
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::periodic: return "periodic-xxx";
    case ModelKind::maba: return "maba-xxx";
    case ModelKind::degenerate: return "degenerate-ytr";
  }
  return "?";
}

}  // namespace

std::string list_checks() {
  std::ostringstream out;
  for (const auto& c : check_registry()) out << std::left << std::setw(18) << c.name << c.summary << '\n';
  return out.str();
}

std::string explain(const std::string& name) {
  const CheckInfo* c = find_check(name);
  if (!c) throw std::invalid_argument("unknown check '" + name + "'");
  std::ostringstream out;
  out << c->name << ": " << c->summary << "\nrefs: " << c->refs << "\nmodels:";
  for (auto k : c->models) out << ' ' << kind_name(k);
  out << '\n';
  return out.str();
}

// ---------------------------------------------------------------- execution

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

class Digest {
public:
  void add(cplx x) {
    const double parts[2]{x.real(), x.imag()};
    h_ = fnv1a(parts, sizeof parts, h_);
  }
  void add(const Params& p) {
    for (const auto& x : p) add(x);
    add(cplx(static_cast<double>(p.size()), -1.0));
  }
  std::string hex() const {
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << h_;
    return o.str();
  }

private:
  std::uint64_t h_ = 1469598103934665603ull;
};

struct Outcome {
  CheckRecord& rec;
  std::set<std::string> floors;
  Digest digest;

  // value <= tol
  void upper(const std::string& key, double value, double tol) { merge(key, value, tol, false); }
  // value >= tol
  void lower(const std::string& key, double value, double tol) { merge(key, value, tol, true); }
  void note(std::string s) { rec.notes.push_back(std::move(s)); }

  bool passed() const {
    if (rec.instances == 0) return false;
    for (const auto& [k, v] : rec.residuals) {
      const double t = rec.tolerances.at(k);
      if (std::isnan(v)) return false;
      if (floors.count(k) ? v < t : v > t) return false;
    }
    return true;
  }

private:
  void merge(const std::string& key, double value, double tol, bool floor) {
    if (floor) floors.insert(key);
    rec.tolerances[key] = tol;
    auto it = rec.residuals.find(key);
    if (it == rec.residuals.end()) {
      rec.residuals[key] = value;
    } else if (!std::isnan(it->second)) {
      if (std::isnan(value))
        it->second = value;
      else
        it->second = floor ? std::min(it->second, value) : std::max(it->second, value);
    }
  }
};

struct Context {
  const ExperimentConfig& cfg;
  YModel model;
  std::optional<SpinChainOracle> oracle;
  std::map<std::size_t, std::vector<Params>> root_cache;

  double tol(const std::string& k) const { return cfg.tolerances.at(k); }
  cplx c() const { return cfg.spec.c; }
  std::size_t sites() const { return cfg.spec.sites(); }

  const std::vector<Params>& roots(std::size_t n) {
    auto it = root_cache.find(n);
    if (it != root_cache.end()) return it->second;
    RootSolverOptions opt;
    opt.seed = cfg.seed * 1000003ull + n;
    opt.radius = default_seed_radius(cfg.spec);
    return root_cache[n] = physical_roots(*oracle, model, n, opt);
  }

  /// Sector sizes that carry on-shell vectors for this model.
  std::vector<std::size_t> onshell_sizes() const {
    if (cfg.kind == ModelKind::maba) return {cfg.spec.total_spin_units()};
    std::vector<std::size_t> out;
    for (auto n : cfg.sizes)
      if (n >= 1 && n <= sites()) out.push_back(n);
    return out;
  }

  /// (n, root set) pairs over all on-shell sectors; notes empty sectors.
  std::vector<std::pair<std::size_t, Params>> onshell(Outcome& out) {
    std::vector<std::pair<std::size_t, Params>> all;
    for (auto n : onshell_sizes()) {
      const auto& sets = roots(n);
      if (sets.empty()) out.note("no physical root sets for n = " + std::to_string(n));
      for (const auto& s : sets) all.emplace_back(n, s);
    }
    return all;
  }

  /// Oracle pairing <v| |u>, divided by prod lambda2(v) for the periodic chain.
  cplx oracle_product(const Params& v, const Params& u) const {
    const cplx raw = direct_scalar_product(oracle->dual_bethe_vector(v), oracle->bethe_vector(u));
    return cfg.kind == ModelKind::periodic ? raw / dual_normalization(cfg.spec, v) : raw;
  }
};

cplx draw(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

Params draw_set(std::mt19937_64& rng, std::size_t n, const Params& avoid = {}, double radius = 1.5) {
  std::vector<cplx> out;
  while (out.size() < n) {
    const cplx x = draw(rng, radius);
    bool ok = true;
    for (const auto& y : out) ok = ok && std::abs(x - y) > 0.05;
    for (const auto& y : avoid) ok = ok && std::abs(x - y) > 0.05;
    if (ok) out.push_back(x);
  }
  return Params(out);
}

Eigen::VectorXcd oracle_X(Context& ctx, const Params& v, const Params& u) {
  Eigen::VectorXcd X(static_cast<Eigen::Index>(u.size()));
  for (std::size_t l = 0; l < u.size(); ++l) X[static_cast<Eigen::Index>(l)] = ctx.oracle_product(v, u.complement(l));
  return X;
}

double slope(const std::vector<double>& errs) {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) s = std::min(s, std::log10(errs[i] / errs[i + 1]));
  return s;
}

// ---- individual checks

void check_det_M_zero(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  if (ctx.cfg.kind == ModelKind::degenerate) {
    for (auto n : ctx.cfg.sizes) {
      for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
        const Params v = draw_set(rng, n), u = draw_set(rng, n + 1, v);
        out.digest.add(v);
        out.digest.add(u);
        const SystemMatrices sys = build_M(ctx.model, v, u);
        out.upper("rank", static_cast<double>(system_rank(sys).rank), 0.0);
        out.upper("omega_max", sys.Omega.size() ? sys.Omega.cwiseAbs().maxCoeff() : 0.0, ctx.tol("degenerate"));
        const cplx z = draw(rng, 1.0) + cplx(4.0, 0.0);
        out.upper("lambda_minus_one", std::abs(lambda_eval(ctx.model, z, v) - 1.0), ctx.tol("degenerate"));
        ++out.rec.instances;
      }
    }
    out.note("expected-degenerate: rank(M) = 0 and Omega = 0, so X is not determined by the system");
    return;
  }
  for (const auto& [n, v] : ctx.onshell(out)) {
    for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
      const Params u = draw_set(rng, n + 1, v);
      out.digest.add(v);
      out.digest.add(u);
      out.upper("scaled_det", std::abs(scaled_determinant(build_M(ctx.model, v, u).M).scaled()), ctx.tol("det_scaled"));
      ++out.rec.instances;
    }
  }
}

void check_lse(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  for (const auto& [n, v] : ctx.onshell(out)) {
    for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
      const Params u = draw_set(rng, n + 1, v);
      out.digest.add(v);
      out.digest.add(u);
      out.upper("lse", lse_residual(build_M(ctx.model, v, u).M, oracle_X(ctx, v, u)), ctx.tol("lse"));
      ++out.rec.instances;
    }
  }
}

void check_omega_paths(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  const std::size_t cap = ctx.model.n_max() - 1;
  for (auto n : ctx.cfg.sizes) {
    const std::size_t m = std::max<std::size_t>(1, std::min(n, cap));
    for (std::size_t t = 0; t < 5 * ctx.cfg.trials; ++t) {
      const Params v = draw_set(rng, m), u = draw_set(rng, m + 1, v);
      out.digest.add(v);
      out.digest.add(u);
      const OmegaPaths p = build_Omega_two_paths(ctx.model, v, u);
      out.upper("max_rel_diff", p.max_rel_diff, ctx.tol("omega_paths"));
      ++out.rec.instances;
    }
  }
}

void check_w_transform(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  for (const auto& [n, v] : ctx.onshell(out)) {
    for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
      const Params u = draw_set(rng, n + 1, v);
      const Params w = v.with(draw(rng, 1.0) + cplx(2.5, 0.0));
      out.digest.add(u);
      out.digest.add(w);
      const WTransformReport r = w_transform_check(ctx.model, v, u, w);
      out.upper("det_W", r.det_rel_err, ctx.tol("w_det"));
      out.upper("closed_form", r.closed_form_err, ctx.tol("w_closed_form"));
      out.upper("last_row", r.last_row_ratio, ctx.tol("w_row"));
      out.upper("omega_rows", r.omega_rows_err, ctx.tol("w_closed_form"));
      out.upper("rank_mismatch", std::abs(static_cast<double>(r.rank_M - r.rank_reduced)), 0.0);
      out.upper("ray", r.solution_ray_distance, ctx.tol("ray"));
      ++out.rec.instances;
    }
  }
}

void check_solution_ray(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  for (const auto& [n, v] : ctx.onshell(out)) {
    std::optional<cplx> ref;
    for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
      const Params u = draw_set(rng, n + 1, v);
      out.digest.add(v);
      out.digest.add(u);
      const SystemMatrices sys = build_M(ctx.model, v, u);
      const Eigen::VectorXcd X = oracle_X(ctx, v, u);
      const Eigen::VectorXcd minors = minor_vector(sys);
      for (Eigen::Index l = 0; l < X.size(); ++l) {
        const cplx r = X[l] / minors[l];
        if (!ref) ref = r;
        out.upper("spread", rel_err(r, *ref), ctx.tol("ray"));
      }
      out.upper("ray_distance", ray_distance(solve_X(sys).X, X), ctx.tol("ray"));
      ++out.rec.instances;
    }
  }
}

bool spin_half(const ChainSpec& s) {
  return std::all_of(s.spins.begin(), s.spins.end(), [](double x) { return x == 0.5; });
}

void check_izergin(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  if (!spin_half(ctx.cfg.spec)) {
    out.note("requires a spin-1/2 chain");
    return;
  }
  const ChainSpec one = ChainSpec::spin_half(ctx.c(), {ctx.cfg.spec.theta[0]});
  const SpinChainOracle o1(one);
  const Params v1{draw(rng, 1.5)};
  const Params t1{one.theta[0]};
  out.digest.add(v1);
  const Calibration cal = calibrate_c_power(
      direct_scalar_product(o1.dual_bethe_vector(v1), o1.bethe_vector(t1)) / izergin(one, v1, t1), ctx.c());
  out.upper("calibration", cal.residual, ctx.tol("izergin"));
  out.note("calibrated power of c at n = N = 1: " + std::to_string(cal.power));
  const std::size_t N = ctx.sites();
  const Params theta(ctx.cfg.spec.theta);
  for (std::size_t n = 1; n <= std::min<std::size_t>(N, 3); ++n) {
    const Params t = theta.head(n);
    for (std::size_t k = 0; k < ctx.cfg.trials; ++k) {
      const Params v = draw_set(rng, n, theta);
      out.digest.add(v);
      const cplx raw = direct_scalar_product(ctx.oracle->dual_bethe_vector(v), ctx.oracle->bethe_vector(t));
      const cplx pred = izergin(ctx.cfg.spec, v, t) * std::pow(ctx.c(), static_cast<double>(cal.power * int(n * N)));
      out.upper("rel_err", rel_err(raw, pred), ctx.tol("izergin"));
      ++out.rec.instances;
    }
  }
}

void check_gaudin(Context& ctx, std::mt19937_64&, Outcome& out) {
  const double h = 1e-6;
  for (auto n : ctx.onshell_sizes()) {
    const auto& sets = ctx.roots(n);
    if (sets.empty()) {
      out.note("no physical root sets for n = " + std::to_string(n));
      continue;
    }
    const cplx first = gaudin_norm_check(*ctx.oracle, ctx.model, sets[0]).ratio;
    out.note("n = " + std::to_string(n) + ": norm / (Delta Delta' det G) = " + std::to_string(first.real()) + " + " +
             std::to_string(first.imag()) + "i");
    for (const auto& v : sets) {
      out.digest.add(v);
      const GaudinNormReport rep = gaudin_norm_check(*ctx.oracle, ctx.model, v);
      out.upper("spread", rel_err(rep.ratio, first), ctx.tol("gaudin_spread"));
      out.lower("min_abs_det", std::abs(rep.gaudin_det), 1e-12);
      const Eigen::MatrixXcd G = gaudin_matrix(ctx.model, v);
      for (std::size_t j = 0; j < n; ++j) {
        const Params vp = v.replaced(j, v[j] + h), vm = v.replaced(j, v[j] - h);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx fd = (y_eval(ctx.model, vp[k], vp) - y_eval(ctx.model, vm[k], vm)) / (2 * h);
          out.upper("entry_fd", rel_err(G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)), fd),
                    ctx.tol("gaudin_fd"));
        }
      }
      ++out.rec.instances;
    }
  }
}

void check_slavnov(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  std::optional<int> power;
  const Params theta(ctx.cfg.spec.theta);
  for (const auto& [n, v] : ctx.onshell(out)) {
    if (!power) {
      const Params t = theta.head(n);
      const cplx iz = izergin(ctx.cfg.spec, v, t) *
                      std::pow(ctx.c(), static_cast<double>(izergin_convention_power(n, ctx.sites()))) /
                      dual_normalization(ctx.cfg.spec, v);
      const Calibration cal = calibrate_c_power(iz / slavnov_scalar_product(ctx.model, v, t).value, ctx.c());
      power = cal.power;
      out.upper("calibration", cal.residual, ctx.tol("slavnov"));
      out.note("calibrated power of c at the inhomogeneities: " + std::to_string(cal.power));
    }
    for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
      const Params u = draw_set(rng, n, v);
      out.digest.add(v);
      out.digest.add(u);
      out.upper("rel_err", rel_err(slavnov_scalar_product(ctx.model, v, u, *power).value, ctx.oracle_product(v, u)),
                ctx.tol("slavnov"));
      ++out.rec.instances;
    }
  }
}

void check_maba_oracle(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  for (const auto& [n, v] : ctx.onshell(out)) {
    const cplx vac = direct_scalar_product(ctx.oracle->dual_bethe_vector(v), ctx.oracle->vacuum());
    for (std::size_t t = 0; t < ctx.cfg.trials; ++t) {
      const Params u = draw_set(rng, n + 1, v);
      out.digest.add(v);
      out.digest.add(u);
      const auto xs = maba_scalar_product(ctx.model, *ctx.cfg.twist, v, u, vac);
      const Eigen::VectorXcd X = oracle_X(ctx, v, u);
      Eigen::VectorXcd closed(X.size());
      for (Eigen::Index l = 0; l < X.size(); ++l) {
        closed[l] = xs[static_cast<std::size_t>(l)].value;
        out.upper("rel_err", rel_err(closed[l], X[l]), ctx.tol("maba"));
      }
      out.upper("lse", lse_residual(build_M(ctx.model, v, u).M, closed), ctx.tol("lse"));
      ++out.rec.instances;
    }
  }
}

void check_maba_asymptotics(Context& ctx, std::mt19937_64&, Outcome& out) {
  const auto all = ctx.onshell(out);
  if (all.empty()) return;
  const auto& [S, v] = all.front();
  out.digest.add(v);
  const TwistSpec& tw = *ctx.cfg.twist;
  const cplx c = ctx.c();
  const double N = static_cast<double>(ctx.sites());
  const cplx vac = direct_scalar_product(ctx.oracle->dual_bethe_vector(v), ctx.oracle->vacuum());
  std::vector<double> e_lambda, e_diag, e_nu, e_minor;
  for (double U : {1e3, 1e4, 1e5}) {
    std::vector<cplx> uu;
    for (std::size_t j = 1; j <= S; ++j) uu.push_back(U * static_cast<double>(j));
    const Params u(uu);
    double el = 0.0, ed = 0.0;
    const JacobianParts parts = jacobian_parts(ctx.model, v, u);
    for (std::size_t j = 0; j < S; ++j) {
      const cplx s = std::pow(c / u[j], N);
      el = std::max(el, rel_err(lambda_eval(ctx.model, u[j], v) * s, tw.kappa + tw.kappa_tilde));
      const auto jj = static_cast<Eigen::Index>(j);
      ed = std::max(ed, rel_err(parts.derivative(jj, jj) * s, tw.rho1 + tw.rho2 - tw.kappa - tw.kappa_tilde));
    }
    e_lambda.push_back(el);
    e_diag.push_back(ed);

    const cplx target_nu = tw.mu / tw.kappa_minus * (tw.rho1 + tw.rho2);
    const Operator nu = ctx.oracle->creation(U) * std::pow(c / U, N);
    e_nu.push_back((nu - target_nu * Operator::Identity(nu.rows(), nu.cols())).cwiseAbs().maxCoeff() /
                   std::abs(target_nu));

    const Params ufull = u.with(cplx(0.3, 0.2));
    const auto xs = maba_scalar_product(ctx.model, tw, v, ufull, vac);
    cplx scale = 1.0;
    for (const auto& x : u) scale *= std::pow(x / c, N);
    const cplx target = std::pow(tw.mu * (tw.rho1 + tw.rho2) / tw.kappa_minus, static_cast<double>(S)) * vac;
    e_minor.push_back(rel_err(xs[S].value / scale, target));
  }
  const double floor = ctx.tol("asymptotic_slope");
  out.lower("slope_lambda", slope(e_lambda), floor);
  out.lower("slope_derivative_diagonal", slope(e_diag), floor);
  out.lower("slope_nu12", slope(e_nu), floor);
  out.lower("slope_scalar_product", slope(e_minor), floor);
  out.rec.instances = 4;
}

void check_appendix_A(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  for (std::size_t t = 0; t < 10 * ctx.cfg.trials; ++t) {
    const std::size_t n = t % 5;
    const bool own = n + 1 <= ctx.model.n_max() && t % 2 == 0;
    const YModel m = own ? ctx.model : random_model(ctx.c(), n + 1, 4, rng);
    const Params u = draw_set(rng, n + 1), w = draw_set(rng, n + 1, u);
    out.digest.add(u);
    out.digest.add(w);
    const std::size_t j = t % (n + 1), k = (3 * t + 1) % (n + 1);
    out.upper("identity", identity_A(m, u, w, j, k).relative_error, ctx.tol("appendix"));
    const cplx z = draw(rng, 1.0) + cplx(3.0, 0.0);
    out.upper("auxiliary_sum", g_sum_A(ctx.c(), u, w, j, z).relative_error, ctx.tol("appendix"));
    out.upper("residue_sum", integrand_A(u, w, j, z).residue_sum_ratio(), ctx.tol("residue_sum"));
    ++out.rec.instances;
  }
}

void check_appendix_B(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  for (std::size_t t = 0; t < 10 * ctx.cfg.trials; ++t) {
    const std::size_t s = 1 + t % 3;
    const bool own = s + 1 <= ctx.model.n_max() && t % 2 == 0;
    const YModel m = own ? ctx.model : random_model(ctx.c(), s + 1, 4, rng);
    const Params v = draw_set(rng, s), u = draw_set(rng, s + 1, v);
    out.digest.add(v);
    out.digest.add(u);
    const std::size_t j = t % s, k = (t / 2) % s;
    out.upper("identity", identity_B(m, u, v, j, k).relative_error, ctx.tol("appendix"));
    const cplx z = draw(rng, 1.0) + cplx(3.0, 0.0);
    out.upper("auxiliary_sum", g_sum_B(ctx.c(), u, v, j, k, z).relative_error, ctx.tol("appendix"));
    out.upper("residue_sum", integrand_B(ctx.c(), u, v, j, k, z).residue_sum_ratio(), ctx.tol("residue_sum"));
    ++out.rec.instances;
  }
}

void check_transfer_action(Context& ctx, std::mt19937_64& rng, Outcome& out) {
  std::vector<std::size_t> sizes;
  if (ctx.cfg.kind == ModelKind::maba) {
    // the three-term eigenvalue describes the action on vectors with exactly S parameters
    sizes.push_back(ctx.cfg.spec.total_spin_units());
  } else {
    for (auto n : ctx.cfg.sizes)
      if (n <= 3) sizes.push_back(n);
  }
  for (auto n : sizes) {
    const Params u = draw_set(rng, n + 1);
    out.digest.add(u);
    const Eigen::MatrixXcd L = build_L(ctx.model, u);
    for (std::size_t j = 0; j <= n; ++j) {
      const Eigen::VectorXcd lhs = ctx.oracle->transfer(u[j]) * ctx.oracle->bethe_vector(u.complement(j));
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(lhs.size());
      for (std::size_t k = 0; k <= n; ++k)
        rhs += L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * ctx.oracle->bethe_vector(u.complement(k));
      out.upper("componentwise", (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff()),
                ctx.tol("transfer_action"));
    }
    ++out.rec.instances;
  }
}

using CheckFn = std::function<void(Context&, std::mt19937_64&, Outcome&)>;

const std::map<std::string, CheckFn>& implementations() {
  static const std::map<std::string, CheckFn> impl{
      {"det-M-zero", check_det_M_zero},         {"lse-residual", check_lse},
      {"omega-two-paths", check_omega_paths},   {"w-transform", check_w_transform},
      {"solution-ray", check_solution_ray},     {"izergin-oracle", check_izergin},
      {"gaudin-norm", check_gaudin},            {"slavnov-oracle", check_slavnov},
      {"maba-oracle", check_maba_oracle},       {"maba-asymptotics", check_maba_asymptotics},
      {"appendix-A", check_appendix_A},         {"appendix-B", check_appendix_B},
      {"transfer-action", check_transfer_action}};
  return impl;
}

YModel build_model(const ExperimentConfig& cfg) {
  const std::size_t top = *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
  switch (cfg.kind) {
    case ModelKind::periodic: return periodic_model(cfg.spec, std::max<std::size_t>(top, 3) + 1);
    case ModelKind::maba: return maba_model(cfg.spec, *cfg.twist, cfg.spec.total_spin_units() + 1);
    case ModelKind::degenerate: break;
  }
  return degenerate_model(cfg.spec.c, std::max<std::size_t>(top, 3) + 1);
}

}  // namespace

RunReport run(const ExperimentConfig& cfg) {
  Context ctx{cfg, build_model(cfg), std::nullopt, {}};
  if (cfg.kind != ModelKind::degenerate) ctx.oracle.emplace(cfg.spec, cfg.twist);

  RunReport report;
  report.config = cfg.echo;
  for (const auto& name : cfg.suite) {
    const CheckInfo& info = *find_check(name);
    CheckRecord rec;
    rec.name = name;
    Outcome out{rec, {}, {}};
    const auto start = std::chrono::steady_clock::now();
    if (std::find(info.models.begin(), info.models.end(), cfg.kind) == info.models.end()) {
      rec.status = "skipped";
      out.note(std::string("not applicable to ") + kind_name(cfg.kind));
    } else {
      std::mt19937_64 rng(cfg.seed ^ fnv1a(name.data(), name.size()));
      try {
        implementations().at(name)(ctx, rng, out);
        rec.status = out.passed() ? "pass" : "fail";
        if (rec.instances == 0) out.note("no instances were evaluated");
      } catch (const std::exception& e) {
        rec.status = "fail";
        out.note(std::string("error: ") + e.what());
      }
    }
    rec.digest = out.digest.hex();
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (rec.status == "pass")
      ++report.passed;
    else if (rec.status == "fail")
      ++report.failed;
    else
      ++report.skipped;
    report.checks.push_back(std::move(rec));
  }
  return report;
}

// ---------------------------------------------------------------- output

json to_json(const RunReport& report, bool include_timing) {
  json checks = json::array();
  for (const auto& r : report.checks) {
    json residuals = json::object();
    for (const auto& [k, v] : r.residuals)
      residuals[k] = {{"value", std::isfinite(v) ? json(v) : json(std::to_string(v))}, {"tolerance", r.tolerances.at(k)}};
    json rec{{"name", r.name},     {"status", r.status}, {"instances", r.instances},
             {"residuals", residuals}, {"notes", r.notes},  {"inputs_digest", r.digest}};
    if (include_timing) rec["wall_ms"] = r.wall_ms;
    checks.push_back(rec);
  }
  return {{"checks", checks},
          {"summary", {{"passed", report.passed}, {"failed", report.failed}, {"skipped", report.skipped}}},
          {"config", report.config}};
}

std::string to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "check,status,instances,residual,value,tolerance,inputs_digest,wall_ms\n";
  out << std::setprecision(6);
  for (const auto& r : report.checks) {
    if (r.residuals.empty()) out << r.name << ',' << r.status << ',' << r.instances << ",,,," << r.digest << ','
                                 << r.wall_ms << '\n';
    for (const auto& [k, v] : r.residuals)
      out << r.name << ',' << r.status << ',' << r.instances << ',' << k << ',' << v << ',' << r.tolerances.at(k) << ','
          << r.digest << ',' << r.wall_ms << '\n';
  }
  return out.str();
}

}  // namespace bdl
