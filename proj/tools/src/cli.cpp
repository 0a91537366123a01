#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lyz/dynamics.hpp"
#include "lyz/errors.hpp"
#include "lyz/format.hpp"
#include "lyz/free_energy.hpp"
#include "lyz/measure.hpp"
#include "lyz/partition.hpp"
#include "lyz/spectra.hpp"
#include "lyz/verify.hpp"
#include "lyz/zeros.hpp"

namespace lyz::cli {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string subcommand;
  int k = 2;
  std::string t_text;
  int n = -1;
  std::string tree = "rooted";
  std::optional<double> phi;
  std::string phi_grid;
  std::string t_grid;
  std::string r_grid;
  std::string y_grid;
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool quick = false;
  bool bruteforce = false;
  bool singular = false;
  std::string kind = "cdf";
  std::size_t bins = 64;
  int depth = 16;
  std::uint64_t birkhoff_length = 1000000;
  unsigned birkhoff_seeds = 32;
  double delta0 = 0.5;
  std::optional<double> kappa_hat;
};

// Everything a subcommand needs, already range-checked.
struct Plan {
  RunConfig cfg;
  std::optional<TreeSpec> tree;
  std::optional<mpq_class> t_exact;
  double t = 0.0;
  std::vector<double> phi_grid;
  std::vector<double> t_grid;
  std::vector<double> r_grid;
  std::vector<double> y_grid;
};

json tree_json(const TreeSpec& tree) {
  return {{"variant", to_string(tree.variant())}, {"k", tree.k()}, {"n", tree.level()},
          {"vertices", tree.vertex_count()}};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : ", ") + f;
  throw ParameterError("--format " + c.format + " is not available for '" + c.subcommand + "' (use " + list + ")");
}

Plan validate(RunConfig c) {
  Plan p;
  const std::string& s = c.subcommand;
  const bool needs_tree = s == "zeros" || s == "partition" || s == "measure";
  const bool needs_t = s != "phi-e" && s != "verify";
  if (c.format.empty()) c.format = (s == "spectra" && c.phi_grid.empty()) || s == "verify" ? "json" : "csv";
  if (s != "verify") validate_branching(c.k);
  require(c.workers <= 1024, "--workers must be at most 1024");
  if (needs_t) {
    require(!c.t_text.empty(), "--t is required for '" + s + "'");
    p.t_exact = parse_rational(c.t_text);
    p.t = to_double(*p.t_exact);
    if (s == "partition")
      require(*p.t_exact >= 0 && *p.t_exact <= 1, "--t must lie in [0, 1]");
    else
      validate_temperature(p.t);
  }
  if (needs_tree || s == "free-energy" || (s == "spectra")) {
    if (c.n < 0) c.n = s == "spectra" ? 16 : -1;
    require(c.n >= 0, "--n is required for '" + s + "'");
    require(c.n <= 62, "--n must be at most 62");
    p.tree = TreeSpec(parse_tree_variant(c.tree), c.n, c.k);
  }
  if (c.phi) {
    require(std::isfinite(*c.phi) && *c.phi > -kPi && *c.phi <= kPi, "--phi must lie in (-pi, pi]");
  }
  if (!c.phi_grid.empty()) p.phi_grid = parse_grid(c.phi_grid);
  if (!c.t_grid.empty()) p.t_grid = parse_grid(c.t_grid);
  if (!c.r_grid.empty()) p.r_grid = parse_grid(c.r_grid);
  if (!c.y_grid.empty()) p.y_grid = parse_grid(c.y_grid);
  for (double phi : p.phi_grid) require(phi >= -kPi && phi <= kPi, "--phi-grid values must lie in [-pi, pi]");

  if (s == "zeros") {
    require_format(c, {"csv", "json"});
    require(p.tree->vertex_count() <= (std::uint64_t{1} << 26), "zero list too large; use 'measure' for big trees");
  } else if (s == "partition") {
    require_format(c, {"json", "csv"});
    require(p.tree->vertex_count() <= 4096, "partition polynomial is limited to 4096 vertices");
    if (c.format == "csv")
      require(p.tree->vertex_count() <= 512, "root finding is limited to 512 vertices; use --format json");
    if (c.bruteforce)
      require(p.tree->vertex_count() <= kMaxBruteForceVertices, "--bruteforce is limited to 22 vertices");
  } else if (s == "measure") {
    require_format(c, {"csv", "json"});
    require(c.kind == "cdf" || c.kind == "histogram", "--kind must be cdf or histogram");
    require(c.bins >= 1 && c.bins <= 1000000, "--bins must lie in [1, 10^6]");
    if (p.phi_grid.empty()) p.phi_grid = uniform_grid(1000);
  } else if (s == "phi-e") {
    require_format(c, {"csv", "json"});
    require(!p.t_grid.empty(), "--t-grid is required for 'phi-e'");
    for (double t : p.t_grid) require(t >= 0.0 && t <= 1.0, "--t-grid values must lie in [0, 1]");
  } else if (s == "spectra") {
    require(p.t > 0.0, "spectra need t > 0");
    if (p.phi_grid.empty()) {
      require_format(c, {"json"});
      require(c.phi.has_value(), "--phi or --phi-grid is required for 'spectra'");
      require(below_phi_e_curve(*c.phi, p.t, c.k), "(phi, t) must lie strictly below the phi_e curve");
      require(c.depth >= 1 && c.depth <= 24, "--depth must lie in [1, 24]");
      require(c.birkhoff_length >= 1 && c.birkhoff_seeds >= 2, "Birkhoff run needs length >= 1 and >= 2 seeds");
    } else {
      require_format(c, {"csv", "json"});
    }
  } else if (s == "free-energy") {
    require_format(c, {"csv", "json"});
    require(p.t > 0.0, "free energy needs t > 0");
    require(c.phi.has_value(), "--phi is required for 'free-energy'");
    if (c.singular) {
      require(c.delta0 > 0.0 && c.delta0 < kPi, "--delta0 must lie in (0, pi)");
      if (p.y_grid.empty())
        for (int j = 2; j <= 6; ++j) p.y_grid.push_back(c.delta0 * std::ldexp(1.0, -j));
      require(p.y_grid.size() >= 3, "--y-grid needs at least three points");
      for (double y : p.y_grid) require(y > 0.0 && y < c.delta0, "--y-grid values must lie in (0, delta0)");
      require(support_margin(*c.phi, p.t, c.k) > 0.0, "--phi lies in the zero-free arc");
      if (c.kappa_hat) require(*c.kappa_hat > 0.0, "--kappa-hat must be positive");
    } else {
      require(!p.r_grid.empty(), "--r-grid is required for the radial scan (or pass --singular)");
      for (double r : p.r_grid) require(r > 0.0 && std::isfinite(r), "--r-grid values must be positive");
    }
  } else if (s == "verify") {
    require_format(c, {"json"});
  }
  p.cfg = std::move(c);
  return p;
}

void emit_zeros(const Plan& p, std::ostream& os) {
  ZeroOptions zo;
  zo.workers = p.cfg.workers;
  const auto z = enumerate_zeros(*p.tree, p.t, zo);
  if (p.cfg.format == "csv") {
    write_zeros_csv(os, z);
    return;
  }
  json j;
  j["schema"] = "lyz.zeros.v1";
  j["tree"] = tree_json(*p.tree);
  j["t"] = p.t;
  j["angles"] = z.angles;
  j["residuals"] = z.residuals;
  os << j.dump(2) << '\n';
}

void emit_partition(const Plan& p, std::ostream& os) {
  const auto poly = p.cfg.bruteforce ? partition_poly_bruteforce(*p.tree, *p.t_exact, p.cfg.workers)
                                     : partition_poly_recursive(*p.tree, *p.t_exact);
  if (p.cfg.format == "json")
    write_partition_json(os, poly);
  else
    write_roots_csv(os, poly_roots_on_circle(poly));
}

void emit_measure(const Plan& p, std::ostream& os) {
  const EmpiricalMeasure em(*p.tree, p.t);
  if (p.cfg.format == "csv") {
    if (p.cfg.kind == "cdf")
      write_cdf_csv(os, em, p.phi_grid, p.cfg.workers);
    else
      write_histogram_csv(os, em, p.cfg.bins);
    return;
  }
  json j;
  j["schema"] = "lyz.measure.v1";
  j["tree"] = tree_json(*p.tree);
  j["t"] = p.t;
  j["kind"] = p.cfg.kind;
  auto rows = json::array();
  if (p.cfg.kind == "cdf") {
    for (double phi : p.phi_grid) rows.push_back({{"phi", phi}, {"value", em.cdf(phi)}});
  } else {
    double prev = -kPi;
    for (std::size_t i = 0; i < p.cfg.bins; ++i) {
      const double next = i + 1 == p.cfg.bins ? kPi : -kPi + kTwoPi * static_cast<double>(i + 1) / p.cfg.bins;
      rows.push_back({{"phi", 0.5 * (prev + next)}, {"value", em.interval_mass(prev, next)}});
      prev = next;
    }
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << '\n';
}

void emit_phi_e(const Plan& p, std::ostream& os) {
  const int k = p.cfg.k;
  const double tc = critical_temperature(k);
  struct Row {
    double t;
    std::optional<double> value;
  };
  std::vector<Row> rows;
  for (double t : p.t_grid) rows.push_back({t, t < tc ? std::nullopt : std::optional<double>(phi_e(t, k))});
  if (p.cfg.format == "csv") {
    os << "# lyz phi_e v1; k=" << k << "\n";
    os << "t,status,phi_e\n";
    for (const auto& r : rows)
      os << format_double(r.t) << ',' << (r.value ? "gap," + format_double(*r.value) : std::string("no-gap,")) << '\n';
    return;
  }
  json j;
  j["schema"] = "lyz.phi_e.v1";
  j["k"] = k;
  auto arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"t", r.t}, {"phi_e", r.value ? json(*r.value) : json(nullptr)}});
  j["rows"] = std::move(arr);
  os << j.dump(2) << '\n';
}

void emit_spectra(const Plan& p, std::ostream& os) {
  const int k = p.cfg.k;
  if (!p.phi_grid.empty()) {
    const auto rows = kappa_curve(p.t, k, p.phi_grid);
    if (p.cfg.format == "csv") {
      write_kappa_csv(os, p.t, k, rows);
      return;
    }
    json j;
    j["schema"] = "lyz.kappa.v1";
    j["k"] = k;
    j["t"] = p.t;
    auto arr = json::array();
    for (const auto& r : rows) {
      if (r.in_support)
        arr.push_back({{"phi", r.phi}, {"status", "ok"}, {"w_disk", {r.w_disk.real(), r.w_disk.imag()}},
                       {"chi", r.chi}, {"kappa", r.kappa}});
      else
        arr.push_back({{"phi", r.phi}, {"status", "no-support"}});
    }
    j["rows"] = std::move(arr);
    os << j.dump(2) << '\n';
    return;
  }
  SpectralOptions so;
  so.birkhoff.base_seed = p.cfg.seed;
  so.birkhoff.workers = p.cfg.workers;
  so.birkhoff.length = p.cfg.birkhoff_length;
  so.birkhoff.seeds = p.cfg.birkhoff_seeds;
  so.mme_depth = p.cfg.depth;
  so.dimension_level = p.cfg.n;
  so.dimension.variant = p.tree->variant();
  write_spectral_json(os, spectral_report(ModelParams(k, p.t, *p.cfg.phi), so));
}

void emit_free_energy(const Plan& p, std::ostream& os) {
  const int k = p.cfg.k;
  const double phi = *p.cfg.phi;
  const TreeVariant variant = p.tree->variant();
  if (!p.cfg.singular) {
    if (p.cfg.format == "csv") {
      write_radial_scan_csv(os, phi, p.t, k, p.cfg.n, p.r_grid, variant, p.cfg.workers);
      return;
    }
    ZeroOptions zo;
    zo.workers = p.cfg.workers;
    const auto zeros = enumerate_zeros(*p.tree, p.t, zo);
    json j;
    j["schema"] = "lyz.radial.v1";
    j["tree"] = tree_json(*p.tree);
    j["t"] = p.t;
    j["phi"] = phi;
    auto arr = json::array();
    for (double r : p.r_grid) {
      const auto z = std::polar(r, phi);
      arr.push_back({{"r", r},
                     {"f_electrostatic", free_energy_electrostatic(z, zeros)},
                     {"f_recursive", free_energy_recursive(z, p.t, k, p.cfg.n, variant)}});
    }
    j["rows"] = std::move(arr);
    os << j.dump(2) << '\n';
    return;
  }
  double kappa_hat = 0.0;
  std::string prior = "given";
  if (p.cfg.kappa_hat) {
    kappa_hat = *p.cfg.kappa_hat;
  } else {
    DimensionOptions d;
    d.variant = variant;
    kappa_hat = pointwise_dimension(phi, p.t, k, p.cfg.n, d).value;
    prior = "pointwise_dimension";
  }
  SingularOptions so;
  so.variant = variant;
  const auto fit = singular_exponent(phi, p.t, k, p.cfg.n, p.cfg.delta0, p.y_grid, kappa_hat, so);
  if (p.cfg.format == "csv") {
    write_singular_csv(os, fit);
  } else {
    json j;
    j["schema"] = "lyz.singular.v1";
    j["tree"] = tree_json(*p.tree);
    j["t"] = p.t;
    j["phi"] = phi;
    j["delta0"] = p.cfg.delta0;
    j["kappa_hat"] = kappa_hat;
    j["kappa_hat_source"] = prior;
    j["m"] = fit.m;
    j["kappa"] = fit.kappa;
    j["r_squared"] = fit.r_squared;
    j["stable"] = fit.stable;
    j["y"] = fit.ys;
    j["h_sing"] = fit.h_sing;
    os << j.dump(2) << '\n';
  }
  if (!fit.stable)
    throw ComputationError("singular exponent fit is unstable (R^2 = " + format_double(fit.r_squared) + " < 0.98)");
}

int execute(const Plan& p, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int code = kOk;
  const std::string& s = p.cfg.subcommand;
  if (s == "zeros") emit_zeros(p, buffer);
  else if (s == "partition") emit_partition(p, buffer);
  else if (s == "measure") emit_measure(p, buffer);
  else if (s == "phi-e") emit_phi_e(p, buffer);
  else if (s == "spectra") emit_spectra(p, buffer);
  else if (s == "free-energy") emit_free_energy(p, buffer);
  else if (s == "verify") {
    VerifyOptions vo;
    vo.quick = p.cfg.quick;
    vo.seed = p.cfg.seed;
    vo.workers = p.cfg.workers;
    const auto report = run_verification(vo);
    buffer << report.to_json();
    for (const auto& c : report.checks)
      err << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    if (!report.all_passed) code = kVerificationFailure;
  }
  if (p.cfg.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(p.cfg.out, std::ios::binary);
    if (!f) throw ComputationError("cannot open output file " + p.cfg.out);
    f << buffer.str();
    if (!f) throw ComputationError("failed writing " + p.cfg.out);
  }
  return code;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw ParameterError("grid '" + text + "' must look like a:b:step");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw ParameterError("grid '" + text + "' must look like a:b:step");
  const double a = parts[0], b = parts[1], step = parts[2];
  if (!(step > 0.0) || b < a) throw ParameterError("grid '" + text + "' needs step > 0 and a <= b");
  const double count = std::floor((b - a) / step + 1e-9) + 1.0;
  if (count > 1e7) throw ParameterError("grid '" + text + "' has more than 10^7 points");
  std::vector<double> g;
  for (long i = 0; i < static_cast<long>(count); ++i) g.push_back(a + static_cast<double>(i) * step);
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Lee-Yang zeros of the Ising model on Cayley trees"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lyz 0.1.0");

  const auto common = [&](CLI::App* sub, bool tree_opts, bool t_opt) {
    sub->add_option("--k", c.k, "branching number (2..64)");
    if (t_opt) sub->add_option("--t", c.t_text, "t = exp(-2J/T): decimal or exact p/q");
    if (tree_opts) {
      sub->add_option("--n", c.n, "tree level");
      sub->add_option("--tree", c.tree, "rooted or full");
    }
    sub->add_option("--out", c.out, "output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json");
    sub->add_option("--workers", c.workers, "worker threads (0 = all cores)");
  };

  auto* zeros = app.add_subcommand("zeros", "Lee-Yang zero angles of a finite tree");
  common(zeros, true, true);

  auto* partition = app.add_subcommand("partition", "exact partition polynomial (json) or its roots (csv)");
  common(partition, true, true);
  partition->add_flag("--bruteforce", c.bruteforce, "sum over all spin configurations");

  auto* measure = app.add_subcommand("measure", "CDF or histogram of the zero measure");
  common(measure, true, true);
  measure->add_option("--phi-grid", c.phi_grid, "a:b:step");
  measure->add_option("--kind", c.kind, "cdf or histogram");
  measure->add_option("--bins", c.bins, "histogram bins");

  auto* phie = app.add_subcommand("phi-e", "half-width of the zero-free arc over a t grid");
  common(phie, false, false);
  phie->add_option("--t-grid", c.t_grid, "a:b:step");

  auto* spectra = app.add_subcommand("spectra", "Lyapunov exponents, dimension, kappa");
  common(spectra, true, true);
  spectra->add_option("--phi", c.phi, "field angle");
  spectra->add_option("--phi-grid", c.phi_grid, "a:b:step (kappa curve)");
  spectra->add_option("--seed", c.seed, "base seed for Birkhoff runs");
  spectra->add_option("--depth", c.depth, "preimage depth for the MME exponent");
  spectra->add_option("--birkhoff-length", c.birkhoff_length, "orbit length per seed");
  spectra->add_option("--birkhoff-seeds", c.birkhoff_seeds, "independent orbits");

  auto* free_energy = app.add_subcommand("free-energy", "radial free-energy scans and kappa fits");
  common(free_energy, true, true);
  free_energy->add_option("--phi", c.phi, "field angle");
  free_energy->add_option("--r-grid", c.r_grid, "a:b:step of |z|");
  free_energy->add_flag("--singular", c.singular, "fit kappa from the singular part");
  free_energy->add_option("--delta0", c.delta0, "upper limit of the singular integral");
  free_energy->add_option("--y-grid", c.y_grid, "a:b:step of y");
  free_energy->add_option("--kappa-hat", c.kappa_hat, "prior for kappa (default: pointwise dimension)");

  auto* verify = app.add_subcommand("verify", "run the self-check suite");
  verify->add_flag("--quick", c.quick, "smaller problem sizes");
  verify->add_option("--seed", c.seed, "seed for randomized checks");
  verify->add_option("--out", c.out, "report file (default stdout)");
  verify->add_option("--format", c.format, "json");
  verify->add_option("--workers", c.workers, "worker threads (0 = all cores)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    std::ostringstream msg;
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidConfig;
  }
  for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();

  Plan plan;
  try {
    plan = validate(c);
  } catch (const ParameterError& e) {
    err << "lyz: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  }
  try {
    return execute(plan, out, err);
  } catch (const ParameterError& e) {
    err << "lyz: invalid configuration: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "lyz: computation failed: " << e.what() << '\n';
    return kComputationFailure;
  }
}

}  // namespace lyz::cli
