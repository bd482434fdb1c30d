#include "dsep/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "dsep/diag.hpp"
#include "dsep/dict.hpp"
#include "dsep/error.hpp"
#include "dsep/io.hpp"
#include "dsep/omp.hpp"
#include "dsep/pde.hpp"
#include "dsep/qpat.hpp"
#include "dsep/tv.hpp"

namespace dsep {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ArgumentError("cannot create directory '" + dir + "': " + ec.message());
}

int side_log2(std::size_t d) {
  int J = 0;
  while ((std::size_t{1} << J) < d) ++J;
  if ((std::size_t{1} << J) != d) throw ArgumentError("grid side " + std::to_string(d) + " is not a power of two");
  return J;
}

struct DictSpec {
  std::string kind = "haar2d";
  int J = 7;
  std::size_t d = 0;
  std::size_t L = 15;
  std::size_t n = 0;
  bool no_constant = false;
};

Dictionary make_dict(const DictSpec& s) {
  if (s.kind == "haar2d") return Dictionary::haar2d(s.J);
  if (s.kind == "sinusoid2d") return Dictionary::sinusoid2d(s.d ? s.d : std::size_t{1} << s.J, s.L, !s.no_constant);
  if (s.kind == "identity") return Dictionary::identity(s.n);
  if (s.kind == "fourier1d") return Dictionary::fourier1d(s.n);
  throw ArgumentError("unknown dictionary kind '" + s.kind + "' (expected haar2d, sinusoid2d, identity or fourier1d)");
}

void write_history(const std::string& path, const std::vector<double>& hist) {
  CsvTable t;
  t.header = {"iteration", "residual"};
  for (std::size_t k = 0; k < hist.size(); ++k) t.rows.push_back({std::to_string(k), format_double(hist[k])});
  write_file_atomic(path, t.str());
}

void dict_info(const DictSpec& a, const std::optional<DictSpec>& b) {
  const auto A = make_dict(a);
  std::cout << "kind: " << A.describe() << "\nn: " << A.n() << "\nm: " << A.m()
            << "\northonormal_set: " << (A.orthonormal_set() ? "true" : "false") << "\n";
  if (b) {
    const auto B = make_dict(*b);
    std::cout << "versus: " << B.describe() << "\ncoherence: " << format_double(mutual_coherence(A, B)) << "\n";
  }
}

struct SeparateArgs {
  std::vector<std::string> inputs;
  int J = 0;
  std::size_t L = 15;
  bool no_constant = false;
  std::optional<double> epsilon;
  std::size_t max_iterations = 1500;
  std::string out = ".";
};

void separate(const SeparateArgs& a) {
  std::vector<std::vector<double>> h;
  std::size_t d = 0;
  for (const auto& p : a.inputs) {
    const Grid2 g = read_rg2(p);
    if (d && g.side() != d) throw ArgumentError("separate: input grids differ in size");
    d = g.side();
    h.push_back(g.vector());
  }
  const int J = a.J ? a.J : side_log2(d);
  if ((std::size_t{1} << J) != d) throw ArgumentError("separate: --J does not match the input side");
  const auto Af = Dictionary::haar2d(J);
  const auto Ag = Dictionary::sinusoid2d(d, a.L, !a.no_constant);
  OmpConfig cfg;
  cfg.max_iterations = a.max_iterations;
  if (a.epsilon) {
    if (!(*a.epsilon >= 0.0)) throw ArgumentError("separate: epsilon must be nonnegative");
    cfg.residual_target = std::sqrt(static_cast<double>(h.size())) * *a.epsilon;
  }
  cfg.validate();
  const StackedSystem sys(Af, Ag, std::move(h));
  const auto r = omp_block(sys, cfg);
  ensure_dir(a.out);
  write_rg2(join(a.out, "f.rg2"), Grid2(d, Af.synthesize(r.coeffs.y_f())));
  for (std::size_t i = 0; i < r.coeffs.block_count(); ++i)
    write_rg2(join(a.out, "g" + std::to_string(i + 1) + ".rg2"), Grid2(d, Ag.synthesize(r.coeffs.y_g()[i])));
  write_history(join(a.out, "residuals.csv"), r.residual_history);
  std::cout << "iterations: " << r.selected.size() << "\nresidual: " << format_double(r.final_residual) << "\n";
}

struct DiagnoseArgs {
  std::string f;
  std::vector<std::string> g;
  std::size_t L = 15;
  bool no_constant = false;
  std::size_t probes = 20;
  std::uint64_t seed = 1;
  double d_const = 1.0;
  double beta = 1e-3;
  std::string out = "report.csv";
};

void diagnose(const DiagnoseArgs& a) {
  const Grid2 f = read_rg2(a.f);
  const std::size_t d = f.side();
  const auto Af = Dictionary::haar2d(side_log2(d));
  const auto Ag = Dictionary::sinusoid2d(d, a.L, !a.no_constant);
  const auto yf = Af.analyze(f.values());
  std::vector<std::vector<double>> yg;
  std::vector<std::vector<std::size_t>> gsupp;
  for (const auto& p : a.g) {
    const Grid2 g = read_rg2(p);
    if (g.side() != d) throw ArgumentError("diagnose: component grids differ in size");
    yg.push_back(Ag.analyze(g.values()));
    gsupp.push_back(support(yg.back()));
  }
  const auto fsupp = support(yf);
  // Probes: the comb, then seeded sparse vectors of growing size.
  std::vector<std::vector<double>> probes{dirac_comb(Af.m())};
  for (std::size_t k = 1; probes.size() < a.probes; ++k) {
    const std::size_t size = std::min(Af.m(), 16 * k);
    auto q = random_sparse(Af.m(), size, 1.0, a.seed + k);
    const double scale = 2.0 * a.d_const / std::max(norm2(q), 1e-300);
    for (auto& x : q) x *= scale;
    probes.push_back(std::move(q));
  }
  probes.resize(a.probes);
  const auto res = cs2_probe(Af, Ag, fsupp, gsupp, probes, a.d_const);
  CsvTable t;
  t.header = {"probe", "in_domain", "lhs", "rhs", "margin"};
  for (std::size_t k = 0; k < res.size(); ++k)
    t.rows.push_back({std::to_string(k), res[k].in_domain ? "1" : "0", format_double(res[k].lhs),
                      format_double(res[k].rhs), format_double(res[k].margin)});
  write_file_atomic(a.out, t.str());
  const auto cs1 = cs1_check(yg, a.beta);
  std::cout << "y_f nonzeros: " << fsupp.size() << "\n";
  for (std::size_t i = 0; i < gsupp.size(); ++i) std::cout << "y_g" << i + 1 << " nonzeros: " << gsupp[i].size() << "\n";
  std::cout << "cs1 violations: " << cs1.violations.size() << "\n";
}

struct SolveArgs {
  std::string D, mu;
  std::string family = "gamma1";
  std::size_t index = 1;
  double tolerance = 1e-10;
  std::string out = "u.rg2";
};

void solve(const SolveArgs& a) {
  const Grid2 D = read_rg2(a.D), mu = read_rg2(a.mu);
  if (D.side() != mu.side()) throw ArgumentError("solve: D and mu differ in size");
  SolverOptions opts;
  opts.tolerance = a.tolerance;
  const auto phi = boundary_family(parse_boundary_family(a.family), a.index, D.side());
  write_rg2(a.out, solve_diffusion({D, mu, phi}, opts));
}

struct TvArgs {
  std::string in, out;
  TvConfig cfg;
};

struct PhantomArgs {
  std::string kind;
  std::size_t d = 128;
  std::string out;
  std::string pgm;
};

struct ConvertArgs {
  std::string in, out;
  std::size_t side = 0;
};

void convert(const ConvertArgs& a) {
  const auto ext = fs::path(a.out).extension().string();
  const auto in_ext = fs::path(a.in).extension().string();
  Grid2 g;
  if (in_ext == ".csv") {
    const auto t = parse_csv(read_file(a.in));
    if (t.header != std::vector<std::string>{"row", "col", "value"})
      throw ArgumentError("convert: CSV input needs the header row,col,value");
    const std::size_t d = a.side ? a.side : static_cast<std::size_t>(std::llround(std::sqrt(t.rows.size())));
    if (d * d != t.rows.size()) throw ArgumentError("convert: CSV row count is not a square");
    g = Grid2(d);
    for (const auto& r : t.rows) {
      const std::size_t row = std::stoul(r[0]), col = std::stoul(r[1]);
      if (row >= d || col >= d) throw ArgumentError("convert: CSV index out of range");
      g(row, col) = std::stod(r[2]);
    }
  } else {
    g = read_rg2(a.in);
  }
  if (ext == ".csv") {
    CsvTable t;
    t.header = {"row", "col", "value"};
    for (std::size_t r = 0; r < g.side(); ++r)
      for (std::size_t c = 0; c < g.side(); ++c)
        t.rows.push_back({std::to_string(r), std::to_string(c), format_double(g(r, c))});
    write_file_atomic(a.out, t.str());
  } else if (ext == ".pgm") {
    write_pgm(a.out, g);
  } else if (ext == ".rg2") {
    write_rg2(a.out, g);
  } else {
    throw ArgumentError("convert: output extension must be .rg2, .csv or .pgm");
  }
}

DictionaryParams read_dict_params(KeyValueConfig& kv, std::size_t d) {
  DictionaryParams dp;
  dp.J = static_cast<int>(kv.get_int("J", side_log2(d)));
  dp.L = kv.get_size("L", dp.L);
  dp.include_constant = kv.get_bool("include_constant", dp.include_constant);
  if ((std::size_t{1} << dp.J) != d) throw ArgumentError("config: J does not match d");
  if (dp.L < 1 || 2 * (dp.L + 1) > d) throw ArgumentError("config: L must satisfy 1 <= L and 2(L+1) <= d");
  return dp;
}

std::optional<TvConfig> read_tv(KeyValueConfig& kv, const std::string& prefix) {
  const auto w = kv.get_optional_double(prefix + "weight");
  const auto it = kv.get_size(prefix + "iterations", 100);
  if (!w) return std::nullopt;
  TvConfig tv;
  tv.weight = *w;
  tv.iterations = it;
  tv.validate();
  return tv;
}

void qpat_gamma1(const std::string& path, const std::string& out_override) {
  auto kv = KeyValueConfig::load(path);
  const auto kind = parse_phantom_kind(kv.get_string("phantom", "convex_inclusions"));
  const std::size_t d = kv.get_size("d", 128);
  side_log2(d);
  const auto dp = read_dict_params(kv, d);
  const std::size_t N = kv.get_size("N", 5);
  const bool sweep = kv.get_bool("sweep", true);
  const double noise = kv.get_double("noise_level", 0.0);
  const auto seed = static_cast<std::uint64_t>(kv.get_size("seed", 1));
  const std::size_t iters = kv.get_size("iterations", 1500);
  const auto eps = kv.get_optional_double("epsilon");
  const bool gauge = kv.get_bool("illumination_gauge", true);
  const auto tv = read_tv(kv, "tv_");
  std::string out = kv.get_string("out", "out");
  kv.check_consumed();
  if (!out_override.empty()) out = out_override;
  if (N < 1 || N > 5) throw ArgumentError("config: N must lie in 1..5");
  if (!(noise >= 0.0)) throw ArgumentError("config: noise_level must be nonnegative");
  if (iters < 1) throw ArgumentError("config: iterations must be positive");
  if (eps && !(*eps >= 0.0)) throw ArgumentError("config: epsilon must be nonnegative");

  const Grid2 mu = phantom(kind, d);
  std::vector<BoundaryTrace> phis;
  for (std::size_t i = 1; i <= N; ++i) phis.push_back(boundary_family(BoundaryFamily::gamma1, i, d));
  const auto prob = make_qpat_problem(Grid2(d, 1.0), mu, Grid2(d, 1.0), phis, noise, seed);
  const auto all = synthesize_data(prob);
  ensure_dir(out);
  CsvTable metrics;
  metrics.header = {"stage", "N", "error", "residual"};
  const std::string stage = tv ? "tv" : "separation";
  for (std::size_t n = sweep ? 1 : N; n <= N; ++n) {
    MeasurementSet ms;
    ms.h.assign(all.h.begin(), all.h.begin() + static_cast<std::ptrdiff_t>(n));
    ms.epsilon_override = eps;
    Gamma1Config cfg;
    cfg.dict = dp;
    cfg.omp.max_iterations = iters;
    cfg.tv = tv;
    if (gauge) cfg.illumination.assign(phis.begin(), phis.begin() + static_cast<std::ptrdiff_t>(n));
    const auto r = reconstruct_gamma1(ms, cfg, mu);
    metrics.rows.push_back({stage, std::to_string(n), format_double(*r.error), format_double(r.omp.final_residual)});
    std::cout << stage << " N=" << n << " error=" << format_double(*r.error) << "\n";
    if (n == N) {
      write_rg2(join(out, "mu.rg2"), r.mu);
      for (std::size_t i = 0; i < r.u.size(); ++i) write_rg2(join(out, "u" + std::to_string(i + 1) + ".rg2"), r.u[i]);
    }
  }
  write_rg2(join(out, "mu_true.rg2"), mu);
  write_file_atomic(join(out, "metrics.csv"), metrics.str());
}

void qpat_gammavar(const std::string& path, const std::string& out_override) {
  auto kv = KeyValueConfig::load(path);
  const std::size_t d = kv.get_size("d", 128);
  side_log2(d);
  GammaVarConfig cfg;
  cfg.dict = read_dict_params(kv, d);
  const auto mu_kind = parse_phantom_kind(kv.get_string("phantom", "convex_inclusions"));
  const bool variable_gamma = kv.get_bool("variable_gamma", true);
  const bool variable_D = kv.get_bool("variable_D", true);
  const double noise = kv.get_double("noise_level", 0.0);
  const auto seed = static_cast<std::uint64_t>(kv.get_size("seed", 1));
  cfg.mu0 = Grid2(d, kv.get_double("mu0", 1.0));
  cfg.lambda1 = kv.get_double("lambda1", cfg.lambda1);
  cfg.lambda2 = kv.get_double("lambda2", cfg.lambda2);
  cfg.outer_iterations = kv.get_size("outer_iterations", cfg.outer_iterations);
  cfg.step1_iterations = kv.get_size("step1_iterations", cfg.step1_iterations);
  cfg.step3_iterations = kv.get_size("step3_iterations", cfg.step3_iterations);
  cfg.boundary_band = kv.get_size("boundary_band", cfg.boundary_band);
  cfg.mu_floor = kv.get_double("mu_floor", cfg.mu_floor);
  cfg.smoothing_sigma = kv.get_double("smoothing_sigma", cfg.smoothing_sigma);
  cfg.determinant_threshold = kv.get_double("determinant_threshold", cfg.determinant_threshold);
  auto to_zero_based = [](std::vector<std::size_t> v) {
    for (auto& i : v) {
      if (i < 1 || i > 5) throw ArgumentError("config: measurement indices must lie in 1..5");
      --i;
    }
    return v;
  };
  cfg.separation = to_zero_based(kv.get_size_list("separation", {1, 2, 3}));
  cfg.diffusion = to_zero_based(kv.get_size_list("diffusion", {1, 4, 5}));
  cfg.mu_tv = read_tv(kv, "mu_tv_");
  std::string out = kv.get_string("out", "out");
  kv.check_consumed();
  if (!out_override.empty()) out = out_override;
  if (!(noise >= 0.0)) throw ArgumentError("config: noise_level must be nonnegative");
  if (!(cfg.mu0[0] > 0.0)) throw ArgumentError("config: mu0 must be positive");
  if (!(cfg.smoothing_sigma >= 0.0)) throw ArgumentError("config: smoothing_sigma must be nonnegative");
  cfg.validate(5);

  const Grid2 mu = phantom(mu_kind, d);
  const Grid2 D = variable_D ? smooth_bumps(d, 1.0, default_diffusion_bumps()) : Grid2(d, 1.0);
  const Grid2 G = variable_gamma ? smooth_bumps(d, 1.0, default_gruneisen_bumps()) : Grid2(d, 1.0);
  std::vector<BoundaryTrace> phis;
  for (std::size_t i = 1; i <= 5; ++i) phis.push_back(boundary_family(BoundaryFamily::gammavar, i, d));
  const auto prob = make_qpat_problem(G, mu, D, phis, noise, seed);
  const auto r = reconstruct_gammavar(prob, cfg);

  ensure_dir(out);
  CsvTable metrics;
  metrics.header = {"stage", "N", "error", "residual"};
  const std::string n = "5";
  metrics.rows.push_back({"mu_step1", n, format_double(r.mu_error_step1), format_double(r.step1_residual)});
  metrics.rows.push_back({"D_step0", n, format_double(r.D_error_step0), format_double(r.step1_residual)});
  for (std::size_t k = 0; k < r.iterates.size(); ++k) {
    const auto& it = r.iterates[k];
    const std::string s = std::to_string(k + 1);
    metrics.rows.push_back({"mu_iter" + s, n, format_double(it.mu_error), format_double(it.omp_residual)});
    metrics.rows.push_back({"D_iter" + s, n, format_double(it.D_error), format_double(it.omp_residual)});
  }
  write_file_atomic(join(out, "metrics.csv"), metrics.str());
  write_rg2(join(out, "mu.rg2"), r.mu);
  write_rg2(join(out, "D.rg2"), r.D);
  write_rg2(join(out, "mu_step1.rg2"), r.mu_step1);
  write_rg2(join(out, "D_step0.rg2"), r.D_step0);
  const auto& u = r.iterates.empty() ? r.u_step0 : r.iterates.back().u;
  for (std::size_t i = 0; i < u.size(); ++i) write_rg2(join(out, "u" + std::to_string(i + 1) + ".rg2"), u[i]);
  std::cout << "mu error step1=" << format_double(r.mu_error_step1) << " final=" << format_double(r.mu_error)
            << "\nD error step0=" << format_double(r.D_error_step0) << " final=" << format_double(r.D_error) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Disjoint-sparsity signal separation and QPAT reconstruction", "dsep"};
  app.require_subcommand(1);

  auto* dict = app.add_subcommand("dict", "Dictionary utilities");
  dict->require_subcommand(1);
  auto* info = dict->add_subcommand("info", "Print kind, n, m and optionally the coherence against a second dictionary");
  DictSpec da, db;
  std::string versus;
  info->add_option("--kind", da.kind, "haar2d, sinusoid2d, identity or fourier1d")->capture_default_str();
  info->add_option("--J", da.J, "Haar levels; the 2D side is 2^J")->capture_default_str();
  info->add_option("--L", da.L, "Sinusoid frequency cutoff")->capture_default_str();
  info->add_option("--n", da.n, "Signal length for identity and fourier1d");
  info->add_flag("--no-constant", da.no_constant, "Drop the constant sinusoid atom");
  info->add_option("--versus", versus, "Second dictionary kind (same size parameters)");

  auto* sep = app.add_subcommand("separate", "Block OMP separation of N log-domain RG2 grids");
  SeparateArgs sa;
  sep->add_option("--in", sa.inputs, "Input RG2 files")->required();
  sep->add_option("--J", sa.J, "Haar levels (default from the input side)");
  sep->add_option("--L", sa.L, "Sinusoid frequency cutoff")->capture_default_str();
  sep->add_flag("--no-constant", sa.no_constant, "Drop the constant sinusoid atom");
  sep->add_option("--epsilon", sa.epsilon, "Per-measurement tolerance; stops at sqrt(N) epsilon");
  sep->add_option("--max-iterations", sa.max_iterations, "OMP iteration budget")->capture_default_str();
  sep->add_option("--out", sa.out, "Output directory")->capture_default_str();

  auto* diag = app.add_subcommand("diagnose", "CS1 check and CS2 probe report for separated components");
  DiagnoseArgs ga;
  diag->add_option("--f", ga.f, "RG2 of A_f y_f")->required();
  diag->add_option("--g", ga.g, "RG2 files of A_g y_g^i")->required();
  diag->add_option("--L", ga.L, "Sinusoid frequency cutoff")->capture_default_str();
  diag->add_flag("--no-constant", ga.no_constant, "Drop the constant sinusoid atom");
  diag->add_option("--probes", ga.probes, "Number of probe vectors")->capture_default_str();
  diag->add_option("--seed", ga.seed, "Probe seed")->capture_default_str();
  diag->add_option("--d-const", ga.d_const, "Domain constant D")->capture_default_str();
  diag->add_option("--beta", ga.beta, "CS1 separation beta")->capture_default_str();
  diag->add_option("--out", ga.out, "CSV report path")->capture_default_str();

  auto* sol = app.add_subcommand("solve", "Solve -div(D grad u) + mu u = 0 with a named boundary value");
  SolveArgs so;
  sol->add_option("--D", so.D, "RG2 diffusion coefficient")->required();
  sol->add_option("--mu", so.mu, "RG2 absorption")->required();
  sol->add_option("--family", so.family, "gamma1 or gammavar")->capture_default_str();
  sol->add_option("--index", so.index, "Boundary value index 1..5")->capture_default_str();
  sol->add_option("--tolerance", so.tolerance, "PCG relative tolerance")->capture_default_str();
  sol->add_option("--out", so.out, "Output RG2")->capture_default_str();

  auto* tvc = app.add_subcommand("tv", "Total-variation denoising of an RG2 grid");
  TvArgs ta;
  tvc->add_option("--in", ta.in, "Input RG2")->required();
  tvc->add_option("--out", ta.out, "Output RG2")->required();
  tvc->add_option("--weight", ta.cfg.weight, "Regularization weight")->capture_default_str();
  tvc->add_option("--iterations", ta.cfg.iterations, "Dual iterations")->capture_default_str();
  tvc->add_option("--step", ta.cfg.dual_step, "Dual step in (0, 0.25]")->capture_default_str();

  auto* g1 = app.add_subcommand("qpat-gamma1", "QPAT reconstruction with Gruneisen parameter 1");
  std::string g1_config, g1_out;
  g1->add_option("config", g1_config, "key=value config file")->required();
  g1->add_option("--out", g1_out, "Output directory (overrides the config)");

  auto* gv = app.add_subcommand("qpat-gammavar", "QPAT reconstruction with unknown Gruneisen parameter and diffusion");
  std::string gv_config, gv_out;
  gv->add_option("config", gv_config, "key=value config file")->required();
  gv->add_option("--out", gv_out, "Output directory (overrides the config)");

  auto* ph = app.add_subcommand("phantom", "Write a phantom grid");
  PhantomArgs pa;
  ph->add_option("--kind", pa.kind, "convex_inclusions, shepp_logan or smooth_bumps")->required();
  ph->add_option("--d", pa.d, "Grid side")->capture_default_str();
  ph->add_option("--out", pa.out, "Output RG2")->required();
  ph->add_option("--pgm", pa.pgm, "Also export a 16-bit PGM");

  auto* cv = app.add_subcommand("convert", "Convert between RG2, CSV (row,col,value) and PGM");
  ConvertArgs ca;
  cv->add_option("--in", ca.in, "Input .rg2 or .csv")->required();
  cv->add_option("--out", ca.out, "Output .rg2, .csv or .pgm")->required();
  cv->add_option("--side", ca.side, "Grid side for CSV input (default: sqrt of the row count)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*info) {
      std::optional<DictSpec> b;
      if (!versus.empty()) {
        db = da;
        db.kind = versus;
        b = db;
      }
      dict_info(da, b);
    } else if (*sep) {
      separate(sa);
    } else if (*diag) {
      diagnose(ga);
    } else if (*sol) {
      solve(so);
    } else if (*tvc) {
      ta.cfg.validate();
      write_rg2(ta.out, tv_denoise(read_rg2(ta.in), ta.cfg));
    } else if (*g1) {
      qpat_gamma1(g1_config, g1_out);
    } else if (*gv) {
      qpat_gammavar(gv_config, gv_out);
    } else if (*ph) {
      const Grid2 g = phantom(parse_phantom_kind(pa.kind), pa.d);
      write_rg2(pa.out, g);
      if (!pa.pgm.empty()) write_pgm(pa.pgm, g);
    } else if (*cv) {
      convert(ca);
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << " (pixel " << e.index() << ")\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "numerical failure: " << e.what() << " (residual " << e.final_residual() << ")\n";
    return 2;
  } catch (const ConditioningError& e) {
    std::cerr << "numerical failure: " << e.what() << " (" << e.worst_pixels().size() << " pixels)\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace dsep
