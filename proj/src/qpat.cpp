#include "dsep/qpat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dsep/error.hpp"

namespace dsep {

PhantomKind parse_phantom_kind(const std::string& s) {
  if (s == "convex_inclusions") return PhantomKind::convex_inclusions;
  if (s == "shepp_logan") return PhantomKind::shepp_logan;
  if (s == "smooth_bumps") return PhantomKind::smooth_bumps;
  throw ArgumentError("unknown phantom kind '" + s + "' (expected convex_inclusions, shepp_logan or smooth_bumps)");
}

std::string to_string(PhantomKind k) {
  switch (k) {
    case PhantomKind::convex_inclusions: return "convex_inclusions";
    case PhantomKind::shepp_logan: return "shepp_logan";
    case PhantomKind::smooth_bumps: return "smooth_bumps";
  }
  return "?";
}

namespace {

bool inside(const Ellipse& e, double x1, double x2) {
  const double c = std::cos(e.angle), s = std::sin(e.angle);
  const double dx = x1 - e.c1, dy = x2 - e.c2;
  const double u = c * dx + s * dy, v = -s * dx + c * dy;
  return (u * u) / (e.a1 * e.a1) + (v * v) / (e.a2 * e.a2) <= 1.0;
}

void require_side(std::size_t d) {
  if (d < 3) throw ArgumentError("phantom: side must be >= 3");
}

}  // namespace

Grid2 convex_inclusions(std::size_t d, double background, const std::vector<Ellipse>& inclusions) {
  require_side(d);
  if (!(background > 0.0)) throw ArgumentError("convex_inclusions: background must be positive");
  Grid2 g(d, background);
  for (const auto& e : inclusions) {
    if (!(e.value > 0.0) || !(e.a1 > 0.0) || !(e.a2 > 0.0))
      throw ArgumentError("convex_inclusions: inclusion values and axes must be positive");
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (inside(e, g.coord(c), g.coord(r))) g(r, c) = e.value;
  }
  return g;
}

std::vector<Ellipse> default_inclusions() {
  return {
      {0.22, 0.25, 0.12, 0.12, 0.0, 2.0},
      {0.50, 0.27, 0.10, 0.16, 0.3, 1.5},
      {0.80, 0.25, 0.10, 0.10, 0.0, 1.8},
  };
}

Grid2 shepp_logan(std::size_t d) {
  require_side(d);
  struct E {
    double A, a, b, x0, y0, deg;
  };
  static const E table[] = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},       {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},   {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},      {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},  {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
  Grid2 g(d, 0.0);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double X = 2.0 * g.coord(c) - 1.0, Y = 2.0 * g.coord(r) - 1.0;
      double v = 0.0;
      for (const auto& e : table) {
        const Ellipse el{e.x0, e.y0, e.a, e.b, e.deg * std::numbers::pi / 180.0, 1.0};
        if (inside(el, X, Y)) v += e.A;
      }
      g(r, c) = 1.0 + std::clamp(v, 0.0, 1.0);
    }
  return g;
}

Grid2 smooth_bumps(std::size_t d, double background, const std::vector<Bump>& bumps) {
  require_side(d);
  if (!(background > 0.0)) throw ArgumentError("smooth_bumps: background must be positive");
  Grid2 g(d, background);
  for (const auto& b : bumps) {
    if (!(b.sigma > 0.0)) throw ArgumentError("smooth_bumps: sigma must be positive");
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const double dx = g.coord(c) - b.c1, dy = g.coord(r) - b.c2;
        g(r, c) += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
      }
  }
  return g;
}

std::vector<Bump> default_diffusion_bumps() { return {{0.55, 0.50, 0.15, 0.5}}; }

std::vector<Bump> default_gruneisen_bumps() { return {{0.35, 0.60, 0.05, 0.4}, {0.70, 0.30, 0.04, 0.3}}; }

Grid2 phantom(PhantomKind kind, std::size_t d) {
  switch (kind) {
    case PhantomKind::convex_inclusions: return convex_inclusions(d, 1.0, default_inclusions());
    case PhantomKind::shepp_logan: return shepp_logan(d);
    case PhantomKind::smooth_bumps: return smooth_bumps(d, 1.0, default_diffusion_bumps());
  }
  throw ArgumentError("phantom: unknown kind");
}

BoundaryFamily parse_boundary_family(const std::string& s) {
  if (s == "gamma1") return BoundaryFamily::gamma1;
  if (s == "gammavar") return BoundaryFamily::gammavar;
  throw ArgumentError("unknown boundary family '" + s + "' (expected gamma1 or gammavar)");
}

BoundaryTrace boundary_family(BoundaryFamily family, std::size_t i, std::size_t d) {
  if (i < 1 || i > 5) throw ArgumentError("boundary_family: index must lie in 1..5");
  const double tp = 2.0 * std::numbers::pi;
  if (family == BoundaryFamily::gamma1) {
    switch (i) {
      case 1: return BoundaryTrace::constant(d, 1.0);
      case 2: return BoundaryTrace::sample(d, [tp](double x1, double) { return 1.0 - std::sin(tp * x1) / 4.0; });
      case 3: return BoundaryTrace::sample(d, [tp](double, double x2) { return 1.0 - std::sin(tp * x2) / 4.0; });
      case 4: return BoundaryTrace::sample(d, [tp](double, double x2) { return 1.0 - std::cos(tp * x2) / 4.0; });
      default: return BoundaryTrace::sample(d, [tp](double x1, double) { return 1.0 - std::cos(tp * x1) / 4.0; });
    }
  }
  switch (i) {
    case 1: return BoundaryTrace::constant(d, 1.0);
    case 2: return BoundaryTrace::sample(d, [tp](double x1, double) { return 1.0 - std::sin(tp * x1) / 8.0; });
    case 3: return BoundaryTrace::sample(d, [tp](double, double x2) { return 1.0 - std::sin(tp * x2) / 8.0; });
    case 4: return BoundaryTrace::sample(d, [](double x1, double) { return x1 / 4.0 + 7.0 / 8.0; });
    default: return BoundaryTrace::sample(d, [](double, double x2) { return x2 / 4.0 + 7.0 / 8.0; });
  }
}

QpatProblem make_qpat_problem(Grid2 gamma, Grid2 mu, Grid2 D, std::vector<BoundaryTrace> phis, double noise_level,
                              std::uint64_t noise_seed) {
  const std::size_t d = mu.side();
  if (gamma.side() != d || D.side() != d) throw ArgumentError("qpat problem: field sizes differ");
  if (phis.empty()) throw ArgumentError("qpat problem: no boundary values");
  if (!(noise_level >= 0.0)) throw ArgumentError("qpat problem: noise level must be nonnegative");
  for (std::size_t i = 0; i < d * d; ++i) {
    if (!(gamma[i] > 0.0)) throw DomainError("qpat problem: gamma must be positive", i);
    if (!(mu[i] > 0.0)) throw DomainError("qpat problem: mu must be positive", i);
  }
  QpatProblem p;
  p.gamma = std::move(gamma);
  p.mu_true = std::move(mu);
  p.D_true = std::move(D);
  p.phis = std::move(phis);
  p.noise_level = noise_level;
  p.noise_seed = noise_seed;
  for (const auto& phi : p.phis) {
    auto u = solve_diffusion({p.D_true, p.mu_true, phi});
    Grid2 H(d);
    for (std::size_t t = 0; t < d * d; ++t) H[t] = p.gamma[t] * p.mu_true[t] * u[t];
    p.u_true.push_back(std::move(u));
    p.H.push_back(std::move(H));
  }
  return p;
}

MeasurementSet synthesize_data(const QpatProblem& p) {
  MeasurementSet ms;
  double eta = 0.0;
  for (std::size_t i = 0; i < p.H.size(); ++i) {
    Grid2 h = to_log(p.H[i]);
    if (p.noise_level > 0.0) {
      std::seed_seq seq{static_cast<std::uint32_t>(p.noise_seed), static_cast<std::uint32_t>(p.noise_seed >> 32),
                        static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> nd;
      std::vector<double> n(h.size());
      for (auto& x : n) x = nd(rng);
      const double scale = p.noise_level * norm2(h.values()) / norm2(n);
      for (std::size_t t = 0; t < h.size(); ++t) {
        n[t] *= scale;
        h[t] += n[t];
      }
      eta = std::max(eta, norm2(n));
    }
    ms.h.push_back(std::move(h));
  }
  ms.eta = eta;
  return ms;
}

namespace {

void check_side(std::size_t side, const DictionaryParams& dp) {
  if (dp.J < 2 || side != (std::size_t{1} << dp.J)) {
    std::ostringstream os;
    os << "grid side " << side << " does not match 2^J with J = " << dp.J;
    throw ArgumentError(os.str());
  }
}

Grid2 exp_of(const std::vector<double>& v, std::size_t d) {
  Grid2 g(d);
  for (std::size_t t = 0; t < v.size(); ++t) g[t] = std::exp(v[t]);
  return g;
}

}  // namespace

Gamma1Result reconstruct_gamma1(const MeasurementSet& ms, const Gamma1Config& cfg, const std::optional<Grid2>& mu_true) {
  ms.validate();
  if (ms.count() == 0) throw ArgumentError("reconstruct_gamma1: no measurements");
  const std::size_t d = ms.side();
  check_side(d, cfg.dict);
  const auto Af = Dictionary::haar2d(cfg.dict.J);
  const auto Ag = Dictionary::sinusoid2d(d, cfg.dict.L, cfg.dict.include_constant);
  std::vector<std::vector<double>> h;
  for (const auto& hi : ms.h) h.push_back(cfg.tv ? tv_denoise(hi, *cfg.tv).vector() : hi.vector());
  OmpConfig oc = cfg.omp;
  if (const auto eps = ms.epsilon()) oc.residual_target = std::sqrt(static_cast<double>(ms.count())) * *eps;
  StackedSystem sys(Af, Ag, std::move(h));
  Gamma1Result res;
  res.omp = omp_block(sys, oc);
  auto logmu = Af.synthesize(res.omp.coeffs.y_f());
  std::vector<std::vector<double>> logu;
  for (const auto& yg : res.omp.coeffs.y_g()) logu.push_back(Ag.synthesize(yg));
  if (!cfg.illumination.empty()) {
    if (cfg.illumination.size() != ms.count()) throw ArgumentError("reconstruct_gamma1: one illumination trace per measurement");
    const auto idx = boundary_indices(d);
    double sum = 0.0;
    for (std::size_t i = 0; i < ms.count(); ++i) {
      const auto& phi = cfg.illumination[i];
      if (phi.side() != d) throw ArgumentError("reconstruct_gamma1: illumination size mismatch");
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (!(phi.values()[k] > 0.0)) throw DomainError("reconstruct_gamma1: illumination must be positive", k);
        sum += std::log(phi.values()[k]) - logu[i][idx[k]];
      }
    }
    const double c = sum / static_cast<double>(idx.size() * ms.count());
    for (auto& v : logmu) v -= c;
    for (auto& lu : logu)
      for (auto& v : lu) v += c;
    res.gauge_shift = -c;
  }
  res.mu = exp_of(logmu, d);
  for (const auto& lu : logu) res.u.push_back(exp_of(lu, d));
  if (mu_true) res.error = relative_log_error(res.mu, *mu_true);
  return res;
}

void GammaVarConfig::validate(std::size_t measurement_count) const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ArgumentError("gammavar: lambdas must be positive");
  if (!(lambda1 < lambda2)) throw ArgumentError("gammavar: lambda1 must be smaller than lambda2");
  if (step1_iterations < 1 || step3_iterations < 1) throw ArgumentError("gammavar: OMP budgets must be positive");
  if (diffusion.size() != 3) throw ArgumentError("gammavar: diffusion recovery needs exactly three measurements");
  if (separation.empty()) throw ArgumentError("gammavar: empty separation set");
  for (auto i : separation)
    if (i >= measurement_count) throw ArgumentError("gammavar: separation index out of range");
  for (auto i : diffusion)
    if (i >= measurement_count) throw ArgumentError("gammavar: diffusion index out of range");
  if (!(mu_floor > 0.0)) throw ArgumentError("gammavar: mu_floor must be positive");
}

GammaVarResult reconstruct_gammavar(const QpatProblem& p, const GammaVarConfig& cfg) {
  const std::size_t M = p.H.size();
  cfg.validate(M);
  const std::size_t d = p.mu_true.side();
  check_side(d, cfg.dict);
  if (cfg.mu0.side() != d) throw ArgumentError("gammavar: mu0 size mismatch");
  const auto Af = Dictionary::haar2d(cfg.dict.J);
  const auto Ag = Dictionary::sinusoid2d(d, cfg.dict.L, cfg.dict.include_constant);
  const Anchor anchor = cfg.anchor ? *cfg.anchor : Anchor{2, 2, p.D_true(2, 2)};
  LogDOptions lo;
  lo.determinant_threshold = cfg.determinant_threshold;
  lo.smoothing_sigma = cfg.smoothing_sigma;
  MuOptions mo{cfg.boundary_band, cfg.smoothing_sigma};

  const MeasurementSet ms = synthesize_data(p);
  std::vector<std::vector<double>> hsep;
  for (auto i : cfg.separation) hsep.push_back(ms.h[i].vector());

  auto D_error = [&](const Grid2& D) { return relative_interior_error(D, p.D_true, cfg.boundary_band); };
  auto mu_update = [&](const Grid2& D, const std::vector<Grid2>& u) {
    Grid2 mu = recover_mu(D, u, cfg.mu0, mo);
    for (std::size_t t = 0; t < mu.size(); ++t) mu[t] = std::max(mu[t], cfg.mu_floor);
    if (cfg.mu_tv) {
      mu = tv_denoise(mu, *cfg.mu_tv);
      for (std::size_t t = 0; t < mu.size(); ++t) mu[t] = std::max(mu[t], cfg.mu_floor);
    }
    return mu;
  };

  // Step 1: separation on the separation set.
  GammaVarResult res;
  OmpConfig oc1;
  oc1.max_iterations = cfg.step1_iterations;
  const StackedSystem sys1(Af, Ag, hsep);
  const OmpResult r1 = omp_block(sys1, oc1);
  res.step1_residual = r1.final_residual;
  const auto F = Af.synthesize(r1.coeffs.y_f());
  std::vector<Grid2> u(M);
  for (std::size_t k = 0; k < cfg.separation.size(); ++k)
    u[cfg.separation[k]] = exp_of(Ag.synthesize(r1.coeffs.y_g()[k]), d);
  for (std::size_t i = 0; i < M; ++i) {
    if (u[i].side() == d) continue;
    // Data ratios are exact: u_i = u_s * H_i / H_s for the first separation index s.
    const std::size_t s = cfg.separation.front();
    u[i] = Grid2(d);
    for (std::size_t t = 0; t < d * d; ++t) u[i][t] = u[s][t] * std::exp(ms.h[i][t] - ms.h[s][t]);
  }
  res.u_step0 = u;

  // Step 2: diffusion from the determinant triple.
  Grid2 D = recover_log_D(u[cfg.diffusion[0]], u[cfg.diffusion[1]], u[cfg.diffusion[2]], anchor, lo);
  res.D_step0 = D;
  res.D_error_step0 = D_error(D);
  res.mu_step1 = mu_update(D, u);
  res.mu_error_step1 = relative_log_error(res.mu_step1, p.mu_true);

  // Step 3.
  Grid2 mu = cfg.mu0;
  for (auto& v : mu.values()) v = std::max(v, cfg.mu_floor);
  for (std::size_t k = 0; k < cfg.outer_iterations; ++k) {
    std::vector<Grid2> u0(M);
    for (std::size_t i = 0; i < M; ++i) u0[i] = solve_diffusion({D, mu, p.phis[i]});
    GammaVarIterate it;
    it.ratio_independence = ratio_independence(p.H, u0);
    PenaltyTerms pt;
    pt.lambda1 = cfg.lambda1;
    pt.lambda2 = cfg.lambda2;
    for (auto i : cfg.separation) {
      std::vector<double> h0(d * d);
      for (std::size_t t = 0; t < h0.size(); ++t) h0[t] = ms.h[i][t] - std::log(u0[i][t]);
      pt.h0.push_back(std::move(h0));
    }
    OmpConfig oc3;
    oc3.max_iterations = cfg.step3_iterations;
    const OmpResult r3 = omp_block_penalized(sys1, oc3, pt);
    it.omp_residual = r3.final_residual;
    const auto common = Ag.synthesize(r3.coeffs.y_g().back());
    for (std::size_t i = 0; i < M; ++i)
      for (std::size_t t = 0; t < d * d; ++t) u[i][t] = u0[i][t] * std::exp(common[t]);
    D = recover_log_D(u[cfg.diffusion[0]], u[cfg.diffusion[1]], u[cfg.diffusion[2]], anchor, lo);
    mu = mu_update(D, u);
    it.mu = mu;
    it.D = D;
    it.u = u;
    it.mu_error = relative_log_error(mu, p.mu_true);
    it.D_error = D_error(D);
    res.iterates.push_back(std::move(it));
  }
  if (cfg.outer_iterations == 0) {
    res.mu = res.mu_step1;
    res.D = res.D_step0;
    res.mu_error = res.mu_error_step1;
    res.D_error = res.D_error_step0;
  } else {
    res.mu = res.iterates.back().mu;
    res.D = res.iterates.back().D;
    res.mu_error = res.iterates.back().mu_error;
    res.D_error = res.iterates.back().D_error;
  }
  return res;
}

}  // namespace dsep
