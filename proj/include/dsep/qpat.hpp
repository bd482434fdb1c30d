#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsep/dict.hpp"
#include "dsep/grid.hpp"
#include "dsep/omp.hpp"
#include "dsep/pde.hpp"
#include "dsep/tv.hpp"

namespace dsep {

enum class PhantomKind { convex_inclusions, shepp_logan, smooth_bumps };
PhantomKind parse_phantom_kind(const std::string& s);
std::string to_string(PhantomKind k);

// Filled ellipse with semi-axes (a1, a2) rotated by angle (radians) about (c1, c2).
struct Ellipse {
  double c1, c2;
  double a1, a2;
  double angle;
  double value;
};

struct Bump {
  double c1, c2;
  double sigma;
  double amplitude;
};

// Background plus constant inclusions; later inclusions overwrite earlier ones.
Grid2 convex_inclusions(std::size_t d, double background, const std::vector<Ellipse>& inclusions);
std::vector<Ellipse> default_inclusions();

// 1 plus the modified Shepp-Logan head phantom on [-1, 1]^2: values in [1, 2].
Grid2 shepp_logan(std::size_t d);

// background + sum_k amplitude_k exp(-|x - c_k|^2 / (2 sigma_k^2)).
Grid2 smooth_bumps(std::size_t d, double background, const std::vector<Bump>& bumps);
std::vector<Bump> default_diffusion_bumps();
std::vector<Bump> default_gruneisen_bumps();

// Default phantom of each kind (smooth_bumps uses the diffusion bumps).
Grid2 phantom(PhantomKind kind, std::size_t d);

enum class BoundaryFamily { gamma1, gammavar };
BoundaryFamily parse_boundary_family(const std::string& s);

// phi_i, i in 1..5, sampled on the boundary pixels.
BoundaryTrace boundary_family(BoundaryFamily family, std::size_t i, std::size_t d);

struct QpatProblem {
  Grid2 gamma;
  Grid2 mu_true;
  Grid2 D_true;
  std::vector<BoundaryTrace> phis;
  std::vector<Grid2> u_true;
  std::vector<Grid2> H;
  std::uint64_t noise_seed = 0;
  double noise_level = 0.0;
};

// Solves the forward problem for every phi and forms H_i = gamma mu u_i.
QpatProblem make_qpat_problem(Grid2 gamma, Grid2 mu, Grid2 D, std::vector<BoundaryTrace> phis, double noise_level,
                              std::uint64_t noise_seed);

// h_i = log H_i + n_i with ||n_i|| = noise_level ||log H_i|| exactly; eta = max ||n_i||.
MeasurementSet synthesize_data(const QpatProblem& p);

struct DictionaryParams {
  int J = 7;
  std::size_t L = 15;
  bool include_constant = true;
};

struct Gamma1Config {
  DictionaryParams dict;
  OmpConfig omp{1500, 0.0, 1e-10, kZeroThreshold, RefitMethod::cholesky};
  std::optional<TvConfig> tv;
  // Known boundary values of the u_i. When set, the constant shared by log mu
  // and the log u_i is fixed so that log u_i matches log phi_i on average over
  // the boundary pixels.
  std::vector<BoundaryTrace> illumination;
};

struct Gamma1Result {
  Grid2 mu;
  std::vector<Grid2> u;
  OmpResult omp;
  double gauge_shift = 0.0;  // constant added to log mu by the illumination gauge
  std::optional<double> error;
};

// Block OMP on the h_i, mu = exp(A_f y_f), u_i = exp(A_g y_g^i). The residual
// target is sqrt(N) epsilon when the measurement set carries epsilon.
// Constants lie in the span of both dictionaries, so without illumination
// the split of the mean between mu and u_i is whatever OMP selected.
Gamma1Result reconstruct_gamma1(const MeasurementSet& ms, const Gamma1Config& cfg,
                                const std::optional<Grid2>& mu_true = std::nullopt);

struct GammaVarConfig {
  Grid2 mu0;
  double lambda1 = 1.0;
  double lambda2 = 10.0;
  std::size_t outer_iterations = 2;
  std::size_t step1_iterations = 2000;
  std::size_t step3_iterations = 2000;
  std::optional<Anchor> anchor;  // default: pixel (2, 2) with the true D there
  std::size_t boundary_band = 4;
  DictionaryParams dict;
  std::vector<std::size_t> separation{0, 1, 2};
  std::vector<std::size_t> diffusion{0, 3, 4};
  double mu_floor = 1e-3;
  std::optional<TvConfig> mu_tv;
  double smoothing_sigma = 0.0;
  double determinant_threshold = 1e-8;

  void validate(std::size_t measurement_count) const;
};

struct GammaVarIterate {
  Grid2 mu;
  Grid2 D;
  std::vector<Grid2> u;
  double ratio_independence = 0.0;  // of H_i / u_i^0 over all measurements
  double mu_error = 0.0;
  double D_error = 0.0;
  double omp_residual = 0.0;
};

struct GammaVarResult {
  Grid2 mu;
  Grid2 D;
  Grid2 mu_step1;
  Grid2 D_step0;
  std::vector<Grid2> u_step0;
  double mu_error_step1 = 0.0;
  double D_error_step0 = 0.0;
  double step1_residual = 0.0;
  std::vector<GammaVarIterate> iterates;
  double mu_error = 0.0;
  double D_error = 0.0;
};

// Separation, diffusion recovery, then outer_iterations rounds of the
// penalized separation / diffusion / absorption update. Errors: relative log
// error for mu, interior relative error (beyond boundary_band) for D.
GammaVarResult reconstruct_gammavar(const QpatProblem& p, const GammaVarConfig& cfg);

}  // namespace dsep
