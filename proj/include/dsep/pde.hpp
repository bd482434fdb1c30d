#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dsep/grid.hpp"

namespace dsep {

// Dirichlet data on the 4(d-1) boundary pixels, in perimeter order: bottom row
// (row 0) left to right, right column upwards, top row right to left, left
// column downwards. Rows run along x2, columns along x1.
class BoundaryTrace {
 public:
  BoundaryTrace() = default;
  BoundaryTrace(std::size_t side, std::vector<double> values);

  // Samples f(x1, x2) at the boundary pixel coordinates.
  static BoundaryTrace sample(std::size_t side, const std::function<double(double, double)>& f);
  static BoundaryTrace constant(std::size_t side, double c);

  std::size_t side() const { return side_; }
  const std::vector<double>& values() const { return values_; }
  double min() const;
  double max() const;

 private:
  std::size_t side_ = 0;
  std::vector<double> values_;
};

// Flat pixel indices of the boundary in perimeter order.
std::vector<std::size_t> boundary_indices(std::size_t side);

// Restriction of a grid to its boundary.
BoundaryTrace trace_of(const Grid2& g);

struct DiffusionProblem {
  Grid2 D;
  Grid2 mu;
  BoundaryTrace phi;

  void validate() const;
};

struct SolverOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 0;  // 0: automatic cap from the grid size
};

// -div(D grad u) + mu u = 0 with u = phi on the boundary. Vertex-centred
// 5-point stencil on mesh 1/(d-1), harmonic-mean face diffusivities, Jacobi-
// preconditioned conjugate gradient on the interior unknowns.
Grid2 solve_diffusion(const DiffusionProblem& p, const SolverOptions& opts = {});

// Pointwise residual of the discrete operator: sum_faces D_f (u_P - u_N)/h^2 + mu u_P
// on interior pixels, zero on the boundary.
Grid2 apply_diffusion_operator(const Grid2& D, const Grid2& mu, const Grid2& u);

// Forward differences on every grid edge. x holds d rows of d-1 horizontal
// edges (along x1), y holds d-1 rows of d vertical edges (along x2).
struct EdgeField {
  std::size_t side = 0;
  std::vector<double> x;
  std::vector<double> y;
};

EdgeField gradient(const Grid2& u, double spacing);
// Exactly the negative transpose of gradient(., spacing).
Grid2 divergence(const EdgeField& p, double spacing);

// Separable Gaussian smoothing with mirrored borders; sigma in pixels.
Grid2 gaussian_smooth(const Grid2& g, double sigma);

struct Anchor {
  std::size_t row = 2;
  std::size_t col = 2;
  double value = 1.0;
};

struct LogDOptions {
  double determinant_threshold = 1e-8;
  double smoothing_sigma = 0.0;  // 0: no pre-smoothing
  SolverOptions solver{1e-10, 0};
};

// grad log D from three solutions sharing (D, mu), then least-squares
// integration shifted so that D(anchor) = anchor.value.
Grid2 recover_log_D(const Grid2& u1, const Grid2& u2, const Grid2& u3, const Anchor& anchor,
                    const LogDOptions& opts = {});

// The gradient field of log D on interior pixels (x1 and x2 components); the
// boundary ring is zero. Throws ConditioningError when the determinant test fails.
std::pair<Grid2, Grid2> log_D_gradient(const Grid2& u1, const Grid2& u2, const Grid2& u3,
                                       const LogDOptions& opts = {});

// Least-squares integration of a gradient field given on interior pixels.
Grid2 integrate_gradient(const Grid2& g1, const Grid2& g2, const SolverOptions& opts = {});

struct MuOptions {
  std::size_t boundary_band = 4;
  double smoothing_sigma = 0.0;
};

// (1/N) sum_i div(D grad u_i)/u_i with the discrete operator of solve_diffusion,
// on pixels farther than boundary_band from the boundary; mu_background elsewhere.
Grid2 recover_mu(const Grid2& D, const std::vector<Grid2>& u, const Grid2& mu_background,
                 const MuOptions& opts = {});

// max_{i,j} ||u_i/u0_i - u_j/u0_j||_2 / ||u_1/u0_1||_2.
double ratio_independence(const std::vector<Grid2>& u, const std::vector<Grid2>& u0);

}  // namespace dsep
