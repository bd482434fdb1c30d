#include "dsep/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dsep/error.hpp"

namespace dsep {

BoundaryTrace::BoundaryTrace(std::size_t side, std::vector<double> values)
    : side_(side), values_(std::move(values)) {
  if (side < 3) throw ArgumentError("boundary trace: side must be >= 3");
  if (values_.size() != 4 * (side - 1)) {
    std::ostringstream os;
    os << "boundary trace of side " << side << " needs " << 4 * (side - 1) << " values, got " << values_.size();
    throw ArgumentError(os.str());
  }
}

std::vector<std::size_t> boundary_indices(std::size_t d) {
  if (d < 3) throw ArgumentError("boundary_indices: side must be >= 3");
  std::vector<std::size_t> idx;
  idx.reserve(4 * (d - 1));
  for (std::size_t c = 0; c < d; ++c) idx.push_back(c);
  for (std::size_t r = 1; r < d; ++r) idx.push_back(r * d + (d - 1));
  for (std::size_t c = d - 1; c-- > 0;) idx.push_back((d - 1) * d + c);
  for (std::size_t r = d - 1; r-- > 1;) idx.push_back(r * d);
  return idx;
}

BoundaryTrace BoundaryTrace::sample(std::size_t side, const std::function<double(double, double)>& f) {
  const double h = 1.0 / static_cast<double>(side - 1);
  std::vector<double> v;
  for (auto i : boundary_indices(side)) {
    const double x1 = static_cast<double>(i % side) * h;
    const double x2 = static_cast<double>(i / side) * h;
    v.push_back(f(x1, x2));
  }
  return BoundaryTrace(side, std::move(v));
}

BoundaryTrace BoundaryTrace::constant(std::size_t side, double c) {
  return BoundaryTrace(side, std::vector<double>(4 * (side - 1), c));
}

double BoundaryTrace::min() const { return *std::min_element(values_.begin(), values_.end()); }
double BoundaryTrace::max() const { return *std::max_element(values_.begin(), values_.end()); }

BoundaryTrace trace_of(const Grid2& g) {
  std::vector<double> v;
  for (auto i : boundary_indices(g.side())) v.push_back(g[i]);
  return BoundaryTrace(g.side(), std::move(v));
}

void DiffusionProblem::validate() const {
  const std::size_t d = D.side();
  if (d < 3) throw ArgumentError("diffusion problem: side must be >= 3");
  if (mu.side() != d || phi.side() != d) throw ArgumentError("diffusion problem: D, mu and phi disagree in size");
  for (std::size_t i = 0; i < D.size(); ++i) {
    if (!(D[i] > 0.0)) throw DomainError("diffusion problem: D must be strictly positive", i);
    if (!(mu[i] >= 0.0)) throw DomainError("diffusion problem: mu must be nonnegative", i);
  }
}

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

bool interior(std::size_t r, std::size_t c, std::size_t d) { return r > 0 && c > 0 && r + 1 < d && c + 1 < d; }

// Preconditioned CG on a masked full-grid vector. diag must be positive where
// the operator acts.
template <class Apply>
std::size_t pcg(const Apply& apply, const std::vector<double>& diag, const std::vector<double>& b,
                std::vector<double>& x, double tol, std::size_t maxit, const char* what) {
  const std::size_t n = b.size();
  const double bn = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (bn == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0;
  }
  std::vector<double> r(n), z(n), p(n), Ap(n);
  apply(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
  double rn = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
  std::size_t it = 0;
  while (rn > tol * bn) {
    if (it >= maxit) {
      std::ostringstream os;
      os << what << ": conjugate gradient did not converge in " << maxit << " iterations (relative residual "
         << rn / bn << ")";
      throw SolverError(os.str(), rn / bn);
    }
    apply(p, Ap);
    const double pAp = std::inner_product(p.begin(), p.end(), Ap.begin(), 0.0);
    if (!(pAp > 0.0)) throw SolverError(std::string(what) + ": operator is not positive definite", rn / bn);
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz2 = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz2 / rz;
    rz = rz2;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rn = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
    ++it;
  }
  return it;
}

struct Faces {
  std::vector<double> x;  // (r, c) -- (r, c+1), d rows of d-1
  std::vector<double> y;  // (r, c) -- (r+1, c), d-1 rows of d
};

Faces harmonic_faces(const Grid2& D) {
  const std::size_t d = D.side();
  Faces f;
  f.x.resize(d * (d - 1));
  f.y.resize((d - 1) * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c + 1 < d; ++c) f.x[r * (d - 1) + c] = harmonic(D(r, c), D(r, c + 1));
  for (std::size_t r = 0; r + 1 < d; ++r)
    for (std::size_t c = 0; c < d; ++c) f.y[r * d + c] = harmonic(D(r, c), D(r + 1, c));
  return f;
}

// sum over the four faces of a_f (u_P - u_N), interior pixels only.
void stencil(const Faces& f, std::size_t d, const double* u, double* out) {
  for (std::size_t r = 1; r + 1 < d; ++r) {
    for (std::size_t c = 1; c + 1 < d; ++c) {
      const std::size_t i = r * d + c;
      const double aw = f.x[r * (d - 1) + c - 1], ae = f.x[r * (d - 1) + c];
      const double as = f.y[(r - 1) * d + c], an = f.y[r * d + c];
      out[i] = aw * (u[i] - u[i - 1]) + ae * (u[i] - u[i + 1]) + as * (u[i] - u[i - d]) + an * (u[i] - u[i + d]);
    }
  }
}

std::size_t auto_cap(std::size_t d, std::size_t requested) {
  return requested ? requested : std::max<std::size_t>(1000, 20 * d * d);
}

}  // namespace

Grid2 solve_diffusion(const DiffusionProblem& p, const SolverOptions& opts) {
  p.validate();
  const std::size_t d = p.D.side();
  const double h = p.D.mesh();
  const double h2 = h * h;
  const Faces f = harmonic_faces(p.D);
  const auto bidx = boundary_indices(d);

  // Boundary lift g: phi on the boundary, zero inside. Solve A x = -A g on the interior.
  std::vector<double> g(d * d, 0.0);
  for (std::size_t k = 0; k < bidx.size(); ++k) g[bidx[k]] = p.phi.values()[k];
  std::vector<double> Ag(d * d, 0.0);
  stencil(f, d, g.data(), Ag.data());

  std::vector<double> diag(d * d, 1.0), b(d * d, 0.0);
  for (std::size_t r = 1; r + 1 < d; ++r)
    for (std::size_t c = 1; c + 1 < d; ++c) {
      const std::size_t i = r * d + c;
      diag[i] = f.x[r * (d - 1) + c - 1] + f.x[r * (d - 1) + c] + f.y[(r - 1) * d + c] + f.y[r * d + c] +
                h2 * p.mu[i];
      b[i] = -Ag[i];
    }
  const auto& mu = p.mu;
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    stencil(f, d, x.data(), y.data());
    for (std::size_t r = 1; r + 1 < d; ++r)
      for (std::size_t c = 1; c + 1 < d; ++c) {
        const std::size_t i = r * d + c;
        y[i] += h2 * mu[i] * x[i];
      }
  };
  std::vector<double> x(d * d, 0.0);
  pcg(apply, diag, b, x, opts.tolerance, auto_cap(d, opts.max_iterations), "solve_diffusion");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += g[i];
  return Grid2(d, std::move(x));
}

Grid2 apply_diffusion_operator(const Grid2& D, const Grid2& mu, const Grid2& u) {
  const std::size_t d = D.side();
  if (mu.side() != d || u.side() != d) throw ArgumentError("apply_diffusion_operator: size mismatch");
  const double h = D.mesh();
  const Faces f = harmonic_faces(D);
  std::vector<double> out(d * d, 0.0);
  stencil(f, d, u.values().data(), out.data());
  for (std::size_t r = 1; r + 1 < d; ++r)
    for (std::size_t c = 1; c + 1 < d; ++c) {
      const std::size_t i = r * d + c;
      out[i] = out[i] / (h * h) + mu[i] * u[i];
    }
  return Grid2(d, std::move(out));
}

EdgeField gradient(const Grid2& u, double spacing) {
  const std::size_t d = u.side();
  EdgeField e;
  e.side = d;
  e.x.resize(d * (d - 1));
  e.y.resize((d - 1) * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c + 1 < d; ++c) e.x[r * (d - 1) + c] = (u(r, c + 1) - u(r, c)) / spacing;
  for (std::size_t r = 0; r + 1 < d; ++r)
    for (std::size_t c = 0; c < d; ++c) e.y[r * d + c] = (u(r + 1, c) - u(r, c)) / spacing;
  return e;
}

Grid2 divergence(const EdgeField& p, double spacing) {
  const std::size_t d = p.side;
  if (p.x.size() != d * (d - 1) || p.y.size() != (d - 1) * d) throw ArgumentError("divergence: malformed edge field");
  Grid2 out(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      double s = 0.0;
      if (c + 1 < d) s += p.x[r * (d - 1) + c];
      if (c > 0) s -= p.x[r * (d - 1) + c - 1];
      if (r + 1 < d) s += p.y[r * d + c];
      if (r > 0) s -= p.y[(r - 1) * d + c];
      out(r, c) = s / spacing;
    }
  return out;
}

Grid2 gaussian_smooth(const Grid2& g, double sigma) {
  if (sigma <= 0.0) return g;
  const std::size_t d = g.side();
  const long R = static_cast<long>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * R + 1);
  double s = 0.0;
  for (long i = -R; i <= R; ++i) s += k[i + R] = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
  for (auto& v : k) v /= s;
  const long D = static_cast<long>(d);
  auto mirror = [D](long i) {
    if (D == 1) return 0L;
    const long period = 2 * (D - 1);
    i %= period;
    if (i < 0) i += period;
    return i < D ? i : period - i;
  };
  Grid2 tmp(d), out(d);
  for (long r = 0; r < D; ++r)
    for (long c = 0; c < D; ++c) {
      double a = 0.0;
      for (long t = -R; t <= R; ++t) a += k[t + R] * g(r, mirror(c + t));
      tmp(r, c) = a;
    }
  for (long r = 0; r < D; ++r)
    for (long c = 0; c < D; ++c) {
      double a = 0.0;
      for (long t = -R; t <= R; ++t) a += k[t + R] * tmp(mirror(r + t), c);
      out(r, c) = a;
    }
  return out;
}

namespace {

void require_positive(const Grid2& g, const char* what) {
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(g[i] > 0.0)) {
      std::ostringstream os;
      os << what << ": non-positive value " << g[i] << " at pixel (row " << i / g.side() << ", col "
         << i % g.side() << ")";
      throw DomainError(os.str(), i);
    }
}

}  // namespace

std::pair<Grid2, Grid2> log_D_gradient(const Grid2& u1_in, const Grid2& u2_in, const Grid2& u3_in,
                                       const LogDOptions& opts) {
  const std::size_t d = u1_in.side();
  if (d < 3 || u2_in.side() != d || u3_in.side() != d) throw ArgumentError("recover_log_D: size mismatch");
  require_positive(u1_in, "recover_log_D");
  const Grid2 u1 = gaussian_smooth(u1_in, opts.smoothing_sigma);
  const Grid2 u2 = gaussian_smooth(u2_in, opts.smoothing_sigma);
  const Grid2 u3 = gaussian_smooth(u3_in, opts.smoothing_sigma);
  const double h = u1.mesh();
  Grid2 v2(d), v3(d), w(d);
  for (std::size_t i = 0; i < u1.size(); ++i) {
    v2[i] = u2[i] / u1[i];
    v3[i] = u3[i] / u1[i];
    w[i] = u1[i] * u1[i];
  }
  // -div(u1^2 grad v)/u1^2 with arithmetic face averages of u1^2.
  auto rhs = [&](const Grid2& v, std::size_t r, std::size_t c) {
    const std::size_t i = r * d + c;
    const double fw = 0.5 * (w[i] + w[i - 1]), fe = 0.5 * (w[i] + w[i + 1]);
    const double fs = 0.5 * (w[i] + w[i - d]), fn = 0.5 * (w[i] + w[i + d]);
    const double div = (fe * (v[i + 1] - v[i]) - fw * (v[i] - v[i - 1]) + fn * (v[i + d] - v[i]) -
                        fs * (v[i] - v[i - d])) /
                       (h * h);
    return -div / w[i];
  };
  Grid2 g1(d), g2(d);
  std::vector<std::pair<double, std::size_t>> bad;
  for (std::size_t r = 1; r + 1 < d; ++r)
    for (std::size_t c = 1; c + 1 < d; ++c) {
      const std::size_t i = r * d + c;
      const double a11 = (v2[i + 1] - v2[i - 1]) / (2 * h), a12 = (v2[i + d] - v2[i - d]) / (2 * h);
      const double a21 = (v3[i + 1] - v3[i - 1]) / (2 * h), a22 = (v3[i + d] - v3[i - d]) / (2 * h);
      const double det = a11 * a22 - a12 * a21;
      if (!(std::abs(det) > opts.determinant_threshold)) {
        bad.push_back({std::abs(det), i});
        continue;
      }
      const double b1 = rhs(v2, r, c), b2 = rhs(v3, r, c);
      g1[i] = (a22 * b1 - a12 * b2) / det;
      g2[i] = (-a21 * b1 + a11 * b2) / det;
    }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    std::vector<std::size_t> px;
    for (std::size_t k = 0; k < std::min<std::size_t>(10, bad.size()); ++k) px.push_back(bad[k].second);
    std::ostringstream os;
    os << "recover_log_D: gradient determinant below " << opts.determinant_threshold << " at " << bad.size()
       << " interior pixels; worst at (row " << px[0] / d << ", col " << px[0] % d << ") with |det| = "
       << bad[0].first;
    throw ConditioningError(os.str(), std::move(px));
  }
  return {std::move(g1), std::move(g2)};
}

Grid2 integrate_gradient(const Grid2& g1, const Grid2& g2, const SolverOptions& opts) {
  const std::size_t d = g1.side();
  if (d < 3 || g2.side() != d) throw ArgumentError("integrate_gradient: size mismatch");
  const double h = g1.mesh();
  // Edges with at least one interior endpoint; edge value from interior endpoints.
  struct Edge {
    std::size_t p, q;
    double e;
  };
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c + 1 < d; ++c) {
      const bool ip = interior(r, c, d), iq = interior(r, c + 1, d);
      if (!ip && !iq) continue;
      const std::size_t p = r * d + c, q = p + 1;
      const double gv = (ip && iq) ? 0.5 * (g1[p] + g1[q]) : (ip ? g1[p] : g1[q]);
      edges.push_back({p, q, h * gv});
    }
  for (std::size_t r = 0; r + 1 < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const bool ip = interior(r, c, d), iq = interior(r + 1, c, d);
      if (!ip && !iq) continue;
      const std::size_t p = r * d + c, q = p + d;
      const double gv = (ip && iq) ? 0.5 * (g2[p] + g2[q]) : (ip ? g2[p] : g2[q]);
      edges.push_back({p, q, h * gv});
    }
  std::vector<double> deg(d * d, 0.0), b(d * d, 0.0);
  for (const auto& e : edges) {
    deg[e.p] += 1.0;
    deg[e.q] += 1.0;
    b[e.q] += e.e;
    b[e.p] -= e.e;
  }
  for (auto& v : deg)
    if (v == 0.0) v = 1.0;
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (const auto& e : edges) {
      const double t = x[e.p] - x[e.q];
      y[e.p] += t;
      y[e.q] -= t;
    }
  };
  std::vector<double> x(d * d, 0.0);
  pcg(apply, deg, b, x, opts.tolerance, auto_cap(d, opts.max_iterations), "integrate_gradient");
  Grid2 w(d, std::move(x));
  for (std::size_t r : {std::size_t{0}, d - 1})
    for (std::size_t c : {std::size_t{0}, d - 1}) {
      const std::size_t rn = r == 0 ? 1 : d - 2, cn = c == 0 ? 1 : d - 2;
      w(r, c) = 0.5 * (w(rn, c) + w(r, cn));
    }
  return w;
}

Grid2 recover_log_D(const Grid2& u1, const Grid2& u2, const Grid2& u3, const Anchor& anchor,
                    const LogDOptions& opts) {
  const std::size_t d = u1.side();
  if (anchor.row >= d || anchor.col >= d) throw ArgumentError("recover_log_D: anchor outside the grid");
  if (!(anchor.value > 0.0)) throw ArgumentError("recover_log_D: anchor value must be positive");
  const auto [g1, g2] = log_D_gradient(u1, u2, u3, opts);
  Grid2 w = integrate_gradient(g1, g2, opts.solver);
  const double shift = std::log(anchor.value) - w(anchor.row, anchor.col);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(w[i] + shift);
  return w;
}

Grid2 recover_mu(const Grid2& D_in, const std::vector<Grid2>& u, const Grid2& mu_background,
                 const MuOptions& opts) {
  if (u.empty()) throw ArgumentError("recover_mu: no solutions given");
  const std::size_t d = D_in.side();
  if (mu_background.side() != d) throw ArgumentError("recover_mu: background size mismatch");
  for (const auto& ui : u) {
    if (ui.side() != d) throw ArgumentError("recover_mu: size mismatch");
    require_positive(ui, "recover_mu");
  }
  require_positive(D_in, "recover_mu");
  const Grid2 D = gaussian_smooth(D_in, opts.smoothing_sigma);
  const Grid2 zero(d, 0.0);
  Grid2 acc(d, 0.0);
  for (const auto& ui_in : u) {
    const Grid2 ui = gaussian_smooth(ui_in, opts.smoothing_sigma);
    const Grid2 Lu = apply_diffusion_operator(D, zero, ui);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= Lu[i] / ui[i];
  }
  Grid2 out = mu_background;
  const double inv = 1.0 / static_cast<double>(u.size());
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t dist = std::min({r, c, d - 1 - r, d - 1 - c});
      if (dist > opts.boundary_band) out(r, c) = acc(r, c) * inv;
    }
  return out;
}

double ratio_independence(const std::vector<Grid2>& u, const std::vector<Grid2>& u0) {
  if (u.size() != u0.size()) throw ArgumentError("ratio_independence: list lengths differ");
  if (u.size() < 2) return 0.0;
  std::vector<std::vector<double>> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].side() != u0[i].side()) throw ArgumentError("ratio_independence: size mismatch");
    require_positive(u0[i], "ratio_independence");
    v[i].resize(u[i].size());
    for (std::size_t t = 0; t < u[i].size(); ++t) v[i][t] = u[i][t] / u0[i][t];
  }
  const double ref = norm2(v[0]);
  if (ref == 0.0) throw ArgumentError("ratio_independence: first ratio is zero");
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < v[i].size(); ++t) s += (v[i][t] - v[j][t]) * (v[i][t] - v[j][t]);
      best = std::max(best, std::sqrt(s));
    }
  return best / ref;
}

}  // namespace dsep
