#include "dsep/tv.hpp"

#include <cmath>
#include <vector>

#include "dsep/error.hpp"

namespace dsep {

void TvConfig::validate() const {
  if (!(weight > 0.0)) throw ArgumentError("tv: weight must be positive");
  if (iterations < 1) throw ArgumentError("tv: iterations must be positive");
  if (!(dual_step > 0.0 && dual_step <= 0.25)) throw ArgumentError("tv: dual_step must lie in (0, 0.25]");
}

namespace {

void grad(const std::vector<double>& u, std::size_t d, std::vector<double>& gx, std::vector<double>& gy) {
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t i = r * d + c;
      gx[i] = c + 1 < d ? u[i + 1] - u[i] : 0.0;
      gy[i] = r + 1 < d ? u[i + d] - u[i] : 0.0;
    }
}

void div(const std::vector<double>& px, const std::vector<double>& py, std::size_t d, std::vector<double>& out) {
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t i = r * d + c;
      double s = 0.0;
      if (c + 1 < d) s += px[i];
      if (c > 0) s -= px[i - 1];
      if (r + 1 < d) s += py[i];
      if (r > 0) s -= py[i - d];
      out[i] = s;
    }
}

}  // namespace

Grid2 tv_denoise(const Grid2& g, const TvConfig& cfg) {
  cfg.validate();
  const std::size_t d = g.side();
  const std::size_t n = g.size();
  std::vector<double> px(n, 0.0), py(n, 0.0), dv(n, 0.0), t(n), gx(n), gy(n);
  const double inv = 1.0 / cfg.weight;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    div(px, py, d, dv);
    for (std::size_t i = 0; i < n; ++i) t[i] = dv[i] - g[i] * inv;
    grad(t, d, gx, gy);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = 1.0 + cfg.dual_step * std::hypot(gx[i], gy[i]);
      px[i] = (px[i] + cfg.dual_step * gx[i]) / m;
      py[i] = (py[i] + cfg.dual_step * gy[i]) / m;
    }
  }
  div(px, py, d, dv);
  Grid2 out(d);
  for (std::size_t i = 0; i < n; ++i) out[i] = g[i] - cfg.weight * dv[i];
  return out;
}

double total_variation(const Grid2& g) {
  const std::size_t d = g.side();
  std::vector<double> gx(g.size()), gy(g.size());
  grad(g.vector(), d, gx, gy);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += std::hypot(gx[i], gy[i]);
  return s;
}

}  // namespace dsep
