#include "dsep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsep/error.hpp"

namespace dsep {

Grid2::Grid2(std::size_t side, double fill) : side_(side), values_(side * side, fill) {
  if (side == 0) throw ArgumentError("Grid2 side must be positive");
}

Grid2::Grid2(std::size_t side, std::vector<double> values) : side_(side), values_(std::move(values)) {
  if (side == 0) throw ArgumentError("Grid2 side must be positive");
  if (values_.size() != side * side) {
    std::ostringstream os;
    os << "Grid2 of side " << side << " needs " << side * side << " values, got " << values_.size();
    throw ArgumentError(os.str());
  }
}

double Grid2::mesh() const { return side_ > 1 ? 1.0 / static_cast<double>(side_ - 1) : 1.0; }

double Grid2::coord(std::size_t index) const { return static_cast<double>(index) * mesh(); }

std::size_t pixel_index(std::size_t side, std::size_t a1, std::size_t a2) {
  if (a1 < 1 || a2 < 1 || a1 > side || a2 > side) throw ArgumentError("pixel index out of range");
  return (a2 - 1) * side + (a1 - 1);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::size_t count_nonzero(std::span<const double> v, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [threshold](double x) { return std::abs(x) > threshold; }));
}

std::vector<std::size_t> support(std::span<const double> v, double threshold) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > threshold) s.push_back(i);
  return s;
}

CoeffBlock::CoeffBlock(std::vector<double> y_f, std::vector<std::vector<double>> y_g)
    : y_f_(std::move(y_f)), y_g_(std::move(y_g)) {
  support_f_ = support(y_f_);
  support_g_.reserve(y_g_.size());
  for (const auto& g : y_g_) support_g_.push_back(support(g));
}

std::size_t l0_norm(const CoeffBlock& b) {
  std::size_t n = b.support_f().size();
  for (std::size_t i = 0; i < b.block_count(); ++i) n += b.support_g(i).size();
  return n;
}

std::size_t MeasurementSet::side() const { return h.empty() ? 0 : h.front().side(); }

std::optional<double> MeasurementSet::epsilon() const {
  if (rho_f && rho_g && eta) return *rho_f + *rho_g + *eta;
  return epsilon_override;
}

void MeasurementSet::validate() const {
  for (const auto& g : h)
    if (g.side() != side()) throw ArgumentError("measurements must share one side length");
}

namespace {

void require_positive(const Grid2& g, const char* what) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0)) {
      std::ostringstream os;
      os << what << ": non-positive value " << g[i] << " at pixel (row " << i / g.side() << ", col "
         << i % g.side() << ")";
      throw DomainError(os.str(), i);
    }
  }
}

}  // namespace

Grid2 to_log(const Grid2& g) {
  require_positive(g, "to_log");
  Grid2 out(g.side());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::log(g[i]);
  return out;
}

Grid2 from_log(const Grid2& g) {
  Grid2 out(g.side());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::exp(g[i]);
  return out;
}

double relative_log_error(const Grid2& mu, const Grid2& mu_true) {
  if (mu.side() != mu_true.side()) throw ArgumentError("relative_log_error: side mismatch");
  require_positive(mu, "relative_log_error");
  require_positive(mu_true, "relative_log_error");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double lt = std::log(mu_true[i]);
    const double diff = std::log(mu[i]) - lt;
    num += diff * diff;
    den += lt * lt;
  }
  if (den == 0.0) throw DomainError("relative_log_error: log of the reference is identically zero", 0);
  return std::sqrt(num / den);
}

double relative_interior_error(const Grid2& value, const Grid2& truth, std::size_t band) {
  if (value.side() != truth.side()) throw ArgumentError("relative_interior_error: side mismatch");
  const std::size_t d = value.side();
  double num = 0.0, den = 0.0;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const std::size_t dist = std::min({r, c, d - 1 - r, d - 1 - c});
      if (dist <= band) continue;
      const double diff = value(r, c) - truth(r, c);
      num += diff * diff;
      den += truth(r, c) * truth(r, c);
    }
  }
  if (den == 0.0) throw ArgumentError("relative_interior_error: empty interior or zero reference");
  return std::sqrt(num / den);
}

}  // namespace dsep
