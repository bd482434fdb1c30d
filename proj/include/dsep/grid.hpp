#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dsep {

// Absolute threshold below which a coefficient counts as zero in every l0 count.
inline constexpr double kZeroThreshold = 1e-10;

// A d x d real image on the unit square, stored row-major.
// Pixel (a1, a2) in 1-based image coordinates lives at flat index
// (a2 - 1) * d + (a1 - 1): a1 runs along a row (x1), a2 across rows (x2).
class Grid2 {
 public:
  Grid2() = default;
  explicit Grid2(std::size_t side, double fill = 0.0);
  Grid2(std::size_t side, std::vector<double> values);

  std::size_t side() const { return side_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t row, std::size_t col) { return values_[row * side_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * side_ + col]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  // Physical coordinate of a pixel column/row on the vertex-centred mesh h = 1/(d-1).
  double coord(std::size_t index) const;
  double mesh() const;

  bool operator==(const Grid2&) const = default;

 private:
  std::size_t side_ = 0;
  std::vector<double> values_;
};

// Flat index of the 1-based pixel (a1, a2).
std::size_t pixel_index(std::size_t side, std::size_t a1, std::size_t a2);

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
std::size_t count_nonzero(std::span<const double> v, double threshold = kZeroThreshold);
std::vector<std::size_t> support(std::span<const double> v, double threshold = kZeroThreshold);

// Stacked coefficients y = [y_f, y_g^1, ..., y_g^N].
class CoeffBlock {
 public:
  CoeffBlock() = default;
  CoeffBlock(std::vector<double> y_f, std::vector<std::vector<double>> y_g);

  const std::vector<double>& y_f() const { return y_f_; }
  const std::vector<std::vector<double>>& y_g() const { return y_g_; }
  std::size_t block_count() const { return y_g_.size(); }

  const std::vector<std::size_t>& support_f() const { return support_f_; }
  const std::vector<std::size_t>& support_g(std::size_t i) const { return support_g_[i]; }

 private:
  std::vector<double> y_f_;
  std::vector<std::vector<double>> y_g_;
  std::vector<std::size_t> support_f_;
  std::vector<std::vector<std::size_t>> support_g_;
};

std::size_t l0_norm(const CoeffBlock& b);

// Log-domain measurements h_i with their noise and tolerance metadata.
struct MeasurementSet {
  std::vector<Grid2> h;
  std::optional<double> eta;
  std::optional<double> rho_f;
  std::optional<double> rho_g;
  std::optional<double> epsilon_override;

  std::size_t count() const { return h.size(); }
  std::size_t side() const;
  // rho_f + rho_g + eta when all three are known, otherwise the direct value.
  std::optional<double> epsilon() const;
  // Throws ArgumentError when the h_i disagree on their side length.
  void validate() const;
};

Grid2 to_log(const Grid2& g);
Grid2 from_log(const Grid2& g);

// ||log mu - log mu_true||_2 / ||log mu_true||_2.
double relative_log_error(const Grid2& mu, const Grid2& mu_true);

// Relative L2 error restricted to pixels at distance > band from the boundary.
double relative_interior_error(const Grid2& value, const Grid2& truth, std::size_t band);

}  // namespace dsep
