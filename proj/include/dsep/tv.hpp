#pragma once

#include <cstddef>

#include "dsep/grid.hpp"

namespace dsep {

struct TvConfig {
  double weight = 0.1;
  std::size_t iterations = 100;
  double dual_step = 0.25;

  void validate() const;
};

// Approximate minimizer of ||w - g||^2 / (2 weight) + TV(w) by the dual
// projection iteration; forward differences with Neumann boundary.
Grid2 tv_denoise(const Grid2& g, const TvConfig& cfg);

// Isotropic discrete total variation with forward differences, unit spacing.
double total_variation(const Grid2& g);

}  // namespace dsep
