#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dsep/dict.hpp"
#include "dsep/grid.hpp"

namespace dsep {

enum class RefitMethod { cholesky, conjugate_gradient };

struct OmpConfig {
  std::size_t max_iterations = 1000;
  double residual_target = 0.0;
  double refit_tolerance = 1e-10;
  double zero_threshold = kZeroThreshold;
  RefitMethod refit = RefitMethod::cholesky;

  void validate() const;
};

enum class StopReason { residual_target, max_iterations, no_correlation };

struct OmpResult {
  CoeffBlock coeffs;
  // Entry 0 is the residual of the zero model, then one entry per accepted atom.
  std::vector<double> residual_history;
  // Global column indices in selection order.
  std::vector<std::size_t> selected;
  StopReason stop = StopReason::max_iterations;
  // Unweighted ||t_r - model_r||_2 for every row of the system.
  std::vector<double> row_residuals;
  double final_residual = 0.0;
};

struct OmpSingleResult {
  std::vector<double> coeffs;
  std::vector<double> residual_history;
  std::vector<std::size_t> selected;
  StopReason stop = StopReason::max_iterations;
};

// The block system of N measurements h_i = A_f y_f + A_g y_g^i. Column indices:
// [0, m_f) for y_f, then m_g per block.
class StackedSystem {
 public:
  StackedSystem(Dictionary A_f, Dictionary A_g, std::vector<std::vector<double>> h);

  const Dictionary& A_f() const { return A_f_; }
  const Dictionary& A_g() const { return A_g_; }
  std::size_t N() const { return h_.size(); }
  const std::vector<std::vector<double>>& h() const { return h_; }

  // Per-measurement A_f y_f + A_g y_g^i.
  std::vector<std::vector<double>> apply(const CoeffBlock& y) const;

 private:
  Dictionary A_f_, A_g_;
  std::vector<std::vector<double>> h_;
};

// One weighted residual row w * (A_f y_f + A_g y_g^block - target).
struct WeightedRow {
  double weight = 1.0;
  std::vector<double> target;
  std::size_t block = 0;
};

// Greedy solver over an arbitrary set of weighted rows sharing y_f. A_g may be
// absent (pure single-dictionary problem); then block_count must be 0.
OmpResult omp_weighted(const Dictionary& A_f, const std::optional<Dictionary>& A_g,
                       const std::vector<WeightedRow>& rows, std::size_t block_count, const OmpConfig& cfg);

OmpSingleResult omp_single(const Dictionary& D, std::span<const double> f, const OmpConfig& cfg);

OmpResult omp_block(const StackedSystem& sys, const OmpConfig& cfg);

// Rows lambda1 (A_f y_f + A_g y_g^i - h_i) and lambda2 (A_f y_f + A_g y_g^{N+1} - h0_i).
struct PenaltyTerms {
  double lambda1 = 1.0;
  double lambda2 = 10.0;
  std::vector<std::vector<double>> h0;
};

OmpResult omp_block_penalized(const StackedSystem& sys, const OmpConfig& cfg, const PenaltyTerms& extra);

}  // namespace dsep
