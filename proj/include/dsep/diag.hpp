#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dsep/dict.hpp"

namespace dsep {

struct CompletenessParams {
  double beta = 1.0;
  double d_const = 1.0;

  void validate() const;
};

struct Cs1Violation {
  std::size_t i;
  std::size_t j;
  std::size_t alpha;
};

struct Cs1Report {
  std::vector<Cs1Violation> violations;
  bool holds() const { return violations.empty(); }
};

// Pairs i < j and atoms alpha where both coefficients are nonzero and differ by at most beta.
Cs1Report cs1_check(const std::vector<std::vector<double>>& y_list, double beta);

struct ProbeResult {
  bool in_domain = false;
  double synthesis_norm = 0.0;   // ||A_f q||_2
  double complement_norm = 0.0;  // ||tA_g_perp A_f q||_2
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  long margin = 0;  // lhs - rhs
  bool pass = false;
};

// #(supp q \ supp y_f) + sum_i #(S_q \ supp y_g^i) against
// #(union_i supp y_g^i) + ||y_f||_0, with S_q = {alpha : |(tA_g A_f q)(alpha)| >= 1}.
// Probes outside the domain (||A_f q|| <= d_const or complement > 2/3) are reported, not evaluated.
std::vector<ProbeResult> cs2_probe(const Dictionary& A_f, const Dictionary& A_g, const std::vector<std::size_t>& y_f_supp,
                                   const std::vector<std::vector<std::size_t>>& y_g_supps,
                                   const std::vector<std::vector<double>>& probes, double d_const);

// Entries of tA_g A_f q with magnitude >= 1 (slot magnitudes for paired A_g).
std::vector<std::size_t> s_q(const Dictionary& A_f, const Dictionary& A_g, std::span<const double> q);

// p-th largest |q(alpha)|.
double xi_p(std::span<const double> q, std::size_t p);

// sum_{j=1}^{J-B-1} (2^{J-j} - 2L)^2 with the smallest B such that L < 2^B.
long haar_sin_bound(int J, long L);

// Number of slots with magnitude above the zero threshold.
std::size_t slot_l0(const Dictionary& D, std::span<const double> signal);

struct UncertaintyReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  double bound = 0.0;  // 2/M
  std::size_t min_sum = 0;
};

// Random sparse signals in A, in B and in both; checks ||y_A||_0 + ||y_B||_0 >= 2/M.
UncertaintyReport verify_uncertainty(const Dictionary& A, const Dictionary& B, std::size_t trials, std::uint64_t seed);

struct NormalizedUpResult {
  bool in_domain = false;
  std::size_t lhs = 0;  // ||q||_0 + #S_q
  double bound = 0.0;   // 2/M
  bool holds = false;
};

std::vector<NormalizedUpResult> verify_normalized_up(const Dictionary& A_f, const Dictionary& A_g,
                                                     const std::vector<std::vector<double>>& probes, double d_const);

struct HaarSinReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  long bound = 0;
  std::size_t min_count = 0;
};

// Random nonzero v in the non-constant sinusoid coefficient space:
// count the nonzero Haar coefficients of A_g v against haar_sin_bound(J, L).
HaarSinReport verify_haar_sin(int J, std::size_t L, std::size_t trials, std::uint64_t seed);

// Spike train at multiples of sqrt(n) with the given height; n must be a perfect square.
std::vector<double> dirac_comb(std::size_t n, double height = 1.0);

// k random entries drawn N(0, scale^2) at random positions.
std::vector<double> random_sparse(std::size_t m, std::size_t k, double scale, std::uint64_t seed);

// Orthonormal basis from modified Gram-Schmidt of a seeded Gaussian matrix.
Dictionary random_orthobasis(std::size_t n, std::uint64_t seed);

}  // namespace dsep
