#pragma once

// Exhaustive sparsest-support search for small dictionaries. Test use only.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "dsep/dict.hpp"

namespace dsep::oracle {

struct L0Solution {
  std::vector<std::size_t> support;  // ascending
  std::vector<double> coeffs;        // on support
  double residual = 0.0;
};

inline Eigen::MatrixXd dense_atoms(const Dictionary& D) {
  Eigen::MatrixXd A(D.n(), D.m());
  for (std::size_t k = 0; k < D.m(); ++k) {
    const auto a = D.atom(k);
    for (std::size_t r = 0; r < D.n(); ++r) A(r, k) = a[r];
  }
  return A;
}

// Smallest support (size <= max_support) whose least-squares fit reaches
// residual <= tol; among supports of that size, the one with least residual.
inline std::optional<L0Solution> l0_oracle(const Dictionary& D, const std::vector<double>& f, std::size_t max_support,
                                           double tol) {
  const Eigen::MatrixXd A = dense_atoms(D);
  const Eigen::Map<const Eigen::VectorXd> b(f.data(), static_cast<Eigen::Index>(f.size()));
  const std::size_t m = D.m();
  if (b.norm() <= tol) return L0Solution{{}, {}, b.norm()};
  for (std::size_t k = 1; k <= max_support; ++k) {
    std::optional<L0Solution> best;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      Eigen::MatrixXd S(A.rows(), static_cast<Eigen::Index>(k));
      for (std::size_t i = 0; i < k; ++i) S.col(static_cast<Eigen::Index>(i)) = A.col(static_cast<Eigen::Index>(idx[i]));
      const Eigen::VectorXd x = S.colPivHouseholderQr().solve(b);
      const double res = (S * x - b).norm();
      if (res <= tol && (!best || res < best->residual))
        best = L0Solution{idx, std::vector<double>(x.data(), x.data() + x.size()), res};
      std::size_t p = k;
      while (p > 0 && idx[p - 1] == m - k + p - 1) --p;
      if (p == 0) break;
      ++idx[p - 1];
      for (std::size_t i = p; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (best) return best;
  }
  return std::nullopt;
}

}  // namespace dsep::oracle
