#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dsep {

enum class DictKind { haar2d, sinusoid2d, identity, fourier1d, explicit_matrix, concat, subset };

namespace detail {
class DictImpl;
}

// An indexed family of unit-norm atoms in R^n with analysis/synthesis operators.
//
// Dictionaries are immutable and cheap to copy (shared implementation).
// haar2d and sinusoid2d run through fast transforms: the periodized Haar
// cascade (O(n)) and separable trigonometric sums (O(n L)).
//
// fourier1d is the unitary DFT basis stored as real atoms: atom 0 is the
// constant, atom k and atom n-k (0 < k < n/2) hold the cosine and sine of
// frequency k, and atom n/2 (n even) the alternating vector. The "slot"
// view re-pairs them into the complex exponentials e_k, e_{n-k}; coherence
// and every l0 count used by the diagnostics work in slot space.
class Dictionary {
 public:
  static Dictionary haar2d(int J);
  static Dictionary sinusoid2d(std::size_t d, std::size_t L, bool include_constant);
  static Dictionary identity(std::size_t n);
  static Dictionary fourier1d(std::size_t n);
  // m atoms of length n, column-major; each column must have unit norm.
  static Dictionary explicit_atoms(std::size_t n, std::size_t m, std::vector<double> column_major);
  static Dictionary concat(const Dictionary& a, const Dictionary& b);
  // Atoms of `parent` at the given indices. For a paired parent the index set
  // must be closed under the k <-> n-k pairing.
  static Dictionary subset(const Dictionary& parent, std::vector<std::size_t> indices);

  std::size_t n() const;
  std::size_t m() const;
  DictKind kind() const;
  std::string describe() const;
  bool orthonormal_set() const;
  bool paired() const;

  std::vector<double> atom(std::size_t k) const;
  std::vector<double> synthesize(std::span<const double> coeffs) const;
  std::vector<double> analyze(std::span<const double> signal) const;

  // <signal, e_k> for each slot k; real dictionaries have zero imaginary part.
  std::vector<std::complex<double>> analyze_slots(std::span<const double> signal) const;
  // Real and imaginary parts of slot atom e_k.
  std::pair<std::vector<double>, std::vector<double>> slot_atom(std::size_t k) const;
  // |analyze_slots(signal)|.
  std::vector<double> slot_magnitudes(std::span<const double> signal) const;

  const detail::DictImpl& impl() const { return *impl_; }

 private:
  explicit Dictionary(std::shared_ptr<const detail::DictImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::DictImpl> impl_;
};

// ||tA_perp s||_2 for an orthonormal set, via Parseval; A_perp is never formed.
double analyze_complement_norm(const Dictionary& d, std::span<const double> signal);

// max |(a_i, b_j)| over all atom pairs (slot atoms for paired dictionaries).
double mutual_coherence(const Dictionary& a, const Dictionary& b);

// Sinusoid atom index layout, exposed for tests and the diagnostics.
struct SinusoidAtom {
  int family;  // 1..4 as (sin,sin), (sin,cos), (cos,sin), (cos,cos); 0 = constant
  std::size_t l1;
  std::size_t l2;
};
SinusoidAtom sinusoid_atom_info(const Dictionary& d, std::size_t k);

// Haar atom index layout.
struct HaarAtom {
  int family;  // 1..4
  int scale;   // j in 1..J-1
  std::size_t k1;
  std::size_t k2;  // 1-based translations
};
HaarAtom haar_atom_info(const Dictionary& d, std::size_t k);

}  // namespace dsep
