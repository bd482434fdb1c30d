#include "dsep/dict.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dict_impl.hpp"
#include "dsep/error.hpp"
#include "dsep/grid.hpp"

namespace dsep {
namespace detail {

std::vector<double> DictImpl::atom(std::size_t k) const {
  if (k >= m()) throw ArgumentError("atom index out of range");
  std::vector<double> e(m(), 0.0), out(n());
  e[k] = 1.0;
  synthesize(e, out);
  return out;
}

std::vector<std::complex<double>> DictImpl::analyze_slots(std::span<const double> signal) const {
  std::vector<double> coeffs(m());
  analyze(signal, coeffs);
  return {coeffs.begin(), coeffs.end()};
}

std::pair<std::vector<double>, std::vector<double>> DictImpl::slot_atom(std::size_t k) const {
  return {atom(k), std::vector<double>(n(), 0.0)};
}

namespace {

// Periodized 2D Haar orthobasis on a 2^J x 2^J grid. Atom order: scale j = 1..J-1,
// then family (1,2,3, and 4 at the coarsest scale), then k2, then k1.
class HaarImpl final : public DictImpl {
 public:
  explicit HaarImpl(int J) : J_(J), d_(std::size_t{1} << J) {
    std::size_t offset = 0;
    for (int j = 1; j <= J_ - 1; ++j) {
      const std::size_t K = d_ >> j;
      const int families = (j == J_ - 1) ? 4 : 3;
      for (int f = 0; f < 4; ++f) {
        base_[j][f] = offset;
        if (f < families) offset += K * K;
      }
    }
    m_ = offset;
  }

  std::size_t n() const override { return d_ * d_; }
  std::size_t m() const override { return m_; }
  DictKind kind() const override { return DictKind::haar2d; }
  std::string describe() const override { return "haar2d(J=" + std::to_string(J_) + ")"; }
  bool orthonormal_set() const override { return true; }

  void analyze(std::span<const double> x, std::span<double> out) const override {
    std::vector<double> s(x.begin(), x.end()), next;
    for (int j = 1; j <= J_ - 1; ++j) {
      const std::size_t K = d_ >> j;
      const std::size_t S = 2 * K;
      next.assign(K * K, 0.0);
      double* p1 = out.data() + base_[j][0];
      double* p2 = out.data() + base_[j][1];
      double* p3 = out.data() + base_[j][2];
      for (std::size_t k2 = 0; k2 < K; ++k2) {
        const double* lo = s.data() + (2 * k2) * S;
        const double* hi = lo + S;
        for (std::size_t k1 = 0; k1 < K; ++k1) {
          const double s00 = lo[2 * k1], s10 = lo[2 * k1 + 1];
          const double s01 = hi[2 * k1], s11 = hi[2 * k1 + 1];
          const std::size_t idx = k2 * K + k1;
          p1[idx] = 0.5 * (-s00 - s10 + s01 + s11);
          p2[idx] = 0.5 * (-s00 + s10 - s01 + s11);
          p3[idx] = 0.5 * (s00 - s10 - s01 + s11);
          next[idx] = 0.5 * (s00 + s10 + s01 + s11);
        }
      }
      s.swap(next);
    }
    std::copy(s.begin(), s.end(), out.begin() + static_cast<std::ptrdiff_t>(base_[J_ - 1][3]));
  }

  void synthesize(std::span<const double> y, std::span<double> out) const override {
    const std::size_t top = base_[J_ - 1][3];
    std::vector<double> s(y.begin() + static_cast<std::ptrdiff_t>(top),
                          y.begin() + static_cast<std::ptrdiff_t>(top + 4));
    std::vector<double> next;
    for (int j = J_ - 1; j >= 1; --j) {
      const std::size_t K = d_ >> j;
      const std::size_t S = 2 * K;
      next.assign(S * S, 0.0);
      const double* p1 = y.data() + base_[j][0];
      const double* p2 = y.data() + base_[j][1];
      const double* p3 = y.data() + base_[j][2];
      for (std::size_t k2 = 0; k2 < K; ++k2) {
        double* lo = next.data() + (2 * k2) * S;
        double* hi = lo + S;
        for (std::size_t k1 = 0; k1 < K; ++k1) {
          const std::size_t idx = k2 * K + k1;
          const double a = p1[idx], b = p2[idx], c = p3[idx], p4 = s[idx];
          lo[2 * k1] = 0.5 * (-a - b + c + p4);
          lo[2 * k1 + 1] = 0.5 * (-a + b - c + p4);
          hi[2 * k1] = 0.5 * (a - b - c + p4);
          hi[2 * k1 + 1] = 0.5 * (a + b + c + p4);
        }
      }
      s.swap(next);
    }
    std::copy(s.begin(), s.end(), out.begin());
  }

  HaarAtom info(std::size_t k) const {
    for (int j = 1; j <= J_ - 1; ++j) {
      const std::size_t K = d_ >> j;
      const int families = (j == J_ - 1) ? 4 : 3;
      for (int f = 0; f < families; ++f) {
        const std::size_t b = base_[j][f];
        if (k >= b && k < b + K * K) {
          const std::size_t r = k - b;
          return {f + 1, j, r % K + 1, r / K + 1};
        }
      }
    }
    throw ArgumentError("haar atom index out of range");
  }

 private:
  int J_;
  std::size_t d_;
  std::size_t m_ = 0;
  std::size_t base_[32][4] = {};
};

// Low-frequency real sinusoids over {1..d}^2, built from 1D cos/sin samples.
// 1D basis index c: 0..L are cos(2 pi l a / d), L+1..2L are sin(2 pi l a / d), l >= 1.
class SinusoidImpl final : public DictImpl {
 public:
  SinusoidImpl(std::size_t d, std::size_t L, bool include_constant)
      : d_(d), L_(L), constant_(include_constant), nb_(2 * L + 1) {
    basis_.assign(nb_ * d_, 0.0);
    norms_.assign(nb_, 0.0);
    for (std::size_t c = 0; c < nb_; ++c) {
      const bool is_sin = c > L_;
      const std::size_t l = is_sin ? c - L_ : c;
      double s2 = 0.0;
      for (std::size_t a = 1; a <= d_; ++a) {
        const double arg = 2.0 * std::numbers::pi * static_cast<double>(l * a) / static_cast<double>(d_);
        const double v = is_sin ? std::sin(arg) : std::cos(arg);
        basis_[c * d_ + (a - 1)] = v;
        s2 += v * v;
      }
      if (s2 < 1e-20) throw ArgumentError("sinusoid2d: degenerate all-zero sampled sinusoid");
      norms_[c] = std::sqrt(s2);
    }
    auto cos_idx = [](std::size_t l) { return l; };
    auto sin_idx = [L](std::size_t l) { return L + l; };
    pair_to_atom_.assign(nb_ * nb_, -1);
    auto add = [&](int family, std::size_t c1, std::size_t c2, std::size_t l1, std::size_t l2) {
      pair_to_atom_[c1 * nb_ + c2] = static_cast<long>(atoms_.size());
      atoms_.push_back({c1, c2});
      info_.push_back({family, l1, l2});
    };
    for (std::size_t l1 = 1; l1 <= L; ++l1)
      for (std::size_t l2 = 1; l2 <= L; ++l2) add(1, sin_idx(l1), sin_idx(l2), l1, l2);
    for (std::size_t l1 = 1; l1 <= L; ++l1)
      for (std::size_t l2 = 0; l2 <= L; ++l2) add(2, sin_idx(l1), cos_idx(l2), l1, l2);
    for (std::size_t l1 = 0; l1 <= L; ++l1)
      for (std::size_t l2 = 1; l2 <= L; ++l2) add(3, cos_idx(l1), sin_idx(l2), l1, l2);
    for (std::size_t l1 = 0; l1 <= L; ++l1)
      for (std::size_t l2 = 0; l2 <= L; ++l2)
        if (l1 != 0 || l2 != 0) add(4, cos_idx(l1), cos_idx(l2), l1, l2);
    if (constant_) add(0, 0, 0, 0, 0);
    scale_.resize(atoms_.size());
    for (std::size_t k = 0; k < atoms_.size(); ++k)
      scale_[k] = 1.0 / (norms_[atoms_[k].first] * norms_[atoms_[k].second]);
  }

  std::size_t n() const override { return d_ * d_; }
  std::size_t m() const override { return atoms_.size(); }
  DictKind kind() const override { return DictKind::sinusoid2d; }
  std::string describe() const override {
    std::ostringstream os;
    os << "sinusoid2d(d=" << d_ << ", L=" << L_ << (constant_ ? ", constant" : "") << ")";
    return os.str();
  }
  bool orthonormal_set() const override { return true; }

  // Signal x(a1, a2) with a2 along rows. Coefficient for atom (c1, c2) is
  // scale * sum_{a1,a2} b_c1(a1) b_c2(a2) x(a1, a2).
  void analyze(std::span<const double> x, std::span<double> out) const override {
    // t[c1][row] = sum_a1 b_c1(a1) x(row, a1)
    std::vector<double> t(nb_ * d_);
    for (std::size_t row = 0; row < d_; ++row) {
      const double* xr = x.data() + row * d_;
      for (std::size_t c1 = 0; c1 < nb_; ++c1) {
        const double* b = basis_.data() + c1 * d_;
        double s = 0.0;
        for (std::size_t a = 0; a < d_; ++a) s += b[a] * xr[a];
        t[c1 * d_ + row] = s;
      }
    }
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      const auto [c1, c2] = atoms_[k];
      const double* b = basis_.data() + c2 * d_;
      const double* tr = t.data() + c1 * d_;
      double s = 0.0;
      for (std::size_t a = 0; a < d_; ++a) s += b[a] * tr[a];
      out[k] = s * scale_[k];
    }
  }

  void synthesize(std::span<const double> y, std::span<double> out) const override {
    // t[c1][row] = sum_c2 Y[c1][c2] b_c2(row)
    std::vector<double> t(nb_ * d_, 0.0);
    std::vector<char> used(nb_, 0);
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
      const double coef = y[k];
      if (coef == 0.0) continue;
      const auto [c1, c2] = atoms_[k];
      const double w = coef * scale_[k];
      const double* b = basis_.data() + c2 * d_;
      double* tr = t.data() + c1 * d_;
      for (std::size_t a = 0; a < d_; ++a) tr[a] += w * b[a];
      used[c1] = 1;
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t c1 = 0; c1 < nb_; ++c1) {
      if (!used[c1]) continue;
      const double* b = basis_.data() + c1 * d_;
      const double* tr = t.data() + c1 * d_;
      for (std::size_t row = 0; row < d_; ++row) {
        const double w = tr[row];
        if (w == 0.0) continue;
        double* o = out.data() + row * d_;
        for (std::size_t a = 0; a < d_; ++a) o[a] += w * b[a];
      }
    }
  }

  const SinusoidAtom& info(std::size_t k) const { return info_.at(k); }

 private:
  std::size_t d_, L_;
  bool constant_;
  std::size_t nb_;
  std::vector<double> basis_;
  std::vector<double> norms_;
  std::vector<std::pair<std::size_t, std::size_t>> atoms_;
  std::vector<SinusoidAtom> info_;
  std::vector<long> pair_to_atom_;
  std::vector<double> scale_;
};

class IdentityImpl final : public DictImpl {
 public:
  explicit IdentityImpl(std::size_t n) : n_(n) {}
  std::size_t n() const override { return n_; }
  std::size_t m() const override { return n_; }
  DictKind kind() const override { return DictKind::identity; }
  std::string describe() const override { return "identity(n=" + std::to_string(n_) + ")"; }
  bool orthonormal_set() const override { return true; }
  void analyze(std::span<const double> x, std::span<double> out) const override {
    std::copy(x.begin(), x.end(), out.begin());
  }
  void synthesize(std::span<const double> y, std::span<double> out) const override {
    std::copy(y.begin(), y.end(), out.begin());
  }

 private:
  std::size_t n_;
};

class FourierImpl final : public DictImpl {
 public:
  explicit FourierImpl(std::size_t n) : n_(n), atoms_(n * n) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    const double amp = std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t t = 0; t < n; ++t) atoms_[t] = inv;
    for (std::size_t k = 1; 2 * k < n; ++k) {
      for (std::size_t t = 0; t < n; ++t) {
        const double arg = 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
        atoms_[k * n + t] = amp * std::cos(arg);
        atoms_[(n - k) * n + t] = amp * std::sin(arg);
      }
    }
    if (n % 2 == 0)
      for (std::size_t t = 0; t < n; ++t) atoms_[(n / 2) * n + t] = (t % 2 == 0 ? inv : -inv);
  }
  std::size_t n() const override { return n_; }
  std::size_t m() const override { return n_; }
  DictKind kind() const override { return DictKind::fourier1d; }
  std::string describe() const override { return "fourier1d(n=" + std::to_string(n_) + ")"; }
  bool orthonormal_set() const override { return true; }
  bool paired() const override { return true; }

  void analyze(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t k = 0; k < n_; ++k) {
      const double* a = atoms_.data() + k * n_;
      double s = 0.0;
      for (std::size_t t = 0; t < n_; ++t) s += a[t] * x[t];
      out[k] = s;
    }
  }
  void synthesize(std::span<const double> y, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      if (y[k] == 0.0) continue;
      const double* a = atoms_.data() + k * n_;
      for (std::size_t t = 0; t < n_; ++t) out[t] += y[k] * a[t];
    }
  }
  std::vector<double> atom(std::size_t k) const override {
    return {atoms_.begin() + static_cast<std::ptrdiff_t>(k * n_),
            atoms_.begin() + static_cast<std::ptrdiff_t>((k + 1) * n_)};
  }

  std::vector<std::complex<double>> analyze_slots(std::span<const double> x) const override {
    std::vector<double> y(n_);
    analyze(x, y);
    std::vector<std::complex<double>> out(n_);
    const double r = 1.0 / std::sqrt(2.0);
    out[0] = y[0];
    if (n_ % 2 == 0) out[n_ / 2] = y[n_ / 2];
    for (std::size_t k = 1; 2 * k < n_; ++k) {
      out[k] = std::complex<double>(y[k] * r, -y[n_ - k] * r);
      out[n_ - k] = std::conj(out[k]);
    }
    return out;
  }

  // e_k = (cos + i sin) / sqrt(n): cosine atom / sqrt2, sine atom / sqrt2.
  std::pair<std::vector<double>, std::vector<double>> slot_atom(std::size_t k) const override {
    if (k == 0 || 2 * k == n_) return {atom(k), std::vector<double>(n_, 0.0)};
    const double r = 1.0 / std::sqrt(2.0);
    const std::size_t kc = (2 * k < n_) ? k : n_ - k;
    const double sign = (2 * k < n_) ? 1.0 : -1.0;
    std::vector<double> re = atom(kc), im = atom(n_ - kc);
    for (auto& v : re) v *= r;
    for (auto& v : im) v *= sign * r;
    return {re, im};
  }

 private:
  std::size_t n_;
  std::vector<double> atoms_;
};

class ExplicitImpl final : public DictImpl {
 public:
  ExplicitImpl(std::size_t n, std::size_t m, std::vector<double> a) : n_(n), m_(m), a_(std::move(a)) {
    if (a_.size() != n * m) throw ArgumentError("explicit dictionary: expected n*m entries");
    for (std::size_t k = 0; k < m_; ++k) {
      const double nk = norm2(std::span<const double>(a_.data() + k * n_, n_));
      if (std::abs(nk - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "explicit dictionary: atom " << k << " has norm " << nk;
        throw ArgumentError(os.str());
      }
    }
    orthonormal_ = m_ <= n_;
    if (orthonormal_ && m_ * m_ * n_ <= 200'000'000) {
      for (std::size_t i = 0; i < m_ && orthonormal_; ++i)
        for (std::size_t j = i + 1; j < m_; ++j) {
          const double g = dot(std::span<const double>(a_.data() + i * n_, n_),
                               std::span<const double>(a_.data() + j * n_, n_));
          if (std::abs(g) > 1e-10) {
            orthonormal_ = false;
            break;
          }
        }
    } else {
      orthonormal_ = false;
    }
  }
  std::size_t n() const override { return n_; }
  std::size_t m() const override { return m_; }
  DictKind kind() const override { return DictKind::explicit_matrix; }
  std::string describe() const override {
    return "explicit(n=" + std::to_string(n_) + ", m=" + std::to_string(m_) + ")";
  }
  bool orthonormal_set() const override { return orthonormal_; }
  void analyze(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t k = 0; k < m_; ++k) {
      const double* a = a_.data() + k * n_;
      double s = 0.0;
      for (std::size_t t = 0; t < n_; ++t) s += a[t] * x[t];
      out[k] = s;
    }
  }
  void synthesize(std::span<const double> y, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      if (y[k] == 0.0) continue;
      const double* a = a_.data() + k * n_;
      for (std::size_t t = 0; t < n_; ++t) out[t] += y[k] * a[t];
    }
  }

 private:
  std::size_t n_, m_;
  std::vector<double> a_;
  bool orthonormal_ = false;
};

class ConcatImpl final : public DictImpl {
 public:
  ConcatImpl(Dictionary a, Dictionary b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.n() != b_.n()) throw ArgumentError("concat: dimension mismatch");
  }
  std::size_t n() const override { return a_.n(); }
  std::size_t m() const override { return a_.m() + b_.m(); }
  DictKind kind() const override { return DictKind::concat; }
  std::string describe() const override { return "[" + a_.describe() + ", " + b_.describe() + "]"; }
  bool orthonormal_set() const override { return false; }
  bool paired() const override { return a_.paired() || b_.paired(); }
  void analyze(std::span<const double> x, std::span<double> out) const override {
    a_.impl().analyze(x, out.subspan(0, a_.m()));
    b_.impl().analyze(x, out.subspan(a_.m()));
  }
  void synthesize(std::span<const double> y, std::span<double> out) const override {
    std::vector<double> tmp(n());
    a_.impl().synthesize(y.subspan(0, a_.m()), out);
    b_.impl().synthesize(y.subspan(a_.m()), tmp);
    for (std::size_t t = 0; t < tmp.size(); ++t) out[t] += tmp[t];
  }
  std::vector<std::complex<double>> analyze_slots(std::span<const double> x) const override {
    auto sa = a_.analyze_slots(x);
    auto sb = b_.analyze_slots(x);
    sa.insert(sa.end(), sb.begin(), sb.end());
    return sa;
  }
  std::pair<std::vector<double>, std::vector<double>> slot_atom(std::size_t k) const override {
    return k < a_.m() ? a_.slot_atom(k) : b_.slot_atom(k - a_.m());
  }
  std::vector<double> atom(std::size_t k) const override {
    return k < a_.m() ? a_.atom(k) : b_.atom(k - a_.m());
  }

 private:
  Dictionary a_, b_;
};

class SubsetImpl final : public DictImpl {
 public:
  SubsetImpl(Dictionary parent, std::vector<std::size_t> idx) : p_(std::move(parent)), idx_(std::move(idx)) {
    std::vector<char> seen(p_.m(), 0);
    for (auto k : idx_) {
      if (k >= p_.m()) throw ArgumentError("subset: index out of range");
      if (seen[k]) throw ArgumentError("subset: duplicate index");
      seen[k] = 1;
    }
    if (p_.paired() && p_.kind() == DictKind::fourier1d) {
      const std::size_t n = p_.n();
      for (auto k : idx_)
        if (k != 0 && 2 * k != n && !seen[n - k])
          throw ArgumentError("subset: paired dictionary needs both k and n-k");
    }
  }
  std::size_t n() const override { return p_.n(); }
  std::size_t m() const override { return idx_.size(); }
  DictKind kind() const override { return DictKind::subset; }
  std::string describe() const override {
    return "subset(" + p_.describe() + ", m=" + std::to_string(idx_.size()) + ")";
  }
  bool orthonormal_set() const override { return p_.orthonormal_set(); }
  bool paired() const override { return p_.paired(); }
  void analyze(std::span<const double> x, std::span<double> out) const override {
    auto full = p_.analyze(x);
    for (std::size_t i = 0; i < idx_.size(); ++i) out[i] = full[idx_[i]];
  }
  void synthesize(std::span<const double> y, std::span<double> out) const override {
    std::vector<double> full(p_.m(), 0.0);
    for (std::size_t i = 0; i < idx_.size(); ++i) full[idx_[i]] = y[i];
    p_.impl().synthesize(full, out);
  }
  std::vector<std::complex<double>> analyze_slots(std::span<const double> x) const override {
    auto full = p_.analyze_slots(x);
    std::vector<std::complex<double>> out(idx_.size());
    for (std::size_t i = 0; i < idx_.size(); ++i) out[i] = full[idx_[i]];
    return out;
  }
  std::pair<std::vector<double>, std::vector<double>> slot_atom(std::size_t k) const override {
    return p_.slot_atom(idx_.at(k));
  }
  std::vector<double> atom(std::size_t k) const override { return p_.atom(idx_.at(k)); }

 private:
  Dictionary p_;
  std::vector<std::size_t> idx_;
};

}  // namespace
}  // namespace detail

Dictionary Dictionary::haar2d(int J) {
  if (J < 2 || J > 30) throw ArgumentError("haar2d: J must be >= 2");
  return Dictionary(std::make_shared<detail::HaarImpl>(J));
}

Dictionary Dictionary::sinusoid2d(std::size_t d, std::size_t L, bool include_constant) {
  if (L < 1 || 2 * (L + 1) > d) {
    std::ostringstream os;
    os << "sinusoid2d: L must satisfy 1 <= L <= d/2 - 1 (d=" << d << ", L=" << L << ")";
    throw ArgumentError(os.str());
  }
  return Dictionary(std::make_shared<detail::SinusoidImpl>(d, L, include_constant));
}

Dictionary Dictionary::identity(std::size_t n) {
  if (n == 0) throw ArgumentError("identity: n must be positive");
  return Dictionary(std::make_shared<detail::IdentityImpl>(n));
}

Dictionary Dictionary::fourier1d(std::size_t n) {
  if (n == 0) throw ArgumentError("fourier1d: n must be positive");
  return Dictionary(std::make_shared<detail::FourierImpl>(n));
}

Dictionary Dictionary::explicit_atoms(std::size_t n, std::size_t m, std::vector<double> column_major) {
  return Dictionary(std::make_shared<detail::ExplicitImpl>(n, m, std::move(column_major)));
}

Dictionary Dictionary::concat(const Dictionary& a, const Dictionary& b) {
  return Dictionary(std::make_shared<detail::ConcatImpl>(a, b));
}

Dictionary Dictionary::subset(const Dictionary& parent, std::vector<std::size_t> indices) {
  return Dictionary(std::make_shared<detail::SubsetImpl>(parent, std::move(indices)));
}

std::size_t Dictionary::n() const { return impl_->n(); }
std::size_t Dictionary::m() const { return impl_->m(); }
DictKind Dictionary::kind() const { return impl_->kind(); }
std::string Dictionary::describe() const { return impl_->describe(); }
bool Dictionary::orthonormal_set() const { return impl_->orthonormal_set(); }
bool Dictionary::paired() const { return impl_->paired(); }
std::vector<double> Dictionary::atom(std::size_t k) const {
  if (k >= m()) throw ArgumentError("atom index out of range");
  return impl_->atom(k);
}

std::vector<double> Dictionary::synthesize(std::span<const double> coeffs) const {
  if (coeffs.size() != m()) {
    std::ostringstream os;
    os << "synthesize: expected " << m() << " coefficients, got " << coeffs.size();
    throw ArgumentError(os.str());
  }
  std::vector<double> out(n());
  impl_->synthesize(coeffs, out);
  return out;
}

std::vector<double> Dictionary::analyze(std::span<const double> signal) const {
  if (signal.size() != n()) {
    std::ostringstream os;
    os << "analyze: expected signal of length " << n() << ", got " << signal.size();
    throw ArgumentError(os.str());
  }
  std::vector<double> out(m());
  impl_->analyze(signal, out);
  return out;
}

std::vector<std::complex<double>> Dictionary::analyze_slots(std::span<const double> signal) const {
  if (signal.size() != n()) throw ArgumentError("analyze_slots: length mismatch");
  return impl_->analyze_slots(signal);
}

std::pair<std::vector<double>, std::vector<double>> Dictionary::slot_atom(std::size_t k) const {
  if (k >= m()) throw ArgumentError("slot_atom: index out of range");
  return impl_->slot_atom(k);
}

std::vector<double> Dictionary::slot_magnitudes(std::span<const double> signal) const {
  const auto slots = analyze_slots(signal);
  std::vector<double> out(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) out[i] = std::abs(slots[i]);
  return out;
}

double analyze_complement_norm(const Dictionary& d, std::span<const double> signal) {
  if (!d.orthonormal_set()) throw ArgumentError("analyze_complement_norm: dictionary is not an orthonormal set");
  const auto c = d.analyze(signal);
  const double s = norm2(signal), a = norm2(c);
  return std::sqrt(std::max(0.0, s * s - a * a));
}

double mutual_coherence(const Dictionary& a, const Dictionary& b) {
  if (a.n() != b.n()) throw ArgumentError("mutual_coherence: dimension mismatch");
  // Iterate over the smaller family and analyze each atom with the other.
  const bool swap = b.m() < a.m();
  const Dictionary& outer = swap ? b : a;
  const Dictionary& inner = swap ? a : b;
  double best = 0.0;
  for (std::size_t k = 0; k < outer.m(); ++k) {
    const auto [re, im] = outer.slot_atom(k);
    const auto cr = inner.analyze_slots(re);
    const bool has_im = std::any_of(im.begin(), im.end(), [](double v) { return v != 0.0; });
    if (!has_im) {
      for (const auto& c : cr) best = std::max(best, std::abs(c));
      continue;
    }
    const auto ci = inner.analyze_slots(im);
    // <re + i im, e_l> = C(re) + i C(im); the swap only conjugates the result.
    for (std::size_t l = 0; l < cr.size(); ++l)
      best = std::max(best, std::abs(cr[l] + std::complex<double>(0.0, 1.0) * ci[l]));
  }
  return best;
}

SinusoidAtom sinusoid_atom_info(const Dictionary& d, std::size_t k) {
  const auto* s = dynamic_cast<const detail::SinusoidImpl*>(&d.impl());
  if (!s) throw ArgumentError("sinusoid_atom_info: not a sinusoid2d dictionary");
  return s->info(k);
}

HaarAtom haar_atom_info(const Dictionary& d, std::size_t k) {
  const auto* h = dynamic_cast<const detail::HaarImpl*>(&d.impl());
  if (!h) throw ArgumentError("haar_atom_info: not a haar2d dictionary");
  return h->info(k);
}

}  // namespace dsep
