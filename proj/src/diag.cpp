#include "dsep/diag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "dsep/error.hpp"
#include "dsep/grid.hpp"

namespace dsep {

namespace {
// |x| >= 1 up to rounding of values that are exactly 1 in exact arithmetic.
constexpr double kUnitThreshold = 1.0 - 1e-12;
}  // namespace

void CompletenessParams::validate() const {
  if (!(beta > 0.0) || !(d_const > 0.0)) throw ArgumentError("completeness parameters must be positive");
}

Cs1Report cs1_check(const std::vector<std::vector<double>>& y_list, double beta) {
  Cs1Report rep;
  for (const auto& y : y_list)
    if (y.size() != y_list.front().size()) throw ArgumentError("cs1_check: coefficient vectors differ in length");
  for (std::size_t i = 0; i < y_list.size(); ++i)
    for (std::size_t j = i + 1; j < y_list.size(); ++j)
      for (std::size_t a = 0; a < y_list[i].size(); ++a) {
        const double yi = y_list[i][a], yj = y_list[j][a];
        if (std::abs(yi) <= kZeroThreshold || std::abs(yj) <= kZeroThreshold) continue;
        if (std::abs(yi - yj) <= beta) rep.violations.push_back({i, j, a});
      }
  return rep;
}

std::vector<std::size_t> s_q(const Dictionary& A_f, const Dictionary& A_g, std::span<const double> q) {
  const auto mags = A_g.slot_magnitudes(A_f.synthesize(q));
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < mags.size(); ++a)
    if (mags[a] >= kUnitThreshold) out.push_back(a);
  return out;
}

std::vector<ProbeResult> cs2_probe(const Dictionary& A_f, const Dictionary& A_g, const std::vector<std::size_t>& y_f_supp,
                                   const std::vector<std::vector<std::size_t>>& y_g_supps,
                                   const std::vector<std::vector<double>>& probes, double d_const) {
  if (A_f.n() != A_g.n()) throw ArgumentError("cs2_probe: dictionaries differ in signal length");
  const std::set<std::size_t> fs(y_f_supp.begin(), y_f_supp.end());
  std::vector<std::set<std::size_t>> gs;
  std::set<std::size_t> uni;
  for (const auto& s : y_g_supps) {
    gs.emplace_back(s.begin(), s.end());
    uni.insert(s.begin(), s.end());
  }
  const std::size_t rhs = uni.size() + fs.size();
  std::vector<ProbeResult> out;
  for (const auto& q : probes) {
    if (q.size() != A_f.m()) throw ArgumentError("cs2_probe: probe length differs from A_f atom count");
    ProbeResult r;
    const auto s = A_f.synthesize(q);
    r.synthesis_norm = norm2(s);
    r.complement_norm = analyze_complement_norm(A_g, s);
    r.in_domain = r.synthesis_norm > d_const && r.complement_norm <= 2.0 / 3.0;
    r.rhs = rhs;
    if (r.in_domain) {
      std::size_t lhs = 0;
      for (auto a : support(q))
        if (!fs.count(a)) ++lhs;
      const auto S = s_q(A_f, A_g, q);
      for (const auto& g : gs)
        for (auto a : S)
          if (!g.count(a)) ++lhs;
      r.lhs = lhs;
      r.margin = static_cast<long>(lhs) - static_cast<long>(rhs);
      r.pass = r.margin > 0;
    }
    out.push_back(r);
  }
  return out;
}

double xi_p(std::span<const double> q, std::size_t p) {
  if (p < 1 || p > q.size()) throw ArgumentError("xi_p: p must lie in [1, n]");
  std::vector<double> a(q.size());
  std::transform(q.begin(), q.end(), a.begin(), [](double x) { return std::abs(x); });
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(p - 1), a.end(), std::greater<>());
  return a[p - 1];
}

long haar_sin_bound(int J, long L) {
  if (J < 3 || L < 1) throw ArgumentError("haar_sin_bound: need J >= 3 and L >= 1");
  if (L >= (1L << (J - 2))) {
    std::ostringstream os;
    os << "haar_sin_bound: L = " << L << " must be below 2^(J-2) = " << (1L << (J - 2));
    throw ArgumentError(os.str());
  }
  int B = 0;
  while (L >= (1L << B)) ++B;
  long sum = 0;
  for (int j = 1; j <= J - B - 1; ++j) {
    const long t = (1L << (J - j)) - 2 * L;
    sum += t * t;
  }
  return sum;
}

std::size_t slot_l0(const Dictionary& D, std::span<const double> signal) {
  const auto m = D.slot_magnitudes(signal);
  return count_nonzero(m);
}

std::vector<double> random_sparse(std::size_t m, std::size_t k, double scale, std::uint64_t seed) {
  if (k > m) throw ArgumentError("random_sparse: k exceeds length");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<double> v(m, 0.0);
  for (std::size_t t = 0; t < k; ++t) {
    double x = 0.0;
    while (std::abs(x) < 1e-3 * scale) x = nd(rng);
    v[idx[t]] = x;
  }
  return v;
}

UncertaintyReport verify_uncertainty(const Dictionary& A, const Dictionary& B, std::size_t trials, std::uint64_t seed) {
  if (A.n() != B.n()) throw ArgumentError("verify_uncertainty: dimension mismatch");
  if (A.m() != A.n() || B.m() != B.n() || !A.orthonormal_set() || !B.orthonormal_set())
    throw ArgumentError("verify_uncertainty: both dictionaries must be orthobases");
  UncertaintyReport rep;
  rep.bound = 2.0 / mutual_coherence(A, B);
  rep.min_sum = static_cast<std::size_t>(-1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> kd(1, 4);
  const std::size_t n = A.n();
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> ya(n, 0.0), yb(n, 0.0);
    const int mode = static_cast<int>(t % 3);
    if (mode != 1) ya = random_sparse(n, kd(rng), 1.0, rng());
    if (mode != 0) yb = random_sparse(n, kd(rng), 1.0, rng());
    auto h = A.synthesize(ya);
    const auto hb = B.synthesize(yb);
    for (std::size_t i = 0; i < n; ++i) h[i] += hb[i];
    const std::size_t sum = slot_l0(A, h) + slot_l0(B, h);
    rep.min_sum = std::min(rep.min_sum, sum);
    if (static_cast<double>(sum) < rep.bound - 1e-9) ++rep.violations;
    ++rep.trials;
  }
  return rep;
}

std::vector<NormalizedUpResult> verify_normalized_up(const Dictionary& A_f, const Dictionary& A_g,
                                                     const std::vector<std::vector<double>>& probes, double d_const) {
  if (A_f.n() != A_g.n()) throw ArgumentError("verify_normalized_up: dimension mismatch");
  const double bound = 2.0 / mutual_coherence(A_f, A_g);
  std::vector<NormalizedUpResult> out;
  for (const auto& q : probes) {
    NormalizedUpResult r;
    r.bound = bound;
    const auto s = A_f.synthesize(q);
    r.in_domain = norm2(s) > d_const && analyze_complement_norm(A_g, s) <= 2.0 / 3.0;
    if (r.in_domain) {
      r.lhs = slot_l0(A_f, s) + s_q(A_f, A_g, q).size();
      r.holds = static_cast<double>(r.lhs) >= bound - 1e-9;
    }
    out.push_back(r);
  }
  return out;
}

HaarSinReport verify_haar_sin(int J, std::size_t L, std::size_t trials, std::uint64_t seed) {
  HaarSinReport rep;
  rep.bound = haar_sin_bound(J, static_cast<long>(L));
  const std::size_t d = std::size_t{1} << J;
  const auto Af = Dictionary::haar2d(J);
  const auto Ag = Dictionary::sinusoid2d(d, L, false);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<std::size_t> kd(1, 3);
  rep.min_count = static_cast<std::size_t>(-1);
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> v;
    if (t % 2 == 0) {
      v.resize(Ag.m());
      for (auto& x : v) x = nd(rng);
    } else {
      v = random_sparse(Ag.m(), std::min(kd(rng), Ag.m()), 1.0, rng());
    }
    const std::size_t c = count_nonzero(Af.analyze(Ag.synthesize(v)));
    rep.min_count = std::min(rep.min_count, c);
    if (static_cast<long>(c) < rep.bound) ++rep.violations;
    ++rep.trials;
  }
  return rep;
}

std::vector<double> dirac_comb(std::size_t n, double height) {
  const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (s * s != n) throw ArgumentError("dirac_comb: n must be a perfect square");
  std::vector<double> q(n, 0.0);
  for (std::size_t a = 0; a < n; a += s) q[a] = height;
  return q;
}

Dictionary random_orthobasis(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> a(n * n);
  for (auto& x : a) x = nd(rng);
  for (std::size_t k = 0; k < n; ++k) {
    double* col = a.data() + k * n;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < k; ++j) {
        const double* cj = a.data() + j * n;
        double s = 0.0;
        for (std::size_t t = 0; t < n; ++t) s += cj[t] * col[t];
        for (std::size_t t = 0; t < n; ++t) col[t] -= s * cj[t];
      }
    const double nk = norm2(std::span<const double>(col, n));
    for (std::size_t t = 0; t < n; ++t) col[t] /= nk;
  }
  return Dictionary::explicit_atoms(n, n, std::move(a));
}

}  // namespace dsep
