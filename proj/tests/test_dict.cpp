#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dsep/dict.hpp"
#include "dsep/error.hpp"
#include "dsep/grid.hpp"
#include "support/l0_oracle.hpp"

using namespace dsep;

namespace {

// Haar atom straight from its defining index ranges; (a1, a2) are 1-based pixels.
std::vector<double> haar_reference(int J, const HaarAtom& a) {
  const std::size_t d = std::size_t{1} << J;
  const std::size_t s = std::size_t{1} << a.scale, half = s / 2;
  const double v = std::ldexp(1.0, -a.scale);
  std::vector<double> out(d * d, 0.0);
  const std::size_t o1 = s * (a.k1 - 1), o2 = s * (a.k2 - 1);
  auto put = [&](std::size_t a1, std::size_t a2, double x) { out[pixel_index(d, o1 + a1, o2 + a2)] = x; };
  switch (a.family) {
    case 1:
      for (std::size_t a1 = 1; a1 <= s; ++a1)
        for (std::size_t a2 = 1; a2 <= half; ++a2) {
          put(a1, a2, -v);
          put(a1, half + a2, v);
        }
      break;
    case 2:
      for (std::size_t a1 = 1; a1 <= half; ++a1)
        for (std::size_t a2 = 1; a2 <= s; ++a2) {
          put(a1, a2, -v);
          put(half + a1, a2, v);
        }
      break;
    case 3:
      for (std::size_t a1 = 1; a1 <= half; ++a1)
        for (std::size_t a2 = 1; a2 <= half; ++a2) {
          put(half + a1, a2, -v);
          put(a1, half + a2, -v);
          put(a1, a2, v);
          put(half + a1, half + a2, v);
        }
      break;
    default:
      for (std::size_t a1 = 1; a1 <= s; ++a1)
        for (std::size_t a2 = 1; a2 <= s; ++a2) put(a1, a2, v);
  }
  return out;
}

std::vector<double> sinusoid_reference(std::size_t d, const SinusoidAtom& a) {
  std::vector<double> out(d * d);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (std::size_t a2 = 1; a2 <= d; ++a2)
    for (std::size_t a1 = 1; a1 <= d; ++a1) {
      const double t1 = w * a.l1 * a1, t2 = w * a.l2 * a2;
      double v = 1.0;
      switch (a.family) {
        case 1: v = std::sin(t1) * std::sin(t2); break;
        case 2: v = std::sin(t1) * std::cos(t2); break;
        case 3: v = std::cos(t1) * std::sin(t2); break;
        case 4: v = std::cos(t1) * std::cos(t2); break;
        default: v = 1.0;
      }
      out[pixel_index(d, a1, a2)] = v;
    }
  const double nrm = norm2(out);
  for (auto& x : out) x /= nrm;
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

}  // namespace

TEST(Haar, AtomCountIsFourToTheJ) {
  for (int J = 2; J <= 7; ++J) {
    const auto H = Dictionary::haar2d(J);
    EXPECT_EQ(H.m(), std::size_t{1} << (2 * J));
    EXPECT_EQ(H.n(), H.m());
    EXPECT_TRUE(H.orthonormal_set());
  }
  EXPECT_THROW(Dictionary::haar2d(1), ArgumentError);
}

TEST(Haar, FullGramAtJ2) {
  const auto H = Dictionary::haar2d(2);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(dot(H.atom(i), H.atom(j)), i == j ? 1.0 : 0.0, 1e-12);
}

TEST(Haar, AtomsMatchDefinition) {
  for (int J : {2, 3, 4}) {
    const auto H = Dictionary::haar2d(J);
    std::size_t coarse4 = 0;
    for (std::size_t k = 0; k < H.m(); ++k) {
      const auto info = haar_atom_info(H, k);
      if (info.family == 4) {
        EXPECT_EQ(info.scale, J - 1);
        ++coarse4;
      }
      EXPECT_LT(max_abs_diff(H.atom(k), haar_reference(J, info)), 1e-15) << "J=" << J << " atom " << k;
    }
    EXPECT_EQ(coarse4, 4u);
  }
}

TEST(Haar, CoarsestScalingAtomIsConstantOnItsQuadrant) {
  const int J = 5;
  const auto H = Dictionary::haar2d(J);
  for (std::size_t k = 0; k < H.m(); ++k) {
    const auto info = haar_atom_info(H, k);
    if (info.family != 4 || info.k1 != 1 || info.k2 != 1) continue;
    const auto a = H.atom(k);
    const std::size_t d = 32, s = 16;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) EXPECT_EQ(a[r * d + c], (r < s && c < s) ? 1.0 / 16.0 : 0.0);
    return;
  }
  FAIL() << "no coarse (1,1) scaling atom";
}

TEST(Haar, ParsevalAndFastDenseAgreement) {
  const auto H = Dictionary::haar2d(4);
  const auto s = random_vector(H.n(), 3);
  const auto y = H.analyze(s);
  EXPECT_NEAR(norm2(y), norm2(s), 1e-12);
  std::vector<double> dense_y(H.m()), dense_s(H.n(), 0.0);
  for (std::size_t k = 0; k < H.m(); ++k) {
    const auto a = haar_reference(4, haar_atom_info(H, k));
    dense_y[k] = dot(a, s);
    for (std::size_t i = 0; i < H.n(); ++i) dense_s[i] += y[k] * a[i];
  }
  EXPECT_LT(max_abs_diff(y, dense_y), 1e-10);
  EXPECT_LT(max_abs_diff(H.synthesize(y), dense_s), 1e-10);
}

TEST(Sinusoid, AtomCounts) {
  EXPECT_EQ(Dictionary::sinusoid2d(128, 15, true).m(), 961u);
  EXPECT_EQ(Dictionary::sinusoid2d(128, 15, false).m(), 960u);
  for (std::size_t L = 1; L <= 7; ++L) EXPECT_EQ(Dictionary::sinusoid2d(16, L, false).m(), 4 * L * L + 4 * L);
  EXPECT_THROW(Dictionary::sinusoid2d(16, 0, true), ArgumentError);
  EXPECT_THROW(Dictionary::sinusoid2d(16, 8, true), ArgumentError);
}

TEST(Sinusoid, GramIsIdentity) {
  const auto G = Dictionary::sinusoid2d(16, 3, true);
  std::vector<std::vector<double>> atoms;
  for (std::size_t k = 0; k < G.m(); ++k) atoms.push_back(G.atom(k));
  double worst = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = 0; j < atoms.size(); ++j)
      worst = std::max(worst, std::abs(dot(atoms[i], atoms[j]) - (i == j ? 1.0 : 0.0)));
  EXPECT_LT(worst, 1e-10);
}

TEST(Sinusoid, AtomsMatchDefinitionAndFastTransforms) {
  for (bool constant : {false, true}) {
    const std::size_t d = 16;
    const auto G = Dictionary::sinusoid2d(d, 3, constant);
    const auto s = random_vector(G.n(), 4);
    const auto v = random_vector(G.m(), 5);
    const auto y = G.analyze(s);
    const auto x = G.synthesize(v);
    std::vector<double> dense_y(G.m()), dense_x(G.n(), 0.0);
    for (std::size_t k = 0; k < G.m(); ++k) {
      const auto info = sinusoid_atom_info(G, k);
      const auto a = sinusoid_reference(d, info);
      if (info.family == 0) EXPECT_NEAR(a[0], 1.0 / static_cast<double>(d), 1e-15);
      EXPECT_LT(max_abs_diff(G.atom(k), a), 1e-12);
      dense_y[k] = dot(a, s);
      for (std::size_t i = 0; i < G.n(); ++i) dense_x[i] += v[k] * a[i];
    }
    EXPECT_LT(max_abs_diff(y, dense_y), 1e-10);
    EXPECT_LT(max_abs_diff(x, dense_x), 1e-10);
  }
}

TEST(Synthesis, BasicIdentities) {
  const auto G = Dictionary::sinusoid2d(16, 2, false);
  std::vector<double> e(G.m(), 0.0);
  e[5] = 1.0;
  EXPECT_LT(max_abs_diff(G.synthesize(e), G.atom(5)), 1e-15);
  const auto z = G.synthesize(std::vector<double>(G.m(), 0.0));
  for (double x : z) EXPECT_EQ(x, 0.0);
  const auto v = random_vector(G.m(), 6);
  EXPECT_NEAR(norm2(G.synthesize(v)), norm2(v), 1e-12);
  EXPECT_LT(max_abs_diff(G.analyze(G.synthesize(v)), v), 1e-12);
  const auto s = random_vector(G.n(), 7);
  EXPECT_LE(norm2(G.analyze(s)), norm2(s));
  EXPECT_THROW(G.synthesize(std::vector<double>(3)), ArgumentError);
  EXPECT_THROW(G.analyze(std::vector<double>(3)), ArgumentError);
  const auto H = Dictionary::haar2d(2);
  for (double x : H.analyze(std::vector<double>(16, 0.0))) EXPECT_EQ(x, 0.0);
}

TEST(ComplementNorm, ParsevalCases) {
  const auto G = Dictionary::sinusoid2d(16, 2, false);
  const auto inside = G.synthesize(random_vector(G.m(), 8));
  EXPECT_LT(analyze_complement_norm(G, inside), 1e-10);
  // Odd-parity checkerboard is orthogonal to every low-frequency atom.
  std::vector<double> checker(G.n());
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) checker[r * 16 + c] = ((r + c) % 2) ? 1.0 : -1.0;
  EXPECT_NEAR(analyze_complement_norm(G, checker), norm2(checker), 1e-10);
  const auto s = random_vector(G.n(), 9);
  const double c = analyze_complement_norm(G, s), a = norm2(G.analyze(s));
  EXPECT_NEAR(c * c + a * a, norm2(s) * norm2(s), 1e-10);
}

TEST(Coherence, SpikesAndFourier) {
  for (std::size_t n : {16, 64, 256})
    EXPECT_NEAR(mutual_coherence(Dictionary::identity(n), Dictionary::fourier1d(n)), 1.0 / std::sqrt(double(n)), 1e-12);
}

TEST(Coherence, SelfAndBounds) {
  const auto F = Dictionary::fourier1d(32);
  EXPECT_NEAR(mutual_coherence(F, F), 1.0, 1e-12);
  const auto H = Dictionary::haar2d(3);
  EXPECT_NEAR(mutual_coherence(H, H), 1.0, 1e-12);
  const double M = mutual_coherence(H, Dictionary::identity(64));
  EXPECT_GE(M, 1.0 / 8.0 - 1e-12);
  EXPECT_LE(M, 1.0 + 1e-12);
  EXPECT_THROW(mutual_coherence(F, H), ArgumentError);
}

TEST(Fourier, RealPairedBasisIsOrthonormal) {
  const auto F = Dictionary::fourier1d(12);
  EXPECT_TRUE(F.paired());
  const auto A = oracle::dense_atoms(F);
  const Eigen::MatrixXd gram = A.transpose() * A;
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-12);
  const auto [re, im] = F.slot_atom(3);
  EXPECT_NEAR(norm2(re) * norm2(re) + norm2(im) * norm2(im), 1.0, 1e-12);
}

TEST(Concat, StacksAtoms) {
  const auto I = Dictionary::identity(8);
  const auto F = Dictionary::fourier1d(8);
  const auto C = Dictionary::concat(I, F);
  EXPECT_EQ(C.m(), 16u);
  EXPECT_FALSE(C.orthonormal_set());
  EXPECT_LT(max_abs_diff(C.atom(9), F.atom(1)), 1e-15);
  EXPECT_LT(max_abs_diff(C.atom(2), I.atom(2)), 1e-15);
}

TEST(Subset, PairingMustBeClosed) {
  const auto F = Dictionary::fourier1d(8);
  EXPECT_THROW(Dictionary::subset(F, {1}), ArgumentError);
  EXPECT_EQ(Dictionary::subset(F, {0, 1, 7}).m(), 3u);
}
