#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dsep/dict.hpp"
#include "dsep/error.hpp"
#include "dsep/omp.hpp"
#include "support/l0_oracle.hpp"

using namespace dsep;

namespace {

std::vector<double> residual_of(const Dictionary& D, const std::vector<double>& y, const std::vector<double>& f) {
  auto r = D.synthesize(y);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - r[i];
  return r;
}

StackedSystem small_system(std::size_t N, std::uint64_t seed, std::vector<double>* f_out = nullptr) {
  const auto Af = Dictionary::haar2d(3);
  const auto Ag = Dictionary::sinusoid2d(8, 2, false);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> yf(Af.m(), 0.0);
  for (std::size_t k : {3, 17, 40}) yf[k] = nd(rng) + 2.0;
  const auto F = Af.synthesize(yf);
  std::vector<std::vector<double>> h;
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> yg(Ag.m(), 0.0);
    yg[(5 * i + 1) % Ag.m()] = 1.5 + nd(rng) * 0.1;
    auto G = Ag.synthesize(yg);
    for (std::size_t t = 0; t < G.size(); ++t) G[t] += F[t];
    h.push_back(std::move(G));
  }
  if (f_out) *f_out = F;
  return StackedSystem(Af, Ag, h);
}

}  // namespace

TEST(OmpSingle, ExactAtomInOneStep) {
  const auto D = Dictionary::haar2d(3);
  const auto f = D.atom(11);
  OmpConfig cfg;
  cfg.residual_target = 1e-12;
  const auto r = omp_single(D, f, cfg);
  ASSERT_EQ(r.selected.size(), 1u);
  EXPECT_EQ(r.selected[0], 11u);
  EXPECT_NEAR(r.coeffs[11], 1.0, 1e-14);
  EXPECT_LT(r.residual_history.back(), 1e-12);
  EXPECT_EQ(r.stop, StopReason::residual_target);
}

TEST(OmpSingle, TwoAtomsOfAnOrthobasis) {
  const auto D = Dictionary::haar2d(3);
  std::vector<double> y(D.m(), 0.0);
  y[3] = 2.0;
  y[7] = 1.0;
  OmpConfig cfg;
  cfg.residual_target = 1e-12;
  const auto r = omp_single(D, D.synthesize(y), cfg);
  EXPECT_EQ(r.selected, (std::vector<std::size_t>{3, 7}));
  EXPECT_NEAR(r.coeffs[3], 2.0, 1e-13);
  EXPECT_NEAR(r.coeffs[7], 1.0, 1e-13);
}

TEST(OmpSingle, KSparseInKIterations) {
  const auto D = Dictionary::sinusoid2d(16, 3, true);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (std::size_t k = 1; k <= 6; ++k) {
    std::vector<double> y(D.m(), 0.0);
    for (std::size_t j = 0; j < k; ++j) y[(j * 7 + k) % D.m()] = nd(rng) + (j % 2 ? 3.0 : -3.0);
    OmpConfig cfg;
    cfg.residual_target = 1e-9;
    const auto r = omp_single(D, D.synthesize(y), cfg);
    EXPECT_EQ(r.selected.size(), k);
    for (std::size_t j = 0; j < y.size(); ++j) EXPECT_NEAR(r.coeffs[j], y[j], 1e-10);
  }
}

TEST(OmpSingle, ResidualNonIncreasingAndNoRepeats) {
  const auto D = Dictionary::concat(Dictionary::identity(64), Dictionary::fourier1d(64));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<double> f(64);
  for (auto& x : f) x = nd(rng);
  OmpConfig cfg;
  cfg.max_iterations = 40;
  const auto r = omp_single(D, f, cfg);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    EXPECT_LE(r.residual_history[i], r.residual_history[i - 1] + 1e-12);
  std::set<std::size_t> uniq(r.selected.begin(), r.selected.end());
  EXPECT_EQ(uniq.size(), r.selected.size());
  EXPECT_NEAR(norm2(residual_of(D, r.coeffs, f)), r.residual_history.back(), 1e-9);
}

TEST(OmpSingle, TiesGoToLowestIndex) {
  const auto D = Dictionary::identity(8);
  std::vector<double> f(8, 0.0);
  f[2] = 1.0;
  f[5] = -1.0;
  OmpConfig cfg;
  cfg.max_iterations = 1;
  EXPECT_EQ(omp_single(D, f, cfg).selected, std::vector<std::size_t>{2});
}

TEST(OmpSingle, MatchesExhaustiveOracleOnSmallInstances) {
  const auto D = Dictionary::concat(Dictionary::identity(16), Dictionary::fourier1d(16));
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> atom(0, D.m() - 1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> y(D.m(), 0.0);
    for (int j = 0; j < 2; ++j) y[atom(rng)] = 1.0 + std::abs(nd(rng));
    const auto f = D.synthesize(y);
    const double tol = 1e-9 * norm2(f);
    const auto oracle = oracle::l0_oracle(D, f, 3, tol);
    ASSERT_TRUE(oracle);
    OmpConfig cfg;
    cfg.residual_target = tol;
    cfg.max_iterations = 32;
    auto sel = omp_single(D, f, cfg).selected;
    std::sort(sel.begin(), sel.end());
    EXPECT_EQ(sel, oracle->support);
  }
}

TEST(OmpConfig, Validation) {
  OmpConfig cfg;
  cfg.max_iterations = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg.max_iterations = 1;
  cfg.residual_target = -1.0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(StackedSystem, ApplyMatchesDefinition) {
  const auto sys = small_system(3, 7);
  std::vector<double> yf(sys.A_f().m(), 0.0);
  yf[2] = 1.0;
  std::vector<std::vector<double>> yg(3, std::vector<double>(sys.A_g().m(), 0.0));
  yg[1][4] = -2.0;
  const auto out = sys.apply(CoeffBlock(yf, yg));
  const auto F = sys.A_f().synthesize(yf);
  const auto G = sys.A_g().synthesize(yg[1]);
  for (std::size_t t = 0; t < F.size(); ++t) {
    EXPECT_DOUBLE_EQ(out[0][t], F[t]);
    EXPECT_DOUBLE_EQ(out[1][t], F[t] + G[t]);
  }
  EXPECT_THROW(sys.apply(CoeffBlock(yf, {})), ArgumentError);
  EXPECT_THROW(StackedSystem(Dictionary::haar2d(3), Dictionary::haar2d(2), {std::vector<double>(64)}), ArgumentError);
}

TEST(OmpBlock, SingleMeasurementEqualsConcatenatedOmp) {
  for (std::uint64_t seed : {11, 12, 13}) {
    const auto sys = small_system(1, seed);
    OmpConfig cfg;
    cfg.max_iterations = 12;
    const auto rb = omp_block(sys, cfg);
    const auto rs = omp_single(Dictionary::concat(sys.A_f(), sys.A_g()), sys.h()[0], cfg);
    EXPECT_EQ(rb.selected, rs.selected);
  }
}

TEST(OmpBlock, DistinctSinusoidsWithoutWavelets) {
  const auto Af = Dictionary::haar2d(3);
  const auto Ag = Dictionary::sinusoid2d(8, 2, false);
  std::vector<std::vector<double>> h;
  for (std::size_t i = 0; i < 3; ++i) h.push_back(Ag.atom(2 * i + 1));
  OmpConfig cfg;
  cfg.residual_target = 1e-10;
  const auto r = omp_block(StackedSystem(Af, Ag, h), cfg);
  EXPECT_EQ(r.selected.size(), 3u);
  EXPECT_EQ(r.coeffs.support_f().size(), 0u);
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_EQ(r.coeffs.support_g(i).size(), 1u);
    EXPECT_EQ(r.coeffs.support_g(i)[0], 2 * i + 1);
    EXPECT_NEAR(r.coeffs.y_g()[i][2 * i + 1], 1.0, 1e-12);
  }
}

TEST(OmpBlock, AggregateResidualAndRowResiduals) {
  const auto sys = small_system(4, 8);
  OmpConfig cfg;
  cfg.max_iterations = 200;
  cfg.residual_target = 1e-8;
  const auto r = omp_block(sys, cfg);
  EXPECT_EQ(r.stop, StopReason::residual_target);
  EXPECT_LE(r.final_residual, 1e-8);
  ASSERT_EQ(r.row_residuals.size(), 4u);
  double agg = 0.0;
  const auto model = sys.apply(r.coeffs);
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<double> d(model[i].size());
    for (std::size_t t = 0; t < d.size(); ++t) d[t] = model[i][t] - sys.h()[i][t];
    EXPECT_NEAR(norm2(d), r.row_residuals[i], 1e-9);
    agg += r.row_residuals[i] * r.row_residuals[i];
  }
  EXPECT_NEAR(std::sqrt(agg), r.final_residual, 1e-9);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    EXPECT_LE(r.residual_history[i], r.residual_history[i - 1] + 1e-12);
}

TEST(OmpPenalized, ZeroLambda2KeepsSupport) {
  const auto sys = small_system(2, 9);
  OmpConfig cfg;
  cfg.max_iterations = 10;
  PenaltyTerms pt;
  pt.lambda1 = 3.0;
  pt.lambda2 = 0.0;
  pt.h0 = sys.h();
  const auto rp = omp_block_penalized(sys, cfg, pt);
  const auto rb = omp_block(sys, cfg);
  EXPECT_EQ(rp.selected, rb.selected);
  EXPECT_EQ(rp.coeffs.block_count(), 3u);
}

TEST(OmpPenalized, SharedBlockRecoversCommonAtom) {
  std::vector<double> F;
  const auto sys = small_system(3, 10, &F);
  const auto& Ag = sys.A_g();
  const auto common = Ag.atom(6);
  std::vector<std::vector<double>> h0(3, F);
  for (auto& v : h0)
    for (std::size_t t = 0; t < v.size(); ++t) v[t] += 0.8 * common[t];
  PenaltyTerms pt;
  pt.lambda1 = 1.0;
  pt.lambda2 = 10.0;
  pt.h0 = h0;
  OmpConfig cfg;
  cfg.max_iterations = 50;
  cfg.residual_target = 1e-9;
  const auto r = omp_block_penalized(sys, cfg, pt);
  const auto& shared = r.coeffs.y_g().back();
  for (std::size_t k = 0; k < shared.size(); ++k) EXPECT_NEAR(shared[k], k == 6 ? 0.8 : 0.0, 1e-9);
}

TEST(OmpPenalized, Validation) {
  const auto sys = small_system(2, 11);
  PenaltyTerms pt;
  pt.h0 = {sys.h()[0]};
  EXPECT_THROW(omp_block_penalized(sys, OmpConfig{}, pt), ArgumentError);
  pt.h0 = sys.h();
  pt.lambda1 = 0.0;
  EXPECT_THROW(omp_block_penalized(sys, OmpConfig{}, pt), ArgumentError);
}
