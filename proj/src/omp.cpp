#include "dsep/omp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsep/error.hpp"

namespace dsep {

void OmpConfig::validate() const {
  if (max_iterations < 1) throw ArgumentError("omp: max_iterations must be >= 1");
  if (!(residual_target >= 0.0)) throw ArgumentError("omp: residual_target must be >= 0");
  if (!(refit_tolerance > 0.0)) throw ArgumentError("omp: refit_tolerance must be > 0");
  if (!(zero_threshold >= 0.0)) throw ArgumentError("omp: zero_threshold must be >= 0");
}

StackedSystem::StackedSystem(Dictionary A_f, Dictionary A_g, std::vector<std::vector<double>> h)
    : A_f_(std::move(A_f)), A_g_(std::move(A_g)), h_(std::move(h)) {
  if (A_f_.n() != A_g_.n()) throw ArgumentError("stacked system: A_f and A_g differ in signal length");
  if (h_.empty()) throw ArgumentError("stacked system: no measurements");
  for (const auto& hi : h_)
    if (hi.size() != A_f_.n()) throw ArgumentError("stacked system: measurement length mismatch");
}

std::vector<std::vector<double>> StackedSystem::apply(const CoeffBlock& y) const {
  if (y.block_count() != N()) throw ArgumentError("stacked system: wrong number of g blocks");
  const auto F = A_f_.synthesize(y.y_f());
  std::vector<std::vector<double>> out;
  out.reserve(N());
  for (std::size_t i = 0; i < N(); ++i) {
    auto G = A_g_.synthesize(y.y_g()[i]);
    for (std::size_t t = 0; t < G.size(); ++t) G[t] += F[t];
    out.push_back(std::move(G));
  }
  return out;
}

namespace {

class Engine {
 public:
  Engine(const Dictionary& A_f, const std::optional<Dictionary>& A_g, const std::vector<WeightedRow>& rows,
         std::size_t blocks, const OmpConfig& cfg)
      : Af_(A_f), Ag_(A_g), rows_(rows), G_(blocks), cfg_(cfg) {
    cfg.validate();
    if (rows.empty()) throw ArgumentError("omp: no rows");
    if (!Ag_ && blocks != 0) throw ArgumentError("omp: g blocks require an A_g dictionary");
    if (Ag_ && Ag_->n() != Af_.n()) throw ArgumentError("omp: A_f and A_g differ in signal length");
    n_ = Af_.n();
    mf_ = Af_.m();
    mg_ = Ag_ ? Ag_->m() : 0;
    ortho_f_ = Af_.orthonormal_set();
    ortho_g_ = Ag_ && Ag_->orthonormal_set();
    Wb_.assign(G_, 0.0);
    std::vector<double> tall(n_, 0.0);
    std::vector<std::vector<double>> tb(G_, std::vector<double>(n_, 0.0));
    for (const auto& r : rows_) {
      if (r.target.size() != n_) throw ArgumentError("omp: row target length mismatch");
      if (!(r.weight >= 0.0)) throw ArgumentError("omp: row weights must be nonnegative");
      if (G_ > 0 && r.block >= G_) throw ArgumentError("omp: row block index out of range");
      const double w2 = r.weight * r.weight;
      Wall_ += w2;
      if (G_ > 0) Wb_[r.block] += w2;
      T_ += w2 * dot(r.target, r.target);
      for (std::size_t t = 0; t < n_; ++t) tall[t] += w2 * r.target[t];
      if (G_ > 0)
        for (std::size_t t = 0; t < n_; ++t) tb[r.block][t] += w2 * r.target[t];
    }
    if (!(Wall_ > 0.0)) throw ArgumentError("omp: all row weights are zero");
    bf_ = Af_.analyze(tall);
    bg_.resize(G_);
    for (std::size_t b = 0; b < G_; ++b) bg_[b] = Ag_->analyze(tb[b]);
    yf_.assign(mf_, 0.0);
    yg_.assign(G_, std::vector<double>(mg_, 0.0));
    blocked_.assign(mf_ + G_ * mg_, 0);
  }

  OmpResult run() {
    OmpResult res;
    double r2 = T_;
    res.residual_history.push_back(std::sqrt(std::max(0.0, r2)));
    std::vector<double> cf = bf_;
    std::vector<std::vector<double>> cg = bg_;
    res.stop = StopReason::max_iterations;
    std::size_t accepted = 0;
    while (true) {
      if (accepted == 0 && res.residual_history.back() <= cfg_.residual_target) {
        res.stop = StopReason::residual_target;
        break;
      }
      if (accepted >= cfg_.max_iterations) {
        res.stop = StopReason::max_iterations;
        break;
      }
      // Select, skipping atoms rejected as numerically dependent.
      bool added = false;
      while (!added) {
        const auto [k, score] = select(cf, cg);
        if (score <= cfg_.zero_threshold) break;
        added = add_atom(k);
        blocked_[k] = 1;
      }
      if (!added) {
        res.stop = StopReason::no_correlation;
        break;
      }
      ++accepted;
      if (cfg_.refit == RefitMethod::cholesky) {
        back_solve();
        const double zn = z_.back();
        r2 -= zn * zn;
      } else {
        cg_refit();
      }
      scatter();
      normal_apply(yf_, yg_, cf, cg);
      for (std::size_t k = 0; k < mf_; ++k) cf[k] = bf_[k] - cf[k];
      for (std::size_t b = 0; b < G_; ++b)
        for (std::size_t q = 0; q < mg_; ++q) cg[b][q] = bg_[b][q] - cg[b][q];
      double r = std::sqrt(std::max(0.0, r2));
      // The downdated r2 loses all digits near zero; recompute there.
      if (cfg_.refit == RefitMethod::conjugate_gradient || r2 < 1e-8 * T_) {
        r = explicit_residual();
        r2 = r * r;
      }
      res.residual_history.push_back(r);
      if (r <= 2.0 * cfg_.residual_target && explicit_residual() <= cfg_.residual_target) {
        res.stop = StopReason::residual_target;
        break;
      }
    }
    res.selected = active_;
    res.coeffs = CoeffBlock(yf_, yg_);
    res.row_residuals = row_residuals();
    res.final_residual = explicit_residual();
    return res;
  }

 private:
  std::pair<std::size_t, double> select(const std::vector<double>& cf,
                                        const std::vector<std::vector<double>>& cg) const {
    std::size_t best = 0;
    double score = -1.0;
    const double nf = std::sqrt(Wall_);
    for (std::size_t k = 0; k < mf_; ++k) {
      if (blocked_[k]) continue;
      const double s = std::abs(cf[k]) / nf;
      if (s > score) {
        score = s;
        best = k;
      }
    }
    for (std::size_t b = 0; b < G_; ++b) {
      if (!(Wb_[b] > 0.0)) continue;
      const double nb = std::sqrt(Wb_[b]);
      const std::size_t base = mf_ + b * mg_;
      for (std::size_t q = 0; q < mg_; ++q) {
        if (blocked_[base + q]) continue;
        const double s = std::abs(cg[b][q]) / nb;
        if (s > score) {
          score = s;
          best = base + q;
        }
      }
    }
    return {best, score};
  }

  bool is_f(std::size_t k) const { return k < mf_; }
  std::size_t block_of(std::size_t k) const { return (k - mf_) / mg_; }
  std::size_t local_of(std::size_t k) const { return is_f(k) ? k : (k - mf_) % mg_; }
  double weight_of(std::size_t k) const { return is_f(k) ? Wall_ : Wb_[block_of(k)]; }
  double rhs_of(std::size_t k) const { return is_f(k) ? bf_[k] : bg_[block_of(k)][local_of(k)]; }

  // Gram entry between new atom k and active atom p, given k's inner products.
  double gram(std::size_t k, std::size_t p, const std::vector<double>& uf, const std::vector<double>& ug) const {
    if (is_f(k) && is_f(p)) return Wall_ * uf[p];
    if (is_f(k)) return Wb_[block_of(p)] * ug[local_of(p)];
    if (is_f(p)) return Wb_[block_of(k)] * uf[p];
    if (block_of(k) != block_of(p)) return 0.0;
    return Wb_[block_of(k)] * ug[local_of(p)];
  }

  bool add_atom(std::size_t k) {
    const std::size_t loc = local_of(k);
    const auto v = is_f(k) ? Af_.atom(loc) : Ag_->atom(loc);
    std::vector<double> uf, ug;
    const bool need_uf = !is_f(k) || !ortho_f_;
    const bool need_ug = mg_ > 0 && (is_f(k) || !ortho_g_);
    if (need_uf) {
      uf = Af_.analyze(v);
    } else {
      uf.assign(mf_, 0.0);
      uf[loc] = 1.0;
    }
    if (need_ug) {
      ug = Ag_->analyze(v);
    } else if (mg_ > 0) {
      ug.assign(mg_, 0.0);
      ug[loc] = 1.0;
    }
    const double gnn = weight_of(k) * dot(v, v);
    const std::size_t na = active_.size();
    if (cfg_.refit == RefitMethod::cholesky) {
      std::vector<double> l(na);
      for (std::size_t i = 0; i < na; ++i) {
        double s = gram(k, active_[i], uf, ug);
        const double* Li = L_.data() + i * (i + 1) / 2;
        for (std::size_t j = 0; j < i; ++j) s -= Li[j] * l[j];
        l[i] = s / Li[i];
      }
      double piv2 = gnn;
      for (double x : l) piv2 -= x * x;
      if (piv2 <= cfg_.refit_tolerance * gnn) return false;
      const double piv = std::sqrt(piv2);
      L_.insert(L_.end(), l.begin(), l.end());
      L_.push_back(piv);
      double zn = rhs_of(k);
      for (std::size_t j = 0; j < na; ++j) zn -= l[j] * z_[j];
      z_.push_back(zn / piv);
    }
    active_.push_back(k);
    x_.push_back(0.0);
    return true;
  }

  void back_solve() {
    const std::size_t na = active_.size();
    x_.assign(na, 0.0);
    for (std::size_t ii = na; ii-- > 0;) {
      double s = z_[ii];
      for (std::size_t j = ii + 1; j < na; ++j) s -= L_[j * (j + 1) / 2 + ii] * x_[j];
      x_[ii] = s / L_[ii * (ii + 1) / 2 + ii];
    }
  }

  void scatter() {
    std::fill(yf_.begin(), yf_.end(), 0.0);
    for (auto& g : yg_) std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < active_.size(); ++i) {
      const std::size_t k = active_[i];
      if (is_f(k))
        yf_[k] = x_[i];
      else
        yg_[block_of(k)][local_of(k)] = x_[i];
    }
  }

  // The normal operator A^T W^2 A applied to (yf, yg).
  void normal_apply(const std::vector<double>& yf, const std::vector<std::vector<double>>& yg,
                    std::vector<double>& of, std::vector<std::vector<double>>& og) const {
    const auto F = Af_.synthesize(yf);
    of = ortho_f_ ? yf : Af_.analyze(F);
    for (auto& v : of) v *= Wall_;
    og.assign(G_, {});
    if (G_ == 0) return;
    std::vector<double> comb(mg_, 0.0);
    for (std::size_t b = 0; b < G_; ++b)
      for (std::size_t q = 0; q < mg_; ++q) comb[q] += Wb_[b] * yg[b][q];
    const auto S = Ag_->synthesize(comb);
    const auto AfS = Af_.analyze(S);
    for (std::size_t k = 0; k < mf_; ++k) of[k] += AfS[k];
    const auto AgF = Ag_->analyze(F);
    for (std::size_t b = 0; b < G_; ++b) {
      og[b] = ortho_g_ ? yg[b] : Ag_->analyze(Ag_->synthesize(yg[b]));
      for (std::size_t q = 0; q < mg_; ++q) og[b][q] = Wb_[b] * (og[b][q] + AgF[q]);
    }
  }

  void cg_refit() {
    const std::size_t na = active_.size();
    std::vector<double> b(na);
    for (std::size_t i = 0; i < na; ++i) b[i] = rhs_of(active_[i]);
    auto apply = [&](const std::vector<double>& x) {
      std::vector<double> yf(mf_, 0.0), of;
      std::vector<std::vector<double>> yg(G_, std::vector<double>(mg_, 0.0)), og;
      for (std::size_t i = 0; i < na; ++i) {
        const std::size_t k = active_[i];
        if (is_f(k))
          yf[k] = x[i];
        else
          yg[block_of(k)][local_of(k)] = x[i];
      }
      normal_apply(yf, yg, of, og);
      std::vector<double> out(na);
      for (std::size_t i = 0; i < na; ++i) {
        const std::size_t k = active_[i];
        out[i] = is_f(k) ? of[k] : og[block_of(k)][local_of(k)];
      }
      return out;
    };
    const double bn = norm2(b);
    if (bn == 0.0) {
      std::fill(x_.begin(), x_.end(), 0.0);
      return;
    }
    auto Ax = apply(x_);
    std::vector<double> r(na), p(na);
    for (std::size_t i = 0; i < na; ++i) r[i] = b[i] - Ax[i];
    p = r;
    double rr = dot(r, r);
    const std::size_t cap = 10 * na + 100;
    for (std::size_t it = 0; it < cap && std::sqrt(rr) > cfg_.refit_tolerance * bn; ++it) {
      const auto Ap = apply(p);
      const double pAp = dot(p, Ap);
      if (!(pAp > 0.0)) break;
      const double alpha = rr / pAp;
      for (std::size_t i = 0; i < na; ++i) {
        x_[i] += alpha * p[i];
        r[i] -= alpha * Ap[i];
      }
      const double rr2 = dot(r, r);
      const double beta = rr2 / rr;
      rr = rr2;
      for (std::size_t i = 0; i < na; ++i) p[i] = r[i] + beta * p[i];
    }
  }

  std::vector<double> row_residuals() const {
    const auto F = Af_.synthesize(yf_);
    std::vector<std::vector<double>> Gb(G_);
    for (std::size_t b = 0; b < G_; ++b) Gb[b] = Ag_->synthesize(yg_[b]);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) {
      double s = 0.0;
      for (std::size_t t = 0; t < n_; ++t) {
        const double e = r.target[t] - F[t] - (G_ > 0 ? Gb[r.block][t] : 0.0);
        s += e * e;
      }
      out.push_back(std::sqrt(s));
    }
    return out;
  }

  double explicit_residual() const {
    const auto rr = row_residuals();
    double s = 0.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) s += rows_[i].weight * rows_[i].weight * rr[i] * rr[i];
    return std::sqrt(s);
  }

  const Dictionary& Af_;
  const std::optional<Dictionary>& Ag_;
  const std::vector<WeightedRow>& rows_;
  std::size_t G_;
  OmpConfig cfg_;
  std::size_t n_ = 0, mf_ = 0, mg_ = 0;
  bool ortho_f_ = false, ortho_g_ = false;
  double Wall_ = 0.0, T_ = 0.0;
  std::vector<double> Wb_;
  std::vector<double> bf_;
  std::vector<std::vector<double>> bg_;
  std::vector<double> yf_;
  std::vector<std::vector<double>> yg_;
  std::vector<char> blocked_;
  std::vector<std::size_t> active_;
  std::vector<double> L_, z_, x_;
};

}  // namespace

OmpResult omp_weighted(const Dictionary& A_f, const std::optional<Dictionary>& A_g,
                       const std::vector<WeightedRow>& rows, std::size_t block_count, const OmpConfig& cfg) {
  Engine e(A_f, A_g, rows, block_count, cfg);
  return e.run();
}

OmpSingleResult omp_single(const Dictionary& D, std::span<const double> f, const OmpConfig& cfg) {
  if (f.size() != D.n()) throw ArgumentError("omp_single: signal length mismatch");
  std::vector<WeightedRow> rows{{1.0, std::vector<double>(f.begin(), f.end()), 0}};
  auto r = omp_weighted(D, std::nullopt, rows, 0, cfg);
  return {r.coeffs.y_f(), std::move(r.residual_history), std::move(r.selected), r.stop};
}

OmpResult omp_block(const StackedSystem& sys, const OmpConfig& cfg) {
  std::vector<WeightedRow> rows;
  rows.reserve(sys.N());
  for (std::size_t i = 0; i < sys.N(); ++i) rows.push_back({1.0, sys.h()[i], i});
  std::optional<Dictionary> Ag = sys.A_g();
  return omp_weighted(sys.A_f(), Ag, rows, sys.N(), cfg);
}

OmpResult omp_block_penalized(const StackedSystem& sys, const OmpConfig& cfg, const PenaltyTerms& extra) {
  if (!(extra.lambda1 > 0.0) || !(extra.lambda2 >= 0.0))
    throw ArgumentError("omp_block_penalized: lambda1 must be > 0 and lambda2 >= 0");
  if (extra.h0.size() != sys.N()) throw ArgumentError("omp_block_penalized: need one h0 per measurement");
  const std::size_t N = sys.N();
  std::vector<WeightedRow> rows;
  rows.reserve(2 * N);
  for (std::size_t i = 0; i < N; ++i) rows.push_back({extra.lambda1, sys.h()[i], i});
  for (std::size_t i = 0; i < N; ++i) {
    if (extra.h0[i].size() != sys.A_f().n()) throw ArgumentError("omp_block_penalized: h0 length mismatch");
    rows.push_back({extra.lambda2, extra.h0[i], N});
  }
  std::optional<Dictionary> Ag = sys.A_g();
  return omp_weighted(sys.A_f(), Ag, rows, N + 1, cfg);
}

}  // namespace dsep
