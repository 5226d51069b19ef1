#include "qdisk/dirac.hpp"

#include <cmath>

namespace qdisk {

ModeContext context_from(const PowerLawFamily& family) {
  return ModeContext{family.beta(), family.mu(), family.w(), family.wprime()};
}

LogScalar log_prod_beta(const Sequence& beta, long start, long count) {
  LogScalar p;
  for (long i = 0; i < count; ++i) {
    cplx b = beta(start + i);
    if (std::abs(b) == 0.0)
      throw singular_symbol_error("beta vanishes at k = " + std::to_string(start + i));
    p = p.times(LogScalar::of(b));
  }
  return p;
}

namespace {

// bidiagonal stencil coefficients: D_n f(k) = p(k) f(k) + s(k) f(k+sigma)
struct Stencil {
  long sigma;
  std::function<cplx(long)> p;
  std::function<cplx(long)> s;  // defined for the indices the formulas use
};

Stencil stencil_for(long n, const ModeContext& ctx) {
  const Sequence beta = ctx.beta;
  const Sequence mu = ctx.mu;
  if (n >= 0) {
    return Stencil{
        +1,
        [beta, n](long k) { return beta(k + n); },
        [beta, mu](long k) { return -beta(k) * mu(k + 1) / mu(k); },
    };
  }
  // signs follow from D f = U beta(K) f - f U alpha(K) applied to
  // f(K)(U*)^{-n} directly; the shift term enters with +beta(k-1)
  return Stencil{
      -1,
      [beta, mu, n](long k) { return -beta(k - n - 1) * mu(k - n) / mu(k - n - 1); },
      [beta](long k) { return beta(k - 1); },  // k >= 1; f(-1) = 0 at k = 0
  };
}

// prod_{i<count} beta(k0+i)/beta(j0+i); factor-wise O(1) quotients keep the
// relative error near machine precision across the parametrix dynamic range
cplx prod_beta_ratio(const Sequence& beta, long k0, long j0, long count) {
  cplx r = 1.0;
  for (long i = 0; i < count; ++i) {
    cplx den = beta(j0 + i);
    if (std::abs(den) == 0.0)
      throw singular_symbol_error("beta vanishes at k = " + std::to_string(j0 + i));
    r *= beta(k0 + i) / den;
  }
  return r;
}

}  // namespace

std::vector<cplx> apply_mode(long n, std::span<const cplx> f, const ModeContext& ctx) {
  Stencil st = stencil_for(n, ctx);
  long flen = long(f.size());
  long out_len = n >= 0 ? flen : flen + 1;
  std::vector<cplx> out(size_t(std::max(out_len, 0L)), cplx(0.0));
  for (long k = 0; k < out_len; ++k) {
    cplx v = 0.0;
    if (k < flen) v += st.p(k) * f[size_t(k)];
    long ks = k + st.sigma;
    if (ks >= 0 && ks < flen && (st.sigma > 0 || k >= 1)) v += st.s(k) * f[size_t(ks)];
    out[size_t(k)] = v;
  }
  return out;
}

GnsVector apply_D(const GnsVector& f, const ModeContext& ctx) {
  GnsVector out;
  for (const auto& [n, fc] : f.components()) {
    auto d = apply_mode(n, fc, ctx);
    for (long k = 0; k < long(d.size()); ++k)
      if (d[size_t(k)] != cplx(0.0)) out.add_to(n + 1, k, d[size_t(k)]);
  }
  out.trim();
  return out;
}

std::vector<cplx> adjoint_apply(long n, std::span<const cplx> g, const ModeContext& ctx) {
  Stencil st = stencil_for(n, ctx);
  long glen = long(g.size());
  long out_len = st.sigma > 0 ? glen + 1 : glen;
  std::vector<cplx> out(size_t(std::max(out_len, 0L)), cplx(0.0));
  for (long m = 0; m < out_len; ++m) {
    cplx v = 0.0;
    if (m < glen) v += ctx.cod_weight(n, m) * std::conj(st.p(m)) * g[size_t(m)];
    long ms = m - st.sigma;  // index k with k + sigma = m
    if (ms >= 0 && ms < glen && (st.sigma > 0 || ms >= 1))
      v += ctx.cod_weight(n, ms) * std::conj(st.s(ms)) * g[size_t(ms)];
    out[size_t(m)] = v / ctx.dom_weight(n, m);
  }
  return out;
}

GnsVector apply_D_star(const GnsVector& g, const ModeContext& ctx) {
  GnsVector out;
  for (const auto& [m, gc] : g.components()) {
    auto d = adjoint_apply(m - 1, gc, ctx);
    for (long k = 0; k < long(d.size()); ++k)
      if (d[size_t(k)] != cplx(0.0)) out.add_to(m - 1, k, d[size_t(k)]);
  }
  out.trim();
  return out;
}

KernelVector::KernelVector(long n, const ModeContext& ctx)
    : n_(n), beta_(ctx.beta), mu_(ctx.mu) {
  if (n < 0) throw std::domain_error("kernel vectors exist for n >= 0 only");
}

cplx KernelVector::operator()(long k) const {
  LogScalar p = log_prod_beta(beta_, k, n_);
  return p.over(LogScalar::of(mu_(k))).value();
}

std::vector<cplx> KernelVector::truncated(long K) const {
  std::vector<cplx> v(size_t(K) + 1);
  for (long k = 0; k <= K; ++k) v[size_t(k)] = (*this)(k);
  return v;
}

MembershipVerdict kernel_membership(long n, const ModeContext& ctx) {
  bool diverges = kernel_sum_diverges(n, ctx.mu, ctx.w);
  KernelVector h(n, ctx);
  double s1 = 0.0, s2 = 0.0;
  for (long k = 0; k <= 10000; ++k) {
    double t = std::norm(h(k)) * ctx.w(k);
    s1 += t;
  }
  s2 = s1;
  for (long k = 10001; k <= 100000; ++k) s2 += std::norm(h(k)) * ctx.w(k);
  return MembershipVerdict{!diverges, s2, s1 > 0.0 ? s2 / s1 : 1.0};
}

ModeParametrix::ModeParametrix(long n, long N, const ModeContext& ctx)
    : n_(n), N_(N), ctx_(ctx) {
  if (N < 0) throw std::domain_error("N must be >= 0");
  if (n < 0)
    regime_ = ParametrixRegime::LowerInverse;
  else if (n >= N)
    regime_ = ParametrixRegime::Inverse;
  else
    regime_ = ParametrixRegime::Corrected;
  if (n >= 0 && std::abs(ctx.mu(0)) == 0.0)
    throw singular_symbol_error("mu vanishes at k = 0");
}

cplx ModeParametrix::base_entry(long k, long j) const {
  cplx e;
  if (n_ >= 0) {
    if (j < k) return cplx(0.0);
    e = prod_beta_ratio(ctx_.beta, k, j, n_) * ctx_.mu(j) /
        (ctx_.mu(k) * ctx_.beta(j + n_));
  } else {
    if (j > k) return cplx(0.0);
    long m = -n_;
    e = -prod_beta_ratio(ctx_.beta, j, k, m - 1) * ctx_.mu(j + m - 1) /
        (ctx_.mu(k + m) * ctx_.beta(k + m - 1));
  }
  if (std::isfinite(std::abs(e))) return e;
  // log-space fallback for extreme dynamic ranges
  if (n_ >= 0) {
    LogScalar num = log_prod_beta(ctx_.beta, k, n_).times(LogScalar::of(ctx_.mu(j)));
    LogScalar den = log_prod_beta(ctx_.beta, j, n_ + 1).times(LogScalar::of(ctx_.mu(k)));
    return num.over(den).value();
  }
  long m = -n_;
  LogScalar num = log_prod_beta(ctx_.beta, j, m - 1).times(LogScalar::of(ctx_.mu(j + m - 1)));
  LogScalar den = log_prod_beta(ctx_.beta, k, m).times(LogScalar::of(ctx_.mu(k + m)));
  return -num.over(den).value();
}

cplx ModeParametrix::entry(long k, long j) const {
  if (regime_ != ParametrixRegime::Corrected) return base_entry(k, j);
  // rank-1 correction: subtract (Q~g(0)/(beta(0)...beta(n-1))) h^{(n)}(k).
  // The correction factor against the triangular part collapses algebraically:
  // (h(k)/prodbeta(0,n)) * base(0,j) = base(k,j)/mu(0) whenever j >= k, so the
  // cancellation is carried out exactly instead of in floating point.
  if (j >= k) return base_entry(k, j) * (1.0 - 1.0 / ctx_.mu(0));
  cplx c = prod_beta_ratio(ctx_.beta, k, 0, n_) / ctx_.mu(k);
  return -c * base_entry(0, j);
}

std::vector<cplx> ModeParametrix::apply(std::span<const cplx> g, long out_len) const {
  long glen = long(g.size());
  std::vector<cplx> out(size_t(std::max(out_len, 0L)), cplx(0.0));
  for (long k = 0; k < out_len; ++k) {
    cplx v = 0.0;
    long j_lo = 0, j_hi = glen - 1;
    if (regime_ == ParametrixRegime::Inverse) j_lo = k;
    if (regime_ == ParametrixRegime::LowerInverse) j_hi = std::min(j_hi, k);
    for (long j = j_lo; j <= j_hi; ++j) v += entry(k, j) * g[size_t(j)];
    out[size_t(k)] = v;
  }
  return out;
}

std::vector<cplx> ModeParametrix::defect_apply(std::span<const cplx> f, long out_len) const {
  std::vector<cplx> out(size_t(std::max(out_len, 0L)), cplx(0.0));
  if (regime_ != ParametrixRegime::Corrected || f.empty()) return out;
  for (long k = 0; k < out_len; ++k)
    out[size_t(k)] = f[0] * prod_beta_ratio(ctx_.beta, k, 0, n_) / ctx_.mu(k);
  return out;
}

ModeParametrix build_parametrix(long n, long N, const ModeContext& ctx) {
  return ModeParametrix(n, N, ctx);
}

Eigen::MatrixXcd mode_matrix(long n, long K, const ModeContext& ctx) {
  Stencil st = stencil_for(n, ctx);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(K + 1, K + 1);
  for (long k = 0; k <= K; ++k) {
    double wc = ctx.cod_weight(n, k);
    M(k, k) = st.p(k) * std::sqrt(wc / ctx.dom_weight(n, k));
    long ks = k + st.sigma;
    if (ks >= 0 && ks <= K && (st.sigma > 0 || k >= 1))
      M(k, ks) = st.s(k) * std::sqrt(wc / ctx.dom_weight(n, ks));
  }
  return M;
}

Eigen::MatrixXcd DiracAssembly::represent_pi(const ToeplitzElement& a) const {
  long dim = 2 * block_dim();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
  for (int comp = 0; comp < 2; ++comp) {
    const WeightSequence& wt = comp == 0 ? ctx.wprime : ctx.w;
    WeightedSpace space{wt};
    for (long n = n_min; n <= n_max; ++n) {
      for (long k = 0; k <= K; ++k) {
        GnsVector v = act(a, GnsVector::basis(n, k));
        double wd = space.weight_at(n, k);
        for (const auto& [np, cv] : v.components()) {
          if (np < n_min || np > n_max) continue;
          for (long j = 0; j < long(cv.size()) && j <= K; ++j) {
            cplx val = cv[size_t(j)];
            if (val == cplx(0.0)) continue;
            P(index(comp, np, j), index(comp, n, k)) +=
                val * std::sqrt(space.weight_at(np, j) / wd);
          }
        }
      }
    }
  }
  return P;
}

DiracAssembly assemble(long K, long n_min, long n_max, const ModeContext& ctx) {
  if (K < 8) throw std::domain_error("assembly needs K >= 8");
  if (n_min > n_max) throw std::domain_error("empty mode window");
  DiracAssembly A{K, n_min, n_max, ctx, {}, {}};
  long bd = A.block_dim();
  long dim = 2 * bd;
  A.dirac = Eigen::MatrixXcd::Zero(dim, dim);
  A.grading = Eigen::VectorXd::Ones(dim);
  A.grading.segment(bd, bd).setConstant(-1.0);

  WeightedSpace dom{ctx.w}, cod{ctx.wprime};

  // upper block: D from the mode stencils, H_w -> H_{w'}
  for (long n = n_min; n <= n_max; ++n) {
    if (n + 1 < n_min || n + 1 > n_max) continue;
    for (long k = 0; k <= K; ++k) {
      std::vector<cplx> e(size_t(k) + 1, cplx(0.0));
      e[size_t(k)] = 1.0;
      auto d = apply_mode(n, e, ctx);
      double wd = dom.weight_at(n, k);
      for (long j = 0; j < long(d.size()) && j <= K; ++j) {
        if (d[size_t(j)] == cplx(0.0)) continue;
        A.dirac(A.index(0, n + 1, j), A.index(1, n, k)) +=
            d[size_t(j)] * std::sqrt(cod.weight_at(n + 1, j) / wd);
      }
    }
  }

  // lower block: D* from the independent weighted-transpose formulas
  for (long m = n_min; m <= n_max; ++m) {
    if (m - 1 < n_min || m - 1 > n_max) continue;
    for (long k = 0; k <= K; ++k) {
      std::vector<cplx> e(size_t(k) + 1, cplx(0.0));
      e[size_t(k)] = 1.0;
      auto d = adjoint_apply(m - 1, e, ctx);
      double wc = cod.weight_at(m, k);
      for (long j = 0; j < long(d.size()) && j <= K; ++j) {
        if (d[size_t(j)] == cplx(0.0)) continue;
        A.dirac(A.index(1, m - 1, j), A.index(0, m, k)) +=
            d[size_t(j)] * std::sqrt(dom.weight_at(m - 1, j) / wc);
      }
    }
  }
  return A;
}

}  // namespace qdisk
