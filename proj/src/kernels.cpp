#include "qdisk/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdisk::kernels {

namespace {

constexpr double kTailSafety = 1.3;

// prefix sums of log beta so triangular-kernel entries are O(1)
struct BetaPrefix {
  std::vector<double> lm, ph;

  BetaPrefix(const Sequence& beta, long horizon) {
    lm.resize(size_t(horizon) + 1, 0.0);
    ph.resize(size_t(horizon) + 1, 0.0);
    for (long i = 0; i < horizon; ++i) {
      cplx b = beta(i);
      if (std::abs(b) == 0.0)
        throw singular_symbol_error("beta vanishes at k = " + std::to_string(i));
      lm[size_t(i) + 1] = lm[size_t(i)] + std::log(std::abs(b));
      ph[size_t(i) + 1] = ph[size_t(i)] + std::arg(b);
    }
  }

  LogScalar prod(long start, long count) const {
    return {lm[size_t(start + count)] - lm[size_t(start)],
            ph[size_t(start + count)] - ph[size_t(start)]};
  }
};

// integral-comparison tail: sum_{x>J} t(x) <= t(J)*(1+J)/(-e-1) when
// t decays like (1+x)^e with e < -1
bool power_tail(double tJ, long J, double tJd, long Jd, double* tail) {
  if (tJ <= 0.0) {
    *tail = 0.0;
    return true;
  }
  if (tJd <= 0.0 || J <= Jd) return false;
  double e = std::log(tJ / tJd) / std::log((1.0 + double(J)) / (1.0 + double(Jd)));
  if (e >= -1.0) return false;
  *tail = kTailSafety * tJ * (1.0 + double(J)) / (-e - 1.0);
  return true;
}

struct RowValue {
  double value = 0.0;
  bool finite = true;
};

// one row of the HS double sum at fixed k, j-tail bound included
RowValue hs_row(const ModeParametrix& q, const BetaPrefix& bp, long k,
                const SumOptions& opt) {
  const ModeContext& ctx = q.ctx();
  long n = q.mode();
  RowValue r;

  auto mu_log = [&ctx](long j) { return LogScalar::of(ctx.mu(j)); };
  auto qt = [&](long kk, long j) {
    return bp.prod(kk, n).times(mu_log(j)).over(bp.prod(j, n + 1).times(mu_log(kk))).value();
  };

  if (n < 0) {
    long m = -n;
    auto lower = [&](long kk, long j) {
      return bp.prod(j, m - 1)
          .times(mu_log(j + m - 1))
          .over(bp.prod(kk, m).times(mu_log(kk + m)))
          .value();
    };
    for (long j = 0; j <= k; ++j)
      r.value += std::norm(lower(k, j)) * ctx.w(k + m) / ctx.wprime(j + m - 1);
    return r;  // finite row, no j-tail
  }

  bool corrected = q.regime() == ParametrixRegime::Corrected;
  cplx upper_scale = 1.0;
  if (corrected) {
    // the rank-1 correction cancels the triangular part up to 1 - 1/mu(0)
    // (exactly zero for the paper normalization mu(0) = 1) and contributes
    // -ck qt(0, j) strictly below the diagonal
    cplx ck = bp.prod(k, n).over(mu_log(k).times(bp.prod(0, n))).value();
    for (long j = 0; j < k; ++j)
      r.value += std::norm(ck * qt(0, j)) * ctx.w(k) / ctx.wprime(j);
    upper_scale = 1.0 - 1.0 / ctx.mu(0);
    if (std::abs(upper_scale) == 0.0) return r;
  }

  long chunk = long(opt.chunk_stretch * double(k)) + 64;
  long j_hi = k + chunk;
  double t_last = 0.0, t_prev = 0.0;
  long delta = std::max(1L, chunk / 8);
  for (long j = k; j <= j_hi; ++j) {
    cplx e = upper_scale * qt(k, j);
    double t = std::norm(e) * ctx.w(k) / ctx.wprime(j);
    r.value += t;
    if (j == j_hi) t_last = t;
    if (j == j_hi - delta) t_prev = t;
  }
  double tail;
  if (!power_tail(t_last, j_hi, t_prev, j_hi - delta, &tail)) {
    r.finite = false;
    return r;
  }
  r.value += tail;
  return r;
}

SumResult accumulate_rows(const std::vector<RowValue>& rows) {
  SumResult res;
  res.finite = true;
  long kmax = long(rows.size()) - 1;
  for (const auto& rv : rows) {
    if (!rv.finite) {
      res.finite = false;
      return res;
    }
    res.value += rv.value;
  }
  long delta = std::max(1L, kmax / 8);
  double tail;
  if (!power_tail(rows[size_t(kmax)].value, kmax, rows[size_t(kmax - delta)].value,
                  kmax - delta, &tail)) {
    res.finite = false;
    return res;
  }
  res.tail = tail;
  return res;
}

long hs_horizon(long n, const SumOptions& opt) {
  return long((1.0 + opt.chunk_stretch) * double(opt.max_rows)) + 64 + std::labs(n) + 2;
}

RowValue six_row(const ModeContext& ctx, long k, const SumOptions& opt) {
  RowValue r;
  auto term = [&](long j) {
    double mx = double(std::max(j, k)) + 1.0;
    return std::norm(ctx.mu(j) / ctx.mu(k)) * ctx.w(k) / ctx.wprime(j) / (mx * mx);
  };
  long chunk = long(opt.chunk_stretch * double(k)) + 64;
  long j_hi = k + chunk;
  long delta = std::max(1L, chunk / 8);
  double t_last = 0.0, t_prev = 0.0;
  for (long j = 0; j <= j_hi; ++j) {
    double t = term(j);
    r.value += t;
    if (j == j_hi) t_last = t;
    if (j == j_hi - delta) t_prev = t;
  }
  double tail;
  if (!power_tail(t_last, j_hi, t_prev, j_hi - delta, &tail)) {
    r.finite = false;
    return r;
  }
  r.value += tail;
  return r;
}

}  // namespace

SumResult hs_squared(const ModeParametrix& q, const SumOptions& opt) {
  BetaPrefix bp(q.ctx().beta, hs_horizon(q.mode(), opt));
  std::vector<RowValue> rows(size_t(opt.max_rows) + 1);
#pragma omp parallel for schedule(dynamic, 16)
  for (long k = 0; k <= opt.max_rows; ++k) rows[size_t(k)] = hs_row(q, bp, k, opt);
  return accumulate_rows(rows);
}

SumResult hs_squared_serial(const ModeParametrix& q, const SumOptions& opt) {
  BetaPrefix bp(q.ctx().beta, hs_horizon(q.mode(), opt));
  std::vector<RowValue> rows(size_t(opt.max_rows) + 1);
  for (long k = 0; k <= opt.max_rows; ++k) rows[size_t(k)] = hs_row(q, bp, k, opt);
  return accumulate_rows(rows);
}

SumResult condition_six(const ModeContext& ctx, const SumOptions& opt) {
  std::vector<RowValue> rows(size_t(opt.max_rows) + 1);
#pragma omp parallel for schedule(dynamic, 16)
  for (long k = 0; k <= opt.max_rows; ++k) rows[size_t(k)] = six_row(ctx, k, opt);
  return accumulate_rows(rows);
}

SumResult condition_six_serial(const ModeContext& ctx, const SumOptions& opt) {
  std::vector<RowValue> rows(size_t(opt.max_rows) + 1);
  for (long k = 0; k <= opt.max_rows; ++k) rows[size_t(k)] = six_row(ctx, k, opt);
  return accumulate_rows(rows);
}

namespace {

HsResult hs_from_sum(const SumResult& s) {
  HsResult h;
  h.finite = s.finite;
  if (!s.finite) return h;
  h.value = std::sqrt(s.value);
  h.tail_bound = std::sqrt(s.value + s.tail) - h.value;
  return h;
}

}  // namespace

std::vector<HsResult> hs_sweep(long n_min, long n_max, long N, const ModeContext& ctx,
                               const SumOptions& opt) {
  std::vector<HsResult> out(size_t(n_max - n_min + 1));
#pragma omp parallel for schedule(dynamic)
  for (long n = n_min; n <= n_max; ++n) {
    ModeParametrix q(n, N, ctx);
    out[size_t(n - n_min)] = hs_from_sum(hs_squared_serial(q, opt));
  }
  return out;
}

std::vector<HsResult> hs_sweep_serial(long n_min, long n_max, long N,
                                      const ModeContext& ctx, const SumOptions& opt) {
  std::vector<HsResult> out(size_t(n_max - n_min + 1));
  for (long n = n_min; n <= n_max; ++n) {
    ModeParametrix q(n, N, ctx);
    out[size_t(n - n_min)] = hs_from_sum(hs_squared_serial(q, opt));
  }
  return out;
}

}  // namespace qdisk::kernels

namespace qdisk {

HsResult hs_norm(const ModeParametrix& q, double) {
  return kernels::hs_from_sum(kernels::hs_squared(q));
}

}  // namespace qdisk
