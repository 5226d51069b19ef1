#include "qdisk/analysis.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include <cmath>
#include <random>

namespace qdisk {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "inconclusive";
  }
}

GnsVector random_vector(std::uint64_t seed, long n_min, long n_max, long support) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GnsVector f;
  for (long n = n_min; n <= n_max; ++n) {
    std::vector<cplx> c(static_cast<size_t>(support));
    for (auto& z : c) z = cplx(u(rng), u(rng));
    f.set_mode(n, std::move(c));
  }
  return f;
}

ToeplitzElement random_element(std::uint64_t seed, long max_mode, long prefix_len) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ToeplitzElement a;
  for (long n = -max_mode; n <= max_mode; ++n) {
    std::vector<cplx> prefix(static_cast<size_t>(prefix_len));
    for (auto& z : prefix) z = cplx(u(rng), u(rng));
    cplx tail(u(rng), u(rng));
    a.add_term(n, DiagonalSymbol::table(std::move(prefix), tail));
  }
  return a;
}

namespace {

double local_exponent(double t1, long k1, double t2, long k2) {
  if (t1 <= 0.0 || t2 <= 0.0 || k1 == k2) return 0.0;
  return std::log(t2 / t1) / std::log((1.0 + double(k2)) / (1.0 + double(k1)));
}

ConditionReport condition_one(const ModeContext& ctx) {
  ConditionReport r;
  r.id = "one";
  Sequence alpha = ctx.alpha();
  auto term = [&](long k) {
    return std::norm(ctx.beta(k) - alpha(k)) * ctx.wprime(k);
  };
  const long H = 100000;
  double s = 0.0;
  for (long k = 0; k <= H; ++k) s += term(k);
  double e = local_exponent(term(H / 8), H / 8, term(H), H);
  if (e >= -1.0) {
    r.verdict = Verdict::Fails;
    r.partial_sum = s;
    r.detail = "terms decay with exponent " + std::to_string(e) + " >= -1";
    return r;
  }
  r.verdict = Verdict::Holds;
  r.partial_sum = s;
  r.tail_bound = 1.3 * term(H) * (1.0 + double(H)) / (-e - 1.0);
  return r;
}

ConditionReport condition_three(const ModeContext& ctx) {
  ConditionReport r;
  r.id = "three";
  Sequence alpha = ctx.alpha();
  for (long k = 0; k <= 100000; ++k) {
    if (std::abs(ctx.beta(k)) < 1e-14 || std::abs(alpha(k)) < 1e-14) {
      r.verdict = Verdict::Fails;
      r.witness = k;
      r.detail = "vanishing symbol value";
      return r;
    }
  }
  r.verdict = Verdict::Holds;
  r.detail = "nonvanishing on scan horizon";
  return r;
}

ConditionReport condition_five(const ModeContext& ctx) {
  ConditionReport r;
  r.id = "five";
  bool monotone = true;
  double prev = std::abs(ctx.beta(0));
  for (long k = 1; k <= 20000; ++k) {
    double cur = std::abs(ctx.beta(k));
    if (cur < 1e-14) {
      r.verdict = Verdict::Fails;
      r.witness = k;
      r.detail = "beta vanishes inside a product quotient";
      return r;
    }
    if (cur < prev) monotone = false;
    prev = cur;
  }
  if (std::abs(ctx.beta(0)) < 1e-14) {
    r.verdict = Verdict::Fails;
    r.witness = 0;
    return r;
  }
  if (monotone) {
    r.verdict = Verdict::Holds;
    r.partial_sum = 1.0;  // the constant
    r.detail = "|beta| nondecreasing, quotient bounded by 1";
    return r;
  }
  // sampled sup over a finite grid only
  double sup = 0.0;
  std::vector<double> lp(514, 0.0);
  for (long i = 0; i < 513; ++i) lp[size_t(i) + 1] = lp[size_t(i)] + std::log(std::abs(ctx.beta(i)));
  for (long n = 0; n <= 50; ++n)
    for (long k = 0; k < 460 - n; ++k)
      for (long j = k; j < 460 - n; ++j)
        sup = std::max(sup, std::exp((lp[size_t(k + n + 1)] - lp[size_t(k)]) -
                                     (lp[size_t(j + n + 1)] - lp[size_t(j)])));
  r.verdict = Verdict::Inconclusive;
  r.partial_sum = sup;
  r.detail = "non-monotone |beta|; sampled quotient sup reported";
  return r;
}

ConditionReport condition_six(const ModeContext& ctx) {
  ConditionReport r;
  r.id = "six";
  auto s = kernels::condition_six(ctx);
  r.partial_sum = s.value;
  r.tail_bound = s.tail;
  r.verdict = s.finite ? Verdict::Holds : Verdict::Fails;
  return r;
}

ConditionReport condition_seven(const ModeContext& ctx) {
  ConditionReport r;
  r.id = "seven";
  try {
    r.computed_N = divergence_oracle_N(ctx.mu, ctx.w);
    r.verdict = Verdict::Holds;
    r.detail = "kernel sums diverge from n = " + std::to_string(r.computed_N);
  } catch (const cannot_bound_error&) {
    r.verdict = Verdict::Inconclusive;
    r.detail = "no divergent mode found on the probed range";
  }
  return r;
}

}  // namespace

ConditionReport check_condition(const std::string& id, const ModeContext& ctx, double) {
  if (id == "one") return condition_one(ctx);
  if (id == "three") return condition_three(ctx);
  if (id == "five") return condition_five(ctx);
  if (id == "six") return condition_six(ctx);
  if (id == "seven") return condition_seven(ctx);
  throw std::invalid_argument("unknown condition id: " + id);
}

long kernel_dimension(const ModeContext& ctx) {
  // the kernel sums are monotone in n, so stop at the first divergent mode
  long dim = 0;
  for (long n = 0; n <= 64; ++n) {
    if (kernel_sum_diverges(n, ctx.mu, ctx.w)) break;
    ++dim;
  }
  return dim;
}

std::vector<double> singular_values(long n, long K, const ModeContext& ctx) {
  if (K < 8) throw std::domain_error("need K >= 8");
  long margin = std::max(4L, K / 50);
  Eigen::MatrixXcd M = mode_matrix(n, K, ctx);
  long m = K - margin + 1;
  Eigen::MatrixXcd interior = M.topLeftCorner(m, m);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(interior);
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
  return out;
}

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

double sparse_sigma_max(const SpMat& A) {
  if (A.nonZeros() == 0) return 0.0;
  Eigen::VectorXcd x = Eigen::VectorXcd::Ones(A.cols());
  x.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXcd y = A * x;
    double s = y.norm();
    x = A.adjoint() * y;
    double nx = x.norm();
    if (nx == 0.0) return 0.0;
    x /= nx;
    if (std::abs(s - sigma) <= 1e-13 * std::max(1.0, s) && it > 4) return s;
    sigma = s;
  }
  return sigma;
}

// Interior-windowed matrix of [D, pi(a)] on finitely supported basis vectors.
// The commutator agrees with pi(d(a)) coefficient-wise, so its columns are
// orthonormalized in a single weighted space; the two blocks of [Dirac, pi(a)]
// are covered by calling this with a (in w') and with a* (in w).
SpMat commutator_block(const ToeplitzElement& a, long K, const ModeContext& ctx,
                       long n_min, long n_max, const WeightSequence& wt) {
  WeightedSpace space{wt};

  long margin = std::max(4L, K / 50);
  long mode_margin = a.max_abs_mode() + 1;
  long cols = (n_max - n_min + 1) * (K + 1);
  std::vector<Eigen::Triplet<cplx>> trips;

  for (long n = n_min + mode_margin; n <= n_max - mode_margin; ++n) {
    for (long k = 0; k <= K - margin; ++k) {
      GnsVector e = GnsVector::basis(n, k).scaled(1.0 / std::sqrt(space.weight_at(n, k)));
      GnsVector v = apply_D(act(a, e), ctx) - act(a, apply_D(e, ctx));
      long col = (n - n_min) * (K + 1) + k;
      for (const auto& [np, cv] : v.components()) {
        if (np < n_min || np > n_max) continue;
        for (long j = 0; j < long(cv.size()) && j <= K - margin; ++j) {
          cplx val = cv[size_t(j)];
          if (val == cplx(0.0)) continue;
          trips.emplace_back(int((np - n_min) * (K + 1) + j), int(col),
                             val * std::sqrt(space.weight_at(np, j)));
        }
      }
    }
  }
  SpMat B(cols, cols);
  B.setFromTriplets(trips.begin(), trips.end());
  return B;
}

}  // namespace

double commutator_norm(const ToeplitzElement& a, long K, const ModeContext& ctx,
                       long n_min, long n_max) {
  double upper =
      sparse_sigma_max(commutator_block(a, K, ctx, n_min, n_max, ctx.wprime));
  double lower =
      sparse_sigma_max(commutator_block(a.adjoint(), K, ctx, n_min, n_max, ctx.w));
  return std::max(upper, lower);
}

namespace {

double sup_norm(const GnsVector& f) {
  double m = 0.0;
  for (const auto& [n, c] : f.components())
    for (const auto& z : c) m = std::max(m, std::abs(z));
  return m;
}

double vec_sup(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TripleReport verify_triple(const ModeContext& ctx, const Tolerances& tols,
                           std::uint64_t seed, long K, long mode_window) {
  TripleReport rep;
  auto fail = [&rep](const std::string& what) {
    if (rep.first_failure.empty()) rep.first_failure = what;
  };

  for (const char* id : {"one", "three", "five", "six", "seven"}) {
    rep.conditions.push_back(check_condition(id, ctx));
    if (rep.conditions.back().verdict == Verdict::Fails)
      fail("condition " + std::string(id));
  }
  long N = rep.conditions.back().computed_N;
  if (N < 0) N = kernel_dimension(ctx);

  rep.kernel_dim = kernel_dimension(ctx);
  rep.predicted_n = N;
  if (rep.kernel_dim != N) fail("kernel dimension != N");

  WeightedSpace dom{ctx.w}, cod{ctx.wprime};
  ToeplitzElement U = ToeplitzElement::shift();
  ToeplitzElement Ustar = ToeplitzElement::shift_adjoint();

  // implementation identity on random pairs, three routes independent
  for (int i = 0; i < 100; ++i) {
    ToeplitzElement a = random_element(seed + 1000 + std::uint64_t(i), 2, 4);
    GnsVector f = random_vector(seed + 2000 + std::uint64_t(i), -3, 3, 6);
    GnsVector lhs = apply_D(act(a, f), ctx) - act(a, apply_D(f, ctx));
    GnsVector rhs = act(derive(a, ctx.beta), f);
    double r = norm(lhs - rhs, cod) / std::max(1.0, sup_norm(f));
    rep.implementation_residual = std::max(rep.implementation_residual, r);
  }
  if (rep.implementation_residual > tols.identity) fail("implementation identity");

  // covariance of D under the rotation unitaries
  for (double theta : {M_PI / 7.0, 1.0, 2.0 * M_PI / 3.0}) {
    for (int i = 0; i < 10; ++i) {
      GnsVector f = random_vector(seed + 3000 + std::uint64_t(i), -4, 4, 6);
      GnsVector lhs = rotate(apply_D(rotate(f, -theta), ctx), theta);
      GnsVector rhs = apply_D(f, ctx).scaled(std::polar(1.0, theta));
      double r = norm(lhs - rhs, cod);
      rep.covariance_residual = std::max(rep.covariance_residual, r);
    }
  }
  if (rep.covariance_residual > tols.unitary) fail("covariance");

  // parametrix identities per regime; residuals are normalized by the local
  // stencil magnitude since the corrected-regime cancellation is conditioned
  // like |h^{(n)}(k)| * |beta(k+n)|
  std::mt19937_64 rng(seed + 4000);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Sequence alpha = ctx.alpha();
  auto stencil_mag = [&](long n, const std::vector<cplx>& f, long k) {
    auto at = [&](long i) {
      return i >= 0 && i < long(f.size()) ? std::abs(f[size_t(i)]) : 0.0;
    };
    if (n >= 0)
      return std::abs(ctx.beta(k + n)) * at(k) + std::abs(alpha(k)) * at(k + 1);
    return std::abs(alpha(k - n - 1)) * at(k) +
           (k >= 1 ? std::abs(ctx.beta(k - 1)) * at(k - 1) : 0.0);
  };
  for (long n = -mode_window; n <= mode_window; ++n) {
    ModeParametrix q(n, N, ctx);
    for (int i = 0; i < 20; ++i) {
      std::vector<cplx> g(8);
      for (auto& z : g) z = cplx(u(rng), u(rng));
      long L = long(g.size()) + 20;
      auto qg = q.apply(g, L);
      auto dqg = apply_mode(n, qg, ctx);
      double gsup = std::max(1.0, vec_sup(g));
      for (long k = 0; k + 2 < L; ++k) {
        cplx want = k < long(g.size()) ? g[size_t(k)] : cplx(0.0);
        double scale = std::max(gsup, stencil_mag(n, qg, k));
        rep.parametrix_residual = std::max(
            rep.parametrix_residual, std::abs(dqg[size_t(k)] - want) / scale);
      }
      // Q_n D_n f = f - C_n f
      auto df = apply_mode(n, g, ctx);
      auto qdf = q.apply(df, L);
      auto cf = q.defect_apply(g, L);
      for (long k = 0; k + 2 < L; ++k) {
        cplx want = (k < long(g.size()) ? g[size_t(k)] : cplx(0.0)) - cf[size_t(k)];
        double scale = std::max(gsup, std::abs(cf[size_t(k)]));
        rep.parametrix_residual = std::max(
            rep.parametrix_residual, std::abs(qdf[size_t(k)] - want) / scale);
      }
      if (q.regime() == ParametrixRegime::Corrected && vec_sup(cf) > 0.0)
        rep.max_defect_rank = std::max(rep.max_defect_rank, 1L);
    }
  }
  if (rep.parametrix_residual > tols.identity) fail("parametrix identities");

  // grading and truncation symmetry
  {
    long aw = std::min(mode_window, 5L);
    long ak = std::min(K, 40L);
    DiracAssembly A = assemble(ak, -aw, aw, ctx);
    rep.assembly_asymmetry = (A.dirac - A.dirac.adjoint()).cwiseAbs().maxCoeff() /
                             std::max(1.0, A.dirac.cwiseAbs().maxCoeff());
    Eigen::MatrixXcd G = A.grading.cast<cplx>().asDiagonal();
    rep.grading_anticommutator = (G * A.dirac + A.dirac * G).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd P = A.represent_pi(U + Ustar);
    rep.grading_pi_commutator = (G * P - P * G).cwiseAbs().maxCoeff();
  }
  if (rep.assembly_asymmetry > tols.unitary) fail("assembly symmetry");
  if (rep.grading_anticommutator > 0.0) fail("grading anticommutation");
  if (rep.grading_pi_commutator > 0.0) fail("grading commutation with pi");

  // commutator stabilization across truncations
  {
    long K1 = std::max(48L, K / 2), K2 = K;
    rep.commutator_delta_u =
        std::abs(commutator_norm(U, K2, ctx) - commutator_norm(U, K1, ctx));
    rep.commutator_delta_ustar =
        std::abs(commutator_norm(Ustar, K2, ctx) - commutator_norm(Ustar, K1, ctx));
  }
  if (rep.commutator_delta_u > tols.stabilization) fail("commutator stabilization (U)");
  if (rep.commutator_delta_ustar > tols.stabilization)
    fail("commutator stabilization (U*)");

  // Hilbert-Schmidt decay across the mode window
  {
    auto hs = kernels::hs_sweep(-mode_window, mode_window, N, ctx);
    for (long n = -mode_window; n <= mode_window; ++n) {
      const HsResult& h = hs[size_t(n + mode_window)];
      if (!h.finite) fail("HS norm infinite at n = " + std::to_string(n));
      if (std::labs(n) <= 5) rep.hs_max_core = std::max(rep.hs_max_core, h.value);
      if (std::labs(n) >= mode_window - 2)
        rep.hs_max_tail = std::max(rep.hs_max_tail, h.value);
    }
    if (rep.hs_max_tail >= rep.hs_max_core) fail("HS norms do not decay");
  }

  rep.pass = rep.first_failure.empty();
  return rep;
}

}  // namespace qdisk
