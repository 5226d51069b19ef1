#include <doctest.h>

#include <cmath>
#include <random>

#include "qdisk/dirac.hpp"

using namespace qdisk;

namespace {

ModeContext base_ctx() { return context_from(PowerLawFamily(4.0, 3.0, 5.5)); }

std::vector<cplx> rand_coeffs(unsigned seed, long len) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(static_cast<size_t>(len));
  for (auto& x : v) x = cplx(u(rng), u(rng));
  return v;
}

// local stencil magnitude: conditioning scale of the D_n Q_n cancellation
double stencil_mag(long n, const std::vector<cplx>& f, long k, const ModeContext& ctx,
                   const Sequence& alpha) {
  double s = 0.0;
  if (n >= 0) {
    if (k < long(f.size())) s += std::abs(ctx.beta(k + n)) * std::abs(f[size_t(k)]);
    if (k + 1 < long(f.size())) s += std::abs(alpha(k)) * std::abs(f[size_t(k) + 1]);
  } else {
    if (k < long(f.size())) s += std::abs(alpha(k - n - 1)) * std::abs(f[size_t(k)]);
    if (k >= 1 && k - 1 < long(f.size()))
      s += std::abs(ctx.beta(k - 1)) * std::abs(f[size_t(k) - 1]);
  }
  return s;
}

}  // namespace

TEST_CASE("mode stencil oracles for the affine beta") {
  ModeContext ctx = base_ctx();
  // beta(k) = 1+k, mu(k) = (1+k)^{-3}, alpha(0) = 1/8

  SUBCASE("n = 0") {
    std::vector<cplx> d0{cplx(1.0)};
    auto out = apply_mode(0, d0, ctx);
    REQUIRE(out.size() == 1);
    CHECK(std::abs(out[0] - cplx(1.0)) < 1e-15);

    std::vector<cplx> d1{cplx(0.0), cplx(1.0)};
    auto out1 = apply_mode(0, d1, ctx);
    REQUIRE(out1.size() == 2);
    CHECK(std::abs(out1[0] - cplx(-0.125)) < 1e-15);  // -alpha(0)
    CHECK(std::abs(out1[1] - cplx(2.0)) < 1e-15);     // beta(1)
  }

  SUBCASE("n = 2") {
    std::vector<cplx> d0{cplx(1.0)};
    auto out = apply_mode(2, d0, ctx);
    CHECK(std::abs(out[0] - cplx(3.0)) < 1e-15);  // beta(2)
  }

  SUBCASE("n = -1") {
    // D_{-1} f(k) = beta(k-1) f(k-1) - alpha(k) f(k)
    std::vector<cplx> d0{cplx(1.0)};
    auto out = apply_mode(-1, d0, ctx);
    REQUIRE(out.size() == 2);
    CHECK(std::abs(out[0] - cplx(-0.125)) < 1e-15);  // -alpha(0)
    CHECK(std::abs(out[1] - cplx(1.0)) < 1e-15);     // beta(0)
  }

  SUBCASE("n = -3") {
    // D_{-3} f(k) = beta(k-1) f(k-1) - alpha(k+2) f(k)
    Sequence alpha = ctx.alpha();
    std::vector<cplx> d1{cplx(0.0), cplx(1.0)};
    auto out = apply_mode(-3, d1, ctx);
    REQUIRE(out.size() == 3);
    CHECK(std::abs(out[0]) == 0.0);
    CHECK(std::abs(out[1] + alpha(3)) < 1e-15);
    CHECK(std::abs(out[2] - ctx.beta(1)) < 1e-15);
  }
}

TEST_CASE("apply_D agrees with the algebraic route") {
  ModeContext ctx = base_ctx();
  ToeplitzElement gen_b = ToeplitzElement::monomial(1, DiagonalSymbol::from_sequence(ctx.beta));
  ToeplitzElement gen_a = ToeplitzElement::monomial(1, DiagonalSymbol::from_sequence(ctx.alpha()));

  GnsVector f;
  f.set_mode(-2, rand_coeffs(11, 4));
  f.set_mode(0, rand_coeffs(12, 5));
  f.set_mode(3, rand_coeffs(13, 3));

  GnsVector lhs = apply_D(f, ctx);
  GnsVector rhs = act(gen_b, f) - act_right(f, gen_a);
  WeightedSpace sp{ctx.wprime};
  CHECK(norm(lhs - rhs, sp) < 1e-13 * (1.0 + norm(rhs, sp)));

  // mode n feeds mode n+1 only
  for (const auto& [n, c] : lhs.components()) {
    bool fed = f.components().count(n - 1) > 0;
    CHECK(fed);
  }
}

TEST_CASE("formal kernel direction") {
  ModeContext ctx = base_ctx();
  KernelVector h0(0, ctx);
  CHECK(std::abs(h0(2) - cplx(27.0)) < 1e-12);  // 1/mu(2)

  KernelVector h1(1, ctx);
  for (long k : {0L, 1L, 5L})
    CHECK(std::abs(h1(k) - cplx(std::pow(1.0 + double(k), 4.0))) < 1e-9 * std::pow(1.0 + k, 4.0));

  auto t = h1.truncated(4);
  REQUIRE(t.size() == 5);
  CHECK(std::abs(t[3] - h1(3)) == 0.0);

  // D_n annihilates its kernel direction exactly (finite window check)
  auto tr = h1.truncated(40);
  auto out = apply_mode(1, tr, ctx);
  Sequence alpha = ctx.alpha();
  for (long k = 0; k + 1 < 40; ++k) {
    double scale = stencil_mag(1, tr, k, ctx, alpha);
    CHECK(std::abs(out[size_t(k)]) <= 1e-14 * std::max(1.0, scale));
  }
}

TEST_CASE("kernel membership per preset") {
  CHECK_FALSE(kernel_membership(0, base_ctx()).in_space);

  ModeContext k1 = context_from(PowerLawFamily(4.0, 3.0, 9.0));
  CHECK(kernel_membership(0, k1).in_space);
  CHECK_FALSE(kernel_membership(1, k1).in_space);  // harmonic boundary

  ModeContext k2 = context_from(PowerLawFamily(4.0, 3.0, 10.0));
  CHECK(kernel_membership(0, k2).in_space);
  CHECK(kernel_membership(1, k2).in_space);
  CHECK_FALSE(kernel_membership(2, k2).in_space);
}

TEST_CASE("parametrix identities in every regime") {
  struct Preset {
    double a, b, c;
    long N;
  };
  for (Preset p : {Preset{4.0, 3.0, 5.5, 0}, Preset{4.0, 3.0, 9.0, 1},
                   Preset{4.0, 3.0, 10.0, 2}}) {
    ModeContext ctx = context_from(PowerLawFamily(p.a, p.b, p.c));
    Sequence alpha = ctx.alpha();
    CAPTURE(p.c);
    for (long n = -8; n <= 8; ++n) {
      CAPTURE(n);
      ModeParametrix q(n, p.N, ctx);
      if (n < 0) CHECK(q.regime() == ParametrixRegime::LowerInverse);
      else if (n < p.N) CHECK(q.regime() == ParametrixRegime::Corrected);
      else CHECK(q.regime() == ParametrixRegime::Inverse);

      long L = 24;
      auto g = rand_coeffs(unsigned(100 + n), L);

      if (n >= 0) {
        // D_n Q_n g = g; the corrected kernel is not triangular, so give the
        // image room past the support and stop short of the truncation edge
        long Lq = L + 8;
        auto qg = q.apply(g, Lq);
        auto dqg = apply_mode(n, qg, ctx);
        for (long k = 0; k + 2 < Lq; ++k) {
          cplx want = k < L ? g[size_t(k)] : cplx(0.0);
          double scale = std::max(1.0, stencil_mag(n, qg, k, ctx, alpha));
          CHECK(std::abs(dqg[size_t(k)] - want) <= 1e-11 * scale);
        }
        // Q_n D_n f = f - C_n f
        auto f = rand_coeffs(unsigned(200 + n), L);
        auto df = apply_mode(n, f, ctx);
        auto qdf = q.apply(df, Lq);
        auto cf = q.defect_apply(f, Lq);
        if (q.regime() == ParametrixRegime::Inverse)
          for (auto& v : cf) CHECK(std::abs(v) == 0.0);
        for (long k = 0; k + 2 < Lq; ++k) {
          cplx want = (k < L ? f[size_t(k)] : cplx(0.0)) - cf[size_t(k)];
          double scale = std::max({1.0, std::abs(want), std::abs(cf[size_t(k)])});
          CHECK(std::abs(qdf[size_t(k)] - want) <= 1e-11 * scale);
        }
      } else {
        // Q_n D_n f = f
        auto f = rand_coeffs(unsigned(300 - n), L);
        auto df = apply_mode(n, f, ctx);
        auto qdf = q.apply(df, L);
        for (long k = 0; k < L; ++k)
          CHECK(std::abs(qdf[size_t(k)] - f[size_t(k)]) <=
                1e-11 * std::max(1.0, std::abs(f[size_t(k)])));
        // D_n Q_n g = g holds past the support of g as well
        auto qg = q.apply(g, L + 4);
        auto dqg = apply_mode(n, qg, ctx);
        for (long k = 0; k < L + 3; ++k) {
          cplx gk = k < L ? g[size_t(k)] : cplx(0.0);
          double scale = std::max(1.0, stencil_mag(n, qg, k, ctx, alpha));
          CHECK(std::abs(dqg[size_t(k)] - gk) <= 1e-11 * scale);
        }
        // no defect below the diagonal regime
        auto cf = q.defect_apply(g, L);
        for (auto& v : cf) CHECK(std::abs(v) == 0.0);
      }
    }
  }
}

TEST_CASE("parametrix entries") {
  ModeContext ctx = base_ctx();
  ModeParametrix q0(0, 0, ctx);
  CHECK(std::abs(q0.entry(0, 0) - cplx(1.0)) < 1e-15);  // mu(0)/(mu(0) beta(0))
  CHECK(std::abs(q0.entry(2, 1)) == 0.0);               // upper triangular

  ModeParametrix qm(-2, 0, ctx);
  CHECK(std::abs(qm.entry(1, 3)) == 0.0);  // lower triangular

  // corrected regime: exactly zero on and above the diagonal when mu(0) = 1
  ModeContext k1 = context_from(PowerLawFamily(4.0, 3.0, 9.0));
  ModeParametrix qc(0, 1, k1);
  REQUIRE(qc.regime() == ParametrixRegime::Corrected);
  for (long k : {0L, 1L, 4L})
    for (long j = k; j < k + 4; ++j) CHECK(std::abs(qc.entry(k, j)) == 0.0);
  CHECK(std::abs(qc.entry(3, 1)) > 0.0);
}

TEST_CASE("weighted adjoint duality") {
  ModeContext ctx = base_ctx();
  for (long n = -10; n <= 10; ++n) {
    CAPTURE(n);
    long L = 16;
    auto f = rand_coeffs(unsigned(400 + n), L);
    auto g = rand_coeffs(unsigned(500 + n), L + 1);
    auto df = apply_mode(n, f, ctx);
    auto dsg = adjoint_apply(n, g, ctx);

    cplx lhs = 0.0, rhs = 0.0;
    for (long k = 0; k < long(df.size()) && k < long(g.size()); ++k)
      lhs += std::conj(df[size_t(k)]) * g[size_t(k)] * ctx.cod_weight(n, k);
    for (long k = 0; k < long(f.size()) && k < long(dsg.size()); ++k)
      rhs += std::conj(f[size_t(k)]) * dsg[size_t(k)] * ctx.dom_weight(n, k);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("apply_D_star is the adjoint of apply_D") {
  ModeContext ctx = base_ctx();
  GnsVector f, g;
  f.set_mode(-2, rand_coeffs(21, 4));
  f.set_mode(1, rand_coeffs(22, 4));
  g.set_mode(-1, rand_coeffs(23, 5));
  g.set_mode(2, rand_coeffs(24, 5));

  WeightedSpace dom{ctx.w}, cod{ctx.wprime};
  cplx lhs = inner(apply_D(f, ctx), g, cod);
  cplx rhs = inner(f, apply_D_star(g, ctx), dom);
  CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
}

TEST_CASE("mode matrix consistency and lower singular bound") {
  ModeContext ctx = base_ctx();
  long K = 40;
  for (long n : {-2L, 0L, 3L}) {
    CAPTURE(n);
    Eigen::MatrixXcd M = mode_matrix(n, K, ctx);
    // column k is D_n applied to the normalized basis vector at k
    for (long k : {0L, 1L, 7L}) {
      std::vector<cplx> e(size_t(K) + 1, cplx(0.0));
      e[size_t(k)] = 1.0;
      auto out = apply_mode(n, e, ctx);
      for (long j = 0; j <= K && j < long(out.size()); ++j) {
        cplx expect = out[size_t(j)] * std::sqrt(ctx.cod_weight(n, j)) /
                      std::sqrt(ctx.dom_weight(n, k));
        CHECK(std::abs(M(j, k) - expect) < 1e-13 * (1.0 + std::abs(expect)));
      }
    }
  }

  // sigma_min(D_0) * ||Q_0||_HS >= ~1: HS norm of the inverse dominates 1/sigma_min
  Eigen::MatrixXcd M0 = mode_matrix(0, 200, ctx);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M0.topLeftCorner(190, 190));
  double smin = svd.singularValues().minCoeff();
  HsResult hs = hs_norm(ModeParametrix(0, 0, ctx));
  REQUIRE(hs.finite);
  CHECK(smin * (hs.value + hs.tail_bound) >= 0.9);
  CHECK(smin > 0.0);
}

TEST_CASE("assembled operator") {
  ModeContext ctx = base_ctx();
  long K = 12;
  DiracAssembly A = assemble(K, -3, 3, ctx);
  long dim = 2 * A.block_dim();
  REQUIRE(A.dirac.rows() == dim);

  // self-adjoint in the orthonormalized basis
  double scale = A.dirac.cwiseAbs().maxCoeff();
  CHECK((A.dirac - A.dirac.adjoint()).cwiseAbs().maxCoeff() < 1e-13 * scale);

  // grading anticommutes with D and commutes with pi(a), both exactly
  Eigen::MatrixXcd G = A.grading.asDiagonal();
  CHECK((G * A.dirac + A.dirac * G).cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXcd P = A.represent_pi(ToeplitzElement::shift());
  CHECK((G * P - P * G).cwiseAbs().maxCoeff() == 0.0);

  // pi(1) is the identity
  Eigen::MatrixXcd I = A.represent_pi(ToeplitzElement::identity());
  CHECK((I - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() == 0.0);

  // off-diagonal block structure: H_w block maps into H_{w'} block
  long b = A.block_dim();
  CHECK(A.dirac.topLeftCorner(b, b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(A.dirac.bottomRightCorner(b, b).cwiseAbs().maxCoeff() == 0.0);
}
