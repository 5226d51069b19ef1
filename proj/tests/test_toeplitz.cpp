#include <doctest.h>

#include <cmath>
#include <complex>

#include "qdisk/toeplitz.hpp"

using namespace qdisk;

namespace {

ToeplitzElement sample_a() {
  // U^2 (1/(1+k)) + U (k mod 3 table) + diag + (U*)^1 tail
  ToeplitzElement x = ToeplitzElement::monomial(
      2, DiagonalSymbol::from_sequence(Sequence::power_law(-1.0)));
  x.add_term(1, DiagonalSymbol::table({cplx(0.5), cplx(-1.0, 0.5)}, cplx(0.25)));
  x.add_term(0, DiagonalSymbol::from_sequence(Sequence::affine(0.0, 2.0)));
  x.add_term(-1, DiagonalSymbol::table({cplx(1.0, -2.0)}, cplx(0.0, 1.0)));
  return x;
}

ToeplitzElement sample_b() {
  ToeplitzElement y = ToeplitzElement::monomial(
      -2, DiagonalSymbol::from_sequence(Sequence::power_law(-2.0, 3.0)));
  y.add_term(0, DiagonalSymbol::table({cplx(0.0), cplx(2.0)}, cplx(-0.5)));
  y.add_term(1, DiagonalSymbol::constant(cplx(0.0, 1.0)));
  return y;
}

}  // namespace

TEST_CASE("isometry relations") {
  ToeplitzElement U = ToeplitzElement::shift();
  ToeplitzElement Us = ToeplitzElement::shift_adjoint();

  CHECK((Us * U).approx_equal(ToeplitzElement::identity(), 40, 1e-15));

  // U U* = 1 - P_0: mode 0 symbol is the indicator [k >= 1]
  ToeplitzElement proj = U * Us;
  REQUIRE(proj.modes().size() == 1);
  DiagonalSymbol s = proj.symbol(0);
  CHECK(s(0) == cplx(0.0));
  CHECK(s(1) == cplx(1.0));
  CHECK(s(57) == cplx(1.0));

  // matrix oracle: represent(U U*) = diag(0, 1, 1, ...)
  Eigen::MatrixXcd M = proj.represent(8);
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Identity(9, 9);
  D(0, 0) = 0.0;
  CHECK((M - D).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("term product symbol reduction") {
  DiagonalSymbol c = DiagonalSymbol::from_sequence(Sequence::affine(1.0, 1.0));
  // U^2 c(K) (U*)^2 -> [k >= 2] c(k - 2)
  DiagonalSymbol r = term_product_symbol(2, c, -2, DiagonalSymbol::one());
  CHECK(r(0) == cplx(0.0));
  CHECK(r(1) == cplx(0.0));
  CHECK(r(2) == cplx(1.0));
  CHECK(r(7) == cplx(6.0));

  // a(K) U = U a(K+1): symbol of the mode-1 part of diag(c) * U
  DiagonalSymbol l = term_product_symbol(0, c, 1, DiagonalSymbol::one());
  CHECK(l(0) == cplx(2.0));
  CHECK(l(4) == cplx(6.0));
}

TEST_CASE("representation is multiplicative on the interior") {
  ToeplitzElement a = sample_a();
  ToeplitzElement b = sample_b();
  long K = 32;
  Eigen::MatrixXcd lhs = (a * b).represent(K);
  Eigen::MatrixXcd rhs = a.represent(K) * b.represent(K);
  // couplings past the window corrupt the last max_abs_mode rows/cols only
  long m = a.max_abs_mode() + b.max_abs_mode();
  long d = K + 1 - m;
  double err = (lhs.topLeftCorner(d, d) - rhs.topLeftCorner(d, d)).cwiseAbs().maxCoeff();
  CHECK(err < 1e-12);
}

TEST_CASE("adjoint") {
  ToeplitzElement a = sample_a();
  ToeplitzElement b = sample_b();
  CHECK(a.adjoint().adjoint().approx_equal(a, 30, 1e-14));
  CHECK((a * b).adjoint().approx_equal(b.adjoint() * a.adjoint(), 30, 1e-12));

  Eigen::MatrixXcd M = a.represent(24);
  Eigen::MatrixXcd Ms = a.adjoint().represent(24);
  long m = a.max_abs_mode();
  long d = 25 - m;
  CHECK((Ms.topLeftCorner(d, d) - M.topLeftCorner(d, d).adjoint()).cwiseAbs().maxCoeff()
        < 1e-14);
}

TEST_CASE("rotation action") {
  double theta = 2.0 * M_PI / 3.0;
  ToeplitzElement U = ToeplitzElement::shift();
  ToeplitzElement rU = U.rotated(theta);
  CHECK(rU.approx_equal(U.scaled(std::polar(1.0, theta)), 20, 1e-15));
  CHECK(ToeplitzElement::shift_adjoint().rotated(M_PI).approx_equal(
      ToeplitzElement::shift_adjoint().scaled(cplx(-1.0)), 20, 1e-12));

  // mode-0 part is fixed
  ToeplitzElement d = ToeplitzElement::diagonal(
      DiagonalSymbol::from_sequence(Sequence::power_law(-1.0)));
  CHECK(d.rotated(0.7).approx_equal(d, 20, 1e-15));

  // conjugation oracle: rho_theta(a) = R a R^* with R = diag(e^{ik theta})
  ToeplitzElement a = sample_a();
  long K = 20;
  Eigen::VectorXcd phases(K + 1);
  for (long k = 0; k <= K; ++k) phases(k) = std::polar(1.0, double(k) * theta);
  Eigen::MatrixXcd R = phases.asDiagonal();
  Eigen::MatrixXcd lhs = a.rotated(theta).represent(K);
  Eigen::MatrixXcd rhs = R * a.represent(K) * R.adjoint();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);

  // group law
  CHECK(a.rotated(0.4).rotated(1.1).approx_equal(a.rotated(1.5), 20, 1e-12));
}

TEST_CASE("derivation") {
  Sequence beta = Sequence::affine(1.0, 1.0);
  ToeplitzElement U = ToeplitzElement::shift();
  ToeplitzElement Us = ToeplitzElement::shift_adjoint();

  SUBCASE("generators") {
    // d(U) = U^2, d(U*) = -1, d(1) = 0
    ToeplitzElement dU = derive(U, beta);
    REQUIRE(dU.modes().size() == 1);
    DiagonalSymbol s2 = dU.symbol(2);
    for (long k : {0L, 1L, 9L}) CHECK(s2(k) == cplx(1.0));

    ToeplitzElement dUs = derive(Us, beta);
    REQUIRE(dUs.modes().size() == 1);
    DiagonalSymbol s0 = dUs.symbol(0);
    for (long k : {0L, 1L, 9L}) CHECK(s0(k) == cplx(-1.0));

    CHECK(derive(ToeplitzElement::identity(), beta).approx_equal(
        ToeplitzElement::zero(), 20, 0.0));
  }

  SUBCASE("matrix commutator oracle") {
    ToeplitzElement gen = ToeplitzElement::monomial(
        1, DiagonalSymbol::from_sequence(beta));
    ToeplitzElement a = sample_a();
    long K = 24;
    Eigen::MatrixXcd B = gen.represent(K);
    Eigen::MatrixXcd A = a.represent(K);
    Eigen::MatrixXcd lhs = derive(a, beta).represent(K);
    Eigen::MatrixXcd rhs = B * A - A * B;
    long d = K + 1 - (a.max_abs_mode() + 2);
    CHECK((lhs.topLeftCorner(d, d) - rhs.topLeftCorner(d, d)).cwiseAbs().maxCoeff()
          < 1e-12);
  }

  SUBCASE("Leibniz rule") {
    ToeplitzElement a = sample_a();
    ToeplitzElement b = sample_b();
    ToeplitzElement lhs = derive(a * b, beta);
    ToeplitzElement rhs = derive(a, beta) * b + a * derive(b, beta);
    CHECK(lhs.approx_equal(rhs, 24, 1e-11));
  }

  SUBCASE("covariance") {
    // rho_theta(U beta) = e^{i theta} U beta, so d(rho(x)) = e^{-i theta} rho(d(x))
    double theta = 1.0;
    ToeplitzElement a = sample_a();
    ToeplitzElement lhs = derive(a.rotated(theta), beta);
    ToeplitzElement rhs = derive(a, beta).rotated(theta).scaled(std::polar(1.0, -theta));
    CHECK(lhs.approx_equal(rhs, 24, 1e-12));
  }
}

TEST_CASE("weighted state tau") {
  PowerLawFamily fam(4.0, 3.0, 5.5);
  WeightSequence w = fam.w();

  CHECK(std::abs(tau(w, ToeplitzElement::identity()) - cplx(1.0)) < 1e-10);
  CHECK(std::abs(tau(w, ToeplitzElement::shift())) == 0.0);

  ToeplitzElement U = ToeplitzElement::shift();
  cplx t = tau(w, U * U.adjoint());
  CHECK(std::abs(t - cplx(1.0 - w(0))) < 1e-10);

  // off-diagonal modes never contribute, so tau is rotation invariant
  ToeplitzElement a = sample_a();
  CHECK(std::abs(tau(w, a.rotated(0.9)) - tau(w, a)) < 1e-12);
}
