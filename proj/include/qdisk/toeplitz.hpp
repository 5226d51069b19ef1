#ifndef QDISK_TOEPLITZ_HPP
#define QDISK_TOEPLITZ_HPP

#include <Eigen/Dense>
#include <map>

#include "qdisk/sequences.hpp"

namespace qdisk {

/// Diagonal operator a(K): evaluation closure plus declared tail metadata.
///
/// const_from marks eventual constancy (c00+ membership): the value at any
/// k >= const_from equals the value at const_from. limit is the declared
/// k -> infinity limit (c membership), independent of eventual constancy.
class DiagonalSymbol {
 public:
  DiagonalSymbol() : DiagonalSymbol(zero()) {}

  static DiagonalSymbol from_sequence(const Sequence& s);
  static DiagonalSymbol constant(cplx v);
  static DiagonalSymbol zero() { return constant(cplx(0.0)); }
  static DiagonalSymbol one() { return constant(cplx(1.0)); }
  // finite prefix then constant tail (c00+ when tail-aware callers need it)
  static DiagonalSymbol table(std::vector<cplx> prefix, cplx tail);

  cplx operator()(long k) const { return fn_(k); }
  std::optional<cplx> limit() const { return limit_; }
  std::optional<long> const_from() const { return const_from_; }

  DiagonalSymbol shifted(long m) const;            // k -> f(k+m), m >= 0
  DiagonalSymbol masked_shift_down(long m) const;  // k -> [k>=m] f(k-m)
  DiagonalSymbol times(const DiagonalSymbol& o) const;
  DiagonalSymbol plus(const DiagonalSymbol& o) const;
  DiagonalSymbol conjugated() const;
  DiagonalSymbol scaled(cplx s) const;
  DiagonalSymbol with_limit(cplx l) const;

  bool is_zero_on(long window, double tol = 0.0) const;

 private:
  DiagonalSymbol(std::function<cplx(long)> fn, std::optional<cplx> limit,
                 std::optional<long> const_from)
      : fn_(std::move(fn)), limit_(limit), const_from_(const_from) {}
  std::function<cplx(long)> fn_;
  std::optional<cplx> limit_;
  std::optional<long> const_from_;
};

/// Canonical-form element of the quantum disk algebra:
/// sum_{n>=0} U^n a_n(K) + sum_{n<0} a_n(K) (U*)^{-n}, finite mode support.
class ToeplitzElement {
 public:
  static ToeplitzElement zero() { return ToeplitzElement(); }
  static ToeplitzElement identity() { return monomial(0, DiagonalSymbol::one()); }
  static ToeplitzElement shift() { return monomial(1, DiagonalSymbol::one()); }          // U
  static ToeplitzElement shift_adjoint() { return monomial(-1, DiagonalSymbol::one()); } // U*
  static ToeplitzElement diagonal(DiagonalSymbol a) { return monomial(0, std::move(a)); }
  static ToeplitzElement monomial(long mode, DiagonalSymbol a);

  const std::map<long, DiagonalSymbol>& modes() const { return modes_; }
  DiagonalSymbol symbol(long mode) const;
  long max_abs_mode() const;

  ToeplitzElement operator+(const ToeplitzElement& o) const;
  ToeplitzElement operator-(const ToeplitzElement& o) const;
  ToeplitzElement operator*(const ToeplitzElement& o) const;
  ToeplitzElement scaled(cplx s) const;

  ToeplitzElement adjoint() const;
  ToeplitzElement rotated(double theta) const;  // rho_theta

  // matrix of the element on span{E_0..E_K}; couplings past the window drop
  Eigen::MatrixXcd represent(long K) const;

  bool approx_equal(const ToeplitzElement& o, long window, double tol) const;

  void add_term(long mode, const DiagonalSymbol& a);

 private:
  std::map<long, DiagonalSymbol> modes_;
};

// Product of single canonical terms, reduced by the isometry relations:
// a(K)U = U a(K+1), U* a(K) = a(K+1) U*, U^m c(K)(U*)^m = [k>=m] c(k-m).
// Returns the symbol of the (m1+m2)-mode of the product.
DiagonalSymbol term_product_symbol(long m1, const DiagonalSymbol& a, long m2,
                                   const DiagonalSymbol& b);

// d(x) = [U beta(K), x]
ToeplitzElement derive(const ToeplitzElement& x, const Sequence& beta);

// tau_w(x) = sum_k w(k) a_0(k); modes n != 0 contribute nothing
cplx tau(const WeightSequence& w, const ToeplitzElement& x, double tol = 1e-12);

}  // namespace qdisk

#endif
