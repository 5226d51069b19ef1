#include "qdisk/toeplitz.hpp"

#include <algorithm>
#include <cmath>

namespace qdisk {

DiagonalSymbol DiagonalSymbol::from_sequence(const Sequence& s) {
  std::optional<long> cf;
  if (s.kind() == Sequence::Kind::EventuallyConstant) {
    // find where the prefix actually ends
    long k = 0;
    cplx tail = *s.value_limit();
    for (long j = 256; j >= 0; --j) {
      if (s(j) != tail) {
        k = j + 1;
        break;
      }
    }
    cf = k;
  }
  return DiagonalSymbol([s](long k) { return s(k); }, s.value_limit(), cf);
}

DiagonalSymbol DiagonalSymbol::constant(cplx v) {
  return DiagonalSymbol([v](long) { return v; }, v, 0);
}

DiagonalSymbol DiagonalSymbol::table(std::vector<cplx> prefix, cplx tail) {
  long n = long(prefix.size());
  return DiagonalSymbol(
      [prefix = std::move(prefix), tail](long k) {
        return k < long(prefix.size()) ? prefix[size_t(k)] : tail;
      },
      tail, n);
}

DiagonalSymbol DiagonalSymbol::shifted(long m) const {
  std::optional<long> cf;
  if (const_from_) cf = std::max(0L, *const_from_ - m);
  return DiagonalSymbol([fn = fn_, m](long k) { return fn(k + m); }, limit_, cf);
}

DiagonalSymbol DiagonalSymbol::masked_shift_down(long m) const {
  if (m == 0) return *this;
  std::optional<long> cf;
  if (const_from_) cf = *const_from_ + m;
  return DiagonalSymbol(
      [fn = fn_, m](long k) { return k >= m ? fn(k - m) : cplx(0.0); }, limit_, cf);
}

DiagonalSymbol DiagonalSymbol::times(const DiagonalSymbol& o) const {
  std::optional<cplx> l;
  if (limit_ && o.limit_) l = *limit_ * *o.limit_;
  std::optional<long> cf;
  if (const_from_ && o.const_from_) cf = std::max(*const_from_, *o.const_from_);
  return DiagonalSymbol([f = fn_, g = o.fn_](long k) { return f(k) * g(k); }, l, cf);
}

DiagonalSymbol DiagonalSymbol::plus(const DiagonalSymbol& o) const {
  std::optional<cplx> l;
  if (limit_ && o.limit_) l = *limit_ + *o.limit_;
  std::optional<long> cf;
  if (const_from_ && o.const_from_) cf = std::max(*const_from_, *o.const_from_);
  return DiagonalSymbol([f = fn_, g = o.fn_](long k) { return f(k) + g(k); }, l, cf);
}

DiagonalSymbol DiagonalSymbol::conjugated() const {
  std::optional<cplx> l;
  if (limit_) l = std::conj(*limit_);
  return DiagonalSymbol([f = fn_](long k) { return std::conj(f(k)); }, l, const_from_);
}

DiagonalSymbol DiagonalSymbol::scaled(cplx s) const {
  std::optional<cplx> l;
  if (limit_) l = s * *limit_;
  return DiagonalSymbol([f = fn_, s](long k) { return s * f(k); }, l, const_from_);
}

DiagonalSymbol DiagonalSymbol::with_limit(cplx l) const {
  return DiagonalSymbol(fn_, l, const_from_);
}

bool DiagonalSymbol::is_zero_on(long window, double tol) const {
  for (long k = 0; k <= window; ++k)
    if (std::abs(fn_(k)) > tol) return false;
  return true;
}

ToeplitzElement ToeplitzElement::monomial(long mode, DiagonalSymbol a) {
  ToeplitzElement x;
  x.modes_.emplace(mode, std::move(a));
  return x;
}

DiagonalSymbol ToeplitzElement::symbol(long mode) const {
  auto it = modes_.find(mode);
  return it == modes_.end() ? DiagonalSymbol::zero() : it->second;
}

long ToeplitzElement::max_abs_mode() const {
  long m = 0;
  for (const auto& [n, a] : modes_) m = std::max(m, std::labs(n));
  return m;
}

void ToeplitzElement::add_term(long mode, const DiagonalSymbol& a) {
  auto it = modes_.find(mode);
  if (it == modes_.end())
    modes_.emplace(mode, a);
  else
    it->second = it->second.plus(a);
}

ToeplitzElement ToeplitzElement::operator+(const ToeplitzElement& o) const {
  ToeplitzElement r = *this;
  for (const auto& [n, a] : o.modes_) r.add_term(n, a);
  return r;
}

ToeplitzElement ToeplitzElement::operator-(const ToeplitzElement& o) const {
  return *this + o.scaled(cplx(-1.0));
}

ToeplitzElement ToeplitzElement::scaled(cplx s) const {
  ToeplitzElement r;
  for (const auto& [n, a] : modes_) r.modes_.emplace(n, a.scaled(s));
  return r;
}

DiagonalSymbol term_product_symbol(long m1, const DiagonalSymbol& a, long m2,
                                   const DiagonalSymbol& b) {
  // term (m, a) is U^p a(K) (U*)^q with p = max(m,0), q = max(-m,0)
  long p1 = std::max(m1, 0L), q1 = std::max(-m1, 0L);
  long p2 = std::max(m2, 0L), q2 = std::max(-m2, 0L);
  DiagonalSymbol c;
  long P, Q;
  if (p2 >= q1) {
    long r = p2 - q1;
    c = a.shifted(r).times(b);
    P = p1 + r;
    Q = q2;
  } else {
    long r = q1 - p2;
    c = a.times(b.shifted(r));
    P = p1;
    Q = r + q2;
  }
  long s = std::min(P, Q);
  return c.masked_shift_down(s);
}

ToeplitzElement ToeplitzElement::operator*(const ToeplitzElement& o) const {
  ToeplitzElement r;
  for (const auto& [m1, a] : modes_)
    for (const auto& [m2, b] : o.modes_)
      r.add_term(m1 + m2, term_product_symbol(m1, a, m2, b));
  return r;
}

ToeplitzElement ToeplitzElement::adjoint() const {
  // (U^n a(K))* = conj(a)(K)(U*)^n, already canonical at mode -n
  ToeplitzElement r;
  for (const auto& [n, a] : modes_) r.modes_.emplace(-n, a.conjugated());
  return r;
}

ToeplitzElement ToeplitzElement::rotated(double theta) const {
  ToeplitzElement r;
  for (const auto& [n, a] : modes_) {
    cplx phase = std::polar(1.0, double(n) * theta);
    r.modes_.emplace(n, a.scaled(phase));
  }
  return r;
}

Eigen::MatrixXcd ToeplitzElement::represent(long K) const {
  if (K < 0) throw std::domain_error("truncation size must be >= 0");
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(K + 1, K + 1);
  for (const auto& [n, a] : modes_) {
    if (n >= 0) {
      // U^n a(K) E_k = a(k) E_{k+n}
      for (long k = 0; k + n <= K; ++k) M(k + n, k) += a(k);
    } else {
      // a(K)(U*)^{-n} E_k = a(k+n) E_{k+n} for k >= -n
      for (long k = -n; k <= K; ++k) M(k + n, k) += a(k + n);
    }
  }
  return M;
}

bool ToeplitzElement::approx_equal(const ToeplitzElement& o, long window, double tol) const {
  auto check = [&](const ToeplitzElement& x, const ToeplitzElement& y) {
    for (const auto& [n, a] : x.modes_) {
      DiagonalSymbol b = y.symbol(n);
      for (long k = 0; k <= window; ++k)
        if (std::abs(a(k) - b(k)) > tol) return false;
      if (a.limit() && b.limit() && std::abs(*a.limit() - *b.limit()) > tol) return false;
    }
    return true;
  };
  return check(*this, o) && check(o, *this);
}

ToeplitzElement derive(const ToeplitzElement& x, const Sequence& beta) {
  DiagonalSymbol bsym = DiagonalSymbol::from_sequence(beta);
  ToeplitzElement gen = ToeplitzElement::monomial(1, bsym);
  ToeplitzElement d = gen * x - x * gen;

  // each output symbol converges: for an input term of mode m with c00+ tail
  // value a_inf, the mode-(m+1) output symbol tends to m * beta_inf * a_inf
  if (beta.diff_limit()) {
    cplx binf = *beta.diff_limit();
    ToeplitzElement annotated;
    for (const auto& [nm, sym] : d.modes()) {
      long m = nm - 1;  // originating input mode
      auto in = x.symbol(m);
      if (in.limit())
        annotated.add_term(nm, sym.with_limit(double(m) * binf * *in.limit()));
      else
        annotated.add_term(nm, sym);
    }
    return annotated;
  }
  return d;
}

cplx tau(const WeightSequence& w, const ToeplitzElement& x, double tol) {
  DiagonalSymbol a0 = x.symbol(0);
  if (a0.const_from()) {
    // exact: finite prefix plus tail value times the remaining mass
    long k0 = *a0.const_from();
    cplx s = 0.0;
    double head = 0.0;
    for (long k = 0; k < k0; ++k) {
      s += w(k) * a0(k);
      head += w(k);
    }
    return s + a0(k0) * (1.0 - head);
  }
  if (a0.limit()) {
    cplx L = *a0.limit();
    cplx s = 0.0;
    double head = 0.0;
    long K = 1 << 16;
    for (long k = 0; k < K; ++k) {
      s += w(k) * a0(k);
      head += w(k);
    }
    double drift = std::abs(a0(K) - L) + std::abs(a0(4 * K) - L);
    double residual = std::max(0.0, 1.0 - head);
    if (drift * residual > tol && residual > tol)
      throw cannot_bound_error("tau tail does not settle within tolerance");
    return s + L * residual;
  }
  throw cannot_bound_error("mode-0 symbol has no declared tail behavior");
}

}  // namespace qdisk
