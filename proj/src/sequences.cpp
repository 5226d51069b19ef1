#include "qdisk/sequences.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace qdisk {

namespace {

void require_nonnegative(long k) {
  if (k < 0) throw std::domain_error("sequence index must be >= 0");
}

}  // namespace

Sequence Sequence::power_law(double p, double scale) {
  Sequence s;
  s.kind_ = Kind::PowerLaw;
  s.p_ = p;
  s.scale_ = scale;
  s.fn_ = [p, scale](long k) { return cplx(scale * std::pow(1.0 + double(k), p), 0.0); };
  if (p < 0.0)
    s.value_limit_ = cplx(0.0);
  else if (p == 0.0)
    s.value_limit_ = cplx(scale);
  if (p < 1.0)
    s.diff_limit_ = cplx(0.0);
  else if (p == 1.0)
    s.diff_limit_ = cplx(scale);
  return s;
}

Sequence Sequence::affine(double slope, double offset) {
  Sequence s;
  s.kind_ = Kind::Affine;
  s.fn_ = [slope, offset](long k) { return cplx(offset + slope * double(k), 0.0); };
  s.diff_limit_ = cplx(slope);
  if (slope == 0.0) s.value_limit_ = cplx(offset);
  return s;
}

Sequence Sequence::eventually_constant(std::vector<cplx> prefix, cplx tail) {
  Sequence s;
  s.kind_ = Kind::EventuallyConstant;
  s.fn_ = [prefix = std::move(prefix), tail](long k) {
    return k < long(prefix.size()) ? prefix[size_t(k)] : tail;
  };
  s.value_limit_ = tail;
  s.diff_limit_ = cplx(0.0);
  return s;
}

Sequence Sequence::tabulated(std::vector<cplx> table, cplx diff_limit) {
  if (table.empty()) throw std::invalid_argument("tabulated sequence needs at least one value");
  Sequence s;
  s.kind_ = Kind::Tabulated;
  long last = long(table.size()) - 1;
  cplx last_value = table.back();
  s.fn_ = [table = std::move(table), last, last_value, diff_limit](long k) {
    if (k <= last) return table[size_t(k)];
    return last_value + diff_limit * double(k - last);
  };
  s.diff_limit_ = diff_limit;
  if (diff_limit == cplx(0.0)) s.value_limit_ = last_value;
  return s;
}

Sequence Sequence::custom(std::function<cplx(long)> fn, std::optional<cplx> value_limit,
                          std::optional<cplx> diff_limit) {
  Sequence s;
  s.kind_ = Kind::Custom;
  s.fn_ = std::move(fn);
  s.value_limit_ = value_limit;
  s.diff_limit_ = diff_limit;
  return s;
}

cplx Sequence::operator()(long k) const {
  require_nonnegative(k);
  return fn_(k);
}

double Sequence::power_exponent() const {
  if (kind_ != Kind::PowerLaw) throw std::logic_error("not a power-law sequence");
  return p_;
}

double Sequence::power_scale() const {
  if (kind_ != Kind::PowerLaw) throw std::logic_error("not a power-law sequence");
  return scale_;
}

cplx eval(const Sequence& seq, long k) { return seq(k); }

Sequence alpha_from(const Sequence& beta, const Sequence& mu) {
  if (std::abs(mu(0) - cplx(1.0)) > 1e-14)
    throw singular_symbol_error("alpha_from requires mu(0) = 1");
  for (long k : {0L, 1L, 2L, 7L, 64L, 1024L, 65536L}) {
    if (std::abs(mu(k)) == 0.0)
      throw singular_symbol_error("mu vanishes at k = " + std::to_string(k));
  }
  auto fn = [beta, mu](long k) {
    cplx m = mu(k);
    if (std::abs(m) == 0.0)
      throw singular_symbol_error("mu vanishes at k = " + std::to_string(k));
    return beta(k) * mu(k + 1) / m;
  };
  // alpha(k)-alpha(k-1) -> beta_infinity when mu(k+1)/mu(k) -> 1
  std::optional<cplx> diff;
  if (beta.diff_limit() && mu.is_power_law()) diff = beta.diff_limit();
  return Sequence::custom(std::move(fn), std::nullopt, diff);
}

WeightSequence WeightSequence::normalize(const Sequence& raw, double tol) {
  auto positive_at = [&raw](long k) {
    cplx v = raw(k);
    return std::abs(v.imag()) < 1e-15 && v.real() > 0.0;
  };
  for (long k = 0; k < 64; ++k) {
    if (!positive_at(k))
      throw std::invalid_argument("weight sequence must be strictly positive (k = " +
                                  std::to_string(k) + ")");
  }

  double total = 0.0;
  double tail = 0.0;
  if (raw.is_power_law()) {
    double p = raw.power_exponent();
    if (p >= -1.0) throw divergence_error("power-law weight with exponent >= -1 is not summable");
    long K = 1024;
    for (;;) {
      // integral comparison: sum_{k>K} (1+k)^p <= (1+K)^{p+1}/(-p-1)
      tail = raw.power_scale() * std::pow(1.0 + double(K), p + 1.0) / (-p - 1.0);
      if (tail <= tol || K >= (1L << 26)) break;
      K *= 2;
    }
    if (tail > tol) throw cannot_bound_error("weight tail bound did not reach tolerance");
    for (long k = 0; k <= K; ++k) total += raw(k).real();
  } else if (raw.kind() == Sequence::Kind::Affine ||
             raw.kind() == Sequence::Kind::EventuallyConstant ||
             raw.kind() == Sequence::Kind::Tabulated) {
    // positive tail value/slope can never sum to a finite mass
    throw divergence_error("strictly positive sequence of this kind is not summable");
  } else {
    // custom kind: operational criterion from the local decay exponent
    long H = 1L << 20;
    for (long k = 0; k <= H; ++k) {
      if (k < (1L << 12) && !positive_at(k))
        throw std::invalid_argument("weight sequence must be strictly positive");
      total += raw(k).real();
    }
    double fH = raw(H).real(), f2 = raw(2 * H).real();
    double e = std::log(f2 / fH) / std::log(2.0);
    if (e >= -1.0) throw divergence_error("weight partial sums do not converge");
    tail = 1.5 * fH * (1.0 + double(H)) / (-e - 1.0);
    if (tail > tol * total * 1e6)
      throw cannot_bound_error("weight tail bound did not reach tolerance");
  }

  double nc = 1.0 / (total + 0.5 * tail);  // midpoint of the certified bracket
  return WeightSequence(raw, nc, nc * 0.5 * tail);
}

double WeightSequence::operator()(long k) const {
  if (k < 0) throw std::domain_error("weight index must be >= 0");
  return nc_ * raw_(k).real();
}

double WeightSequence::shifted(long k, long m) const {
  if (k - m < 0) throw std::domain_error("shifted weight evaluated below its support");
  return (*this)(k - m);
}

WeightSequence normalize_weight(const Sequence& raw, double tol) {
  return WeightSequence::normalize(raw, tol);
}

namespace {
double check_family_constraint(double a, double b, double c) {
  if (!(3.0 < a && a < 2.0 * b - 1.0 && 2.0 * b - 1.0 < c))
    throw std::invalid_argument("power-law family requires 3 < a < 2b-1 < c");
  return a;
}
}  // namespace

PowerLawFamily::PowerLawFamily(double a, double b, double c)
    : a_(check_family_constraint(a, b, c)),
      b_(b),
      c_(c),
      w_(WeightSequence::normalize(Sequence::power_law(-c))),
      wprime_(WeightSequence::normalize(Sequence::power_law(-a))) {}

long predicted_N(const PowerLawFamily& family) {
  // divergence of sum (1+k)^{2n+2b-c} sets in at exponent >= -1,
  // i.e. at the smallest integer n >= (c-2b-1)/2
  double x = (family.c() - 2.0 * family.b() - 1.0) / 2.0;
  long r = std::lround(x);
  long n = (std::abs(x - double(r)) < 1e-9) ? r : long(std::ceil(x));
  return n > 0 ? n : 0;
}

bool kernel_sum_diverges(long n, const Sequence& mu, const WeightSequence& w) {
  if (n < 0) throw std::domain_error("kernel sums are indexed by n >= 0");
  if (mu.is_power_law() && w.raw().is_power_law()) {
    double e = 2.0 * double(n) - 2.0 * mu.power_exponent() + w.raw().power_exponent();
    return e >= -1.0 - 1e-9;
  }
  auto term = [&](long k) {
    double m = std::norm(mu(k));
    return std::pow(1.0 + double(k), 2.0 * double(n)) / m * w(k);
  };
  long H = 100000;
  double inc1 = 0.0, inc2 = 0.0;
  for (long k = H / 10 + 1; k <= H; ++k) inc1 += term(k);
  for (long k = H + 1; k <= 10 * H; ++k) inc2 += term(k);
  if (!(inc2 < std::numeric_limits<double>::max())) return true;
  if (inc1 <= 0.0) return false;
  // partial-sum increments over successive decades scale like 10^{e+1};
  // e >= -1 (non-shrinking increments) is the operational divergence verdict
  double e_hat = std::log10(inc2 / inc1) - 1.0;
  return e_hat >= -1.0 - 0.05;
}

long divergence_oracle_N(const Sequence& mu, const WeightSequence& w, long n_max) {
  for (long n = 0; n <= n_max; ++n)
    if (kernel_sum_diverges(n, mu, w)) return n;
  throw cannot_bound_error("no divergent mode found below n_max");
}

}  // namespace qdisk
