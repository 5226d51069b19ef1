#ifndef QDISK_SEQUENCES_HPP
#define QDISK_SEQUENCES_HPP

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdisk {

using cplx = std::complex<double>;

struct divergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singular_symbol_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct cannot_bound_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scalar sequence Z>=0 -> C with declared asymptotic metadata.
///
/// Closed-form kinds (power-law, affine) are evaluated exactly at any index;
/// tabulated kinds carry an explicit tail rule (last value extended with the
/// declared limit of first differences).
class Sequence {
 public:
  enum class Kind { PowerLaw, Affine, EventuallyConstant, Tabulated, Custom };

  // scale * (1+k)^p
  static Sequence power_law(double p, double scale = 1.0);
  // offset + slope*k
  static Sequence affine(double slope, double offset);
  // prefix values, then tail forever
  static Sequence eventually_constant(std::vector<cplx> prefix, cplx tail);
  // table values; beyond the table the last value is extended with the
  // declared first-difference limit
  static Sequence tabulated(std::vector<cplx> table, cplx diff_limit);
  static Sequence custom(std::function<cplx(long)> fn,
                         std::optional<cplx> value_limit = std::nullopt,
                         std::optional<cplx> diff_limit = std::nullopt);

  cplx operator()(long k) const;

  Kind kind() const { return kind_; }
  // lim_{k->inf} f(k), when declared
  std::optional<cplx> value_limit() const { return value_limit_; }
  // lim_{k->inf} f(k+1)-f(k), when declared (beta_infinity for beta kinds)
  std::optional<cplx> diff_limit() const { return diff_limit_; }

  bool is_power_law() const { return kind_ == Kind::PowerLaw; }
  double power_exponent() const;
  double power_scale() const;

 private:
  Sequence() = default;
  Kind kind_ = Kind::Custom;
  std::function<cplx(long)> fn_;
  std::optional<cplx> value_limit_;
  std::optional<cplx> diff_limit_;
  double p_ = 0.0, scale_ = 1.0;  // PowerLaw
};

/// Strictly positive summable sequence normalized to total mass 1,
/// with certified partial-sum-plus-tail-bound accounting.
class WeightSequence {
 public:
  static WeightSequence normalize(const Sequence& raw, double tol = 1e-12);

  double operator()(long k) const;
  // shifted weight k -> w(k-m); requires k >= m
  double shifted(long k, long m) const;
  double norm_const() const { return nc_; }
  double tail_bound() const { return tail_bound_; }
  const Sequence& raw() const { return raw_; }

 private:
  WeightSequence(Sequence raw, double nc, double tail)
      : raw_(std::move(raw)), nc_(nc), tail_bound_(tail) {}
  Sequence raw_;
  double nc_;
  double tail_bound_;
};

/// The power-law example family: w'(k)=w'(0)/(1+k)^a, mu(k)=1/(1+k)^b,
/// w(k)=w(0)/(1+k)^c, beta(k)=1+k, constrained to 3 < a < 2b-1 < c.
class PowerLawFamily {
 public:
  PowerLawFamily(double a, double b, double c);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  Sequence beta() const { return Sequence::affine(1.0, 1.0); }
  Sequence mu() const { return Sequence::power_law(-b_); }
  const WeightSequence& w() const { return w_; }
  const WeightSequence& wprime() const { return wprime_; }

 private:
  double a_, b_, c_;
  WeightSequence w_, wprime_;
};

cplx eval(const Sequence& seq, long k);

// alpha(k) = beta(k) * mu(k+1)/mu(k), requiring mu(0) = 1 and mu nonvanishing
Sequence alpha_from(const Sequence& beta, const Sequence& mu);

WeightSequence normalize_weight(const Sequence& raw, double tol = 1e-12);

// Least n >= 0 with sum_k (1+k)^{2n} |mu(k)|^{-2} w(k) divergent; for the
// power-law family this is max(0, ceil((c-2b-1)/2)), boundary integers on
// the divergent side.
long predicted_N(const PowerLawFamily& family);

// Operational divergence test for the mode-n kernel sum, usable with custom
// sequences: closed-form exponent criterion when both inputs are power laws,
// otherwise partial sums at doubling horizons.
bool kernel_sum_diverges(long n, const Sequence& mu, const WeightSequence& w);

// Smallest divergent n found by kernel_sum_diverges, capped at n_max.
long divergence_oracle_N(const Sequence& mu, const WeightSequence& w,
                         long n_max = 64);

}  // namespace qdisk

#endif
