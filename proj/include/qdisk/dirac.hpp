#ifndef QDISK_DIRAC_HPP
#define QDISK_DIRAC_HPP

#include "qdisk/gns.hpp"

namespace qdisk {

/// All data defining D = U beta(K) f - f U alpha(K) between H_w and H_{w'},
/// with alpha tied to (beta, mu) by alpha(k) = beta(k) mu(k+1)/mu(k).
struct ModeContext {
  Sequence beta;
  Sequence mu;
  WeightSequence w;       // domain weight
  WeightSequence wprime;  // codomain weight

  Sequence alpha() const { return alpha_from(beta, mu); }

  // weight of l^2_{w_n} at index k (domain of D_n)
  double dom_weight(long n, long k) const { return n >= 0 ? w(k) : w(k - n); }
  // weight of l^2_{w'} / l^2_{w'_{n+1}} at index k (codomain of D_n)
  double cod_weight(long n, long k) const {
    return n >= 0 ? wprime(k) : wprime(k - n - 1);
  }
};

ModeContext context_from(const PowerLawFamily& family);

// product beta(start) ... beta(start+count-1), empty product = 1,
// returned as (log magnitude, phase)
struct LogScalar {
  double logmag = 0.0;
  double phase = 0.0;

  cplx value() const { return std::polar(std::exp(logmag), phase); }
  LogScalar times(const LogScalar& o) const { return {logmag + o.logmag, phase + o.phase}; }
  LogScalar over(const LogScalar& o) const { return {logmag - o.logmag, phase - o.phase}; }
  static LogScalar of(cplx z) { return {std::log(std::abs(z)), std::arg(z)}; }
};

LogScalar log_prod_beta(const Sequence& beta, long start, long count);

// bidiagonal action of the mode operator; output support = input support + 1
std::vector<cplx> apply_mode(long n, std::span<const cplx> f, const ModeContext& ctx);

// Df computed mode-wise: mode n feeds mode n+1
GnsVector apply_D(const GnsVector& f, const ModeContext& ctx);

// weighted adjoint of the mode operator: <D_n f, g>_cod = <f, D_n* g>_dom
std::vector<cplx> adjoint_apply(long n, std::span<const cplx> g, const ModeContext& ctx);

// D* : H_{w'} -> H_w, mode m feeds mode m-1
GnsVector apply_D_star(const GnsVector& g, const ModeContext& ctx);

/// Formal kernel direction of D_n: h(k) = beta(k)...beta(k+n-1) / mu(k).
class KernelVector {
 public:
  KernelVector(long n, const ModeContext& ctx);
  long mode() const { return n_; }
  cplx operator()(long k) const;
  std::vector<cplx> truncated(long K) const;

 private:
  long n_;
  Sequence beta_, mu_;
};

struct MembershipVerdict {
  bool in_space;
  double partial_sum;   // partial sum of the weighted norm^2
  double growth_ratio;  // horizon-stretch growth evidence
};

// is h^{(n)} an element of l^2_w?
MembershipVerdict kernel_membership(long n, const ModeContext& ctx);

enum class ParametrixRegime { Inverse, Corrected, LowerInverse };

/// Exact mode-wise parametrix: upper-triangular kernel for n >= N, with a
/// rank-1 correction for 0 <= n < N, lower-triangular inverse for n < 0.
class ModeParametrix {
 public:
  ModeParametrix(long n, long N, const ModeContext& ctx);

  long mode() const { return n_; }
  long regime_boundary() const { return N_; }
  ParametrixRegime regime() const { return regime_; }
  const ModeContext& ctx() const { return ctx_; }

  // triangular kernel entry before the rank-1 correction
  cplx base_entry(long k, long j) const;
  // full kernel entry including the correction (Corrected regime)
  cplx entry(long k, long j) const;

  std::vector<cplx> apply(std::span<const cplx> g, long out_len) const;

  // C_n f = (f(0) / (beta(0)...beta(n-1))) h^{(n)}; zero unless Corrected
  std::vector<cplx> defect_apply(std::span<const cplx> f, long out_len) const;

 private:
  long n_, N_;
  ModeContext ctx_;
  ParametrixRegime regime_;
};

ModeParametrix build_parametrix(long n, long N, const ModeContext& ctx);

struct HsResult {
  bool finite = false;
  double value = 0.0;       // certified partial double sum (sqrt taken)
  double tail_bound = 0.0;  // bound on the sqrt-scale remainder
};

// Hilbert-Schmidt norm of the mode-n parametrix with certified tails;
// parallel kernel with a serial reference (see kernels.hpp)
HsResult hs_norm(const ModeParametrix& q, double tol = 1e-10);

/// Truncated block operator [[0, D],[D*, 0]] on H_{w'} (+) H_w,
/// weight-orthonormalized so conjugate transpose is the weighted adjoint.
/// Basis layout: component (0 = H_{w'}, 1 = H_w), then mode, then k.
struct DiracAssembly {
  long K;
  long n_min, n_max;
  ModeContext ctx;
  Eigen::MatrixXcd dirac;      // 2*M*(K+1) square, M = mode count
  Eigen::VectorXd grading;     // +1 on the H_{w'} block, -1 on H_w

  long block_dim() const { return (n_max - n_min + 1) * (K + 1); }
  long index(int component, long n, long k) const {
    return component * block_dim() + (n - n_min) * (K + 1) + k;
  }
  // orthonormalized pi(a) = diag(pi_{w'}(a), pi_w(a)) on the same basis
  Eigen::MatrixXcd represent_pi(const ToeplitzElement& a) const;
};

DiracAssembly assemble(long K, long n_min, long n_max, const ModeContext& ctx);

// weight-orthonormalized dense matrix of the truncated D_n
Eigen::MatrixXcd mode_matrix(long n, long K, const ModeContext& ctx);

}  // namespace qdisk

#endif
