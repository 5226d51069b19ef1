#ifndef QDISK_GNS_HPP
#define QDISK_GNS_HPP

#include <span>

#include "qdisk/toeplitz.hpp"

namespace qdisk {

/// H_w bookkeeping: mode n >= 0 sums against w(k), mode n < 0 against w(k-n).
struct WeightedSpace {
  WeightSequence weight;

  double weight_at(long n, long k) const {
    return n >= 0 ? weight(k) : weight(k - n);
  }
};

/// Finitely supported element of H_w (or of the formal series space):
/// mode n -> coefficient array f_n(k), dense from k = 0.
class GnsVector {
 public:
  GnsVector() = default;

  static GnsVector basis(long mode, long k);  // delta at (mode, k)

  void set_mode(long n, std::vector<cplx> coeffs);
  void add_to(long n, long k, cplx v);
  cplx at(long n, long k) const;
  const std::map<long, std::vector<cplx>>& components() const { return comps_; }
  bool empty() const { return comps_.empty(); }
  long max_index(long n) const;

  GnsVector operator+(const GnsVector& o) const;
  GnsVector operator-(const GnsVector& o) const;
  GnsVector scaled(cplx s) const;
  void trim(double tol = 0.0);

 private:
  std::map<long, std::vector<cplx>> comps_;
};

// (f, g)_w, conjugate-linear in the first slot
cplx inner(const GnsVector& f, const GnsVector& g, const WeightedSpace& space);
double norm(const GnsVector& f, const WeightedSpace& space);

// pi_w(a) f = a f
GnsVector act(const ToeplitzElement& a, const GnsVector& f);
// f a (right multiplication; used by the algebraic route for D)
GnsVector act_right(const GnsVector& f, const ToeplitzElement& a);

// U_theta^w: mode n scaled by e^{i n theta}
GnsVector rotate(const GnsVector& f, double theta);

// pi_w(rho_theta(a)) == U_theta^w pi_w(a) (U_theta^w)^{-1} tested on f
bool check_implementing(const ToeplitzElement& a, double theta, const GnsVector& f,
                        const WeightedSpace& space, double tol);

// read a ToeplitzElement as an element of H_w, coefficients up to `horizon`
GnsVector gns_embed(const ToeplitzElement& a, long horizon);

}  // namespace qdisk

#endif
