#ifndef QDISK_KERNELS_HPP
#define QDISK_KERNELS_HPP

#include "qdisk/dirac.hpp"

namespace qdisk::kernels {

/// Certified partial double sum: value plus an integral-comparison tail
/// bound estimated from the local decay exponent. finite == false means the
/// local exponents signalled divergence.
struct SumResult {
  bool finite = false;
  double value = 0.0;
  double tail = 0.0;
};

struct SumOptions {
  long max_rows = 1024;       // rows of the double sum evaluated exactly
  double chunk_stretch = 2.0; // per-row columns: j up to (1+stretch)*k + 64
};

// squared Hilbert-Schmidt norm of the mode parametrix, weighted per regime
SumResult hs_squared(const ModeParametrix& q, const SumOptions& opt = {});
// serial reference implementation; identical summation order
SumResult hs_squared_serial(const ModeParametrix& q, const SumOptions& opt = {});

// sum_{k,j} (max(j,k)+1)^{-2} |mu(j)/mu(k)|^2 w(k)/w'(j)
SumResult condition_six(const ModeContext& ctx, const SumOptions& opt = {});
SumResult condition_six_serial(const ModeContext& ctx, const SumOptions& opt = {});

// HS norms for a window of modes, fanned out across modes
std::vector<HsResult> hs_sweep(long n_min, long n_max, long N, const ModeContext& ctx,
                               const SumOptions& opt = {});
std::vector<HsResult> hs_sweep_serial(long n_min, long n_max, long N,
                                      const ModeContext& ctx, const SumOptions& opt = {});

}  // namespace qdisk::kernels

#endif
