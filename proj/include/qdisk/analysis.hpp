#ifndef QDISK_ANALYSIS_HPP
#define QDISK_ANALYSIS_HPP

#include <cstdint>

#include "qdisk/kernels.hpp"

namespace qdisk {

enum class Verdict { Holds, Fails, Inconclusive };

const char* to_string(Verdict v);

struct ConditionReport {
  std::string id;  // one, three, five, six, seven
  Verdict verdict = Verdict::Inconclusive;
  double partial_sum = 0.0;
  double tail_bound = 0.0;
  long witness = -1;    // failing index when applicable
  long computed_N = -1; // condition seven only
  std::string detail;
};

struct Tolerances {
  double identity = 1e-10;
  double unitary = 1e-12;
  double tail = 1e-8;
  double stabilization = 1e-6;
};

struct TripleReport {
  std::vector<ConditionReport> conditions;
  long kernel_dim = -1;
  long predicted_n = -1;
  double implementation_residual = 0.0;
  double covariance_residual = 0.0;
  double parametrix_residual = 0.0;
  long max_defect_rank = 0;
  double grading_anticommutator = 0.0;
  double grading_pi_commutator = 0.0;
  double assembly_asymmetry = 0.0;
  double commutator_delta_u = 0.0;
  double commutator_delta_ustar = 0.0;
  double hs_max_core = 0.0;  // max ||Q_n||_HS over small |n|
  double hs_max_tail = 0.0;  // max over large |n|
  bool pass = false;
  std::string first_failure;
};

ConditionReport check_condition(const std::string& id, const ModeContext& ctx,
                                double tol = 1e-8);

// number of modes n >= 0 whose formal kernel vector lies in l^2_w
long kernel_dimension(const ModeContext& ctx);

// interior-windowed operator norm of the truncated [Dirac, pi(a)]
double commutator_norm(const ToeplitzElement& a, long K, const ModeContext& ctx,
                       long n_min = -6, long n_max = 6);

// singular values of the weight-orthonormalized truncated D_n,
// edge rows/columns excluded, descending
std::vector<double> singular_values(long n, long K, const ModeContext& ctx);

TripleReport verify_triple(const ModeContext& ctx, const Tolerances& tols,
                           std::uint64_t seed, long K = 128, long mode_window = 10);

// deterministic finitely supported random fixtures
GnsVector random_vector(std::uint64_t seed, long n_min, long n_max, long support = 6);
ToeplitzElement random_element(std::uint64_t seed, long max_mode, long prefix_len);

}  // namespace qdisk

#endif
