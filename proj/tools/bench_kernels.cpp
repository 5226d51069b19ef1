// Timing comparison of the OpenMP double-sum kernels against their serial
// reference implementations.

#include <chrono>
#include <cstdio>

#include "qdisk/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <typename F>
double time_ms(F&& f, int reps = 3) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled (serial build)\n");
#endif

  qdisk::PowerLawFamily family(4.0, 3.0, 5.5);
  qdisk::ModeContext ctx = qdisk::context_from(family);
  long N = qdisk::predicted_N(family);

  std::printf("%-28s %12s %12s %8s\n", "kernel", "serial [ms]", "parallel", "speedup");

  {
    qdisk::ModeParametrix q(3, N, ctx);
    volatile double sink = 0.0;
    double ts = time_ms([&] { sink = qdisk::kernels::hs_squared_serial(q).value; });
    double tp = time_ms([&] { sink = qdisk::kernels::hs_squared(q).value; });
    std::printf("%-28s %12.2f %12.2f %7.2fx\n", "hs_squared (n=3)", ts, tp, ts / tp);
    (void)sink;
  }
  {
    qdisk::ModeParametrix q(-7, N, ctx);
    volatile double sink = 0.0;
    double ts = time_ms([&] { sink = qdisk::kernels::hs_squared_serial(q).value; });
    double tp = time_ms([&] { sink = qdisk::kernels::hs_squared(q).value; });
    std::printf("%-28s %12.2f %12.2f %7.2fx\n", "hs_squared (n=-7)", ts, tp, ts / tp);
    (void)sink;
  }
  {
    volatile double sink = 0.0;
    double ts = time_ms([&] { sink = qdisk::kernels::condition_six_serial(ctx).value; });
    double tp = time_ms([&] { sink = qdisk::kernels::condition_six(ctx).value; });
    std::printf("%-28s %12.2f %12.2f %7.2fx\n", "condition_six", ts, tp, ts / tp);
    (void)sink;
  }
  {
    volatile double sink = 0.0;
    double ts = time_ms(
        [&] { sink = qdisk::kernels::hs_sweep_serial(-15, 15, N, ctx).back().value; }, 1);
    double tp =
        time_ms([&] { sink = qdisk::kernels::hs_sweep(-15, 15, N, ctx).back().value; }, 1);
    std::printf("%-28s %12.2f %12.2f %7.2fx\n", "hs_sweep (-15..15)", ts, tp, ts / tp);
    (void)sink;
  }
  return 0;
}
