// Times the OpenMP measure-analysis kernel against the serial reference and
// verifies the two produce bitwise-identical coefficient fields.
#include <omp.h>

#include <cstdio>

#include "wavipm/coefficients.hpp"
#include "wavipm/measure.hpp"
#include "wavipm/wavelet.hpp"

using namespace wavipm;

int main(int argc, char** argv) {
  int atoms = argc > 1 ? std::atoi(argv[1]) : 4096;
  int max_level = argc > 2 ? std::atoi(argv[2]) : 8;

  auto fam = WaveletFamily::build(4, 12);
  auto mu = quadrature_measure(make_perturbed_circle(0.0, 16), atoms);

  // warm-up and correctness check
  auto serial = analyze_measure_serial(mu, fam, max_level);
  auto parallel = analyze_measure(mu, fam, max_level);
  bool identical = serial.entries() == parallel.entries();

  double t0 = omp_get_wtime();
  for (int r = 0; r < 3; ++r) analyze_measure_serial(mu, fam, max_level);
  double t_serial = (omp_get_wtime() - t0) / 3;

  t0 = omp_get_wtime();
  for (int r = 0; r < 3; ++r) analyze_measure(mu, fam, max_level);
  double t_parallel = (omp_get_wtime() - t0) / 3;

  std::printf("atoms %d, levels 0..%d, entries %zu, threads %d\n", atoms,
              max_level, serial.entries().size(), omp_get_max_threads());
  std::printf("serial   %8.3f ms\n", 1e3 * t_serial);
  std::printf("parallel %8.3f ms  (speedup %.2fx)\n", 1e3 * t_parallel,
              t_serial / t_parallel);
  std::printf("bitwise identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
