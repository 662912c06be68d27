#include <chrono>
#include <cstdio>
#include <thread>

#include "odx/search.hpp"

using namespace odx;

namespace {

double timed(const char* name, const FactorLayout& layout, int n_slides, const ModelSpec& m,
             const SearchOptions& opts) {
  const auto w = CriterionWeights::two_factor(layout, Rational(2));
  const auto start = std::chrono::steady_clock::now();
  const SearchResult r = exhaustive_w_optimal(layout, n_slides, m, w, opts);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%-34s %8.3fs  criterion %s  optima %lld\n", name, secs, r.criterion.str().c_str(),
              r.optima_count);
  return secs;
}

}  // namespace

int main() {
  const FactorLayout l23({2, 3});
  const int threads = static_cast<int>(std::thread::hardware_concurrency());
  std::printf("hardware threads: %d\n\n", threads);

  SearchOptions reference;
  reference.reference_kernel = true;
  SearchOptions serial;
  SearchOptions parallel;
  parallel.jobs = threads > 0 ? threads : 4;

  std::printf("2x3 plain, 6 slides, 38760 candidates\n");
  const double ref_small = timed("  rational reference (serial)", l23, 6, ModelSpec::plain(),
                                 reference);
  const double fast_small = timed("  incremental kernel (serial)", l23, 6, ModelSpec::plain(),
                                  serial);
  std::printf("  kernel speedup over reference: %.1fx\n\n", ref_small / fast_small);

  std::printf("2x3 common dye, 6 slides, 1623160 candidates\n");
  const double fast_serial = timed("  incremental kernel (serial)", l23, 6,
                                   ModelSpec::reduced_dye(), serial);
  const double fast_parallel = timed("  incremental kernel (parallel)", l23, 6,
                                     ModelSpec::reduced_dye(), parallel);
  std::printf("  parallel speedup: %.1fx at %d jobs\n", fast_serial / fast_parallel,
              parallel.jobs);
  return 0;
}
