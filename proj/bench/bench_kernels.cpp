// Serial reference vs OpenMP kernels on the same inputs; results must match.
#include <chrono>
#include <cstdio>
#include <functional>
#include <omp.h>

#include "support/generators.hpp"
#include "swing/oracle.hpp"
#include "swing/shortfall.hpp"

using namespace swing;

namespace {

template <class Fn>
double time_ms(Fn&& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, const std::function<bool(Execution)>& kernel, int reps = 3) {
  bool same = true;
  const double serial = time_ms([&] { same = kernel(Execution::serial) && same; }, reps);
  const double parallel = time_ms([&] { same = kernel(Execution::parallel) && same; }, reps);
  std::printf("%-34s %10.1f %10.1f %8.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "match" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");
  swing::testing::Rng rng(42);

  auto big = swing::testing::random_contract(rng, swing::testing::random_tree(rng, 14), 3);
  const auto reference = price_swing(big, Execution::serial);
  row("price_swing N=14 L=3", [&](Execution e) { return price_swing(big, e).value == reference.value; });
  const auto single = dynkin_value(big.tree(), big.cancel(0), big.exercise(0), Measure::martingale, Execution::serial);
  row("dynkin_value N=14", [&](Execution e) {
    return dynkin_value(big.tree(), big.cancel(0), big.exercise(0), Measure::martingale, e) == single;
  });

  auto mid = swing::testing::random_contract(rng, swing::testing::random_tree(rng, 7), 2);
  const auto risk_ref = risk_recursion(mid, Execution::serial);
  row("risk_recursion N=7 L=2", [&](Execution e) {
    auto st = risk_recursion(mid, e);
    return st.value(0, 2) == risk_ref.value(0, 2);
  }, 1);

  auto hedge = swing::testing::random_contract(rng, swing::testing::random_tree(rng, 8), 2);
  auto hs = price_swing(hedge);
  auto ho = optimal_strategies(hs);
  auto pi = build_perfect_hedge(hedge, hs);
  row("verify_perfect_hedge N=8 L=2", [&](Execution e) {
    return verify_perfect_hedge(hedge, pi, ho.seller, 1'000'000, e).holds;
  }, 1);

  auto small = swing::testing::random_contract(rng, swing::testing::random_tree(rng, 3), 2);
  const auto bf = brute_force_value(small, kDefaultEnumerationCap, Execution::serial);
  row("brute_force_value N=3 L=2", [&](Execution e) {
    return brute_force_value(small, kDefaultEnumerationCap, e).upper == bf.upper;
  }, 1);
  return 0;
}
