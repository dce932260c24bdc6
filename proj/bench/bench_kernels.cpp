// Times each kernel's serial reference against its OpenMP version on Gamma_n
// and checks the two agree.

#include <chrono>
#include <cstdio>
#include <random>

#include <omp.h>

#include "CLI11.hpp"
#include "laakso/kernels.hpp"
#include "laakso/spaces.hpp"

using namespace laakso;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* kernel, int level, double serial, double parallel, bool agree) {
  std::printf("%-22s %5d %12.4f %12.4f %8.2fx  %s\n", kernel, level, serial, parallel, serial / parallel,
              agree ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel kernel timings"};
  int level = 6, triangle_level = 5, reps = 3;
  app.add_option("--level", level, "Level for shortest paths, ratios and balls");
  app.add_option("--triangle-level", triangle_level, "Level for the cubic triangle scan");
  app.add_option("--reps", reps, "Repetitions; the best time is reported");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %5s %12s %12s %9s\n", "kernel", "level", "serial s", "parallel s", "speedup");
  const LevelGraph g = build_gamma(level);
  const Graph& graph = g.graph();

  std::vector<std::int64_t> a, b;
  const double ts = best_of(reps, [&] { a = kernels::serial::all_pairs(graph); });
  const double tp = best_of(reps, [&] { b = kernels::parallel::all_pairs(graph); });
  row("all_pairs", level, ts, tp, a == b);

  const FiniteMetricSpace metric = path_metric(g);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t dim = 16;
  std::vector<double> coords(metric.size() * dim);
  for (double& x : coords) x = gauss(rng);
  for (double p : {2.0, 3.0}) {
    kernels::PairExtrema es, ep;
    const double s = best_of(reps, [&] { es = kernels::serial::pair_ratio_extrema(metric, coords, dim, p); });
    const double q = best_of(reps, [&] { ep = kernels::parallel::pair_ratio_extrema(metric, coords, dim, p); });
    row(p == 2.0 ? "pair_ratio_extrema p=2" : "pair_ratio_extrema p=3", level, s, q,
        es.max_ratio == ep.max_ratio && es.min_ratio == ep.min_ratio && es.argmax == ep.argmax &&
            es.argmin == ep.argmin);
  }

  kernels::BallCount bs, bp;
  const double s = best_of(reps, [&] { bs = kernels::serial::max_ball(graph, 4, kernels::BallKind::kClosed); });
  const double q = best_of(reps, [&] { bp = kernels::parallel::max_ball(graph, 4, kernels::BallKind::kClosed); });
  row("max_ball r=4", level, s, q, bs.max_cardinality == bp.max_cardinality && bs.center == bp.center);

  const FiniteMetricSpace small = path_metric(build_gamma(triangle_level));
  std::optional<std::array<std::size_t, 3>> vs, vp;
  const double s3 = best_of(reps, [&] { vs = kernels::serial::triangle_violation(small); });
  const double q3 = best_of(reps, [&] { vp = kernels::parallel::triangle_violation(small); });
  row("triangle_violation", triangle_level, s3, q3, vs == vp);
  return 0;
}
