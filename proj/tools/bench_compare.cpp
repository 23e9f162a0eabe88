// Compares the serial reference trial runner against the OpenMP path on a
// small suite: results must match exactly, wall time should not.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kdrrf/bench.hpp"

using namespace kdrrf;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

int main(int argc, char** argv) {
    BenchConfig cfg;
    cfg.tasks = {TaskKind::Relocating, TaskKind::SortingRegions};
    cfg.trials = argc > 1 ? std::atoi(argv[1]) : 8;
    cfg.budget_override = 30.0;
    cfg.seed = 42;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif

    cfg.jobs = 1;
    double t0 = now_seconds();
    BenchmarkReport serial = run_benchmark(cfg);
    double serial_time = now_seconds() - t0;

    cfg.jobs = threads;
    t0 = now_seconds();
    BenchmarkReport parallel = run_benchmark(cfg);
    double parallel_time = now_seconds() - t0;

    bool identical = report_to_json(serial) == report_to_json(parallel);
    std::printf("trials per task:  %d\n", cfg.trials);
    std::printf("serial:           %.2f s\n", serial_time);
    std::printf("parallel (%2d):    %.2f s\n", threads, parallel_time);
    std::printf("speedup:          %.2fx\n", parallel_time > 0.0 ? serial_time / parallel_time : 0.0);
    std::printf("reports identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
