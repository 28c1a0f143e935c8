// Benchmark: multi-start fitting with the OpenMP driver vs the serial
// reference. Both must produce the same result; only wall time differs.

#include <chrono>
#include <cstdio>

#include "opinionfit/bundled.hpp"
#include "opinionfit/estimate.hpp"

using namespace opinionfit;
namespace chrono = std::chrono;

namespace {

double time_ms(FitResult (*driver)(const ModelSpec&, const SentimentPanel&, int,
                                   const SolverConfig&),
               const ModelSpec& spec, const SentimentPanel& panel, int t_est,
               const SolverConfig& cfg, FitResult& out) {
    const auto t0 = chrono::steady_clock::now();
    out = driver(spec, panel, t_est, cfg);
    const auto t1 = chrono::steady_clock::now();
    return chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
    const auto& panel = bundled().panel;
    SolverConfig cfg;
    cfg.seed = 1;

    const ModelSpec cases[] = {
        {ModelFamily::FDG, 0},
        {ModelFamily::FJ, 0},
        {ModelFamily::REPO, 1},
        {ModelFamily::EPO, 2},
    };

    std::printf("%-10s %12s %12s %9s %8s\n", "model", "serial(ms)", "parallel(ms)", "speedup",
                "match");
    for (const auto& spec : cases) {
        FitResult serial_res, parallel_res;
        const double ts = time_ms(fit_serial, spec, panel, 10, cfg, serial_res);
        const double tp = time_ms(fit, spec, panel, 10, cfg, parallel_res);
        const bool match = serial_res.objective == parallel_res.objective &&
                           serial_res.params == parallel_res.params;
        std::printf("%-6s lag%d %12.1f %12.1f %8.2fx %8s\n", family_name(spec.family),
                    spec.lag, ts, tp, ts / tp, match ? "yes" : "NO");
        if (!match) return 1;
    }
    std::printf("threads: %d\n", multistart_threads());
    return 0;
}
