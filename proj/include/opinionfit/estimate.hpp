#pragma once

#include <cstdint>

#include "opinionfit/panel.hpp"

namespace opinionfit {

enum class StepRule { Fixed, Backtracking };

struct SolverConfig {
    int n_starts = 16;
    std::uint64_t seed = 0;
    long max_iterations = 100000;
    double rel_tol = 1e-9;
    StepRule step_rule = StepRule::Backtracking;
    // Solver self-test hook: pins S = 1 during FJ fits, which must reproduce
    // the FDG objective.
    bool freeze_s_at_one = false;
};

// Estimation objective: sum of squared one-step residual norms over the
// training prefix (both layers for EPO/REPO, with the latent states taken
// from params.X). Delayed families sum from t = 1 + lag.
double objective(const ModelSpec& spec, const ParamSet& params, const SentimentPanel& panel,
                 int t_est);

// Exact Euclidean projection onto the probability simplex (sort-based).
Vec project_simplex(Vec v);

// Entrywise clamp to [lo, hi].
Vec project_box(Vec v, double lo, double hi);

// Constrained least-squares identification via projected block-coordinate
// descent, best result over n_starts independently seeded runs. Multi-starts
// run in parallel (OpenMP, capped by OPINIONFIT_THREADS); the outcome does
// not depend on scheduling.
FitResult fit(const ModelSpec& spec, const SentimentPanel& panel, int t_est,
              const SolverConfig& config = {});

// Serial reference driver: identical result to fit(), one start at a time.
FitResult fit_serial(const ModelSpec& spec, const SentimentPanel& panel, int t_est,
                     const SolverConfig& config = {});

// Max relative deviation between the analytic objective gradient and central
// finite differences (h = 1e-6) over all active parameters. Requires params
// at least 1e-3 away from every box boundary.
double gradient_check(const ModelSpec& spec, const ParamSet& params,
                      const SentimentPanel& panel, int t_est);

// Thread cap for multi-start parallelism (env OPINIONFIT_THREADS, else the
// OpenMP default).
int multistart_threads();

}  // namespace opinionfit
