#pragma once

#include <string>
#include <vector>

#include "opinionfit/panel.hpp"

namespace opinionfit {

// Single-step updates. All of them are convex combinations of their inputs,
// so [0,1] vectors stay in [0,1]; results are clamped to [0,1] to keep that
// closed under rounding.
Vec step_fdg(const Mat& W, const Vec& x);
Vec step_fj(const Mat& W, const Vec& S, const Vec& z, const Vec& x);
Vec step_fdgm(const Mat& W, const Vec& S, const Vec& x_now, const Vec& x_lagged);
Vec epo_expressed(const Vec& Phi, const Mat& A, const Vec& x_now, const Vec& xe_lagged);
// For the reduced model pass S = 1; z may then be empty.
Vec step_epo_private(const Mat& W, const Vec& S, const Vec& z, const Vec& x_now,
                     const Vec& xe_now);

// Simulation state. Histories are ordered oldest first, most recent last,
// and must hold at least lag+1 entries before a delayed step is taken.
struct SimState {
    Vec x;                        // current private opinion (EPO/REPO) or opinion (FDG/FJ)
    std::vector<Vec> xe_history;  // expressed opinions (EPO/REPO)
    std::vector<Vec> x_history;   // own past opinions (FDGM)
};

struct SimPoint {
    Vec x;
    Vec xe;
};

std::vector<SimPoint> simulate(const ModelSpec& spec, const ParamSet& params, SimState init,
                               int horizon);

// Launch state for forecasting from the end of the training window: EPO/REPO
// start from the fitted latent state, everything else from the observed
// panel.
SimState forecast_state(const FitResult& fit, const SentimentPanel& panel);

// Iterates the fitted dynamics from period T_est. Returns the expressed
// layer, one column per forecast period.
Mat predict(const FitResult& fit, const SentimentPanel& panel, int horizon);

// Trajectory CSV: columns `t, blog_id, x, xe`; t starts at t_start.
void write_trajectory_csv(const std::vector<SimPoint>& traj,
                          const std::vector<std::string>& blog_ids, int t_start,
                          const std::string& path);

}  // namespace opinionfit
