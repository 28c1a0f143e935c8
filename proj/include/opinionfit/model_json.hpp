#pragma once

#include <string>

#include "opinionfit/panel.hpp"

namespace opinionfit {

// Fitted-model JSON with fields family, lag, t_est, objective, W, A, D, S,
// Phi, z, X, seed, n_starts, converged, solver_trace. Matrices are row-major
// arrays, inactive fields null. Values survive a write/read cycle bit for bit.
void write_model_json(const FitResult& fit, const std::string& path);
FitResult read_model_json(const std::string& path);

}  // namespace opinionfit
