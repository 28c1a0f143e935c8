#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "opinionfit/linalg.hpp"

namespace opinionfit {

enum class ModelFamily { FDG, FJ, FDGM, EPO, REPO };

const char* family_name(ModelFamily f);
ModelFamily family_from_name(const std::string& name);  // throws InvalidModelSpec

// Model family plus expressed-layer lag. FDG and FJ take lag 0 only;
// FDGM needs lag >= 1.
struct ModelSpec {
    ModelFamily family = ModelFamily::FDG;
    int lag = 0;
    bool operator==(const ModelSpec&) const = default;
};

ModelSpec make_model_spec(ModelFamily family, int lag);  // validates

// Observed collective sentiments: one row per blog, one column per period,
// all entries in [0,1]. Immutable after validate_panel.
struct SentimentPanel {
    Mat values;
    std::vector<std::string> blog_ids;
    std::vector<std::string> period_labels;

    int blogs() const { return values.rows; }
    int periods() const { return values.cols; }
};

SentimentPanel validate_panel(Mat values, std::vector<std::string> blog_ids,
                              std::vector<std::string> period_labels);

// Full parameter bundle. Which fields are populated depends on the family:
//   FDG:   W
//   FJ:    W, S, z
//   FDGM:  W, S
//   EPO:   A, D, S, Phi, z, X   (W = diag(D) + (I - diag(D)) A, stored)
//   REPO:  A, D, Phi, X         (W as above; S stored as all-ones; z empty)
// Unused fields stay empty.
struct ParamSet {
    Mat W;    // B x B, row-stochastic
    Mat A;    // B x B, row-stochastic, zero diagonal
    Vec D;    // diagonal coupling, entries in [0,1]
    Vec S;    // susceptibilities, entries in [0,1]
    Vec Phi;  // expression coefficients, entries in [0,1]
    Vec z;    // innate opinions, entries in [0,1]
    Mat X;    // B x T_est latent private opinions, entries in [0,1]

    bool operator==(const ParamSet&) const = default;
};

std::set<std::string> active_parameters(const ModelSpec& spec);

// Checked construction. Rows whose sums deviate from 1 by at most row_slack
// are renormalized; anything worse throws InvalidParamSet. For EPO/REPO the
// stored W is rebuilt from (D, A) so the coupling identity holds exactly;
// a supplied W farther than coupling_slack from the rebuilt one is rejected.
// require_latents=false admits parameter bundles without X (published
// parameter tables omit the latent states).
ParamSet make_params(const ModelSpec& spec, ParamSet raw, double row_slack = 1e-9,
                     double coupling_slack = 1e-9, bool require_latents = true);

// Invariant check without renormalization; throws on violation.
void check_params(const ModelSpec& spec, const ParamSet& p, int n_blogs,
                  bool require_latents = true);

struct TracePoint {
    long iteration = 0;
    double objective = 0.0;
    bool operator==(const TracePoint&) const = default;
};

struct FitResult {
    ModelSpec spec;
    ParamSet params;
    double objective = 0.0;
    int n_train_periods = 0;
    std::vector<TracePoint> solver_trace;
    std::uint64_t seed = 0;
    int n_starts = 1;
    bool converged = false;

    bool operator==(const FitResult&) const = default;
};

// Panel CSV: header `blog_id,p1,...,pT`, one row per blog.
SentimentPanel read_panel_csv(const std::string& path);
void write_panel_csv(const SentimentPanel& panel, const std::string& path);

}  // namespace opinionfit
