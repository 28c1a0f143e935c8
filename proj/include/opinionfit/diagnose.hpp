#pragma once

#include <string>
#include <vector>

#include "opinionfit/panel.hpp"

namespace opinionfit {

struct MetricReport {
    double sum_of_residuals = 0.0;
    double mae = 0.0;
    double mape_percent = 0.0;
    double rmse_in_sample = 0.0;
    std::vector<double> rmse_per_test_period;
    double rmse_test_overall = 0.0;
};

// Range violation index mu_b(t, tau): position of sigma_b(t) relative to the
// min/max over all blogs and the tau+1 periods before t. Indices b and t are
// 1-based period/blog numbers, matching the exported CSV. Defined for
// t >= tau + 2.
double range_violation_index(const SentimentPanel& panel, int b, int t, int tau);

// Per-blog count of periods whose mu falls outside [-slack, 1 + slack].
// Periods with a degenerate range (all prior opinions equal) count as zero.
std::vector<int> violation_summary(const SentimentPanel& panel, int tau, double slack);

// Euclidean norm of the cross-blog error vector for one period (no division
// by B).
double rmse_period(const Vec& predicted, const Vec& observed);

// Table-style evaluation of a fit: in-sample errors over the training
// transitions plus iterated out-of-sample forecasts for the given 1-based
// test periods.
MetricReport evaluate(const FitResult& fit, const SentimentPanel& panel,
                      const std::vector<int>& test_periods);

// Long-format CSV `tau,blog_id,t,mu` for tau = 0..tau_max.
void write_mu_csv(const SentimentPanel& panel, int tau_max, const std::string& path);

// Comparison CSV mirroring the published error table layout.
struct EvalRow {
    ModelSpec spec;
    MetricReport report;
};
void write_eval_csv(const std::vector<EvalRow>& rows, const std::vector<int>& test_periods,
                    const std::string& path);

}  // namespace opinionfit
