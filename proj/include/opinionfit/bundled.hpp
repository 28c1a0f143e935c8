#pragma once

#include <map>
#include <utility>

#include "opinionfit/panel.hpp"

namespace opinionfit {

// Published error-table row for one model.
struct ReferenceMetrics {
    double sum_of_residuals = 0.0;
    double mae = 0.0;
    double mape_percent = 0.0;
    double rmse_in = 0.0;
    double rmse_t11 = 0.0;
    double rmse_t12 = 0.0;
    double rmse_out = 0.0;
};

// Reference dataset compiled into the binary: the 7x12 observed sentiment
// panel, the published fitted parameters (rounded to 1e-4; latent states were
// not published, so X is empty), the published error table, and the published
// two-period-ahead reduced-EPO forecasts.
struct BundledDataset {
    SentimentPanel panel;
    std::map<std::pair<ModelFamily, int>, ParamSet> reference_params;
    std::map<std::pair<ModelFamily, int>, ReferenceMetrics> reference_metrics;
    Mat reference_forecasts;  // 7 x 2, periods 11 and 12
};

const BundledDataset& bundled();

}  // namespace opinionfit
