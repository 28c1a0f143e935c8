#include "opinionfit/diagnose.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "opinionfit/errors.hpp"
#include "opinionfit/estimate.hpp"
#include "opinionfit/format.hpp"
#include "opinionfit/models.hpp"

namespace opinionfit {

double range_violation_index(const SentimentPanel& panel, int b, int t, int tau) {
    const int B = panel.blogs();
    const int T = panel.periods();
    if (tau < 0 || b < 1 || b > B || t < tau + 2 || t > T)
        throw IndexOutOfRange("mu_" + std::to_string(b) + "(" + std::to_string(t) + "," +
                              std::to_string(tau) + ") is undefined for this panel");
    double lo = panel.values(0, t - 2), hi = lo;
    for (int h = 0; h <= tau; ++h)
        for (int k = 0; k < B; ++k) {
            const double v = panel.values(k, t - 2 - h);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi == lo) throw DegenerateRange("all opinions over the reference window are equal");
    return (panel.values(b - 1, t - 1) - lo) / (hi - lo);
}

std::vector<int> violation_summary(const SentimentPanel& panel, int tau, double slack) {
    if (slack < 0.0) throw Error("slack must be >= 0");
    std::vector<int> counts(panel.blogs(), 0);
    for (int b = 1; b <= panel.blogs(); ++b)
        for (int t = tau + 2; t <= panel.periods(); ++t) {
            double mu;
            try {
                mu = range_violation_index(panel, b, t, tau);
            } catch (const DegenerateRange&) {
                continue;
            }
            if (mu < -slack || mu > 1.0 + slack) ++counts[b - 1];
        }
    return counts;
}

double rmse_period(const Vec& predicted, const Vec& observed) {
    if (predicted.size() != observed.size())
        throw DimensionMismatch("rmse_period: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - observed[i];
        s += d * d;
    }
    return std::sqrt(s);
}

namespace {

// Expressed-layer one-step residual vectors over the training transitions.
std::vector<Vec> in_sample_residuals(const FitResult& fit, const SentimentPanel& panel) {
    const int B = panel.blogs();
    const int te = fit.n_train_periods;
    const int tau = fit.spec.lag;
    const ParamSet& p = fit.params;
    std::vector<Vec> out;
    for (int t = tau; t <= te - 2; ++t) {
        Vec r(B);
        const Vec now = get_col(panel.values, t);
        for (int b = 0; b < B; ++b) {
            double pred = 0.0;
            switch (fit.spec.family) {
                case ModelFamily::FDG:
                    pred = dot(p.W.row(b), now.data(), B);
                    break;
                case ModelFamily::FJ:
                    pred = p.S[b] * dot(p.W.row(b), now.data(), B) + (1.0 - p.S[b]) * p.z[b];
                    break;
                case ModelFamily::FDGM:
                    pred = p.S[b] * dot(p.W.row(b), now.data(), B) +
                           (1.0 - p.S[b]) * panel.values(b, t - tau);
                    break;
                case ModelFamily::EPO:
                case ModelFamily::REPO: {
                    double gl = 0.0;
                    for (int k = 0; k < B; ++k) gl += p.A(b, k) * panel.values(k, t - tau);
                    pred = p.Phi[b] * p.X(b, t + 1) + (1.0 - p.Phi[b]) * gl;
                    break;
                }
            }
            r[b] = panel.values(b, t + 1) - pred;
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

MetricReport evaluate(const FitResult& fit, const SentimentPanel& panel,
                      const std::vector<int>& test_periods) {
    const int te = fit.n_train_periods;
    if (test_periods.empty()) throw InvalidSplit("no test periods given");
    int horizon = 0;
    for (int p : test_periods) {
        if (p <= te || p > panel.periods())
            throw InvalidSplit("test period " + std::to_string(p) +
                               " outside (t_est, T]");
        horizon = std::max(horizon, p - te);
    }

    MetricReport rep;
    rep.sum_of_residuals = fit.objective;

    const auto residuals = in_sample_residuals(fit, panel);
    double norm_sum = 0.0, sq_sum = 0.0, ratio_sum = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double n = std::sqrt(sq_norm(residuals[i]));
        norm_sum += n;
        sq_sum += n * n;
        const int t = fit.spec.lag + static_cast<int>(i);  // transition t -> t+1
        const double obs_norm = std::sqrt(sq_norm(get_col(panel.values, t + 1)));
        ratio_sum += n / obs_norm;
    }
    const double nt = static_cast<double>(residuals.size());
    rep.mae = norm_sum / nt;
    rep.mape_percent = 100.0 * ratio_sum / nt;
    rep.rmse_in_sample = std::sqrt(sq_sum / nt);

    const Mat forecast = predict(fit, panel, horizon);
    double sq = 0.0;
    for (int p : test_periods) {
        const double r =
            rmse_period(get_col(forecast, p - te - 1), get_col(panel.values, p - 1));
        rep.rmse_per_test_period.push_back(r);
        sq += r * r;
    }
    rep.rmse_test_overall = std::sqrt(sq / static_cast<double>(test_periods.size()));
    return rep;
}

void write_mu_csv(const SentimentPanel& panel, int tau_max, const std::string& path) {
    if (tau_max < 0) throw Error("tau_max must be >= 0");
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "tau,blog_id,t,mu\n";
    for (int tau = 0; tau <= tau_max; ++tau)
        for (int b = 1; b <= panel.blogs(); ++b)
            for (int t = tau + 2; t <= panel.periods(); ++t)
                out << tau << ',' << panel.blog_ids[b - 1] << ',' << t << ','
                    << format_full(range_violation_index(panel, b, t, tau)) << '\n';
}

void write_eval_csv(const std::vector<EvalRow>& rows, const std::vector<int>& test_periods,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << "model,lag,sum_of_residuals,mae,mape,rmse_in";
    for (int p : test_periods) out << ",rmse_t" << p;
    out << ",rmse_out\n";
    auto sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [](const EvalRow& a, const EvalRow& b) {
        if (a.spec.family != b.spec.family) return a.spec.family < b.spec.family;
        return a.spec.lag < b.spec.lag;
    });
    for (const auto& row : sorted) {
        out << family_name(row.spec.family) << ',' << row.spec.lag << ','
            << format_full(row.report.sum_of_residuals) << ',' << format_full(row.report.mae)
            << ',' << format_full(row.report.mape_percent) << ','
            << format_full(row.report.rmse_in_sample);
        for (double r : row.report.rmse_per_test_period) out << ',' << format_full(r);
        out << ',' << format_full(row.report.rmse_test_overall) << '\n';
    }
}

}  // namespace opinionfit
