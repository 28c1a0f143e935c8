// opinionfit: fit averaging-based opinion-dynamics models to collective
// sentiment panels, forecast, and export diagnostics.
//
// Exit codes: 0 success, 1 usage or data error, 2 incomplete records
// (a blog/period cell without data).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opinionfit/aggregate.hpp"
#include "opinionfit/bundled.hpp"
#include "opinionfit/diagnose.hpp"
#include "opinionfit/errors.hpp"
#include "opinionfit/estimate.hpp"
#include "opinionfit/format.hpp"
#include "opinionfit/model_json.hpp"
#include "opinionfit/models.hpp"
#include "opinionfit/panel.hpp"

namespace fs = std::filesystem;
using namespace opinionfit;

namespace {

SentimentPanel load_panel(const std::string& arg) {
    if (arg == "bundled") return bundled().panel;
    return read_panel_csv(arg);
}

int cmd_aggregate(const std::string& records_csv, const std::string& out_panel_csv) {
    const auto records = read_records_csv(records_csv);
    int n_periods = 0;
    std::map<std::string, std::map<int, long>> cell_counts;
    for (const auto& r : records) {
        n_periods = std::max(n_periods, r.period);
        ++cell_counts[r.blog_id][r.period];
    }
    const int n_blogs = static_cast<int>(cell_counts.size());
    const auto panel = build_panel(records, n_blogs, n_periods);
    write_panel_csv(panel, out_panel_csv);
    std::printf("B=%d T=%d\n", n_blogs, n_periods);
    for (const auto& [blog, per_period] : cell_counts)
        for (const auto& [period, count] : per_period)
            std::printf("%s,p%d: %ld records\n", blog.c_str(), period, count);
    return 0;
}

int cmd_fit(const std::string& panel_arg, const std::string& model, int lag, int t_est,
            int starts, std::uint64_t seed, double rel_tol, long max_iter,
            const std::string& out_json) {
    const auto panel = load_panel(panel_arg);
    const auto spec = make_model_spec(family_from_name(model), lag);
    if (t_est <= 0) t_est = panel.periods() - 2;  // paper-style 10/2 split
    SolverConfig cfg;
    cfg.n_starts = starts;
    cfg.seed = seed;
    cfg.rel_tol = rel_tol;
    cfg.max_iterations = max_iter;
    const auto result = fit(spec, panel, t_est, cfg);
    write_model_json(result, out_json);
    std::printf("model=%s lag=%d t_est=%d\n", family_name(spec.family), spec.lag, t_est);
    std::printf("objective=%s iterations=%ld converged=%s\n",
                format_sig6(result.objective).c_str(), result.solver_trace.back().iteration,
                result.converged ? "yes" : "no");
    return 0;
}

int cmd_predict(const std::string& model_json, const std::string& panel_arg, int horizon,
                const std::string& out_csv, bool trajectory) {
    const auto fitres = read_model_json(model_json);
    const auto panel = load_panel(panel_arg);
    const int te = fitres.n_train_periods;

    if (trajectory) {
        // Full two-layer trajectory export, launched exactly like predict.
        const auto traj =
            simulate(fitres.spec, fitres.params, forecast_state(fitres, panel), horizon);
        write_trajectory_csv(traj, panel.blog_ids, te + 1, out_csv);
    } else {
        const Mat fc = predict(fitres, panel, horizon);
        std::FILE* out = std::fopen(out_csv.c_str(), "w");
        if (!out) throw Error("cannot write '" + out_csv + "'");
        std::fprintf(out, "blog_id,t,predicted\n");
        for (int b = 0; b < panel.blogs(); ++b)
            for (int h = 0; h < horizon; ++h)
                std::fprintf(out, "%s,%d,%s\n", panel.blog_ids[b].c_str(), te + 1 + h,
                             format_full(fc(b, h)).c_str());
        std::fclose(out);
        for (int h = 0; h < horizon; ++h) {
            const int t = te + h;  // 0-based observed column
            if (t >= panel.periods()) break;
            const double r = rmse_period(get_col(fc, h), get_col(panel.values, t));
            std::printf("rmse period %d: %s\n", te + 1 + h, format_sig6(r).c_str());
        }
    }
    return 0;
}

int cmd_diagnose(const std::string& panel_arg, int tau_max, const std::string& out_csv) {
    const auto panel = load_panel(panel_arg);
    write_mu_csv(panel, tau_max, out_csv);
    std::printf("wrote mu(t,tau) for tau=0..%d to %s\n", tau_max, out_csv.c_str());
    return 0;
}

void write_heatmap_csv(const Mat& m, const std::vector<std::string>& blog_ids,
                       const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw Error("cannot write '" + path + "'");
    std::fprintf(out, "blog_id");
    for (const auto& id : blog_ids) std::fprintf(out, ",%s", id.c_str());
    std::fprintf(out, "\n");
    for (int b = 0; b < m.rows; ++b) {
        std::fprintf(out, "%s", blog_ids[b].c_str());
        for (int k = 0; k < m.cols; ++k) {
            // Published convention: entries below 1e-5 export as exact zeros.
            const double v = m(b, k) < 1e-5 ? 0.0 : m(b, k);
            std::fprintf(out, ",%s", format_full(v).c_str());
        }
        std::fprintf(out, "\n");
    }
    std::fclose(out);
}

int cmd_eval(const std::string& panel_arg, const std::string& models_dir,
             const std::string& out_csv) {
    const auto panel = load_panel(panel_arg);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(models_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no model JSON files in '" + models_dir + "'");

    std::vector<EvalRow> rows;
    std::vector<int> test_periods;
    int t_est = -1;
    const std::string stem = out_csv.size() > 4 && out_csv.substr(out_csv.size() - 4) == ".csv"
                                 ? out_csv.substr(0, out_csv.size() - 4)
                                 : out_csv;
    for (const auto& file : files) {
        FitResult fitres;
        try {
            fitres = read_model_json(file);
        } catch (const std::exception& e) {
            throw Error("unreadable model file '" + file + "': " + e.what());
        }
        if (t_est < 0) t_est = fitres.n_train_periods;
        if (fitres.n_train_periods != t_est)
            throw Error("models disagree on t_est ('" + file + "' has " +
                        std::to_string(fitres.n_train_periods) + ", expected " +
                        std::to_string(t_est) + "); evaluate them separately");
        test_periods.clear();
        for (int p = fitres.n_train_periods + 1; p <= panel.periods(); ++p)
            test_periods.push_back(p);
        const auto report = evaluate(fitres, panel, test_periods);
        rows.push_back({fitres.spec, report});

        const std::string tag = std::string(family_name(fitres.spec.family)) + "_lag" +
                                std::to_string(fitres.spec.lag);
        write_heatmap_csv(fitres.params.W, panel.blog_ids, stem + "_" + tag + "_W.csv");
        if (!fitres.params.A.empty())
            write_heatmap_csv(fitres.params.A, panel.blog_ids, stem + "_" + tag + "_A.csv");
        std::printf("%s lag %d: sum_of_residuals=%s rmse_out=%s\n",
                    family_name(fitres.spec.family), fitres.spec.lag,
                    format_sig6(report.sum_of_residuals).c_str(),
                    format_sig6(report.rmse_test_overall).c_str());
    }
    write_eval_csv(rows, test_periods, out_csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opinionfit: averaging-based sentiment dynamics toolkit"};
    app.require_subcommand(1);

    std::string records_csv, panel_arg, model, out_path, model_json, models_dir;
    int lag = 0, t_est = 0, horizon = 2, tau_max = 3, starts = 16;
    std::uint64_t seed = 0;
    double rel_tol = 1e-9;
    long max_iter = 100000;

    auto* agg = app.add_subcommand("aggregate", "build a sentiment panel from scored records");
    agg->add_option("records_csv", records_csv)->required();
    agg->add_option("out_panel_csv", out_path)->required();

    auto* fitc = app.add_subcommand("fit", "fit a model to a panel");
    fitc->add_option("panel", panel_arg, "panel CSV path or 'bundled'")->required();
    fitc->add_option("model", model, "fdg | fj | fdgm | epo | repo")->required();
    fitc->add_option("--lag", lag);
    fitc->add_option("--t-est", t_est, "training periods (default T-2)");
    fitc->add_option("--starts", starts);
    fitc->add_option("--seed", seed);
    fitc->add_option("--rel-tol", rel_tol);
    fitc->add_option("--max-iter", max_iter);
    fitc->add_option("-o,--out", out_path, "output model JSON")->default_val("model.json");

    auto* pred = app.add_subcommand("predict", "forecast from a fitted model");
    pred->add_option("model_json", model_json)->required();
    pred->add_option("panel", panel_arg)->required();
    pred->add_option("--horizon", horizon);
    pred->add_option("-o,--out", out_path)->default_val("forecast.csv");

    auto* sim = app.add_subcommand("simulate", "export a fitted-model trajectory (x and xe)");
    sim->add_option("model_json", model_json)->required();
    sim->add_option("panel", panel_arg)->required();
    sim->add_option("--horizon", horizon);
    sim->add_option("-o,--out", out_path)->default_val("trajectory.csv");

    auto* diag = app.add_subcommand("diagnose", "export range-violation indices");
    diag->add_option("panel", panel_arg)->required();
    diag->add_option("--tau-max", tau_max);
    diag->add_option("-o,--out", out_path)->default_val("mu.csv");

    auto* ev = app.add_subcommand("eval", "evaluate fitted models against a panel");
    ev->add_option("panel", panel_arg)->required();
    ev->add_option("models_dir", models_dir)->required();
    ev->add_option("-o,--out", out_path)->default_val("eval.csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (agg->parsed()) return cmd_aggregate(records_csv, out_path);
        if (fitc->parsed())
            return cmd_fit(panel_arg, model, lag, t_est, starts, seed, rel_tol, max_iter,
                           out_path);
        if (pred->parsed()) return cmd_predict(model_json, panel_arg, horizon, out_path, false);
        if (sim->parsed()) return cmd_predict(model_json, panel_arg, horizon, out_path, true);
        if (diag->parsed()) return cmd_diagnose(panel_arg, tau_max, out_path);
        if (ev->parsed()) return cmd_eval(panel_arg, models_dir, out_path);
    } catch (const MissingCell& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
