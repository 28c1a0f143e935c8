#include "opinionfit/models.hpp"

#include <fstream>

#include "opinionfit/errors.hpp"
#include "opinionfit/format.hpp"

namespace opinionfit {

namespace {

void require_len(const Vec& v, int n, const char* name) {
    if (static_cast<int>(v.size()) != n)
        throw DimensionMismatch(std::string(name) + " has wrong length");
}

}  // namespace

Vec step_fdg(const Mat& W, const Vec& x) {
    if (W.rows != W.cols) throw DimensionMismatch("W must be square");
    require_len(x, W.rows, "x");
    Vec out(W.rows);
    for (int b = 0; b < W.rows; ++b) out[b] = clamp01(dot(W.row(b), x.data(), W.cols));
    return out;
}

Vec step_fj(const Mat& W, const Vec& S, const Vec& z, const Vec& x) {
    const int B = W.rows;
    if (W.cols != B) throw DimensionMismatch("W must be square");
    require_len(S, B, "S");
    require_len(z, B, "z");
    require_len(x, B, "x");
    Vec out(B);
    for (int b = 0; b < B; ++b)
        out[b] = clamp01(S[b] * dot(W.row(b), x.data(), B) + (1.0 - S[b]) * z[b]);
    return out;
}

Vec step_fdgm(const Mat& W, const Vec& S, const Vec& x_now, const Vec& x_lagged) {
    const int B = W.rows;
    if (W.cols != B) throw DimensionMismatch("W must be square");
    require_len(S, B, "S");
    require_len(x_now, B, "x_now");
    require_len(x_lagged, B, "x_lagged");
    Vec out(B);
    for (int b = 0; b < B; ++b)
        out[b] = clamp01(S[b] * dot(W.row(b), x_now.data(), B) + (1.0 - S[b]) * x_lagged[b]);
    return out;
}

Vec epo_expressed(const Vec& Phi, const Mat& A, const Vec& x_now, const Vec& xe_lagged) {
    const int B = A.rows;
    if (A.cols != B) throw DimensionMismatch("A must be square");
    require_len(Phi, B, "Phi");
    require_len(x_now, B, "x_now");
    require_len(xe_lagged, B, "xe_lagged");
    Vec out(B);
    for (int b = 0; b < B; ++b)
        out[b] = clamp01(Phi[b] * x_now[b] +
                         (1.0 - Phi[b]) * dot(A.row(b), xe_lagged.data(), B));
    return out;
}

Vec step_epo_private(const Mat& W, const Vec& S, const Vec& z, const Vec& x_now,
                     const Vec& xe_now) {
    const int B = W.rows;
    if (W.cols != B) throw DimensionMismatch("W must be square");
    require_len(S, B, "S");
    require_len(x_now, B, "x_now");
    require_len(xe_now, B, "xe_now");
    if (!z.empty()) require_len(z, B, "z");
    // diag(W) x + (W - diag(W)) xe, evaluated as one dot product per row so
    // the Phi = 1 / S = 1 degeneracies reproduce FJ and FDG bit for bit.
    Vec mixed = xe_now;
    Vec out(B);
    for (int b = 0; b < B; ++b) {
        const double save = mixed[b];
        mixed[b] = x_now[b];
        const double zb = z.empty() ? 0.0 : z[b];
        out[b] = clamp01(S[b] * dot(W.row(b), mixed.data(), B) + (1.0 - S[b]) * zb);
        mixed[b] = save;
    }
    return out;
}

std::vector<SimPoint> simulate(const ModelSpec& spec, const ParamSet& params, SimState init,
                               int horizon) {
    make_model_spec(spec.family, spec.lag);
    if (horizon < 0) throw Error("horizon must be >= 0");
    const int B = params.W.rows;
    const int tau = spec.lag;
    std::vector<SimPoint> out;
    out.reserve(horizon);

    switch (spec.family) {
        case ModelFamily::FDG:
        case ModelFamily::FJ: {
            require_len(init.x, B, "init.x");
            Vec x = std::move(init.x);
            for (int h = 0; h < horizon; ++h) {
                x = spec.family == ModelFamily::FDG ? step_fdg(params.W, x)
                                                    : step_fj(params.W, params.S, params.z, x);
                out.push_back({x, x});
            }
            break;
        }
        case ModelFamily::FDGM: {
            auto& hist = init.x_history;
            if (static_cast<int>(hist.size()) < tau + 1)
                throw InsufficientHistory("fdgm lag " + std::to_string(tau) + " needs " +
                                          std::to_string(tau + 1) + " past opinion vectors");
            for (const auto& v : hist) require_len(v, B, "x_history entry");
            for (int h = 0; h < horizon; ++h) {
                const Vec& lagged = hist[hist.size() - 1 - tau];
                Vec next = step_fdgm(params.W, params.S, hist.back(), lagged);
                hist.push_back(std::move(next));
                out.push_back({hist.back(), hist.back()});
            }
            break;
        }
        case ModelFamily::EPO:
        case ModelFamily::REPO: {
            require_len(init.x, B, "init.x");
            auto& hist = init.xe_history;
            if (static_cast<int>(hist.size()) < tau + 1)
                throw InsufficientHistory("lag " + std::to_string(tau) + " needs " +
                                          std::to_string(tau + 1) +
                                          " past expressed-opinion vectors");
            for (const auto& v : hist) require_len(v, B, "xe_history entry");
            Vec x = std::move(init.x);
            for (int h = 0; h < horizon; ++h) {
                Vec x_next = step_epo_private(params.W, params.S, params.z, x, hist.back());
                Vec xe_next =
                    epo_expressed(params.Phi, params.A, x_next, hist[hist.size() - 1 - tau]);
                hist.push_back(std::move(xe_next));
                x = std::move(x_next);
                out.push_back({x, hist.back()});
            }
            break;
        }
    }
    return out;
}

SimState forecast_state(const FitResult& fit, const SentimentPanel& panel) {
    const int te = fit.n_train_periods;
    const int tau = fit.spec.lag;
    if (te < 1 || te > panel.periods()) throw InvalidSplit("fit split does not match panel");
    SimState init;
    switch (fit.spec.family) {
        case ModelFamily::FDG:
        case ModelFamily::FJ:
            init.x = get_col(panel.values, te - 1);
            break;
        case ModelFamily::FDGM:
            if (te - 1 - tau < 0)
                throw HorizonBeyondSupport("lagged opinions would predate period 1");
            for (int t = te - 1 - tau; t <= te - 1; ++t)
                init.x_history.push_back(get_col(panel.values, t));
            break;
        case ModelFamily::EPO:
        case ModelFamily::REPO:
            if (fit.params.X.cols < te)
                throw InvalidSplit("fitted latent states do not cover the training window");
            if (te - 1 - tau < 0)
                throw HorizonBeyondSupport("lagged expressed opinions would predate period 1");
            init.x = get_col(fit.params.X, te - 1);
            for (int t = te - 1 - tau; t <= te - 1; ++t)
                init.xe_history.push_back(get_col(panel.values, t));
            break;
    }
    return init;
}

Mat predict(const FitResult& fit, const SentimentPanel& panel, int horizon) {
    if (horizon < 0) throw Error("horizon must be >= 0");
    Mat out(panel.blogs(), horizon);
    SimState init = forecast_state(fit, panel);
    if (horizon == 0) return out;
    auto traj = simulate(fit.spec, fit.params, std::move(init), horizon);
    for (int h = 0; h < horizon; ++h) set_col(out, h, traj[h].xe);
    return out;
}

void write_trajectory_csv(const std::vector<SimPoint>& traj,
                          const std::vector<std::string>& blog_ids, int t_start,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write trajectory file '" + path + "'");
    out << "t,blog_id,x,xe\n";
    for (std::size_t h = 0; h < traj.size(); ++h)
        for (std::size_t b = 0; b < blog_ids.size(); ++b)
            out << (t_start + static_cast<int>(h)) << ',' << blog_ids[b] << ','
                << format_full(traj[h].x[b]) << ',' << format_full(traj[h].xe[b]) << '\n';
}

}  // namespace opinionfit
