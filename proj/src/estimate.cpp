#include "opinionfit/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "opinionfit/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace opinionfit {

namespace {

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64): identical streams on every platform, one
// independent stream per multi-start.

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * u01(); }
};

bool two_layer(ModelFamily f) { return f == ModelFamily::EPO || f == ModelFamily::REPO; }

// ---------------------------------------------------------------------------
// Shared problem view: panel columns and Gram matrices of the regressor
// columns, which every row subproblem reuses.

struct Problem {
    ModelSpec spec;
    int B = 0;
    int te = 0;
    int tau = 0;
    std::vector<Vec> col;  // sigma columns 0..T-1
    Mat gram_now;          // sum over t in [tau, te-2] of sigma(t) sigma(t)^T
    Mat gram_lag;          // sum over t in [tau, te-2] of sigma(t-tau) sigma(t-tau)^T
};

Problem make_problem(const ModelSpec& spec, const SentimentPanel& panel, int te) {
    Problem pr;
    pr.spec = spec;
    pr.B = panel.blogs();
    pr.te = te;
    pr.tau = spec.lag;
    pr.col.resize(panel.periods());
    for (int t = 0; t < panel.periods(); ++t) pr.col[t] = get_col(panel.values, t);
    pr.gram_now = Mat(pr.B, pr.B, 0.0);
    pr.gram_lag = Mat(pr.B, pr.B, 0.0);
    for (int t = pr.tau; t <= pr.te - 2; ++t) {
        const Vec& a = pr.col[t];
        const Vec& b = pr.col[t - pr.tau];
        for (int i = 0; i < pr.B; ++i)
            for (int j = 0; j < pr.B; ++j) {
                pr.gram_now(i, j) += a[i] * a[j];
                pr.gram_lag(i, j) += b[i] * b[j];
            }
    }
    return pr;
}

// ---------------------------------------------------------------------------
// Raw objective: no validation, no renormalization. Works on arbitrary
// (finite) parameter values so finite differences stay meaningful.

double objective_raw(const Problem& pr, const ParamSet& p) {
    const int B = pr.B;
    const int tau = pr.tau;
    double f = 0.0;
    if (!two_layer(pr.spec.family)) {
        for (int t = tau; t <= pr.te - 2; ++t) {
            const Vec& xin = pr.col[t];
            const Vec& xout = pr.col[t + 1];
            for (int b = 0; b < B; ++b) {
                const double wx = dot(p.W.row(b), xin.data(), B);
                double pred = wx;
                if (pr.spec.family == ModelFamily::FJ)
                    pred = p.S[b] * wx + (1.0 - p.S[b]) * p.z[b];
                else if (pr.spec.family == ModelFamily::FDGM)
                    pred = p.S[b] * wx + (1.0 - p.S[b]) * pr.col[t - tau][b];
                const double r = xout[b] - pred;
                f += r * r;
            }
        }
        return f;
    }
    const bool full = pr.spec.family == ModelFamily::EPO;
    for (int t = tau; t <= pr.te - 2; ++t) {
        const Vec& xe_now = pr.col[t];
        const Vec& xe_next = pr.col[t + 1];
        const Vec& xe_lag = pr.col[t - tau];
        for (int b = 0; b < B; ++b) {
            const double ga = dot(p.A.row(b), xe_now.data(), B);
            const double gl = dot(p.A.row(b), xe_lag.data(), B);
            const double sb = full ? p.S[b] : 1.0;
            const double zb = full ? p.z[b] : 0.0;
            const double mix = p.D[b] * p.X(b, t) + (1.0 - p.D[b]) * ga;
            const double r1 = p.X(b, t + 1) - sb * mix - (1.0 - sb) * zb;
            const double r2 =
                xe_next[b] - p.Phi[b] * p.X(b, t + 1) - (1.0 - p.Phi[b]) * gl;
            f += r1 * r1 + r2 * r2;
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Simplex-constrained least squares: minimize w'Gw - 2c'w over the
// probability simplex. Monotone FISTA with projected-gradient safeguard;
// exact enough for the convex FDG rows when given a generous budget.

double quad_value(const Mat& G, const Vec& c, const Vec& w, Vec& scratch) {
    const int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i) scratch[i] = dot(G.row(i), w.data(), n);
    return dot(scratch.data(), w.data(), n) - 2.0 * dot(c.data(), w.data(), n);
}

double power_iteration(const Mat& G) {
    const int n = G.rows;
    Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    Vec gv(n);
    double lam = 0.0;
    for (int it = 0; it < 60; ++it) {
        for (int i = 0; i < n; ++i) gv[i] = dot(G.row(i), v.data(), n);
        const double norm = std::sqrt(sq_norm(gv));
        if (norm <= 0.0) return 0.0;
        for (int i = 0; i < n; ++i) v[i] = gv[i] / norm;
        lam = norm;
    }
    return lam;
}

Vec simplex_ls(const Mat& G, const Vec& c, Vec w, long max_iter, StepRule rule) {
    const int n = static_cast<int>(w.size());
    const double L = power_iteration(G);
    if (L <= 1e-300) {
        // Quadratic part vanishes; the objective is linear, optimum at a vertex.
        double cmax = c[0];
        int arg = 0;
        for (int i = 1; i < n; ++i)
            if (c[i] > cmax) {
                cmax = c[i];
                arg = i;
            }
        if (cmax <= 0.0) return w;  // flat or decreasing in every direction: keep
        Vec vertex(n, 0.0);
        vertex[arg] = 1.0;
        return vertex;
    }

    Vec scratch(n), grad(n), y = w, w_prev = w, cand(n);
    double fw = quad_value(G, c, w, scratch);
    double theta = 1.0;
    double alpha = rule == StepRule::Fixed ? 1.0 / (2.0 * L) : 1.0;

    for (long it = 0; it < max_iter; ++it) {
        for (int i = 0; i < n; ++i) grad[i] = 2.0 * (dot(G.row(i), y.data(), n) - c[i]);

        double step = alpha;
        double fc = 0.0;
        for (int bt = 0;; ++bt) {
            for (int i = 0; i < n; ++i) cand[i] = y[i] - step * grad[i];
            cand = project_simplex(std::move(cand));
            fc = quad_value(G, c, cand, scratch);
            if (rule == StepRule::Fixed) break;
            double decr = 0.0;
            const double fy = quad_value(G, c, y, scratch);
            for (int i = 0; i < n; ++i) decr += grad[i] * (y[i] - cand[i]);
            if (fc <= fy - 1e-4 * decr || bt >= 60 || step < 1e-30) break;
            step *= 0.5;
        }
        if (rule == StepRule::Backtracking) alpha = std::min(step * 2.0, 1.0);

        if (fc > fw) {
            // Momentum overshoot: fall back to a plain projected-gradient step
            // from the best point so far.
            for (int i = 0; i < n; ++i)
                grad[i] = 2.0 * (dot(G.row(i), w.data(), n) - c[i]);
            for (int i = 0; i < n; ++i) cand[i] = w[i] - grad[i] / (2.0 * L);
            cand = project_simplex(std::move(cand));
            fc = quad_value(G, c, cand, scratch);
            theta = 1.0;
            if (fc > fw) break;  // no descent left at this precision
        }

        double disp = 0.0;
        for (int i = 0; i < n; ++i) disp = std::max(disp, std::fabs(cand[i] - w[i]));
        w_prev = w;
        w = cand;
        fw = fc;
        const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        const double beta = (theta - 1.0) / theta_next;
        for (int i = 0; i < n; ++i) y[i] = w[i] + beta * (w[i] - w_prev[i]);
        theta = theta_next;
        if (disp < 1e-16) break;
    }
    return w;
}

// Minimize sum_t (alpha_t - beta_t * x)^2 over x in [0,1].
double scalar_box_ls(const Vec& alpha, const Vec& beta, double current) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        num += alpha[t] * beta[t];
        den += beta[t] * beta[t];
    }
    if (den <= 0.0) return current;  // coordinate has no effect
    return clamp01(num / den);
}

// ---------------------------------------------------------------------------
// Block cycles. Every block update is a descent step, so the per-cycle
// objective sequence is non-increasing.

void cycle_single_layer(const Problem& pr, const SolverConfig& cfg, ParamSet& p,
                        long inner_iters) {
    const int B = pr.B;
    const int tau = pr.tau;
    const int nterms = pr.te - 1 - tau;
    const bool fj = pr.spec.family == ModelFamily::FJ;
    const bool fdgm = pr.spec.family == ModelFamily::FDGM;
    const bool frozen = cfg.freeze_s_at_one && fj;

    auto anchor = [&](int t, int b) -> double {
        if (fj) return p.z[b];
        if (fdgm) return pr.col[t - tau][b];
        return 0.0;
    };

    // W rows: simplex-constrained least squares, rows decouple.
    Vec c(B), row(B);
    for (int b = 0; b < B; ++b) {
        const double sb = (fj || fdgm) ? (frozen ? 1.0 : p.S[b]) : 1.0;
        if (sb == 0.0) continue;  // row has no effect on the objective
        std::fill(c.begin(), c.end(), 0.0);
        for (int t = tau; t <= pr.te - 2; ++t) {
            const double target = pr.col[t + 1][b] - (1.0 - sb) * anchor(t, b);
            for (int k = 0; k < B; ++k) c[k] += sb * target * pr.col[t][k];
        }
        Mat G(B, B);
        for (int i = 0; i < B; ++i)
            for (int j = 0; j < B; ++j) G(i, j) = sb * sb * pr.gram_now(i, j);
        std::memcpy(row.data(), p.W.row(b), sizeof(double) * B);
        row = simplex_ls(G, c, std::move(row), inner_iters, cfg.step_rule);
        std::memcpy(p.W.row(b), row.data(), sizeof(double) * B);
    }

    if ((fj || fdgm) && !frozen) {
        Vec alpha(nterms), beta(nterms);
        for (int b = 0; b < B; ++b) {
            for (int t = tau; t <= pr.te - 2; ++t) {
                const double wx = dot(p.W.row(b), pr.col[t].data(), B);
                alpha[t - tau] = pr.col[t + 1][b] - anchor(t, b);
                beta[t - tau] = wx - anchor(t, b);
            }
            p.S[b] = scalar_box_ls(alpha, beta, p.S[b]);
        }
        if (fj) {
            for (int b = 0; b < B; ++b) {
                const double gamma = 1.0 - p.S[b];
                if (gamma == 0.0) continue;
                for (int t = tau; t <= pr.te - 2; ++t) {
                    const double wx = dot(p.W.row(b), pr.col[t].data(), B);
                    alpha[t - tau] = pr.col[t + 1][b] - p.S[b] * wx;
                    beta[t - tau] = gamma;
                }
                p.z[b] = scalar_box_ls(alpha, beta, p.z[b]);
            }
        }
    }
}

void cycle_two_layer(const Problem& pr, const SolverConfig& cfg, ParamSet& p,
                     long inner_iters, int x_sweeps) {
    const int B = pr.B;
    const int tau = pr.tau;
    const int t_lo = tau, t_hi = pr.te - 2;
    const int nterms = t_hi - t_lo + 1;
    const bool full = pr.spec.family == ModelFamily::EPO;

    // A rows. Row b touches only residual rows b of both layers.
    const int m = B - 1;
    std::vector<int> idx(m);
    Vec arow(m), c(m);
    Mat G(m, m);
    for (int b = 0; b < B; ++b) {
        int n = 0;
        for (int k = 0; k < B; ++k)
            if (k != b) idx[n++] = k;
        const double sb = full ? p.S[b] : 1.0;
        const double zb = full ? p.z[b] : 0.0;
        const double co1 = sb * (1.0 - p.D[b]);
        const double co2 = 1.0 - p.Phi[b];
        if (co1 == 0.0 && co2 == 0.0) continue;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                G(i, j) = co1 * co1 * pr.gram_now(idx[i], idx[j]) +
                          co2 * co2 * pr.gram_lag(idx[i], idx[j]);
        std::fill(c.begin(), c.end(), 0.0);
        for (int t = t_lo; t <= t_hi; ++t) {
            const double y1 = p.X(b, t + 1) - sb * p.D[b] * p.X(b, t) - (1.0 - sb) * zb;
            const double y2 = pr.col[t + 1][b] - p.Phi[b] * p.X(b, t + 1);
            for (int i = 0; i < m; ++i)
                c[i] += co1 * y1 * pr.col[t][idx[i]] + co2 * y2 * pr.col[t - tau][idx[i]];
        }
        for (int i = 0; i < m; ++i) arow[i] = p.A(b, idx[i]);
        arow = simplex_ls(G, c, std::move(arow), inner_iters, cfg.step_rule);
        for (int i = 0; i < m; ++i) p.A(b, idx[i]) = arow[i];
    }

    // Cached A*sigma products; A is fixed for the rest of the cycle.
    Mat ga(B, pr.te);  // ga(b,t) = (A sigma(t))_b, t in [0, te-2]
    for (int t = 0; t <= pr.te - 2; ++t)
        for (int b = 0; b < B; ++b) ga(b, t) = dot(p.A.row(b), pr.col[t].data(), B);

    Vec alpha(nterms), beta(nterms);
    for (int b = 0; b < B; ++b) {  // D
        const double sb = full ? p.S[b] : 1.0;
        const double zb = full ? p.z[b] : 0.0;
        for (int t = t_lo; t <= t_hi; ++t) {
            alpha[t - t_lo] = p.X(b, t + 1) - sb * ga(b, t) - (1.0 - sb) * zb;
            beta[t - t_lo] = sb * (p.X(b, t) - ga(b, t));
        }
        p.D[b] = scalar_box_ls(alpha, beta, p.D[b]);
    }
    for (int b = 0; b < B; ++b) {  // Phi
        for (int t = t_lo; t <= t_hi; ++t) {
            alpha[t - t_lo] = pr.col[t + 1][b] - ga(b, t - tau);
            beta[t - t_lo] = p.X(b, t + 1) - ga(b, t - tau);
        }
        p.Phi[b] = scalar_box_ls(alpha, beta, p.Phi[b]);
    }
    if (full) {
        for (int b = 0; b < B; ++b) {  // S
            for (int t = t_lo; t <= t_hi; ++t) {
                const double mix = p.D[b] * p.X(b, t) + (1.0 - p.D[b]) * ga(b, t);
                alpha[t - t_lo] = p.X(b, t + 1) - p.z[b];
                beta[t - t_lo] = mix - p.z[b];
            }
            p.S[b] = scalar_box_ls(alpha, beta, p.S[b]);
        }
        for (int b = 0; b < B; ++b) {  // z
            const double gamma = 1.0 - p.S[b];
            if (gamma == 0.0) continue;
            for (int t = t_lo; t <= t_hi; ++t) {
                const double mix = p.D[b] * p.X(b, t) + (1.0 - p.D[b]) * ga(b, t);
                alpha[t - t_lo] = p.X(b, t + 1) - p.S[b] * mix;
                beta[t - t_lo] = gamma;
            }
            p.z[b] = scalar_box_ls(alpha, beta, p.z[b]);
        }
    }

    // Latent states: per-blog projected Gauss-Seidel with exact coordinate
    // minima. The Hessian per blog is tridiagonal, so a few sweeps per cycle
    // go a long way; the outer loop supplies the repetition.
    Vec r1(nterms), r2(nterms);
    for (int b = 0; b < B; ++b) {
        const double sb = full ? p.S[b] : 1.0;
        const double zb = full ? p.z[b] : 0.0;
        const double sd = sb * p.D[b];
        const double phib = p.Phi[b];
        for (int t = t_lo; t <= t_hi; ++t) {
            const double mix = p.D[b] * p.X(b, t) + (1.0 - p.D[b]) * ga(b, t);
            r1[t - t_lo] = p.X(b, t + 1) - sb * mix - (1.0 - sb) * zb;
            r2[t - t_lo] = pr.col[t + 1][b] - phib * p.X(b, t + 1) - (1.0 - phib) * ga(b, t - tau);
        }
        for (int sweep = 0; sweep < x_sweeps; ++sweep) {
            for (int s = t_lo; s <= t_hi + 1; ++s) {
                double num = 0.0, den = 0.0;
                if (s - 1 >= t_lo && s - 1 <= t_hi) {
                    num += r1[s - 1 - t_lo] + (-phib) * r2[s - 1 - t_lo];
                    den += 1.0 + phib * phib;
                }
                if (s >= t_lo && s <= t_hi) {
                    num += (-sd) * r1[s - t_lo];
                    den += sd * sd;
                }
                if (den <= 0.0) continue;
                const double xi = p.X(b, s);
                const double xi_new = clamp01(xi - num / den);
                const double delta = xi_new - xi;
                if (delta == 0.0) continue;
                p.X(b, s) = xi_new;
                if (s - 1 >= t_lo && s - 1 <= t_hi) {
                    r1[s - 1 - t_lo] += delta;
                    r2[s - 1 - t_lo] += -phib * delta;
                }
                if (s >= t_lo && s <= t_hi) r1[s - t_lo] += -sd * delta;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Multi-start driver.

struct StartResult {
    ParamSet params;
    double objective = 0.0;
    std::vector<TracePoint> trace;
    bool converged = false;
};

ParamSet structured_init(const Problem& pr) {
    const int B = pr.B;
    ParamSet p;
    const ModelFamily fam = pr.spec.family;
    if (!two_layer(fam)) {
        p.W = Mat(B, B, 1.0 / B);
        if (fam != ModelFamily::FDG) p.S.assign(B, 0.5);
        if (fam == ModelFamily::FJ) p.z.assign(B, 0.0);
    } else {
        p.A = Mat(B, B, 1.0 / (B - 1));
        for (int b = 0; b < B; ++b) p.A(b, b) = 0.0;
        p.D.assign(B, 1.0 / B);  // makes W = diag(D) + (I-D)A uniform
        p.Phi.assign(B, 0.5);
        p.S.assign(B, fam == ModelFamily::EPO ? 0.5 : 1.0);
        if (fam == ModelFamily::EPO) p.z.assign(B, 0.0);
        p.X = Mat(B, pr.te);
        for (int b = 0; b < B; ++b)
            for (int t = 0; t < pr.te; ++t) p.X(b, t) = pr.col[t][b];
    }
    if (fam == ModelFamily::FJ || fam == ModelFamily::EPO) {
        for (int b = 0; b < B; ++b) {
            double mean = 0.0;
            for (int t = 0; t < pr.te; ++t) mean += pr.col[t][b];
            p.z[b] = mean / pr.te;
        }
    }
    return p;
}

void perturb(const Problem& pr, ParamSet& p, Rng& rng) {
    const int B = pr.B;
    const double amp = 0.25;
    auto jitter_box = [&](Vec& v) {
        for (double& x : v) x = clamp01(x + rng.uniform(-amp, amp));
    };
    if (!two_layer(pr.spec.family)) {
        Vec row(B);
        for (int b = 0; b < B; ++b) {
            for (int k = 0; k < B; ++k) row[k] = p.W(b, k) + rng.uniform(-amp, amp);
            row = project_simplex(std::move(row));
            std::memcpy(p.W.row(b), row.data(), sizeof(double) * B);
        }
        if (pr.spec.family != ModelFamily::FDG) jitter_box(p.S);
        if (pr.spec.family == ModelFamily::FJ) jitter_box(p.z);
        return;
    }
    const int m = B - 1;
    Vec row(m);
    for (int b = 0; b < B; ++b) {
        int n = 0;
        for (int k = 0; k < B; ++k)
            if (k != b) row[n++] = p.A(b, k) + rng.uniform(-amp, amp);
        row = project_simplex(std::move(row));
        n = 0;
        for (int k = 0; k < B; ++k)
            if (k != b) p.A(b, k) = row[n++];
    }
    jitter_box(p.D);
    jitter_box(p.Phi);
    if (pr.spec.family == ModelFamily::EPO) {
        jitter_box(p.S);
        jitter_box(p.z);
    }
    for (double& x : p.X.data) x = clamp01(x + rng.uniform(-amp, amp));
}

bool record_iteration(long it, long max_iterations) {
    (void)max_iterations;
    return it <= 128 || it % 128 == 0;
}

StartResult run_start(const Problem& pr, const SolverConfig& cfg, std::uint64_t start_seed,
                      int start_index) {
    ParamSet p = structured_init(pr);
    if (start_index > 0) {
        Rng rng(start_seed);
        perturb(pr, p, rng);
    }
    if (cfg.freeze_s_at_one && pr.spec.family == ModelFamily::FJ) p.S.assign(pr.B, 1.0);

    StartResult res;
    double f = objective_raw(pr, p);
    res.trace.push_back({0, f});

    const bool convex = pr.spec.family == ModelFamily::FDG ||
                        (pr.spec.family == ModelFamily::FJ && cfg.freeze_s_at_one);
    const long inner = convex ? 100000 : 400;
    int flat = 0;
    for (long it = 1; it <= cfg.max_iterations; ++it) {
        ParamSet snapshot = p;
        if (two_layer(pr.spec.family))
            cycle_two_layer(pr, cfg, p, inner, 3);
        else
            cycle_single_layer(pr, cfg, p, inner);
        double fn = objective_raw(pr, p);
        if (fn > f) {  // rounding wobble: keep the better iterate
            p = std::move(snapshot);
            fn = f;
        }
        if (record_iteration(it, cfg.max_iterations) || it == cfg.max_iterations)
            res.trace.push_back({it, fn});
        const double rel = (f - fn) / std::max(f, 1e-300);
        f = fn;
        if (rel < cfg.rel_tol) {
            if (++flat >= 10) {
                if (res.trace.back().iteration != it) res.trace.push_back({it, fn});
                res.converged = true;
                break;
            }
        } else {
            flat = 0;
        }
    }
    res.params = std::move(p);
    res.objective = f;
    return res;
}

void validate_fit_inputs(const ModelSpec& spec, const SentimentPanel& panel, int t_est) {
    make_model_spec(spec.family, spec.lag);
    if (t_est < spec.lag + 3 || t_est > panel.periods())
        throw InvalidSplit("t_est must lie in [lag+3, T], got " + std::to_string(t_est));
}

FitResult fit_impl(const ModelSpec& spec, const SentimentPanel& panel, int t_est,
                   const SolverConfig& cfg, bool parallel) {
    validate_fit_inputs(spec, panel, t_est);
    if (cfg.n_starts < 1) throw Error("n_starts must be >= 1");
    if (!(cfg.rel_tol > 0.0)) throw Error("rel_tol must be > 0");
    if (cfg.max_iterations < 1) throw Error("max_iterations must be >= 1");
    const Problem pr = make_problem(spec, panel, t_est);

    // Per-start seeds are derived up front so results do not depend on how
    // starts are scheduled across threads.
    std::vector<std::uint64_t> seeds(cfg.n_starts);
    Rng seeder(cfg.seed);
    for (auto& s : seeds) s = seeder.next();

    std::vector<StartResult> results(cfg.n_starts);
    const int nthreads = parallel ? multistart_threads() : 1;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads) if (nthreads > 1)
#endif
    for (int i = 0; i < cfg.n_starts; ++i) results[i] = run_start(pr, cfg, seeds[i], i);

    int best = 0;
    for (int i = 1; i < cfg.n_starts; ++i)
        if (results[i].objective < results[best].objective) best = i;

    FitResult out;
    out.spec = spec;
    out.n_train_periods = t_est;
    out.seed = cfg.seed;
    out.n_starts = cfg.n_starts;
    out.converged = results[best].converged;
    out.solver_trace = std::move(results[best].trace);
    out.params = make_params(spec, std::move(results[best].params), 1e-6, 1e-6);
    out.objective = objective_raw(pr, out.params);
    if (out.objective < out.solver_trace.back().objective)
        out.solver_trace.push_back(
            {out.solver_trace.back().iteration + 1, out.objective});
    return out;
}

}  // namespace

double objective(const ModelSpec& spec, const ParamSet& params, const SentimentPanel& panel,
                 int t_est) {
    make_model_spec(spec.family, spec.lag);
    if (t_est <= spec.lag + 1 || t_est > panel.periods())
        throw InvalidSplit("t_est must lie in (lag+1, T], got " + std::to_string(t_est));
    ParamSet checked = make_params(spec, params, 1e-9, 1e-9);
    if (checked.W.rows != panel.blogs())
        throw DimensionMismatch("parameter bundle does not match panel size");
    if (two_layer(spec.family) && checked.X.cols != t_est)
        throw DimensionMismatch("X must have exactly t_est columns");
    const Problem pr = make_problem(spec, panel, t_est);
    return objective_raw(pr, checked);
}

Vec project_simplex(Vec v) {
    const int n = static_cast<int>(v.size());
    Vec u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int rho = 0;
    for (int j = 0; j < n; ++j) {
        cum += u[j];
        const double cand = (cum - 1.0) / (j + 1);
        if (u[j] - cand > 0.0) {
            rho = j + 1;
            tau = cand;
        }
    }
    (void)rho;
    for (double& x : v) x = std::max(0.0, x - tau);
    return v;
}

Vec project_box(Vec v, double lo, double hi) {
    if (lo > hi) throw Error("project_box: lo > hi");
    for (double& x : v) x = std::min(hi, std::max(lo, x));
    return v;
}

FitResult fit(const ModelSpec& spec, const SentimentPanel& panel, int t_est,
              const SolverConfig& config) {
    return fit_impl(spec, panel, t_est, config, true);
}

FitResult fit_serial(const ModelSpec& spec, const SentimentPanel& panel, int t_est,
                     const SolverConfig& config) {
    return fit_impl(spec, panel, t_est, config, false);
}

int multistart_threads() {
    int n = 1;
#ifdef _OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* s = std::getenv("OPINIONFIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 1) n = static_cast<int>(std::min<long>(n, v));
    }
    return std::max(1, n);
}

// ---------------------------------------------------------------------------
// Gradient self-test.

namespace {

struct Coord {
    char field;  // 'W', 'A', 'D', 'P', 'S', 'z', 'X'
    int i = 0;
    int j = 0;
};

std::vector<Coord> active_coords(const ModelSpec& spec, int B, int te) {
    std::vector<Coord> out;
    if (!two_layer(spec.family)) {
        for (int b = 0; b < B; ++b)
            for (int k = 0; k < B; ++k) out.push_back({'W', b, k});
        if (spec.family != ModelFamily::FDG)
            for (int b = 0; b < B; ++b) out.push_back({'S', b, 0});
        if (spec.family == ModelFamily::FJ)
            for (int b = 0; b < B; ++b) out.push_back({'z', b, 0});
        return out;
    }
    for (int b = 0; b < B; ++b)
        for (int k = 0; k < B; ++k)
            if (k != b) out.push_back({'A', b, k});
    for (int b = 0; b < B; ++b) out.push_back({'D', b, 0});
    for (int b = 0; b < B; ++b) out.push_back({'P', b, 0});
    if (spec.family == ModelFamily::EPO) {
        for (int b = 0; b < B; ++b) out.push_back({'S', b, 0});
        for (int b = 0; b < B; ++b) out.push_back({'z', b, 0});
    }
    for (int b = 0; b < B; ++b)
        for (int t = 0; t < te; ++t) out.push_back({'X', b, t});
    return out;
}

double& coord_ref(ParamSet& p, const Coord& c) {
    switch (c.field) {
        case 'W': return p.W(c.i, c.j);
        case 'A': return p.A(c.i, c.j);
        case 'D': return p.D[c.i];
        case 'P': return p.Phi[c.i];
        case 'S': return p.S[c.i];
        case 'z': return p.z[c.i];
        default: return p.X(c.i, c.j);
    }
}

double analytic_partial(const Problem& pr, const ParamSet& p, const Coord& c) {
    const int B = pr.B;
    const int tau = pr.tau;
    double g = 0.0;
    if (!two_layer(pr.spec.family)) {
        const bool fj = pr.spec.family == ModelFamily::FJ;
        const bool fdgm = pr.spec.family == ModelFamily::FDGM;
        const int b = c.i;
        for (int t = tau; t <= pr.te - 2; ++t) {
            const double wx = dot(p.W.row(b), pr.col[t].data(), B);
            const double sb = (fj || fdgm) ? p.S[b] : 1.0;
            const double anchor = fj ? p.z[b] : (fdgm ? pr.col[t - tau][b] : 0.0);
            const double r = pr.col[t + 1][b] - sb * wx - (1.0 - sb) * anchor;
            if (c.field == 'W')
                g += -2.0 * r * sb * pr.col[t][c.j];
            else if (c.field == 'S')
                g += -2.0 * r * (wx - anchor);
            else  // z
                g += -2.0 * r * (1.0 - sb);
        }
        return g;
    }
    const bool full = pr.spec.family == ModelFamily::EPO;
    if (c.field == 'X') {
        const int b = c.i, s = c.j;
        auto in_range = [&](int t) { return t >= tau && t <= pr.te - 2; };
        auto r1_at = [&](int t) {
            const double ga = dot(p.A.row(b), pr.col[t].data(), B);
            const double sb = full ? p.S[b] : 1.0;
            const double zb = full ? p.z[b] : 0.0;
            return p.X(b, t + 1) - sb * (p.D[b] * p.X(b, t) + (1.0 - p.D[b]) * ga) -
                   (1.0 - sb) * zb;
        };
        auto r2_at = [&](int t) {
            const double gl = dot(p.A.row(b), pr.col[t - tau].data(), B);
            return pr.col[t + 1][b] - p.Phi[b] * p.X(b, t + 1) - (1.0 - p.Phi[b]) * gl;
        };
        const double sd = (full ? p.S[b] : 1.0) * p.D[b];
        if (in_range(s - 1)) g += 2.0 * r1_at(s - 1) + 2.0 * r2_at(s - 1) * (-p.Phi[b]);
        if (in_range(s)) g += 2.0 * r1_at(s) * (-sd);
        return g;
    }
    const int b = c.i;
    for (int t = tau; t <= pr.te - 2; ++t) {
        const double ga = dot(p.A.row(b), pr.col[t].data(), B);
        const double gl = dot(p.A.row(b), pr.col[t - tau].data(), B);
        const double sb = full ? p.S[b] : 1.0;
        const double zb = full ? p.z[b] : 0.0;
        const double mix = p.D[b] * p.X(b, t) + (1.0 - p.D[b]) * ga;
        const double r1 = p.X(b, t + 1) - sb * mix - (1.0 - sb) * zb;
        const double r2 = pr.col[t + 1][b] - p.Phi[b] * p.X(b, t + 1) - (1.0 - p.Phi[b]) * gl;
        switch (c.field) {
            case 'A':
                g += -2.0 * r1 * sb * (1.0 - p.D[b]) * pr.col[t][c.j] -
                     2.0 * r2 * (1.0 - p.Phi[b]) * pr.col[t - tau][c.j];
                break;
            case 'D':
                g += -2.0 * r1 * sb * (p.X(b, t) - ga);
                break;
            case 'P':
                g += -2.0 * r2 * (p.X(b, t + 1) - gl);
                break;
            case 'S':
                g += -2.0 * r1 * (mix - zb);
                break;
            case 'z':
                g += -2.0 * r1 * (1.0 - sb);
                break;
            default:
                break;
        }
    }
    return g;
}

}  // namespace

double gradient_check(const ModelSpec& spec, const ParamSet& params,
                      const SentimentPanel& panel, int t_est) {
    make_model_spec(spec.family, spec.lag);
    if (t_est <= spec.lag + 1 || t_est > panel.periods())
        throw InvalidSplit("t_est must lie in (lag+1, T]");
    const Problem pr = make_problem(spec, panel, t_est);
    ParamSet p = params;
    const double margin = 1e-3;
    const auto coords = active_coords(spec, pr.B, t_est);
    for (const auto& c : coords) {
        const double v = coord_ref(p, c);
        const bool simplex_entry = c.field == 'W' || c.field == 'A';
        if (v < margin || (!simplex_entry && v > 1.0 - margin))
            throw OnBoundary("parameter within 1e-3 of its constraint boundary");
    }

    const double h = 1e-6;
    double worst = 0.0;
    for (const auto& c : coords) {
        double& ref = coord_ref(p, c);
        const double saved = ref;
        ref = saved + h;
        const double fp = objective_raw(pr, p);
        ref = saved - h;
        const double fm = objective_raw(pr, p);
        ref = saved;
        const double fd = (fp - fm) / (2.0 * h);
        const double an = analytic_partial(pr, p, c);
        const double dev =
            std::fabs(an - fd) / std::max({1.0, std::fabs(an), std::fabs(fd)});
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace opinionfit
