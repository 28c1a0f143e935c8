// Acceptance suite: one test case per shipping criterion, each printing a
// single PASS/FAIL line. Run all of them via ctest or one at a time with
// `opinionfit_acceptance -tc="criterion 05*"`.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "opinionfit/bundled.hpp"
#include "opinionfit/diagnose.hpp"
#include "opinionfit/estimate.hpp"
#include "opinionfit/models.hpp"
#include "test_util.hpp"

using namespace opinionfit;

namespace {

void report(int k, bool ok, const std::string& what) {
    std::printf("[criterion %02d] %s - %s\n", k, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
}

bool monotone(const std::vector<TracePoint>& trace) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i].objective > trace[i - 1].objective) return false;
    return true;
}

SolverConfig acceptance_config() {
    SolverConfig cfg;
    cfg.seed = 1;
    cfg.n_starts = 16;
    return cfg;
}

}  // namespace

TEST_CASE("criterion 01: range-violation indices reproduce the published values") {
    const auto& panel = bundled().panel;
    const double m1 = range_violation_index(panel, 1, 2, 0);
    const double m5 = range_violation_index(panel, 5, 2, 0);
    const double m7 = range_violation_index(panel, 7, 4, 0);
    const bool ok = std::fabs(m1 - 0.819721) < 1e-5 && std::fabs(m5 - 0.087262) < 1e-5 &&
                    std::fabs(m7 - (-0.110742)) < 1e-5;
    report(1, ok, "mu_1(2,0), mu_5(2,0), mu_7(4,0) within 1e-5");
    CHECK(std::fabs(m1 - 0.819721) < 1e-5);
    CHECK(std::fabs(m5 - 0.087262) < 1e-5);
    CHECK(std::fabs(m7 - (-0.110742)) < 1e-5);
}

TEST_CASE("criterion 02: violation summary matches the prose claims") {
    const auto& panel = bundled().panel;
    const auto at0 = violation_summary(panel, 0, 0.1);
    bool others = false;
    for (int b = 0; b < 7; ++b)
        if (b != 3 && at0[b] >= 1) others = true;
    const bool clause0 = at0[3] == 0 && others;

    const auto at1 = violation_summary(panel, 1, 0.1);
    bool all_zero = true;
    for (int c : at1)
        if (c != 0) all_zero = false;

    report(2, clause0 && all_zero,
           "tau=0: blog 4 clean, others violate (" + std::string(clause0 ? "ok" : "bad") +
               "); tau=1: all clean (" + (all_zero ? "ok" : "bad") + ")");
    CHECK(clause0);
    // The published mu table itself contains tau=1 values outside the 10%
    // band (mu_1(10,1) = 1.76313 among others), so this clause cannot hold
    // for data consistent with the published figures. Kept as stated.
    CHECK(all_zero);
}

TEST_CASE("criterion 03: FDG identification is optimal and seed-independent") {
    const auto& panel = bundled().panel;
    SolverConfig a = acceptance_config();
    SolverConfig b = acceptance_config();
    b.seed = 20240517;
    const auto ra = fit({ModelFamily::FDG, 0}, panel, 10, a);
    const auto rb = fit({ModelFamily::FDG, 0}, panel, 10, b);
    const bool ok = ra.objective <= 0.2005 && std::fabs(ra.objective - rb.objective) < 1e-8 &&
                    monotone(ra.solver_trace) && monotone(rb.solver_trace);
    report(3, ok,
           "objective " + std::to_string(ra.objective) + " <= 0.2005, seeds agree to 1e-8");
    CHECK(ra.objective <= 0.2005);
    CHECK(std::fabs(ra.objective - rb.objective) < 1e-8);
    CHECK(monotone(ra.solver_trace));
    CHECK(monotone(rb.solver_trace));
}

TEST_CASE("criterion 04: published FDG matrix scores inside the rounded-data band") {
    const auto& bd = bundled();
    const double f = objective({ModelFamily::FDG, 0},
                               bd.reference_params.at({ModelFamily::FDG, 0}), bd.panel, 10);
    const bool ok = f >= 0.19 && f <= 0.21;
    report(4, ok, "objective at published W = " + std::to_string(f) + " in [0.19, 0.21]");
    CHECK(f >= 0.19);
    CHECK(f <= 0.21);
}

TEST_CASE("criterion 05: EPO-family identification meets the published bounds") {
    const auto& panel = bundled().panel;
    struct Case {
        ModelFamily fam;
        int lag;
        double bound;
    };
    const Case cases[] = {
        {ModelFamily::FJ, 0, 0.1730},   {ModelFamily::FDGM, 1, 0.1842},
        {ModelFamily::FDGM, 2, 0.1483}, {ModelFamily::EPO, 0, 0.0812},
        {ModelFamily::REPO, 0, 0.0923}, {ModelFamily::EPO, 1, 0.0715},
        {ModelFamily::REPO, 1, 0.0822}, {ModelFamily::EPO, 2, 0.0557},
        {ModelFamily::REPO, 2, 0.0671},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto r = fit({c.fam, c.lag}, panel, 10, acceptance_config());
        const bool pass = r.objective <= c.bound && monotone(r.solver_trace);
        ok = ok && pass;
        detail += std::string(family_name(c.fam)) + "#" + std::to_string(c.lag) + "=" +
                  std::to_string(r.objective) + (pass ? " " : "(!) ");
        CHECK_MESSAGE(r.objective <= c.bound, family_name(c.fam), " lag ", c.lag,
                      " objective ", r.objective, " bound ", c.bound);
        CHECK(monotone(r.solver_trace));
    }
    report(5, ok, detail);
}

TEST_CASE("criterion 06: out-of-sample metric convention") {
    const auto& bd = bundled();
    const double r11 =
        rmse_period(get_col(bd.reference_forecasts, 0), get_col(bd.panel.values, 10));
    const double r12 =
        rmse_period(get_col(bd.reference_forecasts, 1), get_col(bd.panel.values, 11));
    const double overall = std::sqrt((r11 * r11 + r12 * r12) / 2.0);
    const bool ok = std::fabs(r11 - 0.1346) < 5e-4 && std::fabs(r12 - 0.1457) < 5e-4 &&
                    std::fabs(overall - 0.1402) < 5e-4;
    report(6, ok,
           "published forecasts give " + std::to_string(r11) + " / " + std::to_string(r12) +
               " / " + std::to_string(overall));
    CHECK(std::fabs(r11 - 0.1346) < 5e-4);
    CHECK(std::fabs(r12 - 0.1457) < 5e-4);
    CHECK(std::fabs(overall - 0.1402) < 5e-4);
}

TEST_CASE("criterion 07: property suite") {
    testutil::Rng rng(20230807);
    bool closure_ok = true, chain_ok = true, consensus_ok = true, simplex_ok = true;

    // [0,1] closure and range non-expansion, 1000 random draws.
    for (int rep = 0; rep < 1000; ++rep) {
        const int B = 2 + static_cast<int>(rng.next() % 6);
        const ParamSet p = testutil::random_params(ModelFamily::EPO, B, 0, rng);
        const Vec x = testutil::random_unit_vec(B, rng);
        const Vec xe = testutil::random_unit_vec(B, rng);
        auto in01 = [](const Vec& v) {
            for (double t : v)
                if (!(t >= 0.0 && t <= 1.0)) return false;
            return true;
        };
        const Vec fdg = step_fdg(p.W, x);
        if (!in01(fdg) || !in01(step_fj(p.W, p.S, p.z, x)) ||
            !in01(step_fdgm(p.W, p.S, x, xe)) || !in01(epo_expressed(p.Phi, p.A, x, xe)) ||
            !in01(step_epo_private(p.W, p.S, p.z, x, xe)))
            closure_ok = false;
        const double in_lo = *std::min_element(x.begin(), x.end());
        const double in_hi = *std::max_element(x.begin(), x.end());
        const double out_lo = *std::min_element(fdg.begin(), fdg.end());
        const double out_hi = *std::max_element(fdg.begin(), fdg.end());
        if (out_lo < in_lo || out_hi > in_hi) closure_ok = false;
    }
    CHECK(closure_ok);

    // Degeneracy chain, bitwise trajectories.
    for (int rep = 0; rep < 50 && chain_ok; ++rep) {
        const int B = 3 + static_cast<int>(rng.next() % 4);
        ParamSet epo = testutil::random_params(ModelFamily::EPO, B, 0, rng);
        epo.Phi.assign(B, 1.0);
        const Vec x0 = testutil::random_unit_vec(B, rng);
        SimState se;
        se.x = x0;
        se.xe_history = {x0};
        const auto te = simulate({ModelFamily::EPO, 0}, epo, se, 15);
        ParamSet fj;
        fj.W = epo.W;
        fj.S = epo.S;
        fj.z = epo.z;
        SimState sf;
        sf.x = x0;
        const auto tf = simulate({ModelFamily::FJ, 0}, fj, sf, 15);
        for (int h = 0; h < 15; ++h)
            if (te[h].x != tf[h].x || te[h].xe != tf[h].xe) chain_ok = false;

        ParamSet fj1 = fj;
        fj1.S.assign(B, 1.0);
        SimState s1, s2;
        s1.x = x0;
        s2.x = x0;
        ParamSet fdg;
        fdg.W = fj.W;
        const auto t1 = simulate({ModelFamily::FJ, 0}, fj1, s1, 15);
        const auto t2 = simulate({ModelFamily::FDG, 0}, fdg, s2, 15);
        for (int h = 0; h < 15; ++h)
            if (t1[h].x != t2[h].x) chain_ok = false;

        ParamSet repo = testutil::random_params(ModelFamily::REPO, B, 0, rng);
        ParamSet epo1 = repo;
        epo1.S.assign(B, 1.0);
        epo1.z = testutil::random_unit_vec(B, rng);
        SimState sr, sp;
        sr.x = x0;
        sr.xe_history = {testutil::random_unit_vec(B, rng)};
        sp = sr;
        const auto tr = simulate({ModelFamily::REPO, 0}, repo, sr, 15);
        const auto tp = simulate({ModelFamily::EPO, 0}, epo1, sp, 15);
        for (int h = 0; h < 15; ++h)
            if (tr[h].x != tp[h].x || tr[h].xe != tp[h].xe) chain_ok = false;
    }
    CHECK(chain_ok);

    // Consensus under strictly positive averaging.
    for (int rep = 0; rep < 10; ++rep) {
        const int B = 4 + static_cast<int>(rng.next() % 4);
        ParamSet p;
        p.W = testutil::random_stochastic(B, rng, 0.05);
        SimState init;
        init.x = testutil::random_unit_vec(B, rng);
        const auto traj = simulate({ModelFamily::FDG, 0}, p, init, 1000);
        const auto& last = traj.back().x;
        const double spread = *std::max_element(last.begin(), last.end()) -
                              *std::min_element(last.begin(), last.end());
        if (spread >= 1e-6) consensus_ok = false;
    }
    CHECK(consensus_ok);

    // Simplex projection: idempotence and brute-force grid agreement.
    for (int rep = 0; rep < 25; ++rep) {
        Vec v(3);
        for (auto& t : v) t = rng.uniform(-1.0, 2.0);
        const Vec p = project_simplex(v);
        const Vec pp = project_simplex(p);
        for (int i = 0; i < 3; ++i)
            if (std::fabs(pp[i] - p[i]) > 1e-14) simplex_ok = false;

        const double h = 1e-3;
        Vec best(3, 0.0);
        double best_d = 1e300;
        for (int i = 0; i <= 1000; ++i)
            for (int j = 0; j <= 1000 - i; ++j) {
                const double p0 = i * h, p1 = j * h, p2 = 1.0 - p0 - p1;
                const double dsq = (v[0] - p0) * (v[0] - p0) + (v[1] - p1) * (v[1] - p1) +
                                   (v[2] - p2) * (v[2] - p2);
                if (dsq < best_d) {
                    best_d = dsq;
                    best = {p0, p1, p2};
                }
            }
        for (int i = 0; i < 3; ++i)
            if (std::fabs(p[i] - best[i]) > 1.5e-3) simplex_ok = false;
    }
    CHECK(simplex_ok);

    const bool ok = closure_ok && chain_ok && consensus_ok && simplex_ok;
    report(7, ok, "closure, degeneracy chain, consensus, simplex projection");
}

TEST_CASE("criterion 08: solver self-tests") {
    const auto& panel = bundled().panel;
    testutil::Rng rng(314159);
    bool grad_ok = true;
    double worst = 0.0;
    for (auto fam : {ModelFamily::FDG, ModelFamily::FJ, ModelFamily::FDGM, ModelFamily::EPO,
                     ModelFamily::REPO}) {
        const int lag = fam == ModelFamily::FDGM ? 1 : 0;
        for (int rep = 0; rep < 100; ++rep) {
            const ParamSet p = testutil::random_params(fam, 7, 10, rng);
            const double dev = gradient_check({fam, lag}, p, panel, 10);
            worst = std::max(worst, dev);
            if (dev >= 1e-4) grad_ok = false;
        }
    }
    CHECK(grad_ok);

    bool trace_ok = true;
    for (const auto& spec :
         {ModelSpec{ModelFamily::FDG, 0}, ModelSpec{ModelFamily::REPO, 1},
          ModelSpec{ModelFamily::EPO, 2}}) {
        const auto r = fit(spec, panel, 10, acceptance_config());
        if (!monotone(r.solver_trace)) trace_ok = false;
    }
    CHECK(trace_ok);
    report(8, grad_ok && trace_ok,
           "gradient deviation max " + std::to_string(worst) + ", traces monotone");
}

TEST_CASE("criterion 09: round-trip identification") {
    testutil::Rng rng(12345);

    // FDG, B = 4, T = 40.
    const int B = 4, T = 40;
    Mat W(B, B);
    for (int b = 0; b < B; ++b) {
        Vec row(B);
        double s = 0.0;
        for (int k = 0; k < B; ++k) {
            row[k] = (k == b ? 2.0 : 0.2) + rng.u01();
            s += row[k];
        }
        for (int k = 0; k < B; ++k) W(b, k) = row[k] / s;
    }
    Vec x0(B);
    for (auto& v : x0) v = rng.uniform(0.05, 0.95);
    const auto panel = testutil::simulate_fdg_panel(W, x0, T);
    const auto rf = fit({ModelFamily::FDG, 0}, panel, T, acceptance_config());
    double werr = 0.0;
    for (int b = 0; b < B; ++b)
        for (int k = 0; k < B; ++k) werr = std::max(werr, std::fabs(rf.params.W(b, k) - W(b, k)));
    const bool fdg_ok = rf.objective < 1e-8 && werr < 1e-4 && monotone(rf.solver_trace);
    CHECK(rf.objective < 1e-8);
    CHECK(werr < 1e-4);

    // Reduced EPO, B = 3, T = 60, interior expression coefficients.
    testutil::Rng rg(777);
    const int B2 = 3, T2 = 60;
    Mat A(B2, B2, 0.0);
    for (int b = 0; b < B2; ++b) {
        const Vec row = testutil::simplex_row(B2, b, rg, 0.3);
        for (int k = 0; k < B2; ++k) A(b, k) = row[k];
    }
    ParamSet gen;
    gen.A = A;
    gen.D = {0.35, 0.55, 0.45};
    gen.Phi = {0.7, 0.6, 0.8};
    gen.S = Vec(B2, 1.0);
    gen.W = Mat(B2, B2);
    for (int b = 0; b < B2; ++b) {
        gen.W(b, b) = gen.D[b];
        for (int k = 0; k < B2; ++k)
            if (k != b) gen.W(b, k) = (1.0 - gen.D[b]) * A(b, k);
    }
    Mat vals(B2, T2);
    SimState st;
    st.x = {0.3, 0.8, 0.55};
    st.xe_history = {{0.35, 0.72, 0.5}};
    for (int b = 0; b < B2; ++b) vals(b, 0) = st.xe_history[0][b];
    const auto traj = simulate({ModelFamily::REPO, 0}, gen, st, T2 - 1);
    for (int t = 1; t < T2; ++t)
        for (int b = 0; b < B2; ++b) vals(b, t) = traj[t - 1].xe[b];
    const auto panel2 = testutil::panel_from(vals);
    const auto rr = fit({ModelFamily::REPO, 0}, panel2, T2, acceptance_config());
    const bool repo_ok = rr.objective < 1e-8 && monotone(rr.solver_trace);
    CHECK(rr.objective < 1e-8);
    CHECK(monotone(rr.solver_trace));

    report(9, fdg_ok && repo_ok,
           "FDG objective " + std::to_string(rf.objective) + ", W error " +
               std::to_string(werr) + "; reduced-EPO objective " + std::to_string(rr.objective));
}

TEST_CASE("criterion 10: report consistency stands in for the unpublished conventions") {
    const auto& panel = bundled().panel;
    struct Case {
        ModelFamily fam;
        int lag;
    };
    const Case cases[] = {
        {ModelFamily::FDG, 0},  {ModelFamily::FJ, 0},   {ModelFamily::FDGM, 1},
        {ModelFamily::FDGM, 2}, {ModelFamily::EPO, 0},  {ModelFamily::REPO, 0},
        {ModelFamily::EPO, 1},  {ModelFamily::REPO, 1}, {ModelFamily::EPO, 2},
        {ModelFamily::REPO, 2},
    };
    bool ok = true;
    for (const auto& c : cases) {
        const auto r = fit({c.fam, c.lag}, panel, 10, acceptance_config());
        const auto rep = evaluate(r, panel, {11, 12});
        double mean_sq = 0.0;
        for (double v : rep.rmse_per_test_period) mean_sq += v * v;
        mean_sq /= static_cast<double>(rep.rmse_per_test_period.size());
        const double consistency =
            std::fabs(rep.rmse_test_overall * rep.rmse_test_overall - mean_sq);
        if (consistency > 1e-14) ok = false;
        if (rep.mae > rep.rmse_in_sample + 1e-15) ok = false;
        CHECK(consistency <= 1e-14);
        CHECK(rep.mae <= rep.rmse_in_sample + 1e-15);
    }
    report(10, ok, "rmse aggregation exact, MAE <= RMSE on all ten evaluations");
}
