#include "opinionfit/model_json.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "opinionfit/errors.hpp"

namespace opinionfit {

using nlohmann::json;

namespace {

json mat_to_json(const Mat& m) {
    if (m.empty()) return nullptr;
    return json(m.data);
}

json vec_to_json(const Vec& v) {
    if (v.empty()) return nullptr;
    return json(v);
}

Mat mat_from_json(const json& j, int rows, int cols, const char* name) {
    if (j.is_null()) return {};
    Mat m(rows, cols);
    if (j.size() != m.data.size()) throw Error(std::string("field ") + name + " has wrong size");
    for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = j[i].get<double>();
    return m;
}

Vec vec_from_json(const json& j, int n, const char* name) {
    if (j.is_null()) return {};
    Vec v(n);
    if (static_cast<int>(j.size()) != n)
        throw Error(std::string("field ") + name + " has wrong size");
    for (int i = 0; i < n; ++i) v[i] = j[i].get<double>();
    return v;
}

}  // namespace

void write_model_json(const FitResult& fit, const std::string& path) {
    const bool repo = fit.spec.family == ModelFamily::REPO;
    json j;
    j["family"] = family_name(fit.spec.family);
    j["lag"] = fit.spec.lag;
    j["t_est"] = fit.n_train_periods;
    j["objective"] = fit.objective;
    j["W"] = mat_to_json(fit.params.W);
    j["A"] = mat_to_json(fit.params.A);
    j["D"] = vec_to_json(fit.params.D);
    j["S"] = repo ? json(nullptr) : vec_to_json(fit.params.S);  // implied all-ones
    j["Phi"] = vec_to_json(fit.params.Phi);
    j["z"] = vec_to_json(fit.params.z);
    j["X"] = mat_to_json(fit.params.X);
    j["seed"] = fit.seed;
    j["n_starts"] = fit.n_starts;
    j["converged"] = fit.converged;
    json trace = json::array();
    for (const auto& tp : fit.solver_trace) trace.push_back({tp.iteration, tp.objective});
    j["solver_trace"] = std::move(trace);

    std::ofstream out(path);
    if (!out) throw Error("cannot write model file '" + path + "'");
    out << j.dump(2) << '\n';
}

FitResult read_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("bad model JSON in '" + path + "': " + e.what());
    }

    FitResult fit;
    fit.spec.family = family_from_name(j.at("family").get<std::string>());
    fit.spec.lag = j.at("lag").get<int>();
    make_model_spec(fit.spec.family, fit.spec.lag);
    fit.n_train_periods = j.at("t_est").get<int>();
    fit.objective = j.at("objective").get<double>();
    fit.seed = j.at("seed").get<std::uint64_t>();
    fit.n_starts = j.at("n_starts").get<int>();
    fit.converged = j.at("converged").get<bool>();
    for (const auto& tp : j.at("solver_trace"))
        fit.solver_trace.push_back({tp.at(0).get<long>(), tp.at(1).get<double>()});

    const json& jw = j.at("W");
    if (jw.is_null()) throw Error("model file lacks W");
    const int B = static_cast<int>(std::lround(std::sqrt(static_cast<double>(jw.size()))));
    if (B * B != static_cast<int>(jw.size())) throw Error("W is not square");
    fit.params.W = mat_from_json(jw, B, B, "W");
    fit.params.A = mat_from_json(j.at("A"), B, B, "A");
    fit.params.D = vec_from_json(j.at("D"), B, "D");
    fit.params.S = vec_from_json(j.at("S"), B, "S");
    fit.params.Phi = vec_from_json(j.at("Phi"), B, "Phi");
    fit.params.z = vec_from_json(j.at("z"), B, "z");
    fit.params.X = mat_from_json(j.at("X"), B, fit.n_train_periods, "X");
    if (fit.spec.family == ModelFamily::REPO && fit.params.S.empty())
        fit.params.S.assign(B, 1.0);

    // Sanity only; no renormalization, so reloaded values stay bit-identical.
    for (int b = 0; b < B; ++b) {
        double sum = 0.0;
        for (int k = 0; k < B; ++k) sum += fit.params.W(b, k);
        if (std::fabs(sum - 1.0) > 1e-6) throw Error("model file W is not row-stochastic");
    }
    return fit;
}

}  // namespace opinionfit
