#include "opinionfit/panel.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "opinionfit/errors.hpp"
#include "opinionfit/format.hpp"

namespace opinionfit {

const char* family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::FDG: return "fdg";
        case ModelFamily::FJ: return "fj";
        case ModelFamily::FDGM: return "fdgm";
        case ModelFamily::EPO: return "epo";
        case ModelFamily::REPO: return "repo";
    }
    return "?";
}

ModelFamily family_from_name(const std::string& name) {
    if (name == "fdg") return ModelFamily::FDG;
    if (name == "fj") return ModelFamily::FJ;
    if (name == "fdgm") return ModelFamily::FDGM;
    if (name == "epo") return ModelFamily::EPO;
    if (name == "repo") return ModelFamily::REPO;
    throw InvalidModelSpec("unknown model family '" + name + "'");
}

ModelSpec make_model_spec(ModelFamily family, int lag) {
    if (lag < 0) throw InvalidModelSpec("lag must be >= 0");
    if ((family == ModelFamily::FDG || family == ModelFamily::FJ) && lag != 0)
        throw InvalidModelSpec(std::string(family_name(family)) + " takes lag 0 only");
    if (family == ModelFamily::FDGM && lag < 1) throw InvalidModelSpec("fdgm requires lag >= 1");
    return ModelSpec{family, lag};
}

SentimentPanel validate_panel(Mat values, std::vector<std::string> blog_ids,
                              std::vector<std::string> period_labels) {
    const int B = values.rows;
    const int T = values.cols;
    if (B < 1 || static_cast<int>(blog_ids.size()) != B ||
        static_cast<int>(period_labels.size()) != T)
        throw DimensionMismatch("panel labels do not match value dimensions");
    if (T < 2) throw TooFewPeriods("panel needs at least 2 periods, got " + std::to_string(T));
    for (int b = 0; b < B; ++b)
        for (int t = 0; t < T; ++t) {
            const double v = values(b, t);
            if (!(v >= 0.0 && v <= 1.0))
                throw OutOfRangeValue("panel value " + format_sig6(v) + " at blog " +
                                      blog_ids[b] + ", period " + std::to_string(t + 1) +
                                      " outside [0,1]");
        }
    std::unordered_set<std::string> seen;
    for (const auto& id : blog_ids)
        if (!seen.insert(id).second) throw DuplicateId("duplicate blog id '" + id + "'");
    seen.clear();
    for (const auto& lab : period_labels)
        if (!seen.insert(lab).second) throw DuplicateId("duplicate period label '" + lab + "'");
    return SentimentPanel{std::move(values), std::move(blog_ids), std::move(period_labels)};
}

std::set<std::string> active_parameters(const ModelSpec& spec) {
    switch (spec.family) {
        case ModelFamily::FDG: return {"W"};
        case ModelFamily::FJ: return {"W", "S", "z"};
        case ModelFamily::FDGM: return {"W", "S"};
        case ModelFamily::EPO: return {"A", "D", "S", "Phi", "z", "X"};
        case ModelFamily::REPO: return {"A", "D", "Phi", "X"};
    }
    return {};
}

namespace {

bool two_layer(ModelFamily f) { return f == ModelFamily::EPO || f == ModelFamily::REPO; }

void check_box(const Vec& v, int n, const char* name) {
    if (static_cast<int>(v.size()) != n)
        throw InvalidParamSet(std::string(name) + " has wrong length");
    for (double x : v)
        if (!(x >= 0.0 && x <= 1.0))
            throw InvalidParamSet(std::string(name) + " entry " + format_sig6(x) +
                                  " outside [0,1]");
}

void renormalize_rows(Mat& m, double slack, bool zero_diag, const char* name) {
    for (int r = 0; r < m.rows; ++r) {
        if (zero_diag) {
            if (m(r, r) != 0.0 && std::fabs(m(r, r)) > slack)
                throw InvalidParamSet(std::string(name) + " diagonal must be zero");
            m(r, r) = 0.0;
        }
        double sum = 0.0;
        for (int c = 0; c < m.cols; ++c) {
            if (m(r, c) < 0.0) {
                if (m(r, c) < -slack)
                    throw InvalidParamSet(std::string(name) + " has a negative entry");
                m(r, c) = 0.0;
            }
            sum += m(r, c);
        }
        if (std::fabs(sum - 1.0) > slack)
            throw InvalidParamSet(std::string(name) + " row " + std::to_string(r + 1) +
                                  " sums to " + format_sig6(sum));
        for (int c = 0; c < m.cols; ++c) m(r, c) /= sum;
    }
}

}  // namespace

ParamSet make_params(const ModelSpec& spec, ParamSet raw, double row_slack,
                     double coupling_slack, bool require_latents) {
    const int B = two_layer(spec.family) ? raw.A.rows : raw.W.rows;
    if (B < 1) throw InvalidParamSet("empty parameter bundle");

    auto require_empty = [&](bool cond, const char* name) {
        if (!cond) throw InactiveParameter(std::string("field ") + name + " is inactive for " +
                                           family_name(spec.family));
    };

    if (!two_layer(spec.family)) {
        if (raw.W.rows != B || raw.W.cols != B) throw InvalidParamSet("W must be B x B");
        renormalize_rows(raw.W, row_slack, false, "W");
        require_empty(raw.A.empty(), "A");
        require_empty(raw.D.empty(), "D");
        require_empty(raw.Phi.empty(), "Phi");
        require_empty(raw.X.empty(), "X");
        if (spec.family == ModelFamily::FDG) {
            require_empty(raw.S.empty(), "S");
            require_empty(raw.z.empty(), "z");
        } else {
            check_box(raw.S, B, "S");
            if (spec.family == ModelFamily::FJ)
                check_box(raw.z, B, "z");
            else
                require_empty(raw.z.empty(), "z");
        }
        return raw;
    }

    // EPO / REPO
    if (raw.A.rows != B || raw.A.cols != B) throw InvalidParamSet("A must be B x B");
    renormalize_rows(raw.A, row_slack, true, "A");
    check_box(raw.D, B, "D");
    check_box(raw.Phi, B, "Phi");
    if (spec.family == ModelFamily::EPO) {
        check_box(raw.S, B, "S");
        check_box(raw.z, B, "z");
    } else {
        if (raw.S.empty()) raw.S.assign(B, 1.0);
        for (double s : raw.S)
            if (std::fabs(s - 1.0) > row_slack)
                throw InvalidParamSet("reduced EPO requires S = 1");
        raw.S.assign(B, 1.0);
        require_empty(raw.z.empty(), "z");
    }
    if (raw.X.empty()) {
        if (require_latents) throw InvalidParamSet("X (latent states) missing");
    } else {
        if (raw.X.rows != B || raw.X.cols < 2) throw InvalidParamSet("X must be B x T_est");
        for (double x : raw.X.data)
            if (!(x >= 0.0 && x <= 1.0)) throw InvalidParamSet("X entry outside [0,1]");
    }

    Mat W(B, B, 0.0);
    for (int b = 0; b < B; ++b) {
        W(b, b) = raw.D[b];
        for (int k = 0; k < B; ++k)
            if (k != b) W(b, k) = (1.0 - raw.D[b]) * raw.A(b, k);
    }
    if (!raw.W.empty()) {
        if (raw.W.rows != B || raw.W.cols != B) throw InvalidParamSet("W must be B x B");
        for (int b = 0; b < B; ++b)
            for (int k = 0; k < B; ++k)
                if (std::fabs(raw.W(b, k) - W(b, k)) > coupling_slack)
                    throw InvalidParamSet("W does not satisfy W = diag(D) + (I - diag(D)) A");
    }
    raw.W = std::move(W);
    return raw;
}

void check_params(const ModelSpec& spec, const ParamSet& p, int n_blogs, bool require_latents) {
    ParamSet copy = p;
    ParamSet rebuilt = make_params(spec, std::move(copy), 1e-9, 1e-9, require_latents);
    const int B = n_blogs;
    if (p.W.rows != B) throw DimensionMismatch("parameter bundle does not match panel size");
    (void)rebuilt;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, long line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ParseError("bad number '" + s + "'", line);
    return v;
}

}  // namespace

SentimentPanel read_panel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open panel file '" + path + "'");
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty panel file", 1);
    ++lineno;
    auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "blog_id")
        throw ParseError("panel header must be blog_id,p1,...,pT", lineno);
    std::vector<std::string> period_labels(header.begin() + 1, header.end());
    const int T = static_cast<int>(period_labels.size());

    std::vector<std::string> blog_ids;
    std::vector<Vec> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (static_cast<int>(f.size()) != T + 1)
            throw ParseError("expected " + std::to_string(T + 1) + " fields", lineno);
        blog_ids.push_back(f[0]);
        Vec row(T);
        for (int t = 0; t < T; ++t) row[t] = parse_double(f[t + 1], lineno);
        rows.push_back(std::move(row));
    }
    const int B = static_cast<int>(rows.size());
    if (B == 0) throw ParseError("panel has no blog rows", lineno);
    Mat values(B, T);
    for (int b = 0; b < B; ++b)
        for (int t = 0; t < T; ++t) values(b, t) = rows[b][t];
    return validate_panel(std::move(values), std::move(blog_ids), std::move(period_labels));
}

void write_panel_csv(const SentimentPanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write panel file '" + path + "'");
    out << "blog_id";
    for (const auto& lab : panel.period_labels) out << ',' << lab;
    out << '\n';
    for (int b = 0; b < panel.blogs(); ++b) {
        out << panel.blog_ids[b];
        for (int t = 0; t < panel.periods(); ++t) out << ',' << format_full(panel.values(b, t));
        out << '\n';
    }
}

}  // namespace opinionfit
