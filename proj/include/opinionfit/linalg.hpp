#pragma once

#include <cstddef>
#include <vector>

namespace opinionfit {

using Vec = std::vector<double>;

// Small dense row-major matrix. Everything in this toolkit is B x B or
// B x T with B in the tens, so plain loops are all we need.
struct Mat {
    int rows = 0;
    int cols = 0;
    Vec data;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    bool empty() const { return data.empty(); }
    bool operator==(const Mat&) const = default;
};

double dot(const double* a, const double* b, int n);
double dot(const Vec& a, const Vec& b);
double sq_norm(const Vec& v);
double sq_norm(const double* v, int n);

Vec matvec(const Mat& m, const Vec& v);
Vec get_col(const Mat& m, int c);
void set_col(Mat& m, int c, const Vec& v);
Mat identity(int n);

inline double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace opinionfit
