#include "opinionfit/linalg.hpp"

#include "opinionfit/errors.hpp"

namespace opinionfit {

double dot(const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    return dot(a.data(), b.data(), static_cast<int>(a.size()));
}

double sq_norm(const Vec& v) { return dot(v.data(), v.data(), static_cast<int>(v.size())); }

double sq_norm(const double* v, int n) { return dot(v, v, n); }

Vec matvec(const Mat& m, const Vec& v) {
    if (static_cast<int>(v.size()) != m.cols) throw DimensionMismatch("matvec: size mismatch");
    Vec out(m.rows);
    for (int r = 0; r < m.rows; ++r) out[r] = dot(m.row(r), v.data(), m.cols);
    return out;
}

Vec get_col(const Mat& m, int c) {
    Vec out(m.rows);
    for (int r = 0; r < m.rows; ++r) out[r] = m(r, c);
    return out;
}

void set_col(Mat& m, int c, const Vec& v) {
    for (int r = 0; r < m.rows; ++r) m(r, c) = v[r];
}

Mat identity(int n) {
    Mat m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

}  // namespace opinionfit
