#ifndef DIMER_LINALG_HPP
#define DIMER_LINALG_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "dimer/common.hpp"

namespace dimer {

// Dense row-major matrix, just enough linear algebra for the small systems
// in this project (Kasteleyn inverses, pairing determinants).
template <typename T>
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<T> data;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), data(size_t(r) * c, T(0)) {}
    T& at(int r, int c) { return data[size_t(r) * cols + c]; }
    const T& at(int r, int c) const { return data[size_t(r) * cols + c]; }
};

template <typename T>
struct LuDecomposition {
    DenseMatrix<T> lu;
    std::vector<int> perm;
    int sign = 1;
    bool singular = false;
};

template <typename T>
double lu_abs(const T& v) {
    if constexpr (std::is_same_v<T, std::complex<double>>)
        return std::abs(v);
    else
        return std::fabs(v);
}

template <typename T>
LuDecomposition<T> lu_factor(DenseMatrix<T> a, double pivot_tol = 1e-13) {
    const int n = a.rows;
    LuDecomposition<T> f;
    f.perm.resize(n);
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    double scale = 0.0;
    for (const T& v : a.data) scale = std::max(scale, lu_abs(v));
    if (scale == 0.0) scale = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = lu_abs(a.at(k, k));
        for (int r = k + 1; r < n; ++r) {
            double v = lu_abs(a.at(r, k));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best <= pivot_tol * scale) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(a.at(piv, c), a.at(k, c));
            std::swap(f.perm[piv], f.perm[k]);
            f.sign = -f.sign;
        }
        const T inv_piv = T(1) / a.at(k, k);
        for (int r = k + 1; r < n; ++r) {
            const T m = a.at(r, k) * inv_piv;
            a.at(r, k) = m;
            if (m != T(0))
                for (int c = k + 1; c < n; ++c) a.at(r, c) -= m * a.at(k, c);
        }
    }
    f.lu = std::move(a);
    return f;
}

template <typename T>
T lu_determinant(const LuDecomposition<T>& f) {
    if (f.singular) return T(0);
    T det = T(f.sign);
    for (int i = 0; i < f.lu.rows; ++i) det *= f.lu.at(i, i);
    return det;
}

// Solve A x = b given the factorization of A.
template <typename T>
std::vector<T> lu_solve(const LuDecomposition<T>& f, const std::vector<T>& b) {
    const int n = f.lu.rows;
    std::vector<T> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu.at(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu.at(i, j) * x[j];
        x[i] /= f.lu.at(i, i);
    }
    return x;
}

template <typename T>
DenseMatrix<T> lu_inverse(const LuDecomposition<T>& f) {
    const int n = f.lu.rows;
    DenseMatrix<T> inv(n, n);
    std::vector<T> e(n, T(0));
    for (int c = 0; c < n; ++c) {
        std::fill(e.begin(), e.end(), T(0));
        e[c] = T(1);
        std::vector<T> x = lu_solve(f, e);
        for (int r = 0; r < n; ++r) inv.at(r, c) = x[r];
    }
    return inv;
}

template <typename T>
T determinant(const DenseMatrix<T>& a) {
    return lu_determinant(lu_factor(a));
}

} // namespace dimer

#endif
