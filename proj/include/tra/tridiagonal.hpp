#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "tra/errors.hpp"

namespace tra {

/// Symmetric tridiagonal matrix: diag has size n, offdiag size n-1 (offdiag[i] couples i and i+1).
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const noexcept { return diag.size(); }
};

inline void validate(const SymTridiag& t) {
    if (t.diag.empty()) throw DomainError("tridiagonal matrix is empty");
    if (t.offdiag.size() + 1 != t.diag.size()) throw DomainError("off-diagonal length must be size-1");
    for (double v : t.diag)
        if (!std::isfinite(v)) throw DomainError("non-finite diagonal entry");
    for (double v : t.offdiag)
        if (!std::isfinite(v)) throw DomainError("non-finite off-diagonal entry");
}

struct TridiagEigen {
    std::vector<double> values;            // ascending
    std::vector<double> first_components;  // first row of the eigenvector matrix (same order)
};

namespace detail {

// Implicit-shift QL. d, e are overwritten; z (if non-null) receives the first row of the eigenvectors.
inline void implicit_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z, int max_sweeps) {
    const std::size_t n = d.size();
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int sweeps = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++sweeps > max_sweeps)
                throw ConvergenceFailure("tridiagonal QL: no convergence after " + std::to_string(max_sweeps) +
                                         " sweeps at index " + std::to_string(l));
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (z) {
                    const double zf = (*z)[i + 1];
                    (*z)[i + 1] = s * (*z)[i] + c * zf;
                    (*z)[i] = c * (*z)[i] - s * zf;
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (true);
    }
}

}  // namespace detail

/// All eigenvalues, ascending.
inline std::vector<double> tridiag_eigenvalues(const SymTridiag& t, int max_sweeps = 60) {
    validate(t);
    std::vector<double> d = t.diag;
    std::vector<double> e = t.offdiag;
    detail::implicit_ql(d, e, nullptr, max_sweeps);
    std::sort(d.begin(), d.end());
    return d;
}

/// Eigenvalues plus first eigenvector components (Golub-Welsch input).
inline TridiagEigen tridiag_eigen_first(const SymTridiag& t, int max_sweeps = 60) {
    validate(t);
    const std::size_t n = t.size();
    std::vector<double> d = t.diag;
    std::vector<double> e = t.offdiag;
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    detail::implicit_ql(d, e, &z, max_sweeps);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    TridiagEigen out;
    out.values.reserve(n);
    out.first_components.reserve(n);
    for (std::size_t i : order) {
        out.values.push_back(d[i]);
        out.first_components.push_back(z[i]);
    }
    return out;
}

/// Number of eigenvalues strictly below x (Sturm sequence).
inline std::size_t sturm_count(const SymTridiag& t, double x) {
    const std::size_t n = t.size();
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t count = 0;
    double q = t.diag[0] - x;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        if (q == 0.0) q = tiny;
        q = t.diag[i] - x - t.offdiag[i - 1] * t.offdiag[i - 1] / q;
        if (q < 0) ++count;
    }
    return count;
}

/// The k lowest eigenvalues by bisection; suited to large sparse spectra where only a few levels matter.
inline std::vector<double> lowest_eigenvalues(const SymTridiag& t, std::size_t k, double abs_tol = 1e-13) {
    validate(t);
    const std::size_t n = t.size();
    k = std::min(k, n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(t.offdiag[i - 1]);
        if (i + 1 < n) r += std::abs(t.offdiag[i]);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double span = std::max(hi - lo, 1.0);
    std::vector<double> out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        double a = lo - 1e-12 * span;
        double b = hi + 1e-12 * span;
        for (int it = 0; it < 200 && b - a > abs_tol * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(t, mid) > j)
                b = mid;
            else
                a = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

/// Eigenvector for an (approximate) eigenvalue by inverse iteration; unit 2-norm.
inline std::vector<double> inverse_iteration(const SymTridiag& t, double lambda, int iterations = 3) {
    validate(t);
    const std::size_t n = t.size();
    if (n == 1) return {1.0};
    double norm = 0.0;
    for (double v : t.diag) norm = std::max(norm, std::abs(v));
    for (double v : t.offdiag) norm = std::max(norm, std::abs(v));
    const double shift = lambda + 1e-10 * std::max(norm, 1.0);

    // LU with partial pivoting of T - shift*I (band: diag d, super u1, super-super u2, sub l).
    std::vector<double> d(n), u1(n, 0.0), u2(n, 0.0), lmul(n, 0.0);
    std::vector<int> swapped(n, 0);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
    std::vector<double> sub(t.offdiag), sup(t.offdiag);
    sup.push_back(0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) u1[i] = sup[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(sub[i])) {
            if (d[i] == 0.0) d[i] = 1e-300;
            lmul[i] = sub[i] / d[i];
            d[i + 1] -= lmul[i] * u1[i];
        } else {
            swapped[i] = 1;
            lmul[i] = d[i] / sub[i];
            d[i] = sub[i];
            const double tmp = u1[i];
            u1[i] = d[i + 1];
            d[i + 1] = tmp - lmul[i] * d[i + 1];
            if (i + 2 < n) {
                u2[i] = u1[i + 1];
                u1[i + 1] = -lmul[i] * u2[i];
            }
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = 1e-300;

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> y = x;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped[i]) {
                std::swap(y[i], y[i + 1]);
                y[i + 1] -= lmul[i] * y[i];
            } else {
                y[i + 1] -= lmul[i] * y[i];
            }
        }
        for (std::size_t i = n; i-- > 0;) {
            double v = y[i];
            if (i + 1 < n) v -= u1[i] * y[i + 1];
            if (i + 2 < n) v -= u2[i] * y[i + 2];
            y[i] = v / d[i];
        }
        double s = 0.0;
        for (double v : y) s += v * v;
        s = std::sqrt(s);
        if (!(s > 0.0) || !std::isfinite(s)) throw ConvergenceFailure("inverse iteration: degenerate solve");
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / s;
    }
    return x;
}

}  // namespace tra
