#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tra/errors.hpp"
#include "tra/tridiagonal.hpp"

namespace tra {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights mu0 * (first component)^2.
inline QuadratureRule golub_welsch(const SymTridiag& jacobi, double mu0) {
    const TridiagEigen eig = tridiag_eigen_first(jacobi);
    QuadratureRule rule;
    rule.nodes = eig.values;
    rule.weights.reserve(eig.values.size());
    for (double z : eig.first_components) rule.weights.push_back(mu0 * z * z);
    return rule;
}

/// Generalized Gauss-Laguerre rule for the weight u^alpha e^{-u} on (0, inf).
inline QuadratureRule gauss_laguerre(int n, double alpha) {
    if (n < 1) throw DomainError("gauss_laguerre: need at least one node");
    if (!(alpha > -1.0)) throw DomainError("gauss_laguerre: alpha must exceed -1");
    SymTridiag j;
    j.diag.resize(n);
    j.offdiag.resize(n - 1);
    for (int k = 0; k < n; ++k) j.diag[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) j.offdiag[k - 1] = std::sqrt(k * (k + alpha));
    return golub_welsch(j, std::tgamma(alpha + 1.0));
}

/// Gauss-Legendre rule on [-1, 1].
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    SymTridiag j;
    j.diag.assign(n, 0.0);
    j.offdiag.resize(n - 1);
    for (int k = 1; k < n; ++k) j.offdiag[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(j, 2.0);
}

inline double apply_rule(const QuadratureRule& rule, const std::function<double(double)>& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
    return sum;
}

struct AdaptiveResult {
    double value = 0.0;
    double estimated_error = 0.0;
    int nodes = 0;
};

/// Integral of u^alpha e^{-u} g(u) with node doubling until successive estimates agree.
/// Agreement is relative to sum |w g|, so integrals that cancel to zero still settle.
inline AdaptiveResult adaptive_gauss_laguerre(const std::function<double(double)>& g, double alpha, double rel_tol = 1e-10,
                                              int start = 64, int cap = 1024) {
    auto estimate = [&](int n, double& magnitude) {
        const QuadratureRule rule = gauss_laguerre(n, alpha);
        double sum = 0.0;
        magnitude = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double v = rule.weights[i] * g(rule.nodes[i]);
            sum += v;
            magnitude += std::abs(v);
        }
        return sum;
    };
    double magnitude = 0.0;
    double prev = estimate(start, magnitude);
    for (int n = 2 * start; n <= cap; n *= 2) {
        const double cur = estimate(n, magnitude);
        const double err = std::abs(cur - prev);
        if (err <= rel_tol * std::max(magnitude, 1e-300)) return {cur, err, n};
        prev = cur;
    }
    throw QuadratureFailure("adaptive Gauss-Laguerre: estimates did not agree to relative " + num(rel_tol) +
                            " within " + std::to_string(cap) + " nodes");
}

/// Composite Gauss-Legendre over [lo, hi] split into equal panels.
inline double composite_gauss_legendre(const std::function<double(double)>& f, double lo, double hi, int panels,
                                       const QuadratureRule& rule) {
    const double h = (hi - lo) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = lo + (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(c + 0.5 * h * rule.nodes[i]);
    }
    return 0.5 * h * sum;
}

}  // namespace tra
