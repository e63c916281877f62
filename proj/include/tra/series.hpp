#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tra/classes.hpp"
#include "tra/errors.hpp"
#include "tra/polynomials.hpp"

namespace tra {

namespace detail {

inline constexpr double kLogOverflow = 709.0;

// x^g e^{-beta/x} with its first two derivatives; Overflow instead of inf.
inline Jet<double> envelope(double g, double beta, double x) {
    const double lg = g * std::log(x) - beta / x;
    if (lg > kLogOverflow)
        throw Overflow("basis envelope x^" + num(g) + " e^{-" + num(beta) + "/x} overflows at x=" + num(x));
    const double w = std::exp(lg);
    const double r = g / x + beta / (x * x);
    const double dr = -g / (x * x) - 2.0 * beta / (x * x * x);
    return {w, r * w, (r * r + dr) * w};
}

inline Jet<double> product(const Jet<double>& w, const Jet<double>& p) {
    return {w.value * p.value, w.d1 * p.value + w.value * p.d1, w.d2 * p.value + 2.0 * w.d1 * p.d1 + w.value * p.d2};
}

}  // namespace detail

/// (phi_n, phi_n', phi_n'') for n = 0..N at x, derivatives from the differentiated polynomial recursions.
inline std::vector<Jet<double>> basis_sequence(const BasisSpec& b, int N, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("basis functions need finite x > 0");
    if (N < 0) throw DomainError("basis degree must be nonnegative");
    std::vector<Jet<double>> out;
    out.reserve(N + 1);
    if (b.kind == BasisKind::bessel) {
        if (b.n_max >= 0 && N > b.n_max) throw DomainError("basis degree exceeds the admissible range mu < -N - 1/2");
        const BesselJ fam{b.mu0, N};
        const auto v = detail::variable(fam, x);
        const auto seq = detail::family_sequence(fam, N, x, true);
        const Jet<double> w = detail::envelope(b.exponent, b.beta, x);
        for (const auto& p : seq) out.push_back(detail::product(w, detail::chain(p, v)));
        return out;
    }
    if (!(b.laguerre_order > -1.0)) throw DomainError("Laguerre basis needs nu > -1/2");
    const LaguerreL fam{b.laguerre_order};
    const double u = 1.0 / x;
    const auto v = detail::variable(fam, u);
    const auto seq = detail::family_sequence(fam, N, u, true);
    const Jet<double> w = detail::envelope(b.exponent, b.beta, x);
    double g = 1.0;
    for (int n = 0; n <= N; ++n) {
        const Jet<double> pu = detail::chain(seq[n], v);
        // d/dx = -u^2 d/du
        const Jet<double> px{pu.value, -u * u * pu.d1, u * u * u * u * pu.d2 + 2.0 * u * u * u * pu.d1};
        Jet<double> phi = detail::product(w, px);
        if (b.g_factorial) {
            if (n > 0) g *= -static_cast<double>(n);
            phi = {g * phi.value, g * phi.d1, g * phi.d2};
        }
        out.push_back(phi);
    }
    return out;
}

inline Jet<double> basis_derivatives(const BasisSpec& b, int n, double x) { return basis_sequence(b, n, x).back(); }

/// Truncated expansion y_N = sum_{n<=N} f_n phi_n.
struct SeriesSolution {
    ClassSolution solution;
    int N = 0;
    std::vector<double> coeffs;
};

inline SeriesSolution make_series(const ClassSolution& sol, int N) { return {sol, N, expansion_coefficients(sol, N)}; }

/// Series with caller-supplied coefficients (length fixes N).
inline SeriesSolution make_series(const ClassSolution& sol, std::vector<double> coeffs) {
    if (coeffs.empty()) throw DomainError("series needs at least one coefficient");
    const int N = static_cast<int>(coeffs.size()) - 1;
    if (sol.basis.kind == BasisKind::bessel && N > sol.basis.n_max)
        throw ConstraintViolation("mu < -N - 1/2", sol.basis.mu0 + N + 0.5);
    return {sol, N, std::move(coeffs)};
}

inline Jet<double> series_jet(const SeriesSolution& s, double x) {
    const auto phi = basis_sequence(s.solution.basis, s.N, x);
    Jet<double> y{0.0, 0.0, 0.0};
    for (int n = 0; n <= s.N; ++n) {
        y.value += s.coeffs[n] * phi[n].value;
        y.d1 += s.coeffs[n] * phi[n].d1;
        y.d2 += s.coeffs[n] * phi[n].d2;
    }
    return y;
}

inline double evaluate_series(const SeriesSolution& s, double x) {
    const double y = series_jet(s, x).value;
    if (!std::isfinite(y)) throw Overflow("series value is not finite at x=" + num(x));
    return y;
}

}  // namespace tra
