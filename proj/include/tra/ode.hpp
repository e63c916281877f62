#pragma once

#include <cmath>
#include <limits>

#include "tra/errors.hpp"

namespace tra {

/// Coefficients of  x^2 y'' + (a x + b) y' + (A+ x + A- / x + A1 / x^2 - A0) y = 0.
struct OdeParams {
    double a = 0.0;
    double b = 0.0;
    double A_plus = 0.0;
    double A_minus = 0.0;
    double A_one = 0.0;
    double A_zero = 0.0;

    double potential(double x) const noexcept { return A_plus * x + A_minus / x + A_one / (x * x) - A_zero; }
};

inline void validate(const OdeParams& p) {
    for (double v : {p.a, p.b, p.A_plus, p.A_minus, p.A_one, p.A_zero})
        if (!std::isfinite(v)) throw DomainError("ODE parameters must be finite");
}

/// Symbols shared by the solution classes. Fields that do not apply to a basis are NaN.
struct DerivedSymbols {
    double nu_sq = 0.0;
    double nu = 0.0;  // principal root; NaN when nu_sq < 0
    bool nu_imaginary = false;
    double xi = 0.0;
    double zeta = 0.0;
    double kappa = 0.0;
    double chi_sq = 0.0;
    double sigma_plus = 0.0;
    double sigma_minus = 0.0;
    double tau = 0.0;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// alpha, mu: constant Bessel-basis parameters (NaN for the Laguerre basis); beta: basis decay.
inline DerivedSymbols derive_symbols(const OdeParams& p, double alpha, double mu, double beta) {
    DerivedSymbols s;
    s.nu_sq = p.A_zero + 0.25 * (p.a - 1.0) * (p.a - 1.0);
    s.nu_imaginary = s.nu_sq < 0.0;
    s.nu = s.nu_imaginary ? kNaN : std::sqrt(s.nu_sq);
    s.xi = p.A_minus + p.b * (1.0 - 0.5 * p.a);
    s.zeta = -p.A_minus + s.nu + p.b * (0.5 * p.a - 1.0);
    s.kappa = s.xi + 0.5 * p.a + alpha - 1.0;
    s.sigma_plus = -(mu + 0.5) + (alpha + 0.5 * (p.a - 1.0));
    s.sigma_minus = -(mu + 0.5) - (alpha + 0.5 * (p.a - 1.0));
    s.chi_sq = s.nu_sq + s.sigma_plus * s.sigma_minus;
    s.tau = 2.0 * beta + p.b - 1.0;
    return s;
}

}  // namespace tra
