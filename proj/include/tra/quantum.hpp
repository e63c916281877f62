#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tra/classes.hpp"
#include "tra/errors.hpp"
#include "tra/ode.hpp"
#include "tra/series.hpp"
#include "tra/tridiagonal.hpp"

namespace tra {

using Potential = std::function<double(double)>;

/// A Schroedinger problem  -psi''/2 + [V(r) + (l(l+1) + Lambda)/(2 r^2)] psi = E psi  mapped onto the ODE by dx/dr = eta lambda x^a.
struct SystemSpec {
    double a_choice = 1.0;
    double lambda = 1.0;
    double eta_map = 1.0;
    int ell = 0;
    OdeParams ode;
    double Lambda_shift = 0.0;
    double centrifugal = 0.0;  // l(l+1) + Lambda
    double energy = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
    std::string x_of_r;
    std::string energy_formula;
    std::string potential_formula;
    std::function<double(double)> x;
    Potential potential;  // V(r) without the 1/r^2 term

    double effective_potential(double r) const {
        return centrifugal == 0.0 ? potential(r) : potential(r) + centrifugal / (2.0 * r * r);
    }
};

namespace detail {

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

}  // namespace detail

/// The four coordinate maps that turn the radial problem into the ODE with b = 0.
inline SystemSpec potential_map(double a_choice, const OdeParams& p, double lambda, int ell = 0) {
    validate(p);
    if (std::abs(p.b) > 1e-12) throw ConstraintViolation("b = 0", p.b);
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (ell < 0) throw DomainError("angular momentum must be nonnegative");
    SystemSpec s;
    s.a_choice = a_choice;
    s.lambda = lambda;
    s.ell = ell;
    s.ode = p;
    const double l = lambda;
    const double inf = std::numeric_limits<double>::infinity();
    const double ll = ell * (ell + 1.0);
    if (detail::near(a_choice, 0.5)) {
        s.eta_map = 2.0;
        s.x_of_r = "(lambda r)^2, r >= 0";
        s.energy_formula = "2 lambda^2 A+";
        s.potential_formula = "-(2 A-/lambda^2)/r^4 - (2 A1/lambda^4)/r^6";
        s.energy = 2.0 * l * l * p.A_plus;
        s.centrifugal = 4.0 * p.A_zero;
        s.r_max = inf;
        s.x = [l](double r) { return l * l * r * r; };
        s.potential = [p, l](double r) {
            const double r2 = r * r;
            return -2.0 * p.A_minus / (l * l * r2 * r2) - 2.0 * p.A_one / (l * l * l * l * r2 * r2 * r2);
        };
    } else if (detail::near(a_choice, 1.0)) {
        s.eta_map = 1.0;
        s.x_of_r = "e^{lambda r}, -inf < r < inf";
        s.energy_formula = "-lambda^2 A0 / 2";
        s.potential_formula = "-(lambda^2/2)(A+ e^{lambda r} + A- e^{-lambda r} + A1 e^{-2 lambda r})";
        s.energy = -0.5 * l * l * p.A_zero;
        s.centrifugal = 0.0;
        s.r_min = -inf;
        s.r_max = inf;
        s.x = [l](double r) { return std::exp(l * r); };
        s.potential = [p, l](double r) {
            const double e = std::exp(-l * r);
            return -0.5 * l * l * (p.A_plus / e + p.A_minus * e + p.A_one * e * e);
        };
    } else if (detail::near(a_choice, 1.5)) {
        s.eta_map = -2.0;
        s.x_of_r = "(lambda r)^{-2}, r >= 0";
        s.energy_formula = "2 lambda^2 A-";
        s.potential_formula = "-(2 A+/lambda^2)/r^4 - 2 lambda^4 A1 r^2";
        s.energy = 2.0 * l * l * p.A_minus;
        s.centrifugal = 4.0 * p.A_zero;
        s.r_max = inf;
        s.x = [l](double r) { return 1.0 / (l * l * r * r); };
        s.potential = [p, l](double r) {
            const double r2 = r * r;
            return -2.0 * p.A_plus / (l * l * r2 * r2) - 2.0 * l * l * l * l * p.A_one * r2;
        };
    } else if (detail::near(a_choice, 2.0)) {
        s.eta_map = -1.0;
        s.x_of_r = "(lambda r)^{-1}, r >= 0";
        s.energy_formula = "lambda^2 A1 / 2";
        s.potential_formula = "-(lambda A-/2)/r - (A+/(2 lambda))/r^3";
        s.energy = 0.5 * l * l * p.A_one;
        s.centrifugal = p.A_zero;
        s.r_max = inf;
        s.x = [l](double r) { return 1.0 / (l * r); };
        s.potential = [p, l](double r) { return -0.5 * l * p.A_minus / r - 0.5 * p.A_plus / (l * r * r * r); };
    } else {
        throw UnsupportedRow("a = " + num(a_choice) + " is not one of 1/2, 1, 3/2, 2");
    }
    s.Lambda_shift = s.centrifugal - (detail::near(a_choice, 1.0) ? 0.0 : ll);
    return s;
}

struct SpectrumResult {
    std::vector<double> energies;
    std::string method;
    std::vector<std::pair<std::string, double>> metadata;
    std::vector<double> deltas;  // per-level convergence delta where the method has one

    double meta(const std::string& key) const {
        for (const auto& [k, v] : metadata)
            if (k == key) return v;
        throw DomainError("no metadata entry " + key);
    }
};

// ---- finite-difference oracle --------------------------------------------------------------

namespace detail {

inline SymTridiag fd_matrix(const Potential& v_eff, double r_min, double h, int m) {
    SymTridiag t;
    t.diag.resize(m);
    t.offdiag.assign(m - 1, -0.5 / (h * h));
    for (int i = 0; i < m; ++i) {
        const double r = r_min + (i + 1) * h;
        const double v = v_eff(r);
        if (!std::isfinite(v)) throw DomainError("fd_oracle: potential is not finite at r=" + num(r));
        t.diag[i] = 1.0 / (h * h) + v;
    }
    return t;
}

}  // namespace detail

/// Lowest levels of -psi''/2 + V_eff psi = E psi on (r_min, r_max) with Dirichlet ends.
/// Three grids (m, 2m+1, 4m+3 interior points) halve h exactly; the answer is the Richardson value of the finest pair.
/// An r_min within 1e-4 of the width above zero is taken as the radial origin, where psi = 0 is physical and the edge test is skipped.
inline SpectrumResult fd_oracle(const Potential& v, double r_min, double r_max, int grid_size, int levels = 5,
                                std::optional<double> centrifugal = std::nullopt) {
    if (!(r_min < r_max) || !std::isfinite(r_min) || !std::isfinite(r_max)) throw DomainError("fd_oracle: need finite r_min < r_max");
    if (grid_size < 100) throw DomainError("fd_oracle: grid_size must be at least 100");
    if (levels < 1) throw DomainError("fd_oracle: need at least one level");
    const Potential v_eff = centrifugal ? Potential([v, c = *centrifugal](double r) { return v(r) + c / (2.0 * r * r); }) : v;
    std::vector<std::vector<double>> e;
    int m = grid_size;
    SymTridiag finest;
    double h = 0.0;
    for (int level = 0; level < 3; ++level) {
        h = (r_max - r_min) / (m + 1);
        finest = detail::fd_matrix(v_eff, r_min, h, m);
        e.push_back(lowest_eigenvalues(finest, levels));
        if (level < 2) m = 2 * m + 1;
    }
    SpectrumResult out;
    out.method = "fd_oracle";
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < levels; ++k) {
        const double d1 = std::abs(e[1][k] - e[0][k]);
        const double d2 = std::abs(e[2][k] - e[1][k]);
        out.energies.push_back(e[2][k] + (e[2][k] - e[1][k]) / 3.0);
        out.deltas.push_back(d2 / 3.0);
        if (d2 > 0.0) worst_ratio = std::min(worst_ratio, d1 / d2);
        const auto psi = inverse_iteration(finest, e[2][k]);
        double peak = 0.0;
        for (double c : psi) peak = std::max(peak, std::abs(c));
        const bool origin = r_min >= 0.0 && r_min <= 1e-4 * (r_max - r_min);
        const double edge = std::max(origin ? 0.0 : std::abs(psi.front()), std::abs(psi.back())) / peak;
        if (edge > 1e-6)
            throw BoundaryError("fd_oracle: level " + std::to_string(k) + " has |psi(edge)|/max|psi| = " + num(edge) +
                                "; widen the domain");
    }
    out.metadata = {{"r_min", r_min},       {"r_max", r_max},          {"grid_size", double(grid_size)},
                    {"finest_grid", double(m)}, {"finest_h", h},       {"min_delta_ratio", worst_ratio}};
    return out;
}

/// Walks from r0 until V >= e_max + 20 and the WKB decay exponent beyond the turning point reaches 18.
inline double walk_to_wall(const Potential& v, double r0, double step, double e_max, double limit) {
    double r = r0;
    bool allowed = v(r) < e_max;
    double action = 0.0;
    while (!allowed || v(r) < e_max + 20.0 || action < 18.0) {
        r += step;
        if ((step > 0 && r > limit) || (step < 0 && r < limit))
            throw BoundaryError("potential does not confine energy " + num(e_max) + " before r=" + num(limit));
        const double gap = v(r) - e_max;
        if (gap < 0.0) {
            allowed = true;
            action = 0.0;
        } else if (allowed) {
            action += std::sqrt(2.0 * gap) * std::abs(step);
        }
    }
    return r;
}

// ---- exponentially confining well ----------------------------------------------------------

struct ConfiningWell {
    double A_minus, A_plus, lambda;
    int N;
    Potential potential;
    SpectrumResult spectrum;
};

namespace detail {

inline OdeParams well_ode(double A_minus, double A_plus, double A_zero) { return {1.0, 0.0, A_plus, A_minus, -0.25, A_zero}; }

}  // namespace detail

inline Potential confining_potential(double A_minus, double A_plus, double lambda) {
    return [=](double r) {
        const double e = std::exp(-lambda * r);
        return 0.5 * lambda * lambda * (0.25 * e * e - A_minus * e - A_plus / e);
    };
}

/// Morse levels -(lambda^2/2)(A- - n - 1/2)^2 for n < A- - 1/2.
inline std::vector<double> morse_levels(double A_minus, double lambda, int count) {
    std::vector<double> out;
    for (int n = 0; n < count && n + 0.5 < A_minus; ++n) out.push_back(-0.5 * lambda * lambda * (A_minus - n - 0.5) * (A_minus - n - 0.5));
    return out;
}

/// Spectrum from the (N+1)x(N+1) Jacobi matrix of the DeformedB recursion; A+ = 0 falls back to the Morse levels.
inline ConfiningWell confining_well(double A_minus, double A_plus, double lambda, std::optional<int> N = std::nullopt) {
    if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
    if (!(A_plus <= 0.0)) throw ConstraintViolation("A+ <= 0", A_plus);
    ConfiningWell w{A_minus, A_plus, lambda, 0, confining_potential(A_minus, A_plus, lambda), {}};
    if (A_plus == 0.0) {
        const int n = N.value_or(static_cast<int>(std::floor(A_minus - 0.5)));
        if (!(A_minus >= n + 0.5)) throw ConstraintViolation("A- >= N + 1/2", A_minus - n - 0.5);
        w.N = n;
        w.spectrum.energies = morse_levels(A_minus, lambda, n + 1);
        w.spectrum.method = "morse_closed_form";
        w.spectrum.metadata = {{"N", double(n)}};
        return w;
    }
    const ClassSolution sol = resolve_class(detail::well_ode(A_minus, A_plus, 0.0), ClassId::K0);
    const int n = N.value_or(sol.basis.n_max);
    if (!(A_minus >= n + 0.5)) throw ConstraintViolation("A- >= N + 1/2", A_minus - n - 0.5);
    w.N = n;
    const auto z = tridiag_eigenvalues(jacobi_matrix(sol, n));
    for (double zk : z) w.spectrum.energies.push_back(-lambda * lambda * A_plus * zk / 8.0);
    std::sort(w.spectrum.energies.begin(), w.spectrum.energies.end());
    w.spectrum.method = "jacobi_matrix";
    w.spectrum.metadata = {{"N", double(n)}, {"matrix_size", double(n + 1)}};
    return w;
}

/// Expansion coefficients of level k, normalized to f_0 = 1. Taken from the Jacobi eigenvector
/// since forward recursion loses everything once the off-diagonals are small.
inline std::vector<double> confining_well_coefficients(const ConfiningWell& w, int k) {
    if (w.A_plus == 0.0) throw DomainError("coefficients need A+ < 0");
    if (k < 0 || k >= static_cast<int>(w.spectrum.energies.size())) throw DomainError("level index out of range");
    const ClassSolution sol = resolve_class(detail::well_ode(w.A_minus, w.A_plus, 0.0), ClassId::K0);
    const double zk = -8.0 * w.spectrum.energies[k] / (w.lambda * w.lambda * w.A_plus);
    const auto v = inverse_iteration(jacobi_matrix(sol, w.N), zk);
    if (v[0] == 0.0) throw ZeroDivision("level has no n = 0 component");
    std::vector<double> f(w.N + 1);
    double d = 1.0;
    const double sc = sol.split.c > 0.0 ? 1.0 : -1.0;
    for (int n = 0; n <= w.N; ++n) {
        f[n] = d * v[n] / v[0];
        if (n < w.N) {
            const RecursionCoeffs rc = recursion_coeffs(sol, n);
            d *= sc * std::sqrt(rc.s * rc.t) / rc.s;
        }
    }
    return f;
}

/// fd_oracle on a window whose walls both exceed e_ceiling + 20 (see walk_to_wall).
inline SpectrumResult confining_well_fd(const ConfiningWell& w, int levels, int grid_size = 2000, std::optional<double> e_ceiling = {}) {
    const double top = e_ceiling.value_or(w.spectrum.energies.at(std::min<std::size_t>(levels, w.spectrum.energies.size()) - 1));
    // the minimum sits near e^{-lambda r} = 2 A-, i.e. r = -ln(2 A-)/lambda
    const double r0 = -std::log(std::max(2.0 * w.A_minus, 1e-3)) / w.lambda;
    const double step = 0.05 / w.lambda;
    const double lo = walk_to_wall(w.potential, r0, -step, top, r0 - 200.0 / w.lambda);
    const double hi = walk_to_wall(w.potential, r0, step, top, r0 + 200.0 / w.lambda);
    return fd_oracle(w.potential, lo, hi, grid_size, levels);
}

// ---- singular isotropic oscillator ---------------------------------------------------------

inline double oscillator_energy(int k, double lambda, double A_one, double Lambda, int ell) {
    if (!(A_one < 0.0)) throw ConstraintViolation("A1 < 0", A_one);
    const double lh = ell + 0.5;
    if (!(Lambda + lh * lh >= 0.0)) throw ConstraintViolation("Lambda >= -(l+1/2)^2", Lambda + lh * lh);
    if (k < 0) throw DomainError("level index must be nonnegative");
    return 4.0 * lambda * lambda * std::sqrt(-A_one) * (k + 0.5 + 0.5 * std::sqrt(Lambda + lh * lh));
}

struct OscillatorWave {
    double cos_theta, eta, z;
    bool discrete_regime;
};

struct SingularOscillator {
    SystemSpec system;
    double nu;
    double Lambda;
    SpectrumResult spectrum;
    OscillatorWave wave;
    ClassSolution solution;

    double effective_potential(double r) const { return system.effective_potential(r); }
    /// phi_n(r) = g_n (lambda r)^{2nu+1/2} e^{-(tau+1) lambda^2 r^2/2} L_n^{2nu}(lambda^2 r^2)
    BasisSpec basis() const { return solution.basis; }
};

inline SingularOscillator singular_oscillator(double A_one, double A_minus, double A_zero, int ell, double lambda, double tau,
                                              int levels = 5) {
    if (!(A_one <= 0.0)) throw ConstraintViolation("A1 <= 0", A_one);
    if (!(16.0 * A_zero >= -1.0)) throw ConstraintViolation("16 A0 >= -1", 16.0 * A_zero + 1.0);
    if (!(4.0 * A_one + tau * tau > 0.0)) throw ConstraintViolation("4 A1 + tau^2 > 0", 4.0 * A_one + tau * tau);
    const OdeParams p{1.5, 0.0, 0.0, A_minus, A_one, A_zero};
    SingularOscillator s;
    s.system = potential_map(1.5, p, lambda, ell);
    s.nu = std::sqrt(A_zero + 1.0 / 16.0);
    const double lh = ell + 0.5;
    s.Lambda = 4.0 * s.nu * s.nu - lh * lh;
    if (std::abs(s.Lambda - s.system.Lambda_shift) > 1e-12 * (1.0 + std::abs(s.Lambda)))
        throw ConstraintViolation("4 A0 - l(l+1) = 4 nu^2 - (l+1/2)^2", s.Lambda - s.system.Lambda_shift);
    const double W = 4.0 * A_one + tau * tau;
    s.wave = {(W - 1.0) / (W + 1.0), tau / std::sqrt(W), A_minus / std::sqrt(W), std::abs(tau) > std::sqrt(W)};
    FreeParams f;
    f.tau = tau;
    s.solution = resolve_class(p, ClassId::L39C, f);
    s.spectrum.method = "closed_form";
    if (A_one < 0.0)
        for (int k = 0; k < levels; ++k) s.spectrum.energies.push_back(oscillator_energy(k, lambda, A_one, s.Lambda, ell));
    s.spectrum.metadata = {{"nu", s.nu}, {"Lambda", s.Lambda}};
    return s;
}

/// fd_oracle for a radial system on (1e-6/lambda, r_R) with r_R from walk_to_wall at e_top.
inline SpectrumResult radial_fd(const SystemSpec& sys, double e_top, int levels, int grid_size = 4000) {
    const double lambda = sys.lambda;
    const double r_lo = 1e-6 / lambda;
    const Potential v = [&sys](double r) { return sys.effective_potential(r); };
    const double r_hi = walk_to_wall(v, 1.0 / lambda, 0.05 / lambda, e_top, 1e3 / lambda);
    return fd_oracle(v, r_lo, r_hi, grid_size, levels);
}

inline SpectrumResult singular_oscillator_fd(const SingularOscillator& s, int levels, int grid_size = 4000) {
    const double top = s.spectrum.energies.empty() ? 0.0 : s.spectrum.energies.back();
    return radial_fd(s.system, top, levels, grid_size);
}

}  // namespace tra
