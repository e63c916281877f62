#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tra/classes.hpp"
#include "tra/errors.hpp"
#include "tra/ode.hpp"
#include "tra/series.hpp"

namespace tra {

enum class Spacing { linear, logarithmic };

struct GridSpec {
    double x_min = 0.05;
    double x_max = 20.0;
    int count = 64;
    Spacing spacing = Spacing::logarithmic;
};

inline void validate(const GridSpec& g) {
    if (!(g.x_min > 0.0) || !(g.x_min < g.x_max) || !std::isfinite(g.x_max))
        throw DomainError("grid needs 0 < x_min < x_max");
    if (g.count < 2) throw DomainError("grid needs at least two points");
}

inline std::vector<double> grid_points(const GridSpec& g) {
    validate(g);
    std::vector<double> x(g.count);
    for (int i = 0; i < g.count; ++i) {
        const double t = static_cast<double>(i) / (g.count - 1);
        x[i] = g.spacing == Spacing::linear ? g.x_min + t * (g.x_max - g.x_min)
                                            : g.x_min * std::pow(g.x_max / g.x_min, t);
    }
    x.back() = g.x_max;
    return x;
}

struct DegreeReport {
    int n;
    double max_abs_deviation;
    double max_rel_deviation;
    double argmax;
};

struct CheckReport {
    double max_abs_deviation = 0.0;
    double max_rel_deviation = 0.0;
    double argmax = 0.0;
    double scale = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool degenerate = false;
    std::vector<DegreeReport> per_n;
    std::string note;
};

namespace detail {

inline constexpr double kScaleFloor = 1e-300;

inline void fold(CheckReport& total, const DegreeReport& d) {
    total.per_n.push_back(d);
    if (d.max_rel_deviation >= total.max_rel_deviation) {
        total.max_rel_deviation = d.max_rel_deviation;
        total.argmax = d.argmax;
    }
    total.max_abs_deviation = std::max(total.max_abs_deviation, d.max_abs_deviation);
    total.pass = total.max_rel_deviation <= total.tolerance;
}

}  // namespace detail

/// A function handle: optional analytic jet, otherwise values for the stencil.
struct Function {
    std::function<double(double)> value;
    std::function<Jet<double>(double)> jet;
    bool allow_stencil = true;
};

/// 5-point central differences with step max(1e-5, 1e-5 x) and one Richardson level.
inline Jet<double> stencil_derivatives(const std::function<double(double)>& f, double x) {
    const double h = std::max(1e-5, 1e-5 * x);
    if (!(x - 4.0 * h > 0.0)) throw DomainError("stencil reaches x <= 0");
    const double f0 = f(x);
    auto at = [&](double step) {
        const double fm2 = f(x - 2.0 * step), fm1 = f(x - step), fp1 = f(x + step), fp2 = f(x + 2.0 * step);
        const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * step);
        const double d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * step * step);
        return std::pair{d1, d2};
    };
    const auto [a1, a2] = at(h);
    const auto [b1, b2] = at(2.0 * h);
    return {f0, a1 + (a1 - b1) / 15.0, a2 + (a2 - b2) / 15.0};
}

inline double apply_D(const OdeParams& p, const Jet<double>& f, double x) {
    return x * x * f.d2 + (p.a * x + p.b) * f.d1 + p.potential(x) * f.value;
}

/// x^2 f'' + (a x + b) f' + (A+ x + A-/x + A1/x^2 - A0) f
inline double apply_D(const OdeParams& p, const Function& f, double x) {
    if (!(x > 0.0)) throw DomainError("apply_D needs x > 0");
    if (f.jet) return apply_D(p, f.jet(x), x);
    if (!f.value || !f.allow_stencil)
        throw DerivativeUnavailable("function has no analytic derivatives and stencil evaluation is disabled");
    return apply_D(p, stencil_derivatives(f.value, x), x);
}

using CoeffFn = std::function<RecursionCoeffs(int)>;

/// max over the grid of |D phi_n - omega [u_n phi_n + s_{n-1} phi_{n-1} + t_n phi_{n+1}]| / max |D phi_n|.
inline CheckReport tridiagonality_check(const ClassSolution& sol, int n, const GridSpec& grid = {}, double tol = 1e-8,
                                        const CoeffFn& coeffs = {}) {
    if (n < 0) throw DomainError("tridiagonality_check: n must be nonnegative");
    const CoeffFn cf = coeffs ? coeffs : CoeffFn([&sol](int k) { return recursion_coeffs(sol, k); });
    const RecursionCoeffs rc = cf(n);
    const double s_prev = n > 0 ? cf(n - 1).s : 0.0;
    double max_abs = 0.0, scale = 0.0, where = 0.0;
    for (double x : grid_points(grid)) {
        const auto phi = basis_sequence(sol.basis, n + 1, x);
        const double lhs = apply_D(sol.ode, phi[n], x);
        const double rhs =
            sol.omega(x) * (rc.u * phi[n].value + (n > 0 ? s_prev * phi[n - 1].value : 0.0) + rc.t * phi[n + 1].value);
        const double dev = std::abs(lhs - rhs);
        if (!std::isfinite(dev)) throw Overflow("tridiagonality_check: non-finite deviation at x=" + num(x));
        scale = std::max(scale, std::abs(lhs));
        if (dev >= max_abs) {
            max_abs = dev;
            where = x;
        }
    }
    CheckReport r;
    r.tolerance = tol;
    r.scale = std::max(scale, detail::kScaleFloor);
    detail::fold(r, {n, max_abs, max_abs / r.scale, where});
    return r;
}

/// Tridiagonality for n = 0..n_max.
inline CheckReport tridiagonality_sweep(const ClassSolution& sol, int n_max, const GridSpec& grid = {}, double tol = 1e-8) {
    CheckReport total;
    total.tolerance = tol;
    for (int n = 0; n <= n_max; ++n) {
        const CheckReport r = tridiagonality_check(sol, n, grid, tol);
        total.scale = std::max(total.scale, r.scale);
        detail::fold(total, r.per_n.front());
    }
    return total;
}

struct ReadingAttempt {
    Reading reading;
    bool resolved = false;
    std::string error;
    CheckReport report;
};

struct ReadingOutcome {
    std::vector<ReadingAttempt> attempts;
    std::optional<Reading> adopted;
    bool first_passed = false;
};

/// Readings to try for a class: alternates first, the default last.
inline std::vector<Reading> candidate_readings(ClassId id) {
    std::vector<Reading> out;
    Reading r;
    switch (id) {
        case ClassId::L39A:
        case ClassId::L39B:
        case ClassId::L39C:
            r.laguerre_exponent_shifted = r.g_factorial = true;
            out.push_back(r);
            r.g_factorial = false;
            out.push_back(r);
            r = {};
            r.g_factorial = true;
            out.push_back(r);
            break;
        case ClassId::K1:
        case ClassId::C8B:
            r.k1_constraint_Aplus = true;
            out.push_back(r);
            r = {};
            r.xi_alpha_form = true;
            out.push_back(r);
            break;
        default: break;
    }
    out.push_back(Reading{});
    return out;
}

/// Runs the tridiagonality sweep under each candidate reading and adopts the first that passes.
inline ReadingOutcome verify_readings(const OdeParams& p, ClassId id, const FreeParams& free, int n_max,
                                      const GridSpec& grid = {}, double tol = 1e-8) {
    ReadingOutcome out;
    const auto cands = candidate_readings(id);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        ReadingAttempt a;
        a.reading = cands[i];
        try {
            const ClassSolution sol = resolve_class(p, id, free, cands[i]);
            a.resolved = true;
            a.report = tridiagonality_sweep(sol, n_max, grid, tol);
        } catch (const Error& e) {
            a.error = e.what();
            a.report.pass = false;
        }
        const bool ok = a.resolved && a.report.pass;
        out.attempts.push_back(std::move(a));
        if (ok) {
            out.adopted = cands[i];
            out.first_passed = i == 0;
            break;
        }
    }
    return out;
}

/// max |D y_N| over the grid relative to max |y_N|.
inline CheckReport residual(const SeriesSolution& s, const GridSpec& grid = {}, double tol = 1e-8) {
    CheckReport r;
    r.tolerance = tol;
    r.degenerate = std::all_of(s.coeffs.begin(), s.coeffs.end(), [](double c) { return c == 0.0; });
    if (r.degenerate) {
        r.note = "all coefficients vanish";
        detail::fold(r, {s.N, 0.0, 0.0, grid.x_min});
        return r;
    }
    double max_abs = 0.0, scale = 0.0, where = 0.0;
    for (double x : grid_points(grid)) {
        const Jet<double> y = series_jet(s, x);
        const double d = std::abs(apply_D(s.solution.ode, y, x));
        if (!std::isfinite(d)) throw Overflow("residual: non-finite value at x=" + num(x));
        scale = std::max(scale, std::abs(y.value));
        if (d >= max_abs) {
            max_abs = d;
            where = x;
        }
    }
    r.scale = std::max(scale, detail::kScaleFloor);
    detail::fold(r, {s.N, max_abs, max_abs / r.scale, where});
    return r;
}

/// D y_N reduces to the boundary term omega [t_N f_N phi_{N+1} - s_N f_{N+1} phi_N] (f_{N+1} from the three-term rule).
inline double truncation_residual(const SeriesSolution& s, double x) {
    const auto& sol = s.solution;
    const int N = s.N;
    const RecursionCoeffs rc = recursion_coeffs(sol, N);
    const double tp = N > 0 ? recursion_coeffs(sol, N - 1).t : 0.0;
    const double f_next = -(rc.u * s.coeffs[N] + (N > 0 ? tp * s.coeffs[N - 1] : 0.0)) / rc.s;
    const auto phi = basis_sequence(sol.basis, N + 1, x);
    return sol.omega(x) * (rc.t * s.coeffs[N] * phi[N + 1].value - rc.s * f_next * phi[N].value);
}

struct DecayReport {
    CheckReport full;
    CheckReport half;
    bool decays;
};

/// residual(N) against residual(N/2).
inline DecayReport residual_decay(const ClassSolution& sol, int N, const GridSpec& grid = {}) {
    if (N < 2) throw DomainError("residual_decay needs N >= 2");
    DecayReport d{residual(make_series(sol, N), grid), residual(make_series(sol, N / 2), grid), false};
    d.decays = d.full.max_rel_deviation < d.half.max_rel_deviation;
    return d;
}

}  // namespace tra
