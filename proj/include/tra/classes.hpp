#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tra/errors.hpp"
#include "tra/ode.hpp"
#include "tra/polynomials.hpp"
#include "tra/special.hpp"
#include "tra/tridiagonal.hpp"

namespace tra {

enum class ClassId { K0, K1, C8B, L39A, L39B, L39C, K2_REDIRECT, K3_REDIRECT, C8C_REDIRECT };

inline constexpr ClassId kAllClasses[] = {ClassId::K0,   ClassId::K1,          ClassId::C8B,
                                          ClassId::L39A, ClassId::L39B,        ClassId::L39C,
                                          ClassId::K2_REDIRECT, ClassId::K3_REDIRECT, ClassId::C8C_REDIRECT};

inline const char* class_name(ClassId id) {
    switch (id) {
        case ClassId::K0: return "K0";
        case ClassId::K1: return "K1";
        case ClassId::C8B: return "C8B";
        case ClassId::L39A: return "L39A";
        case ClassId::L39B: return "L39B";
        case ClassId::L39C: return "L39C";
        case ClassId::K2_REDIRECT: return "K2_REDIRECT";
        case ClassId::K3_REDIRECT: return "K3_REDIRECT";
        case ClassId::C8C_REDIRECT: return "C8C_REDIRECT";
    }
    return "?";
}

inline std::optional<ClassId> parse_class(const std::string& s) {
    for (ClassId id : kAllClasses)
        if (s == class_name(id)) return id;
    return std::nullopt;
}

inline bool is_redirect(ClassId id) {
    return id == ClassId::K2_REDIRECT || id == ClassId::K3_REDIRECT || id == ClassId::C8C_REDIRECT;
}

inline bool is_bessel_basis(ClassId id) { return id == ClassId::K0 || id == ClassId::K1 || id == ClassId::C8B; }

// ---- classification ------------------------------------------------------------------------

struct RelationCheck {
    std::string relation;
    double residual;
    bool holds;
};

struct ClassReport {
    ClassId id;
    bool redirect = false;
    std::string reason;
    std::vector<RelationCheck> relations;
};

namespace detail {

inline RelationCheck equals_zero(std::string rel, double v, double tol) { return {std::move(rel), std::abs(v), std::abs(v) <= tol}; }
// inequalities report how far they are from holding, so a satisfied one has residual 0
inline RelationCheck nonzero(std::string rel, double v, double tol) {
    return {std::move(rel), std::max(0.0, tol - std::abs(v)), std::abs(v) > tol};
}
inline RelationCheck positive(std::string rel, double v, double tol) { return {std::move(rel), std::max(0.0, tol - v), v > tol}; }

}  // namespace detail

/// Every class whose hard constraints hold within tol, each with the residual of every checked relation.
inline std::vector<ClassReport> classify(const OdeParams& p, double tol = 1e-12) {
    if (!(tol > 0.0)) throw DomainError("classify: tol must be positive");
    validate(p);
    using namespace detail;
    const double bessel_rel = p.b * p.b - 1.0 - 4.0 * p.A_one;
    const double disc = 4.0 * p.A_one - p.b * p.b;
    const auto ap0 = equals_zero("A+ = 0", p.A_plus, tol);
    const auto b_rel = equals_zero("b^2 = 1 + 4 A1", bessel_rel, tol);

    std::vector<ClassReport> candidates = {
        {ClassId::K0, false, "", {b_rel, nonzero("A+ != 0", p.A_plus, tol)}},
        {ClassId::K1, false, "", {ap0, b_rel}},
        {ClassId::C8B, false, "", {ap0, b_rel}},
        {ClassId::L39A, false, "", {ap0, positive("4 A1 - b^2 > 0", disc, tol)}},
        {ClassId::L39B, false, "", {ap0, b_rel}},
        // tau is free, so 4 A1 - b^2 + tau^2 > 0 is always attainable
        {ClassId::L39C, false, "", {ap0, {"4 A1 - b^2 + tau^2 > 0 for some tau != 0", 0.0, true}}},
        {ClassId::K2_REDIRECT, true, "treated in the singular Laguerre basis", {ap0}},
        {ClassId::K3_REDIRECT, true, "reverts to Bessel-polynomial equation", {ap0}},
        {ClassId::C8C_REDIRECT, true, "treated in the singular Laguerre basis", {ap0}},
    };
    std::vector<ClassReport> out;
    for (auto& c : candidates) {
        bool ok = true;
        for (const auto& r : c.relations) ok = ok && r.holds;
        if (ok) out.push_back(std::move(c));
    }
    return out;
}

// ---- resolved classes ----------------------------------------------------------------------

/// Alternate formula readings that the verification harness can switch on.
struct Reading {
    bool laguerre_exponent_shifted = false;  // x^{-nu-(a+1)/2} instead of x^{-nu+(1-a)/2}
    bool g_factorial = false;                // g_n = (-1)^n n! instead of 1
    bool k1_constraint_Aplus = false;      // b^2 = 1 + 4 A+ instead of b^2 = 1 + 4 A1 with A+ = 0
    bool xi_alpha_form = false;              // xi = A- + b(1 - alpha/2)

    bool is_default() const noexcept {
        return !laguerre_exponent_shifted && !g_factorial && !k1_constraint_Aplus && !xi_alpha_form;
    }
    std::string describe() const {
        if (is_default()) return "default";
        std::string s;
        auto add = [&](const char* t) { s += s.empty() ? t : std::string("+") + t; };
        if (laguerre_exponent_shifted) add("laguerre_exponent_shifted");
        if (g_factorial) add("g_factorial");
        if (k1_constraint_Aplus) add("k1_constraint_Aplus");
        if (xi_alpha_form) add("xi_alpha_form");
        return s;
    }
};

struct FreeParams {
    std::optional<double> mu;
    std::optional<double> alpha;
    std::optional<double> tau;
    int branch = +1;  // sign choice of the C8B Hahn binding
};

enum class BasisKind { bessel, laguerre };

/// phi_n = x^{exponent} e^{-beta/x} J_n^{mu}(x)            (bessel)
/// phi_n = g_n x^{exponent} e^{-beta/x} L_n^{2 nu}(1/x)    (laguerre)
/// alpha(n) = alpha0 + alpha_slope n and mu(n) = mu0 + mu_slope n record the Bessel-form parameters.
struct BasisSpec {
    BasisKind kind = BasisKind::bessel;
    double alpha0 = 0.0;
    double alpha_slope = 0.0;
    double beta = 0.0;
    double mu0 = 0.0;
    double mu_slope = 0.0;
    double exponent = 0.0;
    double laguerre_order = 0.0;
    bool g_factorial = false;
    int n_max = -1;  // largest admissible degree; -1 for unbounded

    double mu() const noexcept { return mu0; }
};

struct Binding {
    std::string label;
    FamilySpec family;
    double arg;
};

/// omega(x) = coeff * x^power
struct Omega {
    double coeff = 1.0;
    int power = 0;

    double operator()(double x) const { return coeff * std::pow(x, power); }
    std::string describe() const {
        std::string s = num(coeff);
        if (power != 0) s += " * x^" + std::to_string(power);
        return s;
    }
};

/// u_n = a_n - z c with c independent of n; z is the bound polynomial variable.
struct JacobiSplit {
    double z;
    double c;
};

struct RecursionCoeffs {
    double u, s, t;
};

struct ClassSolution {
    ClassId id;
    OdeParams ode;
    BasisSpec basis;
    DerivedSymbols symbols;
    Reading reading;
    FreeParams free;
    Binding binding;
    std::vector<Binding> alternatives;
    Omega omega;
    JacobiSplit split{0.0, 1.0};
    std::string prefactor_rule;
    double disc = 0.0;        // 4 A1 - b^2
    double eta = 0.0;         // L39C deformation
    bool discrete_regime = false;  // L39C with |eta| > 1
};

namespace detail {

inline void require_relation(const std::string& rel, double residual, double tol) {
    if (!(std::abs(residual) <= tol)) throw ConstraintViolation(rel, residual);
}

inline int bessel_n_max(double mu) {
    const double v = std::floor(-mu - 0.5 - 1e-9);
    return v < 0 ? -1 : static_cast<int>(std::min(v, 1e6));
}

inline void require_real_nu(const DerivedSymbols& s, const char* who) {
    if (s.nu_imaginary)
        throw RealityViolation(std::string(who) + ": nu^2 = " + num(s.nu_sq) + " < 0 needs 4 A0 >= -(a-1)^2");
}

}  // namespace detail

/// Resolves basis, symbols, coefficient generator and polynomial binding of an admissible class.
inline ClassSolution resolve_class(const OdeParams& p, ClassId id, const FreeParams& free = {}, const Reading& reading = {},
                                   double tol = 1e-12) {
    using detail::require_relation;
    validate(p);
    if (is_redirect(id))
        throw ConstraintViolation(std::string(class_name(id)) + " is a documented non-case and has no solution class");
    ClassSolution sol;
    sol.id = id;
    sol.ode = p;
    sol.free = free;
    sol.reading = reading;
    sol.disc = 4.0 * p.A_one - p.b * p.b;
    const double nu_sq = p.A_zero + 0.25 * (p.a - 1.0) * (p.a - 1.0);

    auto need = [&](const std::optional<double>& v, const char* name) {
        if (!v) throw ConstraintViolation(std::string(class_name(id)) + " requires the free parameter " + name);
        return *v;
    };
    auto bessel_k1_constraints = [&] {
        if (reading.k1_constraint_Aplus) {
            require_relation("b^2 = 1 + 4 A+", p.b * p.b - 1.0 - 4.0 * p.A_plus, tol);
        } else {
            require_relation("A+ = 0", p.A_plus, tol);
            require_relation("b^2 = 1 + 4 A1", p.b * p.b - 1.0 - 4.0 * p.A_one, tol);
        }
    };
    auto set_xi = [&](double alpha) {
        if (reading.xi_alpha_form) sol.symbols.xi = p.A_minus + p.b * (1.0 - 0.5 * alpha);
    };

    switch (id) {
        case ClassId::K0: {
            require_relation("b^2 = 1 + 4 A1", p.b * p.b - 1.0 - 4.0 * p.A_one, tol);
            if (!(std::abs(p.A_plus) > tol)) throw ConstraintViolation("A+ != 0", p.A_plus);
            if (p.A_one < -0.25) throw RealityViolation("K0: A1 >= -1/4 required");
            const double mu = p.b * (0.5 * p.a - 1.0) - p.A_minus;
            const double alpha = (p.b - 1.0) * (0.5 * p.a - 1.0) - p.A_minus;
            const double beta = 0.5 * (1.0 - p.b);
            sol.basis = {BasisKind::bessel, alpha, 0.0, beta, mu, 0.0, alpha, 0.0, false, detail::bessel_n_max(mu)};
            if (sol.basis.n_max < 0) throw ConstraintViolation("mu < -1/2", mu + 0.5);
            sol.symbols = derive_symbols(p, alpha, mu, beta);
            const double gamma = 4.0 / p.A_plus;
            const double z = 4.0 * nu_sq / p.A_plus;
            sol.binding = {"DeformedB", DeformedB{mu, gamma, sol.basis.n_max}, z};
            sol.omega = {0.25 * p.A_plus, 0};
            sol.split = {z, 1.0};
            sol.prefactor_rule = "C_n = [(n+mu+1/2)/(mu+1/2)] (-n-2mu)_n / n!";
            break;
        }
        case ClassId::K1:
        case ClassId::C8B: {
            bessel_k1_constraints();
            if (p.A_one < -0.25) throw RealityViolation(std::string(class_name(id)) + ": A1 >= -1/4 required");
            const double mu = need(free.mu, "mu");
            const double beta = 0.5 * (1.0 - p.b);
            const double k1_alpha = mu + 1.0 - 0.5 * p.a;
            const double alpha = id == ClassId::K1 ? k1_alpha : need(free.alpha, "alpha");
            if (id == ClassId::C8B && std::abs(alpha - k1_alpha) <= tol)
                throw ConstraintViolation("alpha != mu + 1 - a/2", alpha - k1_alpha);
            sol.basis = {BasisKind::bessel, alpha, 0.0, beta, mu, 0.0, alpha, 0.0, false, detail::bessel_n_max(mu)};
            if (sol.basis.n_max < 0) throw ConstraintViolation("mu < -1/2", mu + 0.5);
            sol.symbols = derive_symbols(p, alpha, mu, beta);
            set_xi(alpha);
            sol.symbols.kappa = sol.symbols.xi + 0.5 * p.a + alpha - 1.0;
            detail::require_real_nu(sol.symbols, class_name(id));
            const double nu = sol.symbols.nu;
            const double xi = sol.symbols.xi;
            sol.omega = {0.25, -1};
            if (id == ClassId::K1) {
                const double q = mu + nu + 0.5;
                const double k = -(mu + xi);
                sol.binding = {"HahnQ", HahnQ{mu - nu - 0.5, q, -q}, k};
                sol.alternatives.push_back(
                    {"ContHahnH", ContHahnH{cplx(mu + xi), cplx(1.0 + mu + xi), cplx(0.5 - xi - nu), cplx(0.5 - xi + nu)}, 0.0});
                sol.split = {k, 4.0};
                sol.prefactor_rule =
                    "C_n = [((mu+1/2)^2 - nu^2)/(mu+1/2)] [(n+mu+1/2)/((n+mu+1/2)^2 - nu^2)] (-n-2mu)_n / n!";
            } else {
                const double A = alpha + 0.5 * (p.a - 1.0);
                const double kap = sol.symbols.kappa;
                const int sg = free.branch >= 0 ? 1 : -1;
                auto hahn = [&](int s) { return HahnQ{A - 1.0 + s * nu, 2.0 * mu + 1.0 - A - s * nu, -A + s * nu}; };
                sol.binding = {sg > 0 ? "HahnQ(+)" : "HahnQ(-)", hahn(sg), -kap};
                sol.alternatives.push_back({sg > 0 ? "HahnQ(-)" : "HahnQ(+)", hahn(-sg), -kap});
                sol.alternatives.push_back({"ContHahnH",
                                            ContHahnH{cplx(kap), cplx(kap + 2.0 * mu + 2.0 - 2.0 * A), cplx(-kap + A + nu),
                                                      cplx(-kap + A - nu)},
                                            0.0});
                sol.split = {-kap, 4.0};
                sol.prefactor_rule =
                    "C_n = [(n+mu+1/2)/(mu+1/2)] (-n-2mu)_n / n! prod_m [(m+mu+1/2)^2 - chi^2 + 2 sigma+ m] / "
                    "[(m+mu+3/2)^2 - chi^2 - 2 sigma+ (m+2mu+2)]";
            }
            break;
        }
        case ClassId::L39A:
        case ClassId::L39B:
        case ClassId::L39C: {
            require_relation("A+ = 0", p.A_plus, tol);
            double tau = 0.0;
            if (id == ClassId::L39A && !(sol.disc > tol)) throw ConstraintViolation("4 A1 - b^2 > 0", sol.disc);
            if (id == ClassId::L39B) require_relation("b^2 = 1 + 4 A1", p.b * p.b - 1.0 - 4.0 * p.A_one, tol);
            if (id == ClassId::L39C) {
                tau = need(free.tau, "tau");
                if (!(sol.disc + tau * tau > 0.0))
                    throw ConstraintViolation("4 A1 - b^2 + tau^2 > 0", sol.disc + tau * tau);
            }
            const double beta = 0.5 * (tau + 1.0 - p.b);
            sol.symbols = derive_symbols(p, kNaN, kNaN, beta);
            sol.symbols.kappa = sol.symbols.chi_sq = sol.symbols.sigma_plus = sol.symbols.sigma_minus = kNaN;
            detail::require_real_nu(sol.symbols, class_name(id));
            const double nu = sol.symbols.nu;
            const double alpha0 = -nu + 0.5 * (1.0 - p.a);
            const double exponent = reading.laguerre_exponent_shifted ? -nu - 0.5 * (p.a + 1.0) : alpha0;
            sol.basis = {BasisKind::laguerre, alpha0, -1.0, beta, -nu - 0.5, -1.0, exponent, 2.0 * nu, reading.g_factorial, -1};
            const double lam = nu + 0.5;
            const double w = 2.0 * p.A_minus + p.b * (2.0 - p.a);
            if (id == ClassId::L39A) {
                const double D = sol.disc;
                const double theta = std::acos((D - 1.0) / (D + 1.0));
                const double z = w / (2.0 * std::sqrt(D));
                sol.binding = {"MeixnerPollaczekP", MeixnerPollaczekP{lam, theta}, z};
                sol.omega = {-0.25 * (D + 1.0), -1};
                sol.split = {z, 4.0 * std::sqrt(D) / (D + 1.0)};
                sol.prefactor_rule = "C_n = n! / (2nu+1)_n";
            } else if (id == ClassId::L39B) {
                const double zeta = sol.symbols.zeta;
                sol.binding = {"ContDualHahnS", ContDualHahnS{nu + 1.0, nu, zeta - nu + 0.5}, -nu * nu};
                sol.omega = {1.0, 0};
                sol.split = {-nu * nu, -1.0};
                sol.prefactor_rule = "f_n = S_n directly (no C_n product)";
            } else {
                const double W = sol.disc + tau * tau;
                const double theta = std::acos((W - 1.0) / (W + 1.0));
                sol.eta = tau / std::sqrt(W);
                sol.discrete_regime = std::abs(sol.eta) > 1.0;
                const double z = w / (2.0 * std::sqrt(W));
                sol.binding = {"DeformedY", DeformedY{lam, theta, sol.eta}, z};
                sol.omega = {-0.25, -1};
                sol.split = {z, 4.0 * std::sqrt(W)};
                sol.prefactor_rule = "C_n = n! / (2nu+1)_n [(D + (tau+1)^2)/(D + (tau-1)^2)]^n";
            }
            break;
        }
        default:
            throw ConstraintViolation("unknown class");
    }
    return sol;
}

namespace detail {

// Coefficients with NaN in any slot whose denominator vanishes.
inline RecursionCoeffs raw_coeffs(const ClassSolution& sol, int n) {
    const auto& p = sol.ode;
    const auto& s = sol.symbols;
    const double dn = n;
    auto div = [](double num_, double den) { return den == 0.0 ? kNaN : num_ / den; };
    switch (sol.id) {
        case ClassId::K0: {
            const double mu = sol.basis.mu0;
            const double m = dn + mu;
            const double u = div(-2.0 * mu, m * (m + 1.0)) + 4.0 / p.A_plus * ((m + 0.5) * (m + 0.5) - s.nu_sq);
            return {u, div(-(dn + 1.0), (m + 1.0) * (m + 1.5)), div(dn + 2.0 * mu + 1.0, (m + 1.0) * (m + 0.5))};
        }
        case ClassId::K1: {
            const double mu = sol.basis.mu0;
            const double m = dn + mu;
            const double lo = (m + 0.5) * (m + 0.5) - s.nu_sq;
            const double hi = (m + 1.5) * (m + 1.5) - s.nu_sq;
            const double u = 4.0 * (s.xi + mu) - div(2.0 * mu * lo, m * (m + 1.0));
            return {u, div(-(dn + 1.0) * hi, (m + 1.0) * (m + 1.5)), div((dn + 2.0 * mu + 1.0) * lo, (m + 1.0) * (m + 0.5))};
        }
        case ClassId::C8B: {
            const double mu = sol.basis.mu0;
            const double m = dn + mu;
            const double sp = s.sigma_plus, chi2 = s.chi_sq;
            const double u = 4.0 * s.kappa +
                             div(2.0 * (mu * chi2 + 2.0 * sp * (mu + 0.5) * (mu + 0.5) - (mu + 2.0 * sp) * (m + 0.5) * (m + 0.5)),
                                 m * (m + 1.0));
            const double sn = div(-(dn + 1.0) * ((m + 1.5) * (m + 1.5) - chi2 - 2.0 * sp * (dn + 2.0 * mu + 2.0)),
                                  (m + 1.0) * (m + 1.5));
            const double tn = div((dn + 2.0 * mu + 1.0) * ((m + 0.5) * (m + 0.5) - chi2 + 2.0 * sp * dn), (m + 1.0) * (m + 0.5));
            return {u, sn, tn};
        }
        case ClassId::L39A: {
            const double D = sol.disc;
            const double w = -2.0 * p.A_minus + p.b * (p.a - 2.0);
            const double u = div(2.0 * w, D + 1.0) - div(D - 1.0, D + 1.0) * (2.0 * dn + 2.0 * s.nu + 1.0);
            return {u, dn + 2.0 * s.nu + 1.0, dn + 1.0};
        }
        case ClassId::L39B: {
            const double z = s.zeta;
            return {-(dn + z + 0.5) * (2.0 * dn + 2.0 * s.nu + 1.0), (dn + 2.0 * s.nu + 1.0) * (dn + z + 1.5),
                    (dn + 1.0) * (dn + z + 0.5)};
        }
        case ClassId::L39C: {
            const double D = sol.disc, tau = s.tau;
            const double w = -2.0 * p.A_minus + p.b * (p.a - 2.0);
            const double u = 2.0 * w - (D + tau * tau - 1.0) * (2.0 * dn + 2.0 * s.nu + 1.0);
            return {u, (D + (tau - 1.0) * (tau - 1.0)) * (dn + 2.0 * s.nu + 1.0), (D + (tau + 1.0) * (tau + 1.0)) * (dn + 1.0)};
        }
        default:
            throw DomainError("recursion_coeffs: redirect classes carry no recursion");
    }
}

inline void require_finite(const ClassSolution& sol, int n, double v) {
    if (std::isnan(v))
        throw DomainError(std::string(class_name(sol.id)) + ": vanishing denominator at n=" + std::to_string(n));
}

}  // namespace detail

/// (u_n, s_n, t_n) of  D phi_n = omega [u_n phi_n + s_{n-1} phi_{n-1} + t_n phi_{n+1}].
inline RecursionCoeffs recursion_coeffs(const ClassSolution& sol, int n) {
    if (n < -1) throw DomainError("recursion_coeffs: n must be >= -1");
    const RecursionCoeffs rc = detail::raw_coeffs(sol, n);
    for (double v : {rc.u, rc.s, rc.t}) detail::require_finite(sol, n, v);
    return rc;
}

/// Closed form of C_n where one exists (L39B has none).
inline std::optional<double> closed_form_prefactor(const ClassSolution& sol, int n) {
    const auto& s = sol.symbols;
    const double dn = n;
    switch (sol.id) {
        case ClassId::K0: {
            const double mu = sol.basis.mu0;
            return (dn + mu + 0.5) / (mu + 0.5) * pochhammer(-dn - 2.0 * mu, n) / factorial(n);
        }
        case ClassId::K1: {
            const double mu = sol.basis.mu0;
            const double m = dn + mu + 0.5;
            return ((mu + 0.5) * (mu + 0.5) - s.nu_sq) / (mu + 0.5) * (m / (m * m - s.nu_sq)) * pochhammer(-dn - 2.0 * mu, n) /
                   factorial(n);
        }
        case ClassId::C8B: {
            const double mu = sol.basis.mu0;
            double prod = 1.0;
            for (int k = 0; k < n; ++k) {
                const double num_ = (k + mu + 0.5) * (k + mu + 0.5) - s.chi_sq + 2.0 * s.sigma_plus * k;
                const double den = (k + mu + 1.5) * (k + mu + 1.5) - s.chi_sq - 2.0 * s.sigma_plus * (k + 2.0 * mu + 2.0);
                prod *= num_ / den;
            }
            return (dn + mu + 0.5) / (mu + 0.5) * pochhammer(-dn - 2.0 * mu, n) / factorial(n) * prod;
        }
        case ClassId::L39A: return factorial(n) / pochhammer(2.0 * s.nu + 1.0, n);
        case ClassId::L39C: {
            const double D = sol.disc, tau = s.tau;
            return factorial(n) / pochhammer(2.0 * s.nu + 1.0, n) *
                   std::pow((D + (tau + 1.0) * (tau + 1.0)) / (D + (tau - 1.0) * (tau - 1.0)), n);
        }
        default: return std::nullopt;
    }
}

namespace detail {

inline void require_degree(const ClassSolution& sol, int N) {
    if (N < 0) throw DomainError("truncation order must be nonnegative");
    if (sol.basis.kind == BasisKind::bessel && N > sol.basis.n_max)
        throw ConstraintViolation("mu < -N - 1/2 (N=" + std::to_string(N) + ", mu=" + num(sol.basis.mu0) + ")",
                                  sol.basis.mu0 + N + 0.5);
}

// Bound polynomial values 0..N without family invariant checks: bindings are formal (e.g. non-integer N).
inline std::vector<double> bound_values(const Binding& b, int N) {
    return std::visit(
        [&](const auto& f) {
            const auto seq = family_sequence(f, N, b.arg, false);
            std::vector<double> out;
            out.reserve(seq.size());
            for (const auto& j : seq) out.push_back(std::real(j.value));
            return out;
        },
        b.family);
}

}  // namespace detail

/// Default truncation: 50 for unbounded classes, the largest admissible degree otherwise.
inline int default_truncation(const ClassSolution& sol) {
    return sol.basis.kind == BasisKind::bessel ? sol.basis.n_max : 50;
}

/// Expansion coefficients f_0..f_N (f_0 = 1) through C_n times the bound polynomial.
inline std::vector<double> expansion_coefficients(const ClassSolution& sol, int N) {
    detail::require_degree(sol, N);
    const std::vector<double> P = detail::bound_values(sol.binding, N);
    if (sol.id == ClassId::L39B) return P;
    std::vector<double> f(N + 1);
    double C = 1.0;
    for (int n = 0; n <= N; ++n) {
        f[n] = C * P[n];
        if (n < N) {
            const RecursionCoeffs rc = recursion_coeffs(sol, n);
            if (rc.s == 0.0) throw ZeroDivision("expansion_coefficients: s_" + std::to_string(n) + " = 0");
            C *= rc.t / rc.s;
        }
    }
    return f;
}

/// Same coefficients straight from  u_n f_n + t_{n-1} f_{n-1} + s_n f_{n+1} = 0.
inline std::vector<double> expansion_coefficients_direct(const ClassSolution& sol, int N) {
    detail::require_degree(sol, N);
    std::vector<double> f(N + 1, 0.0);
    f[0] = 1.0;
    double t_prev = 0.0;
    for (int n = 0; n < N; ++n) {
        const RecursionCoeffs rc = recursion_coeffs(sol, n);
        if (rc.s == 0.0) throw ZeroDivision("expansion_coefficients_direct: s_" + std::to_string(n) + " = 0");
        f[n + 1] = -(rc.u * f[n] + (n > 0 ? t_prev * f[n - 1] : 0.0)) / rc.s;
        t_prev = rc.t;
    }
    return f;
}

struct FavardReport {
    std::vector<double> products;  // s_n t_n, n = 0..N-1
    bool definite = true;
    int first_failure = -1;
};

/// Signs of the couplings s_n t_n entering an (N+1)x(N+1) Jacobi matrix.
inline FavardReport favard_report(const ClassSolution& sol, int N) {
    detail::require_degree(sol, N);
    FavardReport r;
    for (int n = 0; n < N; ++n) {
        const RecursionCoeffs rc = recursion_coeffs(sol, n);
        r.products.push_back(rc.s * rc.t);
        if (!(rc.s * rc.t > 0.0) && r.definite) {
            r.definite = false;
            r.first_failure = n;
        }
    }
    return r;
}

/// Symmetric Jacobi matrix whose eigenvalues approximate the support points of the bound variable.
inline SymTridiag jacobi_matrix(const ClassSolution& sol, int N) {
    detail::require_degree(sol, N);
    const double c = sol.split.c;
    SymTridiag m;
    m.diag.reserve(N + 1);
    for (int n = 0; n <= N; ++n) {
        // the last row needs u_N only; s_N and t_N may be singular there
        const RecursionCoeffs rc = n < N ? recursion_coeffs(sol, n) : detail::raw_coeffs(sol, n);
        detail::require_finite(sol, n, rc.u);
        m.diag.push_back((rc.u + sol.split.z * c) / c);
        if (n < N) {
            const double prod = rc.s * rc.t;
            if (!(prod > 0.0))
                throw DefinitenessError("jacobi_matrix: s_n t_n = " + num(prod) + " <= 0 at n=" + std::to_string(n));
            m.offdiag.push_back(std::sqrt(prod) / std::abs(c));
        }
    }
    return m;
}

struct DualHahnDiagnostic {
    double p, q, N;
    bool contradiction;
    std::string reason;
};

/// The dual Hahn reading of the L39B coefficients: it forces N = -(2 nu + 1) < 0.
inline DualHahnDiagnostic dual_hahn_diagnostic(const ClassSolution& sol) {
    if (sol.id != ClassId::L39B) throw DomainError("dual_hahn_diagnostic applies to L39B only");
    const double nu = sol.symbols.nu, zeta = sol.symbols.zeta;
    DualHahnDiagnostic d{zeta + 0.5, 2.0 * nu - zeta + 0.5, -(2.0 * nu + 1.0), false, ""};
    int Ni = 0;
    if (!(d.N >= 0.0) || !detail::is_nonneg_integer(d.N, Ni)) {
        d.contradiction = true;
        d.reason = "dual Hahn binding needs a nonnegative integer N but nu >= 0 forces N = -(2nu+1) = " + num(d.N) +
                   "; rejected in favour of the continuous dual Hahn solution";
    }
    return d;
}

}  // namespace tra
