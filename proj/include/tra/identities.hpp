#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <limits>
#include <variant>

#include "tra/errors.hpp"
#include "tra/polynomials.hpp"
#include "tra/quadrature.hpp"
#include "tra/special.hpp"

namespace tra {

enum class Identity { B_to_J, Y_to_P, Z_to_M, Jbar_to_Laguerre, J_to_Laguerre };

inline const char* identity_name(Identity id) {
    switch (id) {
        case Identity::B_to_J: return "B_to_J";
        case Identity::Y_to_P: return "Y_to_P";
        case Identity::Z_to_M: return "Z_to_M";
        case Identity::Jbar_to_Laguerre: return "Jbar_to_Laguerre";
        case Identity::J_to_Laguerre: return "J_to_Laguerre";
    }
    return "?";
}

/// Parameters consumed by the identities; each identity reads only the ones it needs.
/// B_to_J, J_to_Laguerre: mu.  Jbar_to_Laguerre: nu.  Y_to_P, Z_to_M: lambda, theta, eta.
struct IdentityParams {
    double mu = 0.0;
    double nu = 0.0;
    double lambda = 0.0;
    double theta = 0.0;
    double eta = 0.0;
};

struct IdentitySides {
    double lhs;
    double rhs;
};

/// Parameters of the undeformed Meixner-Pollaczek family equivalent to DeformedY at |eta| < 1.
struct YToPMap {
    double ratio;  // (1 - eta sin theta)/(1 + eta sin theta)
    double scale;  // x -> x / sqrt(1 - eta^2)
    double phi;
};

inline YToPMap y_to_p_map(double theta, double eta) {
    if (!(std::abs(eta) < 1.0)) throw DomainError("Y_to_P requires |eta| < 1");
    const double s = std::sin(theta);
    return {(1.0 - eta * s) / (1.0 + eta * s), 1.0 / std::sqrt(1.0 - eta * eta),
            std::acos(std::cos(theta) / std::sqrt(1.0 - eta * eta * s * s))};
}

struct ZToMMap {
    double ratio;  // (1 - eta sinh theta)/(1 + eta sinh theta)
    double phi;
    double m_scale;  // m~ = (m + lambda) * m_scale - lambda
};

inline ZToMMap z_to_m_map(double theta, double eta) {
    const double sh = std::sinh(theta);
    if (!(eta * eta * sh * sh < 1.0)) throw DomainError("Z_to_M requires eta^2 sinh^2 theta < 1");
    return {(1.0 - eta * sh) / (1.0 + eta * sh), std::acosh(std::cosh(theta) / std::sqrt(1.0 - eta * eta * sh * sh)),
            1.0 / std::sqrt(1.0 + eta * eta)};
}

/// Both sides of a reduction identity at degree n and point.
inline IdentitySides reduce_identity(Identity id, int n, double point, const IdentityParams& p) {
    if (n < 0) throw DomainError("reduce_identity: negative degree");
    switch (id) {
        case Identity::B_to_J: {
            const double lhs = eval_poly(DeformedB{p.mu, 0.0, n}, n, 4.0 * point).real();
            const double rhs = eval_poly(BesselJ{p.mu, n}, n, point).real();
            return {lhs, rhs};
        }
        case Identity::Y_to_P: {
            const YToPMap m = y_to_p_map(p.theta, p.eta);
            const double lhs = eval_poly(DeformedY{p.lambda, p.theta, p.eta}, n, point).real();
            const double rhs = std::pow(m.ratio, 0.5 * n) *
                               eval_poly(MeixnerPollaczekP{p.lambda, m.phi}, n, point * m.scale).real();
            return {lhs, rhs};
        }
        case Identity::Z_to_M: {
            const ZToMMap m = z_to_m_map(p.theta, p.eta);
            const double lhs = eval_poly(DeformedZ{p.lambda, p.theta, p.eta}, n, point).real();
            const double mt = (point + p.lambda) * m.m_scale - p.lambda;
            const double rhs = std::pow(m.ratio, 0.5 * n) * eval_poly(MeixnerM{p.lambda, m.phi}, n, mt).real();
            return {lhs, rhs};
        }
        case Identity::Jbar_to_Laguerre: {
            if (point == 0.0) throw DomainError("Jbar_to_Laguerre requires a nonzero point");
            const double lhs = eval_poly(BesselJbar{p.nu}, n, point).real();
            const double rhs =
                factorial(n) * std::pow(-point, n) * eval_poly(LaguerreL{2.0 * p.nu}, n, 1.0 / point).real();
            return {lhs, rhs};
        }
        case Identity::J_to_Laguerre: {
            if (point == 0.0) throw DomainError("J_to_Laguerre requires a nonzero point");
            const double lhs = eval_poly(BesselJ{p.mu, n}, n, point).real();
            const double rhs = factorial(n) * std::pow(-point, n) *
                               eval_poly(LaguerreL{-(2.0 * n + 2.0 * p.mu + 1.0)}, n, 1.0 / point).real();
            return {lhs, rhs};
        }
    }
    throw DomainError("reduce_identity: unknown identity");
}

// ---- generating functions ------------------------------------------------------------------

inline constexpr double kGeneratingTMax = 0.05;

struct GeneratingSides {
    double partial_sum;
    double closed_form;
};

/// Truncated generating series (terms n = 0..n_terms) against its closed form.
/// BesselJ uses the exponential series sum J_n t^n / n!; the Meixner-type families the ordinary one.
inline GeneratingSides generating_check(const FamilySpec& fam, double x, double t, int n_terms = 30) {
    if (std::abs(t) > kGeneratingTMax)
        throw DomainError("generating_check: |t| must not exceed " + num(kGeneratingTMax));
    if (n_terms < 0) throw DomainError("generating_check: negative term count");
    using namespace std::complex_literals;

    auto ordinary = [&](const FamilySpec& f, double arg) {
        check_family(f, 0, arg);
        const auto seq = eval_poly_sequence(f, n_terms, arg);
        double sum = 0.0, tn = 1.0;
        for (const auto& v : seq) {
            sum += v.real() * tn;
            tn *= t;
        }
        return sum;
    };

    if (const auto* f = std::get_if<BesselJ>(&fam)) {
        const double disc = 1.0 - 4.0 * x * t;
        if (disc <= 0.0) throw DomainError("generating_check: branch cut 1 - 4xt <= 0");
        double sum = 0.0, tn = 1.0;
        for (int n = 0; n <= n_terms; ++n) {
            const double dn = n;
            sum += hypergeometric_sum<double>({-dn, dn + 2.0 * f->mu + 1.0}, {}, -x, n) * tn;
            tn *= t / (n + 1.0);
        }
        const double r = std::sqrt(disc);
        const double closed = std::pow(2.0, 2.0 * f->mu) / r * std::pow(1.0 + r, -2.0 * f->mu) * std::exp(2.0 * t / (1.0 + r));
        return {sum, closed};
    }
    if (const auto* f = std::get_if<MeixnerPollaczekP>(&fam)) {
        const cplx closed = std::pow(1.0 - t * std::exp(1i * f->theta), -f->lambda + 1i * x) *
                            std::pow(1.0 - t * std::exp(-1i * f->theta), -f->lambda - 1i * x);
        return {ordinary(fam, x), closed.real()};
    }
    if (const auto* f = std::get_if<MeixnerM>(&fam)) {
        const double closed =
            std::pow(1.0 - t * std::exp(f->theta), x) * std::pow(1.0 - t * std::exp(-f->theta), -x - 2.0 * f->lambda);
        return {ordinary(fam, x), closed};
    }
    if (const auto* f = std::get_if<DeformedY>(&fam)) {
        if (std::abs(f->eta) == 1.0) throw DomainError("generating_check: DeformedY closed form needs |eta| != 1");
        const double s = std::sin(f->theta);
        const cplx root = std::sqrt(cplx(f->eta * f->eta - 1.0));
        const cplx al = (std::cos(f->theta) + root * s) / (1.0 + f->eta * s);
        const cplx be = (std::cos(f->theta) - root * s) / (1.0 + f->eta * s);
        const cplx A = f->lambda + x / root;
        const cplx B = f->lambda - x / root;
        const cplx closed = std::pow(1.0 - al * t, -A) * std::pow(1.0 - be * t, -B);
        return {ordinary(fam, x), closed.real()};
    }
    if (const auto* f = std::get_if<DeformedZ>(&fam)) {
        const ZToMMap m = z_to_m_map(f->theta, f->eta);
        const double mt = (x + f->lambda) * m.m_scale - f->lambda;
        const double ts = std::sqrt(m.ratio) * t;
        const double closed =
            std::pow(1.0 - ts * std::exp(m.phi), mt) * std::pow(1.0 - ts * std::exp(-m.phi), -mt - 2.0 * f->lambda);
        return {ordinary(fam, x), closed};
    }
    throw DomainError(std::string("generating_check: no generating function implemented for ") + family_name(fam));
}

// ---- orthogonality -------------------------------------------------------------------------

struct OrthogonalityResult {
    double numeric_integral;
    double analytic_rhs;
    double estimated_error;
    int nodes;
};

namespace detail {

// u^n J_n(1/u) as a polynomial in u, via the coefficients of J_n.
inline double reversed_bessel(double mu, int n, double u) {
    // J_n = sum_k c_k x^k with c_k = (-n)_k (n+2mu+1)_k (-1)^k / k!; Horner in u from c_0 u^n down.
    double c = 1.0;
    double acc = 1.0;
    for (int k = 1; k <= n; ++k) {
        c *= -(k - 1.0 - n) * (n + 2.0 * mu + k) / k;
        acc = acc * u + c;
    }
    return acc;
}

}  // namespace detail

inline OrthogonalityResult orthogonality_integral(const FamilySpec& fam, int n, int m, double rel_tol = 1e-10) {
    if (const auto* f = std::get_if<BesselJ>(&fam)) {
        check_family(fam, n, 0.0);
        check_family(fam, m, 0.0);
        const double alpha = -2.0 * f->mu - 2.0 - n - m;
        const double mu = f->mu;
        const auto g = [mu, n, m](double u) {
            return detail::reversed_bessel(mu, n, u) * detail::reversed_bessel(mu, m, u);
        };
        const AdaptiveResult r = adaptive_gauss_laguerre(g, alpha, rel_tol);
        const double rhs = n == m ? -factorial(n) * std::tgamma(-n - 2.0 * mu) / (2.0 * n + 2.0 * mu + 1.0) : 0.0;
        return {r.value, rhs, r.estimated_error, r.nodes};
    }
    if (const auto* f = std::get_if<DeformedY>(&fam)) {
        check_family(fam, n, 0.0);
        const YToPMap map = y_to_p_map(f->theta, f->eta);
        const double lam = f->lambda;
        const double sq = std::sqrt(1.0 - f->eta * f->eta);
        const double pref = std::pow(2.0 * std::sin(map.phi), 2.0 * lam) / (2.0 * std::numbers::pi * sq);
        const double slope = 2.0 * map.phi - std::numbers::pi;
        const auto log_env = [&](double y) { return slope * y + 2.0 * lgamma_complex({lam, y}).real(); };
        // peak and truncation in y by outward scanning
        double peak = -std::numeric_limits<double>::infinity();
        for (double y = -50.0; y <= 50.0; y += 0.25) peak = std::max(peak, log_env(y));
        const double cut = peak + std::log(1e-16);
        double y_hi = 0.0, y_lo = 0.0;
        while (log_env(y_hi) > cut || y_hi < 1.0) y_hi += 0.5;
        while (log_env(y_lo) > cut || y_lo > -1.0) y_lo -= 0.5;
        const FamilySpec fy = *f;
        const auto integrand = [&](double x) {
            const double y = x / sq;
            const auto seq = eval_poly_sequence(fy, std::max(n, m), x);
            return pref * std::exp(log_env(y)) * seq[n].real() * seq[m].real();
        };
        const QuadratureRule rule = gauss_legendre(20);
        const double lo = y_lo * sq, hi = y_hi * sq;
        int panels = std::max(8, static_cast<int>(std::ceil(hi - lo)));
        double prev = composite_gauss_legendre(integrand, lo, hi, panels, rule);
        for (int level = 0; level < 6; ++level) {
            panels *= 2;
            const double cur = composite_gauss_legendre(integrand, lo, hi, panels, rule);
            const double rhs = n == m ? std::pow(map.ratio, n) * std::tgamma(n + 2.0 * lam) / factorial(n) : 0.0;
            const double scale = std::max(std::abs(rhs), std::sqrt(std::pow(map.ratio, n + m) *
                                                                   std::tgamma(n + 2.0 * lam) / factorial(n) *
                                                                   std::tgamma(m + 2.0 * lam) / factorial(m)));
            const double err = std::abs(cur - prev);
            if (err <= rel_tol * scale) return {cur, rhs, err, panels * static_cast<int>(rule.nodes.size())};
            prev = cur;
        }
        throw QuadratureFailure("orthogonality_integral: composite Gauss-Legendre did not settle");
    }
    throw DomainError(std::string("orthogonality_integral: unsupported family ") + family_name(fam));
}

}  // namespace tra
