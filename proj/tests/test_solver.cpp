#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "tra/classes.hpp"

using namespace tra;

namespace {

const OdeParams kK0Example{1.0, 0.0, -1.0, 5.0, -0.25, 2.0};
const OdeParams kK0Set{1.0, 0.0, -1.0, 10.3, -0.25, 2.0};
const OdeParams kK1Set{1.5, 0.6, 0.0, 0.7, -0.16, 0.4};
const OdeParams kL39ASet{1.5, 0.0, 0.0, 2.0, 1.0, 15.0 / 16.0};
const OdeParams kL39BSet{1.5, 0.0, 0.0, 0.5, -0.25, 15.0 / 16.0};
const OdeParams kL39CSet{1.5, 0.0, 0.0, 0.3, -0.01, 15.0 / 16.0};

FreeParams k1_free() {
    FreeParams f;
    f.mu = -12.3;
    return f;
}
FreeParams c8b_free(int branch = 1) {
    FreeParams f = k1_free();
    f.alpha = 0.3;
    f.branch = branch;
    return f;
}
FreeParams tau_free(double tau) {
    FreeParams f;
    f.tau = tau;
    return f;
}

std::vector<ClassId> ids(const std::vector<ClassReport>& r) {
    std::vector<ClassId> out;
    for (const auto& c : r) out.push_back(c.id);
    return out;
}
bool has(const std::vector<ClassId>& v, ClassId id) { return std::find(v.begin(), v.end(), id) != v.end(); }

std::vector<ClassSolution> documented() {
    return {resolve_class(kK0Set, ClassId::K0),
            resolve_class(kK1Set, ClassId::K1, k1_free()),
            resolve_class(kK1Set, ClassId::C8B, c8b_free(1)),
            resolve_class(kK1Set, ClassId::C8B, c8b_free(-1)),
            resolve_class(kL39ASet, ClassId::L39A),
            resolve_class(kL39BSet, ClassId::L39B),
            resolve_class(kL39CSet, ClassId::L39C, tau_free(-0.5))};
}

}  // namespace

TEST(Classify, K0Example) {
    const auto r = classify(kK0Example, 1e-12);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].id, ClassId::K0);
    EXPECT_FALSE(r[0].redirect);
    EXPECT_EQ(r[0].relations[0].residual, 0.0);
}

TEST(Classify, L39AAndL39CButNotK0) {
    const auto v = ids(classify(kL39ASet));
    EXPECT_TRUE(has(v, ClassId::L39A));
    EXPECT_TRUE(has(v, ClassId::L39C));
    EXPECT_FALSE(has(v, ClassId::K0));
    EXPECT_FALSE(has(v, ClassId::K1));
}

TEST(Classify, NegativeA1AdmitsL39COnly) {
    const auto v = ids(classify({1.5, 0.0, 0.0, 2.0, -0.25, 15.0 / 16.0}));
    EXPECT_TRUE(has(v, ClassId::L39C));
    EXPECT_FALSE(has(v, ClassId::L39A));
}

TEST(Classify, RedirectReasons) {
    for (const auto& c : classify(kL39ASet)) {
        if (c.id == ClassId::K3_REDIRECT) {
            EXPECT_EQ(c.reason, "reverts to Bessel-polynomial equation");
        } else if (c.id == ClassId::K2_REDIRECT || c.id == ClassId::C8C_REDIRECT) {
            EXPECT_EQ(c.reason, "treated in the singular Laguerre basis");
        }
        EXPECT_EQ(c.redirect, is_redirect(c.id));
    }
}

TEST(Classify, BesselRelationAdmitsAllThreeBesselClasses) {
    const auto v = ids(classify(kK1Set));
    EXPECT_TRUE(has(v, ClassId::K1));
    EXPECT_TRUE(has(v, ClassId::C8B));
    EXPECT_TRUE(has(v, ClassId::L39B));
    EXPECT_FALSE(has(v, ClassId::L39A));
}

TEST(Classify, RejectsBadTolerance) { EXPECT_THROW(classify(kK0Example, 0.0), DomainError); }

TEST(Classify, NameRoundTrip) {
    for (ClassId id : kAllClasses) EXPECT_EQ(parse_class(class_name(id)), id);
    EXPECT_FALSE(parse_class("K9").has_value());
}

TEST(Resolve, K0Example) {
    const auto s = resolve_class(kK0Example, ClassId::K0);
    EXPECT_DOUBLE_EQ(s.basis.alpha0, -4.5);
    EXPECT_DOUBLE_EQ(s.basis.beta, 0.5);
    EXPECT_DOUBLE_EQ(s.basis.mu0, -5.0);
    EXPECT_EQ(s.basis.n_max, 4);
    const auto& b = std::get<DeformedB>(s.binding.family);
    EXPECT_DOUBLE_EQ(s.binding.arg, -8.0);
    EXPECT_DOUBLE_EQ(b.gamma, -4.0);
    EXPECT_DOUBLE_EQ(s.omega.coeff, -0.25);
}

TEST(Resolve, L39BBinding) {
    // nu = 1, zeta = 0.5
    const OdeParams p{1.0, 0.0, 0.0, 0.5, -0.25, 1.0};
    const auto s = resolve_class(p, ClassId::L39B);
    EXPECT_DOUBLE_EQ(s.symbols.nu, 1.0);
    EXPECT_DOUBLE_EQ(s.symbols.zeta, 0.5);
    const auto& f = std::get<ContDualHahnS>(s.binding.family);
    EXPECT_DOUBLE_EQ(f.p, 2.0);
    EXPECT_DOUBLE_EQ(f.c, 1.0);
    EXPECT_DOUBLE_EQ(f.d, 0.0);
    EXPECT_DOUBLE_EQ(s.binding.arg, -1.0);
}

TEST(Resolve, K1HahnBinding) {
    const auto s = resolve_class(kK1Set, ClassId::K1, k1_free());
    const auto& h = std::get<HahnQ>(s.binding.family);
    const double nu = s.symbols.nu, mu = -12.3;
    EXPECT_DOUBLE_EQ(h.p, mu - nu - 0.5);
    EXPECT_DOUBLE_EQ(h.q, mu + nu + 0.5);
    EXPECT_DOUBLE_EQ(h.N, -h.q);
    EXPECT_DOUBLE_EQ(s.binding.arg, -(mu + s.symbols.xi));
    ASSERT_EQ(s.alternatives.size(), 1u);
}

TEST(Resolve, C8BExposesBothBranches) {
    const auto s = resolve_class(kK1Set, ClassId::C8B, c8b_free(1));
    EXPECT_EQ(s.binding.label, "HahnQ(+)");
    ASSERT_EQ(s.alternatives.size(), 2u);
    EXPECT_EQ(s.alternatives[0].label, "HahnQ(-)");
    EXPECT_EQ(resolve_class(kK1Set, ClassId::C8B, c8b_free(-1)).binding.label, "HahnQ(-)");
}

TEST(Resolve, Errors) {
    EXPECT_THROW(resolve_class(kK0Example, ClassId::K3_REDIRECT), ConstraintViolation);
    EXPECT_THROW(resolve_class(kL39ASet, ClassId::K0), ConstraintViolation);
    EXPECT_THROW(resolve_class(kK1Set, ClassId::K1), ConstraintViolation);  // mu missing
    EXPECT_THROW(resolve_class(kK1Set, ClassId::C8B, k1_free()), ConstraintViolation);  // alpha missing
    EXPECT_THROW(resolve_class(kL39CSet, ClassId::L39C), ConstraintViolation);  // tau missing
    EXPECT_THROW(resolve_class({1.5, 0.0, 0.0, 2.0, 1.0, -1.0}, ClassId::L39A), RealityViolation);   // nu^2 < 0
    try {
        resolve_class(kL39ASet, ClassId::K1, k1_free());
        FAIL();
    } catch (const ConstraintViolation& e) {
        EXPECT_EQ(e.relation(), "b^2 = 1 + 4 A1");
        EXPECT_DOUBLE_EQ(std::abs(e.residual()), 5.0);
    }
}

TEST(Resolve, AplusK1ConstraintReading) {
    Reading r;
    r.k1_constraint_Aplus = true;
    // b^2 = 1 + 4 A+ holds with A+ = 0.25, b = sqrt(2), which the forced pair rejects
    const OdeParams p{1.5, std::sqrt(2.0), 0.25, 0.7, 0.1, 0.4};
    EXPECT_NO_THROW(resolve_class(p, ClassId::K1, k1_free(), r));
    EXPECT_THROW(resolve_class(p, ClassId::K1, k1_free()), ConstraintViolation);
}

TEST(Resolve, ConstraintClosureK0) {
    for (double am : {5.0, 10.3, 7.7}) {
        const OdeParams p{0.7, 0.4, -1.3, am, 0.25 * (0.16 - 1.0), 0.9};
        const auto s = resolve_class(p, ClassId::K0);
        EXPECT_NEAR(p.A_one + 0.25 * (1.0 - p.b * p.b), 0.0, 1e-15);
        EXPECT_NEAR(p.A_minus + p.b * (1.0 - 0.5 * p.a) + s.basis.mu0, 0.0, 1e-14);
    }
}

TEST(Resolve, DerivedSymbolsMatchDefinitions) {
    const auto s = resolve_class(kK1Set, ClassId::C8B, c8b_free());
    const auto& p = kK1Set;
    const double alpha = 0.3, mu = -12.3;
    EXPECT_EQ(s.symbols.nu_sq, p.A_zero + 0.25 * (p.a - 1.0) * (p.a - 1.0));
    EXPECT_EQ(s.symbols.xi, p.A_minus + p.b * (1.0 - p.a / 2.0));
    EXPECT_EQ(s.symbols.kappa, s.symbols.xi + p.a / 2.0 + alpha - 1.0);
    EXPECT_EQ(s.symbols.sigma_plus, -(mu + 0.5) + (alpha + (p.a - 1.0) / 2.0));
    EXPECT_EQ(s.symbols.sigma_minus, -(mu + 0.5) - (alpha + (p.a - 1.0) / 2.0));
    EXPECT_EQ(s.symbols.chi_sq, s.symbols.nu_sq + s.symbols.sigma_plus * s.symbols.sigma_minus);
    EXPECT_EQ(s.symbols.tau, 2.0 * s.basis.beta + p.b - 1.0);
}

TEST(Resolve, L39CRegimeFlag) {
    const auto s = resolve_class(kL39ASet, ClassId::L39C, tau_free(0.5));
    EXPECT_LT(std::abs(s.eta), 1.0);
    EXPECT_FALSE(s.discrete_regime);
    // 4 A1 < b^2 always lands in the discrete regime
    const auto z = resolve_class(kL39CSet, ClassId::L39C, tau_free(-0.5));
    EXPECT_GT(std::abs(z.eta), 1.0);
    EXPECT_TRUE(z.discrete_regime);
}

TEST(Recursion, K0Example) {
    const auto rc = recursion_coeffs(resolve_class(kK0Example, ClassId::K0), 0);
    EXPECT_NEAR(rc.u, -72.5, 1e-13);
    EXPECT_NEAR(rc.s, -1.0 / 14.0, 1e-15);
    EXPECT_NEAR(rc.t, -0.5, 1e-15);
}

TEST(Recursion, L39AExample) {
    const auto rc = recursion_coeffs(resolve_class(kL39ASet, ClassId::L39A), 0);
    EXPECT_NEAR(rc.u, -3.4, 1e-14);
    EXPECT_DOUBLE_EQ(rc.s, 3.0);
    EXPECT_DOUBLE_EQ(rc.t, 1.0);
}

TEST(Recursion, L39BExample) {
    const auto rc = recursion_coeffs(resolve_class({1.0, 0.0, 0.0, 0.5, -0.25, 1.0}, ClassId::L39B), 0);
    EXPECT_DOUBLE_EQ(rc.s, 6.0);
    EXPECT_DOUBLE_EQ(rc.t, 1.0);
}

TEST(Recursion, VanishingDenominator) {
    const auto s = resolve_class(kK0Example, ClassId::K0);
    EXPECT_THROW(recursion_coeffs(s, 5), DomainError);  // n + mu = 0
}

TEST(Recursion, MatrixFormConstantC) {
    // u_n = a_n - z c: moving only the bound variable z shifts every u_n by -c dz
    struct Case {
        ClassId id;
        OdeParams p;
        OdeParams q;
        FreeParams f;
    };
    const std::vector<Case> cases = {
        {ClassId::K0, kK0Set, {1.0, 0.0, -1.0, 10.3, -0.25, 3.1}, {}},
        {ClassId::K1, kK1Set, {1.5, 0.6, 0.0, 1.9, -0.16, 0.4}, k1_free()},
        {ClassId::C8B, kK1Set, {1.5, 0.6, 0.0, 1.9, -0.16, 0.4}, c8b_free()},
        {ClassId::L39A, kL39ASet, {1.5, 0.0, 0.0, 3.3, 1.0, 15.0 / 16.0}, {}},
        {ClassId::L39C, kL39CSet, {1.5, 0.0, 0.0, 1.1, -0.01, 15.0 / 16.0}, tau_free(-0.5)},
    };
    for (const auto& c : cases) {
        const auto s1 = resolve_class(c.p, c.id, c.f);
        const auto s2 = resolve_class(c.q, c.id, c.f);
        ASSERT_EQ(s1.split.c, s2.split.c) << class_name(c.id);
        const double dz = s2.split.z - s1.split.z;
        ASSERT_NE(dz, 0.0);
        for (int n = 0; n < 8; ++n) {
            const double du = recursion_coeffs(s2, n).u - recursion_coeffs(s1, n).u;
            EXPECT_NEAR(du, -s1.split.c * dz, 1e-11 * (1.0 + std::abs(du))) << class_name(c.id) << " n=" << n;
        }
    }
}

TEST(Recursion, L39CContinuityAtZeroTau) {
    const auto a = resolve_class(kL39ASet, ClassId::L39A);
    // same ODE with the deformation switched off; beta agrees at tau = 0
    for (double tau : {1e-3, 1e-5, 1e-7}) {
        const auto c = resolve_class(kL39ASet, ClassId::L39C, tau_free(tau));
        const double D = c.disc;
        for (int n = 0; n < 6; ++n) {
            const auto ra = recursion_coeffs(a, n);
            const auto rc = recursion_coeffs(c, n);
            // L39C carries an overall factor (D + 1) relative to L39A at tau = 0
            const double k = D + 1.0;
            EXPECT_NEAR(rc.u / k, ra.u, 10 * tau * (1.0 + std::abs(ra.u)));
            EXPECT_NEAR(rc.s / k, ra.s, 10 * tau * (1.0 + std::abs(ra.s)));
            EXPECT_NEAR(rc.t / k, ra.t, 10 * tau * (1.0 + std::abs(ra.t)));
        }
        // D phi = omega (...) must agree as well: omega_C (D+1) = omega_A
        EXPECT_NEAR(c.omega.coeff * (D + 1.0), a.omega.coeff, 1e-15);
    }
}

TEST(Expansion, TrivialZeroOrder) {
    for (const auto& s : documented()) {
        const auto f = expansion_coefficients(s, 0);
        ASSERT_EQ(f.size(), 1u);
        EXPECT_EQ(f[0], 1.0);
    }
}

TEST(Expansion, K0FirstPrefactor) {
    const auto s = resolve_class(kK0Example, ClassId::K0);
    const auto rc = recursion_coeffs(s, 0);
    EXPECT_NEAR(rc.t / rc.s, 7.0, 1e-13);
    EXPECT_NEAR(*closed_form_prefactor(s, 1), 7.0, 1e-13);
}

TEST(Expansion, L39ASecondPrefactor) {
    const auto s = resolve_class(kL39ASet, ClassId::L39A);
    EXPECT_NEAR(*closed_form_prefactor(s, 2), 1.0 / 6.0, 1e-15);
}

TEST(Expansion, ProductRouteMatchesClosedForm) {
    for (const auto& s : documented()) {
        const auto cf = closed_form_prefactor(s, 0);
        if (!cf) {
            EXPECT_EQ(s.id, ClassId::L39B);
            continue;
        }
        const int N = std::min(10, default_truncation(s));
        double C = 1.0;
        for (int n = 0; n <= N; ++n) {
            const double closed = *closed_form_prefactor(s, n);
            EXPECT_NEAR(C, closed, 1e-12 * std::abs(closed)) << class_name(s.id) << " n=" << n;
            const auto rc = recursion_coeffs(s, n);
            C *= rc.t / rc.s;
        }
    }
}

TEST(Expansion, BindingMatchesThreeTermRoute) {
    for (const auto& s : documented()) {
        const int N = std::min(12, default_truncation(s));
        const auto f = expansion_coefficients(s, N);
        const auto g = expansion_coefficients_direct(s, N);
        ASSERT_EQ(f.size(), static_cast<std::size_t>(N + 1));
        for (int n = 0; n <= N; ++n)
            EXPECT_NEAR(f[n], g[n], 1e-10 * std::abs(g[n]) + 1e-14) << s.binding.label << " n=" << n;
    }
}

TEST(Expansion, AlternativeBindingsReproduceBoundPolynomial) {
    for (const auto& s : documented()) {
        const int N = std::min(8, default_truncation(s));
        const auto g = expansion_coefficients_direct(s, N);
        for (const auto& b : s.alternatives) {
            const auto v = eval_poly_sequence(b.family, N, b.arg);
            double C = 1.0;
            for (int n = 0; n <= N; ++n) {
                const double P = g[n] / C;
                EXPECT_NEAR(v[n].real(), P, 1e-9 * std::abs(P) + 1e-12) << class_name(s.id) << " " << b.label << " n=" << n;
                EXPECT_NEAR(v[n].imag(), 0.0, 1e-9 * std::abs(P) + 1e-12);
                if (n < N) {
                    const auto rc = recursion_coeffs(s, n);
                    C *= rc.t / rc.s;
                }
            }
        }
    }
}

TEST(Expansion, C8BBranchesAgree) {
    const auto p = expansion_coefficients(resolve_class(kK1Set, ClassId::C8B, c8b_free(1)), 10);
    const auto m = expansion_coefficients(resolve_class(kK1Set, ClassId::C8B, c8b_free(-1)), 10);
    for (int n = 0; n <= 10; ++n) EXPECT_NEAR(p[n], m[n], 1e-10 * std::abs(p[n]));
}

TEST(Expansion, L39BIsRational) {
    // S_n(-nu^2; nu+1, nu, d) collapses to (zeta+1/2)/(n+zeta+1/2)
    const auto s = resolve_class(kL39BSet, ClassId::L39B);
    const double z = s.symbols.zeta;
    const auto f = expansion_coefficients(s, 20);
    for (int n = 0; n <= 20; ++n) EXPECT_NEAR(f[n], (z + 0.5) / (n + z + 0.5), 1e-12);
}

TEST(Expansion, DegreeGuard) {
    const auto s = resolve_class(kK0Example, ClassId::K0);
    EXPECT_NO_THROW(expansion_coefficients(s, 4));
    EXPECT_THROW(expansion_coefficients(s, 5), ConstraintViolation);
    EXPECT_EQ(default_truncation(s), 4);
    EXPECT_EQ(default_truncation(resolve_class(kL39ASet, ClassId::L39A)), 50);
}

TEST(Favard, K0Example) {
    const auto r = favard_report(resolve_class(kK0Example, ClassId::K0), 4);
    ASSERT_EQ(r.products.size(), 4u);
    EXPECT_TRUE(r.definite);
    EXPECT_NEAR(r.products[0], 1.0 / 28.0, 1e-15);
    for (double v : r.products) EXPECT_GT(v, 0.0);
}

TEST(Favard, GuardViolation) {
    const auto s = resolve_class({1.0, 0.0, -1.0, 2.0, -0.25, 2.0}, ClassId::K0);  // mu = -2
    EXPECT_THROW(favard_report(s, 3), ConstraintViolation);
}

TEST(Favard, L39BPositive) {
    const auto r = favard_report(resolve_class({1.0, 0.0, 0.0, 0.5, -0.25, 1.0}, ClassId::L39B), 30);
    EXPECT_TRUE(r.definite);
    EXPECT_EQ(r.first_failure, -1);
}

TEST(Favard, ReportsFirstFailure) {
    // tau = 1 + sqrt(-D) kills s_n identically
    const auto s = resolve_class({1.5, 0.0, 0.0, 0.3, -0.25, 15.0 / 16.0}, ClassId::L39C, tau_free(2.0));
    const auto r = favard_report(s, 5);
    EXPECT_FALSE(r.definite);
    EXPECT_EQ(r.first_failure, 0);
    EXPECT_THROW(jacobi_matrix(s, 5), DefinitenessError);
}

TEST(Jacobi, K0Entries) {
    const auto s = resolve_class(kK0Example, ClassId::K0);
    // integer mu: u_4 is singular, so the largest usable matrix stops at N = 3
    EXPECT_THROW(jacobi_matrix(s, 4), DomainError);
    const auto m = jacobi_matrix(s, 3);
    EXPECT_NEAR(m.diag[0], -80.5, 1e-12);
    // sqrt(s_0 t_0) = sqrt(1/28)
    EXPECT_NEAR(m.offdiag[0], std::sqrt(1.0 / 28.0), 1e-15);
}

TEST(Jacobi, ScalarCase) {
    const auto s = resolve_class(kK0Example, ClassId::K0);
    const auto m = jacobi_matrix(s, 0);
    const auto ev = tridiag_eigenvalues(m);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0], m.diag[0]);
}

TEST(Jacobi, ReversalInvariance) {
    for (const auto& s : documented()) {
        const auto fav = favard_report(s, std::min(9, default_truncation(s)));
        if (!fav.definite) continue;
        const int N = std::min(9, default_truncation(s));
        auto m = jacobi_matrix(s, N);
        const auto ev = tridiag_eigenvalues(m);
        std::reverse(m.diag.begin(), m.diag.end());
        std::reverse(m.offdiag.begin(), m.offdiag.end());
        const auto er = tridiag_eigenvalues(m);
        double scale = 0.0;
        for (double v : ev) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < ev.size(); ++i) EXPECT_NEAR(ev[i], er[i], 1e-12 * scale) << class_name(s.id);
    }
}

TEST(Jacobi, EigenvaluesAreZerosOfNextPolynomial) {
    const auto s = resolve_class(kL39ASet, ClassId::L39A);
    const int N = 6;
    const auto ev = tridiag_eigenvalues(jacobi_matrix(s, N));
    auto P = [&](double z) { return eval_poly(s.binding.family, N + 1, z).real(); };
    for (double z : ev) {
        const double scale = std::max(std::abs(P(z - 0.1)), std::abs(P(z + 0.1)));
        EXPECT_LT(std::abs(P(z)), 1e-9 * scale) << z;
    }
}

TEST(DualHahn, L39BContradiction) {
    const auto s = resolve_class({1.0, 0.0, 0.0, 0.5, -0.25, 1.0}, ClassId::L39B);
    const auto d = dual_hahn_diagnostic(s);
    EXPECT_TRUE(d.contradiction);
    EXPECT_DOUBLE_EQ(d.p, 1.0);
    EXPECT_DOUBLE_EQ(d.q, 2.0);
    EXPECT_DOUBLE_EQ(d.N, -3.0);
    EXPECT_FALSE(d.reason.empty());
    EXPECT_THROW(dual_hahn_diagnostic(resolve_class(kL39ASet, ClassId::L39A)), DomainError);
}
