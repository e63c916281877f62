#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "tra/identities.hpp"
#include "tra/polynomials.hpp"
#include "tra/special.hpp"
#include "tra/tridiagonal.hpp"

using namespace tra;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST(Pochhammer, Examples) {
    EXPECT_EQ(pochhammer(7.3, 0), 1.0);
    EXPECT_EQ(pochhammer(1.0, 5), 120.0);
    EXPECT_EQ(pochhammer(-3.0, 5), 0.0);
    EXPECT_THROW(pochhammer(1.0, -1), DomainError);
}

TEST(LgammaComplex, RealAxisAndClosedForms) {
    for (double x : {0.3, 1.0, 2.5, 7.25, 30.0}) EXPECT_NEAR(lgamma_complex({x, 0.0}).real(), std::lgamma(x), 1e-12);
    // |Gamma(1+iy)|^2 = pi y / sinh(pi y), |Gamma(1/2+iy)|^2 = pi / cosh(pi y)
    for (double y : {0.1, 0.7, 2.0, 5.5}) {
        const double pi = std::numbers::pi;
        EXPECT_NEAR(abs_gamma_squared(1.0, y) / (pi * y / std::sinh(pi * y)), 1.0, 1e-12);
        EXPECT_NEAR(abs_gamma_squared(0.5, y) / (pi / std::cosh(pi * y)), 1.0, 1e-12);
    }
}

TEST(EvalPoly, Examples) {
    EXPECT_EQ(eval_poly(BesselJ{-5.0, 4}, 0, 0.3).real(), 1.0);
    EXPECT_NEAR(eval_poly(BesselJ{-5.0, 4}, 1, 0.3).real(), -1.4, 1e-14);
    EXPECT_NEAR(eval_poly(BesselJ{-5.0, 4}, 2, 0.3).real(), 0.58, 1e-14);
    EXPECT_EQ(eval_poly(DeformedB{-5.0, -4.0, 4}, 0, 123.0).real(), 1.0);
    EXPECT_NEAR(eval_poly(MeixnerPollaczekP{1.0, std::numbers::pi / 2}, 1, 0.7).real(), 1.4, 1e-14);
}

TEST(EvalPoly, DomainGuards) {
    EXPECT_THROW(eval_poly(BesselJ{-2.0, 3}, 1, 0.3), DomainError);
    EXPECT_THROW(eval_poly(BesselJ{-5.0, 4}, 5, 0.3), DomainError);
    EXPECT_THROW(eval_poly(MeixnerPollaczekP{-1.0, 1.0}, 1, 0.3), DomainError);
    EXPECT_THROW(eval_poly(MeixnerPollaczekP{1.0, 4.0}, 1, 0.3), DomainError);
    EXPECT_THROW(eval_poly(MeixnerM{1.0, -0.1}, 1, 0.3), DomainError);
    EXPECT_THROW(eval_poly(HahnQ{0.5, 0.5, 4}, 5, 1.0), DomainError);
    EXPECT_THROW(eval_poly(HahnQ{0.5, 0.5, 4}, 2, 7.0), DomainError);
    EXPECT_THROW(eval_poly(DualHahnR{-2.0, 0.5, 4}, 2, 1.0), DomainError);
}

TEST(EvalOracle, Examples) {
    EXPECT_NEAR(eval_oracle(BesselJ{-5.0, 4}, 1, 0.3).real(), -1.4, 1e-14);
    EXPECT_EQ(eval_oracle(HahnQ{0.5, 1.5, 6}, 0, 3.0).real(), 1.0);
    EXPECT_NEAR(eval_oracle(BesselJbar{1.0}, 1, 0.5).real(), -0.5, 1e-14);
    EXPECT_THROW(eval_oracle(DeformedB{-5.0, -4.0, 4}, 1, 0.3), UnsupportedOracle);
    EXPECT_THROW(eval_oracle(DeformedY{1.0, 1.0, 0.3}, 1, 0.3), UnsupportedOracle);
    EXPECT_THROW(eval_oracle(DeformedZ{1.0, 1.0, 0.3}, 1, 0.3), UnsupportedOracle);
}

TEST(EvalPoly, SeedIsOneForEveryFamily) {
    const std::vector<FamilySpec> fams = {BesselJ{-5.0, 4},          BesselJbar{0.7},           LaguerreL{0.3},
                                          DeformedB{-5.0, -4.0, 4},   DualHahnR{0.5, 0.5, 6},    ContDualHahnS{0.5, 1.0, 2.0},
                                          HahnQ{0.5, 0.5, 6},         ContHahnH{{0.5}, {1.0}, {0.7}, {1.2}},
                                          MeixnerPollaczekP{1.0, 1.0}, MeixnerM{1.0, 1.0},     DeformedY{1.0, 1.0, 0.4},
                                          DeformedZ{1.0, 1.0, 0.4}};
    for (const auto& f : fams) EXPECT_EQ(eval_poly(f, 0, 2.0).value, cplx(1.0)) << family_name(f);
}

// Recursion against the hypergeometric definitions on random parameter/argument samples.
TEST(EvalOracle, AgreesWithRecursionOnSamples) {
    std::mt19937 rng(20261014);
    auto U = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    double worst = 0.0;
    for (int sample = 0; sample < 25; ++sample) {
        const double mu = U(-16.0, -11.0);
        const int N = 12;
        std::vector<std::pair<FamilySpec, double>> cases = {
            {BesselJ{mu, 10}, U(0.01, 1.5)},
            {BesselJbar{U(0.1, 3.0)}, U(0.05, 2.0)},
            {LaguerreL{U(-0.9, 4.0)}, U(0.0, 8.0)},
            {DualHahnR{U(-0.9, 3.0), U(-0.9, 3.0), double(N)}, double(sample % (N + 1))},
            {ContDualHahnS{U(0.1, 2.0), U(0.1, 2.0), U(0.1, 2.0)}, U(-0.5, 6.0)},
            {HahnQ{U(-0.9, 3.0), U(-0.9, 3.0), double(N)}, double(sample % (N + 1))},
            {ContHahnH{cplx(U(0.1, 2.0), U(-1, 1)), cplx(U(0.1, 2.0), U(-1, 1)), cplx(U(0.1, 2.0), U(-1, 1)),
                       cplx(U(0.1, 2.0), U(-1, 1))},
             U(-2.0, 2.0)},
            {MeixnerPollaczekP{U(0.2, 3.0), U(0.2, 2.9)}, U(-3.0, 3.0)},
            {MeixnerM{U(0.2, 3.0), U(0.1, 1.5)}, double(sample % 7)},
        };
        for (const auto& [fam, arg] : cases) {
            for (int n = 0; n <= 10; ++n) {
                const cplx a = eval_poly(fam, n, arg).value;
                const cplx b = eval_oracle(fam, n, arg).value;
                const double d = std::abs(a - b) / std::max(1.0, std::abs(b));
                worst = std::max(worst, d);
                EXPECT_LE(d, 1e-10) << family_name(fam) << " n=" << n << " arg=" << arg;
            }
        }
    }
    EXPECT_LE(worst, 1e-10);
}

// A degree-n member is reproduced at fresh points by its n+1 point Lagrange interpolant.
// M_n(0) decays like e^{-n theta} while the other solution of the recursion grows
TEST(EvalPoly, MeixnerAtZeroKeepsRelativeAccuracy) {
    for (double theta : {0.8, 1.25, 1.5})
        for (double lambda : {0.25, 2.2}) {
            double want = 1.0;
            for (int n = 1; n <= 10; ++n) {
                want *= (2.0 * lambda + n - 1.0) / n * std::exp(-theta);
                const double got = eval_poly(MeixnerM{lambda, theta}, n, 0.0).real();
                EXPECT_LE(std::abs(got - want) / want, 1e-11) << "theta=" << theta << " lambda=" << lambda << " n=" << n;
            }
        }
}

TEST(EvalPoly, DegreeProperty) {
    const std::vector<FamilySpec> fams = {BesselJ{-12.3, 10},      LaguerreL{1.7},         DeformedB{-12.3, -0.5, 10},
                                          HahnQ{0.5, 1.5, 10.5},    MeixnerPollaczekP{1.0, 0.8}, MeixnerM{0.7, 0.4},
                                          DeformedY{1.2, 0.9, 0.3}, DeformedZ{1.2, 0.5, 0.3}};
    for (const auto& f : fams) {
        for (int n : {1, 3, 6}) {
            std::vector<double> xs, ys;
            for (int i = 0; i <= n; ++i) {
                xs.push_back(0.1 + 0.37 * i);
                ys.push_back(eval_poly(f, n, xs.back()).real());
            }
            // only families whose recursion variable is affine in the argument are tested this way
            for (double probe : {0.23, 1.11, 2.9}) {
                double lag = 0.0;
                for (int i = 0; i <= n; ++i) {
                    double w = 1.0;
                    for (int j = 0; j <= n; ++j)
                        if (j != i) w *= (probe - xs[j]) / (xs[i] - xs[j]);
                    lag += w * ys[i];
                }
                const double v = eval_poly(f, n, probe).real();
                EXPECT_LE(std::abs(lag - v), 1e-8 * std::max(1.0, std::abs(v))) << family_name(f) << " n=" << n;
            }
        }
    }
}

TEST(EvalPoly, BesselRecursionIsDefinite) {
    for (double mu : {-5.0, -10.3, -20.5}) {
        const int n_max = static_cast<int>(std::floor(-mu - 0.5 - 1e-9));
        for (int k = 1; k < n_max; ++k) {
            const auto s_here = recursion_step(BesselJ{mu, n_max}, k);
            const auto s_prev = recursion_step(BesselJ{mu, n_max}, k - 1);
            EXPECT_GT(s_here.b.real() * s_prev.c.real(), 0.0) << "mu=" << mu << " k=" << k;
        }
    }
}

TEST(EvalPoly, JetsMatchFiniteDifferences) {
    // non-integer N makes DualHahnR a formal polynomial in m, exercising the quadratic variable
    const std::vector<FamilySpec> fams = {BesselJ{-10.3, 9}, LaguerreL{2.0}, DualHahnR{0.5, 0.7, 9.5},
                                          MeixnerPollaczekP{1.0, 0.7}};
    for (const auto& f : fams) {
        const double x = 0.83;
        const double h = 1e-4;
        const auto jets = eval_poly_jets(f, 6, x);
        for (int n = 0; n <= 6; ++n) {
            auto val = [&](double t) { return eval_poly(f, n, t).real(); };
            const double d1 = (val(x + h) - val(x - h)) / (2 * h);
            const double d2 = (val(x + h) - 2 * val(x) + val(x - h)) / (h * h);
            EXPECT_NEAR(jets[n].d1, d1, 1e-6 * std::max(1.0, std::abs(d1))) << family_name(f) << n;
            EXPECT_NEAR(jets[n].d2, d2, 1e-4 * std::max(1.0, std::abs(d2))) << family_name(f) << n;
        }
    }
}

TEST(Reduction, Examples) {
    const auto bj = reduce_identity(Identity::B_to_J, 2, 0.3, {.mu = -5.0});
    EXPECT_NEAR(bj.lhs, 0.58, 1e-13);
    EXPECT_NEAR(bj.rhs, 0.58, 1e-13);
    const auto jl = reduce_identity(Identity::Jbar_to_Laguerre, 1, 0.5, {.nu = 1.0});
    EXPECT_NEAR(jl.lhs, -0.5, 1e-14);
    EXPECT_NEAR(jl.rhs, -0.5, 1e-14);
    for (int n = 0; n <= 8; ++n) {
        const auto yp = reduce_identity(Identity::Y_to_P, n, 0.4, {.lambda = 1.3, .theta = 0.9, .eta = 0.0});
        EXPECT_NEAR(yp.lhs, yp.rhs, 1e-13 * std::max(1.0, std::abs(yp.lhs)));
    }
    EXPECT_THROW(reduce_identity(Identity::Y_to_P, 2, 0.4, {.lambda = 1.3, .theta = 0.9, .eta = 1.0}), DomainError);
    EXPECT_THROW(reduce_identity(Identity::Z_to_M, 2, 0.4, {.lambda = 1.3, .theta = 2.0, .eta = 0.5}), DomainError);
}

TEST(Reduction, HoldAcrossParameters) {
    for (int n = 0; n <= 8; ++n) {
        for (double x : {0.07, 0.3, 0.9, 2.4}) {
            const auto check = [&](Identity id, IdentityParams p) {
                const auto s = reduce_identity(id, n, x, p);
                EXPECT_LE(std::abs(s.lhs - s.rhs), 1e-10 * std::max(1.0, std::abs(s.lhs)))
                    << identity_name(id) << " n=" << n << " x=" << x;
            };
            check(Identity::B_to_J, {.mu = -9.7});
            check(Identity::B_to_J, {.mu = -12.0});
            check(Identity::Y_to_P, {.lambda = 1.2, .theta = 1.1, .eta = 0.6});
            check(Identity::Y_to_P, {.lambda = 0.6, .theta = 2.3, .eta = -0.8});
            check(Identity::Z_to_M, {.lambda = 1.1, .theta = 0.6, .eta = 0.5});
            check(Identity::Z_to_M, {.lambda = 0.8, .theta = 0.3, .eta = -1.5});
            check(Identity::Jbar_to_Laguerre, {.nu = 0.75});
            check(Identity::J_to_Laguerre, {.mu = -10.4});
        }
    }
}

TEST(Generating, TrivialAtZero) {
    const auto a9 = generating_check(BesselJ{-5.3, 4}, 0.4, 0.0);
    EXPECT_EQ(a9.partial_sum, 1.0);
    EXPECT_NEAR(a9.closed_form, 1.0, 1e-15);
    const auto b12 = generating_check(MeixnerPollaczekP{1.2, 1.0}, 0.4, 0.0);
    EXPECT_EQ(b12.partial_sum, 1.0);
    EXPECT_NEAR(b12.closed_form, 1.0, 1e-15);
}

TEST(Generating, MatchesClosedForms) {
    const auto ok = [](const FamilySpec& f, double x, double t) {
        const auto g = generating_check(f, x, t, 30);
        EXPECT_LE(std::abs(g.partial_sum - g.closed_form), 1e-8) << family_name(f) << " x=" << x << " t=" << t;
    };
    ok(DeformedY{1.0, std::numbers::pi / 3, 0.5}, 0.4, 0.03);
    ok(BesselJ{-5.3, 4}, 0.4, 0.03);
    ok(MeixnerPollaczekP{1.2, 1.0}, 0.4, 0.03);
    ok(MeixnerM{1.2, 1.0}, 2.3, 0.03);
    ok(DeformedZ{1.1, 0.6, 0.5}, 1.7, 0.03);
    ok(DeformedY{0.8, 1.3, 1.7}, -0.6, -0.04);
}

TEST(Generating, Guards) {
    EXPECT_THROW(generating_check(BesselJ{-5.3, 4}, 0.4, 0.06), DomainError);
    EXPECT_THROW(generating_check(BesselJ{-5.3, 4}, 30.0, 0.04), DomainError);
    EXPECT_THROW(generating_check(LaguerreL{1.0}, 0.4, 0.01), DomainError);
}

TEST(Orthogonality, BesselExamples) {
    const auto d0 = orthogonality_integral(BesselJ{-5.0, 4}, 0, 0);
    EXPECT_NEAR(d0.analytic_rhs, 40320.0, 1e-9);
    EXPECT_LE(rel(d0.numeric_integral, 40320.0), 1e-8);
    const auto o01 = orthogonality_integral(BesselJ{-5.0, 4}, 0, 1);
    EXPECT_LE(std::abs(o01.numeric_integral), 1e-6 * 40320.0);
    const auto d1 = orthogonality_integral(BesselJ{-5.0, 4}, 1, 1);
    EXPECT_NEAR(d1.analytic_rhs, 40320.0 / 7.0, 1e-9);
    EXPECT_LE(rel(d1.numeric_integral, d1.analytic_rhs), 1e-6);
}

TEST(Orthogonality, DeformedY) {
    const DeformedY f{1.3, 1.0, 0.4};
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m) {
            const auto r = orthogonality_integral(f, n, m);
            const double scale = std::abs(orthogonality_integral(f, n, n).analytic_rhs);
            if (n == m)
                EXPECT_LE(std::abs(r.numeric_integral - r.analytic_rhs), 1e-6 * scale) << n;
            else
                EXPECT_LE(std::abs(r.numeric_integral), 1e-6 * scale) << n << "," << m;
        }
    EXPECT_THROW(orthogonality_integral(DeformedY{1.3, 1.0, 1.2}, 1, 1), DomainError);
}

TEST(Tridiag, Examples) {
    EXPECT_EQ(tridiag_eigenvalues({{2.0}, {}}), std::vector<double>{2.0});
    const auto e2 = tridiag_eigenvalues({{0.0, 0.0}, {1.0}});
    EXPECT_NEAR(e2[0], -1.0, 1e-14);
    EXPECT_NEAR(e2[1], 1.0, 1e-14);
    const auto e3 = tridiag_eigenvalues({{2.0, 2.0, 2.0}, {1.0, 1.0}});
    EXPECT_NEAR(e3[0], 2.0 - std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(e3[1], 2.0, 1e-13);
    EXPECT_NEAR(e3[2], 2.0 + std::sqrt(2.0), 1e-13);
}

TEST(Tridiag, BisectionAndInverseIterationAgreeWithQL) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    SymTridiag t;
    for (int i = 0; i < 60; ++i) t.diag.push_back(U(rng));
    for (int i = 0; i < 59; ++i) t.offdiag.push_back(U(rng));
    const auto all = tridiag_eigenvalues(t);
    const auto low = lowest_eigenvalues(t, 5);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(low[i], all[i], 1e-11);
    for (int i = 0; i < 3; ++i) {
        const auto v = inverse_iteration(t, all[i]);
        double res = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            double r = t.diag[k] * v[k] - all[i] * v[k];
            if (k > 0) r += t.offdiag[k - 1] * v[k - 1];
            if (k + 1 < v.size()) r += t.offdiag[k] * v[k + 1];
            res = std::max(res, std::abs(r));
        }
        EXPECT_LE(res, 1e-9);
    }
}
