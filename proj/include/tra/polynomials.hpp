#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "tra/errors.hpp"
#include "tra/special.hpp"

namespace tra {

using cplx = std::complex<double>;

// Families. Each lists its parameters in the order they are conventionally written.
struct BesselJ {
    double mu;
    int n_max;
};
struct BesselJbar {
    double nu;
};
struct LaguerreL {
    double alpha;
};
struct DeformedB {
    double mu;
    double gamma;
    int n_max;
};
struct DualHahnR {
    double p, q, N;
};
struct ContDualHahnS {
    double p, c, d;
};
struct HahnQ {
    double p, q, N;
};
struct ContHahnH {
    cplx p, q, c, d;
};
struct MeixnerPollaczekP {
    double lambda, theta;
};
struct MeixnerM {
    double lambda, theta;
};
struct DeformedY {
    double lambda, theta, eta;
};
struct DeformedZ {
    double lambda, theta, eta;
};

using FamilySpec = std::variant<BesselJ, BesselJbar, LaguerreL, DeformedB, DualHahnR, ContDualHahnS, HahnQ,
                                ContHahnH, MeixnerPollaczekP, MeixnerM, DeformedY, DeformedZ>;

inline const char* family_name(const FamilySpec& f) {
    static constexpr const char* names[] = {"BesselJ",  "BesselJbar",        "LaguerreL", "DeformedB",
                                            "DualHahnR", "ContDualHahnS",     "HahnQ",     "ContHahnH",
                                            "MeixnerPollaczekP", "MeixnerM", "DeformedY", "DeformedZ"};
    return names[f.index()];
}

/// Evaluated family member. value is real except for ContHahnH.
struct PolyValue {
    cplx value;
    int n;
    double arg;

    double real() const noexcept { return value.real(); }
};

/// One step of  z P_k = a P_k + b P_{k-1} + c P_{k+1}.
template <typename T>
struct Step {
    T a, b, c;
};

/// Recursion variable z(arg) with its first two derivatives in arg.
template <typename T>
struct VarJet {
    T z, dz, d2z;
};

template <typename T>
struct Jet {
    T value, d1, d2;
};

namespace detail {

inline bool is_nonneg_integer(double v, int& out) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-12 * std::max(1.0, std::abs(v)) || r < 0) return false;
    out = static_cast<int>(r);
    return true;
}

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

inline void check_degree(int n) { require(n >= 0, "degree must be nonnegative"); }

inline void check_finite_family(double N, double p, double q, int n, double arg, bool arg_is_index, const char* who) {
    int Ni = 0;
    if (!is_nonneg_integer(N, Ni)) return;  // formal polynomial in a non-integer N
    require(n <= Ni, std::string(who) + ": degree exceeds N");
    require(p > -1.0 || p < -N, std::string(who) + ": p must be > -1 or < -N");
    require(q > -1.0 || q < -N, std::string(who) + ": q must be > -1 or < -N");
    if (arg_is_index) {
        int mi = 0;
        require(is_nonneg_integer(arg, mi) && mi <= Ni, std::string(who) + ": argument m must lie in 0..N");
    }
}

// ---- per-family recursion data -------------------------------------------------------------
// Steps and variables are templates on the working precision; evaluation runs them in long double
// since several families (Meixner at small m, for one) are evaluated in a direction where the recursion loses digits.

// Bessel recursion in the variable 2x with parameter mu; no domain checks.
template <typename R = double>
Step<R> bessel_step(double mu_d, int k) {
    const R mu = mu_d;
    const R m = k + mu;
    return {-mu / (m * (m + 1)), -k / (m * (2 * m + 1)), (k + 2 * mu + 1) / ((m + 1) * (2 * m + 1))};
}

template <typename R = double>
Step<R> step(const BesselJ& f, int k) { return bessel_step<R>(f.mu, k); }
template <typename R = double>
VarJet<R> variable(const BesselJ&, double x) { return {2 * R(x), 2, 0}; }
inline void check(const BesselJ& f, int n, double) {
    require(f.n_max >= 0, "BesselJ: N_max must be nonnegative");
    require(f.mu < -f.n_max - 0.5, "BesselJ: requires mu < -N_max - 1/2");
    require(n <= f.n_max, "BesselJ: degree exceeds N_max");
}

// Jbar is J^{mu(n)} with mu(n) = -n - nu - 1/2, so the step data depends on the target degree.
template <typename R = double>
VarJet<R> variable(const BesselJbar&, double x) { return {2 * R(x), 2, 0}; }
inline void check(const BesselJbar&, int, double) {}

template <typename R = double>
Step<R> step(const LaguerreL& f, int k) {
    const R al = f.alpha;
    return {2 * R(k) + al + 1, -(k + al), -(R(k) + 1)};
}
template <typename R = double>
VarJet<R> variable(const LaguerreL&, double u) { return {R(u), 1, 0}; }
inline void check(const LaguerreL&, int, double) {}

template <typename R = double>
Step<R> step(const DeformedB& f, int k) {
    const R mu = f.mu, g = f.gamma;
    const R m = k + mu;
    const R h = m + R(0.5);
    return {-2 * mu / (m * (m + 1)) + g * h * h, -k / (m * h), (k + 2 * mu + 1) / ((m + 1) * h)};
}
template <typename R = double>
VarJet<R> variable(const DeformedB&, double z) { return {R(z), 1, 0}; }
inline void check(const DeformedB& f, int n, double) {
    require(f.n_max >= 0, "DeformedB: N_max must be nonnegative");
    require(f.mu < -f.n_max - 0.5, "DeformedB: requires mu < -N_max - 1/2");
    require(n <= f.n_max, "DeformedB: degree exceeds N_max");
}

template <typename R = double>
Step<R> step(const DualHahnR& f, int k) {
    const R N = f.N, p = f.p, q = f.q;
    const R up = (N - k) * (k + p + 1);
    const R down = k * (N - k + q + 1);
    const R h = (p + q + 1) / 2;
    return {up + down + h * h, -down, -up};
}
template <typename R = double>
VarJet<R> variable(const DualHahnR& f, double m) {
    const R h = R(m) + (R(f.p) + R(f.q) + 1) / 2;
    return {h * h, 2 * h, 2};
}
inline void check(const DualHahnR& f, int n, double m) { check_finite_family(f.N, f.p, f.q, n, m, true, "DualHahnR"); }

// Variable is x^2 itself (may be negative, i.e. imaginary x).
template <typename R = double>
Step<R> step(const ContDualHahnS& f, int k) {
    const R p = f.p, c = f.c, d = f.d;
    const R down = k * (k + c + d - 1);
    const R up = (k + p + c) * (k + p + d);
    return {down + up - p * p, -down, -up};
}
template <typename R = double>
VarJet<R> variable(const ContDualHahnS&, double x_sq) { return {R(x_sq), 1, 0}; }
inline void check(const ContDualHahnS&, int, double) {}

template <typename R = double>
Step<R> step(const HahnQ& f, int k) {
    const R N = f.N, p = f.p, q = f.q;
    const R s = p + q;
    const R A = (N - k) * (k + p + 1) * (k + s + 1) / ((2 * R(k) + s + 1) * (2 * R(k) + s + 2));
    const R C = k == 0 ? R(0) : k * (k + q) * (k + s + N + 1) / ((2 * R(k) + s) * (2 * R(k) + s + 1));
    return {A + C, -C, -A};
}
template <typename R = double>
VarJet<R> variable(const HahnQ&, double m) { return {R(m), 1, 0}; }
inline void check(const HahnQ& f, int n, double m) { check_finite_family(f.N, f.p, f.q, n, m, true, "HahnQ"); }

template <typename R = double>
Step<std::complex<R>> step(const ContHahnH& f, int k) {
    using C = std::complex<R>;
    const C p(f.p), q(f.q), c(f.c), d(f.d);
    const C S = p + q + c + d;
    const R kk = k;
    const C A = (kk + p + c) * (kk + p + d) * (kk + S - R(1)) / ((2 * kk + S - R(1)) * (2 * kk + S));
    const C Cc = k == 0 ? C(0) : kk * (kk + q + c - R(1)) * (kk + q + d - R(1)) / ((2 * kk + S - R(2)) * (2 * kk + S - R(1)));
    return {A - Cc, Cc, -A};
}
template <typename R = double>
VarJet<std::complex<R>> variable(const ContHahnH& f, double x) {
    using C = std::complex<R>;
    return {C(f.p) + C(0, x), C(0, 1), C(0)};
}
inline void check(const ContHahnH&, int, double) {}

inline void check_mp(double lambda, double theta, const char* who) {
    require(lambda > 0.0, std::string(who) + ": requires lambda > 0");
    require(theta > 0.0 && theta < std::numbers::pi, std::string(who) + ": requires 0 < theta < pi");
}
inline void check_meixner(double lambda, double theta, const char* who) {
    require(lambda > 0.0, std::string(who) + ": requires lambda > 0");
    require(theta > 0.0, std::string(who) + ": requires theta > 0");
}

template <typename R = double>
Step<R> step(const MeixnerPollaczekP& f, int k) {
    const R lam = f.lambda, th = f.theta;
    return {-2 * (k + lam) * std::cos(th), k + 2 * lam - 1, R(k) + 1};
}
template <typename R = double>
VarJet<R> variable(const MeixnerPollaczekP& f, double x) {
    const R s = 2 * std::sin(R(f.theta));
    return {s * R(x), s, 0};
}
inline void check(const MeixnerPollaczekP& f, int, double) { check_mp(f.lambda, f.theta, "MeixnerPollaczekP"); }

// unqualified cosh/sinh so that multiprecision R finds its own overloads
template <typename R = double>
Step<R> step(const MeixnerM& f, int k) {
    using std::cosh, std::sinh;
    const R lam = f.lambda, th = f.theta;
    return {2 * ((k + lam) * cosh(th) - lam * sinh(th)), -(k + 2 * lam - 1), -(R(k) + 1)};
}
template <typename R = double>
VarJet<R> variable(const MeixnerM& f, double m) {
    using std::sinh;
    const R s = 2 * sinh(R(f.theta));
    return {s * R(m), s, 0};
}
inline void check(const MeixnerM& f, int, double) { check_meixner(f.lambda, f.theta, "MeixnerM"); }

template <typename R = double>
Step<R> step(const DeformedY& f, int k) {
    const R lam = f.lambda, th = f.theta;
    const R es = R(f.eta) * std::sin(th);
    return {-2 * (k + lam) * std::cos(th), (k + 2 * lam - 1) * (1 - es), (R(k) + 1) * (1 + es)};
}
template <typename R = double>
VarJet<R> variable(const DeformedY& f, double x) {
    const R s = 2 * std::sin(R(f.theta));
    return {s * R(x), s, 0};
}
inline void check(const DeformedY& f, int, double) { check_mp(f.lambda, f.theta, "DeformedY"); }

template <typename R = double>
Step<R> step(const DeformedZ& f, int k) {
    using std::cosh, std::sinh;
    const R lam = f.lambda, th = f.theta;
    const R es = R(f.eta) * sinh(th);
    return {2 * ((k + lam) * cosh(th) - lam * sinh(th)), -(k + 2 * lam - 1) * (1 - es), -(R(k) + 1) * (1 + es)};
}
template <typename R = double>
VarJet<R> variable(const DeformedZ& f, double m) {
    using std::sinh;
    const R s = 2 * sinh(R(f.theta));
    return {s * R(m), s, 0};
}
inline void check(const DeformedZ& f, int, double) { check_meixner(f.lambda, f.theta, "DeformedZ"); }

// ---- generic upward recursion ---------------------------------------------------------------

template <typename T, typename StepFn>
std::vector<Jet<T>> run_recursion(StepFn&& step_at, T z, int n, bool with_derivs) {
    std::vector<Jet<T>> out;
    out.reserve(n + 1);
    Jet<T> prev{T(0), T(0), T(0)};
    Jet<T> cur{T(1), T(0), T(0)};
    out.push_back(cur);
    for (int k = 0; k < n; ++k) {
        const Step<T> s = step_at(k);
        if (s.c == T(0)) throw ZeroDivision("three-term recursion: vanishing up-coefficient at k=" + std::to_string(k));
        Jet<T> next;
        next.value = ((z - s.a) * cur.value - s.b * prev.value) / s.c;
        if (with_derivs) {
            next.d1 = ((z - s.a) * cur.d1 + cur.value - s.b * prev.d1) / s.c;
            next.d2 = ((z - s.a) * cur.d2 + T(2) * cur.d1 - s.b * prev.d2) / s.c;
        }
        prev = cur;
        cur = next;
        out.push_back(cur);
    }
    return out;
}

template <typename F>
using scalar_of = std::conditional_t<std::is_same_v<F, ContHahnH>, cplx, double>;
// Meixner-type recursions amplify rounding by about e^{2 n theta} at small m; they get 50 digits
template <typename F>
inline constexpr bool meixner_type = std::is_same_v<F, MeixnerM> || std::is_same_v<F, DeformedZ>;
template <typename F>
using real_wide_of = std::conditional_t<meixner_type<F>, boost::multiprecision::cpp_bin_float_50, long double>;
template <typename F>
using wide_of = std::conditional_t<std::is_same_v<F, ContHahnH>, std::complex<long double>, real_wide_of<F>>;

template <typename T>
Jet<T> chain(const Jet<T>& p, const VarJet<T>& v) {
    return {p.value, p.d1 * v.dz, p.d2 * v.dz * v.dz + p.d1 * v.d2z};
}

// Degree-n Jbar uses J^{-n-nu-1/2}: its step data is fixed by the target, so it is run per degree.
// Values and derivatives are in the recursion variable; chain() maps them to the argument.
template <typename F>
std::vector<Jet<scalar_of<F>>> family_sequence(const F& f, int n, double arg, bool with_derivs) {
    using W = wide_of<F>;
    using T = scalar_of<F>;
    using R = real_wide_of<F>;
    const VarJet<W> v = variable<R>(f, arg);
    std::vector<Jet<W>> wide;
    if constexpr (std::is_same_v<F, BesselJbar>) {
        wide.reserve(n + 1);
        for (int deg = 0; deg <= n; ++deg) {
            const double mu = -deg - f.nu - 0.5;
            auto seq = run_recursion<W>([mu](int k) { return bessel_step<R>(mu, k); }, v.z, deg, with_derivs);
            wide.push_back(seq.back());
        }
    } else {
        wide = run_recursion<W>([&f](int k) { return step<R>(f, k); }, v.z, n, with_derivs);
    }
    std::vector<Jet<T>> out;
    out.reserve(wide.size());
    for (const auto& j : wide) out.push_back({static_cast<T>(j.value), static_cast<T>(j.d1), static_cast<T>(j.d2)});
    return out;
}

}  // namespace detail


/// Checks family invariants at degree n and argument arg; throws DomainError.
inline void check_family(const FamilySpec& fam, int n, double arg) {
    detail::check_degree(n);
    std::visit([&](const auto& f) { detail::check(f, n, arg); }, fam);
}

/// Upward three-term recursion from P_0 = 1, P_{-1} = 0.
inline PolyValue eval_poly(const FamilySpec& fam, int n, double arg) {
    check_family(fam, n, arg);
    return std::visit(
        [&](const auto& f) {
            const auto seq = detail::family_sequence(f, n, arg, false);
            return PolyValue{cplx(seq.back().value), n, arg};
        },
        fam);
}

/// Values P_0..P_n at arg.
inline std::vector<cplx> eval_poly_sequence(const FamilySpec& fam, int n, double arg) {
    check_family(fam, n, arg);
    return std::visit(
        [&](const auto& f) {
            const auto seq = detail::family_sequence(f, n, arg, false);
            std::vector<cplx> out;
            out.reserve(seq.size());
            for (const auto& j : seq) out.push_back(cplx(j.value));
            return out;
        },
        fam);
}

/// Real-valued families only: values with first and second derivatives in arg, degrees 0..n.
inline std::vector<Jet<double>> eval_poly_jets(const FamilySpec& fam, int n, double arg) {
    if (std::holds_alternative<ContHahnH>(fam)) throw DomainError("eval_poly_jets: ContHahnH is complex-valued");
    check_family(fam, n, arg);
    return std::visit(
        [&](const auto& f) -> std::vector<Jet<double>> {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, ContHahnH>) {
                return {};
            } else {
                const auto v = detail::variable(f, arg);
                auto seq = detail::family_sequence(f, n, arg, true);
                for (auto& j : seq) j = detail::chain(j, v);
                return seq;
            }
        },
        fam);
}

/// Recursion data of a family (variable-independent part), e.g. for Jacobi matrices.
inline Step<cplx> recursion_step(const FamilySpec& fam, int k) {
    return std::visit(
        [&](const auto& f) -> Step<cplx> {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, BesselJbar>) {
                throw DomainError("recursion_step: BesselJbar has degree-dependent recursion data");
            } else {
                const auto s = detail::step(f, k);
                return {cplx(s.a), cplx(s.b), cplx(s.c)};
            }
        },
        fam);
}

/// Independent evaluation by the terminating hypergeometric sum.
/// Sums run in long double: alternating terms cancel by several digits at moderate degree.
inline PolyValue eval_oracle(const FamilySpec& fam, int n, double arg) {
    using R = long double;
    using C = std::complex<R>;
    check_family(fam, n, arg);
    const R dn = n;
    const R x = arg;
    const int K = n;  // every sum terminates after n terms
    auto visitor = [&](const auto& f) -> cplx {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, BesselJ>) {
            return double(hypergeometric_sum<R>({-dn, dn + 2 * R(f.mu) + 1}, {}, -x, K));
        } else if constexpr (std::is_same_v<F, BesselJbar>) {
            return double(hypergeometric_sum<R>({-dn, -dn - 2 * R(f.nu)}, {}, -x, K));
        } else if constexpr (std::is_same_v<F, LaguerreL>) {
            const R a1 = R(f.alpha) + 1;
            return double(pochhammer(a1, n) / std::tgamma(dn + 1) * hypergeometric_sum<R>({-dn}, {a1}, x, K));
        } else if constexpr (std::is_same_v<F, DualHahnR>) {
            const R p = f.p, q = f.q, N = f.N;
            return double(hypergeometric_sum<R>({-dn, -x, x + p + q + 1}, {p + 1, -N}, 1, K));
        } else if constexpr (std::is_same_v<F, ContDualHahnS>) {
            // (p+ix)_k (p-ix)_k = prod_j ((p+j)^2 + x^2), real for any real x^2.
            const R p = f.p, c = f.c, d = f.d;
            R term = 1, sum = 1;
            for (int k = 0; k < K; ++k) {
                term *= (-dn + k) * ((p + k) * (p + k) + x) / ((p + c + k) * (p + d + k) * (k + 1));
                sum += term;
            }
            return double(sum);
        } else if constexpr (std::is_same_v<F, HahnQ>) {
            const R p = f.p, q = f.q, N = f.N;
            return double(hypergeometric_sum<R>({-dn, dn + p + q + 1, -x}, {p + 1, -N}, 1, K));
        } else if constexpr (std::is_same_v<F, ContHahnH>) {
            // the 3F2 terms can exceed the sum by 1e10 here, beyond what long double holds
            using M = boost::multiprecision::cpp_complex_50;
            const auto m = [](cplx z) { return M(z.real(), z.imag()); };
            const M p = m(f.p), c = m(f.c), d = m(f.d), S = p + m(f.q) + c + d;
            const M a2 = S + (n - 1), a3 = p + M(0.0, arg);
            M term = 1, sum = 1;
            for (int k = 0; k < K; ++k) {
                term *= M(k - n) * (a2 + k) * (a3 + k) / ((p + c + k) * (p + d + k) * M(k + 1));
                sum += term;
            }
            return cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
        } else if constexpr (std::is_same_v<F, MeixnerPollaczekP>) {
            const R lam = f.lambda, th = f.theta;
            const C z = R(1) - std::exp(C(0, -2 * th));
            const C h = hypergeometric_sum<C>({C(-dn), C(lam, x)}, {C(2 * lam)}, z, K);
            return double((pochhammer(2 * lam, n) / std::tgamma(dn + 1) * std::exp(C(0, dn * th)) * h).real());
        } else if constexpr (std::is_same_v<F, MeixnerM>) {
            const R lam = f.lambda, th = f.theta;
            const R z = 1 - std::exp(2 * th);
            return double(pochhammer(2 * lam, n) / std::tgamma(dn + 1) * std::exp(-dn * th) *
                          hypergeometric_sum<R>({-dn, -x}, {2 * lam}, z, K));
        } else {
            throw UnsupportedOracle(std::string(family_name(fam)) + " has no hypergeometric definition");
        }
    };
    return PolyValue{std::visit(visitor, fam), n, arg};
}

}  // namespace tra
