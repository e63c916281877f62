#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <initializer_list>
#include <numbers>
#include <span>
#include <type_traits>

#include "tra/errors.hpp"

namespace tra {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
concept Scalar = std::floating_point<T> || is_complex<T>::value;

/// Shifted factorial (a)_n = a(a+1)...(a+n-1); (a)_0 = 1.
template <Scalar T>
T pochhammer(T a, int n) {
    if (n < 0) throw DomainError("pochhammer: negative count");
    T result{1};
    for (int k = 0; k < n; ++k) result *= a + T(k);
    return result;
}

inline double factorial(int n) {
    if (n < 0) throw DomainError("factorial: negative argument");
    return std::tgamma(static_cast<double>(n) + 1.0);
}

/// Truncated generalized hypergeometric sum  sum_{k<=k_max} prod(a)_k / prod(b)_k z^k / k!.
/// With -n among the numerators and k_max >= n the sum is the exact terminating series.
template <Scalar T>
T hypergeometric_sum(std::span<const T> numer, std::span<const T> denom, T z, int k_max) {
    T term{1};
    T sum{1};
    for (int k = 0; k < k_max; ++k) {
        T ratio = z / T(k + 1);
        for (const T& a : numer) ratio *= a + T(k);
        for (const T& b : denom) {
            const T d = b + T(k);
            if (d == T(0)) throw ZeroDivision("hypergeometric_sum: vanishing denominator parameter");
            ratio /= d;
        }
        term *= ratio;
        if (term == T(0)) break;
        sum += term;
    }
    return sum;
}

template <Scalar T>
T hypergeometric_sum(std::initializer_list<T> numer, std::initializer_list<T> denom, T z, int k_max) {
    return hypergeometric_sum<T>(std::span<const T>(numer.begin(), numer.size()),
                                 std::span<const T>(denom.begin(), denom.size()), z, k_max);
}

/// log Gamma for complex argument (Lanczos, g = 7, nine terms; ~1e-15 relative).
inline std::complex<double> lgamma_complex(std::complex<double> z) {
    using std::numbers::pi;
    static constexpr std::array<double, 9> coeff = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - lgamma_complex(1.0 - z);
    }
    z -= 1.0;
    std::complex<double> acc = coeff[0];
    for (std::size_t i = 1; i < coeff.size(); ++i) acc += coeff[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

/// |Gamma(lambda + i y)|^2 for real lambda > 0.
inline double abs_gamma_squared(double lambda, double y) {
    return std::exp(2.0 * lgamma_complex({lambda, y}).real());
}

}  // namespace tra
