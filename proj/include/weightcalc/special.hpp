#ifndef WEIGHTCALC_SPECIAL_HPP
#define WEIGHTCALC_SPECIAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "weightcalc/common.hpp"

namespace weightcalc {

inline constexpr double kPi = 3.14159265358979323846264338328;
inline constexpr double kLog2 = 0.69314718055994530941723212146;

// ln Gamma(x), x > 0.
inline double log_gamma(double x) { return std::lgamma(x); }

// ln j! in log-domain; j >= 0.
inline double log_factorial(int j) { return std::lgamma(static_cast<double>(j) + 1.0); }

// ln Gamma(z) for complex z via the Lanczos approximation (g = 7, 9 terms),
// with the reflection formula for Re z < 1/2.  Real positive arguments are
// routed through std::lgamma for full double accuracy.
inline std::complex<double> log_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() > 0.0) {
        return {std::lgamma(z.real()), 0.0};
    }
    static const double g = 7.0;
    static const double c[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // lnGamma(z) = ln(pi / sin(pi z)) - lnGamma(1 - z)
        const std::complex<double> s = std::sin(kPi * z);
        return std::log(kPi) - std::log(s) - log_gamma(1.0 - z);
    }
    const std::complex<double> zm = z - 1.0;
    std::complex<double> x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (zm + static_cast<double>(i));
    const std::complex<double> t = zm + g + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(x);
}

// Stable ln(sum exp(v_i)); -inf entries are ignored, empty input gives -inf.
inline double log_sum_exp(const std::vector<double>& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// Golden-section maximization of a unimodal f on [a, b] to abscissa
// tolerance tol.  Returns (argmax, max).
inline std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                            double a, double b, double tol) {
    static const double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = f(xm);
    if (f1 >= f2 && f1 >= fm) return {x1, f1};
    if (f2 >= fm) return {x2, f2};
    return {xm, fm};
}

// Adaptive Simpson quadrature for complex-valued integrands on [a, b].
// Tolerance is treated as relative to the accumulated magnitude, with a tiny
// absolute floor.  Returns (integral, error estimate).
namespace detail {

inline std::complex<double> simpson(const std::function<std::complex<double>(double)>& f,
                                    double a, double fa_w, std::complex<double> fa,
                                    std::complex<double> fm, std::complex<double> fb,
                                    double b, double tol, std::complex<double> whole,
                                    int depth, double& err_acc) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const std::complex<double> flm = f(lm), frm = f(rm);
    const std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const std::complex<double> delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    (void)fa_w;
    return simpson(f, a, 0, fa, flm, fm, m, 0.5 * tol, left, depth - 1, err_acc) +
           simpson(f, m, 0, fm, frm, fb, b, 0.5 * tol, right, depth - 1, err_acc);
}

}  // namespace detail

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate;
};

inline QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                           double a, double b, double rel_tol,
                                           double abs_floor = 1e-300) {
    const std::complex<double> fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = std::max(abs_floor, rel_tol * std::abs(whole));
    double err = 0.0;
    const std::complex<double> v =
        detail::simpson(f, a, 0, fa, fm, fb, b, tol, whole, 40, err);
    return {v, err};
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_SPECIAL_HPP
