#ifndef FRAGSTOCH_QUADRATURE_HPP
#define FRAGSTOCH_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace fragstoch {

/// Raised when a series or quadrature cannot reach its requested tolerance.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, double noise_floor,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Halving the tolerance at every split eventually demands more than
    // the integrand's own evaluation noise allows; once the local
    // correction is negligible on the scale of the whole integral,
    // subdividing further cannot help, so accept.
    if (depth <= 0) {
        if (std::fabs(delta) > 15.0 * tol && std::fabs(delta) > noise_floor)
            throw numeric_error("adaptive quadrature: recursion limit before tolerance");
        return left + right + delta / 15.0;
    }
    if (std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= noise_floor)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, noise_floor,
                                depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, noise_floor,
                                depth - 1);
}

} // namespace detail

/// Adaptive Simpson on a finite interval.
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // corrections below rounding level of the overall mass are noise
    const double noise_floor =
        1e-16 * (b - a) * (std::fabs(fa) + 4.0 * std::fabs(fm) + std::fabs(fb)) / 6.0;
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, noise_floor,
                                        max_depth);
}

/// Integral over (a, infinity) via the substitution x = a + u/(1-u).
template <typename F>
double integrate_to_inf(const F& f, double a, double tol = 1e-10) {
    auto g = [&](double u) {
        const double w = 1.0 - u;
        const double x = a + u / w;
        const double v = f(x);
        return v / (w * w);
    };
    // endpoint u=1 maps to infinity; the integrand must vanish there
    return integrate(g, 0.0, 1.0 - 1e-12, tol);
}

} // namespace fragstoch

#endif
