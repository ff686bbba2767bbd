#include "shipbreak/argmax_dist.hpp"

#include <cmath>
#include <string>

#include "shipbreak/errors.hpp"

namespace shipbreak {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// log Phi(z), finite for arbitrarily negative z (asymptotic expansion once
// erfc would underflow).
double log_norm_cdf(double z) {
    if (z > -37.0) return std::log(norm_cdf(z));
    const double z2 = z * z;
    const double series =
        1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2) +
        105.0 / (z2 * z2 * z2 * z2);
    return -0.5 * z2 - 0.5 * std::log(2.0 * M_PI) - std::log(-z) + std::log(series);
}

// Lambda(z, a) = exp(z^2/2 - a^2/2) * Phi(z), evaluated in log space so the
// exponential prefactor never overflows. The combined exponent is bounded by
// -a^2/2 because log Phi(z) <= min(0, -z^2/2 + o(1)).
double lambda(double z, double a) {
    return std::exp(0.5 * z * z - 0.5 * a * a + log_norm_cdf(z));
}

// One-sided mass transfer: with M the maximum of sigma*W(t) - mu*t over
// t >= 0 and theta the time it is attained, the joint law is
//   P(M in dm, theta <= x) = a_side * H(x, m) dm,
//   H(x, m) = Phi((-mu*x - m)/(sigma*sqrt(x)))
//           + exp(-a_side*m) * Phi((mu*x - m)/(sigma*sqrt(x))),
// a_side = 2*mu/sigma^2. This evaluates
//   K(x) = integral_0^inf (1 - exp(-a_other*m)) * H(x, m) dm
// in closed form via the antiderivatives of exp(-c*m)*Phi(+-A - B*m).
double k_mass(double x, double mu, double sigma, double a_side, double a_other) {
    const double sq = std::sqrt(x);
    const double a_val = mu * sq / sigma;     // A
    const double b_val = 1.0 / (sigma * sq);  // B

    const double p1 = (norm_pdf(a_val) - a_val * norm_cdf(-a_val)) / b_val;
    auto p2 = [&](double c) {
        return (norm_cdf(a_val) - lambda(a_val - c / b_val, a_val)) / c;
    };
    auto p3 = [&](double c) {
        return (norm_cdf(-a_val) - lambda(-a_val - c / b_val, a_val)) / c;
    };
    return p1 + p2(a_side) - p3(a_other) - p2(a_side + a_other);
}

void check_params(double xi, double phi) {
    if (!(xi > 0.0) || !std::isfinite(xi) || !(phi > 0.0) || !std::isfinite(phi)) {
        throw ConfigError("argmax distribution needs xi > 0 and phi > 0; got xi = " +
                          std::to_string(xi) + ", phi = " + std::to_string(phi));
    }
}

} // namespace

double break_argmax_cdf(double x, double xi, double phi) {
    check_params(xi, phi);
    // left side: sigma 1, drift 1/2 -> max ~ Exp(1); right side: sigma
    // sqrt(phi), drift xi/2 -> max ~ Exp(xi/phi)
    const double a1 = 1.0;
    const double a2 = xi / phi;
    const double g0 = a2 / (a1 + a2);
    if (x == 0.0) return g0;
    double g;
    if (x > 0.0) {
        g = g0 + a2 * k_mass(x, 0.5 * xi, std::sqrt(phi), a2, a1);
    } else {
        g = g0 - a1 * k_mass(-x, 0.5, 1.0, a1, a2);
    }
    if (g < 0.0) g = 0.0;
    if (g > 1.0) g = 1.0;
    return g;
}

double break_argmax_quantile(double p, double xi, double phi) {
    check_params(xi, phi);
    if (!(p > 0.0) || !(p < 1.0)) {
        throw ConfigError("quantile level must lie in (0, 1); got " +
                          std::to_string(p));
    }
    double lo, hi;
    if (break_argmax_cdf(0.0, xi, phi) >= p) {
        hi = 0.0;
        lo = -1.0;
        while (break_argmax_cdf(lo, xi, phi) >= p && lo > -1e12) lo *= 2.0;
    } else {
        lo = 0.0;
        hi = 1.0;
        while (break_argmax_cdf(hi, xi, phi) < p && hi < 1e12) hi *= 2.0;
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (break_argmax_cdf(mid, xi, phi) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-13 * std::max({1.0, std::fabs(lo), std::fabs(hi)})) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace shipbreak
