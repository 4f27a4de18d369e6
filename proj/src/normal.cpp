#include "wfoot/normal.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wfoot::num {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488016887242097;
constexpr double kTwoPi = 6.2831853071795864769252867665590;

}  // namespace

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z / kSqrt2);
}

// Wichura (1988), algorithm AS 241, routine PPND16.
double norm_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
        throw std::domain_error("norm_quantile: p must lie in [0,1]");
    }
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) *
                        r +
                    4.5921953931549871457e4) *
                       r +
                   1.3731693765509461125e4) *
                      r +
                  1.9715909503065514427e3) *
                     r +
                 1.3314166789178437745e2) *
                    r +
                3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) *
                        r +
                    2.1213794301586595867e4) *
                       r +
                   5.3941960214247511077e3) *
                      r +
                  6.8718700749205790830e2) *
                     r +
                 4.2313330701600911252e1) *
                    r +
                1.0);
    }

    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) *
                         r +
                     1.27045825245236838258e0) *
                        r +
                    3.64784832476320460504e0) *
                       r +
                   5.76949722146069140550e0) *
                      r +
                  4.63033784615654529590e0) *
                     r +
                 1.42343711074968357734e0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) *
                         r +
                     1.48103976427480074590e-1) *
                        r +
                    6.89767334985100004550e-1) *
                       r +
                   1.67638483018380384940e0) *
                      r +
                  2.05319162663775882187e0) *
                     r +
                 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) *
                         r +
                     2.65321895265761230930e-2) *
                        r +
                    2.96560571828504891230e-1) *
                       r +
                   1.78482653991729133580e0) *
                      r +
                  5.46378491116411436990e0) *
                     r +
                 6.65790464350110377720e0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) *
                         r +
                     7.86869131145613259100e-4) *
                        r +
                    1.48753612908506148525e-2) *
                       r +
                   1.36929880922735805310e-1) *
                      r +
                  5.99832206555887937690e-1) *
                     r +
                 1.0);
    }
    return (q < 0.0) ? -value : value;
}

double norm_upper_quantile(double alpha) {
    return norm_quantile(1.0 - alpha);
}

namespace {

// P(X > dh, Y > dk). Port of Alan Genz's BVND (Drezner & Wesolowsky 1990,
// refined by Genz 2004): Gauss-Legendre on the arcsine form for |r| < 0.925,
// the tail-corrected form near |r| = 1.
double bvn_upper(double dh, double dk, double r) {
    if (std::isinf(dh) || std::isinf(dk)) {
        if (dh == std::numeric_limits<double>::infinity() ||
            dk == std::numeric_limits<double>::infinity()) {
            return 0.0;
        }
        if (dh == -std::numeric_limits<double>::infinity()) {
            return (dk == -std::numeric_limits<double>::infinity()) ? 1.0 : norm_cdf(-dk);
        }
        return norm_cdf(-dh);
    }
    if (r == 0.0) return norm_cdf(-dh) * norm_cdf(-dk);

    // Gauss-Legendre nodes/weights on [0,1], folded to 2n points below.
    static constexpr std::array<double, 3> w6{0.1713244923791705, 0.3607615730481384,
                                              0.4679139345726904};
    static constexpr std::array<double, 3> x6{0.9324695142031522, 0.6612093864662647,
                                              0.2386191860831970};
    static constexpr std::array<double, 6> w12{0.04717533638651177, 0.1069393259953183,
                                               0.1600783285433464,  0.2031674267230659,
                                               0.2334925365383547,  0.2491470458134029};
    static constexpr std::array<double, 6> x12{0.9815606342467191, 0.9041172563704750,
                                               0.7699026741943050, 0.5873179542866171,
                                               0.3678314989981802, 0.1252334085114692};
    static constexpr std::array<double, 10> w20{
        0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
        0.1019301198172404,  0.1181945319615184,  0.1316886384491766,  0.1420961093183821,
        0.1491729864726037,  0.1527533871307259};
    static constexpr std::array<double, 10> x20{
        0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
        0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
        0.2277858511416451, 0.07652652113349733};

    const double* wr = w20.data();
    const double* xr = x20.data();
    int ng = 10;
    if (std::fabs(r) < 0.3) {
        wr = w6.data();
        xr = x6.data();
        ng = 3;
    } else if (std::fabs(r) < 0.75) {
        wr = w12.data();
        xr = x12.data();
        ng = 6;
    }

    double h = dh;
    double k = dk;
    double hk = h * k;
    double bvn = 0.0;

    if (std::fabs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r) / 2.0;
        for (int i = 0; i < ng; ++i) {
            for (int is = -1; is <= 1; is += 2) {
                const double sn = std::sin(asr * (is * xr[i] + 1.0));
                bvn += wr[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / kTwoPi + norm_cdf(-h) * norm_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (std::fabs(r) < 1.0) {
            const double as = 1.0 - r * r;
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 80.0;
            const double asr0 = -(bs / as + hk) / 2.0;
            if (asr0 > -100.0) {
                bvn = a * std::exp(asr0) *
                      (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
            }
            if (hk > -100.0) {
                const double b = std::sqrt(bs);
                const double sp = std::sqrt(kTwoPi) * norm_cdf(-b / a);
                bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
            }
            a /= 2.0;
            for (int i = 0; i < ng; ++i) {
                for (int is = -1; is <= 1; is += 2) {
                    const double xi = a * (is * xr[i] + 1.0);
                    const double xs = xi * xi;
                    const double rs = std::sqrt(1.0 - xs);
                    const double asr = -(bs / xs + hk) / 2.0;
                    if (asr > -100.0) {
                        const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                        const double ep =
                            std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
                        bvn += a * wr[i] * std::exp(asr) * (ep - sp);
                    }
                }
            }
            bvn = -bvn / kTwoPi;
        }
        if (r > 0.0) {
            bvn += norm_cdf(-std::max(h, k));
        } else if (h >= k) {
            bvn = -bvn;
        } else {
            double l;
            if (h < 0.0) {
                l = norm_cdf(k) - norm_cdf(h);
            } else {
                l = norm_cdf(-h) - norm_cdf(-k);
            }
            bvn = l - bvn;
        }
    }
    return std::max(0.0, std::min(1.0, bvn));
}

}  // namespace

double bvn_cdf(double h, double k, double r) {
    if (std::isnan(h) || std::isnan(k)) {
        throw std::domain_error("bvn_cdf: NaN argument");
    }
    if (r < -1.0 || r > 1.0) {
        throw std::domain_error("bvn_cdf: correlation outside [-1,1]");
    }
    if (r == 1.0) return norm_cdf(std::min(h, k));
    if (r == -1.0) return std::max(0.0, norm_cdf(h) - norm_cdf(-k));
    return bvn_upper(-h, -k, r);
}

}  // namespace wfoot::num
