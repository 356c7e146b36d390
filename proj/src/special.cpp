#include "molmom/special.hpp"

#include <numbers>
#include <string>

#include "molmom/error.hpp"

namespace molmom {

SignedLog pochhammer_log(double alpha, int k) {
    if (k < 0) throw DomainError("pochhammer order must be >= 0");
    SignedLog r{0.0, 1};
    for (int i = 0; i < k; ++i) {
        const double f = alpha + i;
        if (f == 0.0) return {0.0, 0};
        r.log_abs += std::log(std::abs(f));
        if (f < 0) r.sign = -r.sign;
    }
    return r;
}

SignedLog falling_log(double alpha, int k) {
    if (k < 0) throw DomainError("falling factorial order must be >= 0");
    return pochhammer_log(alpha - k + 1, k);
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) throw DomainError("binomial out of range");
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double legendre(int s, double a) {
    if (s < 0) throw DomainError("legendre order must be >= 0");
    if (s == 0) return 1.0;
    double prev = 1.0, cur = a;
    for (int k = 1; k < s; ++k) {
        const double next = ((2.0 * k + 1.0) * a * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double assoc_legendre(int l, int m, double a) {
    if (m < 0 || m > l) throw DomainError("assoc_legendre needs 0 <= m <= l");
    // P_m^m = (-1)^m (2m-1)!! (1-a^2)^{m/2}
    double pmm = 1.0;
    const double somx2 = std::sqrt(std::max(0.0, (1.0 - a) * (1.0 + a)));
    double fact = 1.0;
    for (int i = 1; i <= m; ++i) {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if (l == m) return pmm;
    double pmm1 = a * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmm1;
    double pll = 0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = (a * (2.0 * ll - 1.0) * pmm1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmm1;
        pmm1 = pll;
    }
    return pll;
}

namespace {

Complex ipow(Complex z, int k) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

double sh_norm(int l, int m) {
    // sqrt((2l+1)/(4pi) * (l-m)!/(l+m)!)
    return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) *
                     std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0)));
}

}  // namespace

Complex spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) throw DomainError("spherical_harmonic needs |m| <= l");
    const int am = std::abs(m);
    const Complex y = sh_norm(l, am) * assoc_legendre(l, am, std::cos(theta)) *
                      std::polar(1.0, am * phi);
    if (m >= 0) return y;
    return (am % 2 ? -1.0 : 1.0) * std::conj(y);
}

void spherical_harmonics_all(int lmax, double theta, double phi, std::vector<Complex>& out) {
    out.assign(static_cast<std::size_t>((lmax + 1) * (lmax + 1)), Complex{});
    const double c = std::cos(theta);
    const double sn = std::sqrt(std::max(0.0, (1.0 - c) * (1.0 + c)));
    // column-wise recurrence over l for each m >= 0
    double pmm = 1.0;
    for (int m = 0; m <= lmax; ++m) {
        if (m > 0) pmm *= -(2.0 * m - 1.0) * sn;
        const Complex phase = std::polar(1.0, m * phi);
        double p_prev = 0.0, p_cur = pmm;
        for (int l = m; l <= lmax; ++l) {
            if (l == m + 1) {
                p_prev = p_cur;
                p_cur = c * (2.0 * m + 1.0) * pmm;
            } else if (l > m + 1) {
                const double next = (c * (2.0 * l - 1.0) * p_cur - (l + m - 1.0) * p_prev) / (l - m);
                p_prev = p_cur;
                p_cur = next;
            }
            const Complex y = sh_norm(l, m) * p_cur * phase;
            out[static_cast<std::size_t>(l * l + l + m)] = y;
            if (m > 0) out[static_cast<std::size_t>(l * l + l - m)] = (m % 2 ? -1.0 : 1.0) * std::conj(y);
        }
    }
}

double zernike_radial_coeff(int k, int l, int v) {
    if (k < 0 || l < 0 || v < 0 || v > k) throw DomainError("zernike_radial_coeff needs 0 <= v <= k");
    const double log_mag = -2.0 * k * std::log(2.0) + 0.5 * std::log((2.0 * l + 4.0 * k + 3.0) / 3.0) +
                           log_binomial(2 * k, k) + log_binomial(k, v) +
                           log_binomial(2 * (k + l + v) + 1, 2 * k) - log_binomial(k + l + v, k);
    const int sign = ((k + v) % 2) ? -1 : 1;
    return sign * std::exp(log_mag);
}

double zernike_radial(int n, int l, double rho) {
    if (l < 0 || l > n || (n - l) % 2) throw DomainError("zernike_radial needs 0 <= l <= n, n-l even");
    const int k = (n - l) / 2;
    const double r2 = rho * rho;
    double sum = 0, pw = std::pow(rho, l);
    for (int v = 0; v <= k; ++v) {
        sum += zernike_radial_coeff(k, l, v) * pw;
        pw *= r2;
    }
    return sum;
}

Complex harmonic_poly(int l, int m, double x, double y, double z) {
    if (l < 0 || std::abs(m) > l) throw DomainError("harmonic_poly needs |m| <= l");
    if (m < 0) return ((-m) % 2 ? -1.0 : 1.0) * std::conj(harmonic_poly(l, -m, x, y, z));
    const double norm = std::exp(0.5 * (std::log(2.0 * l + 1.0) + std::lgamma(l + m + 1.0) +
                                        std::lgamma(l - m + 1.0)) -
                                 std::lgamma(l + 1.0));
    const double rho_xy2 = x * x + y * y;
    double sum = 0;
    for (int mu = 0; mu <= (l - m) / 2; ++mu) {
        const double coeff = std::exp(log_binomial(l, mu) + log_binomial(l - mu, m + mu));
        sum += coeff * std::pow(-rho_xy2 / 4.0, mu) * std::pow(z, l - m - 2 * mu);
    }
    return norm * ipow(Complex(-x, -y) / 2.0, m) * sum;
}

Complex zernike_poly(int n, int l, int m, double x, double y, double z) {
    if (l < 0 || l > n || (n - l) % 2) throw DomainError("zernike_poly needs 0 <= l <= n with n-l even");
    if (std::abs(m) > l) throw DomainError("zernike_poly needs |m| <= l");
    const double r2 = x * x + y * y + z * z;
    if (r2 > 1.0 + 1e-12) throw DomainError("zernike_poly point outside the unit ball");
    const int k = (n - l) / 2;
    double radial = 0, pw = 1.0;
    for (int v = 0; v <= k; ++v) {
        radial += zernike_radial_coeff(k, l, v) * pw;
        pw *= r2;
    }
    return radial * harmonic_poly(l, m, x, y, z);
}

}  // namespace molmom
