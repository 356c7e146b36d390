#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace molmom {

using Complex = std::complex<double>;

// A real number held as sign * exp(log_abs); sign is -1, 0 or +1.
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
    friend SignedLog operator*(SignedLog a, SignedLog b) {
        return {a.log_abs + b.log_abs, a.sign * b.sign};
    }
    friend SignedLog operator/(SignedLog a, SignedLog b) {
        return {a.log_abs - b.log_abs, a.sign * b.sign};
    }
};

// Rising factorial alpha (alpha+1) ... (alpha+k-1); k = 0 gives 1.
SignedLog pochhammer_log(double alpha, int k);
// Falling factorial alpha (alpha-1) ... (alpha-k+1).
SignedLog falling_log(double alpha, int k);
double log_binomial(int n, int k);

// Legendre polynomial L_s(a), Bonnet three-term recurrence.
double legendre(int s, double a);

// Associated Legendre P_l^m(a), 0 <= m <= l, with the (-1)^m Condon-Shortley factor.
double assoc_legendre(int l, int m, double a);

// Orthonormal spherical harmonic Y_l^m(theta, phi), |m| <= l, phase e^{i m phi}.
Complex spherical_harmonic(int l, int m, double theta, double phi);

// All Y_l^m for 0 <= l <= lmax, -l <= m <= l, stored at [l*l + l + m].
void spherical_harmonics_all(int lmax, double theta, double phi, std::vector<Complex>& out);

// 3D Zernike radial coefficient q_kl^v, 0 <= v <= k. Evaluated through log binomials.
double zernike_radial_coeff(int k, int l, int v);

// R_nl(rho) = sum_v q_kl^v rho^(2v+l), 2k = n - l.
double zernike_radial(int n, int l, double rho);

// Harmonic polynomial e_l^m(x,y,z) in the 4*pi-normalised convention:
// e_l^m = sqrt(4 pi) * rho^l * Y_l^m. Evaluated from the Cartesian sum, no angles.
Complex harmonic_poly(int l, int m, double x, double y, double z);

// Z_nl^m(X) = sum_v q_kl^v |X|^(2v) e_l^m(X). Requires n-l even, |m| <= l <= n, |X| <= 1.
// Orthonormal under (3/4pi) * integral over the unit ball.
Complex zernike_poly(int n, int l, int m, double x, double y, double z);

}  // namespace molmom
