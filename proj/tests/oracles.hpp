#pragma once

// Brute-force reference integrals used by the tests. Nothing here calls the library's
// quadrature or operator code.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Gauss-Legendre nodes/weights on [a, b] by Newton on the three-term recurrence.
inline std::vector<std::pair<double, double>> gauss(int n, double a, double b)
{
    std::vector<std::pair<double, double>> r(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        r[i] = {0.5 * (a + b) + 0.5 * (b - a) * x, (b - a) / ((1.0 - x * x) * dp * dp)};
    }
    return r;
}

/// int_a^b f with composite Gauss-Legendre.
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 64, int n = 16)
{
    const auto q = gauss(n, 0.0, 1.0);
    double s = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        for (const auto& [x, w] : q)
            s += w * h * f(a + h * (p + x));
    return s;
}

/// int over the unit disc of f(eta) dA(eta), in polar coordinates centred at zeta:
/// eta = zeta + rho e^{i alpha}. The callback receives (eta, rho, alpha) and must include
/// the Jacobian rho, which is what absorbs 1/(zeta - eta) and log|zeta - eta| singularities.
inline cplx disc_integral_about(cplx zeta, const std::function<cplx(cplx, double, double)>& f, int nalpha = 192,
                                int nrho = 48)
{
    // substitution rho = R s^2 concentrates nodes near the centre
    const auto q = gauss(nrho, 0.0, 1.0);
    cplx acc = 0.0;
    for (int i = 0; i < nalpha; ++i) {
        const double a = 2.0 * pi * i / nalpha;
        const cplx e = std::polar(1.0, a);
        const double b = std::real(std::conj(zeta) * e);
        const double R = -b + std::sqrt(b * b + 1.0 - std::norm(zeta));
        for (const auto& [s, w] : q) {
            const double rho = R * s * s;
            acc += w * 2.0 * R * s * f(zeta + rho * e, rho, a);
        }
    }
    return acc * (2.0 * pi / nalpha);
}

/// Solid Cauchy transform (1/pi) int_D f(w) / (z - w) dA on the unit disc.
inline cplx cauchy_transform(const std::function<cplx(cplx)>& f, cplx z)
{
    return disc_integral_about(z, [&](cplx w, double, double a) { return -f(w) * std::polar(1.0, -a); }) / pi;
}

/// Canonical T on the disc: (1/pi) int [wbar / (1 - z wbar) + 1 / (z - w)] f(w) dA.
inline cplx canonical_T(const std::function<cplx(cplx)>& f, cplx z)
{
    const cplx smooth = disc_integral_about(z, [&](cplx w, double rho, double) {
        return rho * std::conj(w) / (1.0 - z * std::conj(w)) * f(w);
    });
    return smooth / pi + cauchy_transform(f, z);
}

/// Dirichlet solution operator: (2/pi) int log|(z - w) / (1 - z wbar)| f(w) dA, so Delta G f = 4 f.
inline cplx dirichlet_G(const std::function<cplx(cplx)>& f, cplx z)
{
    return disc_integral_about(z, [&](cplx w, double rho, double) {
               return rho * (std::log(rho) - std::log(std::abs(1.0 - z * std::conj(w)))) * f(w);
           }) *
           (2.0 / pi);
}

/// Bergman projection via the kernel 1 / (pi (1 - z wbar)^2). The kernel peaks sharply for
/// z near the circle, hence the finer default rule.
inline cplx bergman_P(const std::function<cplx(cplx)>& f, cplx z, int nalpha = 768, int nrho = 160)
{
    return disc_integral_about(
        z,
        [&](cplx w, double rho, double) {
            const cplx d = 1.0 - z * std::conj(w);
            return rho * f(w) / (pi * d * d);
        },
        nalpha, nrho);
}

/// A polynomial conformal map phi(zeta) = sum c_k zeta^k and its derivative.
struct Map
{
    std::vector<cplx> c;
    cplx operator()(cplx z) const
    {
        cplx s = 0.0;
        for (std::size_t k = c.size(); k-- > 0;)
            s = s * z + c[k];
        return s;
    }
    cplx d1(cplx z) const
    {
        cplx s = 0.0;
        for (std::size_t k = c.size(); k-- > 1;)
            s = s * z + static_cast<double>(k) * c[k];
        return s;
    }
};

/// (1/pi) int_{phi(D)} f(w) / (phi(zeta) - w) dA(w), pulled back to the disc.
inline cplx cauchy_transform(const Map& phi, const std::function<cplx(cplx)>& f, cplx zeta)
{
    const cplx z = phi(zeta);
    return disc_integral_about(zeta, [&](cplx eta, double rho, double) {
               const cplx w = phi(eta);
               return rho * f(w) * std::norm(phi.d1(eta)) / (z - w);
           }) /
           pi;
}

/// T on phi(D) from d/dz of the pulled-back Green's function.
inline cplx canonical_T(const Map& phi, const std::function<cplx(cplx)>& f, cplx zeta)
{
    const cplx I = disc_integral_about(zeta, [&](cplx eta, double rho, double) {
        const cplx k = std::conj(eta) / (1.0 - zeta * std::conj(eta)) + 1.0 / (zeta - eta);
        return rho * k * f(phi(eta)) * std::norm(phi.d1(eta));
    });
    return I / (pi * phi.d1(zeta));
}

/// G on phi(D) from the pulled-back Green's function.
inline cplx dirichlet_G(const Map& phi, const std::function<cplx(cplx)>& f, cplx zeta)
{
    return disc_integral_about(zeta, [&](cplx eta, double rho, double) {
               return rho * (std::log(rho) - std::log(std::abs(1.0 - zeta * std::conj(eta)))) * f(phi(eta)) *
                      std::norm(phi.d1(eta));
           }) *
           (2.0 / pi);
}

/// P on phi(D) with K_D(z, w) = K(zeta, eta) / (phi'(zeta) conj phi'(eta)).
inline cplx bergman_P(const Map& phi, const std::function<cplx(cplx)>& f, cplx zeta)
{
    const cplx I = disc_integral_about(zeta, [&](cplx eta, double rho, double) {
        const cplx d = 1.0 - zeta * std::conj(eta);
        return rho * f(phi(eta)) * phi.d1(eta) / (pi * d * d);
    });
    return I / phi.d1(zeta);
}

} // namespace oracle
