#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "dbar/errors.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

using cplx = std::complex<double>;

/// The counterexample f = (z2 - 1)^{k - 2/p} dzbar_1 on the bidisc (z2^{k-1} log form when p = 2),
/// with arg(z2 - 1) taken in (pi/2, 3pi/2).
struct SharpnessConfig
{
    int k = 1;
    double p = 4.0;
    std::vector<double> q{2.0, 3.0};
    std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
    bool diagnostic_row = true; ///< also tabulate q = p
    int r_nodes = 32;           ///< GL nodes for the r integral over (0, 1)
    int panel_nodes = 16;       ///< GL nodes per panel of the z2 quadrature

    void validate() const
    {
        if (k < 0)
            throw ConfigError("sharpness: k must be nonnegative");
        if (!(p > 1.0) || !std::isfinite(p))
            throw ConfigError("sharpness: p must lie in (1, infinity)");
        if (q.empty() || eps.empty())
            throw ConfigError("sharpness: q and eps lists must be nonempty");
        for (double v : q)
            if (!(v > 1.0) || !(v < p))
                throw ConfigError("sharpness: every q must satisfy 1 < q < p");
        for (double e : eps)
            if (!(e > 0.0) || !(e < 1.0))
                throw ConfigError("sharpness: every eps must lie in (0, 1)");
        if (r_nodes < 2 || panel_nodes < 2)
            throw ConfigError("sharpness: quadrature sizes must be at least 2");
    }

    double exponent() const { return k - 2.0 / p; }
    bool log_form() const { return p == 2.0; }
};

namespace detail {

/// log(x) with arg in [0, 2 pi); on x = z2 - 1, z2 in the disc, this is the (pi/2, 3pi/2) branch.
inline cplx branch_log(cplx x)
{
    double a = std::atan2(x.imag(), x.real());
    if (a < 0.0)
        a += 2.0 * std::numbers::pi;
    return {std::log(std::abs(x)), a};
}

} // namespace detail

/// j-th derivative in z2 of the datum at z2 (j = 0 is the datum).
inline cplx datum_derivative(const SharpnessConfig& cfg, cplx z2, int j)
{
    const cplx x = z2 - 1.0;
    if (x == cplx{})
        throw DomainError("sharpness datum evaluated at the branch point z2 = 1");
    const cplx lx = detail::branch_log(x);
    if (!cfg.log_form()) {
        // s (s-1) ... (s-j+1) x^{s-j}
        const double s = cfg.exponent();
        double c = 1.0;
        for (int i = 0; i < j; ++i)
            c *= s - i;
        return c * std::exp((s - j) * lx);
    }
    // Leibniz on x^m log x, m = k - 1:  sum_i C(j,i) (x^m)^{(j-i)} (log x)^{(i)}
    const int m = cfg.k - 1;
    auto power_derivative = [&](int order) {
        double c = 1.0;
        for (int i = 0; i < order; ++i)
            c *= m - i;
        return c * std::pow(x, m - order);
    };
    cplx acc = power_derivative(j) * lx;
    double binom = 1.0;
    double fact = 1.0; // (i-1)!
    for (int i = 1; i <= j; ++i) {
        binom = binom * (j - i + 1) / i;
        if (i > 1)
            fact *= i - 1;
        const double sign = (i % 2 == 1) ? 1.0 : -1.0;
        acc += binom * power_derivative(j - i) * (sign * fact) * std::pow(x, -i);
    }
    return acc;
}

inline cplx datum(const SharpnessConfig& cfg, cplx z2) { return datum_derivative(cfg, z2, 0); }

/// int over {z2 in disc : |z2 - 1| > eps} of h(z2) dA, in polar coordinates about 1:
/// z2 = 1 + rho e^{i(pi + beta)}, |beta| < acos(eps/2), eps < rho < 2 cos beta, rho = e^t.
template <class H>
double punctured_disc_integral(H&& h, double eps, int panel_nodes)
{
    const auto ref = gauss_legendre(panel_nodes, 0.0, 1.0);
    const double beta_max = std::acos(eps / 2.0);
    // beta panels graded geometrically toward +-beta_max, where the rho range closes
    std::vector<double> cuts{0.0};
    const double finest = std::max(eps * 1e-2, 1e-14);
    for (double d = beta_max / 2.0; d > finest; d /= 2.0)
        cuts.push_back(beta_max - d);
    cuts.push_back(beta_max);

    double total = 0.0;
    for (int side : {-1, 1}) {
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double b0 = cuts[c];
            const double b1 = cuts[c + 1];
            for (int ib = 0; ib < panel_nodes; ++ib) {
                const double beta = side * (b0 + (b1 - b0) * ref.nodes[ib]);
                const double wb = (b1 - b0) * ref.weights[ib];
                const double rho_max = 2.0 * std::cos(beta);
                if (rho_max <= eps)
                    continue;
                const double t0 = std::log(eps);
                const double t1 = std::log(rho_max);
                const int panels = std::max(1, static_cast<int>(std::ceil(t1 - t0)));
                const double dt = (t1 - t0) / panels;
                const cplx dir = std::polar(1.0, std::numbers::pi + beta);
                double inner = 0.0;
                for (int pnl = 0; pnl < panels; ++pnl) {
                    for (int it = 0; it < panel_nodes; ++it) {
                        const double t = t0 + dt * (pnl + ref.nodes[it]);
                        const double rho = std::exp(t);
                        inner += dt * ref.weights[it] * rho * rho * h(1.0 + rho * dir);
                    }
                }
                total += wb * inner;
            }
        }
    }
    return total;
}

struct DatumNormRow
{
    double q = 0.0;
    double eps = 0.0;
    double norm_q = 0.0; ///< ||f||^q of W^{k,q} on the bidisc minus {|z2 - 1| <= eps}
    bool diagnostic = false;
};

/// Only d/dz2 derivatives of f_1 are nonzero; the z1 integral contributes the area pi.
inline std::vector<DatumNormRow> datum_sobolev_norms(const SharpnessConfig& cfg)
{
    cfg.validate();
    std::vector<double> qs = cfg.q;
    if (cfg.diagnostic_row)
        qs.push_back(cfg.p);
    std::vector<DatumNormRow> rows;
    for (std::size_t iq = 0; iq < qs.size(); ++iq) {
        const double q = qs[iq];
        for (double e : cfg.eps) {
            double acc = 0.0;
            for (int j = 0; j <= cfg.k; ++j)
                acc += punctured_disc_integral(
                    [&](cplx z2) { return std::pow(std::abs(datum_derivative(cfg, z2, j)), q); }, e, cfg.panel_nodes);
            rows.push_back({q, e, std::numbers::pi * acc, iq >= cfg.q.size()});
        }
    }
    return rows;
}

struct ObstructionRow
{
    double eps = 0.0;
    double norm_p = 0.0; ///< ||r^2 (z2 - 1)^{-2/p}||^p over (0,1) x (disc minus {|z2 - 1| <= eps})
};

inline std::vector<ObstructionRow> circle_average_obstruction(const SharpnessConfig& cfg)
{
    cfg.validate();
    const auto rq = gauss_legendre(cfg.r_nodes, 0.0, 1.0);
    double rint = 0.0;
    for (int i = 0; i < cfg.r_nodes; ++i)
        rint += rq.weights[i] * std::pow(rq.nodes[i], 2.0 * cfg.p);
    std::vector<ObstructionRow> rows;
    for (double e : cfg.eps) {
        const double z2int = punctured_disc_integral(
            [&](cplx z2) {
                const cplx w = std::exp((-2.0 / cfg.p) * detail::branch_log(z2 - 1.0));
                return std::pow(std::abs(w), cfg.p);
            },
            e, cfg.panel_nodes);
        rows.push_back({e, rint * z2int});
    }
    return rows;
}

struct LogFit
{
    double a = 0.0;
    double b = 0.0;
    double r2 = 0.0;
};

/// Least squares value = a + b ln(1/eps).
inline LogFit fit_log_growth(const std::vector<ObstructionRow>& rows)
{
    const auto n = static_cast<double>(rows.size());
    if (rows.size() < 2)
        throw ConfigError("log fit needs at least two eps values");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        const double x = std::log(1.0 / r.eps);
        sx += x;
        sy += r.norm_p;
        sxx += x * x;
        sxy += x * r.norm_p;
    }
    LogFit f;
    f.b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.a = (sy - f.b * sx) / n;
    const double mean = sy / n;
    double ss_res = 0, ss_tot = 0;
    for (const auto& r : rows) {
        const double pred = f.a + f.b * std::log(1.0 / r.eps);
        ss_res += (r.norm_p - pred) * (r.norm_p - pred);
        ss_tot += (r.norm_p - mean) * (r.norm_p - mean);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

/// max |trapezoid(oint u dz1) - 2 pi i r^2 (z2 - 1)^{k - 2/p}| for u = (z2 - 1)^{k - 2/p} zbar_1,
/// relative to the exact value, over a few (r, z2).
inline double cauchy_step_check(const SharpnessConfig& cfg, int points = 4096)
{
    cfg.validate();
    const std::vector<double> radii{0.25, 0.5, 0.9};
    const std::vector<cplx> z2s{{0.0, 0.0}, {0.5, 0.3}, {-0.4, -0.6}, {0.9, -0.1}};
    double worst = 0.0;
    for (double r : radii) {
        for (cplx z2 : z2s) {
            const cplx a = datum(cfg, z2);
            cplx acc{};
            for (int i = 0; i < points; ++i) {
                const cplx z1 = std::polar(r, 2.0 * std::numbers::pi * i / points);
                const cplx dz1 = cplx(0.0, 1.0) * z1 * (2.0 * std::numbers::pi / points);
                acc += a * std::conj(z1) * dz1;
            }
            const cplx exact = 2.0 * std::numbers::pi * cplx(0.0, 1.0) * r * r * a;
            worst = std::max(worst, std::abs(acc - exact) / std::abs(exact));
        }
    }
    return worst;
}

struct SharpnessReport
{
    std::vector<DatumNormRow> datum_rows;
    std::vector<ObstructionRow> obstruction_rows;
    LogFit fit;
    std::vector<double> tail_change; ///< per q < p: relative change between the two smallest eps
    std::vector<double> decade_increments; ///< obstruction(eps/10) - obstruction(eps), by decade
    bool monotone = false;
    double cauchy_residual = 0.0;
    bool pass = false;
    std::string detail;
};

/// PASS iff every q < p norm settles (tail change <= 1%) and the obstruction grows like b ln(1/eps)
/// with b > 0 and R^2 >= 0.99.
inline SharpnessReport sharpness_verdict(const SharpnessConfig& cfg)
{
    cfg.validate();
    SharpnessReport rep;
    rep.datum_rows = datum_sobolev_norms(cfg);
    rep.obstruction_rows = circle_average_obstruction(cfg);
    if (rep.obstruction_rows.size() < 2)
        throw ConfigError("sharpness verdict needs at least two eps values");
    rep.fit = fit_log_growth(rep.obstruction_rows);
    rep.cauchy_residual = cauchy_step_check(cfg);

    // eps sorted descending for the tail and monotonicity checks
    std::vector<double> eps = cfg.eps;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    auto datum_at = [&](double q, double e) {
        for (const auto& r : rep.datum_rows)
            if (r.q == q && r.eps == e && !r.diagnostic)
                return r.norm_q;
        throw Error("inconsistent sharpness tables");
    };
    bool converged = true;
    for (double q : cfg.q) {
        const double a = datum_at(q, eps[eps.size() - 2]);
        const double b = datum_at(q, eps.back());
        const double change = std::abs(b - a) / std::abs(b);
        rep.tail_change.push_back(change);
        converged = converged && change <= 0.01;
    }
    auto obstruction_at = [&](double e) {
        for (const auto& r : rep.obstruction_rows)
            if (r.eps == e)
                return r.norm_p;
        throw Error("inconsistent sharpness tables");
    };
    rep.monotone = true;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const double inc = obstruction_at(eps[i + 1]) - obstruction_at(eps[i]);
        rep.decade_increments.push_back(inc);
        rep.monotone = rep.monotone && inc > 0.0;
    }
    const bool grows = rep.fit.b > 0.0 && rep.fit.r2 >= 0.99;
    rep.pass = converged && grows;
    rep.detail = std::string(converged ? "norms converge" : "norms do not converge") + "; " +
                 (grows ? "obstruction grows like ln(1/eps)" : "obstruction log fit fails");
    return rep;
}

} // namespace dbar
