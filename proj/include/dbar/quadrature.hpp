#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace dbar {

/// Nodes and weights of a one-dimensional rule on an interval.
struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Legendre P_n and its derivative at x by the three-term recurrence.
inline void legendre_with_derivative(int n, double x, double& p, double& dp)
{
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace detail

/// Gauss–Legendre rule with n points on [a, b], nodes ascending.
inline QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be positive");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0;
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            detail::legendre_with_derivative(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        detail::legendre_with_derivative(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root.
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.nodes[i] = mid - half * x;
        rule.weights[n - 1 - i] = half * w;
        rule.weights[i] = half * w;
    }
    return rule;
}

/// Barycentric weights of distinct interpolation nodes (normalised to max magnitude 1).
inline std::vector<double> barycentric_weights(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<double> w(n, 1.0);
    // Products in log form avoid overflow for n of a few hundred.
    std::vector<double> logw(n, 0.0);
    std::vector<int> sign(n, 1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j)
                continue;
            const double d = x[j] - x[k];
            logw[j] -= std::log(std::abs(d));
            if (d < 0)
                sign[j] = -sign[j];
        }
    }
    double maxlog = logw[0];
    for (double v : logw)
        maxlog = std::max(maxlog, v);
    for (std::size_t j = 0; j < n; ++j)
        w[j] = sign[j] * std::exp(logw[j] - maxlog);
    return w;
}

/// Row of the Lagrange interpolation operator: values f(x_j) -> p(t) = sum_j row[j] f(x_j).
inline void barycentric_row(std::span<const double> x, std::span<const double> bw, double t, std::span<double> row)
{
    const std::size_t n = x.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (t == x[j]) {
            for (std::size_t k = 0; k < n; ++k)
                row[k] = (k == j) ? 1.0 : 0.0;
            return;
        }
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        row[j] = bw[j] / (t - x[j]);
        denom += row[j];
    }
    for (std::size_t j = 0; j < n; ++j)
        row[j] /= denom;
}

/// Spectral differentiation matrix on the nodes x (row-major n*n), from barycentric weights.
inline std::vector<double> differentiation_matrix(std::span<const double> x, std::span<const double> bw)
{
    const std::size_t n = x.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const double v = (bw[j] / bw[i]) / (x[i] - x[j]);
            d[i * n + j] = v;
            diag -= v;
        }
        d[i * n + i] = diag;
    }
    return d;
}

} // namespace dbar
