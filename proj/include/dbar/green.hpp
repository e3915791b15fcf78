#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "dbar/errors.hpp"
#include "dbar/random.hpp"
#include "dbar/slice.hpp"

namespace dbar {

/// g(z, w), d/dz g(z, w), and the harmonic part h_w(z) = g(z, w) + (1/2 pi) ln|z - w|.
struct GreenEval
{
    double value = 0.0;
    cplx dz{};
    double correction = 0.0;
};

namespace disc {

inline double green(cplx z, cplx w)
{
    return std::log(std::abs((1.0 - z * std::conj(w)) / (z - w))) / (2.0 * std::numbers::pi);
}

inline cplx green_dz(cplx z, cplx w)
{
    return (1.0 / (w - z) - std::conj(w) / (1.0 - z * std::conj(w))) / (4.0 * std::numbers::pi);
}

inline cplx bergman_kernel(cplx z, cplx w)
{
    const cplx d = 1.0 - z * std::conj(w);
    return 1.0 / (std::numbers::pi * d * d);
}

} // namespace disc

namespace detail {

inline void require_distinct(cplx z, cplx w)
{
    if (z == w)
        throw PoleError("Green's function evaluated at its pole z = w");
}

} // namespace detail

inline GreenEval green_eval(const SliceDomain& s, cplx z, cplx w)
{
    detail::require_distinct(z, w);
    const cplx zeta = s.preimage(z);
    const cplx omega = s.preimage(w);
    detail::require_distinct(zeta, omega);
    GreenEval e;
    e.value = disc::green(zeta, omega);
    e.dz = disc::green_dz(zeta, omega) / s.map_derivative(zeta);
    e.correction = e.value + std::log(std::abs(z - w)) / (2.0 * std::numbers::pi);
    return e;
}

inline double green(const SliceDomain& s, cplx z, cplx w) { return green_eval(s, z, w).value; }

inline cplx green_dz(const SliceDomain& s, cplx z, cplx w) { return green_eval(s, z, w).dz; }

inline cplx bergman_kernel(const SliceDomain& s, cplx z, cplx w)
{
    const cplx zeta = s.preimage(z);
    const cplx omega = s.preimage(w);
    return disc::bergman_kernel(zeta, omega) / (s.map_derivative(zeta) * std::conj(s.map_derivative(omega)));
}

/// Green's function without interior checks; finite-difference stencils may leave the slice.
inline double green_unchecked(const SliceDomain& s, cplx z, cplx w)
{
    return disc::green(s.preimage_unchecked(z), s.preimage_unchecked(w));
}

/// Mixed derivative d_z d_wbar g(z, w) by nested fourth-order central differences.
inline cplx green_mixed_fd(const SliceDomain& s, cplx z, cplx w, double h = 1e-3)
{
    static constexpr std::array<std::pair<double, double>, 4> stencil{
        {{-2.0, 1.0}, {-1.0, -8.0}, {1.0, 8.0}, {2.0, -1.0}}};
    // d/dx along direction e of F at p: sum c F(p + s h e) / (12 h)
    auto directional = [h](auto&& f, cplx e) {
        double acc = 0.0;
        for (auto [step, c] : stencil)
            acc += c * f(step * h * e);
        return acc / (12.0 * h);
    };
    const cplx one{1.0, 0.0};
    const cplx i{0.0, 1.0};
    // d_wbar = (d_u + i d_v)/2, d_z = (d_x - i d_y)/2
    auto dwbar_at = [&](cplx zz) {
        const double du = directional([&](cplx dw) { return green_unchecked(s, zz, w + dw); }, one);
        const double dv = directional([&](cplx dw) { return green_unchecked(s, zz, w + dw); }, i);
        return 0.5 * cplx(du, dv);
    };
    cplx dx{}, dy{};
    for (auto [step, c] : stencil) {
        dx += c * dwbar_at(z + step * h * one);
        dy += c * dwbar_at(z + step * h * i);
    }
    dx /= 12.0 * h;
    dy /= 12.0 * h;
    return 0.5 * (dx - i * dy);
}

/// max |k(z,w) + 4 d_z d_wbar g(z,w)| / |k(z,w)| over the pairs.
inline double kernel_green_identity(const SliceDomain& s, std::span<const std::pair<cplx, cplx>> pairs,
                                    double min_separation = 0.05)
{
    double worst = 0.0;
    for (const auto& [z, w] : pairs) {
        const double sep = std::abs(z - w);
        if (sep < min_separation)
            throw PreconditionError("kernel-Green check needs |z - w| >= 0.05", sep);
        const cplx k = bergman_kernel(s, z, w);
        const cplx mixed = green_mixed_fd(s, z, w);
        worst = std::max(worst, std::abs(k + 4.0 * mixed) / std::abs(k));
    }
    return worst;
}

/// Seeded interior pairs: preimages uniform in |zeta| < radius, images at distance >= min_separation.
inline std::vector<std::pair<cplx, cplx>> random_pairs(const SliceDomain& s, std::size_t count, std::uint64_t seed,
                                                       double radius = 0.98, double min_separation = 0.05)
{
    Rng rng(seed);
    std::vector<std::pair<cplx, cplx>> pairs;
    while (pairs.size() < count) {
        const cplx z = s.map(rng.disc(radius));
        const cplx w = s.map(rng.disc(radius));
        if (std::abs(z - w) >= min_separation)
            pairs.emplace_back(z, w);
    }
    return pairs;
}

} // namespace dbar
