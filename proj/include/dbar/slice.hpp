#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "dbar/errors.hpp"

namespace dbar {

using cplx = std::complex<double>;

/// A planar slice: the unit disc, or the image of the closed unit disc under an injective
/// polynomial map phi(zeta) = sum_k a_k zeta^k with phi' nonvanishing.
class SliceDomain
{
public:
    enum class Kind { unit_disc, conformal };

    static constexpr double newton_tolerance = 1e-12;
    static constexpr int newton_max_iterations = 50;

    static SliceDomain unit_disc() { return SliceDomain(); }

    /// Validates phi' != 0 on 12800 samples of the closed disc and injectivity of the boundary curve.
    static SliceDomain conformal(std::vector<cplx> coeffs)
    {
        while (coeffs.size() > 1 && coeffs.back() == cplx{})
            coeffs.pop_back();
        if (coeffs.size() < 2)
            throw DomainError("conformal slice needs a nonconstant map");
        SliceDomain s;
        s.kind_ = Kind::conformal;
        s.coeffs_ = std::move(coeffs);
        s.validate();
        s.build_seeds();
        return s;
    }

    Kind kind() const noexcept { return kind_; }
    bool is_disc() const noexcept { return kind_ == Kind::unit_disc; }

    /// Coefficients a_0, a_1, ... of phi (the identity {0, 1} for the unit disc).
    const std::vector<cplx>& map_coeffs() const noexcept { return coeffs_; }

    cplx map(cplx zeta) const noexcept
    {
        cplx v{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            v = v * zeta + *it;
        return v;
    }

    cplx map_derivative(cplx zeta) const noexcept
    {
        cplx v{};
        for (std::size_t k = coeffs_.size() - 1; k >= 1; --k)
            v = v * zeta + static_cast<double>(k) * coeffs_[k];
        return v;
    }

    cplx map_second_derivative(cplx zeta) const noexcept
    {
        cplx v{};
        for (std::size_t k = coeffs_.size() - 1; k >= 2; --k)
            v = v * zeta + static_cast<double>(k * (k - 1)) * coeffs_[k];
        return v;
    }

    /// Area pi * sum k |a_k|^2.
    double area() const noexcept
    {
        double s = 0.0;
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            s += static_cast<double>(k) * std::norm(coeffs_[k]);
        return std::numbers::pi * s;
    }

    /// phi^{-1}(z) for z in the open slice. DomainError outside, InversionError if Newton stalls.
    cplx preimage(cplx z) const
    {
        if (is_disc()) {
            if (!(std::abs(z) < 1.0))
                throw DomainError("point outside the unit disc");
            return z;
        }
        const cplx zeta = preimage_unchecked(z);
        if (!(std::abs(zeta) < 1.0))
            throw DomainError("point outside the conformal slice");
        return zeta;
    }

    /// Newton inversion without the domain check (finite-difference stencils may step past bD).
    cplx preimage_unchecked(cplx z) const
    {
        if (is_disc())
            return z;
        return newton(z, nearest_seed(z));
    }

    bool contains(cplx z) const
    {
        try {
            (void)preimage(z);
            return true;
        } catch (const DomainError&) {
            return false;
        } catch (const InversionError&) {
            return false;
        }
    }

    friend bool operator==(const SliceDomain& a, const SliceDomain& b)
    {
        return a.kind_ == b.kind_ && a.coeffs_ == b.coeffs_;
    }

private:
    SliceDomain() : coeffs_{cplx{0.0, 0.0}, cplx{1.0, 0.0}} {}

    struct Seeds
    {
        std::vector<cplx> zeta;
        std::vector<cplx> image;
    };

    void validate() const
    {
        // phi' on the closed disc: 100 radii x 128 angles.
        double scale = 0.0;
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            scale = std::max(scale, std::abs(coeffs_[k]) * static_cast<double>(k));
        for (int i = 0; i < 100; ++i) {
            const double r = i / 99.0;
            for (int j = 0; j < 128; ++j) {
                const cplx zeta = std::polar(r, 2.0 * std::numbers::pi * j / 128.0);
                if (std::abs(map_derivative(zeta)) <= 1e-8 * scale) {
                    std::ostringstream os;
                    os << "conformal map has a critical point near " << zeta;
                    throw DomainError(os.str());
                }
            }
        }
        // Boundary injectivity: no two well-separated samples coincide, and the polygon is simple.
        constexpr int nb = 2048;
        std::vector<cplx> b(nb);
        for (int j = 0; j < nb; ++j)
            b[j] = map(std::polar(1.0, 2.0 * std::numbers::pi * j / nb));
        for (int i = 0; i < nb; ++i) {
            for (int j = i + 2; j < nb; ++j) {
                if (i == 0 && j == nb - 1)
                    continue;
                if (std::abs(b[i] - b[j]) < 1e-9)
                    throw DomainError("conformal map is not injective on the boundary");
                if (segments_cross(b[i], b[(i + 1) % nb], b[j], b[(j + 1) % nb]))
                    throw DomainError("boundary image of the conformal map self-intersects");
            }
        }
    }

    static double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

    static bool segments_cross(cplx p1, cplx p2, cplx q1, cplx q2)
    {
        if (p2 == q1 || q2 == p1)
            return false;
        const double d1 = cross(p2 - p1, q1 - p1);
        const double d2 = cross(p2 - p1, q2 - p1);
        const double d3 = cross(q2 - q1, p1 - q1);
        const double d4 = cross(q2 - q1, p2 - q1);
        return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
    }

    void build_seeds()
    {
        auto seeds = std::make_shared<Seeds>();
        constexpr int nr = 40;
        constexpr int nt = 96;
        for (int i = 0; i <= nr; ++i) {
            const double r = 1.05 * i / nr;
            for (int j = 0; j < (i == 0 ? 1 : nt); ++j) {
                const cplx zeta = std::polar(r, 2.0 * std::numbers::pi * j / nt);
                seeds->zeta.push_back(zeta);
                seeds->image.push_back(map(zeta));
            }
        }
        seeds_ = std::move(seeds);
    }

    cplx nearest_seed(cplx z) const
    {
        std::size_t best = 0;
        double dist = std::norm(seeds_->image[0] - z);
        for (std::size_t i = 1; i < seeds_->image.size(); ++i) {
            const double d = std::norm(seeds_->image[i] - z);
            if (d < dist) {
                dist = d;
                best = i;
            }
        }
        return seeds_->zeta[best];
    }

    cplx newton(cplx z, cplx zeta) const
    {
        for (int it = 0; it < newton_max_iterations; ++it) {
            const cplx step = (map(zeta) - z) / map_derivative(zeta);
            zeta -= step;
            if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()))
                break;
            if (std::abs(step) <= newton_tolerance * std::max(1.0, std::abs(zeta)))
                return zeta;
        }
        throw InversionError("Newton inversion of the slice map did not converge");
    }

    Kind kind_ = Kind::unit_disc;
    std::vector<cplx> coeffs_;
    std::shared_ptr<const Seeds> seeds_;
};

} // namespace dbar
