#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "dbar/density.hpp"
#include "dbar/errors.hpp"
#include "dbar/grid.hpp"
#include "dbar/polar.hpp"
#include "dbar/slice.hpp"

namespace dbar {

enum class OperatorTag { G, T, Ttilde, P };

inline const char* to_string(OperatorTag t)
{
    switch (t) {
    case OperatorTag::G:
        return "G";
    case OperatorTag::T:
        return "T";
    case OperatorTag::Ttilde:
        return "Ttilde";
    case OperatorTag::P:
        return "P";
    }
    return "?";
}

enum class BergmanRoute { kernel, spencer };

// ---------------------------------------------------------------------------------------------
// Exact path: closed-form monomial transforms on disc slices.
// ---------------------------------------------------------------------------------------------

namespace detail {

// Applies a per-monomial rule along slice j. emit(m', n', ratio) adds ratio * c * z^m' zbar^n'.
template <Coefficient C, class Rule>
MonomialDensity<C> transform_slice(const MonomialDensity<C>& f, std::size_t j, int degree_growth, Rule&& rule)
{
    if (j >= f.slices())
        throw ShapeError("slice index out of range");
    MonomialDensity<C> r(f.slices(), f.max_degree() + degree_growth);
    for (const auto& [mono, c] : f.terms()) {
        auto emit = [&](int m, int n, Rational ratio) {
            Monomial out = mono;
            out.set(j, m, n);
            r.accumulate(out, CoeffTraits<C>::scale(c, ratio));
        };
        rule(mono.z(j), mono.zbar(j), emit);
    }
    return r;
}

} // namespace detail

/// G(z^m zbar^n) = [z^{m+1} zbar^{n+1} - z^{m-n}] / ((m+1)(n+1)), conjugate form for m < n.
template <Coefficient C>
MonomialDensity<C> dirichlet_G(const MonomialDensity<C>& f, const SliceDomain& s, std::size_t j = 0)
{
    require_disc(s, "dirichlet_G");
    return detail::transform_slice(f, j, 1, [](int m, int n, auto&& emit) {
        const Rational c(1, static_cast<std::int64_t>(m + 1) * (n + 1));
        emit(m + 1, n + 1, c);
        if (m >= n)
            emit(m - n, 0, -c);
        else
            emit(0, n - m, -c);
    });
}

/// T = dG: z^m zbar^{n+1}/(n+1) - [m > n] (m-n)/((m+1)(n+1)) z^{m-n-1}.
template <Coefficient C>
MonomialDensity<C> canonical_T(const MonomialDensity<C>& f, const SliceDomain& s, std::size_t j = 0)
{
    require_disc(s, "canonical_T");
    return detail::transform_slice(f, j, 1, [](int m, int n, auto&& emit) {
        emit(m, n + 1, Rational(1, n + 1));
        if (m >= n + 1)
            emit(m - n - 1, 0, Rational(-(m - n), static_cast<std::int64_t>(m + 1) * (n + 1)));
    });
}

/// Solid Cauchy transform: z^m zbar^{n+1}/(n+1) - [m > n] z^{m-n-1}/(n+1).
template <Coefficient C>
MonomialDensity<C> cauchy_Ttilde(const MonomialDensity<C>& f, const SliceDomain& s, std::size_t j = 0)
{
    require_disc(s, "cauchy_Ttilde");
    return detail::transform_slice(f, j, 1, [](int m, int n, auto&& emit) {
        emit(m, n + 1, Rational(1, n + 1));
        if (m >= n + 1)
            emit(m - n - 1, 0, Rational(-1, n + 1));
    });
}

/// P(z^m zbar^n) = (m-n+1)/(m+1) z^{m-n} for m >= n, else 0.
template <Coefficient C>
MonomialDensity<C> bergman_P(const MonomialDensity<C>& f, const SliceDomain& s, std::size_t j = 0)
{
    require_disc(s, "bergman_P");
    return detail::transform_slice(f, j, 0, [](int m, int n, auto&& emit) {
        if (m >= n)
            emit(m - n, 0, Rational(m - n + 1, m + 1));
    });
}

/// Pf + T(dbar f) - f as a density (identically zero on the disc).
template <Coefficient C>
MonomialDensity<C> spencer_defect(const MonomialDensity<C>& f, const SliceDomain& s, std::size_t j = 0)
{
    const auto lhs = bergman_P(f, s, j) + canonical_T(dzbar(f, j), s, j);
    return lhs - f.with_max_degree(lhs.max_degree());
}

/// Largest coefficient of the Spencer defect.
template <Coefficient C>
double spencer_residual(const MonomialDensity<C>& f, const SliceDomain& s, std::size_t j = 0)
{
    return spencer_defect(f, s, j).max_abs_coefficient();
}

// ---------------------------------------------------------------------------------------------
// Numeric path on grid functions. Conformal slices are pulled back to the reference disc.
// ---------------------------------------------------------------------------------------------

namespace detail {

template <class Body>
GridFunction on_slice(const GridFunction& f, std::size_t j, Body&& body)
{
    const auto& g = *f.grid();
    if (j >= g.slices())
        throw ShapeError("slice index out of range");
    return map_fibers(f, j, [&](std::span<const cplx> in, std::span<cplx> out) { body(g, in, out); });
}

} // namespace detail

inline GridFunction dbar_numeric(const GridFunction& f, std::size_t j = 0)
{
    return detail::on_slice(f, j, [j](const ProductGrid& g, std::span<const cplx> in, std::span<cplx> out) {
        g.engine(j).apply(PolarSpectral::Op::dbar, in, out);
        if (!g.slice(j).is_disc()) {
            const auto dphi = g.dphi(j);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] /= std::conj(dphi[i]);
        }
    });
}

inline GridFunction d_numeric(const GridFunction& f, std::size_t j = 0)
{
    return detail::on_slice(f, j, [j](const ProductGrid& g, std::span<const cplx> in, std::span<cplx> out) {
        g.engine(j).apply(PolarSpectral::Op::d, in, out);
        if (!g.slice(j).is_disc()) {
            const auto dphi = g.dphi(j);
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] /= dphi[i];
        }
    });
}

/// Gf = -4 int g(., w) f(w): on a conformal slice G_disc[(f o phi)|phi'|^2].
inline GridFunction dirichlet_G(const GridFunction& f, std::size_t j = 0)
{
    return detail::on_slice(f, j, [j](const ProductGrid& g, std::span<const cplx> in, std::span<cplx> out) {
        if (g.slice(j).is_disc()) {
            g.engine(j).apply(PolarSpectral::Op::dirichlet, in, out);
            return;
        }
        const auto dphi = g.dphi(j);
        std::vector<cplx> pulled(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            pulled[i] = in[i] * std::norm(dphi[i]);
        g.engine(j).apply(PolarSpectral::Op::dirichlet, pulled, out);
    });
}

/// Tf = dGf: on a conformal slice T_disc[(f o phi)|phi'|^2] / phi'.
inline GridFunction canonical_T(const GridFunction& f, std::size_t j = 0)
{
    return detail::on_slice(f, j, [j](const ProductGrid& g, std::span<const cplx> in, std::span<cplx> out) {
        if (g.slice(j).is_disc()) {
            g.engine(j).apply(PolarSpectral::Op::canonical, in, out);
            return;
        }
        const auto dphi = g.dphi(j);
        std::vector<cplx> pulled(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            pulled[i] = in[i] * std::norm(dphi[i]);
        g.engine(j).apply(PolarSpectral::Op::canonical, pulled, out);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] /= dphi[i];
    });
}

/// Solid Cauchy transform. On a conformal slice the kernel 1/(phi(w) - phi(z)) is split into
/// 1/(phi'(z)(w - z)), handled by the disc operator, plus a smooth remainder summed directly.
inline GridFunction cauchy_Ttilde(const GridFunction& f, std::size_t j = 0)
{
    return detail::on_slice(f, j, [j](const ProductGrid& g, std::span<const cplx> in, std::span<cplx> out) {
        const auto& e = g.engine(j);
        if (g.slice(j).is_disc()) {
            e.apply(PolarSpectral::Op::cauchy, in, out);
            return;
        }
        const auto& s = g.slice(j);
        const auto zeta = g.zeta(j);
        const auto z = g.z(j);
        const auto dphi = g.dphi(j);
        const auto w = g.weights(j); // physical weights = polar weight |phi'|^2
        std::vector<cplx> pulled(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            pulled[i] = in[i] * std::norm(dphi[i]);
        e.apply(PolarSpectral::Op::cauchy, pulled, out);
        for (std::size_t a = 0; a < out.size(); ++a) {
            const cplx d2 = s.map_second_derivative(zeta[a]);
            cplx acc{};
            for (std::size_t b = 0; b < in.size(); ++b) {
                cplx rem;
                if (a == b)
                    rem = -d2 / (2.0 * dphi[a] * dphi[a]);
                else
                    rem = 1.0 / (z[b] - z[a]) - 1.0 / (dphi[a] * (zeta[b] - zeta[a]));
                acc += w[b] * in[b] * rem;
            }
            out[a] = out[a] / dphi[a] - acc / std::numbers::pi;
        }
    });
}

/// Bergman projection, by kernel quadrature or by Spencer's formula f - T(dbar f).
inline GridFunction bergman_P(const GridFunction& f, std::size_t j = 0, BergmanRoute route = BergmanRoute::kernel)
{
    if (route == BergmanRoute::spencer)
        return f - canonical_T(dbar_numeric(f, j), j);
    return detail::on_slice(f, j, [j](const ProductGrid& g, std::span<const cplx> in, std::span<cplx> out) {
        if (g.slice(j).is_disc()) {
            g.engine(j).apply(PolarSpectral::Op::bergman, in, out);
            return;
        }
        const auto dphi = g.dphi(j);
        std::vector<cplx> pulled(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            pulled[i] = in[i] * dphi[i];
        g.engine(j).apply(PolarSpectral::Op::bergman, pulled, out);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] /= dphi[i];
    });
}

/// sup |Pf + T(dbar f) - f| over the nodes, P by kernel quadrature.
inline double spencer_residual(const GridFunction& f, std::size_t j = 0)
{
    return (bergman_P(f, j) + canonical_T(dbar_numeric(f, j), j) - f).max_abs();
}

// ---------------------------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------------------------

struct SliceOperatorReport
{
    OperatorTag tag = OperatorTag::T;
    GridFunction input;
    GridFunction output;
    std::map<std::string, double> residuals;
};

/// max_k |<u, z^k>| / ||z^k|| along slice j, k <= max_power, as a sup over the other coordinates.
inline double slice_orthogonality(const GridFunction& u, int max_power, std::size_t j = 0)
{
    const auto& g = *u.grid();
    double worst = 0.0;
    for (int k = 0; k <= max_power; ++k) {
        GridFunction zk = sample_function(u.grid(), [j, k](std::span<const cplx> p) { return std::pow(p[j], k); });
        // pairing along slice j only
        const std::size_t n = g.slice_size(j);
        const std::size_t inner = g.stride(j);
        const std::size_t outer = g.size() / (n * inner);
        const auto w = g.weights(j);
        double norm2 = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            norm2 += w[a] * std::norm(zk[a * inner]);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t i = 0; i < inner; ++i) {
                cplx s{};
                for (std::size_t a = 0; a < n; ++a) {
                    const std::size_t idx = o * n * inner + a * inner + i;
                    s += w[a] * u[idx] * std::conj(zk[idx]);
                }
                worst = std::max(worst, std::abs(s) / std::sqrt(norm2));
            }
        }
    }
    return worst;
}

/// Applies one slice operator and collects its defining residuals.
inline SliceOperatorReport slice_report(OperatorTag tag, const GridFunction& f, std::size_t j = 0, int max_power = 16)
{
    SliceOperatorReport rep;
    rep.tag = tag;
    rep.input = f;
    switch (tag) {
    case OperatorTag::G: {
        rep.output = dirichlet_G(f, j);
        const GridFunction lap = 4.0 * d_numeric(dbar_numeric(rep.output, j), j);
        rep.residuals["laplacian"] = (lap - 4.0 * f).max_abs();
        if (f.grid()->slices() == 1) {
            double b = 0.0;
            const auto& s = f.grid()->slice(0);
            for (int i = 0; i < 256; ++i) {
                const cplx zb = s.map(std::polar(1.0, 2.0 * std::numbers::pi * i / 256));
                b = std::max(b, std::abs(interpolate(rep.output, zb)));
            }
            rep.residuals["boundary"] = b;
        }
        break;
    }
    case OperatorTag::T:
        rep.output = canonical_T(f, j);
        rep.residuals["dbar"] = (dbar_numeric(rep.output, j) - f).max_abs();
        rep.residuals["orthogonality"] = slice_orthogonality(rep.output, max_power, j);
        break;
    case OperatorTag::Ttilde: {
        rep.output = cauchy_Ttilde(f, j);
        rep.residuals["dbar"] = (dbar_numeric(rep.output, j) - f).max_abs();
        const GridFunction t = canonical_T(f, j);
        rep.residuals["T_vs_I_minus_P"] = (rep.output - bergman_P(rep.output, j) - t).max_abs();
        break;
    }
    case OperatorTag::P:
        rep.output = bergman_P(f, j);
        rep.residuals["kernel_vs_spencer"] = (rep.output - bergman_P(f, j, BergmanRoute::spencer)).max_abs();
        rep.residuals["idempotence"] = (bergman_P(rep.output, j) - rep.output).max_abs();
        break;
    }
    return rep;
}

} // namespace dbar
