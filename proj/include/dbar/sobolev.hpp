#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dbar/density.hpp"
#include "dbar/errors.hpp"
#include "dbar/grid.hpp"
#include "dbar/product_ops.hpp"
#include "dbar/random.hpp"
#include "dbar/slice_ops.hpp"

namespace dbar {

class SobolevIndex
{
public:
    SobolevIndex(int k, double p) : k_(k), p_(p)
    {
        if (k < 0)
            throw IndexError("Sobolev order must be nonnegative");
        if (!(p > 1.0) || !std::isfinite(p))
            throw IndexError("Sobolev exponent must satisfy 1 < p < infinity");
    }

    int k() const noexcept { return k_; }
    double p() const noexcept { return p_; }

    friend bool operator==(const SobolevIndex&, const SobolevIndex&) = default;

private:
    int k_;
    double p_;
};

/// Counts of d/dz_j and d/dzbar_j: {a_1, b_1, a_2, b_2, ...}. Wirtinger derivatives commute,
/// so each multi-index stands for one derivative.
using DerivativeIndex = std::vector<int>;

inline int order(const DerivativeIndex& g)
{
    int s = 0;
    for (int v : g)
        s += v;
    return s;
}

inline std::string to_string(const DerivativeIndex& g)
{
    std::ostringstream os;
    for (std::size_t j = 0; j < g.size() / 2; ++j) {
        if (g[2 * j])
            os << "d" << j + 1 << "^" << g[2 * j];
        if (g[2 * j + 1])
            os << "db" << j + 1 << "^" << g[2 * j + 1];
    }
    const auto s = os.str();
    return s.empty() ? "id" : s;
}

/// All derivative multi-indices of total order <= k, by order then lexicographically.
inline std::vector<DerivativeIndex> derivative_indices(std::size_t nslices, int k)
{
    std::vector<DerivativeIndex> out;
    DerivativeIndex g(2 * nslices, 0);
    for (int total = 0; total <= k; ++total) {
        // enumerate compositions of `total` into 2n parts
        std::vector<DerivativeIndex> level;
        auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
            if (pos + 1 == g.size()) {
                g[pos] = left;
                level.push_back(g);
                return;
            }
            for (int v = left; v >= 0; --v) {
                g[pos] = v;
                self(self, pos + 1, left - v);
            }
        };
        rec(rec, 0, total);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

template <Coefficient C>
MonomialDensity<C> weak_derivative(const MonomialDensity<C>& u, const DerivativeIndex& g)
{
    if (g.size() != 2 * u.slices())
        throw ShapeError("derivative index has the wrong number of slices");
    MonomialDensity<C> r = u;
    for (std::size_t j = 0; j < u.slices(); ++j) {
        for (int i = 0; i < g[2 * j]; ++i)
            r = dz(r, j);
        for (int i = 0; i < g[2 * j + 1]; ++i)
            r = dzbar(r, j);
    }
    return r;
}

/// Spectral derivative of grid data; orders above 4 amplify rounding beyond use.
inline GridFunction weak_derivative(const GridFunction& u, const DerivativeIndex& g)
{
    if (g.size() != 2 * u.grid()->slices())
        throw ShapeError("derivative index has the wrong number of slices");
    if (order(g) > 4)
        throw ResolutionError("numeric derivatives are supported up to order 4");
    GridFunction r = u;
    for (std::size_t j = 0; j < u.grid()->slices(); ++j) {
        for (int i = 0; i < g[2 * j]; ++i)
            r = d_numeric(r, j);
        for (int i = 0; i < g[2 * j + 1]; ++i)
            r = dbar_numeric(r, j);
    }
    return r;
}

struct NormReport
{
    SobolevIndex index{0, 2.0};
    std::vector<DerivativeIndex> derivatives;
    std::vector<double> contributions; ///< ||D^g u||_p per derivative
    double total = 0.0;
    Mode mode = Mode::floating;
    std::string resolution;
};

namespace detail {

inline bool is_even_integer(double p)
{
    return p == std::floor(p) && static_cast<long>(p) % 2 == 0;
}

inline double finish(NormReport& rep)
{
    const double p = rep.index.p();
    double s = 0.0;
    for (double c : rep.contributions)
        s += std::pow(c, p);
    rep.total = std::pow(s, 1.0 / p);
    return rep.total;
}

// int |v|^p over the product of unit discs.
template <Coefficient C>
double lp_power(const MonomialDensity<C>& v, double p)
{
    if (v.is_zero())
        return 0.0;
    if (is_even_integer(p)) {
        // |v|^p = v^{p/2} conj(v^{p/2}), integrated in closed form
        MonomialDensity<C> h = v;
        for (int i = 1; i < static_cast<int>(p) / 2; ++i)
            h = h * v;
        return std::real(inner_product(h, h).value());
    }
    const int m = v.actual_degree();
    const std::size_t n = v.slices();
    GridSpec spec = n == 1 ? GridSpec{64, std::max(256, 8 * m + 16)} : GridSpec{32, 4 * m + 16};
    std::vector<SliceDomain> slices(n, SliceDomain::unit_disc());
    const auto grid = ProductGrid::make(slices, spec);
    const auto s = sample_to_grid(v, grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        acc += grid->weight(i) * std::pow(std::abs(s[i]), p);
    return acc;
}

} // namespace detail

/// W^{k,p} norm (sum over |g| <= k of ||D^g u||_p^p)^{1/p} on a product of unit discs.
/// Even p integrate in closed form; other p fall back to a resolved grid quadrature.
template <Coefficient C>
NormReport sobolev_norm(const MonomialDensity<C>& u, const SobolevIndex& idx)
{
    NormReport rep;
    rep.index = idx;
    rep.mode = CoeffTraits<C>::mode;
    rep.resolution = detail::is_even_integer(idx.p()) ? "closed-form" : "grid";
    rep.derivatives = derivative_indices(u.slices(), idx.k());
    for (const auto& g : rep.derivatives)
        rep.contributions.push_back(std::pow(detail::lp_power(weak_derivative(u, g), idx.p()), 1.0 / idx.p()));
    detail::finish(rep);
    return rep;
}

inline NormReport sobolev_norm(const GridFunction& u, const SobolevIndex& idx)
{
    NormReport rep;
    rep.index = idx;
    rep.mode = Mode::floating;
    std::ostringstream os;
    for (std::size_t j = 0; j < u.grid()->slices(); ++j)
        os << (j ? "x" : "") << u.grid()->spec(j).nr << "/" << u.grid()->spec(j).ntheta;
    rep.resolution = os.str();
    rep.derivatives = derivative_indices(u.grid()->slices(), idx.k());
    const auto& g = *u.grid();
    for (const auto& d : rep.derivatives) {
        const GridFunction v = weak_derivative(u, d);
        double acc = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            acc += g.weight(i) * std::pow(std::abs(v[i]), idx.p());
        rep.contributions.push_back(std::pow(acc, 1.0 / idx.p()));
    }
    detail::finish(rep);
    return rep;
}

/// Norm of a form: (sum_j ||f_j||^p)^{1/p}.
template <class F>
double form_norm(const Form01<F>& f, const SobolevIndex& idx)
{
    double s = 0.0;
    for (const auto& c : f.components())
        s += std::pow(sobolev_norm(c, idx).total, idx.p());
    return std::pow(s, 1.0 / idx.p());
}

// ---------------------------------------------------------------------------------------------
// Seeded random families
// ---------------------------------------------------------------------------------------------

/// Coefficient uniform on the complex unit disc; exact draws are (a + bi)/256.
template <Coefficient C>
C random_coefficient(Rng& rng)
{
    if constexpr (CoeffTraits<C>::mode == Mode::exact) {
        for (;;) {
            const auto a = rng.integer(-255, 255);
            const auto b = rng.integer(-255, 255);
            if (a * a + b * b < 256 * 256 && (a != 0 || b != 0))
                return GaussianRational(a, b, 256);
        }
    } else {
        return rng.unit_disc();
    }
}

namespace detail {

// Exponent vectors of total degree <= d in 2n variables, in a fixed order.
inline std::vector<Monomial> monomials_up_to(std::size_t nslices, int d, bool holomorphic = false)
{
    std::vector<Monomial> out;
    const std::size_t vars = 2 * nslices;
    std::vector<int> e(vars, 0);
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos == vars) {
            Monomial m(nslices);
            for (std::size_t j = 0; j < nslices; ++j)
                m.set(j, e[2 * j], e[2 * j + 1]);
            out.push_back(m);
            return;
        }
        const int top = (holomorphic && pos % 2 == 1) ? 0 : left;
        for (int v = 0; v <= top; ++v) {
            e[pos] = v;
            self(self, pos + 1, left - v);
        }
        e[pos] = 0;
    };
    rec(rec, 0, d);
    return out;
}

} // namespace detail

/// Dense random polynomial of total degree <= d.
template <Coefficient C>
MonomialDensity<C> random_density(Rng& rng, std::size_t nslices, int d)
{
    MonomialDensity<C> f(nslices, d);
    for (const auto& m : detail::monomials_up_to(nslices, d))
        f.accumulate(m, random_coefficient<C>(rng));
    return f;
}

/// Random holomorphic polynomial of total degree <= d.
template <Coefficient C>
MonomialDensity<C> random_holomorphic(Rng& rng, std::size_t nslices, int d)
{
    MonomialDensity<C> f(nslices, d);
    for (const auto& m : detail::monomials_up_to(nslices, d, true))
        f.accumulate(m, random_coefficient<C>(rng));
    return f;
}

/// dbar-closed form f = dbar u for a random potential u of total degree d + 1.
template <Coefficient C>
Form01<MonomialDensity<C>> random_closed_form(Rng& rng, std::size_t nslices, int d)
{
    const auto u = random_density<C>(rng, nslices, d + 1);
    std::vector<MonomialDensity<C>> comps;
    for (std::size_t j = 0; j < nslices; ++j)
        comps.push_back(dzbar(u, j).with_max_degree(d + 1));
    return Form01<MonomialDensity<C>>(std::move(comps));
}

// ---------------------------------------------------------------------------------------------
// Norm-ratio sweeps
// ---------------------------------------------------------------------------------------------

/// Operators probed by the sweep. Slice tags act on one-variable data; product tags on the bidisc.
enum class SweepTag { slice_T, slice_G, slice_P, product_T, product_P, product_T1, product_P1 };

inline const char* to_string(SweepTag t)
{
    switch (t) {
    case SweepTag::slice_T:
        return "T";
    case SweepTag::slice_G:
        return "G";
    case SweepTag::slice_P:
        return "P";
    case SweepTag::product_T:
        return "T-product";
    case SweepTag::product_P:
        return "P-product";
    case SweepTag::product_T1:
        return "T1-product";
    case SweepTag::product_P1:
        return "P1-product";
    }
    return "?";
}

inline SweepTag parse_sweep_tag(const std::string& s)
{
    for (auto t : {SweepTag::slice_T, SweepTag::slice_G, SweepTag::slice_P, SweepTag::product_T,
                   SweepTag::product_P, SweepTag::product_T1, SweepTag::product_P1})
        if (s == to_string(t))
            return t;
    throw ConfigError("unknown sweep operator '" + s + "'");
}

struct FamilySpec
{
    std::vector<int> degrees{1, 2, 3, 4, 5, 6, 7, 8};
    int count = 8;
    std::uint64_t seed = 42;
};

struct SweepRow
{
    int degree = 0;
    int k = 0;
    double p = 2.0;
    double ratio_max = 0.0;
    double ratio_mean = 0.0;
    std::uint64_t seed = 0;
};

/// Source and target orders: T on a slice gains one derivative, G gains two (source k-1),
/// the product operators gain none.
inline std::pair<int, int> sweep_orders(SweepTag tag, int k)
{
    switch (tag) {
    case SweepTag::slice_T:
        return {k, k + 1};
    case SweepTag::slice_G:
        if (k < 1)
            throw IndexError("the G sweep needs k >= 1 (source order k - 1)");
        return {k - 1, k + 1};
    default:
        return {k, k};
    }
}

/// Ratios ||Op f||_{target} / ||f||_{source} over seeded random families, one row per (degree, index).
/// Each family member is drawn from an Rng seeded by (seed, degree, member), so rows are independent.
inline std::vector<SweepRow> norm_ratio_sweep(SweepTag tag, const FamilySpec& family,
                                              const std::vector<SobolevIndex>& indices)
{
    using D = FloatDensity;
    const std::vector<SliceDomain> one{SliceDomain::unit_disc()};
    const std::vector<SliceDomain> two{SliceDomain::unit_disc(), SliceDomain::unit_disc()};
    std::vector<SweepRow> rows;
    for (int degree : family.degrees) {
        std::vector<std::vector<double>> ratios(indices.size());
        for (int member = 0; member < family.count; ++member) {
            Rng rng(family.seed * 1000003ULL + static_cast<std::uint64_t>(degree) * 1009ULL + static_cast<std::uint64_t>(member));
            for (std::size_t i = 0; i < indices.size(); ++i) {
                const auto& idx = indices[i];
                const auto [src, dst] = sweep_orders(tag, idx.k());
                const SobolevIndex s(src, idx.p());
                const SobolevIndex t(dst, idx.p());
                Rng local = rng;
                double num = 0.0, den = 0.0;
                switch (tag) {
                case SweepTag::slice_T:
                case SweepTag::slice_G:
                case SweepTag::slice_P: {
                    const D f = random_density<cplx>(local, 1, degree);
                    const D out = tag == SweepTag::slice_T   ? canonical_T(f, one[0])
                                  : tag == SweepTag::slice_G ? dirichlet_G(f, one[0])
                                                             : bergman_P(f, one[0]);
                    num = sobolev_norm(out, t).total;
                    den = sobolev_norm(f, s).total;
                    break;
                }
                case SweepTag::product_T: {
                    const auto f = random_closed_form<cplx>(local, 2, degree);
                    num = sobolev_norm(canonical_solution_product(f, two).u, t).total;
                    den = form_norm(f, s);
                    break;
                }
                case SweepTag::product_P:
                case SweepTag::product_T1:
                case SweepTag::product_P1: {
                    const D f = random_density<cplx>(local, 2, degree);
                    const D out = tag == SweepTag::product_P    ? bergman_projection_product(f, two)
                                  : tag == SweepTag::product_T1 ? canonical_T(f, two[0], 0)
                                                                : bergman_P(f, two[0], 0);
                    num = sobolev_norm(out, t).total;
                    den = sobolev_norm(f, s).total;
                    break;
                }
                }
                ratios[i].push_back(num / den);
            }
        }
        for (std::size_t i = 0; i < indices.size(); ++i) {
            SweepRow row;
            row.degree = degree;
            row.k = indices[i].k();
            row.p = indices[i].p();
            row.ratio_max = *std::max_element(ratios[i].begin(), ratios[i].end());
            double s = 0.0;
            for (double r : ratios[i])
                s += r;
            row.ratio_mean = s / static_cast<double>(ratios[i].size());
            row.seed = family.seed;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace dbar
