#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "dbar/density.hpp"
#include "dbar/errors.hpp"
#include "dbar/grid.hpp"
#include "dbar/slice.hpp"
#include "dbar/slice_ops.hpp"

namespace dbar {

/// (0,1)-form sum f_j dzbar_j, one component per slice variable.
template <class F>
class Form01
{
public:
    explicit Form01(std::vector<F> components) : components_(std::move(components))
    {
        if (components_.empty())
            throw ShapeError("a (0,1)-form needs at least one component");
        for (const auto& c : components_)
            check_component(c);
    }

    std::size_t size() const noexcept { return components_.size(); }
    const F& operator[](std::size_t j) const { return components_.at(j); }
    const std::vector<F>& components() const noexcept { return components_; }

private:
    void check_component(const F& c) const
    {
        if constexpr (std::is_same_v<F, GridFunction>) {
            if (c.grid()->slices() != components_.size())
                throw ShapeError("form has one component per slice");
            GridFunction::check_same(components_.front(), c);
        } else {
            if (c.slices() != components_.size())
                throw ShapeError("form has one component per slice");
        }
    }

    std::vector<F> components_;
};

template <class F>
struct ProductSolution
{
    F u;
    std::vector<F> terms; ///< T_{o1} f_{o1}, T_{o2} P_{o1} f_{o2}, ...
    std::vector<std::size_t> order;
    std::map<std::string, double> residuals;
};

namespace detail {

// Slice-operator bundles for the two representations.
template <Coefficient C>
struct ExactOps
{
    using F = MonomialDensity<C>;
    const std::vector<SliceDomain>& slices;

    F dbar(const F& f, std::size_t j) const { return dzbar(f, j); }
    F T(const F& f, std::size_t j) const { return canonical_T(f, slices.at(j), j); }
    F P(const F& f, std::size_t j) const { return bergman_P(f, slices.at(j), j); }
    static double size(const F& f) { return f.max_abs_coefficient(); }
    static F sum(const F& a, const F& b) { return a + b; }
    static F diff(const F& a, const F& b) { return a - b; }
    F zero(const Form01<F>& f) const { return F(f.size(), 0); }
    // exact coefficients must cancel identically; float coefficients up to rounding
    static double closed_tolerance() { return CoeffTraits<C>::mode == Mode::exact ? 0.0 : 1e-12; }
};

struct GridOps
{
    using F = GridFunction;

    F dbar(const F& f, std::size_t j) const { return dbar_numeric(f, j); }
    F T(const F& f, std::size_t j) const { return canonical_T(f, j); }
    F P(const F& f, std::size_t j) const { return bergman_P(f, j); }
    static double size(const F& f) { return f.max_abs(); }
    static F sum(const F& a, const F& b) { return a + b; }
    static F diff(const F& a, const F& b) { return a - b; }
    F zero(const Form01<F>& f) const { return GridFunction(f[0].grid()); }
    static double closed_tolerance() { return 1e-8; }
};

template <class F, class Ops>
double closedness(const Form01<F>& f, const Ops& ops)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            worst = std::max(worst, Ops::size(Ops::diff(ops.dbar(f[j], i), ops.dbar(f[i], j))));
    return worst;
}

template <class F, class Ops>
double dbar_defect(const F& u, const Form01<F>& f, const Ops& ops)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
        worst = std::max(worst, Ops::size(Ops::diff(ops.dbar(u, j), f[j])));
    return worst;
}

inline std::vector<std::size_t> resolve_order(std::vector<std::size_t> order, std::size_t n)
{
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
    }
    std::vector<bool> seen(n, false);
    if (order.size() != n)
        throw ShapeError("slice order must list every slice once");
    for (auto j : order) {
        if (j >= n || seen[j])
            throw ShapeError("slice order must list every slice once");
        seen[j] = true;
    }
    return order;
}

template <class F, class Ops>
ProductSolution<F> solve(const Form01<F>& f, std::vector<std::size_t> order, const Ops& ops, double tolerance)
{
    const double closed = closedness(f, ops);
    if (closed > tolerance)
        throw PreconditionError("form is not dbar-closed", closed);
    ProductSolution<F> sol;
    sol.order = resolve_order(std::move(order), f.size());
    sol.u = ops.zero(f);
    for (std::size_t t = 0; t < sol.order.size(); ++t) {
        F g = f[sol.order[t]];
        for (std::size_t s = 0; s < t; ++s)
            g = ops.P(g, sol.order[s]);
        F term = ops.T(g, sol.order[t]);
        sol.u = Ops::sum(sol.u, term);
        sol.terms.push_back(std::move(term));
    }
    sol.residuals["closedness"] = closed;
    sol.residuals["dbar"] = dbar_defect(sol.u, f, ops);
    return sol;
}

} // namespace detail

// ---------------------------------------------------------------------------------------------
// Exact path
// ---------------------------------------------------------------------------------------------

template <Coefficient C>
double check_dbar_closed(const Form01<MonomialDensity<C>>& f)
{
    const std::vector<SliceDomain> none;
    return detail::closedness(f, detail::ExactOps<C>{none});
}

/// u = T_{o1} f_{o1} + T_{o2} P_{o1} f_{o2} + ... with order o (default 0, 1, ..., n-1).
template <Coefficient C>
ProductSolution<MonomialDensity<C>> canonical_solution_product(const Form01<MonomialDensity<C>>& f,
                                                               const std::vector<SliceDomain>& slices,
                                                               std::vector<std::size_t> order = {})
{
    if (slices.size() != f.size())
        throw ShapeError("one slice per form component");
    return detail::solve(f, std::move(order), detail::ExactOps<C>{slices}, detail::ExactOps<C>::closed_tolerance());
}

template <Coefficient C>
MonomialDensity<C> bergman_projection_product(const MonomialDensity<C>& f, const std::vector<SliceDomain>& slices)
{
    if (slices.size() != f.slices())
        throw ShapeError("one slice per density variable");
    MonomialDensity<C> r = f;
    for (std::size_t j = 0; j < slices.size(); ++j)
        r = bergman_P(r, slices[j], j);
    return r;
}

template <Coefficient C>
double dbar_residual(const MonomialDensity<C>& u, const Form01<MonomialDensity<C>>& f)
{
    const std::vector<SliceDomain> none;
    return detail::dbar_defect(u, f, detail::ExactOps<C>{none});
}

/// max over a (a_j <= maxdeg) of |<u, z^a>| / ||z^a|| with closed-form disc integrals.
template <Coefficient C>
double orthogonality_residual(const MonomialDensity<C>& u, int maxdeg)
{
    const std::size_t n = u.slices();
    std::vector<int> a(n, 0);
    double worst = 0.0;
    for (;;) {
        Monomial m(n);
        double norm2 = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            m.set(j, a[j], 0);
            norm2 *= std::numbers::pi / (a[j] + 1);
        }
        const auto za = MonomialDensity<C>::monomial(m, CoeffTraits<C>::from_ratio(1, 1));
        const auto ip = inner_product(u, za);
        if (!ip.is_zero())
            worst = std::max(worst, std::abs(ip.value()) / std::sqrt(norm2));
        std::size_t j = 0;
        while (j < n && ++a[j] > maxdeg)
            a[j++] = 0;
        if (j == n)
            break;
    }
    return worst;
}

// ---------------------------------------------------------------------------------------------
// Numeric path
// ---------------------------------------------------------------------------------------------

inline double check_dbar_closed(const Form01<GridFunction>& f) { return detail::closedness(f, detail::GridOps{}); }

inline ProductSolution<GridFunction> canonical_solution_product(const Form01<GridFunction>& f,
                                                                std::vector<std::size_t> order = {},
                                                                double closed_tolerance = 1e-8)
{
    return detail::solve(f, std::move(order), detail::GridOps{}, closed_tolerance);
}

inline GridFunction bergman_projection_product(const GridFunction& f,
                                               BergmanRoute route = BergmanRoute::kernel)
{
    GridFunction r = f;
    for (std::size_t j = 0; j < f.grid()->slices(); ++j)
        r = bergman_P(r, j, route);
    return r;
}

inline double dbar_residual(const GridFunction& u, const Form01<GridFunction>& f)
{
    return detail::dbar_defect(u, f, detail::GridOps{});
}

/// Same as the exact version with all integrals by the grid quadrature.
inline double orthogonality_residual(const GridFunction& u, int maxdeg)
{
    const auto& g = *u.grid();
    const std::size_t n = g.slices();
    // Per-slice sums S_j[a] over slice-local nodes are contracted successively, as in sample_to_grid.
    std::vector<cplx> t(u.values().begin(), u.values().end());
    std::vector<std::size_t> shape(n);
    for (std::size_t j = 0; j < n; ++j)
        shape[j] = g.slice_size(j);
    std::vector<std::vector<double>> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto z = g.z(j);
        const auto w = g.weights(j);
        Eigen::MatrixXcd m(maxdeg + 1, static_cast<Eigen::Index>(z.size()));
        norms[j].assign(maxdeg + 1, 0.0);
        for (std::size_t i = 0; i < z.size(); ++i) {
            cplx p = 1.0;
            for (int a = 0; a <= maxdeg; ++a) {
                m(a, static_cast<Eigen::Index>(i)) = w[i] * std::conj(p);
                norms[j][a] += w[i] * std::norm(p);
                p *= z[i];
            }
        }
        t = detail::mode_product(t, shape, j, m);
        shape[j] = static_cast<std::size_t>(maxdeg + 1);
    }
    double worst = 0.0;
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        double norm2 = 1.0;
        std::size_t rest = idx;
        for (std::size_t j = n; j-- > 0;) {
            norm2 *= norms[j][rest % (maxdeg + 1)];
            rest /= maxdeg + 1;
        }
        worst = std::max(worst, std::abs(t[idx]) / std::sqrt(norm2));
    }
    return worst;
}

} // namespace dbar
