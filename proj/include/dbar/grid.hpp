#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dbar/density.hpp"
#include "dbar/errors.hpp"
#include "dbar/parallel.hpp"
#include "dbar/polar.hpp"
#include "dbar/slice.hpp"

namespace dbar {

struct GridSpec
{
    int nr = 64;
    int ntheta = 256;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Smallest grid on which the operators act exactly on densities with exponents <= degree
/// (radial degree of T z^m zbar^n is m + n + 1, angular frequencies stay within degree + 1).
inline GridSpec auto_grid_spec(int degree)
{
    return {2 * degree + 4, 2 * degree + 10};
}

/// Shared polar engine per resolution; the split tables are built once per process.
inline std::shared_ptr<const PolarSpectral> polar_engine(const GridSpec& spec)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const PolarSpectral>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{spec.nr, spec.ntheta}];
    if (!slot)
        slot = std::make_shared<const PolarSpectral>(spec.nr, spec.ntheta);
    return slot;
}

/// Tensor product of per-slice polar grids. Flat index: slice 0 varies slowest.
class ProductGrid
{
public:
    static std::shared_ptr<const ProductGrid> make(std::vector<SliceDomain> slices, std::vector<GridSpec> specs)
    {
        if (slices.empty() || slices.size() != specs.size())
            throw ShapeError("product grid needs one spec per slice");
        return std::shared_ptr<const ProductGrid>(new ProductGrid(std::move(slices), std::move(specs)));
    }

    static std::shared_ptr<const ProductGrid> make(std::vector<SliceDomain> slices, GridSpec spec)
    {
        std::vector<GridSpec> specs(slices.size(), spec);
        return make(std::move(slices), std::move(specs));
    }

    std::size_t slices() const noexcept { return slices_.size(); }
    const SliceDomain& slice(std::size_t j) const { return slices_.at(j); }
    const GridSpec& spec(std::size_t j) const { return specs_.at(j); }
    const PolarSpectral& engine(std::size_t j) const { return *engines_.at(j); }

    std::size_t slice_size(std::size_t j) const { return engines_.at(j)->size(); }
    std::size_t size() const noexcept { return size_; }
    std::size_t stride(std::size_t j) const { return strides_.at(j); }

    /// Reference points zeta, physical points z = phi(zeta), phi'(zeta) and physical area weights.
    std::span<const cplx> zeta(std::size_t j) const { return nodes_.at(j).zeta; }
    std::span<const cplx> z(std::size_t j) const { return nodes_.at(j).z; }
    std::span<const cplx> dphi(std::size_t j) const { return nodes_.at(j).dphi; }
    std::span<const double> weights(std::size_t j) const { return nodes_.at(j).weight; }

    /// Slice-local index of a flat index.
    std::size_t local(std::size_t flat, std::size_t j) const { return (flat / strides_[j]) % slice_size(j); }

    double weight(std::size_t flat) const
    {
        double w = 1.0;
        for (std::size_t j = 0; j < slices(); ++j)
            w *= nodes_[j].weight[local(flat, j)];
        return w;
    }

    std::vector<cplx> point(std::size_t flat) const
    {
        std::vector<cplx> p(slices());
        for (std::size_t j = 0; j < slices(); ++j)
            p[j] = nodes_[j].z[local(flat, j)];
        return p;
    }

    friend bool operator==(const ProductGrid& a, const ProductGrid& b)
    {
        return a.slices_ == b.slices_ && a.specs_ == b.specs_;
    }

private:
    struct SliceNodes
    {
        std::vector<cplx> zeta;
        std::vector<cplx> z;
        std::vector<cplx> dphi;
        std::vector<double> weight;
    };

    ProductGrid(std::vector<SliceDomain> slices, std::vector<GridSpec> specs)
        : slices_(std::move(slices)), specs_(std::move(specs))
    {
        for (std::size_t j = 0; j < slices_.size(); ++j) {
            engines_.push_back(polar_engine(specs_[j]));
            const auto& e = *engines_.back();
            SliceNodes n;
            for (int ir = 0; ir < e.nr(); ++ir) {
                for (int it = 0; it < e.ntheta(); ++it) {
                    const cplx zeta = e.node(ir, it);
                    const cplx d = slices_[j].map_derivative(zeta);
                    n.zeta.push_back(zeta);
                    n.z.push_back(slices_[j].map(zeta));
                    n.dphi.push_back(d);
                    n.weight.push_back(e.weight(ir, it) * std::norm(d));
                }
            }
            nodes_.push_back(std::move(n));
        }
        strides_.assign(slices_.size(), 1);
        for (std::size_t j = slices_.size() - 1; j > 0; --j)
            strides_[j - 1] = strides_[j] * engines_[j]->size();
        size_ = strides_[0] * engines_[0]->size();
    }

    std::vector<SliceDomain> slices_;
    std::vector<GridSpec> specs_;
    std::vector<std::shared_ptr<const PolarSpectral>> engines_;
    std::vector<SliceNodes> nodes_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
};

using GridPtr = std::shared_ptr<const ProductGrid>;

/// Complex samples on a product grid.
class GridFunction
{
public:
    GridFunction() = default;
    explicit GridFunction(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size()) {}
    GridFunction(GridPtr grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values))
    {
        if (values_.size() != grid_->size())
            throw ShapeError("grid function value array has the wrong length");
    }

    const GridPtr& grid() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::span<cplx> values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    cplx operator[](std::size_t i) const { return values_[i]; }
    cplx& operator[](std::size_t i) { return values_[i]; }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& v : values_)
            m = std::max(m, std::abs(v));
        return m;
    }

    friend GridFunction operator+(const GridFunction& a, const GridFunction& b)
    {
        check_same(a, b);
        GridFunction r(a.grid_, a.values_);
        for (std::size_t i = 0; i < r.size(); ++i)
            r.values_[i] += b.values_[i];
        return r;
    }

    friend GridFunction operator-(const GridFunction& a, const GridFunction& b)
    {
        check_same(a, b);
        GridFunction r(a.grid_, a.values_);
        for (std::size_t i = 0; i < r.size(); ++i)
            r.values_[i] -= b.values_[i];
        return r;
    }

    friend GridFunction operator*(cplx s, const GridFunction& a)
    {
        GridFunction r(a.grid_, a.values_);
        for (auto& v : r.values_)
            v *= s;
        return r;
    }

    /// Pointwise product.
    friend GridFunction operator*(const GridFunction& a, const GridFunction& b)
    {
        check_same(a, b);
        GridFunction r(a.grid_, a.values_);
        for (std::size_t i = 0; i < r.size(); ++i)
            r.values_[i] *= b.values_[i];
        return r;
    }

    static void check_same(const GridFunction& a, const GridFunction& b)
    {
        if (!a.grid_ || !b.grid_ || (a.grid_ != b.grid_ && !(*a.grid_ == *b.grid_)))
            throw ShapeError("grid functions live on different grids");
    }

private:
    GridPtr grid_;
    std::vector<cplx> values_;
};

/// Applies op(in, out) to every 1-D fiber along slice j (all other coordinates frozen).
/// in and out are contiguous buffers of length slice_size(j).
template <class Op>
GridFunction map_fibers(const GridFunction& f, std::size_t j, Op&& op)
{
    const auto& g = *f.grid();
    const std::size_t n = g.slice_size(j);
    const std::size_t inner = g.stride(j);
    const std::size_t outer = g.size() / (n * inner);
    GridFunction r(f.grid());
    auto src = f.values();
    auto dst = r.values();
    parallel_for(outer * inner, [&](std::size_t begin, std::size_t end) {
        std::vector<cplx> in(n), out(n);
        for (std::size_t fiber = begin; fiber < end; ++fiber) {
            const std::size_t o = fiber / inner;
            const std::size_t i = fiber % inner;
            const std::size_t base = o * n * inner + i;
            for (std::size_t k = 0; k < n; ++k)
                in[k] = src[base + k * inner];
            op(std::span<const cplx>(in), std::span<cplx>(out));
            for (std::size_t k = 0; k < n; ++k)
                dst[base + k * inner] = out[k];
        }
    }, 1);
    return r;
}

/// Evaluates a function of the physical point at every node.
template <class F>
GridFunction sample_function(const GridPtr& grid, F&& f)
{
    GridFunction r(grid);
    auto out = r.values();
    parallel_for(grid->size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            out[i] = f(std::span<const cplx>(grid->point(i)));
    }, 256);
    return r;
}

namespace detail {

// Replaces axis j (length K) of a row-major tensor with length N via t'[.., a, ..] = sum_b m(a, b) t[.., b, ..].
inline std::vector<cplx> mode_product(const std::vector<cplx>& t, const std::vector<std::size_t>& shape,
                                      std::size_t j, const Eigen::MatrixXcd& m)
{
    std::size_t outer = 1, inner = 1;
    for (std::size_t a = 0; a < j; ++a)
        outer *= shape[a];
    for (std::size_t a = j + 1; a < shape.size(); ++a)
        inner *= shape[a];
    const auto k = static_cast<Eigen::Index>(shape[j]);
    const auto n = m.rows();
    std::vector<cplx> r(outer * static_cast<std::size_t>(n) * inner);
    using Block = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    for (std::size_t o = 0; o < outer; ++o) {
        Eigen::Map<const Block> src(t.data() + o * k * inner, k, static_cast<Eigen::Index>(inner));
        Eigen::Map<Block> dst(r.data() + o * n * inner, n, static_cast<Eigen::Index>(inner));
        dst.noalias() = m * src;
    }
    return r;
}

// Basis z^m zbar^n (a = m * (M + 1) + n) sampled at the physical nodes of slice j: nodes x basis.
inline Eigen::MatrixXcd monomial_basis(const ProductGrid& g, std::size_t j, int M)
{
    const auto z = g.z(j);
    const int k = (M + 1) * (M + 1);
    Eigen::MatrixXcd b(static_cast<Eigen::Index>(z.size()), k);
    for (std::size_t i = 0; i < z.size(); ++i) {
        std::vector<cplx> zp(M + 1), zbp(M + 1);
        zp[0] = zbp[0] = 1.0;
        for (int e = 1; e <= M; ++e) {
            zp[e] = zp[e - 1] * z[i];
            zbp[e] = zbp[e - 1] * std::conj(z[i]);
        }
        for (int m = 0; m <= M; ++m)
            for (int n = 0; n <= M; ++n)
                b(static_cast<Eigen::Index>(i), m * (M + 1) + n) = zp[m] * zbp[n];
    }
    return b;
}

} // namespace detail

/// Pointwise samples of a density at the grid nodes (through phi on conformal slices).
template <Coefficient C>
GridFunction sample_to_grid(const MonomialDensity<C>& d, const GridPtr& grid)
{
    const std::size_t ns = grid->slices();
    if (d.slices() != ns)
        throw ShapeError("density and grid have different numbers of slices");
    const int M = d.actual_degree();
    const std::size_t k = static_cast<std::size_t>(M + 1) * (M + 1);
    std::vector<std::size_t> shape(ns, k);
    std::vector<cplx> t(static_cast<std::size_t>(std::pow(k, ns) + 0.5));
    for (const auto& [mono, c] : d.terms()) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < ns; ++j)
            idx = idx * k + static_cast<std::size_t>(mono.z(j) * (M + 1) + mono.zbar(j));
        t[idx] = CoeffTraits<C>::to_complex(c);
    }
    for (std::size_t j = 0; j < ns; ++j) {
        t = detail::mode_product(t, shape, j, detail::monomial_basis(*grid, j, M));
        shape[j] = grid->slice_size(j);
    }
    return GridFunction(grid, std::move(t));
}

/// Spectral interpolant at a physical point (one coordinate per slice), collapsing the last slice first.
inline cplx interpolate(const GridFunction& f, std::span<const cplx> z)
{
    const auto& g = *f.grid();
    if (z.size() != g.slices())
        throw ShapeError("interpolation point has the wrong number of coordinates");
    std::vector<cplx> t(f.values().begin(), f.values().end());
    for (std::size_t j = g.slices(); j-- > 0;) {
        const std::size_t n = g.slice_size(j);
        const std::size_t outer = t.size() / n;
        const cplx zeta = g.slice(j).preimage_unchecked(z[j]);
        std::vector<cplx> r(outer);
        for (std::size_t o = 0; o < outer; ++o)
            r[o] = g.engine(j).interpolate(std::span<const cplx>(t.data() + o * n, n), zeta);
        t = std::move(r);
    }
    return t[0];
}

inline cplx interpolate(const GridFunction& f, cplx z) { return interpolate(f, std::span<const cplx>(&z, 1)); }

/// Integral of u * conj(v) over the product domain by the grid quadrature.
inline cplx inner_product(const GridFunction& u, const GridFunction& v)
{
    GridFunction::check_same(u, v);
    const auto& g = *u.grid();
    cplx s{};
    for (std::size_t i = 0; i < u.size(); ++i)
        s += g.weight(i) * u[i] * std::conj(v[i]);
    return s;
}

/// Weighted least-squares fit of sum c z^alpha zbar^beta with all exponents <= max_degree.
/// The design matrix is a Kronecker product, so the fit factorizes slice by slice.
inline FloatDensity refit_density(const GridFunction& f, int max_degree)
{
    const auto& g = *f.grid();
    const std::size_t ns = g.slices();
    const std::size_t k = static_cast<std::size_t>(max_degree + 1) * (max_degree + 1);
    std::vector<std::size_t> shape(ns);
    for (std::size_t j = 0; j < ns; ++j)
        shape[j] = g.slice_size(j);
    std::vector<cplx> t(f.values().begin(), f.values().end());
    for (std::size_t j = 0; j < ns; ++j) {
        const auto w = g.weights(j);
        Eigen::MatrixXcd a = detail::monomial_basis(g, j, max_degree);
        Eigen::VectorXd sw(a.rows());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            sw[i] = std::sqrt(w[static_cast<std::size_t>(i)]);
        a = sw.asDiagonal() * a;
        if (a.rows() < a.cols())
            throw ShapeError("grid too coarse for the requested refit degree");
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
        const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
        const Eigen::MatrixXcd r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
        Eigen::MatrixXcd pinv = r.triangularView<Eigen::Upper>().solve(q.adjoint());
        pinv = pinv * sw.asDiagonal();
        t = detail::mode_product(t, shape, j, pinv);
        shape[j] = k;
    }
    FloatDensity d(ns, max_degree);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        Monomial m(ns);
        std::size_t rest = idx;
        for (std::size_t j = ns; j-- > 0;) {
            const auto a = static_cast<int>(rest % k);
            rest /= k;
            m.set(j, a / (max_degree + 1), a % (max_degree + 1));
        }
        d.accumulate(m, t[idx]);
    }
    return d;
}

} // namespace dbar
