#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "dbar/errors.hpp"
#include "dbar/rational.hpp"
#include "dbar/slice.hpp"

namespace dbar {

/// Representation mode of a coefficient type. Exact never degrades to floating.
enum class Mode { exact, floating };

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<GaussianRational>
{
    static constexpr Mode mode = Mode::exact;
    static GaussianRational zero() { return {}; }
    static GaussianRational from_ratio(std::int64_t n, std::int64_t d) { return Rational(n, d); }
    static bool is_zero(const GaussianRational& c) { return c.is_zero(); }
    static GaussianRational conj(const GaussianRational& c) { return c.conj(); }
    static cplx to_complex(const GaussianRational& c) { return c.to_complex(); }
    static GaussianRational scale(const GaussianRational& c, const Rational& r) { return c * r; }
};

template <>
struct CoeffTraits<cplx>
{
    static constexpr Mode mode = Mode::floating;
    static cplx zero() { return {}; }
    static cplx from_ratio(std::int64_t n, std::int64_t d) { return static_cast<double>(n) / static_cast<double>(d); }
    static bool is_zero(const cplx& c) { return c == cplx{}; }
    static cplx conj(const cplx& c) { return std::conj(c); }
    static cplx to_complex(const cplx& c) { return c; }
    static cplx scale(const cplx& c, const Rational& r) { return c * r.to_double(); }
};

template <class C>
concept Coefficient = requires { CoeffTraits<C>::mode; };

/// Exponents of z_j^{m_j} zbar_j^{n_j} over n slices.
class Monomial
{
public:
    Monomial() = default;
    explicit Monomial(std::size_t nslices) : e_(2 * nslices, 0) {}
    /// {(m_1, n_1), (m_2, n_2), ...}
    Monomial(std::initializer_list<std::pair<int, int>> powers)
    {
        for (auto [m, n] : powers) {
            e_.push_back(m);
            e_.push_back(n);
        }
    }

    std::size_t slices() const noexcept { return e_.size() / 2; }
    int z(std::size_t j) const { return e_[2 * j]; }
    int zbar(std::size_t j) const { return e_[2 * j + 1]; }
    void set(std::size_t j, int m, int n)
    {
        e_[2 * j] = m;
        e_[2 * j + 1] = n;
    }

    int max_exponent() const noexcept { return e_.empty() ? 0 : *std::max_element(e_.begin(), e_.end()); }
    int total_degree() const noexcept
    {
        int s = 0;
        for (int v : e_)
            s += v;
        return s;
    }
    /// Angular frequency m_j - n_j in slice j.
    int frequency(std::size_t j) const { return z(j) - zbar(j); }

    friend Monomial operator*(const Monomial& a, const Monomial& b)
    {
        Monomial r = a;
        for (std::size_t i = 0; i < r.e_.size(); ++i)
            r.e_[i] += b.e_[i];
        return r;
    }

    auto operator<=>(const Monomial&) const = default;

    friend std::ostream& operator<<(std::ostream& os, const Monomial& m)
    {
        for (std::size_t j = 0; j < m.slices(); ++j)
            os << "z" << j + 1 << "^" << m.z(j) << " zb" << j + 1 << "^" << m.zbar(j) << (j + 1 < m.slices() ? " " : "");
        return os;
    }

private:
    std::vector<int> e_;
};

/// Finite sum of c * prod_j z_j^{m_j} zbar_j^{n_j} with every exponent <= max_degree.
/// Immutable value type; arithmetic returns new densities of the same coefficient type.
template <Coefficient C>
class MonomialDensity
{
public:
    using coefficient_type = C;
    using traits = CoeffTraits<C>;
    using term_map = std::map<Monomial, C>;

    static constexpr Mode mode() noexcept { return traits::mode; }

    MonomialDensity() = default;

    MonomialDensity(std::size_t nslices, int max_degree) : nslices_(nslices), max_degree_(max_degree)
    {
        if (nslices == 0)
            throw ShapeError("density needs at least one slice");
        if (max_degree < 0)
            throw ShapeError("negative max degree");
    }

    MonomialDensity(std::size_t nslices, int max_degree, term_map terms) : MonomialDensity(nslices, max_degree)
    {
        for (auto& [mono, c] : terms)
            insert(mono, c);
    }

    static MonomialDensity constant(std::size_t nslices, C c, int max_degree = 0)
    {
        return monomial(Monomial(nslices), std::move(c), max_degree);
    }

    /// Single term; the max degree defaults to the largest exponent of the term.
    static MonomialDensity monomial(const Monomial& m, C c, int max_degree = -1)
    {
        MonomialDensity d(m.slices(), std::max(max_degree, m.max_exponent()));
        d.insert(m, std::move(c));
        return d;
    }

    std::size_t slices() const noexcept { return nslices_; }
    int max_degree() const noexcept { return max_degree_; }
    const term_map& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    C coefficient(const Monomial& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? traits::zero() : it->second;
    }

    int actual_degree() const noexcept
    {
        int d = 0;
        for (const auto& [m, c] : terms_)
            d = std::max(d, m.max_exponent());
        return d;
    }

    int total_degree() const noexcept
    {
        int d = 0;
        for (const auto& [m, c] : terms_)
            d = std::max(d, m.total_degree());
        return d;
    }

    /// Same terms under a different bound (must still cover every exponent).
    MonomialDensity with_max_degree(int max_degree) const
    {
        if (max_degree < actual_degree())
            throw ShapeError("max degree below an existing exponent");
        MonomialDensity r = *this;
        r.max_degree_ = max_degree;
        return r;
    }

    /// Maximum coefficient magnitude (0 exactly iff the density is zero).
    double max_abs_coefficient() const
    {
        double m = 0.0;
        for (const auto& [mono, c] : terms_)
            m = std::max(m, std::abs(traits::to_complex(c)));
        return m;
    }

    cplx evaluate(std::span<const cplx> z) const
    {
        if (z.size() != nslices_)
            throw ShapeError("evaluation point has the wrong number of coordinates");
        cplx s{};
        for (const auto& [m, c] : terms_) {
            cplx t = traits::to_complex(c);
            for (std::size_t j = 0; j < nslices_; ++j) {
                if (m.z(j))
                    t *= std::pow(z[j], m.z(j));
                if (m.zbar(j))
                    t *= std::pow(std::conj(z[j]), m.zbar(j));
            }
            s += t;
        }
        return s;
    }

    cplx evaluate(cplx z) const { return evaluate(std::span<const cplx>(&z, 1)); }

    /// Float copy; the only way out of exact mode.
    MonomialDensity<cplx> to_float() const
    {
        typename MonomialDensity<cplx>::term_map t;
        for (const auto& [m, c] : terms_)
            t.emplace(m, traits::to_complex(c));
        return MonomialDensity<cplx>(nslices_, max_degree_, std::move(t));
    }

    MonomialDensity scaled(const C& s) const
    {
        MonomialDensity r(nslices_, max_degree_);
        for (const auto& [m, c] : terms_)
            r.accumulate(m, c * s);
        return r;
    }

    MonomialDensity scaled(const Rational& s) const
    {
        MonomialDensity r(nslices_, max_degree_);
        for (const auto& [m, c] : terms_)
            r.accumulate(m, traits::scale(c, s));
        return r;
    }

    friend MonomialDensity operator+(const MonomialDensity& a, const MonomialDensity& b)
    {
        check_compatible(a, b);
        MonomialDensity r = a;
        r.max_degree_ = std::max(a.max_degree_, b.max_degree_);
        for (const auto& [m, c] : b.terms_)
            r.accumulate(m, c);
        return r;
    }

    friend MonomialDensity operator-(const MonomialDensity& a)
    {
        MonomialDensity r(a.nslices_, a.max_degree_);
        for (const auto& [m, c] : a.terms_)
            r.terms_.emplace(m, -c);
        return r;
    }

    friend MonomialDensity operator-(const MonomialDensity& a, const MonomialDensity& b) { return a + (-b); }

    /// Pointwise product; the degree bound adds.
    friend MonomialDensity operator*(const MonomialDensity& a, const MonomialDensity& b)
    {
        check_compatible(a, b);
        MonomialDensity r(a.nslices_, a.max_degree_ + b.max_degree_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.accumulate(ma * mb, ca * cb);
        return r;
    }

    friend bool operator==(const MonomialDensity& a, const MonomialDensity& b)
    {
        return a.nslices_ == b.nslices_ && a.terms_ == b.terms_;
    }

    /// Adds c to the coefficient of m, dropping zero results. Builder use only (before sharing).
    void accumulate(const Monomial& m, const C& c)
    {
        if (traits::is_zero(c))
            return;
        check_term(m);
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = it->second + c;
            if (traits::is_zero(it->second))
                terms_.erase(it);
        }
    }

private:
    void insert(const Monomial& m, C c)
    {
        accumulate(m, c);
    }

    void check_term(const Monomial& m) const
    {
        if (m.slices() != nslices_)
            throw ShapeError("monomial has the wrong number of slices");
        if (m.max_exponent() > max_degree_) {
            std::ostringstream os;
            os << "monomial " << m << " exceeds max degree " << max_degree_;
            throw ShapeError(os.str());
        }
    }

    static void check_compatible(const MonomialDensity& a, const MonomialDensity& b)
    {
        if (a.nslices_ != b.nslices_)
            throw ShapeError("densities live on different numbers of slices");
    }

    std::size_t nslices_ = 1;
    int max_degree_ = 0;
    term_map terms_;
};

using ExactDensity = MonomialDensity<GaussianRational>;
using FloatDensity = MonomialDensity<cplx>;

/// Wirtinger derivative d/dz_j.
template <Coefficient C>
MonomialDensity<C> dz(const MonomialDensity<C>& f, std::size_t j)
{
    MonomialDensity<C> r(f.slices(), f.max_degree());
    for (const auto& [m, c] : f.terms()) {
        if (m.z(j) == 0)
            continue;
        Monomial mm = m;
        mm.set(j, m.z(j) - 1, m.zbar(j));
        r.accumulate(mm, CoeffTraits<C>::scale(c, Rational(m.z(j))));
    }
    return r;
}

/// Wirtinger derivative d/dzbar_j.
template <Coefficient C>
MonomialDensity<C> dzbar(const MonomialDensity<C>& f, std::size_t j)
{
    MonomialDensity<C> r(f.slices(), f.max_degree());
    for (const auto& [m, c] : f.terms()) {
        if (m.zbar(j) == 0)
            continue;
        Monomial mm = m;
        mm.set(j, m.z(j), m.zbar(j) - 1);
        r.accumulate(mm, CoeffTraits<C>::scale(c, Rational(m.zbar(j))));
    }
    return r;
}

/// Laplacian in z_j: 4 d_j dbar_j.
template <Coefficient C>
MonomialDensity<C> laplacian(const MonomialDensity<C>& f, std::size_t j)
{
    return dz(dzbar(f, j), j).scaled(Rational(4));
}

/// Complex conjugate function: conj(c) zbar^m z^n.
template <Coefficient C>
MonomialDensity<C> conjugate(const MonomialDensity<C>& f)
{
    MonomialDensity<C> r(f.slices(), f.max_degree());
    for (const auto& [m, c] : f.terms()) {
        Monomial mm = m;
        for (std::size_t j = 0; j < m.slices(); ++j)
            mm.set(j, m.zbar(j), m.z(j));
        r.accumulate(mm, CoeffTraits<C>::conj(c));
    }
    return r;
}

/// Value c * pi^power, the form every exact integral over a product of discs takes.
template <Coefficient C>
struct PiScaled
{
    C coefficient{};
    int pi_power = 0;

    cplx value() const { return CoeffTraits<C>::to_complex(coefficient) * std::pow(std::numbers::pi, pi_power); }
    bool is_zero() const { return CoeffTraits<C>::is_zero(coefficient); }
};

/// Integral over the disc of z^a zbar^b: pi/(a+1) if a == b, else 0.
inline Rational disc_monomial_integral_over_pi(int a, int b)
{
    return a == b ? Rational(1, a + 1) : Rational(0);
}

/// Exact L^2 pairing <u, v> = int u conj(v) over a product of unit discs, in closed form.
template <Coefficient C>
PiScaled<C> inner_product(const MonomialDensity<C>& u, const MonomialDensity<C>& v)
{
    if (u.slices() != v.slices())
        throw ShapeError("inner product of densities on different products");
    const std::size_t n = u.slices();
    // Only pairs with equal frequency vectors contribute.
    std::map<std::vector<int>, std::vector<std::pair<const Monomial*, const C*>>> by_freq;
    for (const auto& [m, c] : v.terms()) {
        std::vector<int> f(n);
        for (std::size_t j = 0; j < n; ++j)
            f[j] = m.frequency(j);
        by_freq[f].emplace_back(&m, &c);
    }
    C acc = CoeffTraits<C>::zero();
    std::vector<int> f(n);
    for (const auto& [mu, cu] : u.terms()) {
        for (std::size_t j = 0; j < n; ++j)
            f[j] = mu.frequency(j);
        auto it = by_freq.find(f);
        if (it == by_freq.end())
            continue;
        for (const auto& [mv, cv] : it->second) {
            Rational w(1);
            for (std::size_t j = 0; j < n; ++j)
                w = w * Rational(1, mu.z(j) + mv->zbar(j) + 1);
            acc = acc + CoeffTraits<C>::scale(cu * CoeffTraits<C>::conj(*cv), w);
        }
    }
    return {acc, static_cast<int>(n)};
}

/// Exact calculus is disc-specific.
inline void require_disc(const SliceDomain& s, const char* what)
{
    if (!s.is_disc())
        throw RepresentationError(std::string(what) + ": exact monomial path needs a unit-disc slice");
}

} // namespace dbar
