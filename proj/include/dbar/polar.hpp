#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "dbar/errors.hpp"
#include "dbar/quadrature.hpp"

namespace dbar {

using cplx = std::complex<double>;

/// Polar tensor grid on the unit disc (Gauss–Legendre radii on (0,1), equispaced angles) and the
/// disc operators acting on samples at its nodes.
///
/// Samples are stored radius-major: value(ir, it) = v[ir * ntheta + it]. Every operator works
/// per angular Fourier mode: a mode-k input F_k(rho) e^{ik theta} is mapped to a single output
/// mode by a radial integral or differential operator, so the scheme is exact (up to rounding) on
/// polynomial data whose radial degree stays below nr. The Nyquist mode of an even ntheta is
/// always dropped.
class PolarSpectral
{
public:
    enum class Op {
        dbar,      ///< d/dzbar
        d,         ///< d/dz
        cauchy,    ///< -(1/pi) int f(w)/(w - z)
        canonical, ///< (1/pi) int [wbar/(1 - z wbar) - 1/(w - z)] f(w)
        dirichlet, ///< -4 int g(z, w) f(w), g the disc Green's function
        bergman,   ///< int f(w) / (pi (1 - z wbar)^2)
    };

    PolarSpectral(int nr, int ntheta) : nr_(nr), ntheta_(ntheta)
    {
        if (nr < 2 || ntheta < 4)
            throw ShapeError("polar grid needs nr >= 2 and ntheta >= 4");
        auto rule = gauss_legendre(nr, 0.0, 1.0);
        radii_ = std::move(rule.nodes);
        radial_weights_ = std::move(rule.weights);
        bary_ = barycentric_weights(radii_);
        const auto d = differentiation_matrix(radii_, bary_);
        diff_ = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.data(), nr, nr);
    }

    PolarSpectral(const PolarSpectral&) = delete;
    PolarSpectral& operator=(const PolarSpectral&) = delete;

    int nr() const noexcept { return nr_; }
    int ntheta() const noexcept { return ntheta_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nr_) * ntheta_; }

    std::span<const double> radii() const noexcept { return radii_; }
    std::span<const double> radial_weights() const noexcept { return radial_weights_; }

    double theta(int it) const noexcept { return 2.0 * std::numbers::pi * it / ntheta_; }

    cplx node(int ir, int it) const { return std::polar(radii_[ir], theta(it)); }

    /// Area weight: radial GL weight * r * 2 pi / ntheta.
    double weight(int ir, int it) const noexcept
    {
        (void)it;
        return radial_weights_[ir] * radii_[ir] * 2.0 * std::numbers::pi / ntheta_;
    }

    /// Largest |k| that survives every operator.
    int max_mode() const noexcept { return (ntheta_ - 1) / 2; }

    void apply(Op op, std::span<const cplx> in, std::span<cplx> out) const
    {
        if (in.size() != size() || out.size() != size())
            throw ShapeError("polar operator input has the wrong length");
        const Eigen::MatrixXcd modes = to_modes(in);
        Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(nr_, ntheta_);
        const Tables* tab = (op == Op::cauchy || op == Op::canonical || op == Op::dirichlet) ? &tables() : nullptr;

        for (int j = 0; j < ntheta_; ++j) {
            const int k = mode_of_bin(j);
            if (!representable(k))
                continue;
            const Eigen::VectorXcd col = modes.col(j);
            switch (op) {
            case Op::dbar: {
                if (!representable(k + 1))
                    break;
                Eigen::VectorXcd v = real_times(diff_, col);
                for (int i = 0; i < nr_; ++i)
                    v[i] = 0.5 * (v[i] - (k / radii_[i]) * col[i]);
                result.col(bin_of_mode(k + 1)) = v;
                break;
            }
            case Op::d: {
                if (!representable(k - 1))
                    break;
                Eigen::VectorXcd v = real_times(diff_, col);
                for (int i = 0; i < nr_; ++i)
                    v[i] = 0.5 * (v[i] + (k / radii_[i]) * col[i]);
                result.col(bin_of_mode(k - 1)) = v;
                break;
            }
            case Op::cauchy:
            case Op::canonical: {
                if (!representable(k - 1))
                    break;
                Eigen::VectorXcd v = real_times(tab->cauchy_split[j], col);
                if (op == Op::canonical && k >= 1) {
                    // smooth part: 2 r^{k-1} int_0^1 F_k(rho) rho^{k+1} drho
                    const cplx moment = full_moment(col, k + 1);
                    for (int i = 0; i < nr_; ++i)
                        v[i] += 2.0 * std::pow(radii_[i], k - 1) * moment;
                }
                result.col(bin_of_mode(k - 1)) = v;
                break;
            }
            case Op::dirichlet:
                result.col(j) = real_times(tab->dirichlet[std::abs(k)], col);
                break;
            case Op::bergman: {
                if (k < 0)
                    break;
                const cplx moment = full_moment(col, k + 1);
                Eigen::VectorXcd v(nr_);
                for (int i = 0; i < nr_; ++i)
                    v[i] = 2.0 * (k + 1) * std::pow(radii_[i], k) * moment;
                result.col(j) = v;
                break;
            }
            }
        }
        from_modes(result, out);
    }

    /// Spectral interpolant of grid samples at an arbitrary point (radius may slightly exceed 1).
    cplx interpolate(std::span<const cplx> values, cplx zeta) const
    {
        if (values.size() != size())
            throw ShapeError("interpolation input has the wrong length");
        const Eigen::MatrixXcd modes = to_modes(values);
        const double rho = std::abs(zeta);
        const double alpha = std::arg(zeta);
        std::vector<double> row(nr_);
        barycentric_row(radii_, bary_, rho, row);
        cplx s{};
        for (int j = 0; j < ntheta_; ++j) {
            const int k = mode_of_bin(j);
            if (!representable(k))
                continue;
            cplx fk{};
            for (int i = 0; i < nr_; ++i)
                fk += row[i] * modes(i, j);
            s += fk * std::polar(1.0, k * alpha);
        }
        return s;
    }

    /// Fourier coefficients F_k(r_i) (column = FFT bin).
    Eigen::MatrixXcd to_modes(std::span<const cplx> in) const
    {
        Eigen::FFT<double> fft;
        fft.SetFlag(Eigen::FFT<double>::Unscaled);
        Eigen::MatrixXcd modes(nr_, ntheta_);
        std::vector<cplx> row(ntheta_);
        std::vector<cplx> spec;
        for (int i = 0; i < nr_; ++i) {
            std::copy(in.begin() + static_cast<std::ptrdiff_t>(i) * ntheta_,
                      in.begin() + static_cast<std::ptrdiff_t>(i + 1) * ntheta_, row.begin());
            fft.fwd(spec, row);
            for (int j = 0; j < ntheta_; ++j)
                modes(i, j) = spec[j] / static_cast<double>(ntheta_);
        }
        return modes;
    }

    void from_modes(const Eigen::MatrixXcd& modes, std::span<cplx> out) const
    {
        Eigen::FFT<double> fft;
        fft.SetFlag(Eigen::FFT<double>::Unscaled);
        std::vector<cplx> spec(ntheta_);
        std::vector<cplx> row;
        for (int i = 0; i < nr_; ++i) {
            for (int j = 0; j < ntheta_; ++j)
                spec[j] = modes(i, j);
            fft.inv(row, spec);
            std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(i) * ntheta_);
        }
    }

    int mode_of_bin(int j) const noexcept { return j <= ntheta_ / 2 ? j : j - ntheta_; }
    int bin_of_mode(int k) const noexcept { return k >= 0 ? k : k + ntheta_; }
    bool representable(int k) const noexcept { return std::abs(k) <= max_mode(); }

private:
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    struct Tables
    {
        std::vector<Eigen::MatrixXd> cauchy_split; // by FFT bin
        std::vector<Eigen::MatrixXd> dirichlet;    // by |k|
    };

    static Eigen::VectorXcd real_times(const Eigen::MatrixXd& m, const Eigen::VectorXcd& v)
    {
        Eigen::VectorXcd r(m.rows());
        r.real() = m * v.real();
        r.imag() = m * v.imag();
        return r;
    }

    // int_0^1 F(rho) rho^power drho on the GL nodes.
    cplx full_moment(const Eigen::VectorXcd& col, int power) const
    {
        cplx s{};
        for (int i = 0; i < nr_; ++i)
            s += radial_weights_[i] * std::pow(radii_[i], power) * col[i];
        return s;
    }

    const Tables& tables() const
    {
        std::call_once(tables_once_, [this] { tables_ = build_tables(); });
        return *tables_;
    }

    // Graded GL panels on [0, r] (refined toward r) and [r, 1] (refined toward r).
    void panel_points(double r, std::vector<double>& in_x, std::vector<double>& in_w,
                      std::vector<double>& out_x, std::vector<double>& out_w) const
    {
        constexpr int levels = 10;
        constexpr int q = 20;
        static const QuadratureRule ref = gauss_legendre(q, 0.0, 1.0);
        auto add = [&](double a, double b, std::vector<double>& x, std::vector<double>& w) {
            for (int i = 0; i < q; ++i) {
                x.push_back(a + (b - a) * ref.nodes[i]);
                w.push_back((b - a) * ref.weights[i]);
            }
        };
        in_x.clear();
        in_w.clear();
        out_x.clear();
        out_w.clear();
        double a = 0.0;
        for (int l = 1; l <= levels; ++l) {
            const double b = r * (1.0 - std::ldexp(1.0, -l));
            add(a, b, in_x, in_w);
            a = b;
        }
        add(a, r, in_x, in_w);

        const double delta = r / 1024.0;
        a = r;
        double step = delta;
        while (a < 1.0) {
            const double b = std::min(1.0, r + step);
            add(a, b, out_x, out_w);
            a = b;
            step *= 2.0;
        }
    }

    std::unique_ptr<Tables> build_tables() const
    {
        auto tab = std::make_unique<Tables>();
        const int kmax = max_mode();
        tab->cauchy_split.assign(ntheta_, Eigen::MatrixXd::Zero(nr_, nr_));
        tab->dirichlet.assign(kmax + 1, Eigen::MatrixXd::Zero(nr_, nr_));

        std::vector<double> in_x, in_w, out_x, out_w;
        std::vector<double> row(nr_);
        for (int i = 0; i < nr_; ++i) {
            const double r = radii_[i];
            panel_points(r, in_x, in_w, out_x, out_w);
            const auto qin = static_cast<int>(in_x.size());
            const auto qout = static_cast<int>(out_x.size());
            RowMatrix lin(qin, nr_);
            RowMatrix lout(qout, nr_);
            for (int q = 0; q < qin; ++q) {
                barycentric_row(radii_, bary_, in_x[q], row);
                for (int b = 0; b < nr_; ++b)
                    lin(q, b) = row[b];
            }
            for (int q = 0; q < qout; ++q) {
                barycentric_row(radii_, bary_, out_x[q], row);
                for (int b = 0; b < nr_; ++b)
                    lout(q, b) = row[b];
            }

            // Cauchy split kernels, one row per FFT bin.
            RowMatrix kin = RowMatrix::Zero(ntheta_, qin);
            RowMatrix kout = RowMatrix::Zero(ntheta_, qout);
            for (int q = 0; q < qout; ++q) {
                // k >= 1: -2 (r/rho)^{k-1} on [r, 1]
                const double ratio = r / out_x[q];
                double pw = 1.0;
                for (int k = 1; k <= kmax; ++k) {
                    kout(bin_of_mode(k), q) = -2.0 * pw * out_w[q];
                    pw *= ratio;
                }
            }
            for (int q = 0; q < qin; ++q) {
                // k <= 0: 2 (rho/r)^{1-k} on [0, r]
                const double ratio = in_x[q] / r;
                double pw = ratio;
                for (int k = 0; k >= -kmax; --k) {
                    kin(bin_of_mode(k), q) = 2.0 * pw * in_w[q];
                    pw *= ratio;
                }
            }
            const RowMatrix cauchy_rows = kin * lin + kout * lout;
            for (int j = 0; j < ntheta_; ++j)
                tab->cauchy_split[j].row(i) = cauchy_rows.row(j);

            // Dirichlet kernels by |k|.
            RowMatrix din = RowMatrix::Zero(kmax + 1, qin);
            RowMatrix dout = RowMatrix::Zero(kmax + 1, qout);
            const double logr = std::log(r);
            for (int q = 0; q < qin; ++q) {
                const double rho = in_x[q];
                din(0, q) = 4.0 * logr * rho * in_w[q];
                const double ratio = rho / r;
                double pw = ratio;
                for (int k = 1; k <= kmax; ++k) {
                    din(k, q) = -(2.0 / k) * pw * rho * in_w[q];
                    pw *= ratio;
                }
            }
            for (int q = 0; q < qout; ++q) {
                const double rho = out_x[q];
                dout(0, q) = 4.0 * std::log(rho) * rho * out_w[q];
                const double ratio = r / rho;
                double pw = ratio;
                for (int k = 1; k <= kmax; ++k) {
                    dout(k, q) = -(2.0 / k) * pw * rho * out_w[q];
                    pw *= ratio;
                }
            }
            const RowMatrix dir_rows = din * lin + dout * lout;
            for (int k = 0; k <= kmax; ++k) {
                tab->dirichlet[k].row(i) = dir_rows.row(k);
                if (k == 0)
                    continue;
                // + (2/k) r^k int_0^1 rho^{k+1} F drho  (regular part of the log kernel)
                const double rk = std::pow(r, k);
                for (int b = 0; b < nr_; ++b)
                    tab->dirichlet[k](i, b) += (2.0 / k) * rk * radial_weights_[b] * std::pow(radii_[b], k + 1);
            }
        }
        return tab;
    }

    int nr_;
    int ntheta_;
    std::vector<double> radii_;
    std::vector<double> radial_weights_;
    std::vector<double> bary_;
    Eigen::MatrixXd diff_;

    mutable std::once_flag tables_once_;
    mutable std::unique_ptr<Tables> tables_;
};

} // namespace dbar
