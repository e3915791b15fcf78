#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbar/density.hpp"
#include "dbar/errors.hpp"
#include "dbar/green.hpp"
#include "dbar/grid.hpp"
#include "dbar/io.hpp"
#include "dbar/product_ops.hpp"
#include "dbar/random.hpp"
#include "dbar/sharpness.hpp"
#include "dbar/slice_ops.hpp"
#include "dbar/sobolev.hpp"

namespace dbar {

namespace exit_code {
inline constexpr int pass = 0;
inline constexpr int assertion = 1;
inline constexpr int config = 2;
inline constexpr int io = 3;
} // namespace exit_code

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"kernel-check", "spencer-check", "slice-identities", "product-solve",
                                                "orthogonality", "norm-sweep", "sharpness"};
    return names;
}

inline std::map<std::string, double> default_tolerances()
{
    return {
        {"kernel", 1e-4},
        {"symmetry", 1e-12},
        {"boundary_green", 1e-6},
        {"spencer_numeric", 1e-6},
        {"two_path", 1e-8},
        {"boundary_trace", 1e-10},
        {"dbar_numeric", 1e-8},
        {"orthogonality_numeric", 1e-8},
        {"norm_agreement", 1e-6},
        {"growth_factor", 2.0},
        {"tail_change", 0.01},
        {"r2", 0.99},
        {"cauchy", 1e-10},
        {"golden_rtol", 1e-9},
    };
}

struct RunConfig
{
    DomainConfig domain;
    std::uint64_t seed = 42;
    std::map<std::string, double> tolerances = default_tolerances();
    std::filesystem::path out = "out";
    SharpnessConfig sharpness;
    std::vector<int> sweep_degrees{1, 2, 3, 4, 5, 6, 7, 8};
    int sweep_count = 6;
    std::vector<std::string> sweep_operators{"T", "G", "T-product"};
    int product_forms = 50;

    double tol(const std::string& name) const
    {
        auto it = tolerances.find(name);
        if (it == tolerances.end())
            throw ConfigError("unknown tolerance '" + name + "'");
        return it->second;
    }

    /// NAME=VALUE; unknown names and nonpositive values are rejected.
    void set_tolerance(const std::string& assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            throw ConfigError("tolerance override must read NAME=VALUE");
        const std::string name = assignment.substr(0, eq);
        if (!tolerances.count(name))
            throw ConfigError("unknown tolerance '" + name + "'");
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(assignment.substr(eq + 1), &used);
            if (used != assignment.size() - eq - 1)
                throw ConfigError("bad tolerance value in '" + assignment + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("bad tolerance value in '" + assignment + "'");
        }
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("tolerance '" + name + "' must be positive");
        tolerances[name] = v;
    }
};

/// Domain keys plus optional "seed", "tolerances", "sharpness" and "sweep" sections.
inline RunConfig parse_run_config(const nlohmann::json& j)
{
    RunConfig c;
    c.domain = parse_domain(j);
    try {
        if (j.contains("seed"))
            c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tolerances"))
            for (const auto& [k, v] : j.at("tolerances").items())
                c.set_tolerance(k + "=" + format_double(v.get<double>()));
        if (j.contains("sharpness")) {
            const auto& s = j.at("sharpness");
            c.sharpness.k = s.value("k", c.sharpness.k);
            c.sharpness.p = s.value("p", c.sharpness.p);
            c.sharpness.q = s.value("q", c.sharpness.q);
            c.sharpness.eps = s.value("eps", c.sharpness.eps);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            c.sweep_degrees = s.value("degrees", c.sweep_degrees);
            c.sweep_count = s.value("count", c.sweep_count);
            c.sweep_operators = s.value("operators", c.sweep_operators);
        }
        c.product_forms = j.value("product_forms", c.product_forms);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.sharpness.validate();
    for (const auto& op : c.sweep_operators)
        (void)parse_sweep_tag(op);
    if (c.sweep_count < 1 || c.sweep_degrees.empty() || c.product_forms < 1)
        throw ConfigError("sweep count, sweep degrees and product_forms must be nonempty/positive");
    return c;
}

struct Check
{
    enum class Kind { at_most, at_least, exactly_zero, flag };

    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    Kind kind = Kind::at_most;

    bool pass() const
    {
        switch (kind) {
        case Kind::at_most:
            return value <= threshold;
        case Kind::at_least:
            return value >= threshold;
        case Kind::exactly_zero:
            return value == 0.0;
        case Kind::flag:
            return value == 1.0;
        }
        return false;
    }

    static const char* kind_name(Kind k)
    {
        switch (k) {
        case Kind::at_most:
            return "at_most";
        case Kind::at_least:
            return "at_least";
        case Kind::exactly_zero:
            return "exactly_zero";
        case Kind::flag:
            return "flag";
        }
        return "?";
    }
};

struct SuiteResult
{
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    std::vector<Table> tables;
    double runtime_ms = 0.0;

    bool pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
    }

    double max_residual() const
    {
        double m = 0.0;
        for (const auto& c : checks)
            if (c.kind == Check::Kind::at_most || c.kind == Check::Kind::exactly_zero)
                m = std::max(m, c.value);
        return m;
    }

    void at_most(std::string name, double value, double threshold)
    {
        checks.push_back({std::move(name), value, threshold, Check::Kind::at_most});
    }
    void at_least(std::string name, double value, double threshold)
    {
        checks.push_back({std::move(name), value, threshold, Check::Kind::at_least});
    }
    void exactly_zero(std::string name, double value)
    {
        checks.push_back({std::move(name), value, 0.0, Check::Kind::exactly_zero});
    }
    void flag(std::string name, bool ok) { checks.push_back({std::move(name), ok ? 1.0 : 0.0, 1.0, Check::Kind::flag}); }
};

namespace detail {

inline std::string slice_tag(const std::string& base, std::size_t j) { return base + "[" + std::to_string(j) + "]"; }

inline std::vector<Monomial> slice_basis(int M)
{
    std::vector<Monomial> b;
    for (int m = 0; m <= M; ++m)
        for (int n = 0; n <= M; ++n)
            b.push_back(Monomial{{m, n}});
    return b;
}

inline GridSpec product_spec(const RunConfig& c)
{
    return c.domain.product_grid ? *c.domain.product_grid : auto_grid_spec(c.domain.degree);
}

inline bool all_discs(const std::vector<SliceDomain>& s)
{
    return std::all_of(s.begin(), s.end(), [](const SliceDomain& d) { return d.is_disc(); });
}

// Exact idempotence and self-adjointness defects of P = P_1 ... P_n on the monomial basis with
// exponents <= M. Pairs with different frequency vectors pair to zero on both sides, so only
// equal-frequency pairs are compared.
inline std::pair<double, double> projection_algebra(std::size_t n, int M)
{
    using D = ExactDensity;
    const std::vector<SliceDomain> slices(n, SliceDomain::unit_disc());
    std::map<std::vector<int>, std::vector<D>> by_freq;
    std::vector<int> e(2 * n, 0);
    double idem = 0.0;
    for (;;) {
        Monomial m(n);
        std::vector<int> freq(n);
        for (std::size_t j = 0; j < n; ++j) {
            m.set(j, e[2 * j], e[2 * j + 1]);
            freq[j] = e[2 * j] - e[2 * j + 1];
        }
        const D u = D::monomial(m, GaussianRational(1), M);
        const D pu = bergman_projection_product(u, slices);
        idem = std::max(idem, (bergman_projection_product(pu, slices) - pu).max_abs_coefficient());
        by_freq[freq].push_back(u);
        std::size_t i = 0;
        while (i < e.size() && ++e[i] > M)
            e[i++] = 0;
        if (i == e.size())
            break;
    }
    double adj = 0.0;
    for (const auto& [freq, group] : by_freq) {
        std::vector<D> projected;
        for (const auto& u : group)
            projected.push_back(bergman_projection_product(u, slices));
        for (std::size_t a = 0; a < group.size(); ++a) {
            for (std::size_t b = 0; b < group.size(); ++b) {
                const auto lhs = inner_product(projected[a], group[b]);
                const auto rhs = inner_product(group[a], projected[b]);
                adj = std::max(adj, std::abs((lhs.coefficient - rhs.coefficient).to_complex()));
            }
        }
    }
    return {idem, adj};
}

inline std::vector<SliceDomain> product_slices(const RunConfig& c)
{
    if (c.domain.slices.size() >= 2)
        return c.domain.slices;
    return {c.domain.slices[0], c.domain.slices[0]};
}

} // namespace detail

// ---------------------------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------------------------

inline void suite_kernel_check(const RunConfig& c, SuiteResult& r)
{
    Table t{"kernel_check", {"slice", "kind", "kernel_residual", "symmetry", "min_green", "boundary"}, {}};
    for (std::size_t j = 0; j < c.domain.slices.size(); ++j) {
        const auto& s = c.domain.slices[j];
        const auto pairs = random_pairs(s, 100, c.seed + j);
        const double res = kernel_green_identity(s, pairs);
        double sym = 0.0, gmin = INFINITY, bnd = 0.0;
        for (const auto& [z, w] : pairs) {
            const double a = green(s, z, w);
            sym = std::max(sym, std::abs(a - green(s, w, z)));
            gmin = std::min(gmin, a);
        }
        // boundary values along rays: z = phi((1 - 1e-8) e^{it})
        for (int i = 0; i < 32; ++i) {
            const cplx zb = s.map(std::polar(1.0 - 1e-8, 2.0 * std::numbers::pi * i / 32));
            for (std::size_t k = 0; k < 8; ++k)
                bnd = std::max(bnd, std::abs(green(s, zb, pairs[k].second)));
        }
        r.at_most(detail::slice_tag("kernel_green_identity", j), res, c.tol("kernel"));
        r.at_most(detail::slice_tag("green_symmetry", j), sym, c.tol("symmetry"));
        r.flag(detail::slice_tag("green_positive", j), gmin > 0.0);
        r.at_most(detail::slice_tag("green_boundary", j), bnd, c.tol("boundary_green"));
        bool rejected = false;
        try {
            const std::pair<cplx, cplx> degenerate{s.map(0.0), s.map(0.0)};
            (void)kernel_green_identity(s, std::span(&degenerate, 1));
        } catch (const PreconditionError&) {
            rejected = true;
        }
        r.flag(detail::slice_tag("degenerate_pair_rejected", j), rejected);
        t.rows.push_back({std::to_string(j), s.is_disc() ? "disc" : "conformal", format_double(res), format_double(sym),
                          format_double(gmin), format_double(bnd)});
    }
    r.tables.push_back(std::move(t));
}

inline void suite_spencer_check(const RunConfig& c, SuiteResult& r)
{
    const int M = c.domain.degree;
    Table t{"spencer_monomials", {"slice", "m", "n", "exact", "numeric"}, {}};
    for (std::size_t j = 0; j < c.domain.slices.size(); ++j) {
        const auto& s = c.domain.slices[j];
        const auto grid = ProductGrid::make({s}, c.domain.grid);
        double exact_worst = 0.0, num_worst = 0.0;
        for (const auto& mono : detail::slice_basis(M)) {
            double ex = NAN;
            if (s.is_disc()) {
                ex = spencer_residual(ExactDensity::monomial(mono, GaussianRational(1)), s);
                exact_worst = std::max(exact_worst, ex);
            }
            const double nu = spencer_residual(sample_to_grid(FloatDensity::monomial(mono, 1.0), grid));
            num_worst = std::max(num_worst, nu);
            t.rows.push_back({std::to_string(j), std::to_string(mono.z(0)), std::to_string(mono.zbar(0)),
                              s.is_disc() ? format_double(ex) : "", format_double(nu)});
        }
        if (s.is_disc())
            r.exactly_zero(detail::slice_tag("spencer_exact", j), exact_worst);
        r.at_most(detail::slice_tag("spencer_numeric", j), num_worst, c.tol("spencer_numeric"));
    }
    r.tables.push_back(std::move(t));
}

inline void suite_slice_identities(const RunConfig& c, SuiteResult& r)
{
    const int M = c.domain.degree;
    Table t{"slice_identities", {"slice", "m", "n", "T_vs_I_minus_P_Ttilde", "kernel_vs_spencer_P", "G_boundary"}, {}};
    for (std::size_t j = 0; j < c.domain.slices.size(); ++j) {
        const auto& s = c.domain.slices[j];
        const auto grid = ProductGrid::make({s}, c.domain.grid);
        double tp = 0.0, pp = 0.0, gb = 0.0;
        double ex_tp = 0.0, ex_dbar = 0.0, ex_lap = 0.0;
        for (const auto& mono : detail::slice_basis(M)) {
            const GridFunction f = sample_to_grid(FloatDensity::monomial(mono, 1.0), grid);
            const GridFunction tt = cauchy_Ttilde(f);
            const double a = (canonical_T(f) - (tt - bergman_P(tt))).max_abs();
            const double b = (bergman_P(f) - bergman_P(f, 0, BergmanRoute::spencer)).max_abs();
            const GridFunction g = dirichlet_G(f);
            double bound = 0.0;
            for (int i = 0; i < 256; ++i)
                bound = std::max(bound, std::abs(interpolate(g, s.map(std::polar(1.0, 2.0 * std::numbers::pi * i / 256)))));
            tp = std::max(tp, a);
            pp = std::max(pp, b);
            gb = std::max(gb, bound);
            if (s.is_disc()) {
                const auto fe = ExactDensity::monomial(mono, GaussianRational(1));
                const auto te = canonical_T(fe, s);
                const auto tte = cauchy_Ttilde(fe, s);
                ex_tp = std::max(ex_tp, (te - (tte - bergman_P(tte, s))).max_abs_coefficient());
                ex_dbar = std::max(ex_dbar, (dzbar(te, 0) - fe).max_abs_coefficient());
                ex_lap = std::max(ex_lap, (laplacian(dirichlet_G(fe, s), 0) - fe.scaled(Rational(4))).max_abs_coefficient());
            }
            t.rows.push_back({std::to_string(j), std::to_string(mono.z(0)), std::to_string(mono.zbar(0)), format_double(a),
                              format_double(b), format_double(bound)});
        }
        r.at_most(detail::slice_tag("T_vs_I_minus_P_Ttilde", j), tp, c.tol("two_path"));
        r.at_most(detail::slice_tag("kernel_vs_spencer_P", j), pp, c.tol("two_path"));
        r.at_most(detail::slice_tag("G_boundary_trace", j), gb, c.tol("boundary_trace"));
        if (s.is_disc()) {
            r.exactly_zero(detail::slice_tag("exact_T_vs_I_minus_P_Ttilde", j), ex_tp);
            r.exactly_zero(detail::slice_tag("exact_dbar_T", j), ex_dbar);
            r.exactly_zero(detail::slice_tag("exact_laplacian_G", j), ex_lap);
        }
    }
    r.tables.push_back(std::move(t));

    // projection algebra on the slice and on the bidisc basis
    const auto [idem1, adj1] = detail::projection_algebra(1, M);
    const auto [idem2, adj2] = detail::projection_algebra(2, M);
    r.exactly_zero("P_idempotent_slice", idem1);
    r.exactly_zero("P_selfadjoint_slice", adj1);
    r.exactly_zero("P_idempotent_product", idem2);
    r.exactly_zero("P_selfadjoint_product", adj2);

    // closed-form vs quadrature Sobolev norms, one variable at the configured grid and on the bidisc
    Table nt{"sobolev_agreement", {"slices", "member", "k", "p", "exact", "numeric", "relative"}, {}};
    double worst = 0.0;
    const std::vector<SobolevIndex> idx{{0, 2.0}, {1, 2.0}, {1, 4.0}, {2, 2.0}};
    const std::vector<SliceDomain> discs{SliceDomain::unit_disc(), SliceDomain::unit_disc()};
    for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
        // |D u|^4 carries angular frequencies up to 4M, so the bidisc grid is sized for p = 4
        const auto grid = n == 1 ? ProductGrid::make({discs[0]}, c.domain.grid)
                                 : ProductGrid::make(discs, GridSpec{2 * M + 4, 4 * M + 2});
        for (int member = 0; member < 3; ++member) {
            Rng rng(c.seed + 100 * n + member);
            const auto f = random_density<cplx>(rng, n, M);
            const GridFunction g = sample_to_grid(f, grid);
            for (const auto& ix : idx) {
                const double e = sobolev_norm(f, ix).total;
                const double v = sobolev_norm(g, ix).total;
                const double rel = std::abs(e - v) / e;
                worst = std::max(worst, rel);
                nt.rows.push_back({std::to_string(n), std::to_string(member), std::to_string(ix.k()), format_double(ix.p()),
                                   format_double(e), format_double(v), format_double(rel)});
            }
        }
    }
    r.at_most("sobolev_exact_vs_numeric", worst, c.tol("norm_agreement"));
    r.tables.push_back(std::move(nt));
}

inline void suite_product_solve(const RunConfig& c, SuiteResult& r)
{
    const int M = c.domain.degree;
    const auto slices = detail::product_slices(c);
    const bool exact = detail::all_discs(slices);
    const auto grid = ProductGrid::make(slices, detail::product_spec(c));
    std::vector<std::size_t> reversed(slices.size());
    std::iota(reversed.rbegin(), reversed.rend(), std::size_t{0});

    Table t{"product_forms",
            {"form", "dbar_exact", "orthogonality_exact", "dbar_numeric", "orthogonality_numeric", "order_swap_numeric",
             "exact_vs_numeric"},
            {}};
    double dbar_e = 0, orth_e = 0, swap_e = 0, dbar_n = 0, orth_n = 0, swap_n = 0, agree = 0;
    for (int i = 0; i < c.product_forms; ++i) {
        Rng rng(c.seed * 7919ULL + static_cast<std::uint64_t>(i));
        const auto fe = random_closed_form<GaussianRational>(rng, slices.size(), M);
        std::vector<GridFunction> comps;
        for (const auto& comp : fe.components())
            comps.push_back(sample_to_grid(comp, grid));
        const Form01<GridFunction> fg(std::move(comps));
        const auto sol = canonical_solution_product(fg);
        const auto sol_rev = canonical_solution_product(fg, reversed);
        const double dn = sol.residuals.at("dbar");
        const double on = orthogonality_residual(sol.u, 6);
        const double sn = (sol.u - sol_rev.u).max_abs();
        dbar_n = std::max(dbar_n, dn);
        orth_n = std::max(orth_n, on);
        swap_n = std::max(swap_n, sn);
        std::vector<std::string> row{std::to_string(i), "", "", format_double(dn), format_double(on), format_double(sn), ""};
        if (exact) {
            const auto se = canonical_solution_product(fe, slices);
            const auto se_rev = canonical_solution_product(fe, slices, reversed);
            const double de = dbar_residual(se.u, fe);
            const double oe = orthogonality_residual(se.u, 6);
            dbar_e = std::max(dbar_e, de);
            orth_e = std::max(orth_e, oe);
            swap_e = std::max(swap_e, (se.u - se_rev.u).max_abs_coefficient());
            const double a = (sample_to_grid(se.u, grid) - sol.u).max_abs();
            agree = std::max(agree, a);
            row[1] = format_double(de);
            row[2] = format_double(oe);
            row[6] = format_double(a);
        }
        t.rows.push_back(std::move(row));
    }
    if (exact) {
        r.exactly_zero("dbar_residual_exact", dbar_e);
        r.exactly_zero("orthogonality_exact", orth_e);
        r.exactly_zero("order_swap_exact", swap_e);
        r.at_most("exact_vs_numeric", agree, c.tol("dbar_numeric"));
    }
    r.at_most("dbar_residual_numeric", dbar_n, c.tol("dbar_numeric"));
    r.at_most("orthogonality_numeric", orth_n, c.tol("orthogonality_numeric"));
    r.at_most("order_swap_numeric", swap_n, c.tol("dbar_numeric"));
    r.tables.push_back(std::move(t));
}

inline void suite_orthogonality(const RunConfig& c, SuiteResult& r)
{
    const int M = c.domain.degree;
    Table t{"orthogonality", {"case", "member", "exact", "numeric"}, {}};
    double ex = 0.0, nu = 0.0;
    for (std::size_t j = 0; j < c.domain.slices.size(); ++j) {
        const auto& s = c.domain.slices[j];
        const auto grid = ProductGrid::make({s}, c.domain.grid);
        for (int member = 0; member < 5; ++member) {
            Rng rng(c.seed + 31 * j + member);
            const auto f = random_density<GaussianRational>(rng, 1, M);
            const double n = slice_orthogonality(canonical_T(sample_to_grid(f, grid)), 2 * M);
            nu = std::max(nu, n);
            std::string e;
            if (s.is_disc()) {
                const double v = orthogonality_residual(canonical_T(f, s), 2 * M);
                ex = std::max(ex, v);
                e = format_double(v);
            }
            t.rows.push_back({detail::slice_tag("slice", j), std::to_string(member), e, format_double(n)});
        }
    }
    const auto slices = detail::product_slices(c);
    const auto grid = ProductGrid::make(slices, detail::product_spec(c));
    const bool exact = detail::all_discs(slices);
    for (int member = 0; member < 5; ++member) {
        Rng rng(c.seed + 1000 + member);
        const auto fe = random_closed_form<GaussianRational>(rng, slices.size(), M);
        std::vector<GridFunction> comps;
        for (const auto& comp : fe.components())
            comps.push_back(sample_to_grid(comp, grid));
        const double n = orthogonality_residual(canonical_solution_product(Form01<GridFunction>(std::move(comps))).u, 6);
        nu = std::max(nu, n);
        std::string e;
        if (exact) {
            const double v = orthogonality_residual(canonical_solution_product(fe, slices).u, 6);
            ex = std::max(ex, v);
            e = format_double(v);
        }
        t.rows.push_back({"product", std::to_string(member), e, format_double(n)});
    }
    r.exactly_zero("orthogonality_exact", ex);
    r.at_most("orthogonality_numeric", nu, c.tol("orthogonality_numeric"));
    r.tables.push_back(std::move(t));
}

inline void suite_norm_sweep(const RunConfig& c, SuiteResult& r)
{
    FamilySpec fam;
    fam.degrees = c.sweep_degrees;
    fam.count = c.sweep_count;
    fam.seed = c.seed;
    const std::vector<SobolevIndex> indices{{1, 2.0}, {1, 4.0}, {2, 2.0}};
    for (const auto& op : c.sweep_operators) {
        const auto tag = parse_sweep_tag(op);
        const auto rows = norm_ratio_sweep(tag, fam, indices);
        Table t{"norm_sweep_" + op, {"degree", "k", "p", "ratio_max", "ratio_mean", "seed"}, {}};
        for (const auto& row : rows)
            t.rows.push_back({std::to_string(row.degree), std::to_string(row.k), format_double(row.p),
                              format_double(row.ratio_max), format_double(row.ratio_mean), std::to_string(row.seed)});
        r.tables.push_back(std::move(t));
        // growth from the middle degree (4 by default) to the top degree (8)
        const int top = *std::max_element(fam.degrees.begin(), fam.degrees.end());
        const int mid = std::max(1, top / 2);
        for (const auto& ix : indices) {
            double at_mid = NAN, at_top = NAN;
            for (const auto& row : rows) {
                if (row.k != ix.k() || row.p != ix.p())
                    continue;
                if (row.degree == mid)
                    at_mid = row.ratio_max;
                if (row.degree == top)
                    at_top = row.ratio_max;
            }
            const std::string name = "growth_" + op + "_k" + std::to_string(ix.k()) + "_p" + format_double(ix.p());
            if (std::isnan(at_mid) || std::isnan(at_top)) {
                r.flag(name + "_degrees_present", false);
                continue;
            }
            r.at_most(name, at_top / at_mid, c.tol("growth_factor"));
        }
    }
}

inline void suite_sharpness(const RunConfig& c, SuiteResult& r)
{
    const auto rep = sharpness_verdict(c.sharpness);
    Table norms{"sharpness_norms", {"q", "eps", "norm_q", "diagnostic"}, {}};
    for (const auto& row : rep.datum_rows)
        norms.rows.push_back({format_double(row.q), format_double(row.eps), format_double(row.norm_q), row.diagnostic ? "1" : "0"});
    Table obs{"sharpness_obstruction", {"eps", "obstruction_norm_p", "a", "b", "r2"}, {}};
    for (const auto& row : rep.obstruction_rows)
        obs.rows.push_back({format_double(row.eps), format_double(row.norm_p), format_double(rep.fit.a), format_double(rep.fit.b),
                            format_double(rep.fit.r2)});
    r.tables.push_back(std::move(norms));
    r.tables.push_back(std::move(obs));
    for (std::size_t i = 0; i < c.sharpness.q.size(); ++i)
        r.at_most("tail_change_q" + format_double(c.sharpness.q[i]), rep.tail_change[i], c.tol("tail_change"));
    r.flag("log_slope_positive", rep.fit.b > 0.0);
    r.at_least("log_fit_r2", rep.fit.r2, c.tol("r2"));
    r.flag("obstruction_monotone", rep.monotone);
    r.at_most("cauchy_step", rep.cauchy_residual, c.tol("cauchy"));
    r.flag("verdict", rep.pass);
}

/// Runs one suite. Config errors propagate; assertion failures are recorded as failed checks.
inline SuiteResult run_suite(const std::string& name, const RunConfig& c)
{
    SuiteResult r;
    r.suite = name;
    r.seed = c.seed;
    const auto start = std::chrono::steady_clock::now();
    if (name == "kernel-check")
        suite_kernel_check(c, r);
    else if (name == "spencer-check")
        suite_spencer_check(c, r);
    else if (name == "slice-identities")
        suite_slice_identities(c, r);
    else if (name == "product-solve")
        suite_product_solve(c, r);
    else if (name == "orthogonality")
        suite_orthogonality(c, r);
    else if (name == "norm-sweep")
        suite_norm_sweep(c, r);
    else if (name == "sharpness")
        suite_sharpness(c, r);
    else
        throw ConfigError("unknown suite '" + name + "'");
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------------------------------------
// Reports and golden files
// ---------------------------------------------------------------------------------------------

inline std::string summary_json(const SuiteResult& r)
{
    const auto str = [](const std::string& s) { return nlohmann::json(s).dump(); };
    std::string o = "{\n";
    o += "  \"suite\": " + str(r.suite) + ",\n";
    o += std::string("  \"pass\": ") + (r.pass() ? "true" : "false") + ",\n";
    o += "  \"max_residual\": " + format_double(r.max_residual()) + ",\n";
    o += "  \"seed\": " + std::to_string(r.seed) + ",\n";
    o += "  \"checks\": [";
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const auto& c = r.checks[i];
        o += (i ? ",\n    " : "\n    ");
        o += "{\"name\": " + str(c.name) + ", \"kind\": \"" + Check::kind_name(c.kind) + "\", \"value\": " +
             (std::isfinite(c.value) ? format_double(c.value) : std::string("null")) +
             ", \"threshold\": " + format_double(c.threshold) + ", \"pass\": " + (c.pass() ? "true" : "false") + "}";
    }
    o += r.checks.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return o;
}

inline Table checks_table(const SuiteResult& r)
{
    Table t{r.suite + "_checks", {"name", "kind", "value", "threshold", "pass"}, {}};
    for (const auto& c : r.checks)
        t.rows.push_back({c.name, Check::kind_name(c.kind), format_double(c.value), format_double(c.threshold), c.pass() ? "1" : "0"});
    return t;
}

/// <suite>.json, <suite>_checks.csv and one CSV per table; wall time goes to <suite>.timing.json
/// so the other files are byte-stable.
inline void emit_report(const SuiteResult& r, const std::filesystem::path& out)
{
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec)
        throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
    write_text_file(out / (r.suite + ".json"), summary_json(r));
    write_text_file(out / (r.suite + ".timing.json"),
                    "{\"suite\": " + nlohmann::json(r.suite).dump() + ", \"runtime_ms\": " + format_double(r.runtime_ms) + "}\n");
    const Table ct = checks_table(r);
    write_text_file(out / (ct.name + ".csv"), ct.to_csv());
    for (const auto& t : r.tables)
        write_text_file(out / (t.name + ".csv"), t.to_csv());
}

namespace detail {

inline bool cells_match(const std::string& a, const std::string& b, double rtol)
{
    if (a == b)
        return true;
    try {
        std::size_t ua = 0, ub = 0;
        const double x = std::stod(a, &ua);
        const double y = std::stod(b, &ub);
        if (ua != a.size() || ub != b.size())
            return false;
        // values at rounding level are noise, not regressions
        return std::abs(x - y) <= rtol * std::max(std::abs(x), std::abs(y)) + 1e-12;
    } catch (const std::logic_error&) {
        return false;
    }
}

inline std::string read_text_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace detail

/// Compares every table with <golden>/<suite>/<table>.csv; appends one flag check per table.
inline void compare_golden(SuiteResult& r, const std::filesystem::path& golden, double rtol)
{
    const auto dir = golden / r.suite;
    for (const auto& t : r.tables) {
        const auto path = dir / (t.name + ".csv");
        bool ok = std::filesystem::exists(path);
        if (ok) {
            const Table g = parse_csv(t.name, detail::read_text_file(path));
            ok = g.header == t.header && g.rows.size() == t.rows.size();
            for (std::size_t i = 0; ok && i < t.rows.size(); ++i) {
                ok = g.rows[i].size() == t.rows[i].size();
                for (std::size_t k = 0; ok && k < t.rows[i].size(); ++k)
                    ok = detail::cells_match(g.rows[i][k], t.rows[i][k], rtol);
            }
        }
        r.flag("golden_" + t.name, ok);
    }
}

inline void bless_golden(const SuiteResult& r, const std::filesystem::path& golden)
{
    const auto dir = golden / r.suite;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create golden directory " + dir.string());
    for (const auto& t : r.tables)
        write_text_file(dir / (t.name + ".csv"), t.to_csv());
}

} // namespace dbar
