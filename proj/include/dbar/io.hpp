#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbar/errors.hpp"
#include "dbar/grid.hpp"
#include "dbar/slice.hpp"

namespace dbar {

/// Seventeen significant digits: round-trips every double and is stable across runs.
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Domain part of a run configuration.
struct DomainConfig
{
    std::vector<SliceDomain> slices{SliceDomain::unit_disc(), SliceDomain::unit_disc()};
    GridSpec grid{};
    int degree = 8;
    std::optional<GridSpec> product_grid;
};

namespace detail {

inline GridSpec parse_grid_spec(const nlohmann::json& j, const char* what)
{
    if (!j.is_object())
        throw ConfigError(std::string(what) + " must be an object with nr and ntheta");
    GridSpec g;
    g.nr = j.value("nr", g.nr);
    g.ntheta = j.value("ntheta", g.ntheta);
    if (g.nr < 2 || g.ntheta < 4)
        throw ConfigError(std::string(what) + ": need nr >= 2 and ntheta >= 4");
    return g;
}

inline SliceDomain parse_slice(const nlohmann::json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "disc")
        return SliceDomain::unit_disc();
    if (kind == "conformal") {
        std::vector<cplx> coeffs;
        for (const auto& c : j.at("coeffs")) {
            if (!c.is_array() || c.size() != 2)
                throw ConfigError("conformal coefficients are [re, im] pairs");
            coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
        }
        try {
            return SliceDomain::conformal(std::move(coeffs));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid conformal slice: ") + e.what());
        }
    }
    throw ConfigError("unknown slice kind '" + kind + "'");
}

inline nlohmann::json slice_to_json(const SliceDomain& s)
{
    if (s.is_disc())
        return {{"kind", "disc"}};
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : s.map_coeffs())
        coeffs.push_back({c.real(), c.imag()});
    return {{"kind", "conformal"}, {"coeffs", coeffs}};
}

} // namespace detail

/// {"slices":[{"kind":"disc"}|{"kind":"conformal","coeffs":[[re,im],...]}], "grid":{"nr","ntheta"},
///  "degree":8, "product_grid":{"nr","ntheta"}}
inline DomainConfig parse_domain(const nlohmann::json& j)
{
    DomainConfig d;
    try {
        if (j.contains("slices")) {
            d.slices.clear();
            for (const auto& s : j.at("slices"))
                d.slices.push_back(detail::parse_slice(s));
            if (d.slices.empty())
                throw ConfigError("slices must be a nonempty list");
        }
        if (j.contains("grid"))
            d.grid = detail::parse_grid_spec(j.at("grid"), "grid");
        if (j.contains("product_grid"))
            d.product_grid = detail::parse_grid_spec(j.at("product_grid"), "product_grid");
        d.degree = j.value("degree", d.degree);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (d.degree < 0)
        throw ConfigError("degree must be nonnegative");
    return d;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << text;
    if (!out)
        throw IoError("write failed for " + path.string());
}

/// Header (slices and per-slice grid) followed by row-major [re, im] samples.
inline void write_grid_function(const std::filesystem::path& path, const GridFunction& f)
{
    const auto& g = *f.grid();
    std::ostringstream os;
    os << "{\n  \"slices\": [";
    for (std::size_t j = 0; j < g.slices(); ++j)
        os << (j ? ", " : "") << detail::slice_to_json(g.slice(j)).dump();
    os << "],\n  \"grid\": [";
    for (std::size_t j = 0; j < g.slices(); ++j)
        os << (j ? ", " : "") << "{\"nr\": " << g.spec(j).nr << ", \"ntheta\": " << g.spec(j).ntheta << "}";
    os << "],\n  \"values\": [";
    for (std::size_t i = 0; i < f.size(); ++i)
        os << (i ? ",\n    " : "\n    ") << "[" << format_double(f[i].real()) << ", " << format_double(f[i].imag()) << "]";
    os << "\n  ]\n}\n";
    write_text_file(path, os.str());
}

inline GridFunction read_grid_function(const std::filesystem::path& path)
{
    const auto j = read_json_file(path);
    try {
        std::vector<SliceDomain> slices;
        for (const auto& s : j.at("slices"))
            slices.push_back(detail::parse_slice(s));
        std::vector<GridSpec> specs;
        for (const auto& s : j.at("grid"))
            specs.push_back(detail::parse_grid_spec(s, "grid"));
        const auto grid = ProductGrid::make(std::move(slices), std::move(specs));
        const auto& vals = j.at("values");
        if (vals.size() != grid->size())
            throw ShapeError("grid function file: value count does not match the grid");
        std::vector<cplx> v;
        v.reserve(vals.size());
        for (const auto& p : vals)
            v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        return GridFunction(grid, std::move(v));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

/// A CSV table; cells are preformatted strings.
struct Table
{
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const
    {
        std::ostringstream os;
        auto line = [&os](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                os << (i ? "," : "") << cells[i];
            os << "\n";
        };
        line(header);
        for (const auto& r : rows)
            line(r);
        return os.str();
    }
};

inline Table parse_csv(const std::string& name, const std::string& text)
{
    Table t;
    t.name = name;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (first)
            t.header = std::move(cells);
        else
            t.rows.push_back(std::move(cells));
        first = false;
    }
    return t;
}

} // namespace dbar
