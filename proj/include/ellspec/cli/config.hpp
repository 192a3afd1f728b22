#ifndef ELLSPEC_CLI_CONFIG_HPP
#define ELLSPEC_CLI_CONFIG_HPP

#include <complex>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "../lattice.hpp"
#include "../punctures.hpp"

namespace ellspec::cli
{

using json = nlohmann::ordered_json;

/// Invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

struct GridSpec
{
    enum class Type
    {
        None,
        Rect,
        Path,
        Loop,
    };

    Type type = Type::None;
    // rect
    cplx origin;
    cplx u{1.0, 0.0};
    cplx v{0.0, 1.0};
    std::size_t nx = 0;
    std::size_t ny = 0;
    // path
    std::vector<cplx> points;
    std::size_t samples = 16;   // per path segment, or per loop
    // loop
    cplx center;
    double radius = 0.0;

    /// Sample points: rect cell centres (row by row along u), path polyline, or loop circle (not closed).
    std::vector<cplx> samples_list() const
    {
        std::vector<cplx> out;
        switch (type) {
            case Type::Rect:
                for (std::size_t j = 0; j < ny; ++j) {
                    for (std::size_t i = 0; i < nx; ++i) {
                        out.push_back(origin + (static_cast<double>(i) + 0.5) / static_cast<double>(nx) * u
                                      + (static_cast<double>(j) + 0.5) / static_cast<double>(ny) * v);
                    }
                }
                break;
            case Type::Path:
                for (std::size_t k = 0; k + 1 < points.size(); ++k) {
                    for (std::size_t s = 0; s < samples; ++s) {
                        out.push_back(points[k] + (points[k + 1] - points[k]) * (static_cast<double>(s) / static_cast<double>(samples)));
                    }
                }
                if (!points.empty()) {
                    out.push_back(points.back());
                }
                break;
            case Type::Loop:
                for (std::size_t k = 0; k < samples; ++k) {
                    out.push_back(center + std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples)));
                }
                break;
            case Type::None:
                break;
        }
        return out;
    }
};

struct JobConfig
{
    cplx e1{1.0, 0.0};
    cplx e2{0.0, 1.0};
    double tolerance = 1e-10;
    std::vector<cplx> punctures;
    GridSpec grid;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string output_path;
    json raw;   // full document, for command-specific sections

    Lattice lattice() const;
    PunctureSet puncture_set() const;
};

namespace detail
{

inline cplx as_complex(const json &j, const std::string &field)
{
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(field + ": expected a number or [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline double as_real(const json &j, const std::string &field)
{
    if (!j.is_number()) {
        throw ConfigError(field + ": expected a number");
    }
    return j.get<double>();
}

inline std::size_t as_count(const json &j, const std::string &field, std::size_t min = 1)
{
    if (!j.is_number_integer() || j.get<std::int64_t>() < static_cast<std::int64_t>(min)) {
        throw ConfigError(field + ": expected an integer >= " + std::to_string(min));
    }
    return j.get<std::size_t>();
}

inline std::vector<cplx> as_complex_list(const json &j, const std::string &field)
{
    if (!j.is_array()) {
        throw ConfigError(field + ": expected a list of [re, im]");
    }
    std::vector<cplx> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        out.push_back(as_complex(j[k], field + "[" + std::to_string(k) + "]"));
    }
    return out;
}

inline const json &require(const json &obj, const char *key, const std::string &prefix)
{
    if (!obj.is_object() || !obj.contains(key)) {
        throw ConfigError(prefix + key + ": missing");
    }
    return obj.at(key);
}

inline GridSpec parse_grid(const json &g)
{
    GridSpec s;
    if (!g.is_object()) {
        throw ConfigError("grid: expected an object");
    }
    const auto &t = require(g, "type", "grid.");
    if (!t.is_string()) {
        throw ConfigError("grid.type: expected a string");
    }
    const std::string type = t.get<std::string>();
    if (type == "rect") {
        s.type = GridSpec::Type::Rect;
        s.origin = g.contains("origin") ? as_complex(g["origin"], "grid.origin") : cplx(0.0, 0.0);
        if (g.contains("u")) {
            s.u = as_complex(g["u"], "grid.u");
        }
        if (g.contains("v")) {
            s.v = as_complex(g["v"], "grid.v");
        }
        s.nx = as_count(require(g, "nx", "grid."), "grid.nx");
        s.ny = as_count(require(g, "ny", "grid."), "grid.ny");
    } else if (type == "path") {
        s.type = GridSpec::Type::Path;
        s.points = as_complex_list(require(g, "points", "grid."), "grid.points");
        if (s.points.size() < 2) {
            throw ConfigError("grid.points: at least two points are required");
        }
        if (g.contains("samples")) {
            s.samples = as_count(g["samples"], "grid.samples");
        }
    } else if (type == "loop") {
        s.type = GridSpec::Type::Loop;
        s.center = g.contains("center") ? as_complex(g["center"], "grid.center") : cplx(0.0, 0.0);
        s.radius = as_real(require(g, "radius", "grid."), "grid.radius");
        if (!(s.radius > 0.0)) {
            throw ConfigError("grid.radius: must be positive");
        }
        s.samples = g.contains("samples") ? as_count(g["samples"], "grid.samples", 3) : 64;
    } else {
        throw ConfigError("grid.type: expected \"rect\", \"path\" or \"loop\", got \"" + type + "\"");
    }
    return s;
}

}

/// Parses a JSON job description; throws ConfigError with a field or position diagnostic.
inline JobConfig parse_config(const std::string &text)
{
    JobConfig c;
    try {
        c.raw = json::parse(text);
    } catch (const json::parse_error &e) {
        std::size_t line = 1;
        for (std::size_t k = 0; k < e.byte && k < text.size(); ++k) {
            line += text[k] == '\n' ? 1 : 0;
        }
        throw ConfigError("line " + std::to_string(line) + ": " + e.what());
    }
    const json &r = c.raw;
    if (!r.is_object()) {
        throw ConfigError("top level: expected an object");
    }
    if (r.contains("lattice")) {
        const json &l = r["lattice"];
        c.e1 = detail::as_complex(detail::require(l, "e1", "lattice."), "lattice.e1");
        c.e2 = detail::as_complex(detail::require(l, "e2", "lattice."), "lattice.e2");
    }
    if (r.contains("tolerance")) {
        c.tolerance = detail::as_real(r["tolerance"], "tolerance");
    }
    if (r.contains("punctures")) {
        c.punctures = detail::as_complex_list(r["punctures"], "punctures");
    }
    if (r.contains("grid")) {
        c.grid = detail::parse_grid(r["grid"]);
    }
    if (r.contains("seed")) {
        if (!r["seed"].is_number_integer()) {
            throw ConfigError("seed: expected an integer");
        }
        c.seed = r["seed"].get<std::uint64_t>();
    }
    if (r.contains("output")) {
        const json &o = r["output"];
        if (!o.is_object()) {
            throw ConfigError("output: expected an object");
        }
        if (o.contains("format")) {
            if (!o["format"].is_string() || (o["format"] != "json" && o["format"] != "csv")) {
                throw ConfigError("output.format: expected \"json\" or \"csv\"");
            }
            c.format = o["format"].get<std::string>();
        }
        if (o.contains("path")) {
            if (!o["path"].is_string()) {
                throw ConfigError("output.path: expected a string");
            }
            c.output_path = o["path"].get<std::string>();
        }
    }
    // Validate the geometry eagerly so that bad input is a configuration error.
    (void)c.lattice();
    if (!c.punctures.empty()) {
        (void)c.puncture_set();
    }
    return c;
}

inline JobConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline Lattice JobConfig::lattice() const
{
    try {
        return Lattice::make(e1, e2, tolerance);
    } catch (const Error &e) {
        throw ConfigError(std::string("lattice: ") + e.what());
    }
}

inline PunctureSet JobConfig::puncture_set() const
{
    if (punctures.empty()) {
        throw ConfigError("punctures: missing");
    }
    try {
        return PunctureSet(lattice(), punctures);
    } catch (const Error &e) {
        throw ConfigError(std::string("punctures: ") + e.what());
    }
}

}

#endif
