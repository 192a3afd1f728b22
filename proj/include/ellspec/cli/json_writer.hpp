#ifndef ELLSPEC_CLI_JSON_WRITER_HPP
#define ELLSPEC_CLI_JSON_WRITER_HPP

#include <charconv>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "../linalg.hpp"

namespace ellspec::cli
{

using json = nlohmann::ordered_json;

/// Doubles with 17 significant digits, locale independent; non-finite values become null.
inline std::string format_double(double x)
{
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// Same as format_double, but an empty field for non-finite values (CSV).
inline std::string format_csv_double(double x)
{
    return std::isfinite(x) ? format_double(x) : std::string();
}

inline json to_json(cplx z)
{
    return json::array({z.real(), z.imag()});
}

inline json to_json(const std::vector<cplx> &v)
{
    json a = json::array();
    for (const cplx z : v) {
        a.push_back(to_json(z));
    }
    return a;
}

inline json to_json(const CVector &v)
{
    json a = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        a.push_back(to_json(v(k)));
    }
    return a;
}

namespace detail
{

inline bool is_flat(const json &j)
{
    for (const auto &e : j) {
        if (e.is_structured()) {
            if (!(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())) {
                return false;
            }
        }
    }
    return true;
}

inline void write(std::string &out, const json &j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad;
                out += json(it.key()).dump();
                out += ": ";
                write(out, it.value(), indent + 2);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            if (is_flat(j)) {
                out += "[";
                bool first = true;
                for (const auto &e : j) {
                    if (!first) {
                        out += ", ";
                    }
                    first = false;
                    write(out, e, indent);
                }
                out += "]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto &e : j) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad;
                write(out, e, indent + 2);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}

/// Deterministic pretty printer: keys in insertion order, LF line endings, trailing newline.
inline std::string dump(const json &j)
{
    std::string out;
    detail::write(out, j, 0);
    out += "\n";
    return out;
}

}

#endif
