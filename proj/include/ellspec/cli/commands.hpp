#ifndef ELLSPEC_CLI_COMMANDS_HPP
#define ELLSPEC_CLI_COMMANDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "../ellspec.hpp"
#include "config.hpp"
#include "json_writer.hpp"
#include "plot.hpp"

namespace ellspec::cli
{

enum ExitCode : int
{
    ExitOk = 0,
    ExitInvariant = 1,
    ExitConfig = 2,
    ExitPartial = 3,
};

struct RunOptions
{
    unsigned threads = 1;
    std::string out;                     // primary output path; empty means stdout
    std::optional<std::uint64_t> seed;   // overrides the config seed
};

struct CommandResult
{
    int exit_code = ExitOk;
    std::string text;                                         // primary output (JSON or CSV)
    std::vector<std::pair<std::string, std::string>> files;   // side outputs: path, content
};

namespace detail
{

inline const json &section(const JobConfig &c, const char *name)
{
    static const json empty = json::object();
    if (!c.raw.contains(name)) {
        return empty;
    }
    const json &s = c.raw[name];
    if (!s.is_object()) {
        throw ConfigError(std::string(name) + ": expected an object");
    }
    return s;
}

/// `out` with its extension replaced, or empty when there is no primary output file.
inline std::string sibling(const std::string &out, const std::string &ext)
{
    if (out.empty()) {
        return {};
    }
    const auto slash = out.find_last_of('/');
    const auto dot = out.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        return out.substr(0, dot) + ext;
    }
    return out + ext;
}

inline std::string primary_path(const JobConfig &c, const RunOptions &o)
{
    return o.out.empty() ? c.output_path : o.out;
}

inline std::string side_path(const JobConfig &c, const RunOptions &o, const json &sec, const char *key,
                             const std::string &ext)
{
    if (sec.contains(key)) {
        if (!sec[key].is_string()) {
            throw ConfigError(std::string(key) + ": expected a string");
        }
        return sec[key].get<std::string>();
    }
    return sibling(primary_path(c, o), ext);
}

inline std::vector<cplx> require_grid(const JobConfig &c)
{
    if (c.grid.type == GridSpec::Type::None) {
        throw ConfigError("grid: missing");
    }
    return c.grid.samples_list();
}

inline std::string csv_escape(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return out + "\"";
}

inline std::string error_name(const std::exception &e)
{
    if (const auto *err = dynamic_cast<const Error *>(&e)) {
        return to_string(err->code());
    }
    return "InternalError";
}

inline std::string json_or_csv_only(const JobConfig &c, const char *cmd)
{
    if (c.format != "json") {
        throw ConfigError(std::string("output.format: ") + cmd + " supports only \"json\"");
    }
    return c.format;
}

}

/// Tabulates sigma, zeta, p or phi at the configured points (eval.points, else the grid).
inline CommandResult cmd_eval(const JobConfig &c, const RunOptions & = {})
{
    const json &sec = detail::section(c, "eval");
    const std::string fn = sec.contains("function") && sec["function"].is_string() ? sec["function"].get<std::string>() : "";
    if (fn != "sigma" && fn != "zeta" && fn != "p" && fn != "phi") {
        throw ConfigError("eval.function: expected \"sigma\", \"zeta\", \"p\" or \"phi\"");
    }
    const bool with_alpha = fn == "phi";
    cplx alpha;
    if (with_alpha) {
        alpha = detail::as_complex(detail::require(sec, "alpha", "eval."), "eval.alpha");
    }
    const std::vector<cplx> pts = sec.contains("points") ? detail::as_complex_list(sec["points"], "eval.points")
                                                         : detail::require_grid(c);
    const Lattice lat = c.lattice();

    struct Row
    {
        cplx z;
        cplx value;
        std::string error;
    };
    std::vector<Row> rows;
    for (const cplx z : pts) {
        Row r{z, cplx(), ""};
        try {
            if (fn == "sigma") {
                r.value = sigma(lat, z);
            } else if (fn == "zeta") {
                r.value = zeta(lat, z);
            } else if (fn == "p") {
                r.value = weierstrass_p(lat, z);
            } else {
                r.value = phi(lat, z, alpha);
            }
        } catch (const Error &e) {
            r.error = to_string(e.code());
        }
        rows.push_back(std::move(r));
    }

    CommandResult res;
    if (c.format == "csv") {
        std::string s = with_alpha ? "z_re,z_im,alpha_re,alpha_im,val_re,val_im,error\n" : "z_re,z_im,val_re,val_im,error\n";
        for (const auto &r : rows) {
            s += format_csv_double(r.z.real()) + "," + format_csv_double(r.z.imag()) + ",";
            if (with_alpha) {
                s += format_csv_double(alpha.real()) + "," + format_csv_double(alpha.imag()) + ",";
            }
            if (r.error.empty()) {
                s += format_csv_double(r.value.real()) + "," + format_csv_double(r.value.imag()) + ",";
            } else {
                s += ",,";
            }
            s += detail::csv_escape(r.error) + "\n";
        }
        res.text = s;
        return res;
    }
    json out = json::object();
    out["function"] = fn;
    if (with_alpha) {
        out["alpha"] = to_json(alpha);
    }
    json arr = json::array();
    for (const auto &r : rows) {
        json row = json::object();
        row["z"] = to_json(r.z);
        row["value"] = r.error.empty() ? to_json(r.value) : json(nullptr);
        row["error"] = r.error.empty() ? json(nullptr) : json(r.error);
        arr.push_back(std::move(row));
    }
    out["rows"] = std::move(arr);
    res.text = dump(out);
    return res;
}

/// Characteristic polynomial, sheets, kernels and multipliers over the grid; SVG of the sheets for path grids.
inline CommandResult cmd_curve(const JobConfig &c, const RunOptions &o = {})
{
    const json &sec = detail::section(c, "curve");
    const auto grid = detail::require_grid(c);
    const PunctureSet ps = c.puncture_set();
    const Lattice &lat = ps.lattice();
    auto samples = sample_curve(ps, grid, {true, o.threads});

    std::string tracking;
    if (c.grid.type == GridSpec::Type::Path) {
        try {
            const auto sp = track(ps, grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                auto &rec = samples[k];
                if (!rec.ok) {
                    continue;
                }
                std::vector<cplx> tracked;
                for (const auto &t : sp.mu_tracks) {
                    tracked.push_back(t[sp.nodes[k]]);
                }
                const auto col = ::ellspec::detail::match_nearest(tracked, rec.mu);
                CurveSample sorted = rec;
                for (std::size_t i = 0; i < col.size(); ++i) {
                    sorted.mu[i] = rec.mu[col[i]];
                    sorted.kernels[i] = rec.kernels[col[i]];
                    sorted.multipliers[i] = rec.multipliers[col[i]];
                    sorted.residuals[i] = rec.residuals[col[i]];
                }
                rec = std::move(sorted);
            }
            tracking = "ok";
        } catch (const Error &e) {
            tracking = to_string(e.code());
        }
    }

    std::optional<cplx> d;
    if (ps.size() == 2) {
        d = ps[0] - ps[1];
    }
    std::size_t failed = 0;
    json records = json::array();
    for (const auto &rec : samples) {
        json r = json::object();
        r["alpha"] = to_json(rec.alpha);
        if (!rec.ok) {
            ++failed;
            r["error"] = rec.error;
            records.push_back(std::move(r));
            continue;
        }
        r["q"] = to_json(rec.poly.q);
        r["sheets"] = to_json(rec.mu);
        json mult = json::array();
        for (const auto &m : rec.multipliers) {
            mult.push_back(json::array({to_json(m.first), to_json(m.second)}));
        }
        r["multipliers"] = std::move(mult);
        r["residuals"] = rec.residuals;
        if (d) {
            double worst = 0.0;
            try {
                const cplx rhs = weierstrass_p(lat, rec.alpha) - weierstrass_p(lat, *d);
                for (const cplx mu : rec.mu) {
                    worst = std::max(worst, std::abs(mu * mu - rhs) / std::max(1.0, std::abs(rhs)));
                }
                r["closed_form_residual"] = worst;
            } catch (const Error &) {
                r["closed_form_residual"] = nullptr;
            }
        }
        records.push_back(std::move(r));
    }

    CommandResult res;
    if (c.format == "csv") {
        std::string s = "index,alpha_re,alpha_im,sheet,mu_re,mu_im,residual,error\n";
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const auto &rec = samples[k];
            const std::string head = std::to_string(k) + "," + format_csv_double(rec.alpha.real()) + "," + format_csv_double(rec.alpha.imag()) + ",";
            if (!rec.ok) {
                s += head + ",,,," + detail::csv_escape(rec.error) + "\n";
                continue;
            }
            for (std::size_t i = 0; i < rec.mu.size(); ++i) {
                s += head + std::to_string(i) + "," + format_csv_double(rec.mu[i].real()) + "," + format_csv_double(rec.mu[i].imag())
                     + "," + format_csv_double(rec.residuals[i]) + ",\n";
            }
        }
        res.text = s;
    } else {
        json out = json::object();
        out["punctures"] = to_json(ps.points());
        if (!tracking.empty()) {
            out["tracking"] = tracking;
        }
        out["failed"] = failed;
        out["records"] = std::move(records);
        res.text = dump(out);
    }
    if (c.grid.type == GridSpec::Type::Path) {
        const std::string svg = detail::side_path(c, o, sec, "svg", ".svg");
        if (!svg.empty()) {
            std::vector<std::vector<cplx>> tracks(ps.size());
            for (const auto &rec : samples) {
                for (std::size_t i = 0; i < ps.size(); ++i) {
                    tracks[i].push_back(rec.ok ? rec.mu[i] : cplx(std::nan(""), std::nan("")));
                }
            }
            res.files.emplace_back(svg, sheets_svg(tracks, samples.size()));
        }
    }
    if (10 * failed > samples.size()) {
        res.exit_code = ExitPartial;
    }
    return res;
}

/// Degenerate multipliers: polynomial in beta, its roots and coefficient vectors.
inline CommandResult cmd_beta(const JobConfig &c, const RunOptions & = {})
{
    detail::json_or_csv_only(c, "beta");
    const json &sec = detail::section(c, "beta");
    const PunctureSet ps = c.puncture_set();
    std::size_t pivot = 0;
    if (sec.contains("pivot")) {
        pivot = detail::as_count(sec["pivot"], "beta.pivot", 0);
        if (pivot >= ps.size()) {
            throw ConfigError("beta.pivot: out of range");
        }
    }
    CommandResult res;
    json out = json::object();
    out["punctures"] = to_json(ps.points());
    out["pivot"] = pivot;
    try {
        out["poly_coeffs"] = to_json(beta_polynomial(ps, pivot));
        const auto roots = beta_roots(ps, pivot);
        json r = json::array(), a0 = json::array(), vecs = json::array(), resid = json::array(), mult = json::array();
        for (const auto &br : roots) {
            r.push_back(to_json(br.beta));
            a0.push_back(to_json(br.a0));
            vecs.push_back(to_json(br.a));
            resid.push_back(br.residual);
            mult.push_back(br.multiplicity);
        }
        out["roots"] = std::move(r);
        out["a0"] = std::move(a0);
        out["vectors"] = std::move(vecs);
        out["residuals"] = std::move(resid);
        out["multiplicities"] = std::move(mult);
    } catch (const Error &e) {
        out["error"] = to_string(e.code());
        out["detail"] = e.what();
        res.exit_code = ExitPartial;
    }
    res.text = dump(out);
    return res;
}

/// Monodromy around alpha = 0 with the per-sheet limit classification, plus optional extra loops.
inline CommandResult cmd_monodromy(const JobConfig &c, const RunOptions & = {})
{
    detail::json_or_csv_only(c, "monodromy");
    const json &sec = detail::section(c, "monodromy");
    const PunctureSet ps = c.puncture_set();
    const double radius = sec.contains("radius") ? detail::as_real(sec["radius"], "monodromy.radius") : 0.0;
    const double angle = sec.contains("angle") ? detail::as_real(sec["angle"], "monodromy.angle") : 0.0;

    std::vector<LoopSpec> loops;
    if (sec.contains("loops")) {
        if (!sec["loops"].is_array()) {
            throw ConfigError("monodromy.loops: expected a list");
        }
        for (std::size_t k = 0; k < sec["loops"].size(); ++k) {
            const json &l = sec["loops"][k];
            const std::string f = "monodromy.loops[" + std::to_string(k) + "].";
            LoopSpec s;
            s.center = detail::as_complex(detail::require(l, "center", f), f + "center");
            s.radius = detail::as_real(detail::require(l, "radius", f), f + "radius");
            if (!(s.radius > 0.0)) {
                throw ConfigError(f + "radius: must be positive");
            }
            s.samples = l.contains("samples") ? detail::as_count(l["samples"], f + "samples", 3) : 64;
            loops.push_back(s);
        }
    }
    if (c.grid.type == GridSpec::Type::Loop) {
        loops.push_back(LoopSpec{c.grid.center, c.grid.radius, c.grid.samples, 0.0, false});
    }

    CommandResult res;
    json out = json::object();
    out["punctures"] = to_json(ps.points());
    try {
        const auto rep = monodromy_at_zero(ps, radius, angle);
        out["radius"] = rep.radius;
        out["permutation"] = rep.monodromy.permutation;
        out["cycles"] = rep.cycles;
        json cls = json::array();
        for (std::size_t i = 0; i < rep.sheets.size(); ++i) {
            const auto &s = rep.sheets[i];
            json e = json::object();
            e["sheet"] = i;
            e["kind"] = to_string(s.kind);
            e["limit"] = s.kind == SheetLimit::Kind::Finite ? to_json(s.limit) : json(nullptr);
            e["cauchy_gap"] = s.cauchy_gap;
            e["growth"] = s.growth;
            json vals = json::array();
            for (const cplx v : s.values) {
                vals.push_back(to_json(v));
            }
            e["values"] = std::move(vals);
            cls.push_back(std::move(e));
        }
        out["classifications"] = std::move(cls);
        out["beta_limits"] = to_json(rep.finite_limits);
    } catch (const Error &e) {
        out["error"] = to_string(e.code());
        out["detail"] = e.what();
        res.exit_code = ExitPartial;
    }
    json lj = json::array();
    for (const auto &l : loops) {
        json e = json::object();
        e["center"] = to_json(l.center);
        e["radius"] = l.radius;
        e["samples"] = l.samples;
        try {
            e["permutation"] = loop_monodromy(ps, l).permutation;
        } catch (const Error &err) {
            e["error"] = to_string(err.code());
            res.exit_code = ExitPartial;
        }
        lj.push_back(std::move(e));
    }
    out["loops"] = std::move(lj);
    if (sec.value("branch_points", false)) {
        out["branch_points"] = to_json(locate_branch_points(ps));
    }
    res.text = dump(out);
    return res;
}

namespace detail
{

struct VerifyCheck
{
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::string note;

    void record(double v)
    {
        value = std::max(value, std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
    }

    void fail(const std::string &why)
    {
        pass = false;
        if (note.empty()) {
            note = why;
        }
    }
};

inline cplx random_point(std::mt19937_64 &rng, const Lattice &lat)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s = u(rng);
    const double t = u(rng);
    return s * lat.e1() + t * lat.e2();
}

}

/// End-to-end invariant suite; exit 1 on any failed check.
/**
 * verify.n random punctures (default 3) are drawn from the seed when the
 * config lists none. verify.inject_mu_offset shifts mu before psi is built,
 * which must break the boundary condition.
 */
inline CommandResult cmd_verify(const JobConfig &c, const RunOptions &o = {})
{
    detail::json_or_csv_only(c, "verify");
    const json &sec = detail::section(c, "verify");
    const std::uint64_t seed = o.seed.value_or(c.seed);
    std::mt19937_64 rng(seed);
    const Lattice lat = c.lattice();
    const std::size_t instances = sec.contains("instances") ? detail::as_count(sec["instances"], "verify.instances") : 4;
    const cplx inject = sec.contains("inject_mu_offset")
                            ? detail::as_complex(sec["inject_mu_offset"], "verify.inject_mu_offset")
                            : cplx(0.0, 0.0);

    std::vector<cplx> pts = c.punctures;
    if (pts.empty()) {
        const std::size_t n = sec.contains("n") ? detail::as_count(sec["n"], "verify.n") : 3;
        while (pts.size() < n) {
            const cplx p = detail::random_point(rng, lat);
            bool ok = true;
            for (const cplx q : pts) {
                ok = ok && lat.distance_to_lattice(p - q) >= 0.1 * lat.min_generator_length();
            }
            if (ok) {
                pts.push_back(p);
            }
        }
    }
    const PunctureSet ps = [&] {
        try {
            return PunctureSet(lat, pts);
        } catch (const Error &e) {
            throw ConfigError(std::string("punctures: ") + e.what());
        }
    }();
    const double scale = lat.min_generator_length();
    auto away = [&](double margin) {
        for (;;) {
            const cplx z = detail::random_point(rng, lat);
            if (lat.distance_to_lattice(z) > margin * scale && ps.distance_to_punctures(z) > margin * scale) {
                return z;
            }
        }
    };

    std::vector<detail::VerifyCheck> checks;
    auto run = [&](const std::string &name, double tol, auto &&body) {
        detail::VerifyCheck chk{name, 0.0, tol, true, ""};
        try {
            body(chk);
        } catch (const std::exception &e) {
            chk.fail(detail::error_name(e) + ": " + e.what());
        }
        if (!(chk.value <= tol)) {
            chk.pass = false;
        }
        checks.push_back(std::move(chk));
    };

    run("legendre_relation", 1e-10, [&](detail::VerifyCheck &chk) {
        chk.record(std::abs(lat.legendre_defect()) / (2.0 * std::numbers::pi));
    });
    run("sigma_quasi_periodicity", 1e-9, [&](detail::VerifyCheck &chk) {
        for (int k = 0; k < 20; ++k) {
            const cplx z = away(0.05);
            for (const auto &[e, eta] : {std::pair{lat.e1(), lat.eta1()}, std::pair{lat.e2(), lat.eta2()}}) {
                const cplx lhs = sigma(lat, z + e);
                const cplx rhs = -sigma(lat, z) * std::exp(eta * (z + 0.5 * e));
                chk.record(std::abs(lhs - rhs) / std::abs(rhs));
            }
        }
    });
    run("zeta_quasi_periodicity", 1e-9, [&](detail::VerifyCheck &chk) {
        for (int k = 0; k < 20; ++k) {
            const cplx z = away(0.05);
            chk.record(std::abs(zeta(lat, z + lat.e1()) - zeta(lat, z) - lat.eta1()) / std::max(1.0, std::abs(lat.eta1())));
            chk.record(std::abs(zeta(lat, z + lat.e2()) - zeta(lat, z) - lat.eta2()) / std::max(1.0, std::abs(lat.eta2())));
        }
    });
    run("phi_constant_coefficient", 1e-8, [&](detail::VerifyCheck &chk) {
        for (int k = 0; k < 5; ++k) {
            chk.record(std::abs(phi_laurent_c0(lat, away(0.05))));
        }
    });

    std::vector<cplx> alphas;
    for (std::size_t k = 0; k < instances; ++k) {
        alphas.push_back(away(0.05));
    }
    run("kernel_residual", 1e-8, [&](detail::VerifyCheck &chk) {
        for (const cplx a : alphas) {
            for (const cplx mu : sheets(ps, a)) {
                chk.record(kernel_vector_info(ps, a, mu).residual);
            }
        }
    });
    run("floquet_ratios", 1e-8, [&](detail::VerifyCheck &chk) {
        for (const cplx a : alphas) {
            for (const cplx mu : sheets(ps, a)) {
                const auto psi = build_psi(ps, spectral_point(ps, a, mu));
                const auto [x1, x2] = psi.multiplier_exponents();
                const cplx z = away(0.05);
                chk.record(std::abs(psi(z + lat.e1()) / psi(z) / std::exp(x1) - 1.0));
                chk.record(std::abs(psi(z + lat.e2()) / psi(z) / std::exp(x2) - 1.0));
            }
        }
    });
    run("boundary_constant_term", 1e-7, [&](detail::VerifyCheck &chk) {
        for (const cplx a : alphas) {
            for (const cplx mu : sheets(ps, a)) {
                const auto sp = spectral_point(ps, a, mu);
                const auto psi = Eigenfunction::sheet(ps, a, mu + inject, sp.a);
                for (std::size_t l = 0; l < ps.size(); ++l) {
                    const auto b = verify_boundary(ps, psi, l);
                    if (std::abs(b.residue) > 1e-12) {
                        chk.record(b.ratio());
                    }
                }
            }
        }
    });
    std::vector<BetaRoot> roots;
    run("beta_roots", 1e-8, [&](detail::VerifyCheck &chk) {
        roots = beta_roots(ps);
        if (roots.size() + 1 != ps.size()) {
            chk.fail("expected " + std::to_string(ps.size() - 1) + " roots");
        }
        for (const auto &br : roots) {
            chk.record(br.residual);
            chk.record(std::abs(br.a.sum()));
        }
    });
    run("alpha_zero_limits", 1e-4, [&](detail::VerifyCheck &chk) {
        const auto rep = monodromy_at_zero(ps);
        if (rep.count(SheetLimit::Kind::Pole) != 1) {
            chk.fail("expected exactly one POLE sheet");
        }
        if (rep.count(SheetLimit::Kind::Finite) + 1 != ps.size()) {
            chk.fail("expected N - 1 FINITE sheets");
            return;
        }
        std::vector<cplx> betas;
        for (const auto &br : roots) {
            betas.push_back(br.beta);
        }
        if (betas.size() != rep.finite_limits.size()) {
            chk.fail("beta root count differs from the FINITE sheet count");
            return;
        }
        const auto col = ::ellspec::detail::match_nearest(rep.finite_limits, betas);
        for (std::size_t i = 0; i < col.size(); ++i) {
            chk.record(std::abs(rep.finite_limits[i] - betas[col[i]]));
        }
    });

    bool all = true;
    json arr = json::array();
    for (const auto &chk : checks) {
        all = all && chk.pass;
        json e = json::object();
        e["name"] = chk.name;
        e["max_residual"] = chk.value;
        e["tolerance"] = chk.tolerance;
        e["pass"] = chk.pass;
        if (!chk.note.empty()) {
            e["note"] = chk.note;
        }
        arr.push_back(std::move(e));
    }
    json out = json::object();
    out["seed"] = seed;
    out["lattice"] = json::object({{"e1", to_json(lat.e1())}, {"e2", to_json(lat.e2())}});
    out["punctures"] = to_json(ps.points());
    out["checks"] = std::move(arr);
    out["pass"] = all;
    CommandResult res;
    res.text = dump(out);
    res.exit_code = all ? ExitOk : ExitInvariant;
    return res;
}

namespace detail
{

inline Eigenfunction parse_spinor(const json &s, const std::string &field, const PunctureSet &ps)
{
    if (!s.is_object() || !s.contains("type") || !s["type"].is_string()) {
        throw ConfigError(field + ".type: expected \"sheet\", \"beta\" or \"zero\"");
    }
    const std::string type = s["type"].get<std::string>();
    if (type == "zero") {
        return Eigenfunction::zero(ps);
    }
    if (type == "sheet") {
        const cplx alpha = detail::as_complex(detail::require(s, "alpha", field + "."), field + ".alpha");
        const std::size_t k = s.contains("sheet") ? detail::as_count(s["sheet"], field + ".sheet", 0) : 0;
        const cplx offset = s.contains("mu_offset") ? detail::as_complex(s["mu_offset"], field + ".mu_offset") : cplx(0.0, 0.0);
        if (k >= ps.size()) {
            throw ConfigError(field + ".sheet: out of range");
        }
        if (ps.lattice().on_lattice(alpha)) {
            throw ConfigError(field + ".alpha: lies on the lattice; use a \"beta\" spinor");
        }
        const auto mu = sheets(ps, alpha);
        const auto sp = spectral_point(ps, alpha, mu[k]);
        return Eigenfunction::sheet(ps, alpha, sp.mu + offset, sp.a);
    }
    if (type == "beta") {
        const std::size_t k = s.contains("root") ? detail::as_count(s["root"], field + ".root", 0) : 0;
        const auto roots = beta_roots(ps);
        if (k >= roots.size()) {
            throw ConfigError(field + ".root: out of range");
        }
        return build_degenerate_psi(ps, roots[k]);
    }
    throw ConfigError(field + ".type: expected \"sheet\", \"beta\" or \"zero\", got \"" + type + "\"");
}

}

/// Integrated surface mesh (OBJ) and the planar-end report for a spinor pair.
inline CommandResult cmd_surface(const JobConfig &c, const RunOptions &o = {})
{
    detail::json_or_csv_only(c, "surface");
    const json &sec = detail::section(c, "surface");
    const PunctureSet ps = c.puncture_set();
    const auto grid = detail::require_grid(c);
    const Eigenfunction psi1 = detail::parse_spinor(detail::require(sec, "psi1", "surface."), "surface.psi1", ps);
    const Eigenfunction psi2 = detail::parse_spinor(detail::require(sec, "psi2", "surface."), "surface.psi2", ps);
    const SpinorPair sp(psi1, psi2);
    const cplx base = sec.contains("basepoint") ? detail::as_complex(sec["basepoint"], "surface.basepoint") : grid.front();
    Vec3 base_xyz{};
    if (sec.contains("base_xyz")) {
        const json &b = sec["base_xyz"];
        if (!b.is_array() || b.size() != 3) {
            throw ConfigError("surface.base_xyz: expected [x, y, z]");
        }
        for (std::size_t j = 0; j < 3; ++j) {
            base_xyz[j] = detail::as_real(b[j], "surface.base_xyz");
        }
    }
    SurfaceOptions opts;
    opts.threads = o.threads;
    if (sec.contains("margin")) {
        opts.margin = detail::as_real(sec["margin"], "surface.margin");
    }

    CommandResult res;
    json out = json::object();
    out["punctures"] = to_json(ps.points());
    json ends = json::array();
    bool all_pass = true;
    for (std::size_t l = 0; l < ps.size(); ++l) {
        const auto rep = check_planar_end(sp, l);
        json e = json::object();
        e["puncture"] = l;
        e["pole_order"] = rep.pole_order;
        json r = json::array();
        for (const cplx x : rep.residues) {
            r.push_back(to_json(x));
        }
        e["residues"] = std::move(r);
        e["leading"] = rep.leading;
        e["residue_ratio"] = rep.residue_ratio;
        e["product_ratio"] = rep.product_ratio;
        e["pass"] = rep.pass;
        all_pass = all_pass && rep.pass;
        ends.push_back(std::move(e));
    }
    out["planar_ends"] = std::move(ends);
    out["all_planar"] = all_pass;

    const std::string mesh = detail::side_path(c, o, sec, "mesh", ".obj");
    try {
        const auto s = integrate_surface(sp, grid, base, base_xyz, opts);
        std::size_t dropped = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            dropped += s.dropped(k) ? 1 : 0;
        }
        out["samples"] = grid.size();
        out["dropped"] = dropped;
        out["basepoint"] = to_json(base);
        out["mesh"] = mesh.empty() ? json(nullptr) : json(mesh);
        if (!mesh.empty()) {
            const bool rect = c.grid.type == GridSpec::Type::Rect;
            res.files.emplace_back(mesh, surface_obj(s, rect ? c.grid.nx : grid.size(), rect ? c.grid.ny : 1));
        }
    } catch (const Error &e) {
        out["error"] = to_string(e.code());
        out["detail"] = e.what();
        res.exit_code = ExitPartial;
    }
    res.text = dump(out);
    return res;
}

/// Dispatch by subcommand name.
inline CommandResult run_command(const std::string &name, const JobConfig &c, const RunOptions &o)
{
    if (name == "eval") {
        return cmd_eval(c, o);
    }
    if (name == "curve") {
        return cmd_curve(c, o);
    }
    if (name == "beta") {
        return cmd_beta(c, o);
    }
    if (name == "monodromy") {
        return cmd_monodromy(c, o);
    }
    if (name == "verify") {
        return cmd_verify(c, o);
    }
    if (name == "surface") {
        return cmd_surface(c, o);
    }
    throw ConfigError("unknown subcommand '" + name + "'");
}

}

#endif
