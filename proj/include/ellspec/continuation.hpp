#ifndef ELLSPEC_CONTINUATION_HPP
#define ELLSPEC_CONTINUATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "assignment.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "punctures.hpp"
#include "spectral_curve.hpp"
#include "weierstrass.hpp"

namespace ellspec
{

/// Sheets continued along a sampled path in alpha.
struct SheetPath
{
    std::vector<cplx> alphas;                  // refined samples, starting at the first path point
    std::vector<std::vector<cplx>> mu_tracks;  // mu_tracks[i][k]: sheet i at alphas[k]
    std::vector<std::size_t> nodes;            // nodes[j]: index in alphas of input sample j
    double max_jump = 0.0;                     // largest accepted |mu - prediction|
    double worst_jump_ratio = 0.0;             // largest accepted jump / (half the minimal root separation)
};

struct TrackOptions
{
    int max_depth = 16;
};

namespace detail
{

inline double min_pairwise_distance(const std::vector<cplx> &v)
{
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            d = std::min(d, std::abs(v[i] - v[j]));
        }
    }
    return d;
}

/// col[i]: index in `to` matched with from[i], minimizing the total distance.
inline std::vector<std::size_t> match_nearest(const std::vector<cplx> &from, const std::vector<cplx> &to)
{
    std::vector<std::vector<double>> cost(from.size(), std::vector<double>(to.size()));
    for (std::size_t i = 0; i < from.size(); ++i) {
        for (std::size_t j = 0; j < to.size(); ++j) {
            cost[i][j] = std::abs(from[i] - to[j]);
        }
    }
    return min_cost_assignment(cost);
}

class Tracker
{
    public:
        Tracker(const PunctureSet &ps, TrackOptions opts) : m_ps(ps), m_opts(opts) {}

        SheetPath run(const std::vector<cplx> &path)
        {
            m_out = SheetPath{};
            if (path.empty()) {
                return m_out;
            }
            check_point(path.front());
            const auto mu0 = sheets(m_ps, path.front());
            m_out.alphas.push_back(path.front());
            m_out.mu_tracks.assign(mu0.size(), {});
            for (std::size_t i = 0; i < mu0.size(); ++i) {
                m_out.mu_tracks[i].push_back(mu0[i]);
            }
            m_out.nodes.push_back(0);
            for (std::size_t k = 1; k < path.size(); ++k) {
                advance(path[k - 1], path[k], 0);
                m_out.nodes.push_back(m_out.alphas.size() - 1);
            }
            return m_out;
        }

    private:
        void check_point(cplx alpha) const
        {
            if (m_ps.lattice().on_lattice(alpha)) {
                std::ostringstream os;
                os << "path sample alpha = " << alpha << " lies on the lattice";
                throw Error(ErrorCode::PathThroughLattice, os.str());
            }
        }

        std::vector<cplx> predict(cplx target) const
        {
            const std::size_t k = m_out.alphas.size();
            std::vector<cplx> pred(m_out.mu_tracks.size());
            for (std::size_t i = 0; i < pred.size(); ++i) {
                pred[i] = m_out.mu_tracks[i][k - 1];
            }
            if (k < 2) {
                return pred;
            }
            const cplx a1 = m_out.alphas[k - 1];
            const cplx a0 = m_out.alphas[k - 2];
            const cplx t = (target - a1) / (a1 - a0);
            if (!(std::abs(t) <= 2.0)) {
                return pred;
            }
            for (std::size_t i = 0; i < pred.size(); ++i) {
                pred[i] += (m_out.mu_tracks[i][k - 1] - m_out.mu_tracks[i][k - 2]) * t;
            }
            return pred;
        }

        void advance(cplx from, cplx to, int depth)
        {
            check_point(to);
            const auto roots = sheets(m_ps, to);
            const auto pred = predict(to);
            const auto col = match_nearest(pred, roots);
            const double sep = min_pairwise_distance(roots);
            double jump = 0.0;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                jump = std::max(jump, std::abs(roots[col[i]] - pred[i]));
            }
            if (!(jump < 0.5 * sep)) {
                if (depth >= m_opts.max_depth) {
                    std::ostringstream os;
                    os << "ambiguous sheet matching between alpha = " << from << " and " << to
                       << " after " << depth << " bisections (branch point on the path?)";
                    throw Error(ErrorCode::RefinementLimitExceeded, os.str());
                }
                const cplx mid = 0.5 * (from + to);
                advance(from, mid, depth + 1);
                advance(mid, to, depth + 1);
                return;
            }
            m_out.alphas.push_back(to);
            for (std::size_t i = 0; i < pred.size(); ++i) {
                m_out.mu_tracks[i].push_back(roots[col[i]]);
            }
            m_out.max_jump = std::max(m_out.max_jump, jump);
            if (std::isfinite(sep)) {
                m_out.worst_jump_ratio = std::max(m_out.worst_jump_ratio, jump / (0.5 * sep));
            }
        }

        const PunctureSet &m_ps;
        TrackOptions m_opts;
        SheetPath m_out;
};

}

/// Continues the sheets along `path`, bisecting steps whose matching is ambiguous.
/**
 * Track i starts at the i-th sheet of sheets(ps, path[0]) (lexicographic
 * order). A step is accepted when every matched root lies within half the
 * minimal root separation of its prediction (secant extrapolation from the
 * last two accepted samples).
 */
inline SheetPath track(const PunctureSet &ps, const std::vector<cplx> &path, TrackOptions opts = {})
{
    return detail::Tracker(ps, opts).run(path);
}

using Permutation = std::vector<std::size_t>;

/// Apply `first`, then `second`.
inline Permutation compose(const Permutation &first, const Permutation &second)
{
    Permutation out(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        out[i] = second[first[i]];
    }
    return out;
}

inline Permutation inverse(const Permutation &p)
{
    Permutation out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[p[i]] = i;
    }
    return out;
}

inline bool is_identity(const Permutation &p)
{
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] != i) {
            return false;
        }
    }
    return true;
}

inline std::vector<std::vector<std::size_t>> cycles(const Permutation &p)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<char> seen(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) {
            continue;
        }
        std::vector<std::size_t> c;
        for (std::size_t j = i; !seen[j]; j = p[j]) {
            seen[j] = 1;
            c.push_back(j);
        }
        out.push_back(std::move(c));
    }
    return out;
}

struct LoopSpec
{
    cplx center;
    double radius = 0.0;
    std::size_t samples = 64;
    double start_angle = 0.0;
    bool clockwise = false;

    cplx base() const
    {
        return center + std::polar(radius, start_angle);
    }

    /// samples + 1 points; the last equals the first exactly.
    std::vector<cplx> path() const
    {
        std::vector<cplx> out(samples + 1);
        const double dir = clockwise ? -1.0 : 1.0;
        for (std::size_t k = 0; k < samples; ++k) {
            const double t = start_angle + dir * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
            out[k] = center + std::polar(radius, t);
        }
        out[samples] = out[0];
        return out;
    }
};

struct Monodromy
{
    cplx base_alpha;
    LoopSpec loop;
    Permutation permutation;   // sheet i at the base continues to sheet permutation[i]
};

/// Sheet permutation induced by a closed path (path.front() == path.back()).
inline Permutation path_permutation(const PunctureSet &ps, const std::vector<cplx> &closed_path,
                                    TrackOptions opts = {})
{
    if (closed_path.size() < 2 || closed_path.front() != closed_path.back()) {
        throw Error(ErrorCode::InvalidArgument, "path is not closed");
    }
    const auto sp = track(ps, closed_path, opts);
    const std::size_t n = sp.mu_tracks.size();
    std::vector<cplx> start(n), finish(n);
    for (std::size_t i = 0; i < n; ++i) {
        start[i] = sp.mu_tracks[i].front();
        finish[i] = sp.mu_tracks[i].back();
    }
    return detail::match_nearest(finish, start);
}

inline Monodromy loop_monodromy(const PunctureSet &ps, const LoopSpec &loop, TrackOptions opts = {})
{
    return {loop.base(), loop, path_permutation(ps, loop.path(), opts)};
}

/// Behaviour of one sheet as alpha -> 0.
struct SheetLimit
{
    enum class Kind
    {
        Pole,
        Finite,
        Unclassified,
    };

    Kind kind = Kind::Unclassified;
    std::array<cplx, 4> values{};      // mu + zeta(alpha) at radius r, r/2, r/4, r/8
    std::array<double, 3> growth{};    // |values[k+1]| / |values[k]|
    cplx limit;                        // Richardson estimate (meaningful for Finite)
    double cauchy_gap = 0.0;           // distance between the last two extrapolants
};

inline const char *to_string(SheetLimit::Kind k)
{
    switch (k) {
        case SheetLimit::Kind::Pole: return "POLE";
        case SheetLimit::Kind::Finite: return "FINITE";
        case SheetLimit::Kind::Unclassified: return "UNCLASSIFIED";
    }
    return "UNCLASSIFIED";
}

struct ZeroReport
{
    double radius = 0.0;
    Monodromy monodromy;
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<SheetLimit> sheets;   // indexed like the sheets at the base point
    std::vector<cplx> finite_limits;  // limits of FINITE sheets, sorted lexicographically

    std::size_t count(SheetLimit::Kind k) const
    {
        return static_cast<std::size_t>(std::count_if(sheets.begin(), sheets.end(),
                                                      [k](const SheetLimit &s) { return s.kind == k; }));
    }
};

namespace detail
{

inline SheetLimit classify_limit(const std::array<cplx, 4> &f)
{
    SheetLimit out;
    out.values = f;
    bool grows = true;
    for (std::size_t k = 0; k < 3; ++k) {
        out.growth[k] = std::abs(f[k + 1]) / std::abs(f[k]);
        grows = grows && out.growth[k] >= 1.8;
    }
    // Richardson tableau for f(r) = L + c1 r + c2 r^2 + ..., halving r.
    std::array<std::array<cplx, 4>, 4> r{};
    for (std::size_t k = 0; k < 4; ++k) {
        r[k][0] = f[k];
        for (std::size_t j = 1; j <= k; ++j) {
            const double p = std::ldexp(1.0, static_cast<int>(j));
            r[k][j] = (p * r[k][j - 1] - r[k - 1][j - 1]) / (p - 1.0);
        }
    }
    out.limit = r[3][3];
    out.cauchy_gap = std::abs(r[3][3] - r[2][2]);
    if (grows) {
        out.kind = SheetLimit::Kind::Pole;
    } else if (out.cauchy_gap <= 1e-4) {
        out.kind = SheetLimit::Kind::Finite;
    } else {
        out.kind = SheetLimit::Kind::Unclassified;
    }
    return out;
}

}

/// Monodromy around alpha = 0 and the alpha -> 0 behaviour of mu + zeta(alpha) on every sheet.
/**
 * radius <= 0 selects 1e-2 min(|e1|, |e2|). If the loop cannot be tracked or a
 * sheet stays unclassified (a branch point too close), the radius is halved, up
 * to six times.
 */
inline ZeroReport monodromy_at_zero(const PunctureSet &ps, double radius = 0.0, double angle = 0.0,
                                    TrackOptions opts = {})
{
    const Lattice &lat = ps.lattice();
    if (radius <= 0.0) {
        radius = 1e-2 * lat.min_generator_length();
    }
    ZeroReport rep;
    for (int attempt = 0;; ++attempt) {
        try {
            LoopSpec loop{cplx(0.0, 0.0), radius, 64, angle, false};
            rep.monodromy = loop_monodromy(ps, loop, opts);
            // Radial continuation r -> r/8; samples at even positions are r, r/2, r/4, r/8.
            std::vector<cplx> ray;
            const cplx dir = std::polar(1.0, angle);
            for (double s : {1.0, 0.75, 0.5, 0.375, 0.25, 0.1875, 0.125}) {
                ray.push_back(radius * s * dir);
            }
            const auto sp = track(ps, ray, opts);
            std::array<cplx, 4> zetas{};
            for (std::size_t k = 0; k < 4; ++k) {
                zetas[k] = zeta(lat, ray[2 * k]);
            }
            rep.sheets.clear();
            for (std::size_t i = 0; i < sp.mu_tracks.size(); ++i) {
                std::array<cplx, 4> f{};
                for (std::size_t k = 0; k < 4; ++k) {
                    f[k] = sp.mu_tracks[i][sp.nodes[2 * k]] + zetas[k];
                }
                rep.sheets.push_back(detail::classify_limit(f));
            }
            // A branch point close to 0 spoils the extrapolation; shrink while the budget lasts.
            if (attempt < 6 && rep.count(SheetLimit::Kind::Unclassified) > 0) {
                radius *= 0.5;
                continue;
            }
            break;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::RefinementLimitExceeded || attempt >= 6) {
                throw;
            }
            radius *= 0.5;
        }
    }
    rep.radius = radius;
    rep.cycles = cycles(rep.monodromy.permutation);
    for (const auto &s : rep.sheets) {
        if (s.kind == SheetLimit::Kind::Finite) {
            rep.finite_limits.push_back(s.limit);
        }
    }
    detail::sort_lex(rep.finite_limits);
    return rep;
}

/// Product of squared sheet differences; vanishes exactly at branch points of the covering.
inline cplx discriminant(const PunctureSet &ps, cplx alpha)
{
    const auto mu = sheets(ps, alpha);
    cplx d(1.0, 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = i + 1; j < mu.size(); ++j) {
            d *= (mu[i] - mu[j]) * (mu[i] - mu[j]);
        }
    }
    return d;
}

/// Candidate branch points in the fundamental parallelogram.
/**
 * Local minima of |discriminant| on an nx x ny grid, polished by Newton's
 * method with a central-difference derivative. Diagnostic only: a point is
 * kept when Newton converges and |discriminant| drops below 1e-6 times the
 * grid median; coverage is not guaranteed.
 */
inline std::vector<cplx> locate_branch_points(const PunctureSet &ps, std::size_t nx = 48, std::size_t ny = 48)
{
    const Lattice &lat = ps.lattice();
    if (ps.size() < 2) {
        return {};
    }
    auto node = [&](std::size_t i, std::size_t j) {
        return (static_cast<double>(i) + 0.5) / static_cast<double>(nx) * lat.e1()
               + (static_cast<double>(j) + 0.5) / static_cast<double>(ny) * lat.e2();
    };
    std::vector<double> mag(nx * ny, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const cplx a = node(i, j);
            if (lat.distance_to_lattice(a) < 0.05 * lat.min_generator_length()) {
                continue;
            }
            try {
                mag[i * ny + j] = std::abs(discriminant(ps, a));
            } catch (const Error &) {
            }
        }
    }
    std::vector<double> finite;
    for (double m : mag) {
        if (std::isfinite(m)) {
            finite.push_back(m);
        }
    }
    if (finite.empty()) {
        return {};
    }
    std::nth_element(finite.begin(), finite.begin() + static_cast<std::ptrdiff_t>(finite.size() / 2), finite.end());
    const double median = finite[finite.size() / 2];

    std::vector<cplx> found;
    const double h = 1e-6 * lat.min_generator_length();
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double m = mag[i * ny + j];
            if (!std::isfinite(m)) {
                continue;
            }
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) {
                        continue;
                    }
                    const std::size_t ii = (i + nx + static_cast<std::size_t>(di + static_cast<int>(nx))) % nx;
                    const std::size_t jj = (j + ny + static_cast<std::size_t>(dj + static_cast<int>(ny))) % ny;
                    if (mag[ii * ny + jj] < m) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (!is_min) {
                continue;
            }
            cplx a = node(i, j);
            bool converged = false;
            try {
                for (int it = 0; it < 60; ++it) {
                    const cplx d0 = discriminant(ps, a);
                    const cplx dd = (discriminant(ps, a + h) - discriminant(ps, a - h)) / (2.0 * h);
                    if (dd == cplx(0.0, 0.0)) {
                        break;
                    }
                    const cplx step = d0 / dd;
                    a -= step;
                    if (std::abs(step) < 1e-12 * lat.min_generator_length()) {
                        converged = true;
                        break;
                    }
                }
                if (converged && std::abs(discriminant(ps, a)) <= 1e-6 * median) {
                    const cplx a0 = lat.reduce(a).z0;
                    bool dup = false;
                    for (const cplx f : found) {
                        if (lat.distance_to_lattice(f - a0) < 1e-6 * lat.min_generator_length()) {
                            dup = true;
                            break;
                        }
                    }
                    if (!dup) {
                        found.push_back(a0);
                    }
                }
            } catch (const Error &) {
            }
        }
    }
    detail::sort_lex(found);
    return found;
}

}

#endif
