#ifndef ELLSPEC_PUNCTURES_HPP
#define ELLSPEC_PUNCTURES_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"

namespace ellspec
{

/// N >= 1 pairwise distinct marked points on C / Lambda.
/**
 * The representatives are kept exactly as given; everything downstream uses
 * differences p_l - p_m of these representatives.
 */
class PunctureSet
{
    public:
        PunctureSet(const Lattice &lat, std::vector<cplx> points) : m_lat(lat), m_points(std::move(points))
        {
            if (m_points.empty()) {
                throw Error(ErrorCode::InvalidPunctures, "at least one puncture is required");
            }
            m_min_sep = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_points.size(); ++i) {
                for (std::size_t j = i + 1; j < m_points.size(); ++j) {
                    m_min_sep = std::min(m_min_sep, lat.distance_to_lattice(m_points[i] - m_points[j]));
                }
            }
            if (m_points.size() > 1 && m_min_sep < 1e-6 * lat.min_generator_length()) {
                std::ostringstream os;
                os << "punctures coincide modulo the lattice (separation " << m_min_sep << ")";
                throw Error(ErrorCode::InvalidPunctures, os.str());
            }
        }

        const Lattice &lattice() const { return m_lat; }
        const std::vector<cplx> &points() const { return m_points; }
        std::size_t size() const { return m_points.size(); }
        cplx operator[](std::size_t l) const { return m_points[l]; }

        /// Minimal pairwise distance modulo Lambda; infinity for N = 1.
        double min_separation() const { return m_min_sep; }

        /// Radius of the circles used for Laurent extraction at the punctures.
        double contour_radius() const
        {
            if (m_points.size() == 1) {
                return 1e-2 * m_lat.min_generator_length() / 4.0;
            }
            return 1e-2 * m_min_sep;
        }

        /// Distance from z to the nearest translate p_l + Lambda.
        double distance_to_punctures(cplx z) const
        {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx p : m_points) {
                best = std::min(best, m_lat.distance_to_lattice(z - p));
            }
            return best;
        }

    private:
        Lattice m_lat;
        std::vector<cplx> m_points;
        double m_min_sep = 0.0;
};

}

#endif
