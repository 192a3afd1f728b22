#ifndef ELLSPEC_ELLSPEC_HPP
#define ELLSPEC_ELLSPEC_HPP

#include "error.hpp"
#include "theta.hpp"
#include "lattice.hpp"
#include "weierstrass.hpp"
#include "contour.hpp"
#include "baker_akhiezer.hpp"
#include "linalg.hpp"
#include "assignment.hpp"
#include "parallel.hpp"
#include "punctures.hpp"
#include "eigenfunction.hpp"
#include "spectral_curve.hpp"
#include "continuation.hpp"
#include "degenerate_beta.hpp"
#include "weierstrass_surface.hpp"

#endif
