#ifndef TORSION_GAP_TORSION_GAP_HPP
#define TORSION_GAP_TORSION_GAP_HPP

#include "torsion_gap/errors.hpp"
#include "torsion_gap/literals.hpp"
#include "torsion_gap/geometry.hpp"
#include "torsion_gap/quadrature.hpp"
#include "torsion_gap/field.hpp"
#include "torsion_gap/exact_solutions.hpp"
#include "torsion_gap/harmonic_mfs.hpp"
#include "torsion_gap/torsion_core.hpp"
#include "torsion_gap/asymptotics.hpp"
#include "torsion_gap/rate_fit.hpp"
#include "torsion_gap/sweep.hpp"
#include "torsion_gap/verify.hpp"

#endif  // TORSION_GAP_TORSION_GAP_HPP
