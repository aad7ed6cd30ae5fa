#ifndef TORSION_GAP_FIELD_HPP
#define TORSION_GAP_FIELD_HPP

#include <concepts>

#include "torsion_gap/geometry.hpp"

namespace torsion_gap {

/// A scalar function on the plane with analytic first and second derivatives.
template <class F>
concept ScalarField = requires(const F& f, const Point& x) {
    { f.value(x) } -> std::convertible_to<double>;
    { f.gradient(x) } -> std::convertible_to<Vector>;
    { f.hessian(x) } -> std::convertible_to<Matrix2>;
};

}  // namespace torsion_gap

#endif  // TORSION_GAP_FIELD_HPP
