#pragma once

#include <utility>

#include "moment/sym/ratio.hpp"

namespace moment::sym {

struct Solution2 {
    Ratio x, y, det;
};

// p1*x + q1*y + r1 = 0, p2*x + q2*y + r2 = 0 by Cramer's rule.
// Throws AlgebraError when p1*q2 - p2*q1 is identically zero.
Solution2 solve_linear_2x2(const Ratio& p1, const Ratio& q1, const Ratio& r1,
                           const Ratio& p2, const Ratio& q2, const Ratio& r2);

// Root of an expression affine in v: returns -B/A for x = A*v + B.
// Throws AlgebraError if x is not affine in v or A vanishes.
Ratio solve_affine(const Ratio& x, Var v);

// Coefficients of x in v; x must be polynomial in v (v absent from the denominator).
std::vector<Ratio> collect_coefficients(const Ratio& x, Var v);

}  // namespace moment::sym
