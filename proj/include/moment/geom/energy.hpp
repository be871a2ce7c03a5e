#pragma once

#include <cstdint>
#include <functional>

#include "moment/geom/surface.hpp"

namespace moment::geom {

// Tensor Gauss-Legendre rule of order n per axis for the integral of |Phi|^alpha dA over the patch.
double energy(const SurfaceSpec& s, double alpha, const Rect& patch, int n = 32, const FrameOptions& opt = {});

// phi(point, u, v): normal speed of the variation.
using ScalarField = std::function<double(const Vec3&, double, double)>;

// (E(+eps) - E(-eps)) / (2 eps) for the surface moved by t phi N.
double first_variation(const SurfaceSpec& s, double alpha, const ScalarField& phi, double eps, const Rect& patch,
                       int n = 32, const FrameOptions& opt = {});

// c0 + <c, x> + x^T A x with standard normal coefficients scaled by 0.1; smooth on any chart.
ScalarField random_smooth_field(std::uint64_t seed);
// exp(1 - 1/(1 - rho^2)) for rho = |(u - u0, v - v0)| / radius < 1, zero outside.
ScalarField bump_field(double u0, double v0, double radius);

}  // namespace moment::geom
