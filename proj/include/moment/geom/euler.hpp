#pragma once

#include <functional>
#include <string>
#include <vector>

namespace moment::geom {

struct PolarCurve {
    std::function<double(double)> r, dr, ddr;
    double lo = 0, hi = 0;  // open interval where r > 0
    std::string name;
};

// r = sec(m theta)^(1/m), i.e. r^m cos(m theta) = 1, on |theta| < pi/(2m).
// m = 1 is a line, m = 2 the rectangular hyperbola.
PolarCurve sec_power_curve(double m);
// "line", "hyperbola", "sec3", or "sec:<m>".
PolarCurve named_curve(const std::string& name);

// kappa - alpha <n, gamma>/|gamma|^2 for the planar functional int r^alpha ds.
double euler_curve_residual(double alpha, const PolarCurve& c, double theta);

// Polar Euler-Lagrange expression dL/dr - d/dtheta dL/dr' for L = r^alpha sqrt(r'^2 + r^2)
// (arc_length) or the integrand as printed, L = r^alpha sqrt(r'^2 + r'^2) (literal).
enum class Reading { arc_length, literal };
double euler_lagrange_residual(double alpha, const PolarCurve& c, double theta, Reading reading);

// Independent check of euler_curve_residual: the exact gradient of the energy of a
// polyline through the curve (vertices equally spaced in arc length), projected on the
// normal and divided by the rho-weighted mass of the vertex hat function.
struct OracleComparison {
    std::vector<double> theta, oracle, formula;
    double max_abs_diff = 0;
};
OracleComparison polyline_oracle(double alpha, const PolarCurve& c, double lo, double hi, int segments = 200);

}  // namespace moment::geom
