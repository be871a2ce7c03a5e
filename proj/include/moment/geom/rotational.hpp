#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "moment/geom/surface.hpp"

namespace moment::geom {

// Unit-speed meridian (f, z) with turning angle theta: f' = cos theta, z' = sin theta.
struct ProfileCurve {
    std::vector<double> s, f, z, theta, theta_prime;

    std::size_t size() const { return s.size(); }
    // Quintic Hermite through (value, first, second derivative) at the samples.
    void eval(double at, double& f_out, double& z_out) const;
};

struct ShootStart {
    double f0 = 0, z0 = 0, theta0 = 0;
};

// theta' = -sin(theta)/f - alpha (f sin(theta) - z cos(theta)) / (f^2 + z^2), fixed-step RK4.
// Below f = 1e-8 the parallel term takes its axis limit theta', halving the equation.
ProfileCurve shoot_rotational(double alpha, ShootStart start, double arclen, double step);

// Right-hand side of the angle equation, exposed for tests.
double turning_rate(double alpha, double f, double z, double theta);

void write_profile_csv(std::ostream& os, const ProfileCurve& p);
// Reads "s,f,z,theta"; theta' is recovered by central differences.
ProfileCurve read_profile_csv(std::istream& is);
ProfileCurve load_profile(const std::string& path);

}  // namespace moment::geom
