#include "moment/geom/rotational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace moment::geom {

namespace {

constexpr double kAxis = 1e-8;

using State = std::array<double, 3>;  // f, z, theta

State rhs(double alpha, const State& y) {
    return {std::cos(y[2]), std::sin(y[2]), turning_rate(alpha, y[0], y[1], y[2])};
}

State axpy(const State& y, double h, const State& k) { return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]}; }

double hermite5(double t, double h, double y0, double d0, double dd0, double y1, double d1, double dd1) {
    double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
    double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    double h3 = 0.5 * (t3 - 2 * t4 + t5);
    double h4 = -4 * t3 + 7 * t4 - 3 * t5;
    double h5 = 10 * t3 - 15 * t4 + 6 * t5;
    return y0 * h0 + h * d0 * h1 + h * h * dd0 * h2 + h * h * dd1 * h3 + h * d1 * h4 + y1 * h5;
}

}  // namespace

double turning_rate(double alpha, double f, double z, double theta) {
    double r2 = f * f + z * z;
    if (r2 < 1e-24) throw GeomError("profile reaches the origin");
    double support = alpha * (f * std::sin(theta) - z * std::cos(theta)) / r2;
    if (std::abs(f) < kAxis) return -support / 2;
    return -std::sin(theta) / f - support;
}

void ProfileCurve::eval(double at, double& f_out, double& z_out) const {
    if (s.size() < 2) throw GeomError("profile has fewer than two samples");
    auto it = std::upper_bound(s.begin(), s.end(), at);
    std::size_t i = it == s.begin() ? 0 : std::min<std::size_t>(it - s.begin() - 1, s.size() - 2);
    double h = s[i + 1] - s[i];
    double t = (at - s[i]) / h;
    auto d = [&](std::size_t j) { return std::array<double, 4>{std::cos(theta[j]), -std::sin(theta[j]) * theta_prime[j],
                                                                std::sin(theta[j]), std::cos(theta[j]) * theta_prime[j]}; };
    auto a = d(i), b = d(i + 1);
    f_out = hermite5(t, h, f[i], a[0], a[1], f[i + 1], b[0], b[1]);
    z_out = hermite5(t, h, z[i], a[2], a[3], z[i + 1], b[2], b[3]);
}

ProfileCurve shoot_rotational(double alpha, ShootStart start, double arclen, double step) {
    if (!(step > 0)) throw GeomError("step must be positive");
    if (!(arclen > 0)) throw GeomError("arc length must be positive");
    if (start.f0 < 0) throw GeomError("start must have f >= 0");
    if (start.f0 < kAxis && std::abs(std::sin(start.theta0)) > 1e-12)
        throw GeomError("an on-axis start must leave the axis perpendicularly (theta0 = 0 or pi)");
    // The step is shrunk slightly so the last sample lands on arclen.
    auto n = static_cast<std::size_t>(std::ceil(arclen / step - 1e-9));
    double h = arclen / static_cast<double>(n);

    ProfileCurve out;
    State y{start.f0, start.z0, start.theta0};
    auto record = [&](double s) {
        out.s.push_back(s);
        out.f.push_back(y[0]);
        out.z.push_back(y[1]);
        out.theta.push_back(y[2]);
        out.theta_prime.push_back(turning_rate(alpha, y[0], y[1], y[2]));
    };
    record(0);
    // Classical RK4 written out: GSL's rk4 stepper takes two half steps per call for its error estimate.
    for (std::size_t i = 1; i <= n; ++i) {
        State k1 = rhs(alpha, y);
        State k2 = rhs(alpha, axpy(y, h / 2, k1));
        State k3 = rhs(alpha, axpy(y, h / 2, k2));
        State k4 = rhs(alpha, axpy(y, h, k3));
        for (int c = 0; c < 3; ++c) y[c] += h / 6 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]) || std::abs(k1[2]) * h > 1)
            throw GeomError("integration became unstable at s = " + std::to_string(i * h));
        if (y[0] < kAxis) throw GeomError("profile reaches the axis at s = " + std::to_string(i * h));
        record(static_cast<double>(i) * h);
    }
    return out;
}

void write_profile_csv(std::ostream& os, const ProfileCurve& p) {
    os << "s,f,z,theta\n";
    char buf[128];
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.s[i], p.f[i], p.z[i], p.theta[i]);
        os << buf;
    }
}

ProfileCurve read_profile_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "s,f,z,theta") throw GeomError("profile CSV must start with s,f,z,theta");
    ProfileCurve p;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double v[4];
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4)
            throw GeomError("bad profile row: " + line);
        if (!p.s.empty() && v[0] <= p.s.back()) throw GeomError("profile arc length must increase");
        p.s.push_back(v[0]);
        p.f.push_back(v[1]);
        p.z.push_back(v[2]);
        p.theta.push_back(v[3]);
    }
    std::size_t n = p.size();
    if (n < 3) throw GeomError("profile needs at least three samples");
    p.theta_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? n - 1 : i + 1;
        p.theta_prime[i] = (p.theta[b] - p.theta[a]) / (p.s[b] - p.s[a]);
    }
    return p;
}

ProfileCurve load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeomError("cannot read " + path);
    return read_profile_csv(in);
}

}  // namespace moment::geom
