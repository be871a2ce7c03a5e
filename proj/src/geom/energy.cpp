#include "moment/geom/energy.hpp"

#include <cmath>
#include <memory>
#include <random>

#include <gsl/gsl_integration.h>

namespace moment::geom {

namespace {

struct GlTable {
    explicit GlTable(int n) : t(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n))) {
        if (!t) throw GeomError("cannot build a Gauss-Legendre rule of order " + std::to_string(n));
    }
    ~GlTable() { gsl_integration_glfixed_table_free(t); }
    GlTable(const GlTable&) = delete;
    GlTable& operator=(const GlTable&) = delete;
    gsl_integration_glfixed_table* t;
};

}  // namespace

double energy(const SurfaceSpec& s, double alpha, const Rect& patch, int n, const FrameOptions& opt) {
    if (n < 1) throw GeomError("quadrature order must be positive");
    GlTable gl(n);
    double total = 0;
    for (int i = 0; i < n; ++i) {
        double u, wu;
        gsl_integration_glfixed_point(patch.u0, patch.u1, static_cast<std::size_t>(i), &u, &wu, gl.t);
        for (int j = 0; j < n; ++j) {
            double v, wv;
            gsl_integration_glfixed_point(patch.v0, patch.v1, static_cast<std::size_t>(j), &v, &wv, gl.t);
            double r = chart_point(s, u, v).norm();
            if (alpha < 0 && r < 1e-8) throw GeomError("integrand is singular: the patch reaches the origin");
            total += wu * wv * std::pow(r, alpha) * area_element(s, u, v, opt);
        }
    }
    return total;
}

double first_variation(const SurfaceSpec& s, double alpha, const ScalarField& phi, double eps, const Rect& patch, int n,
                       const FrameOptions& opt) {
    if (!(eps > 0)) throw GeomError("eps must be positive");
    auto moved = [&](double t) {
        Analytic a;
        a.chart = [&s, &phi, &opt, t](double u, double v) {
            FrameSample f = surface_frame(s, u, v, opt);
            return Vec3(f.position + t * phi(f.position, u, v) * f.normal);
        };
        a.domain = patch;
        a.scale = chart_scale(s);
        SurfaceSpec m;
        m.kind = a;
        return m;
    };
    FrameOptions fd = opt;
    fd.force_fd = true;
    return (energy(moved(eps), alpha, patch, n, fd) - energy(moved(-eps), alpha, patch, n, fd)) / (2 * eps);
}

ScalarField random_smooth_field(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.1);
    double c0 = g(rng);
    Vec3 c(g(rng), g(rng), g(rng));
    Eigen::Matrix3d A;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = g(rng);
    return [=](const Vec3& x, double, double) { return c0 + c.dot(x) + x.dot(A * x); };
}

ScalarField bump_field(double u0, double v0, double radius) {
    return [=](const Vec3&, double u, double v) {
        double rho2 = ((u - u0) * (u - u0) + (v - v0) * (v - v0)) / (radius * radius);
        return rho2 < 1 ? std::exp(1 - 1 / (1 - rho2)) : 0.0;
    };
}

}  // namespace moment::geom
