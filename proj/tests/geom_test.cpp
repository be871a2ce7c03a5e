#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "moment/geom/energy.hpp"
#include "moment/geom/euler.hpp"
#include "moment/geom/rotational.hpp"
#include "moment/geom/surface.hpp"

using namespace moment::geom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kPi = M_PI;

// Relative error of finite-difference H against the closed form at one point.
double fd_error(const SurfaceSpec& s, double u, double v, double h) {
    FrameOptions fd;
    fd.force_fd = true;
    fd.fd_step = h;
    return std::abs(surface_frame(s, u, v, fd).H - surface_frame(s, u, v).H);
}

Eigen::Matrix3d some_rotation() {
    return (Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()) * Eigen::AngleAxisd(-1.1, Vec3::UnitX())).toRotationMatrix();
}

}  // namespace

TEST_CASE("closed-form frames") {
    auto sphere = make_sphere({0, 0, 0}, 1);
    for (double u : {0.3, 1.2, 2.9})
        for (double v : {0.0, 2.0, 5.5}) {
            auto f = surface_frame(sphere, u, v);
            REQUIRE_THAT(f.H, WithinAbs(-2, 1e-14));
            REQUIRE_THAT(f.K, WithinAbs(1, 1e-14));
            REQUIRE_THAT(f.normal.norm(), WithinAbs(1, 1e-12));
            REQUIRE(f.normal.dot(f.position) > 0);
        }
    auto plane = surface_frame(make_plane({0, 0, 1}, 0), 0.2, -0.4);
    REQUIRE(plane.H == 0);
    REQUIRE(plane.K == 0);
    auto cyl = surface_frame(make_cylinder({0, 0, 0}, {0, 0, 1}, 1), 0.5, 1.5);
    REQUIRE(cyl.K == 0);
    REQUIRE_THAT(std::abs(cyl.H), WithinAbs(1, 1e-14));
    REQUIRE(cyl.kappa1 >= cyl.kappa2);
}

TEST_CASE("finite differences converge at second order") {
    auto check = [](const SurfaceSpec& s, double u, double v) {
        double ratio = fd_error(s, u, v, 1e-2) / fd_error(s, u, v, 5e-3);
        INFO("ratio " << ratio);
        REQUIRE(ratio >= 3);
        REQUIRE(ratio <= 5);
    };
    check(make_sphere({0, 0, 1}, 1), 1.0, 0.4);
    check(make_sphere({0.3, -0.2, 0}, 2.5), 2.1, 4.0);
    check(make_cylinder({0, 1, 0}, {1, 1, 0}, 0.8), 0.9, 0.3);
    // The plane chart is affine, so its differences are exact.
    REQUIRE(fd_error(make_plane({1, 2, 2}, 1), 0.3, 0.3, 1e-2) < 1e-10);
}

TEST_CASE("H and K are the sum and product of the principal curvatures") {
    Analytic torus;
    torus.chart = [](double u, double v) {
        return Vec3((2 + std::cos(v)) * std::cos(u), (2 + std::cos(v)) * std::sin(u), std::sin(v));
    };
    torus.domain = {0, 2 * kPi, 0, 2 * kPi};
    SurfaceSpec s;
    s.kind = torus;
    for (double v : {0.1, 1.3, 2.8, 4.0}) {
        auto f = surface_frame(s, 0.4, v);
        REQUIRE_THAT(f.kappa1 + f.kappa2, WithinRel(f.H, 1e-9));
        REQUIRE_THAT(f.kappa1 * f.kappa2, WithinRel(f.K, 1e-9));
        // Torus with radii 2 and 1: K = cos v / (2 + cos v).
        REQUIRE_THAT(f.K, WithinAbs(std::cos(v) / (2 + std::cos(v)), 1e-6));
    }
}

TEST_CASE("flipping orientation negates H and the residual") {
    auto s = make_cylinder({0, 0, 0}, {0, 0, 1}, 1);
    auto t = flipped(s);
    for (double z : {-1.5, 0.2}) {
        auto a = surface_frame(s, 1.0, z), b = surface_frame(t, 1.0, z);
        REQUIRE(b.H == -a.H);
        REQUIRE(b.K == a.K);
        REQUIRE(stationarity_residual(t, -2, 1.0, z) == -stationarity_residual(s, -2, 1.0, z));
    }
}

TEST_CASE("rotations about the origin leave the residual unchanged") {
    for (auto s : {make_cylinder({0.2, 0, 0}, {0, 1, 1}, 1), make_sphere({0, 0, 1}, 1), make_sphere({1, 1, 0}, 0.5)}) {
        auto r = s;
        r.rotation = some_rotation();
        for (double u : {0.4, 1.7})
            for (double v : {0.3, 2.2}) {
                REQUIRE_THAT(stationarity_residual(r, -3, u, v), WithinAbs(stationarity_residual(s, -3, u, v), 1e-10));
                FrameOptions fd;
                fd.force_fd = true;
                REQUIRE_THAT(stationarity_residual(r, -3, u, v, fd),
                             WithinAbs(stationarity_residual(s, -3, u, v, fd), 1e-10));
            }
    }
}

TEST_CASE("stationary classification examples") {
    auto plane = make_plane({0.3, -1, 2}, 0);
    for (double alpha : {-4.0, 0.0, 7.0})
        for (double u : {-0.9, 0.5}) REQUIRE_THAT(stationarity_residual(plane, alpha, u, 0.3), WithinAbs(0, 1e-14));
    auto centered = make_sphere({0, 0, 0}, 1);
    auto through = make_sphere({0, 0, 1}, 1);
    for (double u : {0.2, 1.5, 2.9}) {
        REQUIRE_THAT(stationarity_residual(centered, -2, u, 1.0), WithinAbs(0, 1e-14));
        REQUIRE_THAT(stationarity_residual(through, -4, u, 1.0), WithinAbs(0, 1e-12));
        REQUIRE(std::abs(stationarity_residual(centered, -4, u, 1.0)) > 1);
    }
    // The pole u = pi of the second sphere is the origin.
    REQUIRE_THROWS_AS(stationarity_residual(through, -4, kPi, 0), GeomError);
    // Unit cylinder about the z-axis: -1 - alpha / (1 + z^2).
    auto cyl = make_cylinder({0, 0, 0}, {0, 0, 1}, 1);
    REQUIRE_THAT(stationarity_residual(cyl, 2, 0.3, 0.5), WithinAbs(-1 - 2 / 1.25, 1e-14));
}

TEST_CASE("energy quadrature") {
    auto unit = make_sphere({0, 0, 0}, 1);
    for (double alpha : {-4.0, -2.0, 0.0, 1.0, 2.0})
        REQUIRE_THAT(energy(unit, alpha, default_domain(unit), 32), WithinAbs(4 * kPi, 1e-8));
    auto big = make_sphere({0, 0, 0}, 2);
    REQUIRE_THAT(energy(big, 1.5, default_domain(big), 32), WithinRel(4 * kPi * std::pow(2, 3.5), 1e-10));

    Analytic annulus;
    annulus.chart = [](double rho, double phi) { return Vec3(rho * std::cos(phi), rho * std::sin(phi), 0); };
    annulus.domain = {1, 2, 0, 2 * kPi};
    SurfaceSpec flat;
    flat.kind = annulus;
    for (double alpha : {-3.0, 1.0, 2.5}) {
        double exact = 2 * kPi * (std::pow(2, alpha + 2) - 1) / (alpha + 2);
        REQUIRE_THAT(energy(flat, alpha, annulus.domain, 32), WithinRel(exact, 1e-7));
    }
    // An odd rule on a symmetric patch samples the origin itself.
    REQUIRE_THROWS_AS(energy(make_plane({0, 0, 1}, 0), -1, {-1, 1, -1, 1}, 33), GeomError);
    REQUIRE_THROWS_AS(energy(unit, 0, default_domain(unit), 0), GeomError);
}

TEST_CASE("first variation") {
    auto plane = make_plane({0, 0, 1}, 0);
    double bump = first_variation(plane, 1, bump_field(0.1, -0.2, 0.5), 1e-4, {-1, 1, -1, 1}, 48);
    REQUIRE(std::abs(bump) <= 1e-6);

    auto unit = make_sphere({0, 0, 0}, 1);
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
        REQUIRE(std::abs(first_variation(unit, -2, random_smooth_field(seed), 1e-4, default_domain(unit))) <= 1e-5);
    auto one = [](const Vec3&, double, double) { return 1.0; };
    REQUIRE_THAT(first_variation(unit, -1, one, 1e-4, default_domain(unit)), WithinAbs(4 * kPi, 1e-4));
    // Away from alpha = -2 the same sphere is not critical.
    REQUIRE(std::abs(first_variation(unit, 0, one, 1e-4, default_domain(unit))) > 1);
    REQUIRE_THROWS_AS(first_variation(unit, 0, one, 0, default_domain(unit)), GeomError);
}

TEST_CASE("shooting reproduces the stationary spheres") {
    auto south = shoot_rotational(-2, {0, -1, 0}, kPi - 0.1, 1e-3);
    double worst = 0;
    for (std::size_t i = 0; i < south.size(); ++i)
        worst = std::max({worst, std::abs(south.f[i] - std::sin(south.s[i])), std::abs(south.z[i] + std::cos(south.s[i]))});
    REQUIRE(worst <= 1e-6);

    // Sphere of radius 1 centered at (0,0,1), started on its equator and run up towards the top.
    auto equator = shoot_rotational(-4, {1, 1, kPi / 2}, kPi / 2 - 0.1, 1e-3);
    worst = 0;
    for (std::size_t i = 0; i < equator.size(); ++i)
        worst = std::max({worst, std::abs(equator.f[i] - std::cos(equator.s[i])),
                          std::abs(equator.z[i] - 1 - std::sin(equator.s[i]))});
    REQUIRE(worst <= 1e-6);

    auto flat = shoot_rotational(0, {0, 0.7, 0}, 3, 1e-2);
    for (std::size_t i = 0; i < flat.size(); ++i) {
        REQUIRE_THAT(flat.z[i], WithinAbs(0.7, 1e-14));
        REQUIRE_THAT(flat.f[i], WithinAbs(flat.s[i], 1e-12));
    }
}

TEST_CASE("shot profiles are unit speed and stationary") {
    auto p = std::make_shared<ProfileCurve>(shoot_rotational(-1, {0, -1, 0}, 1.5, 1e-3));
    for (std::size_t i = 1; i < p->size(); ++i) {
        double df = p->f[i] - p->f[i - 1], dz = p->z[i] - p->z[i - 1], ds = p->s[i] - p->s[i - 1];
        REQUIRE_THAT(df * df + dz * dz, WithinRel(ds * ds, 1e-6));
    }
    auto s = make_rotational(p);
    for (double u : {0.2, 0.7, 1.3})
        for (double v : {0.0, 2.0}) REQUIRE(std::abs(stationarity_residual(s, -1, u, v)) <= 1e-5);
}

TEST_CASE("shooting errors") {
    REQUIRE_THROWS_AS(shoot_rotational(-2, {0, -1, 0}, 1, 0), GeomError);
    REQUIRE_THROWS_AS(shoot_rotational(-2, {0, -1, 0.3}, 1, 1e-2), GeomError);
    // The centered sphere closes up at the north pole.
    REQUIRE_THROWS_AS(shoot_rotational(-2, {0, -1, 0}, kPi + 0.1, 1e-3), GeomError);
    REQUIRE_THROWS_AS(turning_rate(-2, 0, 0, 0), GeomError);
}

TEST_CASE("profile CSV round trip") {
    auto p = shoot_rotational(-2, {0, -1, 0}, 1, 0.1);
    std::stringstream ss;
    write_profile_csv(ss, p);
    auto q = read_profile_csv(ss);
    REQUIRE(q.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        REQUIRE(q.s[i] == p.s[i]);
        REQUIRE(q.f[i] == p.f[i]);
        REQUIRE(q.z[i] == p.z[i]);
        REQUIRE(q.theta[i] == p.theta[i]);
    }
    std::stringstream bad("s,f,z\n0,0,0\n");
    REQUIRE_THROWS_AS(read_profile_csv(bad), GeomError);
    std::stringstream backwards("s,f,z,theta\n0,0,0,0\n1,1,0,0\n0.5,1,0,0\n");
    REQUIRE_THROWS_AS(read_profile_csv(backwards), GeomError);
}

TEST_CASE("surface grammar") {
    auto s = parse_surface("sphere r=2 center=0,0,1");
    REQUIRE(std::get<Sphere>(s.kind).radius == 2);
    REQUIRE(std::get<Sphere>(s.kind).center == Vec3(0, 0, 1));
    auto p = parse_surface("plane n=0,0,2 d=4");
    REQUIRE(std::get<Plane>(p.kind).offset == 2);
    auto c = parse_surface("cylinder r=1 axis=1,0,0 dir=0,1,0 orientation=inward");
    REQUIRE(c.orientation == Orientation::inward);
    REQUIRE(std::get<Cylinder>(c.kind).dir == Vec3(0, 1, 0));
    REQUIRE_THROWS_AS(parse_surface("sphere"), GeomError);
    REQUIRE_THROWS_AS(parse_surface("sphere r=-1"), GeomError);
    REQUIRE_THROWS_AS(parse_surface("sphere r=1 color=red"), GeomError);
    REQUIRE_THROWS_AS(parse_surface("sphere r=1 r=2"), GeomError);
    REQUIRE_THROWS_AS(parse_surface("plane n=0,0"), GeomError);
    REQUIRE_THROWS_AS(parse_surface("cone r=1"), GeomError);
    REQUIRE_THROWS_AS(parse_surface("rotational file=/nonexistent.csv"), GeomError);
}

TEST_CASE("planar Euler curves") {
    auto line = named_curve("line");
    for (double t : {-1.0, 0.0, 0.8}) REQUIRE_THAT(euler_curve_residual(0, line, t), WithinAbs(0, 1e-14));
    auto sec3 = named_curve("sec3");
    for (double t = -kPi / 6 + 0.05; t <= kPi / 6 - 0.05; t += 0.01)
        REQUIRE_THAT(euler_curve_residual(2, sec3, t), WithinAbs(0, 1e-8));
    auto hyp = named_curve("hyperbola");
    REQUIRE_THAT(euler_curve_residual(1, hyp, 0.3), WithinAbs(0, 1e-12));
    // At the vertex r = 1, r' = 0, r'' = 2: kappa = -1 and the weight term is alpha.
    REQUIRE_THAT(euler_curve_residual(0.5, hyp, 0), WithinAbs(-0.5, 1e-14));

    // The polar Euler-Lagrange form agrees on which curves are critical.
    REQUIRE_THAT(euler_lagrange_residual(2, sec3, 0.2, Reading::arc_length), WithinAbs(0, 1e-12));
    REQUIRE(std::abs(euler_lagrange_residual(0.5, hyp, 0.2, Reading::arc_length)) > 0.1);
    REQUIRE(euler_lagrange_residual(0.5, hyp, 0.2, Reading::literal) == 0);

    REQUIRE(named_curve("sec:1.5").hi == Catch::Approx(kPi / 3));
    REQUIRE_THROWS_AS(named_curve("sec:x"), GeomError);
    REQUIRE_THROWS_AS(named_curve("spiral"), GeomError);
}

TEST_CASE("residual formula matches the polyline oracle") {
    auto sec3 = named_curve("sec3");
    double h3 = kPi / 6 - 0.05;
    REQUIRE(polyline_oracle(2, sec3, -h3, h3).max_abs_diff <= 1e-4);
    REQUIRE(polyline_oracle(0.7, named_curve("line"), -1, 1).max_abs_diff <= 1e-4);
    // Off an extremal the residual is far from zero, and the oracle still converges to it.
    auto hyp = named_curve("hyperbola");
    double h2 = kPi / 4 - 0.05;
    double coarse = polyline_oracle(0.5, hyp, -h2, h2, 100).max_abs_diff;
    double fine = polyline_oracle(0.5, hyp, -h2, h2, 200).max_abs_diff;
    REQUIRE(coarse / fine > 3.5);
    REQUIRE(coarse / fine < 4.5);
    REQUIRE(polyline_oracle(0.5, hyp, -h2, h2, 800).max_abs_diff <= 1e-4);
}
