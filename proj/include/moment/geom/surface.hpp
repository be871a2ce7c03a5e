#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace moment::geom {

using Vec3 = Eigen::Vector3d;

struct GeomError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Rect {
    double u0, u1, v0, v1;
};

struct ProfileCurve;  // rotational.hpp

// Shape operator S = -dN, H = k1 + k2. With the outward normal a sphere of
// radius r has k1 = k2 = -1/r.
enum class Orientation { outward, inward };

struct Plane {
    Vec3 normal{0, 0, 1};
    double offset = 0;  // plane is {x : <x, normal> = offset}
};
struct Sphere {
    Vec3 center{0, 0, 0};
    double radius = 1;
};
struct Cylinder {
    Vec3 point{0, 0, 0};
    Vec3 dir{0, 0, 1};
    double radius = 1;
};
// Profile (f(s), z(s)) rotated about the z-axis; chart (s, angle).
struct Rotational {
    std::shared_ptr<const ProfileCurve> profile;
};
struct Analytic {
    std::function<Vec3(double, double)> chart;
    Rect domain;
    double scale = 1;
};

struct SurfaceSpec {
    std::variant<Plane, Sphere, Cylinder, Rotational, Analytic> kind;
    Orientation orientation = Orientation::outward;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // applied after the chart
};

SurfaceSpec make_plane(Vec3 normal, double offset);
SurfaceSpec make_sphere(Vec3 center, double radius);
SurfaceSpec make_cylinder(Vec3 point, Vec3 dir, double radius);
SurfaceSpec make_rotational(std::shared_ptr<const ProfileCurve> profile);
SurfaceSpec flipped(SurfaceSpec s);

// "plane n=a,b,c d=off | sphere r=R center=x,y,z | cylinder r=R axis=x,y,z dir=a,b,c | rotational file=path"
SurfaceSpec parse_surface(const std::string& text);

// Natural parameter rectangle of the chart. Plane: [-1,1]^2; sphere: polar
// angle x azimuth; cylinder: angle x [-2,2] along the axis; rotational: the
// profile's arc-length range x [0, 2pi].
Rect default_domain(const SurfaceSpec& s);
double chart_scale(const SurfaceSpec& s);
Vec3 chart_point(const SurfaceSpec& s, double u, double v);

struct FrameSample {
    Vec3 position;
    Vec3 normal;
    double H = 0, K = 0;
    double kappa1 = 0, kappa2 = 0;  // kappa1 >= kappa2
};

struct FrameOptions {
    double fd_step = 1e-4;  // relative to chart_scale
    bool force_fd = false;  // finite differences even where closed forms exist
};

FrameSample surface_frame(const SurfaceSpec& s, double u, double v, const FrameOptions& opt = {});

// H - alpha <N, Phi> / |Phi|^2.
double stationarity_residual(const SurfaceSpec& s, double alpha, double u, double v, const FrameOptions& opt = {});

// |Phi_u x Phi_v|; exact for plane, sphere and cylinder, central differences otherwise.
double area_element(const SurfaceSpec& s, double u, double v, const FrameOptions& opt = {});

}  // namespace moment::geom
