#include "moment/geom/surface.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "moment/geom/rotational.hpp"

namespace moment::geom {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

double sign(Orientation o) { return o == Orientation::outward ? 1.0 : -1.0; }

// e1, e2 with (e1, e2, d) a right-handed orthonormal frame.
std::pair<Vec3, Vec3> basis_perp(const Vec3& d) {
    Vec3 a = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e1 = (a - a.dot(d) * d).normalized();
    return {e1, d.cross(e1)};
}

Vec3 local_point(const SurfaceSpec& s, double u, double v) {
    return std::visit(
        overloaded{
            [&](const Plane& p) -> Vec3 {
                auto [e1, e2] = basis_perp(p.normal);
                return p.offset * p.normal + u * e1 + v * e2;
            },
            [&](const Sphere& p) -> Vec3 {
                return p.center + p.radius * Vec3(std::sin(u) * std::cos(v), std::sin(u) * std::sin(v), std::cos(u));
            },
            [&](const Cylinder& p) -> Vec3 {
                auto [e1, e2] = basis_perp(p.dir);
                return p.point + p.radius * (std::cos(u) * e1 + std::sin(u) * e2) + v * p.dir;
            },
            [&](const Rotational& p) -> Vec3 {
                double f, z;
                p.profile->eval(u, f, z);
                return {f * std::cos(v), f * std::sin(v), z};
            },
            [&](const Analytic& p) -> Vec3 { return p.chart(u, v); },
        },
        s.kind);
}

bool has_closed_form(const SurfaceSpec& s) { return s.kind.index() <= 2; }

FrameSample closed_frame(const SurfaceSpec& s, double u, double v) {
    FrameSample out;
    Vec3 x = local_point(s, u, v);
    double o = sign(s.orientation);
    if (auto* p = std::get_if<Plane>(&s.kind)) {
        out.normal = o * p->normal;
    } else if (auto* p = std::get_if<Sphere>(&s.kind)) {
        out.normal = o * (x - p->center) / p->radius;
        out.kappa1 = out.kappa2 = -o / p->radius;
    } else if (auto* p = std::get_if<Cylinder>(&s.kind)) {
        Vec3 r = x - p->point;
        out.normal = o * (r - r.dot(p->dir) * p->dir) / p->radius;
        out.kappa1 = std::max(0.0, -o / p->radius);
        out.kappa2 = std::min(0.0, -o / p->radius);
    }
    out.H = out.kappa1 + out.kappa2;
    out.K = out.kappa1 * out.kappa2;
    out.position = x;
    return out;
}

FrameSample fd_frame(const SurfaceSpec& s, double u, double v, double h) {
    auto P = [&](double a, double b) { return local_point(s, a, b); };
    Vec3 x = P(u, v);
    Vec3 xu = (P(u + h, v) - P(u - h, v)) / (2 * h);
    Vec3 xv = (P(u, v + h) - P(u, v - h)) / (2 * h);
    Vec3 xuu = (P(u + h, v) - 2 * x + P(u - h, v)) / (h * h);
    Vec3 xvv = (P(u, v + h) - 2 * x + P(u, v - h)) / (h * h);
    Vec3 xuv = (P(u + h, v + h) - P(u + h, v - h) - P(u - h, v + h) + P(u - h, v - h)) / (4 * h * h);
    double E = xu.dot(xu), F = xu.dot(xv), G = xv.dot(xv);
    double det = E * G - F * F;
    if (det <= 1e-12) throw GeomError("degenerate chart point");
    double o = sign(s.orientation);
    // The rotational chart (s, angle) induces the inward normal on a sphere-like profile.
    if (std::holds_alternative<Rotational>(s.kind)) o = -o;
    Vec3 n = o * xu.cross(xv).normalized();
    double L = xuu.dot(n), M = xuv.dot(n), N = xvv.dot(n);
    FrameSample out;
    out.position = x;
    out.normal = n;
    out.K = (L * N - M * M) / det;
    out.H = (E * N - 2 * F * M + G * L) / det;
    double disc = std::sqrt(std::max(0.0, out.H * out.H / 4 - out.K));
    out.kappa1 = out.H / 2 + disc;
    out.kappa2 = out.H / 2 - disc;
    return out;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t count, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw GeomError("bad number in " + key + "=" + text);
        }
        if (used != item.size()) throw GeomError("bad number in " + key + "=" + text);
        out.push_back(x);
    }
    if (out.size() != count) throw GeomError(key + " needs " + std::to_string(count) + " value(s)");
    return out;
}

Vec3 vec(const std::string& text, const std::string& key) {
    auto x = parse_numbers(text, 3, key);
    return {x[0], x[1], x[2]};
}

}  // namespace

SurfaceSpec make_plane(Vec3 normal, double offset) {
    double n = normal.norm();
    if (n == 0) throw GeomError("plane normal must be non-zero");
    return {Plane{normal / n, offset / n}};
}

SurfaceSpec make_sphere(Vec3 center, double radius) {
    if (!(radius > 0)) throw GeomError("sphere radius must be positive");
    return {Sphere{center, radius}};
}

SurfaceSpec make_cylinder(Vec3 point, Vec3 dir, double radius) {
    if (!(radius > 0)) throw GeomError("cylinder radius must be positive");
    double n = dir.norm();
    if (n == 0) throw GeomError("cylinder direction must be non-zero");
    return {Cylinder{point, dir / n, radius}};
}

SurfaceSpec make_rotational(std::shared_ptr<const ProfileCurve> profile) {
    if (!profile || profile->size() < 2) throw GeomError("rotational profile needs at least two samples");
    return {Rotational{std::move(profile)}};
}

SurfaceSpec flipped(SurfaceSpec s) {
    s.orientation = s.orientation == Orientation::outward ? Orientation::inward : Orientation::outward;
    return s;
}

SurfaceSpec parse_surface(const std::string& text) {
    std::stringstream ss(text);
    std::string kind;
    ss >> kind;
    std::map<std::string, std::string> kv;
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw GeomError("expected key=value, got '" + tok + "'");
        if (!kv.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
            throw GeomError("repeated key '" + tok.substr(0, eq) + "'");
    }
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto need = [&](const std::string& key) {
        auto v = take(key);
        if (!v) throw GeomError(kind + " needs " + key + "=");
        return *v;
    };
    auto orientation = take("orientation");

    SurfaceSpec s;
    if (kind == "plane") {
        s = make_plane(vec(need("n"), "n"), parse_numbers(take("d").value_or("0"), 1, "d")[0]);
    } else if (kind == "sphere") {
        s = make_sphere(vec(take("center").value_or("0,0,0"), "center"), parse_numbers(need("r"), 1, "r")[0]);
    } else if (kind == "cylinder") {
        s = make_cylinder(vec(take("axis").value_or("0,0,0"), "axis"), vec(take("dir").value_or("0,0,1"), "dir"),
                          parse_numbers(need("r"), 1, "r")[0]);
    } else if (kind == "rotational") {
        s = make_rotational(std::make_shared<ProfileCurve>(load_profile(need("file"))));
    } else {
        throw GeomError("unknown surface kind '" + kind + "'");
    }
    if (!kv.empty()) throw GeomError("unknown key '" + kv.begin()->first + "' for " + kind);
    if (orientation) {
        if (*orientation == "inward")
            s.orientation = Orientation::inward;
        else if (*orientation != "outward")
            throw GeomError("orientation must be outward or inward");
    }
    return s;
}

Rect default_domain(const SurfaceSpec& s) {
    return std::visit(overloaded{
                          [](const Plane&) { return Rect{-1, 1, -1, 1}; },
                          [](const Sphere&) { return Rect{0, M_PI, 0, 2 * M_PI}; },
                          [](const Cylinder&) { return Rect{0, 2 * M_PI, -2, 2}; },
                          [](const Rotational& p) { return Rect{p.profile->s.front(), p.profile->s.back(), 0, 2 * M_PI}; },
                          [](const Analytic& p) { return p.domain; },
                      },
                      s.kind);
}

double chart_scale(const SurfaceSpec& s) {
    if (auto* p = std::get_if<Sphere>(&s.kind)) return p->radius;
    if (auto* p = std::get_if<Cylinder>(&s.kind)) return p->radius;
    if (auto* p = std::get_if<Analytic>(&s.kind)) return p->scale;
    return 1;
}

Vec3 chart_point(const SurfaceSpec& s, double u, double v) { return s.rotation * local_point(s, u, v); }

FrameSample surface_frame(const SurfaceSpec& s, double u, double v, const FrameOptions& opt) {
    FrameSample f = has_closed_form(s) && !opt.force_fd ? closed_frame(s, u, v) : fd_frame(s, u, v, opt.fd_step * chart_scale(s));
    f.position = s.rotation * f.position;
    f.normal = s.rotation * f.normal;
    return f;
}

double stationarity_residual(const SurfaceSpec& s, double alpha, double u, double v, const FrameOptions& opt) {
    FrameSample f = surface_frame(s, u, v, opt);
    double r2 = f.position.squaredNorm();
    if (r2 < 1e-24) throw GeomError("surface passes through the origin at this sample");
    return f.H - alpha * f.normal.dot(f.position) / r2;
}

double area_element(const SurfaceSpec& s, double u, double v, const FrameOptions& opt) {
    if (!opt.force_fd) {
        if (std::holds_alternative<Plane>(s.kind)) return 1;
        if (auto* p = std::get_if<Sphere>(&s.kind)) return p->radius * p->radius * std::abs(std::sin(u));
        if (auto* p = std::get_if<Cylinder>(&s.kind)) return p->radius;
    }
    double h = opt.fd_step * chart_scale(s);
    Vec3 xu = (local_point(s, u + h, v) - local_point(s, u - h, v)) / (2 * h);
    Vec3 xv = (local_point(s, u, v + h) - local_point(s, u, v - h)) / (2 * h);
    return xu.cross(xv).norm();
}

}  // namespace moment::geom
