#include "moment/geom/euler.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <gsl/gsl_integration.h>

#include "moment/geom/surface.hpp"

namespace moment::geom {

PolarCurve sec_power_curve(double m) {
    if (!(m > 0)) throw GeomError("sec power needs m > 0");
    PolarCurve c;
    c.r = [m](double t) { return std::pow(1 / std::cos(m * t), 1 / m); };
    c.dr = [m](double t) { return std::pow(1 / std::cos(m * t), 1 / m) * std::tan(m * t); };
    c.ddr = [m](double t) {
        double tn = std::tan(m * t), sc = 1 / std::cos(m * t);
        return std::pow(sc, 1 / m) * (tn * tn + m * sc * sc);
    };
    c.hi = M_PI / (2 * m);
    c.lo = -c.hi;
    c.name = "sec:" + std::to_string(m);
    return c;
}

PolarCurve named_curve(const std::string& name) {
    PolarCurve c;
    if (name == "line")
        c = sec_power_curve(1);
    else if (name == "hyperbola")
        c = sec_power_curve(2);
    else if (name == "sec3")
        c = sec_power_curve(3);
    else if (name.rfind("sec:", 0) == 0) {
        std::size_t used = 0;
        double m;
        try {
            m = std::stod(name.substr(4), &used);
        } catch (const std::exception&) {
            throw GeomError("bad curve '" + name + "'");
        }
        if (used != name.size() - 4) throw GeomError("bad curve '" + name + "'");
        c = sec_power_curve(m);
    } else {
        throw GeomError("unknown curve '" + name + "'");
    }
    c.name = name;
    return c;
}

double euler_curve_residual(double alpha, const PolarCurve& c, double theta) {
    double r = c.r(theta), r1 = c.dr(theta), r2 = c.ddr(theta);
    if (!(r > 0)) throw GeomError("curve radius must be positive");
    double speed2 = r * r + r1 * r1;
    double kappa = (r * r + 2 * r1 * r1 - r * r2) / std::pow(speed2, 1.5);
    // Left normal n = J T with T = (r' cos - r sin, r' sin + r cos)/|gamma'|, so <n, gamma> = -r^2/|gamma'|.
    double support = -r * r / std::sqrt(speed2);
    return kappa - alpha * support / (r * r);
}

double euler_lagrange_residual(double alpha, const PolarCurve& c, double theta, Reading reading) {
    double r = c.r(theta), r1 = c.dr(theta), r2 = c.ddr(theta);
    if (!(r > 0)) throw GeomError("curve radius must be positive");
    double ra = std::pow(r, alpha), ra1 = alpha * std::pow(r, alpha - 1);
    if (reading == Reading::arc_length) {
        double S = std::sqrt(r1 * r1 + r * r);
        double dS = (r1 * r2 + r * r1) / S;
        double dLdr = ra1 * S + ra * r / S;
        double ddtheta_dLdr1 = ra1 * r1 * r1 / S + ra * (r2 * S - r1 * dS) / (S * S);
        return dLdr - ddtheta_dLdr1;
    }
    // L = sqrt(2) r^alpha |r'|; away from r' = 0 the momentum is sqrt(2) r^alpha sign(r').
    double sg = (r1 > 0) - (r1 < 0);
    double dLdr = std::sqrt(2.0) * ra1 * std::abs(r1);
    double ddtheta_dLdr1 = std::sqrt(2.0) * ra1 * r1 * sg;
    return dLdr - ddtheta_dLdr1;
}

OracleComparison polyline_oracle(double alpha, const PolarCurve& c, double lo, double hi, int segments) {
    if (segments < 2) throw GeomError("polyline needs at least two segments");
    using V2 = Eigen::Vector2d;
    // Vertices equally spaced in arc length; a fine trapezoid table maps length to angle.
    const int fine = 200 * segments;
    std::vector<double> ft(fine + 1), fs(fine + 1, 0.0);
    auto speed = [&](double t) { return std::hypot(c.r(t), c.dr(t)); };
    for (int j = 0; j <= fine; ++j) {
        ft[j] = lo + (hi - lo) * j / fine;
        if (j) fs[j] = fs[j - 1] + (ft[j] - ft[j - 1]) * (speed(ft[j]) + speed(ft[j - 1])) / 2;
    }
    std::vector<V2> x(segments + 1);
    std::vector<double> th(segments + 1);
    for (int j = 0, k = 0; j <= segments; ++j) {
        double target = fs.back() * j / segments;
        while (k < fine - 1 && fs[k + 1] < target) ++k;
        th[j] = ft[k] + (ft[k + 1] - ft[k]) * (target - fs[k]) / (fs[k + 1] - fs[k]);
        double r = c.r(th[j]);
        x[j] = r * V2(std::cos(th[j]), std::sin(th[j]));
    }
    auto rho = [&](const V2& p) { return std::pow(p.norm(), alpha); };
    auto grad_rho = [&](const V2& p) { return V2(alpha * std::pow(p.norm(), alpha - 2) * p); };
    // The energy of a straight edge, len * int_0^1 rho(a + t (b - a)) dt, is integrated with
    // an 8-point rule; the polyline is then the only approximation.
    gsl_integration_glfixed_table* gl = gsl_integration_glfixed_table_alloc(8);
    std::vector<double> gt(8), gw(8);
    for (std::size_t q = 0; q < 8; ++q) gsl_integration_glfixed_point(0, 1, q, &gt[q], &gw[q], gl);
    gsl_integration_glfixed_table_free(gl);
    OracleComparison out;
    for (int i = 1; i < segments; ++i) {
        // Exact gradient at vertex i; the weight is the rho-mass of its hat function.
        V2 g = V2::Zero();
        double mass = 0;
        for (int e : {i - 1, i}) {
            const V2& a = x[e];
            const V2& b = x[e + 1];
            double len = (b - a).norm();
            V2 dlen = e == i ? V2(-(b - a) / len) : V2((b - a) / len);
            double line = 0;
            V2 pull = V2::Zero();
            for (std::size_t q = 0; q < 8; ++q) {
                V2 p = a + gt[q] * (b - a);
                double hat = e == i ? 1 - gt[q] : gt[q];
                line += gw[q] * rho(p);
                pull += gw[q] * hat * grad_rho(p);
                mass += len * gw[q] * hat * rho(p);
            }
            g += dlen * line + len * pull;
        }
        double r = c.r(th[i]), r1 = c.dr(th[i]);
        V2 tangent(r1 * std::cos(th[i]) - r * std::sin(th[i]), r1 * std::sin(th[i]) + r * std::cos(th[i]));
        V2 n = V2(-tangent.y(), tangent.x()).normalized();
        double oracle = -g.dot(n) / mass;
        double formula = euler_curve_residual(alpha, c, th[i]);
        out.theta.push_back(th[i]);
        out.oracle.push_back(oracle);
        out.formula.push_back(formula);
        out.max_abs_diff = std::max(out.max_abs_diff, std::abs(oracle - formula));
    }
    return out;
}

}  // namespace moment::geom
