#include "moment/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "moment/geom/energy.hpp"
#include "moment/geom/euler.hpp"
#include "moment/geom/rotational.hpp"
#include "moment/geom/surface.hpp"
#include "moment/proof/runner.hpp"

namespace moment::cli {

namespace {

using nlohmann::ordered_json;

struct Common {
    std::string format = "text";
    std::string out;
    std::uint64_t seed = 1;
    int quadrature_n = 32;
    double fd_step = 1e-4;
    double ode_step = 1e-3;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string g6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void add_common(CLI::App* sub, Common& c, bool tabular) {
    auto formats = tabular ? std::vector<std::string>{"text", "json", "csv"} : std::vector<std::string>{"text", "json"};
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
    sub->add_option("--out", c.out, "output file, written atomically");
    sub->add_option("--seed", c.seed, "seed for random perturbation fields")->capture_default_str();
    sub->add_option("--quadrature-n", c.quadrature_n, "Gauss-Legendre order per axis")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--fd-step", c.fd_step, "finite-difference step, relative to chart scale")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--ode-step", c.ode_step, "RK4 step in arc length")->check(CLI::PositiveNumber)->capture_default_str();
}

geom::Rect parse_domain(const std::string& text) {
    std::vector<double> x;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            x.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad --domain value '" + text + "'");
        }
    }
    if (x.size() != 4 || !(x[0] < x[1]) || !(x[2] < x[3])) throw UsageError("--domain needs u0,u1,v0,v1 with u0<u1, v0<v1");
    return {x[0], x[1], x[2], x[3]};
}

ordered_json domain_json(const geom::Rect& r) { return ordered_json::array({r.u0, r.u1, r.v0, r.v1}); }

// The summary goes to stdout as text or JSON; with --format csv the table does, unless --out takes it.
void emit(const Common& c, std::ostream& out, const ordered_json& summary, const std::string& text,
          const std::string& table = "") {
    if (!c.out.empty()) write_atomic(c.out, table.empty() ? summary.dump(2) + "\n" : table);
    if (c.format == "json")
        out << summary.dump(2) << "\n";
    else if (c.format == "csv" && c.out.empty())
        out << table;
    else
        out << text;
}

int cmd_verify(const std::string& theorem, std::string expected, const Common& c, std::ostream& out) {
    if (expected.empty()) expected = std::string(MOMENT_DATA_DIR) + "/scripts/" + theorem + ".json";
    auto reports = proof::run_theorem(theorem, expected);
    if (!c.out.empty()) write_atomic(c.out, proof::render_report(reports, proof::Format::json, theorem) + "\n");
    out << proof::render_report(reports, c.format == "json" ? proof::Format::json : proof::Format::text, theorem);
    if (c.format == "json") out << "\n";
    for (const auto& r : reports)
        if (r.status != proof::Status::pass) return 1;
    return 0;
}

int cmd_residual(const std::string& surface, double alpha, int grid, const std::string& domain, const Common& c,
                 std::ostream& out) {
    auto s = geom::parse_surface(surface);
    geom::Rect d = domain.empty() ? geom::default_domain(s) : parse_domain(domain);
    geom::FrameOptions opt;
    opt.fd_step = c.fd_step;
    std::string table = "u,v,x,y,z,H,K,residual\n";
    std::size_t nodes = 0, skipped = 0;
    double worst = 0, best = INFINITY;
    // Cell-centered nodes keep clear of chart edges such as the sphere's poles.
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double u = d.u0 + (i + 0.5) * (d.u1 - d.u0) / grid;
            double v = d.v0 + (j + 0.5) * (d.v1 - d.v0) / grid;
            if (geom::chart_point(s, u, v).squaredNorm() < 1e-24) {
                ++skipped;
                continue;
            }
            auto f = geom::surface_frame(s, u, v, opt);
            double r = f.H - alpha * f.normal.dot(f.position) / f.position.squaredNorm();
            ++nodes;
            worst = std::max(worst, std::abs(r));
            best = std::min(best, std::abs(r));
            for (double x : {u, v, f.position.x(), f.position.y(), f.position.z(), f.H, f.K}) table += g17(x) + ",";
            table += g17(r) + "\n";
        }
    if (nodes == 0) best = NAN;
    ordered_json j = {{"command", "residual"},        {"surface", surface},   {"alpha", alpha},
                      {"grid", grid},                 {"domain", domain_json(d)}, {"nodes", nodes},
                      {"skipped", skipped},           {"max_abs_residual", worst}};
    j["min_abs_residual"] = nodes ? ordered_json(best) : ordered_json(nullptr);
    std::string text = "nodes " + std::to_string(nodes) + ", skipped (Phi = 0) " + std::to_string(skipped) +
                       "\nmax |residual| " + g6(worst) + "\nmin |residual| " + g6(best) + "\n";
    emit(c, out, j, text, table);
    return 0;
}

int cmd_energy(const std::string& surface, double alpha, const std::string& domain, const Common& c, std::ostream& out) {
    auto s = geom::parse_surface(surface);
    geom::Rect d = domain.empty() ? geom::default_domain(s) : parse_domain(domain);
    geom::FrameOptions opt;
    opt.fd_step = c.fd_step;
    double e = geom::energy(s, alpha, d, c.quadrature_n, opt);
    ordered_json j = {{"command", "energy"}, {"surface", surface},         {"alpha", alpha},
                      {"domain", domain_json(d)}, {"quadrature_n", c.quadrature_n}, {"energy", e}};
    emit(c, out, j, "energy " + g17(e) + "\n");
    return 0;
}

int cmd_variation(const std::string& surface, double alpha, const std::string& field, int count, double eps,
                  const std::string& domain, const Common& c, std::ostream& out) {
    auto s = geom::parse_surface(surface);
    geom::Rect d = domain.empty() ? geom::default_domain(s) : parse_domain(domain);
    geom::FrameOptions opt;
    opt.fd_step = c.fd_step;
    ordered_json runs = ordered_json::array();
    std::string text;
    double worst = 0;
    for (int k = 0; k < count; ++k) {
        std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
        geom::ScalarField phi;
        if (field == "random")
            phi = geom::random_smooth_field(seed);
        else if (field == "bump")
            phi = geom::bump_field((d.u0 + d.u1) / 2, (d.v0 + d.v1) / 2, std::min(d.u1 - d.u0, d.v1 - d.v0) / 4);
        else
            phi = [](const geom::Vec3&, double, double) { return 1.0; };
        double dv = geom::first_variation(s, alpha, phi, eps, d, c.quadrature_n, opt);
        worst = std::max(worst, std::abs(dv));
        runs.push_back({{"seed", seed}, {"variation", dv}});
        text += (field == "random" ? "seed " + std::to_string(seed) + ": " : std::string()) + g17(dv) + "\n";
        if (field != "random") break;
    }
    ordered_json j = {{"command", "variation"}, {"surface", surface}, {"alpha", alpha}, {"field", field},
                      {"eps", eps},             {"domain", domain_json(d)}, {"quadrature_n", c.quadrature_n},
                      {"runs", runs},           {"max_abs_variation", worst}};
    emit(c, out, j, text + "max |variation| " + g6(worst) + "\n");
    return 0;
}

int cmd_shoot(double alpha, const std::vector<double>& start, double arclen, const Common& c, std::ostream& out) {
    auto p = std::make_shared<geom::ProfileCurve>(geom::shoot_rotational(alpha, {start[0], start[1], start[2]}, arclen, c.ode_step));
    std::ostringstream csv;
    geom::write_profile_csv(csv, *p);
    // Re-evaluate the stationarity residual on the surface of revolution, away from the axis and the ends.
    auto s = geom::make_rotational(p);
    geom::FrameOptions opt;
    opt.fd_step = c.fd_step;
    std::size_t stride = std::max<std::size_t>(1, p->size() / 200);
    double worst = 0;
    std::size_t checked = 0;
    for (std::size_t i = stride; i + stride < p->size(); i += stride) {
        if (p->f[i] < 1e-3) continue;
        worst = std::max(worst, std::abs(geom::stationarity_residual(s, alpha, p->s[i], 0, opt)));
        ++checked;
    }
    std::size_t last = p->size() - 1;
    ordered_json j = {{"command", "shoot"},
                      {"alpha", alpha},
                      {"start", start},
                      {"arclen", arclen},
                      {"ode_step", c.ode_step},
                      {"samples", p->size()},
                      {"end", {p->f[last], p->z[last], p->theta[last]}},
                      {"residual_samples", checked},
                      {"max_abs_residual", worst}};
    std::string text = "samples " + std::to_string(p->size()) + ", end f=" + g6(p->f[last]) + " z=" + g6(p->z[last]) +
                       "\nmax |residual| on the surface of revolution " + g6(worst) + " (" + std::to_string(checked) +
                       " samples)\n";
    emit(c, out, j, text, csv.str());
    return 0;
}

int cmd_euler(double alpha, const std::string& curve, std::optional<double> lo, std::optional<double> hi, int samples,
              int segments, const Common& c, std::ostream& out) {
    auto pc = geom::named_curve(curve);
    double a = lo.value_or(pc.lo + 0.05), b = hi.value_or(pc.hi - 0.05);
    if (!(a < b) || a <= pc.lo || b >= pc.hi) throw UsageError("interval must lie inside the curve's domain");
    std::string table = "theta,r,residual,el_arc_length,el_literal\n";
    double worst = 0, worst_arc = 0, worst_lit = 0;
    for (int i = 0; i < samples; ++i) {
        double t = samples == 1 ? a : a + (b - a) * i / (samples - 1);
        double res = geom::euler_curve_residual(alpha, pc, t);
        double arc = geom::euler_lagrange_residual(alpha, pc, t, geom::Reading::arc_length);
        double lit = geom::euler_lagrange_residual(alpha, pc, t, geom::Reading::literal);
        worst = std::max(worst, std::abs(res));
        worst_arc = std::max(worst_arc, std::abs(arc));
        worst_lit = std::max(worst_lit, std::abs(lit));
        table += g17(t) + "," + g17(pc.r(t)) + "," + g17(res) + "," + g17(arc) + "," + g17(lit) + "\n";
    }
    ordered_json j = {{"command", "euler"},        {"alpha", alpha},          {"curve", curve},
                      {"interval", {a, b}},        {"samples", samples},      {"max_abs_residual", worst},
                      {"max_abs_el_arc_length", worst_arc}, {"max_abs_el_literal", worst_lit}};
    std::string text = "max |residual| " + g6(worst) + "\nmax |EL|, arc-length reading " + g6(worst_arc) +
                       "\nmax |EL|, literal reading " + g6(worst_lit) + "\n";
    if (segments > 0) {
        double diff = geom::polyline_oracle(alpha, pc, a, b, segments).max_abs_diff;
        j["oracle_segments"] = segments;
        j["oracle_max_abs_diff"] = diff;
        text += "polyline oracle (" + std::to_string(segments) + " segments) max |oracle - formula| " + g6(diff) + "\n";
    }
    emit(c, out, j, text, table);
    return 0;
}

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp);
        f << content;
        if (!f.flush()) throw std::runtime_error("cannot write " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symbolic replay and numerics for the weighted area functional |x|^alpha dA", "moment"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Common common;
    std::string theorem, expected;
    auto* verify = app.add_subcommand("verify", "run a theorem's derivation script");
    verify->add_option("--theorem", theorem, "t1-nonzero, t1-zero, t22 or t3")->required();
    verify->add_option("--expected", expected, "script file (default: the shipped one)");
    add_common(verify, common, false);

    std::string surface, domain;
    double alpha = 0;
    int grid = 32;
    auto* residual = app.add_subcommand("residual", "stationarity residual on a parameter grid");
    residual->add_option("--surface", surface, "plane n=a,b,c d=off | sphere r=R center=x,y,z | cylinder r=R axis=x,y,z dir=a,b,c | rotational file=path")->required();
    residual->add_option("--alpha", alpha)->required();
    residual->add_option("--grid", grid, "cells per parameter direction")->check(CLI::PositiveNumber)->capture_default_str();
    residual->add_option("--domain", domain, "u0,u1,v0,v1 (default: the chart's natural rectangle)");
    add_common(residual, common, true);

    auto* energy = app.add_subcommand("energy", "integral of |x|^alpha over a chart patch");
    energy->add_option("--surface", surface)->required();
    energy->add_option("--alpha", alpha)->required();
    energy->add_option("--domain", domain, "u0,u1,v0,v1");
    add_common(energy, common, false);

    std::string field = "random";
    int count = 1;
    double eps = 1e-4;
    auto* variation = app.add_subcommand("variation", "first variation along phi N by central differences");
    variation->add_option("--surface", surface)->required();
    variation->add_option("--alpha", alpha)->required();
    variation->add_option("--field", field, "random, bump or one")->check(CLI::IsMember({"random", "bump", "one"}))->capture_default_str();
    variation->add_option("--count", count, "random fields, seeds seed .. seed+count-1")->check(CLI::PositiveNumber)->capture_default_str();
    variation->add_option("--eps", eps)->check(CLI::PositiveNumber)->capture_default_str();
    variation->add_option("--domain", domain, "u0,u1,v0,v1");
    add_common(variation, common, false);

    std::vector<double> start{0, -1, 0};
    double arclen = M_PI - 0.1;
    auto* shoot = app.add_subcommand("shoot", "integrate a rotational profile");
    shoot->add_option("--alpha", alpha)->required();
    shoot->add_option("--start", start, "f0 z0 theta0")->expected(3)->delimiter(',')->capture_default_str();
    shoot->add_option("--arclen", arclen)->check(CLI::PositiveNumber)->capture_default_str();
    add_common(shoot, common, true);

    std::string curve;
    std::optional<double> lo, hi;
    int samples = 201, segments = 200;
    auto* euler = app.add_subcommand("euler", "planar Euler-curve residuals for int r^alpha ds");
    euler->add_option("--alpha", alpha)->required();
    euler->add_option("--curve", curve, "line, hyperbola, sec3 or sec:<m>")->required();
    euler->add_option("--lo", lo, "default: domain start + 0.05");
    euler->add_option("--hi", hi, "default: domain end - 0.05");
    euler->add_option("--samples", samples)->check(CLI::PositiveNumber)->capture_default_str();
    euler->add_option("--oracle-segments", segments, "0 disables the polyline check")->check(CLI::NonNegativeNumber)->capture_default_str();
    add_common(euler, common, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "moment: " << e.what() << "\n";
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(theorem, expected, common, out);
        if (residual->parsed()) return cmd_residual(surface, alpha, grid, domain, common, out);
        if (energy->parsed()) return cmd_energy(surface, alpha, domain, common, out);
        if (variation->parsed()) return cmd_variation(surface, alpha, field, count, eps, domain, common, out);
        if (shoot->parsed()) return cmd_shoot(alpha, start, arclen, common, out);
        if (euler->parsed()) return cmd_euler(alpha, curve, lo, hi, samples, segments, common, out);
    } catch (const std::exception& e) {
        err << "moment: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"moment"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace moment::cli
