#include "moment/proof/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "moment/sym/linear.hpp"

namespace moment::proof {

using sym::Ratio;
using sym::Var;

std::string_view status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::error: return "error";
        case Status::skipped: return "skipped";
    }
    return "?";
}

const deriv::Context& ContextCache::get(deriv::ContextKind kind) {
    auto it = cache_.find(kind);
    if (it == cache_.end())
        it = cache_.emplace(kind, std::make_shared<const deriv::Context>(deriv::make_context(kind))).first;
    return *it->second;
}

namespace {

struct Target {
    Var var;
    unsigned power = 1;
};

Target parse_target(const std::string& s) {
    auto caret = s.find('^');
    std::string name = s.substr(0, caret);
    auto v = sym::var_from_name(name);
    if (!v) throw ScriptError("unknown variable '" + name + "'");
    Target t{*v};
    if (caret != std::string::npos) {
        int n = std::stoi(s.substr(caret + 1));
        if (n < 1) throw ScriptError("bad power in '" + s + "'");
        t.power = static_cast<unsigned>(n);
    }
    return t;
}

class Evaluator {
public:
    Evaluator(const CheckSpec& spec, const sym::Environment& bindings, const deriv::Context& ctx)
        : spec_(spec), ctx_(ctx), env_(ctx.quantities().begin(), ctx.quantities().end()) {
        for (const auto& [k, v] : bindings) env_[k] = v;
        opts_.allow_references = true;
    }

    Ratio eval(const std::string& text) { return sym::lower(*sym::parse_expr(text, opts_), env_); }
    void define(const std::string& name, const Ratio& r) { env_[name] = r; }

    void load_substitution() {
        for (const auto& [key, expr] : spec_.params.substitute) {
            Target t = parse_target(key);
            Ratio value = eval(expr);
            if (t.power == 1)
                plain_[t.var] = value;
            else
                powers_.push_back({t, value});
        }
    }

    Ratio apply(const Ratio& x) const {
        if (plain_.empty() && powers_.empty()) return x;
        // Powers first: their values may still mention a plainly bound symbol.
        Ratio y = ctx_.expand(x);
        for (const auto& [t, value] : powers_) y = sym::substitute_power(y, t.var, t.power, value);
        return plain_.empty() ? y : sym::substitute(y, plain_);
    }

    Ratio solve(const Ratio& x, const std::string& target) const {
        Target t = parse_target(target);
        Ratio y = ctx_.is_defined(t.var) ? x : ctx_.expand(x);
        if (t.power > 1) y = sym::substitute_power(y, t.var, t.power, Ratio::var(t.var));
        return sym::solve_affine(y, t.var);
    }

private:
    const CheckSpec& spec_;
    const deriv::Context& ctx_;
    sym::Environment env_;
    sym::ParseOptions opts_;
    sym::Bindings plain_;
    std::vector<std::pair<Target, Ratio>> powers_;
};

const Ratio& input(const std::map<std::string, Ratio>& outputs, const std::string& name, const CheckSpec& spec) {
    auto it = outputs.find(name);
    if (it == outputs.end())
        throw ScriptError(std::string(procedure_name(spec.procedure)) + " needs an input named '" + name + "'");
    return it->second;
}

bool is_coefficient_key(const std::string& key) {
    return key.size() > 1 && key[0] == 'c' && std::isdigit(static_cast<unsigned char>(key[1]));
}

std::string coefficient_key(const std::vector<unsigned>& e) {
    std::string s = "c";
    if (e.size() == 1) return s + std::to_string(e[0]);
    for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "_" : "") + std::to_string(e[i]);
    return s;
}

void collect(const CheckSpec& spec, const Ratio& x, std::map<std::string, Ratio>& outputs, std::string& note) {
    const auto& vars = spec.params.variables;
    if (vars.empty() || vars.size() > 2) throw ScriptError("collect_and_compare needs one or two variables");
    for (const auto& f : x.factors())
        for (Var v : vars)
            if (f.base.depends_on(v))
                throw sym::AlgebraError(std::string(sym::var_name(v)) + " appears in the denominator; clear it first");
    std::map<std::vector<unsigned>, std::vector<sym::Term>> buckets;
    for (const auto& t : x.num().terms()) {
        std::vector<unsigned> key;
        sym::Monomial m = t.mono;
        for (Var v : vars) {
            key.push_back(m.degree(v));
            m.set(v, 0);
        }
        buckets[key].push_back({m, t.coef});
    }
    std::uint32_t allowed = 0;
    if (spec.params.constants)
        for (Var v : *spec.params.constants) allowed |= 1u << sym::index(v);
    bool any_nonzero = false, all_constant = true;
    for (auto& [key, terms] : buckets) {
        Ratio c = Ratio::assemble(sym::Poly::from_terms(std::move(terms)), x.factors());
        if (!c.is_zero()) any_nonzero = true;
        if (c.support() & ~allowed) all_constant = false;
        outputs[coefficient_key(key)] = c;
    }
    if (vars.size() == 1) {
        unsigned d = buckets.empty() ? 0 : buckets.rbegin()->first[0];
        outputs["degree"] = Ratio(static_cast<long>(d));
    }
    if (spec.params.constants) {
        if (!any_nonzero) throw sym::AlgebraError("polynomial is identically zero");
        if (!all_constant) note += "coefficients are not constant in the listed symbols; ";
        else note += "coefficients constant, not all zero; ";
    }
}

}  // namespace

CheckReport run_check(const CheckSpec& spec, const sym::Environment& bindings, ContextCache& contexts) {
    auto start = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.id = spec.id;
    std::string note;
    try {
        const deriv::Context& ctx = contexts.get(spec.context);
        Evaluator ev(spec, bindings, ctx);
        auto& out = rep.outputs;
        for (const auto& [name, text] : spec.inputs) {
            Ratio r = ev.eval(text);
            ev.define(name, r);
            out[name] = r;
        }
        ev.load_substitution();
        Ratio multiplier = spec.params.multiplier.empty() ? Ratio(1) : ev.eval(spec.params.multiplier);
        if (!spec.params.multiplier.empty()) {
            if (ctx.expand(multiplier).is_zero()) throw sym::AlgebraError("multiplier is zero");
            note += "multiplier: " + spec.params.multiplier + "; ";
        }
        const std::string& solve_for = spec.params.solve_for;
        // An unsolvable relation is a finding about the chain, reported as a mismatch.
        std::string unsolvable;
        auto try_solve = [&](const Ratio& subject) {
            try {
                out["solution"] = ev.solve(subject, solve_for);
            } catch (const sym::AlgebraError& e) {
                unsolvable = subject.is_zero() ? "0" : subject.to_string();
                note += std::string("cannot solve for ") + solve_for + ": " + e.what() + "; ";
            }
        };

        switch (spec.procedure) {
            case Procedure::derive_and_compare: {
                int dir = spec.params.direction;
                if (dir != 1 && dir != 2) throw ScriptError("derive_and_compare needs direction 1 or 2");
                Ratio value = deriv::derive(ctx, dir, input(out, "x", spec));
                std::optional<Ratio> relation;
                if (out.count("equals")) relation = value - ctx.expand(out["equals"]);
                if (!spec.params.divide_by.empty()) {
                    Ratio d = ctx.expand(ev.eval(spec.params.divide_by));
                    if (d.is_zero()) throw sym::AlgebraError("divide_by is zero");
                    value = value / d;
                    if (relation) relation = *relation / d;
                }
                value = ev.apply(value) * multiplier;
                out["value"] = value;
                Ratio subject = value;
                if (relation) {
                    subject = ev.apply(*relation) * multiplier;
                    out["relation"] = subject;
                }
                if (!solve_for.empty()) try_solve(subject);
                break;
            }
            case Procedure::substitute_and_compare: {
                for (const auto& [name, text] : spec.inputs) out[name] = ev.apply(out[name]) * multiplier;
                if (!solve_for.empty()) {
                    if (spec.inputs.empty()) throw ScriptError("nothing to solve");
                    try_solve(out[spec.inputs.front().first]);
                }
                break;
            }
            case Procedure::equate_two_expressions: {
                Ratio r = ev.apply(input(out, "lhs", spec) - input(out, "rhs", spec)) * multiplier;
                out["residual"] = r;
                if (!solve_for.empty()) try_solve(r);
                break;
            }
            case Procedure::solve2x2_and_compare: {
                std::array<Ratio, 6> c;
                const char* names[] = {"p1", "q1", "r1", "p2", "q2", "r2"};
                for (int i = 0; i < 6; ++i) c[i] = ev.apply(ctx.expand(input(out, names[i], spec)));
                auto s = sym::solve_linear_2x2(c[0], c[1], c[2], c[3], c[4], c[5]);
                out["x"] = s.x;
                out["y"] = s.y;
                out["det"] = s.det;
                break;
            }
            case Procedure::collect_and_compare: {
                Ratio x = ctx.expand(ev.apply(input(out, "x", spec))) * ctx.expand(multiplier);
                out["poly"] = x;
                collect(spec, x, out, note);
                break;
            }
        }
        for (const auto& [output, name] : spec.bind)
            if (!out.count(output)) throw ScriptError("bind refers to unknown output '" + output + "'");

        std::vector<std::string> bad;
        std::string first_residual;
        std::set<std::string> compared;
        for (const auto& [key, text] : spec.expected) {
            auto it = out.find(key);
            if (it == out.end() && key == "solution" && !unsolvable.empty()) {
                if (bad.empty()) first_residual = unsolvable;
                bad.push_back(key);
                continue;
            }
            bool absent_coefficient = it == out.end() && spec.procedure == Procedure::collect_and_compare &&
                                      is_coefficient_key(key);
            if (it == out.end() && !absent_coefficient)
                throw ScriptError("expected key '" + key + "' is not an output of this procedure");
            compared.insert(key);
            Ratio computed = absent_coefficient ? Ratio(0) : ctx.expand(it->second);
            Ratio wanted = ctx.expand(ev.eval(text));
            if (!sym::ratio_eq(computed, wanted)) {
                if (bad.empty()) first_residual = (computed - wanted).to_string();
                bad.push_back(key);
            }
        }
        if (spec.procedure == Procedure::collect_and_compare) {
            bool lists_coefficients = std::any_of(spec.expected.begin(), spec.expected.end(),
                                                  [](const auto& e) { return is_coefficient_key(e.first); });
            if (lists_coefficients)
                for (const auto& [key, value] : out) {
                    if (!is_coefficient_key(key)) continue;
                    if (compared.count(key) || value.is_zero()) continue;
                    if (bad.empty()) first_residual = value.to_string();
                    bad.push_back(key + " (unlisted)");
                }
            if (spec.params.constants && note.find("not constant") != std::string::npos) bad.push_back("constants");
        }
        if (bad.empty()) {
            rep.status = Status::pass;
        } else {
            rep.status = Status::fail;
            rep.residual = first_residual;
            std::string keys;
            for (const auto& b : bad) keys += (keys.empty() ? "" : ", ") + b;
            note += "mismatch in " + keys + "; ";
        }
    } catch (const std::exception& e) {
        rep.status = Status::error;
        rep.residual.clear();
        note += e.what();
    }
    while (!note.empty() && (note.back() == ' ' || note.back() == ';')) note.pop_back();
    rep.message = note;
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

TheoremRun run_script(const TheoremScript& script) {
    TheoremRun run;
    ContextCache contexts;
    sym::Environment bound;
    std::map<std::string, std::string> poisoned;  // binding name -> check id
    sym::ParseOptions opts;
    opts.allow_references = true;
    for (const auto& spec : script.checks) {
        run.bindings_before.push_back(bound);
        std::string blocked;
        CheckSpec copy = spec;
        for (auto& [label, text] : expression_slots(copy)) {
            try {
                for (const auto& r : sym::references(*sym::parse_expr(*text, opts)))
                    if (poisoned.count(r) && blocked.empty()) blocked = r;
            } catch (const std::exception&) {
            }
        }
        CheckReport rep;
        if (!blocked.empty()) {
            rep.id = spec.id;
            rep.status = Status::skipped;
            rep.message = "depends on '" + blocked + "' from check '" + poisoned[blocked] + "', which did not complete";
        } else {
            rep = run_check(spec, bound, contexts);
        }
        if (rep.status == Status::error || rep.status == Status::skipped) {
            for (const auto& [output, name] : spec.bind) poisoned[name] = spec.id;
        } else {
            for (const auto& [output, name] : spec.bind) bound[name] = rep.outputs.at(output);
        }
        run.reports.push_back(std::move(rep));
    }
    return run;
}

std::vector<CheckReport> run_theorem(const std::string& name, const std::string& expected_file) {
    if (std::find(kTheorems.begin(), kTheorems.end(), name) == kTheorems.end())
        throw ScriptError("unknown theorem '" + name + "'");
    TheoremScript script = load_script(expected_file);
    if (script.name != name) throw ScriptError("script is written for '" + script.name + "', not '" + name + "'");
    return run_script(script).reports;
}

std::string render_report(const std::vector<CheckReport>& reports, Format format, const std::string& theorem) {
    if (format == Format::json) {
        nlohmann::ordered_json j;
        j["schema"] = kSchemaVersion;
        if (!theorem.empty()) j["theorem"] = theorem;
        j["reports"] = nlohmann::ordered_json::array();
        for (const auto& r : reports) {
            nlohmann::ordered_json o;
            o["id"] = r.id;
            o["status"] = std::string(status_name(r.status));
            o["residual"] = r.residual;
            o["elapsed_ms"] = std::round(r.elapsed_ms * 1000.0) / 1000.0;
            o["message"] = r.message;
            j["reports"].push_back(o);
        }
        return j.dump(2) + "\n";
    }
    std::ostringstream os;
    for (const auto& r : reports) {
        std::string tag(status_name(r.status));
        std::transform(tag.begin(), tag.end(), tag.begin(), ::toupper);
        os << "[" << tag << "] " << r.id;
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%.1f ms)", r.elapsed_ms);
        os << buf;
        if (!r.message.empty()) os << " " << r.message;
        if (!r.residual.empty()) {
            std::string res = r.residual.size() > 120 ? r.residual.substr(0, 117) + "..." : r.residual;
            os << " residual: " << res;
        }
        os << "\n";
    }
    return os.str();
}

std::vector<std::pair<std::size_t, std::size_t>> integer_literals(const std::string& text) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; };
    for (std::size_t i = 0; i < text.size();) {
        if (std::isdigit(static_cast<unsigned char>(text[i])) && (i == 0 || !ident(text[i - 1]))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.emplace_back(i, j - i);
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<Mutation> sample_mutations(const TheoremScript& script, const std::vector<std::size_t>& checks,
                                       std::size_t count, std::uint64_t seed) {
    struct Site {
        std::size_t check;
        std::size_t slot;
        std::string key, text;
        std::pair<std::size_t, std::size_t> lit;
    };
    std::vector<Site> sites;
    for (std::size_t ci : checks) {
        const auto& c = script.checks.at(ci);
        for (std::size_t s = 0; s < c.expected.size(); ++s)
            for (auto lit : integer_literals(c.expected[s].second))
                sites.push_back({ci, s, c.expected[s].first, c.expected[s].second, lit});
    }
    std::mt19937_64 rng(seed);
    std::shuffle(sites.begin(), sites.end(), rng);
    std::vector<Mutation> out;
    for (std::size_t i = 0; i < sites.size() && out.size() < count; ++i) {
        const Site& s = sites[i];
        mpz_class v(s.text.substr(s.lit.first, s.lit.second));
        v += 1;
        Mutation m;
        m.check_index = s.check;
        m.slot = s.key;
        m.original = s.text;
        m.mutated = s.text.substr(0, s.lit.first) + v.get_str() + s.text.substr(s.lit.first + s.lit.second);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace moment::proof
