#include "moment/proof/script.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace moment::proof {

using json = nlohmann::ordered_json;

namespace {

constexpr std::pair<Procedure, std::string_view> kProcedures[] = {
    {Procedure::derive_and_compare, "derive_and_compare"},
    {Procedure::substitute_and_compare, "substitute_and_compare"},
    {Procedure::solve2x2_and_compare, "solve2x2_and_compare"},
    {Procedure::collect_and_compare, "collect_and_compare"},
    {Procedure::equate_two_expressions, "equate_two_expressions"},
};

NamedExprs named_exprs(const json& j, const std::string& where) {
    NamedExprs out;
    if (j.is_null()) return out;
    if (!j.is_object()) throw ScriptError(where + " must be an object of expressions");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_string()) throw ScriptError(where + "." + it.key() + " must be a string");
        out.emplace_back(it.key(), it.value().get<std::string>());
    }
    return out;
}

sym::Var var_named(const std::string& s, const std::string& where) {
    auto v = sym::var_from_name(s);
    if (!v) throw ScriptError(where + ": unknown variable '" + s + "'");
    return *v;
}

CheckSpec parse_check(const json& j, std::size_t pos) {
    std::string where = "checks[" + std::to_string(pos) + "]";
    if (!j.is_object()) throw ScriptError(where + " must be an object");
    CheckSpec c;
    try {
        c.id = j.at("id").get<std::string>();
        where = "check '" + c.id + "'";
        auto ctx = deriv::kind_from_name(j.at("context").get<std::string>());
        if (!ctx) throw ScriptError(where + ": unknown context");
        c.context = *ctx;
        std::string proc = j.at("procedure").get<std::string>();
        bool found = false;
        for (auto& [p, name] : kProcedures)
            if (name == proc) {
                c.procedure = p;
                found = true;
            }
        if (!found) throw ScriptError(where + ": unknown procedure '" + proc + "'");
        c.inputs = named_exprs(j.value("inputs", json()), where + ".inputs");
        c.expected = named_exprs(j.value("expected", json()), where + ".expected");
        if (j.contains("bind")) {
            for (auto it = j["bind"].begin(); it != j["bind"].end(); ++it)
                c.bind.emplace_back(it.key(), it.value().get<std::string>());
        }
        c.notes = j.value("notes", "");
        if (j.contains("params")) {
            const json& p = j["params"];
            c.params.direction = p.value("direction", 0);
            c.params.divide_by = p.value("divide_by", "");
            c.params.multiplier = p.value("multiplier", "");
            c.params.solve_for = p.value("solve_for", "");
            c.params.substitute = named_exprs(p.value("substitute", json()), where + ".params.substitute");
            if (p.contains("variable")) {
                const json& v = p["variable"];
                if (v.is_string())
                    c.params.variables.push_back(var_named(v.get<std::string>(), where));
                else
                    for (const auto& s : v) c.params.variables.push_back(var_named(s.get<std::string>(), where));
            }
            if (p.contains("constants")) {
                c.params.constants.emplace();
                for (const auto& s : p["constants"]) c.params.constants->push_back(var_named(s.get<std::string>(), where));
            }
        }
    } catch (const json::exception& e) {
        throw ScriptError(where + ": " + e.what());
    }
    return c;
}

}  // namespace

std::string_view procedure_name(Procedure p) {
    for (auto& [q, name] : kProcedures)
        if (q == p) return name;
    return "?";
}

TheoremScript parse_script(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ScriptError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ScriptError("script must be a JSON object");
    TheoremScript s;
    s.schema = j.value("schema", 0);
    if (s.schema != kSchemaVersion) throw ScriptError("unsupported schema version " + std::to_string(s.schema));
    s.name = j.value("name", "");
    if (!j.contains("checks") || !j["checks"].is_array()) throw ScriptError("script needs a 'checks' array");
    for (std::size_t i = 0; i < j["checks"].size(); ++i) s.checks.push_back(parse_check(j["checks"][i], i));
    std::map<std::string, int> seen;
    for (const auto& c : s.checks)
        if (seen[c.id]++) throw ScriptError("duplicate check id '" + c.id + "'");
    return s;
}

TheoremScript load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScriptError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_script(ss.str());
}

std::string dump_script(const TheoremScript& s) {
    json j;
    j["schema"] = s.schema;
    j["name"] = s.name;
    j["checks"] = json::array();
    for (const auto& c : s.checks) {
        json o;
        o["id"] = c.id;
        o["context"] = std::string(deriv::kind_name(c.context));
        o["procedure"] = std::string(procedure_name(c.procedure));
        o["inputs"] = json::object();
        for (auto& [k, v] : c.inputs) o["inputs"][k] = v;
        json p = json::object();
        if (c.params.direction) p["direction"] = c.params.direction;
        if (!c.params.divide_by.empty()) p["divide_by"] = c.params.divide_by;
        if (!c.params.substitute.empty()) {
            p["substitute"] = json::object();
            for (auto& [k, v] : c.params.substitute) p["substitute"][k] = v;
        }
        if (!c.params.multiplier.empty()) p["multiplier"] = c.params.multiplier;
        if (!c.params.solve_for.empty()) p["solve_for"] = c.params.solve_for;
        if (!c.params.variables.empty()) {
            p["variable"] = json::array();
            for (auto v : c.params.variables) p["variable"].push_back(std::string(sym::var_name(v)));
        }
        if (c.params.constants) {
            p["constants"] = json::array();
            for (auto v : *c.params.constants) p["constants"].push_back(std::string(sym::var_name(v)));
        }
        if (!p.empty()) o["params"] = p;
        o["expected"] = json::object();
        for (auto& [k, v] : c.expected) o["expected"][k] = v;
        if (!c.bind.empty()) {
            o["bind"] = json::object();
            for (auto& [k, v] : c.bind) o["bind"][k] = v;
        }
        if (!c.notes.empty()) o["notes"] = c.notes;
        j["checks"].push_back(o);
    }
    return j.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string*>> expression_slots(CheckSpec& c) {
    std::vector<std::pair<std::string, std::string*>> out;
    for (auto& [k, v] : c.inputs) out.emplace_back("inputs." + k, &v);
    if (!c.params.divide_by.empty()) out.emplace_back("params.divide_by", &c.params.divide_by);
    for (auto& [k, v] : c.params.substitute) out.emplace_back("params.substitute." + k, &v);
    if (!c.params.multiplier.empty()) out.emplace_back("params.multiplier", &c.params.multiplier);
    for (auto& [k, v] : c.expected) out.emplace_back("expected." + k, &v);
    return out;
}

}  // namespace moment::proof
