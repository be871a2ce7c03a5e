#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "moment/deriv/context.hpp"
#include "moment/sym/expr.hpp"

namespace moment::proof {

enum class Procedure {
    derive_and_compare,
    substitute_and_compare,
    solve2x2_and_compare,
    collect_and_compare,
    equate_two_expressions,
};

std::string_view procedure_name(Procedure p);

struct ScriptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using NamedExprs = std::vector<std::pair<std::string, std::string>>;

struct CheckParams {
    int direction = 0;
    std::string divide_by;
    NamedExprs substitute;  // key "v" or "v^n"
    std::string multiplier;
    std::string solve_for;  // "v" or "v^n"
    std::vector<sym::Var> variables;
    std::optional<std::vector<sym::Var>> constants;
};

struct CheckSpec {
    std::string id;
    deriv::ContextKind context{};
    Procedure procedure{};
    NamedExprs inputs;  // evaluated in order; each visible to the next
    CheckParams params;
    NamedExprs expected;
    std::vector<std::pair<std::string, std::string>> bind;  // output -> binding name
    std::string notes;
};

struct TheoremScript {
    int schema = 1;
    std::string name;
    std::vector<CheckSpec> checks;
};

inline constexpr int kSchemaVersion = 1;

TheoremScript parse_script(const std::string& json_text);
TheoremScript load_script(const std::string& path);
std::string dump_script(const TheoremScript& script);

// Every DSL string of a check, with a label for diagnostics.
std::vector<std::pair<std::string, std::string*>> expression_slots(CheckSpec& spec);

}  // namespace moment::proof
