#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "moment/proof/script.hpp"

namespace moment::proof {

enum class Status { pass, fail, error, skipped };
std::string_view status_name(Status s);

struct CheckReport {
    std::string id;
    Status status = Status::error;
    std::string residual;  // DSL text, empty on pass
    double elapsed_ms = 0;
    std::string message;
    std::map<std::string, sym::Ratio> outputs;  // not serialized
};

// Contexts are built lazily and shared across the checks of a run.
class ContextCache {
public:
    const deriv::Context& get(deriv::ContextKind kind);

private:
    std::map<deriv::ContextKind, std::shared_ptr<const deriv::Context>> cache_;
};

CheckReport run_check(const CheckSpec& spec, const sym::Environment& bindings, ContextCache& contexts);

struct TheoremRun {
    std::vector<CheckReport> reports;
    std::vector<sym::Environment> bindings_before;  // per check
};

inline const std::vector<std::string> kTheorems = {"t1-nonzero", "t1-zero", "t22", "t3"};

TheoremRun run_script(const TheoremScript& script);
// Throws ScriptError for an unknown theorem or a script written for another one.
std::vector<CheckReport> run_theorem(const std::string& name, const std::string& expected_file);

enum class Format { text, json };
std::string render_report(const std::vector<CheckReport>& reports, Format format, const std::string& theorem = "");

// Integer-literal positions of a DSL string (not digits inside names like k11).
std::vector<std::pair<std::size_t, std::size_t>> integer_literals(const std::string& text);

struct Mutation {
    std::size_t check_index = 0;
    std::string slot;
    std::string original, mutated;
};

// Single-literal perturbations (n -> n+1) in the expected expressions of the given checks.
std::vector<Mutation> sample_mutations(const TheoremScript& script, const std::vector<std::size_t>& checks,
                                       std::size_t count, std::uint64_t seed);

}  // namespace moment::proof
