#pragma once

#include "generalized.hpp"
#include "oracle.hpp"
#include "parser.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace ultrext {

struct EngineConfig {
    bool json = false;
    bool timings = false;
    bool parallel = false;
    bool fail_fast = false;
    std::uint64_t seed = 0;
    std::vector<std::string> universe_labels;  // nonempty: start on the finite backend
};

// One line of structured output. Field order is stable; the byte format in
// both modes is frozen by golden tests.
struct ResultRecord {
    std::vector<std::pair<std::string, std::string>> fields;
    bool is_failure = false;  // failed assert or evaluation error

    void add(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
    }
    std::string to_text() const;
    std::string to_json() const;
};

class Session {
public:
    explicit Session(EngineConfig config);

    std::vector<ResultRecord> run_text(const std::string& text);  // may throw ParseError
    std::vector<ResultRecord> run_script(const ast::Script& script);
    ResultRecord run_statement(const ast::Statement& statement);

    std::string render(const ResultRecord& record) const;
    std::string environment_listing() const;
    int failure_count() const { return failures_.load(); }
    const EngineConfig& config() const { return config_; }

private:
    using Value = std::variant<DefinableSet, DefOp, UPoint, Model, GenModel>;

    ResultRecord eval_definition(const ast::Statement& st);
    ResultRecord eval_query(const ast::Statement& st);
    ResultRecord eval_directive(const ast::Statement& st);

    struct QueryOutcome {
        enum class Kind { Bool, Point, Set, Verdict };
        Kind kind = Kind::Bool;
        bool truth = false;
        std::optional<UPoint> point;
        std::optional<DefinableSet> set;
        std::string label;           // "exact" or "consistent-with-sample"
        std::string detail;          // counterexample etc.
        std::optional<Int> precision_failure;  // set when the query raised
    };
    QueryOutcome run_query_ast(const ast::Query& query) const;

    const Value& lookup(const std::string& name) const;
    DefinableSet eval_set(const ast::SetExpr& expr) const;
    DefOp eval_op(const ast::OpDef& def) const;
    UPoint eval_point(const ast::PointLit& lit) const;
    Model eval_model(const std::vector<ast::ModelEntry>& entries) const;
    GenModel eval_genmodel(const std::vector<ast::GenEntry>& entries) const;
    GenModel as_genmodel(const std::string& name) const;

    EngineConfig config_;
    std::map<std::string, Value> env_;
    UniversePtr universe_;
    Int default_precision_ = 1;
    std::uint64_t seed_ = 0;
    std::atomic<int> failures_ = 0;
    std::atomic<bool> frozen_ = false;  // parallel mode: definitions precede queries
};

// Random scripts for the round-trip property; exposed for tests.
ast::Script generate_random_script(std::uint64_t seed, int statements);

}  // namespace ultrext
