#pragma once

#include "extension.hpp"
#include "formula.hpp"
#include "ints.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ultrext {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line, int column, std::string expected = "")
        : std::runtime_error(message + " at " + std::to_string(line) + ":" + std::to_string(column) +
                             (expected.empty() ? "" : " (expected " + expected + ")")),
          line_(line),
          column_(column),
          expected_(std::move(expected)) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& expected() const { return expected_; }

private:
    int line_;
    int column_;
    std::string expected_;
};

namespace ast {

struct LinearExpr {
    struct TermNode {
        Int coeff;
        std::string var;  // empty: constant term
        bool operator==(const TermNode&) const = default;
    };
    std::vector<TermNode> terms;
    bool operator==(const LinearExpr&) const = default;
};

enum class RelOp { Le, Lt, Ge, Gt, Eq };

struct AtomNode {
    bool is_congruence = false;
    LinearExpr lhs;
    RelOp op = RelOp::Ge;  // relational form: lhs op rhs
    LinearExpr rhs;
    Int residue = 0;  // congruence form: lhs = residue mod modulus
    Int modulus = 2;
    bool operator==(const AtomNode&) const = default;
};

struct Comprehension {
    std::vector<std::string> vars;
    bool always_true = false;
    bool always_false = false;
    std::vector<AtomNode> atoms;
    bool operator==(const Comprehension&) const = default;
};

struct SetExpr {
    enum class Kind { Union, Intersect, Complement, Name, Compr, FiniteEnum };
    Kind kind = Kind::Name;
    std::vector<SetExpr> children;
    std::string name;
    Comprehension compr;
    std::vector<std::vector<std::string>> tuples;  // finite enumeration by labels
    bool operator==(const SetExpr&) const = default;
};

struct OpExpr {
    bool is_if = false;
    std::vector<AtomNode> condition;           // if-branch condition (conjunction)
    std::vector<OpExpr> branches;              // [then, else] when is_if
    LinearExpr value;                          // leaf
    bool operator==(const OpExpr&) const = default;
};

struct OpDef {
    std::vector<std::string> params;
    OpExpr body;
    bool operator==(const OpDef&) const = default;
};

struct PointLit {
    enum class Kind { Principal, Label, LimInf, Limit, Name };
    Kind kind = Kind::Principal;
    Int value = 0;    // principal
    Int residue = 0;  // limit
    Int modulus = 1;
    std::string name;  // label or defined point name
    bool operator==(const PointLit&) const = default;
};

struct ModelEntry {
    std::string name;
    bool is_op = false;
    OpDef op;
    SetExpr set;
    bool operator==(const ModelEntry&) const = default;
};

struct GenEntry {
    enum class Kind { PrincipalOp, PrincipalSet, FamilyOp, FamilySet };
    Kind kind = Kind::PrincipalSet;
    std::string name;
    std::string param;  // families
    OpDef op;           // principal op
    OpExpr family_op;   // family op body (formals inferred)
    SetExpr set;        // principal set or family comprehension
    PointLit at;        // family parameter point
    bool operator==(const GenEntry&) const = default;
};

struct QuantBinder {
    std::string var;
    PointLit point;
    bool operator==(const QuantBinder&) const = default;
};

struct WideDef {
    bool upper = false;  // i(...) or I(...)
    std::string source;  // generalized model name
    bool operator==(const WideDef&) const = default;
};

struct Query {
    enum class Kind {
        ExtTilde,
        ExtStar,
        ExtMap,
        Sat,
        CollapseE,
        CollapseBigE,
        LimLowerI,
        LimUpperI,
        LimOfWide,  // lim W.R (...) on a tagged wide model
        Core,
        Pseudo,
        HomCheck,
        CheckModal,
        Quant,
        Lift
    };
    Kind kind = Kind::ExtTilde;
    std::string name;         // relation/operation/model name
    std::string member;       // M.member for e/E/lim/core/pseudo
    std::vector<PointLit> args;
    Formula formula;          // sat
    std::vector<std::pair<std::string, PointLit>> bindings;  // sat
    std::optional<std::vector<PointLit>> witnesses;          // sat
    std::string hom_map;      // homcheck
    std::string hom_source;
    std::string hom_target;
    bool hom_star = false;
    std::vector<QuantBinder> binders;  // quant
    std::vector<AtomNode> quant_atoms;
    PointLit lift_point;  // lift
    std::vector<std::string> lift_target;
    bool operator==(const Query&) const = default;
};

struct Expected {
    enum class Kind { True, False, Point, Error };
    Kind kind = Kind::True;
    PointLit point;
    std::optional<Int> error_modulus;
    bool operator==(const Expected&) const = default;
};

struct Statement {
    enum class Kind {
        DefineSet,
        DefineOp,
        DefineMap,  // finite map by element labels
        DefinePoint,
        DefineModel,
        DefineGenModel,
        DefineWide,  // W := i(G) or W := I(G)
        DefineUniverse,
        RunQuery,
        Assert,
        Directive
    };
    Kind kind = Kind::RunQuery;
    std::string name;
    SetExpr set;
    OpDef op;
    std::vector<std::pair<std::string, std::string>> map_entries;
    WideDef wide;
    PointLit point;
    std::vector<ModelEntry> model;
    std::vector<GenEntry> genmodel;
    std::vector<std::string> universe_labels;
    Query query;
    Expected expected;  // asserts
    std::string directive;
    std::vector<std::string> directive_args;
    bool operator==(const Statement&) const = default;
};

using Script = std::vector<Statement>;

}  // namespace ast

ast::Script parse_script(const std::string& text);
std::string print_statement(const ast::Statement& statement);
std::string print_script(const ast::Script& script);

}  // namespace ultrext
