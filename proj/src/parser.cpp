#include "parser.hpp"

#include <cctype>

namespace ultrext {

namespace {

struct Token {
    enum class Kind { Name, Integer, Symbol, Newline, End };
    Kind kind = Kind::End;
    std::string text;
    Int value;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        int depth = 0;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (c == '\n') {
                if (depth == 0) tokens.push_back(make(Token::Kind::Newline, "\n"));
                advance();
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                Token t = make(Token::Kind::Integer, "");
                std::string digits;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    digits += text_[pos_];
                    advance();
                }
                t.text = digits;
                t.value = Int(digits);
                tokens.push_back(std::move(t));
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                Token t = make(Token::Kind::Name, "");
                std::string name;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                    name += text_[pos_];
                    advance();
                }
                t.text = name;
                tokens.push_back(std::move(t));
                continue;
            }
            if (c == '(' || c == '{' || c == '[') ++depth;
            if (c == ')' || c == '}' || c == ']') --depth;
            static const char* two_char[] = {":=", "<=", ">=", "->", "|=", "=="};
            bool matched = false;
            for (const char* op : two_char) {
                if (text_.compare(pos_, 2, op) == 0) {
                    Token t = make(Token::Kind::Symbol, op);
                    advance();
                    advance();
                    tokens.push_back(std::move(t));
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            Token t = make(Token::Kind::Symbol, std::string(1, c));
            advance();
            tokens.push_back(std::move(t));
        }
        tokens.push_back(make(Token::Kind::End, ""));
        return tokens;
    }

private:
    Token make(Token::Kind kind, std::string text) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = line_;
        t.column = column_;
        return t;
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    ast::Script parse() {
        ast::Script script;
        skip_separators();
        while (!at_end()) {
            script.push_back(statement());
            if (!at_end()) expect_separator();
            skip_separators();
        }
        return script;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    Token take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string got = t.kind == Token::Kind::End      ? "end of input"
                          : t.kind == Token::Kind::Newline ? "end of line"
                                                           : "'" + t.text + "'";
        throw ParseError("unexpected " + got, t.line, t.column, expected);
    }

    bool is_symbol(const std::string& s, std::size_t ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Symbol && peek(ahead).text == s;
    }
    bool is_name(const std::string& s, std::size_t ahead = 0) const {
        return peek(ahead).kind == Token::Kind::Name && peek(ahead).text == s;
    }
    void expect_symbol(const std::string& s) {
        if (!is_symbol(s)) fail("'" + s + "'");
        take();
    }
    std::string expect_name() {
        if (peek().kind != Token::Kind::Name) fail("a name");
        return take().text;
    }
    Int expect_integer() {
        if (peek().kind != Token::Kind::Integer) fail("an integer");
        return take().value;
    }
    void expect_keyword(const std::string& s) {
        if (!is_name(s)) fail("'" + s + "'");
        take();
    }

    void skip_separators() {
        while (peek().kind == Token::Kind::Newline || is_symbol(";")) take();
    }
    void expect_separator() {
        if (peek().kind == Token::Kind::Newline || is_symbol(";")) {
            take();
            return;
        }
        if (at_end()) return;
        fail("end of statement");
    }

    // --- statements ---

    ast::Statement statement() {
        if (is_symbol(":")) return directive();
        if (is_name("universe")) return universe_definition();
        if (is_name("assert")) return assertion();
        if (peek().kind == Token::Kind::Name && is_symbol(":=", 1)) return definition();
        ast::Statement st;
        st.kind = ast::Statement::Kind::RunQuery;
        st.query = query();
        return st;
    }

    ast::Statement directive() {
        expect_symbol(":");
        ast::Statement st;
        st.kind = ast::Statement::Kind::Directive;
        st.directive = expect_name();
        while (peek().kind == Token::Kind::Integer || peek().kind == Token::Kind::Name) {
            st.directive_args.push_back(take().text);
        }
        return st;
    }

    ast::Statement universe_definition() {
        expect_keyword("universe");
        ast::Statement st;
        st.kind = ast::Statement::Kind::DefineUniverse;
        expect_symbol("{");
        st.universe_labels.push_back(expect_name());
        while (is_symbol(",")) {
            take();
            st.universe_labels.push_back(expect_name());
        }
        expect_symbol("}");
        return st;
    }

    ast::Statement assertion() {
        expect_keyword("assert");
        ast::Statement st;
        st.kind = ast::Statement::Kind::Assert;
        st.query = query();
        expect_symbol("==");
        if (is_name("true")) {
            take();
            st.expected.kind = ast::Expected::Kind::True;
        } else if (is_name("false")) {
            take();
            st.expected.kind = ast::Expected::Kind::False;
        } else if (is_name("error")) {
            take();
            st.expected.kind = ast::Expected::Kind::Error;
            if (is_symbol("(")) {
                take();
                st.expected.error_modulus = expect_integer();
                expect_symbol(")");
            }
        } else {
            st.expected.kind = ast::Expected::Kind::Point;
            st.expected.point = point_literal();
        }
        return st;
    }

    ast::Statement definition() {
        ast::Statement st;
        st.name = expect_name();
        expect_symbol(":=");
        if (is_name("op")) {
            st.kind = ast::Statement::Kind::DefineOp;
            st.op = op_definition();
        } else if (is_name("map")) {
            take();
            st.kind = ast::Statement::Kind::DefineMap;
            expect_symbol("(");
            while (true) {
                std::string from = expect_name();
                expect_symbol(":");
                std::string to = expect_name();
                st.map_entries.emplace_back(std::move(from), std::move(to));
                if (!is_symbol(",")) break;
                take();
            }
            expect_symbol(")");
        } else if (is_name("pt") || is_name("lim")) {
            st.kind = ast::Statement::Kind::DefinePoint;
            st.point = point_literal();
        } else if ((is_name("i") || is_name("I")) && is_symbol("(", 1)) {
            st.kind = ast::Statement::Kind::DefineWide;
            st.wide.upper = take().text == "I";
            expect_symbol("(");
            st.wide.source = expect_name();
            expect_symbol(")");
        } else if (is_name("model")) {
            st.kind = ast::Statement::Kind::DefineModel;
            st.model = model_definition();
        } else if (is_name("genmodel")) {
            st.kind = ast::Statement::Kind::DefineGenModel;
            st.genmodel = genmodel_definition();
        } else {
            st.kind = ast::Statement::Kind::DefineSet;
            st.set = set_expression();
        }
        return st;
    }

    // --- linear expressions and atoms ---

    ast::LinearExpr linear_expression() {
        ast::LinearExpr expr;
        bool negative = false;
        if (is_symbol("-")) {
            take();
            negative = true;
        }
        expr.terms.push_back(linear_term(negative));
        while (is_symbol("+") || is_symbol("-")) {
            bool minus = take().text == "-";
            expr.terms.push_back(linear_term(minus));
        }
        return expr;
    }

    ast::LinearExpr::TermNode linear_term(bool negative) {
        ast::LinearExpr::TermNode term;
        if (peek().kind == Token::Kind::Integer) {
            term.coeff = expect_integer();
            if (is_symbol("*")) {
                take();
                term.var = expect_name();
            }
        } else {
            term.coeff = 1;
            term.var = expect_name();
        }
        if (negative) term.coeff = -term.coeff;
        return term;
    }

    ast::AtomNode atom() {
        ast::AtomNode node;
        node.lhs = linear_expression();
        if (is_symbol("=")) {
            take();
            // either an equality of linear terms or a congruence `= r mod m`
            if (peek().kind == Token::Kind::Integer && is_name("mod", 1)) {
                node.is_congruence = true;
                node.residue = expect_integer();
                expect_keyword("mod");
                node.modulus = expect_integer();
                if (node.modulus < 2) {
                    const Token& t = peek();
                    throw ParseError("congruence modulus must be at least 2", t.line, t.column);
                }
                if (node.residue >= node.modulus) {
                    const Token& t = peek();
                    throw ParseError("congruence residue must be below the modulus", t.line, t.column);
                }
                return node;
            }
            node.op = ast::RelOp::Eq;
            node.rhs = linear_expression();
            return node;
        }
        if (is_symbol("<=")) {
            take();
            node.op = ast::RelOp::Le;
        } else if (is_symbol(">=")) {
            take();
            node.op = ast::RelOp::Ge;
        } else if (is_symbol("<")) {
            take();
            node.op = ast::RelOp::Lt;
        } else if (is_symbol(">")) {
            take();
            node.op = ast::RelOp::Gt;
        } else {
            fail("a relational operator");
        }
        node.rhs = linear_expression();
        return node;
    }

    std::vector<ast::AtomNode> atom_list() {
        std::vector<ast::AtomNode> atoms;
        atoms.push_back(atom());
        while (is_symbol(",")) {
            take();
            atoms.push_back(atom());
        }
        return atoms;
    }

    // --- sets ---

    ast::SetExpr set_expression() {
        ast::SetExpr lhs = set_term();
        while (is_symbol("|")) {
            take();
            ast::SetExpr rhs = set_term();
            ast::SetExpr node;
            node.kind = ast::SetExpr::Kind::Union;
            node.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    ast::SetExpr set_term() {
        ast::SetExpr lhs = set_atomic();
        while (is_symbol("&")) {
            take();
            ast::SetExpr rhs = set_atomic();
            ast::SetExpr node;
            node.kind = ast::SetExpr::Kind::Intersect;
            node.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    ast::SetExpr set_atomic() {
        if (is_symbol("~")) {
            take();
            ast::SetExpr node;
            node.kind = ast::SetExpr::Kind::Complement;
            node.children = {set_atomic()};
            return node;
        }
        if (is_symbol("(")) {
            take();
            ast::SetExpr inner = set_expression();
            expect_symbol(")");
            return inner;
        }
        if (is_symbol("{")) return braces_set();
        ast::SetExpr node;
        node.kind = ast::SetExpr::Kind::Name;
        node.name = expect_name();
        return node;
    }

    ast::SetExpr braces_set() {
        expect_symbol("{");
        // Either a comprehension {vars : atoms} or a finite enumeration
        // {(a,b), (c,d)}.
        if (is_symbol("(")) {
            ast::SetExpr node;
            node.kind = ast::SetExpr::Kind::FiniteEnum;
            node.tuples.push_back(label_tuple());
            while (is_symbol(",")) {
                take();
                node.tuples.push_back(label_tuple());
            }
            expect_symbol("}");
            return node;
        }
        ast::SetExpr node;
        node.kind = ast::SetExpr::Kind::Compr;
        node.compr.vars.push_back(expect_name());
        while (is_symbol(",")) {
            take();
            node.compr.vars.push_back(expect_name());
        }
        expect_symbol(":");
        if (is_name("true")) {
            take();
            node.compr.always_true = true;
        } else if (is_name("false")) {
            take();
            node.compr.always_false = true;
        } else {
            node.compr.atoms = atom_list();
        }
        expect_symbol("}");
        return node;
    }

    std::vector<std::string> label_tuple() {
        expect_symbol("(");
        std::vector<std::string> labels;
        labels.push_back(expect_name());
        while (is_symbol(",")) {
            take();
            labels.push_back(expect_name());
        }
        expect_symbol(")");
        return labels;
    }

    // --- operations ---

    ast::OpDef op_definition() {
        expect_keyword("op");
        ast::OpDef def;
        expect_symbol("(");
        def.params.push_back(expect_name());
        while (is_symbol(",")) {
            take();
            def.params.push_back(expect_name());
        }
        expect_symbol(")");
        expect_symbol("->");
        def.body = op_expression();
        return def;
    }

    ast::OpExpr op_expression() {
        if (is_name("if")) {
            take();
            ast::OpExpr node;
            node.is_if = true;
            node.condition = atom_list();
            expect_keyword("then");
            node.branches.push_back(op_expression());
            expect_keyword("else");
            node.branches.push_back(op_expression());
            return node;
        }
        ast::OpExpr node;
        node.value = linear_expression();
        return node;
    }

    // --- points ---

    ast::PointLit point_literal() {
        ast::PointLit lit;
        if (is_name("pt")) {
            take();
            expect_symbol("(");
            if (peek().kind == Token::Kind::Integer) {
                lit.kind = ast::PointLit::Kind::Principal;
                lit.value = expect_integer();
            } else {
                lit.kind = ast::PointLit::Kind::Label;
                lit.name = expect_name();
            }
            expect_symbol(")");
            return lit;
        }
        if (is_name("lim")) {
            take();
            expect_symbol("(");
            if (is_name("inf")) {
                take();
                lit.kind = ast::PointLit::Kind::LimInf;
            } else {
                lit.kind = ast::PointLit::Kind::Limit;
                lit.residue = expect_integer();
                expect_keyword("mod");
                lit.modulus = expect_integer();
                if (lit.modulus < 1) {
                    const Token& t = peek();
                    throw ParseError("limit modulus must be at least 1", t.line, t.column);
                }
                if (lit.residue >= lit.modulus) {
                    const Token& t = peek();
                    throw ParseError("limit residue must be below the modulus", t.line, t.column);
                }
            }
            expect_symbol(")");
            return lit;
        }
        lit.kind = ast::PointLit::Kind::Name;
        lit.name = expect_name();
        return lit;
    }

    std::vector<ast::PointLit> point_arguments() {
        expect_symbol("(");
        std::vector<ast::PointLit> args;
        if (!is_symbol(")")) {
            args.push_back(point_literal());
            while (is_symbol(",")) {
                take();
                args.push_back(point_literal());
            }
        }
        expect_symbol(")");
        return args;
    }

    // --- models ---

    std::vector<ast::ModelEntry> model_definition() {
        expect_keyword("model");
        expect_symbol("{");
        std::vector<ast::ModelEntry> entries;
        while (!is_symbol("}")) {
            ast::ModelEntry entry;
            entry.name = expect_name();
            expect_symbol(":=");
            if (is_name("op")) {
                entry.is_op = true;
                entry.op = op_definition();
            } else {
                entry.set = set_expression();
            }
            entries.push_back(std::move(entry));
            if (is_symbol(";")) take();
        }
        expect_symbol("}");
        return entries;
    }

    std::vector<ast::GenEntry> genmodel_definition() {
        expect_keyword("genmodel");
        expect_symbol("{");
        std::vector<ast::GenEntry> entries;
        while (!is_symbol("}")) {
            ast::GenEntry entry;
            entry.name = expect_name();
            expect_symbol(":=");
            if (is_name("principal")) {
                take();
                if (is_name("op")) {
                    entry.kind = ast::GenEntry::Kind::PrincipalOp;
                    entry.op = op_definition();
                } else {
                    entry.kind = ast::GenEntry::Kind::PrincipalSet;
                    entry.set = set_expression();
                }
            } else if (is_name("family")) {
                take();
                entry.param = expect_name();
                expect_symbol("->");
                if (is_symbol("{")) {
                    entry.kind = ast::GenEntry::Kind::FamilySet;
                    entry.set = braces_set();
                } else {
                    entry.kind = ast::GenEntry::Kind::FamilyOp;
                    expect_symbol("(");
                    entry.family_op = op_expression();
                    expect_symbol(")");
                }
                expect_keyword("at");
                entry.at = point_literal();
            } else {
                fail("'principal' or 'family'");
            }
            entries.push_back(std::move(entry));
            if (is_symbol(";")) take();
        }
        expect_symbol("}");
        return entries;
    }

    // --- formulas ---

    Formula formula() { return formula_implies(); }

    Formula formula_implies() {
        Formula lhs = formula_or();
        if (is_symbol("->")) {
            take();
            return Formula::implication(std::move(lhs), formula_implies());
        }
        return lhs;
    }

    Formula formula_or() {
        Formula lhs = formula_and();
        while (is_symbol("|")) {
            take();
            lhs = Formula::disjunction(std::move(lhs), formula_and());
        }
        return lhs;
    }

    Formula formula_and() {
        Formula lhs = formula_unary();
        while (is_symbol("&")) {
            take();
            lhs = Formula::conjunction(std::move(lhs), formula_unary());
        }
        return lhs;
    }

    Formula formula_unary() {
        if (is_symbol("!")) {
            take();
            return Formula::negation(formula_unary());
        }
        if (is_name("forall") || is_name("exists")) {
            bool universal = take().text == "forall";
            std::string var = expect_name();
            expect_symbol(".");
            Formula body = formula_unary();
            return universal ? Formula::forall(std::move(var), std::move(body))
                             : Formula::exists(std::move(var), std::move(body));
        }
        if (is_symbol("(")) {
            take();
            Formula inner = formula();
            expect_symbol(")");
            // allow equality with a parenthesized lhs? keep simple: parens wrap formulas
            return inner;
        }
        // relation atom or equality of terms
        Term lhs = formula_term();
        if (is_symbol("=")) {
            take();
            return Formula::equal(std::move(lhs), formula_term());
        }
        if (lhs.kind == Term::Kind::Apply) {
            // R(t...) parsed as a term; reinterpret as a relation atom
            return Formula::atom(lhs.name, std::move(lhs.args));
        }
        fail("'=' or a relation atom");
    }

    Term formula_term() {
        std::string name = expect_name();
        if (is_symbol("(")) {
            take();
            std::vector<Term> args;
            if (!is_symbol(")")) {
                args.push_back(formula_term());
                while (is_symbol(",")) {
                    take();
                    args.push_back(formula_term());
                }
            }
            expect_symbol(")");
            return Term::apply(std::move(name), std::move(args));
        }
        return Term::variable(std::move(name));
    }

    // --- queries ---

    ast::Query query() {
        ast::Query q;
        if (is_name("ext")) {
            take();
            if (is_symbol("~")) {
                take();
                q.kind = ast::Query::Kind::ExtTilde;
            } else if (is_symbol("*")) {
                take();
                q.kind = ast::Query::Kind::ExtStar;
            } else {
                fail("'~' or '*' after ext");
            }
            q.name = expect_name();
            q.args = point_arguments();
            return q;
        }
        if (is_name("extmap")) {
            take();
            q.kind = ast::Query::Kind::ExtMap;
            q.name = expect_name();
            q.args = point_arguments();
            return q;
        }
        if (is_name("sat")) {
            take();
            q.kind = ast::Query::Kind::Sat;
            q.name = expect_name();
            expect_symbol("|=");
            q.formula = formula();
            expect_symbol("[");
            if (!is_symbol("]")) {
                while (true) {
                    std::string var = expect_name();
                    expect_symbol(":=");
                    q.bindings.emplace_back(std::move(var), point_literal());
                    if (!is_symbol(",")) break;
                    take();
                }
            }
            expect_symbol("]");
            if (is_name("witnesses")) {
                take();
                q.witnesses = point_arguments();
            }
            return q;
        }
        if (is_name("e") || is_name("E")) {
            q.kind = peek().text == "e" ? ast::Query::Kind::CollapseE : ast::Query::Kind::CollapseBigE;
            take();
            q.name = expect_name();
            expect_symbol(".");
            q.member = expect_name();
            q.args = point_arguments();
            return q;
        }
        if (is_name("lim")) {
            take();
            if ((is_name("i") || is_name("I")) && !is_symbol(".", 1)) {
                q.kind = peek().text == "i" ? ast::Query::Kind::LimLowerI : ast::Query::Kind::LimUpperI;
                take();
            } else {
                q.kind = ast::Query::Kind::LimOfWide;
            }
            q.name = expect_name();
            expect_symbol(".");
            q.member = expect_name();
            q.args = point_arguments();
            return q;
        }
        if (is_name("lift")) {
            take();
            q.kind = ast::Query::Kind::Lift;
            q.lift_point = point_literal();
            expect_keyword("into");
            expect_symbol("{");
            q.lift_target.push_back(expect_name());
            while (is_symbol(",")) {
                take();
                q.lift_target.push_back(expect_name());
            }
            expect_symbol("}");
            return q;
        }
        if (is_name("core")) {
            take();
            q.kind = ast::Query::Kind::Core;
            q.name = expect_name();
            expect_symbol(".");
            q.member = expect_name();
            return q;
        }
        if (is_name("pseudo")) {
            take();
            expect_symbol("?");
            q.kind = ast::Query::Kind::Pseudo;
            q.name = expect_name();
            expect_symbol(".");
            q.member = expect_name();
            return q;
        }
        if (is_name("homcheck")) {
            take();
            q.kind = ast::Query::Kind::HomCheck;
            q.hom_map = expect_name();
            expect_symbol(":");
            q.hom_source = expect_name();
            expect_symbol("->");
            q.hom_target = expect_name();
            expect_keyword("mode");
            expect_symbol("=");
            std::string mode = expect_name();
            if (mode == "star")
                q.hom_star = true;
            else if (mode != "tilde")
                fail("'tilde' or 'star'");
            return q;
        }
        if (is_name("check")) {
            take();
            q.kind = ast::Query::Kind::CheckModal;
            expect_keyword("modal");
            expect_symbol("-");
            expect_keyword("via");
            expect_symbol("-");
            expect_keyword("ext");
            q.name = expect_name();
            return q;
        }
        if (is_name("forall")) {
            q.kind = ast::Query::Kind::Quant;
            while (is_name("forall")) {
                take();
                ast::QuantBinder binder;
                binder.var = expect_name();
                expect_keyword("in");
                binder.point = point_literal();
                expect_symbol(".");
                q.binders.push_back(std::move(binder));
            }
            expect_symbol("(");
            q.quant_atoms = atom_list();
            expect_symbol(")");
            return q;
        }
        fail("a query");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// --- printing ---------------------------------------------------------------

std::string print_linear(const ast::LinearExpr& expr) {
    std::string out;
    for (std::size_t i = 0; i < expr.terms.size(); ++i) {
        const auto& term = expr.terms[i];
        Int mag = abs(term.coeff);
        if (i == 0) {
            if (term.coeff < 0) out += "-";
        } else {
            out += term.coeff < 0 ? " - " : " + ";
        }
        if (term.var.empty()) {
            out += mag.str();
        } else if (mag == 1) {
            out += term.var;
        } else {
            out += mag.str() + "*" + term.var;
        }
    }
    return out;
}

std::string print_atom(const ast::AtomNode& atom) {
    if (atom.is_congruence)
        return print_linear(atom.lhs) + " = " + atom.residue.str() + " mod " + atom.modulus.str();
    std::string op;
    switch (atom.op) {
        case ast::RelOp::Le: op = " <= "; break;
        case ast::RelOp::Lt: op = " < "; break;
        case ast::RelOp::Ge: op = " >= "; break;
        case ast::RelOp::Gt: op = " > "; break;
        case ast::RelOp::Eq: op = " = "; break;
    }
    return print_linear(atom.lhs) + op + print_linear(atom.rhs);
}

std::string print_atoms(const std::vector<ast::AtomNode>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += ", ";
        out += print_atom(atoms[i]);
    }
    return out;
}

std::string print_set(const ast::SetExpr& set) {
    switch (set.kind) {
        case ast::SetExpr::Kind::Union:
            return print_set(set.children[0]) + " | " + print_set(set.children[1]);
        case ast::SetExpr::Kind::Intersect: {
            auto child = [](const ast::SetExpr& s) {
                std::string text = print_set(s);
                if (s.kind == ast::SetExpr::Kind::Union) return "(" + text + ")";
                return text;
            };
            return child(set.children[0]) + " & " + child(set.children[1]);
        }
        case ast::SetExpr::Kind::Complement: {
            std::string inner = print_set(set.children[0]);
            if (set.children[0].kind == ast::SetExpr::Kind::Union ||
                set.children[0].kind == ast::SetExpr::Kind::Intersect)
                return "~(" + inner + ")";
            return "~" + inner;
        }
        case ast::SetExpr::Kind::Name:
            return set.name;
        case ast::SetExpr::Kind::Compr: {
            std::string vars;
            for (std::size_t i = 0; i < set.compr.vars.size(); ++i) {
                if (i) vars += ",";
                vars += set.compr.vars[i];
            }
            std::string body = set.compr.always_true    ? std::string("true")
                               : set.compr.always_false ? std::string("false")
                                                        : print_atoms(set.compr.atoms);
            return "{" + vars + " : " + body + "}";
        }
        case ast::SetExpr::Kind::FiniteEnum: {
            std::string out = "{";
            for (std::size_t i = 0; i < set.tuples.size(); ++i) {
                if (i) out += ", ";
                out += "(";
                for (std::size_t j = 0; j < set.tuples[i].size(); ++j) {
                    if (j) out += ",";
                    out += set.tuples[i][j];
                }
                out += ")";
            }
            return out + "}";
        }
    }
    return "";
}

std::string print_op_expr(const ast::OpExpr& expr) {
    if (!expr.is_if) return print_linear(expr.value);
    return "if " + print_atoms(expr.condition) + " then " + print_op_expr(expr.branches[0]) +
           " else " + print_op_expr(expr.branches[1]);
}

std::string print_op(const ast::OpDef& def) {
    std::string out = "op(";
    for (std::size_t i = 0; i < def.params.size(); ++i) {
        if (i) out += ", ";
        out += def.params[i];
    }
    return out + ") -> " + print_op_expr(def.body);
}

std::string print_point(const ast::PointLit& lit) {
    switch (lit.kind) {
        case ast::PointLit::Kind::Principal:
            return "pt(" + lit.value.str() + ")";
        case ast::PointLit::Kind::Label:
            return "pt(" + lit.name + ")";
        case ast::PointLit::Kind::LimInf:
            return "lim(inf)";
        case ast::PointLit::Kind::Limit:
            return "lim(" + lit.residue.str() + " mod " + lit.modulus.str() + ")";
        case ast::PointLit::Kind::Name:
            return lit.name;
    }
    return "";
}

std::string print_args(const std::vector<ast::PointLit>& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += print_point(args[i]);
    }
    return out + ")";
}

std::string print_query(const ast::Query& q) {
    using Kind = ast::Query::Kind;
    switch (q.kind) {
        case Kind::ExtTilde:
            return "ext~ " + q.name + " " + print_args(q.args);
        case Kind::ExtStar:
            return "ext* " + q.name + " " + print_args(q.args);
        case Kind::ExtMap:
            return "extmap " + q.name + " " + print_args(q.args);
        case Kind::Sat: {
            std::string out = "sat " + q.name + " |= " + formula_to_string(q.formula) + " [";
            for (std::size_t i = 0; i < q.bindings.size(); ++i) {
                if (i) out += ", ";
                out += q.bindings[i].first + " := " + print_point(q.bindings[i].second);
            }
            out += "]";
            if (q.witnesses) out += " witnesses " + print_args(*q.witnesses);
            return out;
        }
        case Kind::CollapseE:
            return "e " + q.name + "." + q.member + " " + print_args(q.args);
        case Kind::CollapseBigE:
            return "E " + q.name + "." + q.member + " " + print_args(q.args);
        case Kind::LimLowerI:
            return "lim i " + q.name + "." + q.member + " " + print_args(q.args);
        case Kind::LimUpperI:
            return "lim I " + q.name + "." + q.member + " " + print_args(q.args);
        case Kind::Core:
            return "core " + q.name + "." + q.member;
        case Kind::Pseudo:
            return "pseudo? " + q.name + "." + q.member;
        case Kind::HomCheck:
            return "homcheck " + q.hom_map + " : " + q.hom_source + " -> " + q.hom_target +
                   " mode=" + (q.hom_star ? "star" : "tilde");
        case Kind::CheckModal:
            return "check modal-via-ext " + q.name;
        case Kind::Quant: {
            std::string out;
            for (const auto& binder : q.binders)
                out += "forall " + binder.var + " in " + print_point(binder.point) + " . ";
            return out + "(" + print_atoms(q.quant_atoms) + ")";
        }
    }
    return "";
}

}  // namespace

ast::Script parse_script(const std::string& text) {
    Lexer lexer(text);
    Parser parser(lexer.run());
    return parser.parse();
}

std::string print_statement(const ast::Statement& st) {
    using Kind = ast::Statement::Kind;
    switch (st.kind) {
        case Kind::DefineSet:
            return st.name + " := " + print_set(st.set);
        case Kind::DefineOp:
            return st.name + " := " + print_op(st.op);
        case Kind::DefineMap: {
            std::string out = st.name + " := map(";
            for (std::size_t i = 0; i < st.map_entries.size(); ++i) {
                if (i) out += ", ";
                out += st.map_entries[i].first + ":" + st.map_entries[i].second;
            }
            return out + ")";
        }
        case Kind::DefinePoint:
            return st.name + " := " + print_point(st.point);
        case Kind::DefineModel: {
            std::string out = st.name + " := model { ";
            for (const auto& entry : st.model) {
                out += entry.name + " := " + (entry.is_op ? print_op(entry.op) : print_set(entry.set));
                out += "; ";
            }
            return out + "}";
        }
        case Kind::DefineGenModel: {
            std::string out = st.name + " := genmodel { ";
            for (const auto& entry : st.genmodel) {
                out += entry.name + " := ";
                switch (entry.kind) {
                    case ast::GenEntry::Kind::PrincipalOp:
                        out += "principal " + print_op(entry.op);
                        break;
                    case ast::GenEntry::Kind::PrincipalSet:
                        out += "principal " + print_set(entry.set);
                        break;
                    case ast::GenEntry::Kind::FamilyOp:
                        out += "family " + entry.param + " -> (" + print_op_expr(entry.family_op) +
                               ") at " + print_point(entry.at);
                        break;
                    case ast::GenEntry::Kind::FamilySet:
                        out += "family " + entry.param + " -> " + print_set(entry.set) + " at " +
                               print_point(entry.at);
                        break;
                }
                out += "; ";
            }
            return out + "}";
        }
        case Kind::DefineUniverse: {
            std::string out = "universe {";
            for (std::size_t i = 0; i < st.universe_labels.size(); ++i) {
                if (i) out += ", ";
                out += st.universe_labels[i];
            }
            return out + "}";
        }
        case Kind::RunQuery:
            return print_query(st.query);
        case Kind::Assert: {
            std::string out = "assert " + print_query(st.query) + " == ";
            switch (st.expected.kind) {
                case ast::Expected::Kind::True: out += "true"; break;
                case ast::Expected::Kind::False: out += "false"; break;
                case ast::Expected::Kind::Point: out += print_point(st.expected.point); break;
                case ast::Expected::Kind::Error:
                    out += "error";
                    if (st.expected.error_modulus) out += "(" + st.expected.error_modulus->str() + ")";
                    break;
            }
            return out;
        }
        case Kind::Directive: {
            std::string out = ":" + st.directive;
            for (const auto& arg : st.directive_args) out += " " + arg;
            return out;
        }
    }
    return "";
}

std::string print_script(const ast::Script& script) {
    std::string out;
    for (const auto& st : script) {
        out += print_statement(st);
        out += "\n";
    }
    return out;
}

}  // namespace ultrext
