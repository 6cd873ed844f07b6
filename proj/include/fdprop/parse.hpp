#ifndef FDPROP_PARSE_HPP
#define FDPROP_PARSE_HPP

#include "fdprop/model.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fdprop {

// Model text format, one statement per ';', comments run from '#' to the end
// of the line:
//
//   var x in {0, 1, 2};
//   constraint x < y;
//   constraint x = y + 2;          (also: x = y - 2)
//   constraint x = y ++ z;         (ternary sum: x = y + z)
//   constraint table(x, y) { (0, 0), (0, 1) };
//
// Variables must be declared before the constraints that use them.

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    int line = 0;   ///< 1-based
    int column = 0; ///< 1-based
    std::string message;
};

struct ParseResult {
    std::optional<CspModel> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

namespace detail {

enum class Tok {
    Ident, Int,
    LBrace, RBrace, LParen, RParen,
    Comma, Semi, Less, Equal, Plus, PlusPlus, Minus,
    End, Bad
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Value number = 0;
    bool overflow = false;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) return t;

        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                advance();
            t.kind = Tok::Ident;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                advance();
            t.kind = Tok::Int;
            t.text = std::string(src_.substr(start, pos_ - start));
            auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
            t.overflow = (ec != std::errc());
            return t;
        }
        advance();
        switch (c) {
        case '{': t.kind = Tok::LBrace; return t;
        case '}': t.kind = Tok::RBrace; return t;
        case '(': t.kind = Tok::LParen; return t;
        case ')': t.kind = Tok::RParen; return t;
        case ',': t.kind = Tok::Comma; return t;
        case ';': t.kind = Tok::Semi; return t;
        case '<': t.kind = Tok::Less; return t;
        case '=': t.kind = Tok::Equal; return t;
        case '-': t.kind = Tok::Minus; return t;
        case '+':
            if (pos_ < src_.size() && src_[pos_] == '+') {
                advance();
                t.kind = Tok::PlusPlus;
            } else {
                t.kind = Tok::Plus;
            }
            return t;
        default:
            t.kind = Tok::Bad;
            t.text = std::string(1, c);
            return t;
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class ModelParser {
public:
    explicit ModelParser(std::string_view src) : lexer_(src) { shift(); }

    ParseResult parse() {
        while (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::Ident && cur_.text == "var") {
                parse_var();
            } else if (cur_.kind == Tok::Ident && cur_.text == "constraint") {
                parse_constraint();
            } else {
                error(cur_, "expected 'var' or 'constraint'");
                recover();
            }
        }

        ParseResult result;
        result.diagnostics = std::move(diags_);
        for (const Diagnostic& d : result.diagnostics)
            if (d.severity == Severity::Error) return result;
        try {
            result.model.emplace(std::move(names_), std::move(domains_), std::move(constraints_));
        } catch (const InputError& e) {
            result.diagnostics.push_back({Severity::Error, 1, 1, e.what()});
        }
        return result;
    }

private:
    static bool reserved(const std::string& s) {
        return s == "var" || s == "constraint" || s == "in" || s == "table";
    }

    void shift() { cur_ = lexer_.next(); }

    bool accept(Tok k) {
        if (cur_.kind != k) return false;
        shift();
        return true;
    }

    bool expect(Tok k, const char* what) {
        if (accept(k)) return true;
        error(cur_, std::string("expected ") + what);
        return false;
    }

    void error(const Token& at, std::string msg) {
        diags_.push_back({Severity::Error, at.line, at.column, std::move(msg)});
    }

    /// Skip to just past the next ';' so later statements still get checked.
    void recover() {
        while (cur_.kind != Tok::End && cur_.kind != Tok::Semi) shift();
        accept(Tok::Semi);
    }

    std::optional<std::string> parse_name(const char* what) {
        if (cur_.kind != Tok::Ident || reserved(cur_.text)) {
            error(cur_, std::string("expected ") + what);
            return std::nullopt;
        }
        std::string name = cur_.text;
        shift();
        return name;
    }

    std::optional<Value> parse_int() {
        bool negative = accept(Tok::Minus);
        if (cur_.kind != Tok::Int) {
            error(cur_, "expected an integer");
            return std::nullopt;
        }
        if (cur_.overflow) {
            error(cur_, "integer '" + cur_.text + "' does not fit a machine word");
            shift();
            return std::nullopt;
        }
        Value v = cur_.number;
        shift();
        return negative ? -v : v;
    }

    std::optional<VariableId> lookup(const Token& at, const std::string& name) {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return VariableId{static_cast<int>(i)};
        error(at, "unknown variable '" + name + "'");
        return std::nullopt;
    }

    void parse_var() {
        shift(); // 'var'
        Token name_tok = cur_;
        auto name = parse_name("a variable name");
        if (!name) return recover();
        for (const std::string& existing : names_)
            if (existing == *name) {
                error(name_tok, "duplicate variable '" + *name + "'");
                return recover();
            }
        if (cur_.kind != Tok::Ident || cur_.text != "in")
            return error(cur_, "expected 'in'"), recover();
        shift();
        if (!expect(Tok::LBrace, "'{'")) return recover();

        Token brace = cur_;
        std::vector<Value> values;
        if (cur_.kind != Tok::RBrace) {
            do {
                auto v = parse_int();
                if (!v) return recover();
                values.push_back(*v);
            } while (accept(Tok::Comma));
        }
        if (!expect(Tok::RBrace, "'}'")) return recover();
        if (values.empty()) {
            error(brace, "variable '" + *name + "' needs a non-empty domain");
            return recover();
        }
        if (!expect(Tok::Semi, "';'")) return recover();

        names_.push_back(*name);
        domains_.push_back(ValueSet(std::move(values)));
    }

    std::string next_constraint_id() { return "c" + std::to_string(constraints_.size() + 1); }

    void parse_constraint() {
        shift(); // 'constraint'
        if (cur_.kind == Tok::Ident && cur_.text == "table") {
            shift();
            return parse_table();
        }

        Token x_tok = cur_;
        auto x_name = parse_name("a variable name");
        if (!x_name) return recover();
        auto x = lookup(x_tok, *x_name);
        if (!x) return recover();

        if (accept(Tok::Less)) {
            Token y_tok = cur_;
            auto y_name = parse_name("a variable name");
            if (!y_name) return recover();
            auto y = lookup(y_tok, *y_name);
            if (!y) return recover();
            if (*x == *y) {
                error(y_tok, "constraint repeats variable '" + *y_name + "'");
                return recover();
            }
            if (!expect(Tok::Semi, "';'")) return recover();
            constraints_.push_back(ConstraintDef::less_than(next_constraint_id(), *x, *y));
            return;
        }

        if (!expect(Tok::Equal, "'<' or '='")) return recover();
        Token y_tok = cur_;
        auto y_name = parse_name("a variable name");
        if (!y_name) return recover();
        auto y = lookup(y_tok, *y_name);
        if (!y) return recover();

        if (accept(Tok::PlusPlus)) {
            Token z_tok = cur_;
            auto z_name = parse_name("a variable name");
            if (!z_name) return recover();
            auto z = lookup(z_tok, *z_name);
            if (!z) return recover();
            if (*x == *y || *x == *z || *y == *z) {
                error(z_tok, "constraint repeats a variable");
                return recover();
            }
            if (!expect(Tok::Semi, "';'")) return recover();
            constraints_.push_back(ConstraintDef::sum3(next_constraint_id(), *x, *y, *z));
            return;
        }

        bool minus = cur_.kind == Tok::Minus;
        if (!accept(Tok::Plus) && !accept(Tok::Minus)) {
            error(cur_, "expected '+', '-' or '++'");
            return recover();
        }
        auto k = parse_int();
        if (!k) return recover();
        if (*x == *y) {
            error(y_tok, "constraint repeats variable '" + *y_name + "'");
            return recover();
        }
        if (!expect(Tok::Semi, "';'")) return recover();
        constraints_.push_back(
            ConstraintDef::offset_eq(next_constraint_id(), *x, *y, minus ? -*k : *k));
    }

    void parse_table() {
        if (!expect(Tok::LParen, "'('")) return recover();
        std::vector<VariableId> scope;
        do {
            Token tok = cur_;
            auto name = parse_name("a variable name");
            if (!name) return recover();
            auto x = lookup(tok, *name);
            if (!x) return recover();
            for (VariableId seen : scope)
                if (seen == *x) {
                    error(tok, "constraint repeats variable '" + *name + "'");
                    return recover();
                }
            scope.push_back(*x);
        } while (accept(Tok::Comma));
        if (!expect(Tok::RParen, "')'")) return recover();
        if (!expect(Tok::LBrace, "'{'")) return recover();

        std::vector<Tuple> tuples;
        while (cur_.kind == Tok::LParen) {
            Token open = cur_;
            shift();
            std::vector<Value> row;
            do {
                auto v = parse_int();
                if (!v) return recover();
                row.push_back(*v);
            } while (accept(Tok::Comma));
            if (!expect(Tok::RParen, "')'")) return recover();
            if (row.size() != scope.size()) {
                error(open, "tuple arity " + std::to_string(row.size()) + " does not match " +
                                std::to_string(scope.size()) + " scope variables");
                return recover();
            }
            Tuple t;
            for (std::size_t i = 0; i < scope.size(); ++i) {
                if (!domains_[static_cast<std::size_t>(scope[i].index)].contains(row[i])) {
                    error(open, "value " + std::to_string(row[i]) + " outside the domain of '" +
                                    names_[static_cast<std::size_t>(scope[i].index)] + "'");
                    return recover();
                }
                t.set(scope[i], row[i]);
            }
            tuples.push_back(std::move(t));
            if (!accept(Tok::Comma)) break;
        }
        if (!expect(Tok::RBrace, "'}'")) return recover();
        if (!expect(Tok::Semi, "';'")) return recover();
        constraints_.push_back(
            ConstraintDef::table(next_constraint_id(), std::move(scope), std::move(tuples)));
    }

    Lexer lexer_;
    Token cur_;
    std::vector<Diagnostic> diags_;
    std::vector<std::string> names_;
    std::vector<ValueSet> domains_;
    std::vector<ConstraintDef> constraints_;
};

} // namespace detail

/// Parse model text. Either a complete valid model comes back or one or more
/// positioned diagnostics; never a partial model.
inline ParseResult parse_model(std::string_view text) {
    return detail::ModelParser(text).parse();
}

/// Canonical text form; parsing it reproduces the model exactly.
inline std::string print_model(const CspModel& model) {
    std::ostringstream os;
    for (int i = 0; i < model.num_variables(); ++i) {
        VariableId x{i};
        os << "var " << model.name_of(x) << " in {";
        const auto& vals = model.initial_domain(x).values();
        for (std::size_t k = 0; k < vals.size(); ++k)
            os << (k ? ", " : "") << vals[k];
        os << "};\n";
    }
    for (const ConstraintDef& c : model.constraints()) {
        os << "constraint ";
        switch (c.kind) {
        case RelationKind::LessThan:
            os << model.name_of(c.scope[0]) << " < " << model.name_of(c.scope[1]);
            break;
        case RelationKind::OffsetEq:
            os << model.name_of(c.scope[0]) << " = " << model.name_of(c.scope[1])
               << (c.offset < 0 ? " - " : " + ") << (c.offset < 0 ? -c.offset : c.offset);
            break;
        case RelationKind::Sum3:
            os << model.name_of(c.scope[0]) << " = " << model.name_of(c.scope[1]) << " ++ "
               << model.name_of(c.scope[2]);
            break;
        case RelationKind::Table: {
            os << "table(";
            for (std::size_t i = 0; i < c.scope.size(); ++i)
                os << (i ? ", " : "") << model.name_of(c.scope[i]);
            os << ") {";
            if (c.tuples.empty()) {
                os << " ";
            } else {
                for (std::size_t t = 0; t < c.tuples.size(); ++t) {
                    os << (t ? ", " : " ") << "(";
                    for (std::size_t i = 0; i < c.scope.size(); ++i)
                        os << (i ? ", " : "") << c.tuples[t].at(c.scope[i]);
                    os << ")";
                }
                os << " ";
            }
            os << "}";
            break;
        }
        }
        os << ";\n";
    }
    return os.str();
}

} // namespace fdprop

#endif // FDPROP_PARSE_HPP
