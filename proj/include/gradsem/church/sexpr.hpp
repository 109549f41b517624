#ifndef GRADSEM_CHURCH_SEXPR_HPP
#define GRADSEM_CHURCH_SEXPR_HPP

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gradsem::church {

enum class TokenKind { LParen, RParen, Quote, Symbol, Number, Boolean, String };

struct Token {
    TokenKind kind;
    std::string text;
    int line = 1;  // 1-based
    int col = 1;   // 1-based
};

// Abstract syntax for the Church subset. Numbers are always doubles;
// 'x parses to a distinct Quote node rather than (quote x).
struct SExpr {
    struct Symbol {
        std::string name;
        bool operator==(const Symbol& o) const { return name == o.name; }
    };
    struct Quoted {
        std::shared_ptr<const SExpr> inner;
    };
    using List = std::vector<SExpr>;

    std::variant<double, bool, Symbol, Quoted, List> node;

    static SExpr number(double v) { return SExpr{v}; }
    static SExpr boolean(bool v) { return SExpr{v}; }
    static SExpr symbol(std::string name) { return SExpr{Symbol{std::move(name)}}; }
    static SExpr quoted(SExpr inner);
    static SExpr list(List items) { return SExpr{std::move(items)}; }

    bool is_number() const { return std::holds_alternative<double>(node); }
    bool is_boolean() const { return std::holds_alternative<bool>(node); }
    bool is_symbol() const { return std::holds_alternative<Symbol>(node); }
    bool is_quoted() const { return std::holds_alternative<Quoted>(node); }
    bool is_list() const { return std::holds_alternative<List>(node); }

    double as_number() const { return std::get<double>(node); }
    bool as_boolean() const { return std::get<bool>(node); }
    const std::string& symbol_name() const { return std::get<Symbol>(node).name; }
    const SExpr& quoted_inner() const { return *std::get<Quoted>(node).inner; }
    const List& items() const { return std::get<List>(node); }

    bool operator==(const SExpr& other) const;
};

// Shortest decimal text that parses back to exactly the same double.
std::string format_real(double v);

std::string to_string(const SExpr& e);

// Splits program text into tokens. Line comments starting with ';' run to
// end of line. Throws LexError for unterminated strings and stray ')'.
std::vector<Token> tokenize(std::string_view text);

// Parses a token stream into top-level forms. Throws ParseError on
// unbalanced parentheses, dangling quotes, and string literals (the
// language has no string type).
std::vector<SExpr> parse(const std::vector<Token>& tokens);

// tokenize + parse.
std::vector<SExpr> parse_program(std::string_view text);

// Convenience for CLI flags and templates: text holding exactly one form.
SExpr parse_single(std::string_view text);

}  // namespace gradsem::church

#endif  // GRADSEM_CHURCH_SEXPR_HPP
