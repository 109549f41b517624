#include "gradsem/church/sexpr.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "gradsem/errors.hpp"

namespace gradsem::church {

SExpr SExpr::quoted(SExpr inner) {
    return SExpr{Quoted{std::make_shared<const SExpr>(std::move(inner))}};
}

bool SExpr::operator==(const SExpr& other) const {
    if (node.index() != other.node.index()) return false;
    if (is_number()) return as_number() == other.as_number();
    if (is_boolean()) return as_boolean() == other.as_boolean();
    if (is_symbol()) return symbol_name() == other.symbol_name();
    if (is_quoted()) return quoted_inner() == other.quoted_inner();
    const List& a = items();
    const List& b = other.items();
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] == b[i])) return false;
    }
    return true;
}

std::string format_real(double v) {
    char buf[64];
    for (int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string to_string(const SExpr& e) {
    if (e.is_number()) return format_real(e.as_number());
    if (e.is_boolean()) return e.as_boolean() ? "#t" : "#f";
    if (e.is_symbol()) return e.symbol_name();
    if (e.is_quoted()) return "'" + to_string(e.quoted_inner());
    std::string out = "(";
    bool first = true;
    for (const SExpr& item : e.items()) {
        if (!first) out += ' ';
        first = false;
        out += to_string(item);
    }
    out += ')';
    return out;
}

namespace {

std::string at(int line, int col) {
    return " at line " + std::to_string(line) + ", column " + std::to_string(col);
}

bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == '\'' || c == ';' || c == '"' ||
           std::isspace(static_cast<unsigned char>(c));
}

bool parses_as_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    int line = 1, col = 1;
    int depth = 0;
    std::size_t i = 0;

    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };

    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(c);
            ++i;
            continue;
        }
        if (c == ';') {
            while (i < text.size() && text[i] != '\n') {
                advance(text[i]);
                ++i;
            }
            continue;
        }
        const int tok_line = line, tok_col = col;
        if (c == '(') {
            ++depth;
            tokens.push_back({TokenKind::LParen, "(", tok_line, tok_col});
            advance(c);
            ++i;
            continue;
        }
        if (c == ')') {
            if (--depth < 0) throw LexError("stray closing parenthesis" + at(tok_line, tok_col));
            tokens.push_back({TokenKind::RParen, ")", tok_line, tok_col});
            advance(c);
            ++i;
            continue;
        }
        if (c == '\'') {
            tokens.push_back({TokenKind::Quote, "'", tok_line, tok_col});
            advance(c);
            ++i;
            continue;
        }
        if (c == '"') {
            std::string body;
            advance(c);
            ++i;
            bool closed = false;
            while (i < text.size()) {
                const char d = text[i];
                advance(d);
                ++i;
                if (d == '"') {
                    closed = true;
                    break;
                }
                body += d;
            }
            if (!closed) throw LexError("unterminated string" + at(tok_line, tok_col));
            tokens.push_back({TokenKind::String, body, tok_line, tok_col});
            continue;
        }
        std::string atom;
        while (i < text.size() && !is_delimiter(text[i])) {
            atom += text[i];
            advance(text[i]);
            ++i;
        }
        double num = 0.0;
        if (atom == "#t" || atom == "#f") {
            tokens.push_back({TokenKind::Boolean, atom, tok_line, tok_col});
        } else if (parses_as_number(atom, num)) {
            tokens.push_back({TokenKind::Number, atom, tok_line, tok_col});
        } else {
            tokens.push_back({TokenKind::Symbol, atom, tok_line, tok_col});
        }
    }
    return tokens;
}

namespace {

SExpr parse_form(const std::vector<Token>& tokens, std::size_t& pos) {
    if (pos >= tokens.size()) throw ParseError("unexpected end of input");
    const Token& tok = tokens[pos];
    switch (tok.kind) {
        case TokenKind::Number:
            ++pos;
            return SExpr::number(std::strtod(tok.text.c_str(), nullptr));
        case TokenKind::Boolean:
            ++pos;
            return SExpr::boolean(tok.text == "#t");
        case TokenKind::Symbol:
            ++pos;
            return SExpr::symbol(tok.text);
        case TokenKind::String:
            throw ParseError("string literals are not supported" + at(tok.line, tok.col));
        case TokenKind::Quote: {
            ++pos;
            if (pos >= tokens.size())
                throw ParseError("quote with nothing to quote" + at(tok.line, tok.col));
            return SExpr::quoted(parse_form(tokens, pos));
        }
        case TokenKind::RParen:
            throw ParseError("unexpected ')'" + at(tok.line, tok.col));
        case TokenKind::LParen: {
            ++pos;
            SExpr::List items;
            while (true) {
                if (pos >= tokens.size())
                    throw ParseError("unbalanced parentheses: '(' opened" + at(tok.line, tok.col) +
                                     " is never closed");
                if (tokens[pos].kind == TokenKind::RParen) {
                    ++pos;
                    return SExpr::list(std::move(items));
                }
                items.push_back(parse_form(tokens, pos));
            }
        }
    }
    throw ParseError("unrecognized token '" + tok.text + "'" + at(tok.line, tok.col));
}

}  // namespace

std::vector<SExpr> parse(const std::vector<Token>& tokens) {
    std::vector<SExpr> forms;
    std::size_t pos = 0;
    while (pos < tokens.size()) forms.push_back(parse_form(tokens, pos));
    return forms;
}

std::vector<SExpr> parse_program(std::string_view text) { return parse(tokenize(text)); }

SExpr parse_single(std::string_view text) {
    std::vector<SExpr> forms = parse_program(text);
    if (forms.size() != 1)
        throw ParseError("expected exactly one form, got " + std::to_string(forms.size()));
    return forms.front();
}

}  // namespace gradsem::church
