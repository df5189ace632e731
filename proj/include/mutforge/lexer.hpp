#pragma once

#include <array>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mutforge/errors.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge::cscript {

enum class TokenKind {
    Identifier,
    Number,
    String,
    Template,
    Regex,
    Punct,
    Eof,
};

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::size_t start = 0;
    std::size_t end = 0;
    int line = 1;
    int col = 1;
    bool newline_before = false; // a line break separates this token from the previous one
    std::string_view text;

    bool is(std::string_view s) const { return text == s; }
    bool is_punct(std::string_view s) const { return kind == TokenKind::Punct && text == s; }
    bool is_ident(std::string_view s) const { return kind == TokenKind::Identifier && text == s; }
};

namespace detail {

inline bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$' ||
           static_cast<unsigned char>(c) >= 0x80;
}

inline bool is_ident_part(char c) {
    return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

// Keywords after which a '/' starts a regex literal rather than division.
inline bool regex_may_follow_keyword(std::string_view kw) {
    static constexpr std::array<std::string_view, 14> kws = {
        "return", "typeof", "instanceof", "in",   "of",    "new",  "delete",
        "void",   "throw",  "case",       "do",   "else",  "yield", "await",
    };
    for (auto k : kws)
        if (k == kw) return true;
    return false;
}

} // namespace detail

// Hand-rolled lexer for the C-style scripting profile. Produces the whole
// token stream up front; spans are byte offsets into the original text.
class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text), index_(text) {}

    std::vector<Token> tokenize() {
        std::vector<Token> tokens;
        bool newline_pending = false;
        while (true) {
            newline_pending = skip_trivia() || newline_pending;
            if (pos_ >= text_.size()) {
                Token t = make_token(TokenKind::Eof, pos_, pos_);
                t.newline_before = newline_pending;
                tokens.push_back(t);
                break;
            }
            Token t = next_token(tokens);
            t.newline_before = newline_pending;
            newline_pending = false;
            tokens.push_back(t);
        }
        return tokens;
    }

private:
    std::string_view text_;
    LineIndex index_;
    std::size_t pos_ = 0;

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        throw ParseError(msg, at, index_.line_of(at), index_.col_of(at));
    }

    Token make_token(TokenKind kind, std::size_t start, std::size_t end) const {
        Token t;
        t.kind = kind;
        t.start = start;
        t.end = end;
        t.line = index_.line_of(start);
        t.col = index_.col_of(start);
        t.text = text_.substr(start, end - start);
        return t;
    }

    // Skips whitespace and comments; returns true if a newline was crossed.
    bool skip_trivia() {
        bool newline = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                newline = true;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '/' && peek(1) == '*') {
                std::size_t start = pos_;
                pos_ += 2;
                while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) {
                    if (text_[pos_] == '\n') newline = true;
                    ++pos_;
                }
                if (pos_ >= text_.size()) fail("unterminated block comment", start);
                pos_ += 2;
            } else {
                break;
            }
        }
        return newline;
    }

    bool regex_allowed(const std::vector<Token>& prev) const {
        if (prev.empty()) return true;
        const Token& t = prev.back();
        switch (t.kind) {
        case TokenKind::Identifier:
            return detail::regex_may_follow_keyword(t.text);
        case TokenKind::Number:
        case TokenKind::String:
        case TokenKind::Template:
        case TokenKind::Regex:
            return false;
        case TokenKind::Punct:
            return !(t.text == ")" || t.text == "]" || t.text == "}" || t.text == "++" ||
                     t.text == "--");
        default:
            return true;
        }
    }

    Token next_token(const std::vector<Token>& prev) {
        std::size_t start = pos_;
        char c = text_[pos_];

        if (detail::is_ident_start(c)) {
            while (pos_ < text_.size() && detail::is_ident_part(text_[pos_])) ++pos_;
            return make_token(TokenKind::Identifier, start, pos_);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            return lex_number();
        }
        if (c == '"' || c == '\'') return lex_string(c);
        if (c == '`') return lex_template();
        if (c == '/' && regex_allowed(prev)) return lex_regex();
        return lex_punct();
    }

    Token lex_number() {
        std::size_t start = pos_;
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'b' ||
                              peek(1) == 'B' || peek(1) == 'o' || peek(1) == 'O')) {
            pos_ += 2;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return make_token(TokenKind::Number, start, pos_);
        }
        auto digits = [&] {
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
        };
        digits();
        if (peek() == '.') {
            ++pos_;
            digits();
        }
        if (peek() == 'e' || peek() == 'E') {
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            digits();
        }
        if (peek() == 'n') ++pos_; // bigint suffix
        return make_token(TokenKind::Number, start, pos_);
    }

    Token lex_string(char quote) {
        std::size_t start = pos_;
        ++pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                pos_ += 2;
                continue;
            }
            if (c == quote) {
                ++pos_;
                return make_token(TokenKind::String, start, pos_);
            }
            if (c == '\n') fail("unterminated string literal", start);
            ++pos_;
        }
        fail("unterminated string literal", start);
    }

    // Template literals are single tokens; `${...}` interpolations are
    // brace-matched but their contents are not tokenized further.
    Token lex_template() {
        std::size_t start = pos_;
        ++pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                pos_ += 2;
                continue;
            }
            if (c == '`') {
                ++pos_;
                return make_token(TokenKind::Template, start, pos_);
            }
            if (c == '$' && peek(1) == '{') {
                pos_ += 2;
                skip_interpolation(start);
                continue;
            }
            ++pos_;
        }
        fail("unterminated template literal", start);
    }

    void skip_interpolation(std::size_t tpl_start) {
        int depth = 1;
        while (pos_ < text_.size() && depth > 0) {
            char c = text_[pos_];
            if (c == '{') {
                ++depth;
                ++pos_;
            } else if (c == '}') {
                --depth;
                ++pos_;
            } else if (c == '"' || c == '\'') {
                lex_string(c);
            } else if (c == '`') {
                lex_template();
            } else {
                ++pos_;
            }
        }
        if (depth > 0) fail("unterminated template interpolation", tpl_start);
    }

    Token lex_regex() {
        std::size_t start = pos_;
        ++pos_;
        bool in_class = false;
        bool saw_body = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                pos_ += 2;
                saw_body = true;
                continue;
            }
            if (c == '\n') fail("unterminated regex literal", start);
            if (c == '[') in_class = true;
            if (c == ']') in_class = false;
            if (c == '/' && !in_class) {
                if (!saw_body) fail("empty regex literal", start);
                ++pos_;
                while (pos_ < text_.size() && detail::is_ident_part(text_[pos_])) ++pos_; // flags
                return make_token(TokenKind::Regex, start, pos_);
            }
            saw_body = true;
            ++pos_;
        }
        fail("unterminated regex literal", start);
    }

    Token lex_punct() {
        static constexpr std::array<std::string_view, 33> multi = {
            ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", ">>>", "&&=", "||=", "?\?=",
            "?.",   "??",  "=>",  "==",  "!=",  "<=",  ">=",  "&&",  "||",  "++",  "--",
            "+=",   "-=",  "*=",  "/=",  "%=",  "&=",  "|=",  "^=",  "<<",  ">>",  "**",
        };
        std::string_view rest = text_.substr(pos_);
        for (auto op : multi) {
            if (rest.substr(0, op.size()) == op) {
                // `x ? .5 : y` is a conditional, not optional chaining
                if (op == "?." && rest.size() > 2 && std::isdigit(static_cast<unsigned char>(rest[2])))
                    continue;
                std::size_t start = pos_;
                pos_ += op.size();
                return make_token(TokenKind::Punct, start, pos_);
            }
        }
        static constexpr std::string_view singles = "{}()[];,<>+-*/%&|^!~?:=.";
        if (singles.find(text_[pos_]) != std::string_view::npos) {
            std::size_t start = pos_;
            ++pos_;
            return make_token(TokenKind::Punct, start, pos_);
        }
        fail(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
};

} // namespace mutforge::cscript
