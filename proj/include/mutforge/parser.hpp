#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mutforge/ast.hpp"
#include "mutforge/errors.hpp"
#include "mutforge/lexer.hpp"

namespace mutforge::cscript {

namespace detail {

inline bool is_reserved(std::string_view s) {
    static constexpr std::array<std::string_view, 28> words = {
        "var",    "let",   "const",    "if",     "else",  "switch", "case",
        "default", "for",  "while",    "do",     "break", "continue", "return",
        "function", "new", "delete",   "typeof", "instanceof", "in", "void",
        "this",   "throw", "try",      "catch",  "finally", "class", "extends",
    };
    for (auto w : words)
        if (w == s) return true;
    return false;
}

} // namespace detail

// Recursive-descent parser for the C-style scripting profile: functions,
// C-style control flow (if/switch/while/do-while, the three for forms), and
// a full expression grammar with calls, members, arrows, and literals.
// Semicolons may be omitted before '}', at end of input, or at a line break.
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text), index_(text) {
        tokens_ = Lexer(text).tokenize();
    }

    ParseTree parse_program() {
        auto program = node(NodeKind::Program, cur().start);
        while (!at_eof()) {
            program->children.push_back(parse_statement());
        }
        program->start = 0;
        program->end = text_.size();
        return ParseTree{std::move(program)};
    }

private:
    std::string_view text_;
    LineIndex index_;
    std::vector<Token> tokens_;
    std::size_t cursor_ = 0;

    const Token& cur() const { return tokens_[cursor_]; }
    const Token& ahead(std::size_t n = 1) const {
        std::size_t i = cursor_ + n;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }
    bool at_eof() const { return cur().kind == TokenKind::Eof; }

    const Token& advance() { return tokens_[cursor_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = cur();
        std::string what = msg;
        if (t.kind == TokenKind::Eof)
            what += " at end of input";
        else
            what += " at '" + std::string(t.text) + "'";
        throw ParseError(what, t.start, t.line, t.col);
    }

    void expect(std::string_view punct, const char* what) {
        if (!cur().is_punct(punct)) fail(std::string("expected '") + std::string(punct) + "' " + what);
        advance();
    }

    bool eat_punct(std::string_view punct) {
        if (cur().is_punct(punct)) {
            advance();
            return true;
        }
        return false;
    }

    bool at_keyword(std::string_view kw) const {
        return cur().kind == TokenKind::Identifier && cur().text == kw;
    }

    bool eat_keyword(std::string_view kw) {
        if (at_keyword(kw)) {
            advance();
            return true;
        }
        return false;
    }

    NodePtr node(NodeKind kind, std::size_t start) const {
        return std::make_unique<Node>(kind, start, start);
    }

    std::size_t prev_end() const { return tokens_[cursor_ - 1].end; }

    // Automatic semicolon insertion: a statement may end without ';' before
    // '}', at EOF, or when the next token starts a new line.
    void terminate_statement() {
        if (eat_punct(";")) return;
        if (cur().is_punct("}") || at_eof() || cur().newline_before) return;
        fail("expected ';'");
    }

    bool no_arg_follows() const {
        return cur().is_punct(";") || cur().is_punct("}") || at_eof() || cur().newline_before;
    }

    // ---- statements ----

    NodePtr parse_statement() {
        const Token& t = cur();
        if (t.kind == TokenKind::Punct) {
            if (t.is("{")) return parse_block();
            if (t.is(";")) {
                auto n = node(NodeKind::EmptyStmt, t.start);
                advance();
                n->end = prev_end();
                return n;
            }
        }
        if (t.kind == TokenKind::Identifier) {
            if (t.is("if")) return parse_if();
            if (t.is("switch")) return parse_switch();
            if (t.is("while")) return parse_while();
            if (t.is("do")) return parse_do_while();
            if (t.is("for")) return parse_for();
            if (t.is("var") || t.is("let") || t.is("const")) {
                auto decl = parse_var_decl(/*no_in=*/false);
                terminate_statement();
                decl->end = prev_end();
                return decl;
            }
            if (t.is("function")) return parse_function(NodeKind::FunctionDecl);
            if (t.is("return")) return parse_return();
            if (t.is("break") || t.is("continue")) return parse_break_continue();
            if (t.is("throw")) return parse_throw();
            if (t.is("try")) return parse_try();
            if (t.is("class")) fail("class declarations are not supported by this profile");
            if (t.is("import") || t.is("export"))
                fail("module syntax is not supported by this profile");
            // labeled statement
            if (ahead().is_punct(":") && !detail::is_reserved(t.text)) {
                auto labeled = node(NodeKind::LabeledStmt, t.start);
                labeled->children.push_back(parse_identifier());
                advance(); // ':'
                labeled->children.push_back(parse_statement());
                labeled->end = labeled->children.back()->end;
                return labeled;
            }
        }
        auto stmt = node(NodeKind::ExprStmt, t.start);
        stmt->children.push_back(parse_expression(false));
        terminate_statement();
        stmt->end = prev_end();
        return stmt;
    }

    NodePtr parse_block() {
        auto block = node(NodeKind::Block, cur().start);
        expect("{", "to open block");
        while (!cur().is_punct("}")) {
            if (at_eof()) fail("unterminated block");
            block->children.push_back(parse_statement());
        }
        advance();
        block->end = prev_end();
        return block;
    }

    NodePtr parse_if() {
        auto stmt = node(NodeKind::IfStmt, cur().start);
        advance();
        expect("(", "after 'if'");
        stmt->children.push_back(parse_expression(false));
        expect(")", "after if condition");
        stmt->children.push_back(parse_statement());
        if (eat_keyword("else"))
            stmt->children.push_back(parse_statement());
        else
            stmt->children.push_back(nullptr);
        stmt->end = stmt->children[2] ? stmt->children[2]->end : stmt->children[1]->end;
        return stmt;
    }

    NodePtr parse_switch() {
        auto stmt = node(NodeKind::SwitchStmt, cur().start);
        advance();
        expect("(", "after 'switch'");
        stmt->children.push_back(parse_expression(false));
        expect(")", "after switch discriminant");
        expect("{", "to open switch body");
        while (!cur().is_punct("}")) {
            if (at_eof()) fail("unterminated switch body");
            auto cs = node(NodeKind::SwitchCase, cur().start);
            if (eat_keyword("case")) {
                cs->children.push_back(parse_expression(false));
            } else if (eat_keyword("default")) {
                cs->children.push_back(nullptr);
            } else {
                fail("expected 'case' or 'default'");
            }
            expect(":", "after case label");
            while (!cur().is_punct("}") && !at_keyword("case") && !at_keyword("default")) {
                if (at_eof()) fail("unterminated switch body");
                cs->children.push_back(parse_statement());
            }
            cs->end = prev_end();
            stmt->children.push_back(std::move(cs));
        }
        advance();
        stmt->end = prev_end();
        return stmt;
    }

    NodePtr parse_while() {
        auto stmt = node(NodeKind::WhileStmt, cur().start);
        advance();
        expect("(", "after 'while'");
        stmt->children.push_back(parse_expression(false));
        expect(")", "after while condition");
        stmt->children.push_back(parse_statement());
        stmt->end = stmt->children[1]->end;
        return stmt;
    }

    NodePtr parse_do_while() {
        auto stmt = node(NodeKind::DoWhileStmt, cur().start);
        advance();
        stmt->children.push_back(parse_statement()); // body
        if (!eat_keyword("while")) fail("expected 'while' after do body");
        expect("(", "after 'while'");
        stmt->children.push_back(parse_expression(false));
        expect(")", "after do-while condition");
        eat_punct(";");
        stmt->end = prev_end();
        return stmt;
    }

    NodePtr parse_for() {
        std::size_t for_start = cur().start;
        advance();
        expect("(", "after 'for'");
        std::size_t inner_first = cursor_; // first token inside the parens

        NodePtr init;
        if (cur().is_punct(";")) {
            advance();
        } else {
            bool is_decl = at_keyword("var") || at_keyword("let") || at_keyword("const");
            if (is_decl)
                init = parse_var_decl(/*no_in=*/true);
            else
                init = parse_expression(/*no_in=*/true);

            if (at_keyword("in") || at_keyword("of")) {
                NodeKind kind = at_keyword("in") ? NodeKind::ForInStmt : NodeKind::ForOfStmt;
                advance();
                auto stmt = node(kind, for_start);
                stmt->children.push_back(std::move(init));
                stmt->children.push_back(parse_expression(false));
                set_paren_inner(*stmt, inner_first);
                expect(")", "after loop header");
                stmt->children.push_back(parse_statement());
                stmt->end = stmt->children[2]->end;
                return stmt;
            }
            expect(";", "after for initializer");
        }

        auto stmt = node(NodeKind::ForStmt, for_start);
        stmt->children.push_back(std::move(init));
        if (cur().is_punct(";")) {
            stmt->children.push_back(nullptr);
        } else {
            stmt->children.push_back(parse_expression(false));
        }
        expect(";", "after for test");
        if (cur().is_punct(")")) {
            stmt->children.push_back(nullptr);
        } else {
            stmt->children.push_back(parse_expression(false));
        }
        set_paren_inner(*stmt, inner_first);
        expect(")", "after for header");
        stmt->children.push_back(parse_statement());
        stmt->end = stmt->children[3]->end;
        return stmt;
    }

    // Records the span between the header parens: from the first token inside
    // to the token just before the (not yet consumed) closing ')'.
    void set_paren_inner(Node& stmt, std::size_t inner_first) {
        if (inner_first < cursor_) {
            stmt.has_inner = true;
            stmt.inner_start = tokens_[inner_first].start;
            stmt.inner_end = tokens_[cursor_ - 1].end;
        }
    }

    NodePtr parse_var_decl(bool no_in) {
        auto decl = node(NodeKind::VarDecl, cur().start);
        decl->op = cur().text;
        advance();
        while (true) {
            auto d = node(NodeKind::VarDeclarator, cur().start);
            d->children.push_back(parse_binding_target());
            if (eat_punct("=")) {
                d->children.push_back(parse_assignment(no_in));
            } else {
                d->children.push_back(nullptr);
            }
            d->end = d->children[1] ? d->children[1]->end : d->children[0]->end;
            decl->children.push_back(std::move(d));
            if (!eat_punct(",")) break;
        }
        decl->end = prev_end();
        return decl;
    }

    NodePtr parse_binding_target() {
        if (cur().is_punct("[") || cur().is_punct("{")) return parse_primary();
        return parse_identifier();
    }

    NodePtr parse_return() {
        auto stmt = node(NodeKind::ReturnStmt, cur().start);
        advance();
        if (no_arg_follows()) {
            stmt->children.push_back(nullptr);
        } else {
            stmt->children.push_back(parse_expression(false));
        }
        terminate_statement();
        stmt->end = prev_end();
        return stmt;
    }

    NodePtr parse_break_continue() {
        NodeKind kind = cur().is("break") ? NodeKind::BreakStmt : NodeKind::ContinueStmt;
        auto stmt = node(kind, cur().start);
        advance();
        if (!no_arg_follows() && cur().kind == TokenKind::Identifier &&
            !detail::is_reserved(cur().text)) {
            stmt->children.push_back(parse_identifier());
        } else {
            stmt->children.push_back(nullptr);
        }
        terminate_statement();
        stmt->end = prev_end();
        return stmt;
    }

    NodePtr parse_throw() {
        auto stmt = node(NodeKind::ThrowStmt, cur().start);
        advance();
        stmt->children.push_back(parse_expression(false));
        terminate_statement();
        stmt->end = prev_end();
        return stmt;
    }

    NodePtr parse_try() {
        auto stmt = node(NodeKind::TryStmt, cur().start);
        advance();
        stmt->children.push_back(parse_block());
        if (eat_keyword("catch")) {
            auto clause = node(NodeKind::CatchClause, tokens_[cursor_ - 1].start);
            if (eat_punct("(")) {
                clause->children.push_back(parse_binding_target());
                expect(")", "after catch parameter");
            } else {
                clause->children.push_back(nullptr);
            }
            clause->children.push_back(parse_block());
            clause->end = prev_end();
            stmt->children.push_back(std::move(clause));
        } else {
            stmt->children.push_back(nullptr);
        }
        if (eat_keyword("finally")) {
            stmt->children.push_back(parse_block());
        } else {
            stmt->children.push_back(nullptr);
        }
        if (!stmt->children[1] && !stmt->children[2]) fail("expected 'catch' or 'finally'");
        stmt->end = prev_end();
        return stmt;
    }

    NodePtr parse_function(NodeKind kind) {
        auto fn = node(kind, cur().start);
        advance(); // 'function'
        if (cur().kind == TokenKind::Identifier && !detail::is_reserved(cur().text)) {
            fn->children.push_back(parse_identifier());
        } else {
            if (kind == NodeKind::FunctionDecl) fail("function declaration requires a name");
            fn->children.push_back(nullptr);
        }
        fn->children.push_back(parse_param_list());
        fn->children.push_back(parse_block());
        fn->end = prev_end();
        return fn;
    }

    NodePtr parse_param_list() {
        auto params = node(NodeKind::ParamList, cur().start);
        expect("(", "to open parameter list");
        while (!cur().is_punct(")")) {
            if (at_eof()) fail("unterminated parameter list");
            params->children.push_back(parse_param());
            if (!eat_punct(",")) break;
        }
        expect(")", "to close parameter list");
        params->end = prev_end();
        return params;
    }

    NodePtr parse_param() {
        if (cur().is_punct("...")) {
            auto rest = node(NodeKind::SpreadElement, cur().start);
            advance();
            rest->children.push_back(parse_binding_target());
            rest->end = rest->children[0]->end;
            return rest;
        }
        auto target = parse_binding_target();
        if (cur().is_punct("=")) {
            auto dflt = node(NodeKind::AssignExpr, target->start);
            dflt->op = cur().text;
            advance();
            dflt->children.push_back(std::move(target));
            dflt->children.push_back(parse_assignment(false));
            dflt->end = dflt->children[1]->end;
            return dflt;
        }
        return target;
    }

    // ---- expressions ----

    NodePtr parse_expression(bool no_in) {
        auto first = parse_assignment(no_in);
        if (!cur().is_punct(",")) return first;
        auto seq = node(NodeKind::SequenceExpr, first->start);
        seq->children.push_back(std::move(first));
        while (eat_punct(",")) {
            seq->children.push_back(parse_assignment(no_in));
        }
        seq->end = seq->children.back()->end;
        return seq;
    }

    bool is_assign_op(std::string_view op) const {
        static constexpr std::array<std::string_view, 13> ops = {
            "=",  "+=", "-=",  "*=",  "/=",  "%=", "**=",
            "<<=", ">>=", ">>>=", "&=", "|=", "^=",
        };
        for (auto o : ops)
            if (o == op) return true;
        return false;
    }

    NodePtr parse_assignment(bool no_in) {
        if (NodePtr arrow = try_parse_arrow()) return arrow;
        auto lhs = parse_conditional(no_in);
        const Token& t = cur();
        if (t.kind == TokenKind::Punct &&
            (is_assign_op(t.text) || t.text == "&&=" || t.text == "||=" || t.text == "?\?=")) {
            auto assign = node(NodeKind::AssignExpr, lhs->start);
            assign->op = t.text;
            advance();
            assign->children.push_back(std::move(lhs));
            assign->children.push_back(parse_assignment(no_in));
            assign->end = assign->children[1]->end;
            return assign;
        }
        return lhs;
    }

    // Arrow functions need lookahead: `x => e` and `(a, b = 1) => e`.
    NodePtr try_parse_arrow() {
        if (cur().kind == TokenKind::Identifier && !detail::is_reserved(cur().text) &&
            ahead().is_punct("=>")) {
            auto arrow = node(NodeKind::ArrowFunction, cur().start);
            auto params = node(NodeKind::ParamList, cur().start);
            params->children.push_back(parse_identifier());
            params->end = prev_end();
            arrow->children.push_back(std::move(params));
            advance(); // '=>'
            arrow->children.push_back(parse_arrow_body());
            arrow->end = prev_end();
            return arrow;
        }
        if (cur().is_punct("(") && paren_group_is_arrow_head()) {
            auto arrow = node(NodeKind::ArrowFunction, cur().start);
            arrow->children.push_back(parse_param_list());
            expect("=>", "after arrow parameters");
            arrow->children.push_back(parse_arrow_body());
            arrow->end = prev_end();
            return arrow;
        }
        return nullptr;
    }

    bool paren_group_is_arrow_head() const {
        std::size_t i = cursor_;
        int depth = 0;
        while (i < tokens_.size() && tokens_[i].kind != TokenKind::Eof) {
            const Token& t = tokens_[i];
            if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) ++depth;
            if (t.is_punct(")") || t.is_punct("]") || t.is_punct("}")) {
                --depth;
                if (depth == 0) return i + 1 < tokens_.size() && tokens_[i + 1].is_punct("=>");
            }
            ++i;
        }
        return false;
    }

    NodePtr parse_arrow_body() {
        if (cur().is_punct("{")) return parse_block();
        return parse_assignment(false);
    }

    NodePtr parse_conditional(bool no_in) {
        auto test = parse_binary(0, no_in);
        if (!cur().is_punct("?")) return test;
        auto cond = node(NodeKind::ConditionalExpr, test->start);
        advance();
        cond->children.push_back(std::move(test));
        cond->children.push_back(parse_assignment(false));
        expect(":", "in conditional expression");
        cond->children.push_back(parse_assignment(no_in));
        cond->end = cond->children[2]->end;
        return cond;
    }

    // Binary operator precedence, lowest first.
    int binary_precedence(const Token& t, bool no_in) const {
        if (t.kind == TokenKind::Identifier) {
            if (t.text == "in") return no_in ? -1 : 7;
            if (t.text == "instanceof") return 7;
            return -1;
        }
        if (t.kind != TokenKind::Punct) return -1;
        std::string_view s = t.text;
        if (s == "??") return 1;
        if (s == "||") return 2;
        if (s == "&&") return 3;
        if (s == "|") return 4;
        if (s == "^") return 5;
        if (s == "&") return 6;
        if (s == "==" || s == "!=" || s == "===" || s == "!==") return 7;
        if (s == "<" || s == ">" || s == "<=" || s == ">=") return 7;
        if (s == "<<" || s == ">>" || s == ">>>") return 8;
        if (s == "+" || s == "-") return 9;
        if (s == "*" || s == "/" || s == "%") return 10;
        if (s == "**") return 11;
        return -1;
    }

    NodePtr parse_binary(int min_prec, bool no_in) {
        auto lhs = parse_unary();
        while (true) {
            const Token& t = cur();
            int prec = binary_precedence(t, no_in);
            if (prec < 0 || prec < min_prec) return lhs;
            bool logical = t.is_punct("&&") || t.is_punct("||") || t.is_punct("??");
            auto bin = node(logical ? NodeKind::LogicalExpr : NodeKind::BinaryExpr, lhs->start);
            bin->op = t.text;
            advance();
            // '**' is right-associative; everything else is left-associative
            bin->children.push_back(std::move(lhs));
            bin->children.push_back(parse_binary(t.is_punct("**") ? prec : prec + 1, no_in));
            bin->end = bin->children[1]->end;
            lhs = std::move(bin);
        }
    }

    NodePtr parse_unary() {
        const Token& t = cur();
        if (t.is_punct("!") || t.is_punct("~") || t.is_punct("+") || t.is_punct("-") ||
            t.is_ident("typeof") || t.is_ident("void") || t.is_ident("delete") ||
            t.is_ident("await")) {
            auto un = node(NodeKind::UnaryExpr, t.start);
            un->op = t.text;
            advance();
            un->children.push_back(parse_unary());
            un->end = un->children[0]->end;
            return un;
        }
        if (t.is_punct("++") || t.is_punct("--")) {
            auto upd = node(NodeKind::UpdateExpr, t.start);
            upd->op = t.text;
            advance();
            upd->children.push_back(parse_unary());
            upd->end = upd->children[0]->end;
            return upd;
        }
        return parse_postfix();
    }

    NodePtr parse_postfix() {
        auto expr = parse_call_member(true);
        const Token& t = cur();
        if ((t.is_punct("++") || t.is_punct("--")) && !t.newline_before) {
            auto upd = node(NodeKind::UpdateExpr, expr->start);
            upd->op = t.text;
            advance();
            upd->children.push_back(std::move(expr));
            upd->end = prev_end();
            return upd;
        }
        return expr;
    }

    NodePtr parse_new() {
        auto nw = node(NodeKind::NewExpr, cur().start);
        advance(); // 'new'
        nw->children.push_back(parse_call_member(false));
        if (cur().is_punct("(")) {
            parse_arguments(*nw);
        }
        nw->end = prev_end();
        return nw;
    }

    NodePtr parse_call_member(bool allow_call) {
        NodePtr expr = at_keyword("new") ? parse_new() : parse_primary();
        while (true) {
            const Token& t = cur();
            if (t.is_punct(".") || (t.is_punct("?.") && !ahead().is_punct("("))) {
                auto member = node(NodeKind::MemberExpr, expr->start);
                member->op = t.text;
                advance();
                member->children.push_back(std::move(expr));
                if (cur().is_punct("[")) { // a?.[i]
                    advance();
                    member->children.push_back(parse_expression(false));
                    expect("]", "to close computed member");
                    member->op = "[]";
                } else {
                    if (cur().kind != TokenKind::Identifier) fail("expected property name");
                    member->children.push_back(parse_identifier_allow_reserved());
                }
                member->end = prev_end();
                expr = std::move(member);
            } else if (t.is_punct("[")) {
                auto member = node(NodeKind::MemberExpr, expr->start);
                member->op = "[]";
                advance();
                member->children.push_back(std::move(expr));
                member->children.push_back(parse_expression(false));
                expect("]", "to close computed member");
                member->end = prev_end();
                expr = std::move(member);
            } else if (allow_call && (t.is_punct("(") || (t.is_punct("?.") && ahead().is_punct("(")))) {
                if (t.is_punct("?.")) advance();
                auto call = node(NodeKind::CallExpr, expr->start);
                call->children.push_back(std::move(expr));
                parse_arguments(*call);
                call->end = prev_end();
                expr = std::move(call);
            } else {
                break;
            }
        }
        return expr;
    }

    void parse_arguments(Node& call) {
        expect("(", "to open argument list");
        std::size_t first_arg_tok = cursor_;
        while (!cur().is_punct(")")) {
            if (at_eof()) fail("unterminated argument list");
            if (cur().is_punct("...")) {
                auto spread = node(NodeKind::SpreadElement, cur().start);
                advance();
                spread->children.push_back(parse_assignment(false));
                spread->end = prev_end();
                call.children.push_back(std::move(spread));
            } else {
                call.children.push_back(parse_assignment(false));
            }
            if (!eat_punct(",")) break;
        }
        if (cursor_ > first_arg_tok) {
            call.has_inner = true;
            call.inner_start = tokens_[first_arg_tok].start;
            call.inner_end = tokens_[cursor_ - 1].end;
        }
        expect(")", "to close argument list");
    }

    NodePtr parse_identifier() {
        if (cur().kind != TokenKind::Identifier) fail("expected identifier");
        if (detail::is_reserved(cur().text)) fail("unexpected keyword");
        return parse_identifier_allow_reserved();
    }

    NodePtr parse_identifier_allow_reserved() {
        auto id = node(NodeKind::Identifier, cur().start);
        id->op = cur().text;
        advance();
        id->end = prev_end();
        return id;
    }

    NodePtr parse_primary() {
        const Token& t = cur();
        switch (t.kind) {
        case TokenKind::Number: {
            auto n = node(NodeKind::NumberLit, t.start);
            advance();
            n->end = prev_end();
            return n;
        }
        case TokenKind::String: {
            auto n = node(NodeKind::StringLit, t.start);
            advance();
            n->end = prev_end();
            return n;
        }
        case TokenKind::Template: {
            auto n = node(NodeKind::TemplateLit, t.start);
            advance();
            n->end = prev_end();
            return n;
        }
        case TokenKind::Regex: {
            auto n = node(NodeKind::RegexLit, t.start);
            advance();
            n->end = prev_end();
            return n;
        }
        case TokenKind::Identifier: {
            if (t.is("true") || t.is("false")) {
                auto n = node(NodeKind::BoolLit, t.start);
                advance();
                n->end = prev_end();
                return n;
            }
            if (t.is("null")) {
                auto n = node(NodeKind::NullLit, t.start);
                advance();
                n->end = prev_end();
                return n;
            }
            if (t.is("this")) {
                auto n = node(NodeKind::ThisExpr, t.start);
                advance();
                n->end = prev_end();
                return n;
            }
            if (t.is("function")) return parse_function(NodeKind::FunctionExpr);
            if (t.is("new")) return parse_new();
            if (detail::is_reserved(t.text)) fail("unexpected keyword");
            return parse_identifier_allow_reserved();
        }
        case TokenKind::Punct: {
            if (t.is("(")) {
                advance();
                auto inner = parse_expression(false);
                expect(")", "to close parenthesized expression");
                // widen to include the parens so enclosing-node spans stay exact
                inner->start = t.start;
                inner->end = prev_end();
                return inner;
            }
            if (t.is("[")) return parse_array_literal();
            if (t.is("{")) return parse_object_literal();
            break;
        }
        default:
            break;
        }
        fail("expected expression");
    }

    NodePtr parse_array_literal() {
        auto arr = node(NodeKind::ArrayLit, cur().start);
        advance(); // '['
        while (!cur().is_punct("]")) {
            if (at_eof()) fail("unterminated array literal");
            if (cur().is_punct(",")) { // elision
                arr->children.push_back(nullptr);
                advance();
                continue;
            }
            if (cur().is_punct("...")) {
                auto spread = node(NodeKind::SpreadElement, cur().start);
                advance();
                spread->children.push_back(parse_assignment(false));
                spread->end = prev_end();
                arr->children.push_back(std::move(spread));
            } else {
                arr->children.push_back(parse_assignment(false));
            }
            if (!eat_punct(",")) break;
        }
        expect("]", "to close array literal");
        arr->end = prev_end();
        return arr;
    }

    NodePtr parse_object_literal() {
        auto obj = node(NodeKind::ObjectLit, cur().start);
        advance(); // '{'
        while (!cur().is_punct("}")) {
            if (at_eof()) fail("unterminated object literal");
            obj->children.push_back(parse_property());
            if (!eat_punct(",")) break;
        }
        expect("}", "to close object literal");
        obj->end = prev_end();
        return obj;
    }

    NodePtr parse_property() {
        auto prop = node(NodeKind::Property, cur().start);
        if (cur().is_punct("...")) {
            advance();
            prop->children.push_back(parse_assignment(false));
            prop->children.push_back(nullptr);
            prop->end = prev_end();
            return prop;
        }
        // key: identifier, string, number, or computed
        NodePtr key;
        if (cur().is_punct("[")) {
            advance();
            key = parse_assignment(false);
            expect("]", "to close computed key");
        } else if (cur().kind == TokenKind::String || cur().kind == TokenKind::Number) {
            key = parse_primary();
        } else if (cur().kind == TokenKind::Identifier) {
            key = parse_identifier_allow_reserved();
        } else {
            fail("expected property key");
        }
        if (cur().is_punct("(")) { // method shorthand
            auto fn = node(NodeKind::FunctionExpr, key->start);
            fn->children.push_back(nullptr);
            fn->children.push_back(parse_param_list());
            fn->children.push_back(parse_block());
            fn->end = prev_end();
            prop->children.push_back(std::move(key));
            prop->children.push_back(std::move(fn));
        } else if (eat_punct(":")) {
            prop->children.push_back(std::move(key));
            prop->children.push_back(parse_assignment(false));
        } else if (cur().is_punct("=")) { // shorthand with default (pattern position)
            auto dflt = node(NodeKind::AssignExpr, key->start);
            dflt->op = cur().text;
            advance();
            dflt->children.push_back(std::move(key));
            dflt->children.push_back(parse_assignment(false));
            dflt->end = prev_end();
            prop->children.push_back(std::move(dflt));
            prop->children.push_back(nullptr);
        } else { // shorthand
            prop->children.push_back(std::move(key));
            prop->children.push_back(nullptr);
        }
        prop->end = prev_end();
        return prop;
    }
};

} // namespace mutforge::cscript
