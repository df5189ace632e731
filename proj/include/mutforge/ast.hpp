#pragma once

#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

namespace mutforge::cscript {

enum class NodeKind {
    Program,
    // statements
    Block,
    VarDecl,
    VarDeclarator,
    EmptyStmt,
    ExprStmt,
    IfStmt,
    SwitchStmt,
    SwitchCase,
    WhileStmt,
    DoWhileStmt,
    ForStmt,
    ForInStmt,
    ForOfStmt,
    ReturnStmt,
    BreakStmt,
    ContinueStmt,
    ThrowStmt,
    TryStmt,
    CatchClause,
    LabeledStmt,
    FunctionDecl,
    // expressions
    Identifier,
    NumberLit,
    StringLit,
    TemplateLit,
    RegexLit,
    BoolLit,
    NullLit,
    ThisExpr,
    ArrayLit,
    ObjectLit,
    Property,
    FunctionExpr,
    ArrowFunction,
    ParamList,
    UnaryExpr,
    UpdateExpr,
    BinaryExpr,
    LogicalExpr,
    AssignExpr,
    ConditionalExpr,
    SequenceExpr,
    CallExpr,
    NewExpr,
    MemberExpr,
    SpreadElement,
};

// Concrete-syntax node. Child slot layout is fixed per kind; optional slots
// hold nullptr. Variadic tails (statement lists, arguments) never contain
// nulls, except ArrayLit which uses null for elisions.
//
//   IfStmt        [cond, then, else|null]
//   SwitchStmt    [discriminant, case...]
//   SwitchCase    [test|null, stmt...]
//   WhileStmt     [cond, body]
//   DoWhileStmt   [body, cond]
//   ForStmt       [init|null, test|null, update|null, body]
//   ForInStmt     [left, right, body]      (ForOfStmt identical)
//   VarDeclarator [target, init|null]
//   ReturnStmt    [arg|null]
//   TryStmt       [block, catch|null, finally|null]
//   CatchClause   [param|null, body]
//   FunctionDecl  [id, params, body]   FunctionExpr [id|null, params, body]
//   ArrowFunction [params, body]
//   CallExpr      [callee, arg...]     NewExpr [callee, arg...]
//   MemberExpr    [object, property]   (op "." | "[]" | "?.")
//   Property      [key, value|null]
struct Node {
    NodeKind kind;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string_view op; // operator / declaration keyword, where meaningful
    std::vector<std::unique_ptr<Node>> children;

    // For loop statements: the region between the header parentheses, from the
    // first to the last token inside. For CallExpr: the argument-list region
    // (absent when the call has no arguments).
    bool has_inner = false;
    std::size_t inner_start = 0;
    std::size_t inner_end = 0;

    Node(NodeKind kind, std::size_t start, std::size_t end) : kind(kind), start(start), end(end) {}

    bool covers(std::size_t a, std::size_t b) const { return start <= a && b <= end; }
};

using NodePtr = std::unique_ptr<Node>;

struct ParseTree {
    NodePtr root;
};

// Smallest single node covering [start, end), or nullptr if none.
inline const Node* find_covering(const Node* node, std::size_t start, std::size_t end) {
    if (node == nullptr || !node->covers(start, end)) return nullptr;
    for (const auto& child : node->children) {
        if (const Node* inner = find_covering(child.get(), start, end)) return inner;
    }
    return node;
}

} // namespace mutforge::cscript
