#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cgs::syntax {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct NameExpr {
    std::string id;
};
struct LiteralExpr {
    std::string text;
};
struct CallExpr {
    ExprPtr receiver;  // null for plain calls
    std::string callee;
    std::vector<ExprPtr> args;
};
struct NewExpr {
    std::string type_name;
    std::vector<ExprPtr> args;
};
struct FieldAccessExpr {
    ExprPtr receiver;
    std::string field;
};
struct BinaryExpr {
    std::string op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct UnaryExpr {
    std::string op;
    ExprPtr operand;
};

struct Expr {
    std::variant<NameExpr, LiteralExpr, CallExpr, NewExpr, FieldAccessExpr, BinaryExpr, UnaryExpr>
        node;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Block {
    std::vector<StmtPtr> statements;
};

struct VarDeclStmt {
    std::string type_name;
    std::string var_name;
    ExprPtr init;  // may be null
};
struct AssignStmt {
    std::string target_name;
    ExprPtr rhs;
};
struct ExprStmt {
    ExprPtr expr;
};
struct ReturnStmt {
    ExprPtr value;  // may be null
};
struct IfStmt {
    ExprPtr cond;
    Block then_block;
    std::optional<Block> else_block;
};
struct WhileStmt {
    ExprPtr cond;
    Block body;
};
struct ForStmt {
    StmtPtr init;    // may be null
    ExprPtr cond;    // may be null
    StmtPtr update;  // may be null
    Block body;
};
struct CatchClause {
    std::string type_name;
    std::string var_name;
    Block body;
};
struct TryStmt {
    Block body;
    std::optional<CatchClause> catch_clause;
};

struct Stmt {
    std::variant<VarDeclStmt, AssignStmt, ExprStmt, ReturnStmt, IfStmt, WhileStmt, ForStmt, TryStmt>
        node;
};

struct MethodDecl {
    std::string name;
    std::string return_type;
    std::vector<std::pair<std::string, std::string>> params;  // (type_name, param_name)
    Block body;
};

struct Snippet {
    std::vector<std::string> imports;  // qualified names, e.g. "java.util.List"
    MethodDecl method;
};

// Last segment of a qualified name: "java.util.List" -> "List".
inline std::string import_simple_name(const std::string& qualified) {
    auto pos = qualified.rfind('.');
    return pos == std::string::npos ? qualified : qualified.substr(pos + 1);
}

}  // namespace cgs::syntax
