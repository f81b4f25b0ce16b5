#include "cgs/syntax/parser.hpp"

#include <optional>
#include <unordered_set>

#include "cgs/syntax/lexer.hpp"

namespace cgs::syntax {

namespace {

const std::unordered_set<std::string> kModifiers = {"public",       "private", "protected",
                                                    "static",       "final",   "abstract",
                                                    "synchronized", "native",  "strictfp"};

const std::unordered_set<std::string> kPrimitiveTypes = {
    "void", "boolean", "byte", "char", "short", "int", "long", "float", "double"};

class Parser {
public:
    explicit Parser(const std::vector<LexToken>& tokens) : toks_(tokens) {}

    Snippet parse() {
        Snippet snip;
        while (at_keyword("import")) snip.imports.push_back(parse_import());
        snip.method = parse_method();
        if (pos_ < toks_.size()) fail("end of input");
        return snip;
    }

private:
    const std::vector<LexToken>& toks_;
    size_t pos_ = 0;

    // --- token helpers ---

    const LexToken* peek(size_t off = 0) const {
        return pos_ + off < toks_.size() ? &toks_[pos_ + off] : nullptr;
    }
    const LexToken& advance() { return toks_[pos_++]; }

    bool at(TokenKind kind, const std::string& text) const {
        const LexToken* t = peek();
        return t && t->kind == kind && t->text == text;
    }
    bool at_keyword(const std::string& kw) const { return at(TokenKind::Keyword, kw); }
    bool at_op(const std::string& op) const { return at(TokenKind::Operator, op); }
    bool at_punct(const std::string& p) const { return at(TokenKind::Punctuation, p); }
    bool at_identifier() const {
        const LexToken* t = peek();
        return t && t->kind == TokenKind::Identifier;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        const LexToken* t = peek();
        if (t) throw ParseError(t->line, t->column, expected, t->text);
        int line = 1, col = 1;
        if (!toks_.empty()) {
            line = toks_.back().line;
            col = toks_.back().column + static_cast<int>(toks_.back().text.size());
        }
        throw ParseError(line, col, expected, "");
    }

    void expect_punct(const std::string& p) {
        if (!at_punct(p)) fail("'" + p + "'");
        advance();
    }
    void expect_op(const std::string& op) {
        if (!at_op(op)) fail("'" + op + "'");
        advance();
    }
    std::string expect_identifier(const std::string& what) {
        if (!at_identifier()) fail(what);
        return advance().text;
    }

    // --- declarations ---

    std::string parse_import() {
        advance();  // import
        if (at_keyword("static")) fail("qualified name (static imports unsupported)");
        std::string qualified = expect_identifier("qualified name");
        while (at_punct(".")) {
            advance();
            if (at_op("*")) fail("identifier (wildcard imports unsupported)");
            qualified += "." + expect_identifier("identifier");
        }
        expect_punct(";");
        return qualified;
    }

    MethodDecl parse_method() {
        while (true) {
            const LexToken* t = peek();
            if (t && t->kind == TokenKind::Keyword && kModifiers.count(t->text)) {
                advance();
                continue;
            }
            break;
        }
        if (at_punct("@")) fail("method declaration (annotations unsupported)");
        MethodDecl m;
        auto type = try_parse_type();
        if (!type) fail("return type");
        m.return_type = *type;
        m.name = expect_identifier("method name");
        expect_punct("(");
        std::unordered_set<std::string> seen;
        while (!at_punct(")")) {
            if (!m.params.empty()) expect_punct(",");
            if (at_keyword("final")) advance();
            auto ptype = try_parse_type();
            if (!ptype) fail("parameter type");
            std::string pname = expect_identifier("parameter name");
            if (!seen.insert(pname).second) fail("distinct parameter name");
            m.params.emplace_back(*ptype, pname);
        }
        expect_punct(")");
        if (at_keyword("throws")) {
            advance();
            expect_identifier("exception type");
            while (at_punct(",")) {
                advance();
                expect_identifier("exception type");
            }
        }
        m.body = parse_block();
        return m;
    }

    // Type = primitive | Identifier [generic args] ['[' ']']*
    // Generic arguments are skipped; the raw simple name is returned.
    // Returns nullopt (position restored) when the tokens are not a type.
    std::optional<std::string> try_parse_type() {
        size_t save = pos_;
        const LexToken* t = peek();
        if (!t) return std::nullopt;
        std::string name;
        if (t->kind == TokenKind::Keyword && kPrimitiveTypes.count(t->text)) {
            name = t->text;
            advance();
        } else if (t->kind == TokenKind::Identifier) {
            name = t->text;
            advance();
        } else {
            return std::nullopt;
        }
        if (at_op("<")) {
            if (!skip_generic_args()) {
                pos_ = save;
                return std::nullopt;
            }
        }
        while (at_punct("[") && peek(1) && peek(1)->kind == TokenKind::Punctuation &&
               peek(1)->text == "]") {
            advance();
            advance();
        }
        return name;
    }

    // Consume a balanced <...> run containing only tokens plausible in a
    // type-argument list. Anything else aborts so `a < b` stays an expression.
    bool skip_generic_args() {
        int depth = 0;
        while (true) {
            const LexToken* t = peek();
            if (!t) return false;
            if (t->kind == TokenKind::Operator) {
                if (t->text == "<")
                    depth += 1;
                else if (t->text == ">")
                    depth -= 1;
                else if (t->text == ">>")
                    depth -= 2;
                else if (t->text == ">>>")
                    depth -= 3;
                else if (t->text != "?")
                    return false;
            } else if (t->kind == TokenKind::Identifier ||
                       (t->kind == TokenKind::Keyword &&
                        (kPrimitiveTypes.count(t->text) || t->text == "extends" ||
                         t->text == "super")) ||
                       (t->kind == TokenKind::Punctuation &&
                        (t->text == "," || t->text == "." || t->text == "[" || t->text == "]"))) {
                // fine
            } else {
                return false;
            }
            advance();
            if (depth <= 0) return depth == 0;
        }
    }

    // --- statements ---

    Block parse_block() {
        expect_punct("{");
        Block b;
        while (!at_punct("}")) {
            if (!peek()) fail("'}'");
            b.statements.push_back(parse_statement());
        }
        expect_punct("}");
        return b;
    }

    // An if/while/for body may be a block or a single statement.
    Block parse_body() {
        if (at_punct("{")) return parse_block();
        Block b;
        b.statements.push_back(parse_statement());
        return b;
    }

    StmtPtr make_stmt(Stmt&& s) { return std::make_unique<Stmt>(std::move(s)); }

    StmtPtr parse_statement() {
        if (at_keyword("return")) {
            advance();
            ReturnStmt r;
            if (!at_punct(";")) r.value = parse_expr();
            expect_punct(";");
            return make_stmt(Stmt{std::move(r)});
        }
        if (at_keyword("if")) {
            advance();
            IfStmt s;
            expect_punct("(");
            s.cond = parse_expr();
            expect_punct(")");
            s.then_block = parse_body();
            if (at_keyword("else")) {
                advance();
                s.else_block = parse_body();
            }
            return make_stmt(Stmt{std::move(s)});
        }
        if (at_keyword("while")) {
            advance();
            WhileStmt s;
            expect_punct("(");
            s.cond = parse_expr();
            expect_punct(")");
            s.body = parse_body();
            return make_stmt(Stmt{std::move(s)});
        }
        if (at_keyword("for")) {
            advance();
            ForStmt s;
            expect_punct("(");
            if (!at_punct(";")) s.init = parse_simple_statement_no_semi();
            expect_punct(";");
            if (!at_punct(";")) s.cond = parse_expr();
            expect_punct(";");
            if (!at_punct(")")) s.update = parse_simple_statement_no_semi();
            expect_punct(")");
            s.body = parse_body();
            return make_stmt(Stmt{std::move(s)});
        }
        if (at_keyword("try")) {
            advance();
            TryStmt s;
            s.body = parse_block();
            if (at_keyword("catch")) {
                advance();
                CatchClause cc;
                expect_punct("(");
                auto type = try_parse_type();
                if (!type) fail("exception type");
                cc.type_name = *type;
                cc.var_name = expect_identifier("catch variable");
                expect_punct(")");
                cc.body = parse_block();
                s.catch_clause = std::move(cc);
            }
            return make_stmt(Stmt{std::move(s)});
        }
        const LexToken* t = peek();
        if (t && t->kind == TokenKind::Keyword && !kPrimitiveTypes.count(t->text))
            fail("statement");
        StmtPtr s = parse_simple_statement_no_semi();
        expect_punct(";");
        return s;
    }

    // VarDecl, Assign, or ExprStmt without the trailing semicolon
    // (shared between plain statements and for-headers).
    StmtPtr parse_simple_statement_no_semi() {
        // Variable declaration: Type identifier [= expr]
        size_t save = pos_;
        if (auto type = try_parse_type()) {
            if (at_identifier()) {
                VarDeclStmt d;
                d.type_name = *type;
                d.var_name = advance().text;
                if (at_op("=")) {
                    advance();
                    d.init = parse_expr();
                }
                return make_stmt(Stmt{std::move(d)});
            }
            pos_ = save;
        }
        // Assignment to a simple name: identifier = expr
        if (at_identifier() && peek(1) && peek(1)->kind == TokenKind::Operator &&
            peek(1)->text == "=") {
            AssignStmt a;
            a.target_name = advance().text;
            advance();  // =
            a.rhs = parse_expr();
            return make_stmt(Stmt{std::move(a)});
        }
        ExprStmt e;
        e.expr = parse_expr();
        return make_stmt(Stmt{std::move(e)});
    }

    // --- expressions ---

    ExprPtr make_expr(Expr&& e) { return std::make_unique<Expr>(std::move(e)); }

    int binary_precedence(const std::string& op) const {
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "|") return 3;
        if (op == "^") return 4;
        if (op == "&") return 5;
        if (op == "==" || op == "!=") return 6;
        if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
        if (op == "<<" || op == ">>" || op == ">>>") return 8;
        if (op == "+" || op == "-") return 9;
        if (op == "*" || op == "/" || op == "%") return 10;
        return 0;
    }

    ExprPtr parse_expr() { return parse_binary(1); }

    ExprPtr parse_binary(int min_prec) {
        ExprPtr lhs = parse_unary();
        while (true) {
            const LexToken* t = peek();
            if (!t || t->kind != TokenKind::Operator) break;
            int prec = binary_precedence(t->text);
            if (prec < min_prec || prec == 0) break;
            std::string op = advance().text;
            ExprPtr rhs = parse_binary(prec + 1);
            BinaryExpr b{op, std::move(lhs), std::move(rhs)};
            lhs = make_expr(Expr{std::move(b)});
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at_op("!") || at_op("-") || at_op("+") || at_op("~") || at_op("++") || at_op("--")) {
            std::string op = advance().text;
            UnaryExpr u{op, parse_unary()};
            return make_expr(Expr{std::move(u)});
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (true) {
            if (at_punct(".")) {
                advance();
                std::string member = expect_identifier("member name");
                if (at_punct("(")) {
                    CallExpr call;
                    call.receiver = std::move(e);
                    call.callee = member;
                    call.args = parse_args();
                    e = make_expr(Expr{std::move(call)});
                } else {
                    FieldAccessExpr fa{std::move(e), member};
                    e = make_expr(Expr{std::move(fa)});
                }
                continue;
            }
            if (at_punct("(") && std::holds_alternative<NameExpr>(e->node)) {
                CallExpr call;
                call.callee = std::get<NameExpr>(e->node).id;
                call.args = parse_args();
                e = make_expr(Expr{std::move(call)});
                continue;
            }
            break;
        }
        return e;
    }

    std::vector<ExprPtr> parse_args() {
        expect_punct("(");
        std::vector<ExprPtr> args;
        while (!at_punct(")")) {
            if (!args.empty()) expect_punct(",");
            args.push_back(parse_expr());
        }
        expect_punct(")");
        return args;
    }

    ExprPtr parse_primary() {
        const LexToken* t = peek();
        if (!t) fail("expression");
        if (t->kind == TokenKind::Literal) {
            advance();
            return make_expr(Expr{LiteralExpr{t->text}});
        }
        if (t->kind == TokenKind::Identifier) {
            advance();
            return make_expr(Expr{NameExpr{t->text}});
        }
        if (t->kind == TokenKind::Keyword && (t->text == "this" || t->text == "super")) {
            advance();
            return make_expr(Expr{NameExpr{t->text}});
        }
        if (at_keyword("new")) {
            advance();
            auto type = try_parse_type();
            if (!type) fail("type name");
            NewExpr n;
            n.type_name = *type;
            n.args = parse_args();
            return make_expr(Expr{std::move(n)});
        }
        if (at_punct("(")) {
            advance();
            ExprPtr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        fail("expression");
    }
};

}  // namespace

Snippet parse_snippet(const std::vector<LexToken>& tokens) { return Parser(tokens).parse(); }

Snippet parse_snippet(const std::string& source) { return parse_snippet(lex(source)); }

}  // namespace cgs::syntax
