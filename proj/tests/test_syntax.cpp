#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cgs/syntax/lexer.hpp"
#include "cgs/syntax/parser.hpp"

using namespace cgs::syntax;

TEST_CASE("lex basic statement") {
    auto toks = lex("int x = 1;");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0].kind == TokenKind::Keyword);
    CHECK(toks[0].text == "int");
    CHECK(toks[1].kind == TokenKind::Identifier);
    CHECK(toks[1].text == "x");
    CHECK(toks[2].kind == TokenKind::Operator);
    CHECK(toks[2].text == "=");
    CHECK(toks[3].kind == TokenKind::Literal);
    CHECK(toks[3].text == "1");
    CHECK(toks[4].kind == TokenKind::Punctuation);
    CHECK(toks[4].text == ";");
}

TEST_CASE("lex empty input") { CHECK(lex("").empty()); }

TEST_CASE("lex drops comments") {
    auto toks = lex("a.b(c) // note");
    REQUIRE(toks.size() == 6);
    CHECK(toks[5].text == ")");
    CHECK(lex("/* block */ x").size() == 1);
}

TEST_CASE("lex positions are 1-based and nondecreasing") {
    auto toks = lex("int a;\n  int b;");
    REQUIRE(toks.size() == 6);
    CHECK(toks[0].line == 1);
    CHECK(toks[0].column == 1);
    CHECK(toks[3].line == 2);
    CHECK(toks[3].column == 3);
    for (size_t i = 1; i < toks.size(); ++i) {
        bool ordered = toks[i].line > toks[i - 1].line ||
                       (toks[i].line == toks[i - 1].line && toks[i].column > toks[i - 1].column);
        CHECK(ordered);
    }
}

TEST_CASE("lex reproduces non-whitespace characters") {
    std::string src = "int f(List xs) { return xs.size(); } // tail";
    std::string joined;
    for (const auto& t : lex(src)) joined += t.text;
    std::string expected;
    bool in_comment = false;
    for (size_t i = 0; i < src.size(); ++i) {
        if (!in_comment && src[i] == '/' && i + 1 < src.size() && src[i + 1] == '/') in_comment = true;
        if (!in_comment && !std::isspace(static_cast<unsigned char>(src[i]))) expected += src[i];
    }
    CHECK(joined == expected);
}

TEST_CASE("lex errors") {
    CHECK_THROWS_AS(lex("\"unterminated"), LexError);
    CHECK_THROWS_AS(lex("/* open"), LexError);
    CHECK_THROWS_AS(lex("int x = #;"), LexError);
    try {
        lex("x\n  \"oops");
    } catch (const LexError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 3);
    }
}

TEST_CASE("lex literals") {
    CHECK(lex("1.5f")[0].text == "1.5f");
    CHECK(lex("0x1F")[0].text == "0x1F");
    CHECK(lex("\"a b\\\"c\"")[0].kind == TokenKind::Literal);
    CHECK(lex("true")[0].kind == TokenKind::Literal);
    CHECK(lex("null")[0].kind == TokenKind::Literal);
}

TEST_CASE("parse minimal method") {
    auto snip = parse_snippet("public int f() { return 1; }");
    CHECK(snip.imports.empty());
    CHECK(snip.method.name == "f");
    CHECK(snip.method.return_type == "int");
    CHECK(snip.method.params.empty());
    REQUIRE(snip.method.body.statements.size() == 1);
    const auto& ret = std::get<ReturnStmt>(snip.method.body.statements[0]->node);
    CHECK(std::get<LiteralExpr>(ret.value->node).text == "1");
}

TEST_CASE("parse imports and params") {
    auto snip = parse_snippet("import java.util.List; public int g(List xs) { return 0; }");
    REQUIRE(snip.imports.size() == 1);
    CHECK(snip.imports[0] == "java.util.List");
    CHECK(import_simple_name(snip.imports[0]) == "List");
    REQUIRE(snip.method.params.size() == 1);
    CHECK(snip.method.params[0].first == "List");
    CHECK(snip.method.params[0].second == "xs");
}

TEST_CASE("parse strips generics and modifiers") {
    auto snip = parse_snippet(
        "import java.util.Map; public static final Map<String, List<Integer>> h(Map<String, "
        "Integer> m) { return m; }");
    CHECK(snip.method.return_type == "Map");
    CHECK(snip.method.params[0].first == "Map");
}

TEST_CASE("parse rejects unsupported constructs") {
    CHECK_THROWS_AS(parse_snippet("class A {}"), ParseError);
    CHECK_THROWS_AS(parse_snippet("int f() { return 1; } int g() { return 2; }"), ParseError);
    CHECK_THROWS_AS(parse_snippet("@Override int f() { return 1; }"), ParseError);
    CHECK_THROWS_AS(parse_snippet("int f() { Runnable r = () -> x; }"), ParseError);
    CHECK_THROWS_AS(parse_snippet("import java.util.*; int f() { return 1; }"), ParseError);
}

TEST_CASE("parse error carries a real token position") {
    auto toks = lex("int f() { return ; + }");
    try {
        parse_snippet(toks);
        CHECK(false);
    } catch (const ParseError& e) {
        bool matches = false;
        for (const auto& t : toks)
            if (t.line == e.line && t.column == e.column) matches = true;
        CHECK(matches);
    }
}

TEST_CASE("parse statements of the subset") {
    auto snip = parse_snippet(
        "import java.io.IOException;\n"
        "public int work(int n) {\n"
        "    int total = 0;\n"
        "    for (int i = 0; i < n; i = i + 1) {\n"
        "        total = total + i;\n"
        "    }\n"
        "    while (total > 100) { total = total - 1; }\n"
        "    if (total == 0) { return 0; } else { total = total + 1; }\n"
        "    try { helper(total); } catch (IOException e) { return -1; }\n"
        "    return total;\n"
        "}\n");
    CHECK(snip.method.body.statements.size() == 6);
}

TEST_CASE("parse call shapes") {
    auto snip = parse_snippet("int f(A a) { int x = a.b.c(d(1), new T(2)); return x; }");
    const auto& decl = std::get<VarDeclStmt>(snip.method.body.statements[0]->node);
    const auto& call = std::get<CallExpr>(decl.init->node);
    CHECK(call.callee == "c");
    REQUIRE(call.args.size() == 2);
    CHECK(std::get<CallExpr>(call.args[0]->node).callee == "d");
    CHECK(std::get<NewExpr>(call.args[1]->node).type_name == "T");
    const auto& fa = std::get<FieldAccessExpr>(call.receiver->node);
    CHECK(fa.field == "b");
    CHECK(std::get<NameExpr>(fa.receiver->node).id == "a");
}

TEST_CASE("comparison is not mistaken for generics") {
    auto snip = parse_snippet("boolean f(int a, int b) { return a < b; }");
    const auto& ret = std::get<ReturnStmt>(snip.method.body.statements[0]->node);
    CHECK(std::get<BinaryExpr>(ret.value->node).op == "<");
}

TEST_CASE("lex and parse are deterministic") {
    std::string src = "import a.b.C; int f(C c) { return c.size(); }";
    auto t1 = lex(src);
    auto t2 = lex(src);
    REQUIRE(t1.size() == t2.size());
    for (size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].text == t2[i].text);
        CHECK(t1[i].kind == t2[i].kind);
    }
    auto s1 = parse_snippet(src);
    auto s2 = parse_snippet(src);
    CHECK(s1.imports == s2.imports);
    CHECK(s1.method.name == s2.method.name);
    CHECK(s1.method.params == s2.method.params);
}
