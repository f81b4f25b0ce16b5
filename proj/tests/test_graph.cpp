#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "cgs/corpus/corpus.hpp"
#include "cgs/graph/concept_graph.hpp"
#include "cgs/syntax/parser.hpp"

using namespace cgs::graph;

namespace {

const char* kFixtureF1 =
    "import java.util.List;\n"
    "public int sumSizes(List items, int offset) {\n"
    "    int total = offset;\n"
    "    int n = items.size();\n"
    "    total = total + n;\n"
    "    return total;\n"
    "}\n";

ConceptGraph graph_of(const std::string& source) {
    return extract_graph(cgs::syntax::parse_snippet(source));
}

bool has_node(const ConceptGraph& g, const std::string& name, NodeKind kind) {
    for (const auto& n : g.nodes)
        if (n.name == name && n.kind == kind) return true;
    return false;
}

int node_id(const ConceptGraph& g, const std::string& name, NodeKind kind) {
    for (size_t i = 0; i < g.nodes.size(); ++i)
        if (g.nodes[i].name == name && g.nodes[i].kind == kind) return static_cast<int>(i);
    return -1;
}

bool has_edge(const ConceptGraph& g, const std::string& src, NodeKind sk, RelationKind rel,
              const std::string& dst, NodeKind dk) {
    Edge want{node_id(g, src, sk), rel, node_id(g, dst, dk)};
    for (const auto& e : g.edges)
        if (e == want) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal method has a single node and no edges") {
    auto g = graph_of("public int f() { return 1; }");
    REQUIRE(g.nodes.size() == 1);
    CHECK(g.nodes[0].name == "f");
    CHECK(g.nodes[0].kind == NodeKind::MethodName);
    CHECK(g.edges.empty());
}

TEST_CASE("fixture F1 identifiers") {
    auto g = graph_of(kFixtureF1);
    REQUIRE(g.nodes.size() == 7);
    CHECK(has_node(g, "sumSizes", NodeKind::MethodName));
    CHECK(has_node(g, "items", NodeKind::Parameter));
    CHECK(has_node(g, "offset", NodeKind::Parameter));
    CHECK(has_node(g, "List", NodeKind::Import));
    CHECK(has_node(g, "total", NodeKind::Variable));
    CHECK(has_node(g, "n", NodeKind::Variable));
    CHECK(has_node(g, "size", NodeKind::Call));
}

TEST_CASE("fixture F1 edges") {
    auto g = graph_of(kFixtureF1);
    REQUIRE(g.edges.size() == 11);
    CHECK(has_edge(g, "sumSizes", NodeKind::MethodName, RelationKind::HasParameter, "items",
                   NodeKind::Parameter));
    CHECK(has_edge(g, "sumSizes", NodeKind::MethodName, RelationKind::HasParameter, "offset",
                   NodeKind::Parameter));
    CHECK(has_edge(g, "sumSizes", NodeKind::MethodName, RelationKind::Defines, "total",
                   NodeKind::Variable));
    CHECK(has_edge(g, "sumSizes", NodeKind::MethodName, RelationKind::Defines, "n",
                   NodeKind::Variable));
    CHECK(has_edge(g, "sumSizes", NodeKind::MethodName, RelationKind::DependsOn, "List",
                   NodeKind::Import));
    CHECK(has_edge(g, "items", NodeKind::Parameter, RelationKind::OfType, "List", NodeKind::Import));
    CHECK(has_edge(g, "sumSizes", NodeKind::MethodName, RelationKind::Invokes, "size",
                   NodeKind::Call));
    CHECK(has_edge(g, "size", NodeKind::Call, RelationKind::Receives, "items", NodeKind::Parameter));
    CHECK(has_edge(g, "n", NodeKind::Variable, RelationKind::Calls, "size", NodeKind::Call));
    CHECK(has_edge(g, "total", NodeKind::Variable, RelationKind::Reads, "offset",
                   NodeKind::Parameter));
    CHECK(has_edge(g, "total", NodeKind::Variable, RelationKind::Reads, "n", NodeKind::Variable));
}

TEST_CASE("unreferenced imports are excluded") {
    auto g = graph_of("import java.io.File; public void g(int a) { int b = a; }");
    CHECK_FALSE(has_node(g, "File", NodeKind::Import));
}

TEST_CASE("single parameter method") {
    auto g = graph_of("int h(int a){ return a; }");
    REQUIRE(g.nodes.size() == 2);
    REQUIRE(g.edges.size() == 1);
    CHECK(has_edge(g, "h", NodeKind::MethodName, RelationKind::HasParameter, "a",
                   NodeKind::Parameter));
}

TEST_CASE("self-loops are dropped") {
    auto g = graph_of("int bump(int d) { int t = 0; t = t + 1; return t; }");
    for (const auto& e : g.edges) CHECK(e.src != e.dst);
    CHECK(g.edges.size() == 2);  // hasParameter, defines
}

TEST_CASE("repeated callees merge into one call node") {
    auto g = graph_of("void go() { ping(); ping(); pong(); }");
    CHECK(g.nodes.size() == 3);
    CHECK(g.edges.size() == 2);
}

TEST_CASE("new expressions contribute call nodes") {
    auto g = graph_of(
        "import java.util.ArrayList; Object make() { ArrayList xs = new ArrayList(); return xs; }");
    CHECK(has_node(g, "ArrayList", NodeKind::Import));
    CHECK(has_node(g, "ArrayList", NodeKind::Call));
    CHECK(has_edge(g, "xs", NodeKind::Variable, RelationKind::Calls, "ArrayList", NodeKind::Call));
    CHECK(has_edge(g, "xs", NodeKind::Variable, RelationKind::OfType, "ArrayList", NodeKind::Import));
}

TEST_CASE("inner calls claim their own arguments") {
    auto g = graph_of("int nest(int a) { int r = outer(inner(a)); return r; }");
    CHECK(has_edge(g, "inner", NodeKind::Call, RelationKind::TakesArgument, "a",
                   NodeKind::Parameter));
    CHECK_FALSE(has_edge(g, "outer", NodeKind::Call, RelationKind::TakesArgument, "a",
                         NodeKind::Parameter));
    CHECK(has_edge(g, "r", NodeKind::Variable, RelationKind::Calls, "outer", NodeKind::Call));
    CHECK(has_edge(g, "r", NodeKind::Variable, RelationKind::Calls, "inner", NodeKind::Call));
}

TEST_CASE("chained receivers attribute receives to the chain head") {
    auto g = graph_of("int deep(Widget w) { int q = w.inner.poll(); return q; }");
    CHECK(has_edge(g, "poll", NodeKind::Call, RelationKind::Receives, "w", NodeKind::Parameter));
}

TEST_CASE("this and super never become nodes") {
    auto g = graph_of("int self() { int v = this.x.f(); return v; }");
    for (const auto& n : g.nodes) {
        CHECK(n.name != "this");
        CHECK(n.name != "super");
    }
}

TEST_CASE("validate accepts extractor output") {
    for (const char* src :
         {kFixtureF1, "public int f() { return 1; }", "int h(int a){ return a; }",
          "void go() { ping(); ping(); pong(); }"}) {
        CHECK(validate(graph_of(src)).empty());
    }
}

TEST_CASE("validate flags endpoint-kind violations") {
    ConceptGraph g;
    g.nodes = {{"m", NodeKind::MethodName}, {"x", NodeKind::Variable}, {"y", NodeKind::Variable}};
    g.edges = {{1, RelationKind::Defines, 2}};
    auto violations = validate(g);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("defines") != std::string::npos);
}

TEST_CASE("validate flags dangling endpoints") {
    ConceptGraph g;
    g.nodes = {{"m", NodeKind::MethodName}};
    g.edges = {{0, RelationKind::Invokes, 5}};
    CHECK(validate(g).size() == 1);
}

TEST_CASE("validate flags missing method node and duplicates") {
    ConceptGraph g;
    g.nodes = {{"x", NodeKind::Variable}, {"x", NodeKind::Variable}};
    auto violations = validate(g);
    CHECK(violations.size() == 2);
}

TEST_CASE("canonicalize is idempotent and order-invariant") {
    auto g = graph_of(kFixtureF1);
    CHECK(canonicalize(g) == g);  // extract_graph returns canonical form
    // permute nodes and edges
    ConceptGraph shuffled;
    std::vector<int> perm(g.nodes.size());
    for (size_t i = 0; i < g.nodes.size(); ++i) perm[i] = static_cast<int>(g.nodes.size() - 1 - i);
    shuffled.nodes.resize(g.nodes.size());
    for (size_t i = 0; i < g.nodes.size(); ++i)
        shuffled.nodes[static_cast<size_t>(perm[i])] = g.nodes[i];
    for (const auto& e : g.edges)
        shuffled.edges.push_back({perm[static_cast<size_t>(e.src)], e.kind,
                                  perm[static_cast<size_t>(e.dst)]});
    std::reverse(shuffled.edges.begin(), shuffled.edges.end());
    CHECK(canonicalize(shuffled) == g);
}

TEST_CASE("canonical order puts the method node first") {
    auto g = graph_of(kFixtureF1);
    CHECK(g.nodes[0].name == "sumSizes");
    CHECK(g.nodes[0].kind == NodeKind::MethodName);
}

TEST_CASE("minimal graph serialization") {
    auto g = graph_of("public int f() { }");
    CHECK(graph_to_json(g) == R"({"nodes":[{"id":0,"name":"f","kind":"method_name"}],"edges":[]})");
}

TEST_CASE("json round-trip is the identity on canonical graphs") {
    auto g = graph_of(kFixtureF1);
    CHECK(graph_from_json(graph_to_json(g)) == g);
}

TEST_CASE("schema errors") {
    CHECK_THROWS_AS(graph_from_json("{}"), SchemaError);
    CHECK_THROWS_AS(graph_from_json(R"({"nodes":[{"id":0,"name":"f"}],"edges":[]})"), SchemaError);
    CHECK_THROWS_AS(
        graph_from_json(
            R"({"nodes":[{"id":0,"name":"f","kind":"method_name"}],"edges":[{"src":0,"kind":"flies","dst":0}]})"),
        SchemaError);
    CHECK_THROWS_AS(
        graph_from_json(R"({"nodes":[{"id":1,"name":"f","kind":"method_name"}],"edges":[]})"),
        SchemaError);
    CHECK_THROWS_AS(
        graph_from_json(
            R"({"nodes":[{"id":0,"name":"f","kind":"method_name"}],"edges":[{"src":0,"kind":"invokes","dst":7}]})"),
        SchemaError);
}

TEST_CASE("stats totals and per-kind sums") {
    auto g = graph_of(kFixtureF1);
    auto s = stats(g);
    CHECK(s.node_count == 7);
    CHECK(s.edge_count == 11);
    int nsum = 0, esum = 0;
    for (int c : s.nodes_by_kind) nsum += c;
    for (int c : s.edges_by_kind) esum += c;
    CHECK(nsum == s.node_count);
    CHECK(esum == s.edge_count);

    auto tiny = stats(graph_of("public int f() { }"));
    CHECK(tiny.node_count == 1);
    CHECK(tiny.edge_count == 0);
}

TEST_CASE("extraction is invariant to reformatting and comments") {
    std::string reformatted =
        "import java.util.List;  // collection support\n"
        "public int sumSizes(List items,\n"
        "                    int offset) {\n"
        "    /* accumulate */ int total = offset;\n"
        "    int n = items.size();\n"
        "    total = total + n;   return total;\n"
        "}\n";
    CHECK(graph_of(reformatted) == graph_of(kFixtureF1));
}

TEST_CASE("property: synthetic corpus graphs validate and serialize injectively") {
    auto pairs = cgs::corpus::generate_synthetic(120, 9);
    std::set<std::string> seen_bytes;
    std::set<std::string> seen_codes;
    for (const auto& p : pairs) {
        auto g = graph_of(p.code);
        CHECK(validate(g).empty());
        std::string bytes = graph_to_json(g);
        CHECK(graph_from_json(bytes) == g);
        // distinct graphs -> distinct canonical bytes
        bool new_code = seen_codes.insert(p.code).second;
        bool new_bytes = seen_bytes.insert(bytes).second;
        if (new_bytes) CHECK(new_code);
    }
}

TEST_CASE("extract_identifiers matches the node set of extract_graph") {
    for (const char* src : {kFixtureF1, "int h(int a){ return a; }"}) {
        auto snippet = cgs::syntax::parse_snippet(src);
        CHECK(extract_identifiers(snippet) == extract_graph(snippet).nodes);
    }
}
