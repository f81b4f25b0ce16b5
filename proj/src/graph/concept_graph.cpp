#include "cgs/graph/concept_graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace cgs::graph {

using syntax::AssignStmt;
using syntax::BinaryExpr;
using syntax::Block;
using syntax::CallExpr;
using syntax::Expr;
using syntax::ExprStmt;
using syntax::FieldAccessExpr;
using syntax::ForStmt;
using syntax::IfStmt;
using syntax::LiteralExpr;
using syntax::NameExpr;
using syntax::NewExpr;
using syntax::ReturnStmt;
using syntax::Snippet;
using syntax::Stmt;
using syntax::TryStmt;
using syntax::UnaryExpr;
using syntax::VarDeclStmt;
using syntax::WhileStmt;

namespace {

const std::array<std::string, kNodeKindCount> kNodeKindNames = {"method_name", "parameter",
                                                                "import", "variable", "call"};
const std::array<std::string, kRelationKindCount> kRelationKindNames = {
    "dependsOn", "defines",       "calls",  "hasParameter", "invokes",
    "receives",  "takesArgument", "ofType", "reads"};

// One CallExpr/NewExpr occurrence in the method body.
struct CallOccurrence {
    std::string callee;
    std::string receiver_head;           // empty when none resolvable
    std::vector<std::string> arg_names;  // names in args, outside nested calls
};

// One variable initializer or assignment right-hand side.
struct RhsFact {
    std::string owner;
    bool owner_is_declaration;
    std::vector<std::string> reads;  // names outside any call subtree
    std::vector<std::string> calls;  // callees at any depth
};

struct Facts {
    std::vector<std::pair<std::string, std::string>> var_decls;  // (type, name)
    std::vector<CallOccurrence> call_occurrences;
    std::vector<RhsFact> rhs_facts;
    std::unordered_set<std::string> referenced;  // simple names seen anywhere
};

bool is_self_ref(const std::string& name) { return name == "this" || name == "super"; }

// Chain head of a call receiver: a.b.c() -> "a". Empty when the chain does
// not start at a plain name (nested call results, this/super).
std::string receiver_head(const Expr* e) {
    while (e) {
        if (const auto* fa = std::get_if<FieldAccessExpr>(&e->node)) {
            e = fa->receiver.get();
            continue;
        }
        if (const auto* n = std::get_if<NameExpr>(&e->node))
            return is_self_ref(n->id) ? std::string() : n->id;
        return {};
    }
    return {};
}

class Collector {
public:
    Facts collect(const Snippet& snippet) {
        facts_ = Facts{};
        const auto& m = snippet.method;
        facts_.referenced.insert(m.return_type);
        for (const auto& [type, name] : m.params) facts_.referenced.insert(type);
        walk_block(m.body);
        return std::move(facts_);
    }

private:
    Facts facts_;

    void walk_block(const Block& block) {
        for (const auto& s : block.statements) walk_stmt(*s);
    }

    void walk_stmt(const Stmt& stmt) {
        std::visit([this](const auto& s) { walk(s); }, stmt.node);
    }

    void walk(const VarDeclStmt& s) {
        facts_.var_decls.emplace_back(s.type_name, s.var_name);
        facts_.referenced.insert(s.type_name);
        if (s.init) {
            RhsFact fact{s.var_name, true, {}, {}};
            visit_expr(*s.init, nullptr, &fact.reads, &fact.calls);
            facts_.rhs_facts.push_back(std::move(fact));
        }
    }
    void walk(const AssignStmt& s) {
        RhsFact fact{s.target_name, false, {}, {}};
        visit_expr(*s.rhs, nullptr, &fact.reads, &fact.calls);
        facts_.rhs_facts.push_back(std::move(fact));
    }
    void walk(const ExprStmt& s) { visit_expr(*s.expr, nullptr, nullptr, nullptr); }
    void walk(const ReturnStmt& s) {
        if (s.value) visit_expr(*s.value, nullptr, nullptr, nullptr);
    }
    void walk(const IfStmt& s) {
        visit_expr(*s.cond, nullptr, nullptr, nullptr);
        walk_block(s.then_block);
        if (s.else_block) walk_block(*s.else_block);
    }
    void walk(const WhileStmt& s) {
        visit_expr(*s.cond, nullptr, nullptr, nullptr);
        walk_block(s.body);
    }
    void walk(const ForStmt& s) {
        if (s.init) walk_stmt(*s.init);
        if (s.cond) visit_expr(*s.cond, nullptr, nullptr, nullptr);
        if (s.update) walk_stmt(*s.update);
        walk_block(s.body);
    }
    void walk(const TryStmt& s) {
        walk_block(s.body);
        if (s.catch_clause) {
            facts_.var_decls.emplace_back(s.catch_clause->type_name, s.catch_clause->var_name);
            facts_.referenced.insert(s.catch_clause->type_name);
            walk_block(s.catch_clause->body);
        }
    }

    // owner: call whose argument list encloses this expression (nearest).
    // top_names: sink for plain names outside any call subtree (reads context).
    // rhs_calls: sink for callees at any depth within the current rhs.
    void visit_expr(const Expr& e, CallOccurrence* owner, std::vector<std::string>* top_names,
                    std::vector<std::string>* rhs_calls) {
        if (const auto* n = std::get_if<NameExpr>(&e.node)) {
            facts_.referenced.insert(n->id);
            if (is_self_ref(n->id)) return;
            if (owner)
                owner->arg_names.push_back(n->id);
            else if (top_names)
                top_names->push_back(n->id);
            return;
        }
        if (std::get_if<LiteralExpr>(&e.node)) return;
        if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
            visit_expr(*b->lhs, owner, top_names, rhs_calls);
            visit_expr(*b->rhs, owner, top_names, rhs_calls);
            return;
        }
        if (const auto* u = std::get_if<UnaryExpr>(&e.node)) {
            visit_expr(*u->operand, owner, top_names, rhs_calls);
            return;
        }
        if (const auto* fa = std::get_if<FieldAccessExpr>(&e.node)) {
            visit_expr(*fa->receiver, owner, top_names, rhs_calls);
            return;
        }
        if (const auto* call = std::get_if<CallExpr>(&e.node)) {
            if (rhs_calls) rhs_calls->push_back(call->callee);
            CallOccurrence occ;
            occ.callee = call->callee;
            if (call->receiver) {
                occ.receiver_head = receiver_head(call->receiver.get());
                // Receiver names are referenced but claimed neither as reads
                // nor as another call's arguments.
                visit_expr(*call->receiver, nullptr, nullptr, rhs_calls);
            }
            for (const auto& arg : call->args) visit_expr(*arg, &occ, nullptr, rhs_calls);
            facts_.call_occurrences.push_back(std::move(occ));
            return;
        }
        if (const auto* nw = std::get_if<NewExpr>(&e.node)) {
            if (rhs_calls) rhs_calls->push_back(nw->type_name);
            facts_.referenced.insert(nw->type_name);
            CallOccurrence occ;
            occ.callee = nw->type_name;
            for (const auto& arg : nw->args) visit_expr(*arg, &occ, nullptr, rhs_calls);
            facts_.call_occurrences.push_back(std::move(occ));
            return;
        }
    }
};

struct NodeTable {
    std::vector<Identifier> nodes;
    std::map<std::pair<std::string, int>, int> index;

    int add(const std::string& name, NodeKind kind) {
        auto key = std::make_pair(name, static_cast<int>(kind));
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(nodes.size());
        nodes.push_back({name, kind});
        index.emplace(key, id);
        return id;
    }
    int find(const std::string& name, NodeKind kind) const {
        auto it = index.find({name, static_cast<int>(kind)});
        return it == index.end() ? -1 : it->second;
    }
    // Variables shadow parameters of the same name.
    int find_value(const std::string& name) const {
        int id = find(name, NodeKind::Variable);
        return id >= 0 ? id : find(name, NodeKind::Parameter);
    }
};

}  // namespace

const std::string& node_kind_name(NodeKind kind) {
    return kNodeKindNames[static_cast<int>(kind)];
}
const std::string& relation_kind_name(RelationKind kind) {
    return kRelationKindNames[static_cast<int>(kind)];
}

NodeKind node_kind_from_name(const std::string& name) {
    for (int i = 0; i < kNodeKindCount; ++i)
        if (kNodeKindNames[i] == name) return static_cast<NodeKind>(i);
    throw SchemaError("unknown node kind '" + name + "'");
}

RelationKind relation_kind_from_name(const std::string& name) {
    for (int i = 0; i < kRelationKindCount; ++i)
        if (kRelationKindNames[i] == name) return static_cast<RelationKind>(i);
    throw SchemaError("unknown relation kind '" + name + "'");
}

std::vector<Identifier> extract_identifiers(const syntax::Snippet& snippet) {
    return extract_graph(snippet).nodes;
}

ConceptGraph extract_graph(const syntax::Snippet& snippet) {
    Facts facts = Collector().collect(snippet);
    const auto& method = snippet.method;

    NodeTable table;
    int method_id = table.add(method.name, NodeKind::MethodName);
    for (const auto& [type, name] : method.params) table.add(name, NodeKind::Parameter);
    for (const auto& q : snippet.imports) {
        std::string simple = syntax::import_simple_name(q);
        if (facts.referenced.count(simple)) table.add(simple, NodeKind::Import);
    }
    for (const auto& [type, name] : facts.var_decls) table.add(name, NodeKind::Variable);
    for (const auto& occ : facts.call_occurrences) table.add(occ.callee, NodeKind::Call);

    std::set<std::tuple<int, int, int>> edge_set;
    auto add_edge = [&](int src, RelationKind kind, int dst) {
        if (src < 0 || dst < 0 || src == dst) return;
        edge_set.emplace(src, static_cast<int>(kind), dst);
    };

    for (const auto& node : table.nodes) {
        int id = table.find(node.name, node.kind);
        switch (node.kind) {
            case NodeKind::Parameter:
                add_edge(method_id, RelationKind::HasParameter, id);
                break;
            case NodeKind::Import:
                add_edge(method_id, RelationKind::DependsOn, id);
                break;
            case NodeKind::Variable:
                add_edge(method_id, RelationKind::Defines, id);
                break;
            case NodeKind::Call:
                add_edge(method_id, RelationKind::Invokes, id);
                break;
            default:
                break;
        }
    }

    // ofType: declared type's simple name matches a retained import.
    for (const auto& [type, name] : method.params)
        add_edge(table.find(name, NodeKind::Parameter), RelationKind::OfType,
                 table.find(type, NodeKind::Import));
    for (const auto& [type, name] : facts.var_decls)
        add_edge(table.find(name, NodeKind::Variable), RelationKind::OfType,
                 table.find(type, NodeKind::Import));

    for (const auto& occ : facts.call_occurrences) {
        int call_id = table.find(occ.callee, NodeKind::Call);
        if (!occ.receiver_head.empty())
            add_edge(call_id, RelationKind::Receives, table.find_value(occ.receiver_head));
        for (const auto& arg : occ.arg_names)
            add_edge(call_id, RelationKind::TakesArgument, table.find_value(arg));
    }

    for (const auto& fact : facts.rhs_facts) {
        int owner_id = table.find(fact.owner, NodeKind::Variable);
        if (owner_id < 0) continue;  // assignments to parameters carry no rule
        for (const auto& callee : fact.calls)
            add_edge(owner_id, RelationKind::Calls, table.find(callee, NodeKind::Call));
        for (const auto& name : fact.reads)
            add_edge(owner_id, RelationKind::Reads, table.find_value(name));
    }

    ConceptGraph g;
    g.nodes = std::move(table.nodes);
    g.edges.reserve(edge_set.size());
    for (const auto& [src, kind, dst] : edge_set)
        g.edges.push_back({src, static_cast<RelationKind>(kind), dst});
    return canonicalize(g);
}

std::vector<std::string> validate(const ConceptGraph& graph) {
    std::vector<std::string> violations;
    const int n = static_cast<int>(graph.nodes.size());

    std::set<std::pair<std::string, int>> seen;
    int method_nodes = 0;
    for (int i = 0; i < n; ++i) {
        const auto& node = graph.nodes[i];
        if (node.name.empty()) violations.push_back("node " + std::to_string(i) + " has an empty name");
        if (!seen.insert({node.name, static_cast<int>(node.kind)}).second)
            violations.push_back("duplicate node (" + node.name + ", " +
                                 node_kind_name(node.kind) + ")");
        if (node.kind == NodeKind::MethodName) ++method_nodes;
    }
    if (method_nodes != 1)
        violations.push_back("expected exactly one method_name node, found " +
                             std::to_string(method_nodes));

    auto edge_str = [&](const Edge& e) {
        return relation_kind_name(e.kind) + "(" + std::to_string(e.src) + " -> " +
               std::to_string(e.dst) + ")";
    };
    auto kind_ok = [](RelationKind rel, NodeKind src, NodeKind dst) {
        auto value = [](NodeKind k) { return k == NodeKind::Variable || k == NodeKind::Parameter; };
        switch (rel) {
            case RelationKind::DependsOn:
                return src == NodeKind::MethodName && dst == NodeKind::Import;
            case RelationKind::Defines:
                return src == NodeKind::MethodName && dst == NodeKind::Variable;
            case RelationKind::Calls:
                return src == NodeKind::Variable && dst == NodeKind::Call;
            case RelationKind::HasParameter:
                return src == NodeKind::MethodName && dst == NodeKind::Parameter;
            case RelationKind::Invokes:
                return src == NodeKind::MethodName && dst == NodeKind::Call;
            case RelationKind::Receives:
                return src == NodeKind::Call && value(dst);
            case RelationKind::TakesArgument:
                return src == NodeKind::Call && value(dst);
            case RelationKind::OfType:
                return value(src) && dst == NodeKind::Import;
            case RelationKind::Reads:
                return src == NodeKind::Variable && value(dst);
        }
        return false;
    };

    std::set<std::tuple<int, int, int>> edge_seen;
    for (const auto& e : graph.edges) {
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
            violations.push_back("edge " + edge_str(e) + " has a dangling endpoint");
            continue;
        }
        if (e.src == e.dst) violations.push_back("self-loop " + edge_str(e));
        if (!edge_seen.emplace(e.src, static_cast<int>(e.kind), e.dst).second)
            violations.push_back("duplicate edge " + edge_str(e));
        if (!kind_ok(e.kind, graph.nodes[e.src].kind, graph.nodes[e.dst].kind))
            violations.push_back("edge " + edge_str(e) + " violates the endpoint-kind table: " +
                                 node_kind_name(graph.nodes[e.src].kind) + " -> " +
                                 node_kind_name(graph.nodes[e.dst].kind));
    }
    return violations;
}

ConceptGraph canonicalize(const ConceptGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& na = graph.nodes[a];
        const auto& nb = graph.nodes[b];
        if (na.kind != nb.kind) return static_cast<int>(na.kind) < static_cast<int>(nb.kind);
        return na.name < nb.name;
    });
    std::vector<int> remap(n);
    ConceptGraph out;
    out.nodes.reserve(n);
    for (int new_id = 0; new_id < n; ++new_id) {
        remap[order[new_id]] = new_id;
        out.nodes.push_back(graph.nodes[order[new_id]]);
    }
    out.edges.reserve(graph.edges.size());
    for (const auto& e : graph.edges) out.edges.push_back({remap[e.src], e.kind, remap[e.dst]});
    std::sort(out.edges.begin(), out.edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.kind, a.dst) < std::tie(b.src, b.kind, b.dst);
    });
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
    return out;
}

std::string graph_to_json(const ConceptGraph& graph) {
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        nlohmann::ordered_json node;
        node["id"] = static_cast<int>(i);
        node["name"] = graph.nodes[i].name;
        node["kind"] = node_kind_name(graph.nodes[i].kind);
        doc["nodes"].push_back(std::move(node));
    }
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges) {
        nlohmann::ordered_json edge;
        edge["src"] = e.src;
        edge["kind"] = relation_kind_name(e.kind);
        edge["dst"] = e.dst;
        doc["edges"].push_back(std::move(edge));
    }
    return doc.dump();
}

ConceptGraph graph_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
        throw SchemaError("graph document requires 'nodes' and 'edges'");

    ConceptGraph g;
    int expected_id = 0;
    for (const auto& node : doc["nodes"]) {
        if (!node.contains("id") || !node.contains("name") || !node.contains("kind"))
            throw SchemaError("node requires 'id', 'name' and 'kind'");
        if (!node["id"].is_number_integer() || node["id"].get<int>() != expected_id)
            throw SchemaError("node ids must be dense and ascending from 0");
        ++expected_id;
        g.nodes.push_back(
            {node["name"].get<std::string>(), node_kind_from_name(node["kind"].get<std::string>())});
    }
    const int n = static_cast<int>(g.nodes.size());
    for (const auto& edge : doc["edges"]) {
        if (!edge.contains("src") || !edge.contains("kind") || !edge.contains("dst"))
            throw SchemaError("edge requires 'src', 'kind' and 'dst'");
        Edge e{edge["src"].get<int>(),
               relation_kind_from_name(edge["kind"].get<std::string>()),
               edge["dst"].get<int>()};
        if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
            throw SchemaError("edge endpoint out of range");
        g.edges.push_back(e);
    }
    return g;
}

GraphStats stats(const ConceptGraph& graph) {
    GraphStats s;
    s.node_count = static_cast<int>(graph.nodes.size());
    s.edge_count = static_cast<int>(graph.edges.size());
    for (const auto& node : graph.nodes) ++s.nodes_by_kind[static_cast<int>(node.kind)];
    for (const auto& edge : graph.edges) ++s.edges_by_kind[static_cast<int>(edge.kind)];
    return s;
}

std::string stats_to_json(const GraphStats& s) {
    nlohmann::ordered_json doc;
    doc["node_count"] = s.node_count;
    doc["edge_count"] = s.edge_count;
    nlohmann::ordered_json nodes;
    for (int i = 0; i < kNodeKindCount; ++i)
        nodes[kNodeKindNames[i]] = s.nodes_by_kind[i];
    doc["nodes_by_kind"] = std::move(nodes);
    nlohmann::ordered_json edges;
    for (int i = 0; i < kRelationKindCount; ++i)
        edges[kRelationKindNames[i]] = s.edges_by_kind[i];
    doc["edges_by_kind"] = std::move(edges);
    return doc.dump();
}

}  // namespace cgs::graph
