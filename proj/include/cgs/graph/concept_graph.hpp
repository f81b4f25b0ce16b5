#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgs/syntax/ast.hpp"

namespace cgs::graph {

enum class NodeKind { MethodName = 0, Parameter = 1, Import = 2, Variable = 3, Call = 4 };
inline constexpr int kNodeKindCount = 5;

enum class RelationKind {
    DependsOn = 0,
    Defines = 1,
    Calls = 2,
    HasParameter = 3,
    Invokes = 4,
    Receives = 5,
    TakesArgument = 6,
    OfType = 7,
    Reads = 8
};
inline constexpr int kRelationKindCount = 9;

const std::string& node_kind_name(NodeKind kind);
const std::string& relation_kind_name(RelationKind kind);
// Throws SchemaError on an unknown spelling.
NodeKind node_kind_from_name(const std::string& name);
RelationKind relation_kind_from_name(const std::string& name);

struct Identifier {
    std::string name;
    NodeKind kind;

    bool operator==(const Identifier&) const = default;
};

struct Edge {
    int src;
    RelationKind kind;
    int dst;

    bool operator==(const Edge&) const = default;
};

// Relational graph of identifiers. Node ids are positions in `nodes`.
struct ConceptGraph {
    std::vector<Identifier> nodes;
    std::vector<Edge> edges;

    bool operator==(const ConceptGraph&) const = default;
};

struct GraphStats {
    int node_count = 0;
    int edge_count = 0;
    std::array<int, kNodeKindCount> nodes_by_kind{};
    std::array<int, kRelationKindCount> edges_by_kind{};
};

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& message)
        : std::runtime_error("schema error: " + message) {}
};

// Deduplicated identifier set of a snippet, in canonical order.
std::vector<Identifier> extract_identifiers(const syntax::Snippet& snippet);

// Full concept graph; returned in canonical form.
ConceptGraph extract_graph(const syntax::Snippet& snippet);

// Empty iff the graph satisfies all structural invariants and every edge
// matches the endpoint-kind table.
std::vector<std::string> validate(const ConceptGraph& graph);

// Reassign ids by (node kind order, name); sort edges by (src, kind, dst).
ConceptGraph canonicalize(const ConceptGraph& graph);

std::string graph_to_json(const ConceptGraph& graph);
ConceptGraph graph_from_json(const std::string& text);

GraphStats stats(const ConceptGraph& graph);
std::string stats_to_json(const GraphStats& s);

}  // namespace cgs::graph
