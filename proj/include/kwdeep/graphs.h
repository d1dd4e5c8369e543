#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kwdeep/core.h"

namespace kwdeep {

/// Tuples as nodes; an edge joins two tuples sharing at least one value.
struct JoinGraph {
    std::vector<Tuple> nodes;  // canonical order
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // first < second, sorted

    bool connected() const;
};

JoinGraph join_graph(std::span<const Tuple> tuples);

/// Connected components of the join graph, as sorted index lists into `tuples`.
std::vector<std::vector<std::size_t>> tuple_components(std::span<const Tuple> tuples);

/// Every keyword occurs in some tuple.
bool covers(std::span<const Tuple> tuples, const KeywordQuery& query);

/// Keyword coverage plus a connected join graph.  False for the empty set.
bool is_connected_covering(std::span<const Tuple> tuples, const KeywordQuery& query);

/// Relations as nodes; edges (self-loops included) between relations having
/// attributes over the same domain.  A self-loop needs two distinct
/// attributes of one domain.
struct SchemaJoinGraph {
    std::vector<std::string> nodes;  // schema order
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // first <= second, sorted
    std::vector<std::vector<std::size_t>> adjacency;  // neighbours incl. self, sorted by name

    bool has_edge(std::size_t a, std::size_t b) const;
};

SchemaJoinGraph schema_join_graph(const DatabaseSchema& schema, bool exclude_unary = false);

inline constexpr std::string_view keyword_relation_prefix = "__kw_";

bool is_keyword_relation(std::string_view name);

/// Candidate domains for each keyword of `query`; untyped keywords get every
/// attribute domain of the schema.
std::vector<std::vector<std::string>> keyword_domains(const DatabaseSchema& schema, const KeywordQuery& query);

/// Schema plus one unary output relation per keyword.  Throws
/// std::invalid_argument for untyped keywords.
DatabaseSchema expanded_schema(const DatabaseSchema& schema, const KeywordQuery& query);

/// One unary output relation per (keyword, candidate domain) pair.
DatabaseSchema expanded_schema(const DatabaseSchema& schema,
                               const std::vector<std::vector<std::string>>& domains_per_keyword);

struct DGraphNode {
    std::string relation;
    std::size_t position = 0;
    std::string attribute;
    std::string domain;
    AccessMode mode = AccessMode::output;
};

/// Dependency graph over the attributes of the expanded schema: an arc runs
/// from every output node to every input node of the same domain.
struct DGraph {
    DatabaseSchema expanded;
    std::vector<DGraphNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> arcs;  // (output node, input node)
};

DGraph d_graph(const DatabaseSchema& schema, const KeywordQuery& query);
DGraph d_graph(const DatabaseSchema& schema, const std::vector<std::vector<std::string>>& domains_per_keyword);

/// Visible base relations, computed as relation-level rounds: a relation
/// becomes usable once each input node is fed by an already usable relation.
std::set<std::string> visible_relations(const DGraph& graph);

/// Visible base relations following the arc-chain formulation node by node.
/// Agrees with visible_relations when no relation has two or more inputs;
/// otherwise it can accept relations fed through a relation that itself
/// cannot be accessed.
std::set<std::string> visible_relations_by_chains(const DGraph& graph);

std::string to_dot(const JoinGraph& graph);
std::string to_dot(const SchemaJoinGraph& graph);
std::string to_dot(const DGraph& graph);

}  // namespace kwdeep
