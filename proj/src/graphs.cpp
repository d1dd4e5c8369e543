#include "kwdeep/graphs.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace kwdeep {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

bool JoinGraph::connected() const {
    if (nodes.empty()) return false;
    UnionFind uf(nodes.size());
    for (auto [a, b] : edges) uf.unite(a, b);
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (uf.find(i) != uf.find(0)) return false;
    return true;
}

JoinGraph join_graph(std::span<const Tuple> tuples) {
    JoinGraph g;
    g.nodes.assign(tuples.begin(), tuples.end());
    canonicalize(g.nodes);
    std::map<Value, std::vector<std::size_t>> holders;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        for (const auto& v : g.nodes[i].values()) {
            auto& h = holders[v];
            if (h.empty() || h.back() != i) h.push_back(i);
        }
    }
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& [_, idx] : holders)
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b) edges.emplace(idx[a], idx[b]);
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

std::vector<std::vector<std::size_t>> tuple_components(std::span<const Tuple> tuples) {
    UnionFind uf(tuples.size());
    std::map<Value, std::size_t> first_holder;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        for (const auto& v : tuples[i].values()) {
            auto [it, fresh] = first_holder.try_emplace(v, i);
            if (!fresh) uf.unite(it->second, i);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < tuples.size(); ++i) groups[uf.find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [_, members] : groups) out.push_back(std::move(members));
    return out;
}

bool covers(std::span<const Tuple> tuples, const KeywordQuery& query) {
    for (const auto& k : query.keywords()) {
        bool found = std::ranges::any_of(tuples, [&](const Tuple& t) {
            return std::ranges::any_of(t.values(), [&](const Value& v) { return k.matches(v); });
        });
        if (!found) return false;
    }
    return true;
}

bool is_connected_covering(std::span<const Tuple> tuples, const KeywordQuery& query) {
    if (tuples.empty() || !covers(tuples, query)) return false;
    return tuple_components(tuples).size() == 1;
}

bool SchemaJoinGraph::has_edge(std::size_t a, std::size_t b) const {
    return std::ranges::binary_search(edges, std::pair{std::min(a, b), std::max(a, b)});
}

SchemaJoinGraph schema_join_graph(const DatabaseSchema& schema, bool exclude_unary) {
    SchemaJoinGraph g;
    std::vector<const RelationSchema*> rels;
    for (const auto& r : schema.relations()) {
        if (exclude_unary && r.arity() == 1) continue;
        rels.push_back(&r);
        g.nodes.push_back(r.name());
    }
    g.adjacency.resize(rels.size());
    for (std::size_t a = 0; a < rels.size(); ++a) {
        for (std::size_t b = a; b < rels.size(); ++b) {
            bool joined = false;
            if (a == b) {
                joined = rels[a]->has_repeated_domain();
            } else {
                for (const auto& attr : rels[a]->attributes()) {
                    if (rels[b]->has_domain(attr.domain)) {
                        joined = true;
                        break;
                    }
                }
            }
            if (!joined) continue;
            g.edges.emplace_back(a, b);
            g.adjacency[a].push_back(b);
            if (a != b) g.adjacency[b].push_back(a);
        }
    }
    for (auto& adj : g.adjacency) {
        std::ranges::sort(adj, [&](std::size_t x, std::size_t y) { return g.nodes[x] < g.nodes[y]; });
    }
    return g;
}

bool is_keyword_relation(std::string_view name) { return name.starts_with(keyword_relation_prefix); }

std::vector<std::vector<std::string>> keyword_domains(const DatabaseSchema& schema, const KeywordQuery& query) {
    auto all = schema.attribute_domains();
    std::vector<std::vector<std::string>> out;
    for (const auto& k : query.keywords()) {
        if (k.domain) {
            out.push_back({*k.domain});
        } else {
            out.emplace_back(all.begin(), all.end());
        }
    }
    return out;
}

DatabaseSchema expanded_schema(const DatabaseSchema& schema, const KeywordQuery& query) {
    if (query.any_untyped()) throw std::invalid_argument("expanded schema needs every keyword domain to be known");
    return expanded_schema(schema, keyword_domains(schema, query));
}

DatabaseSchema expanded_schema(const DatabaseSchema& schema,
                               const std::vector<std::vector<std::string>>& domains_per_keyword) {
    std::vector<RelationSchema> rels = schema.relations();
    std::string prefix(keyword_relation_prefix);
    // The reserved prefix makes clashes unlikely; pad until fresh anyway.
    while (std::ranges::any_of(rels, [&](const RelationSchema& r) { return r.name().starts_with(prefix); }))
        prefix.insert(0, "_");
    for (std::size_t i = 0; i < domains_per_keyword.size(); ++i) {
        const auto& doms = domains_per_keyword[i];
        for (std::size_t j = 0; j < doms.size(); ++j) {
            auto name = prefix + std::to_string(i);
            if (doms.size() > 1) name += "_" + std::to_string(j);
            rels.emplace_back(name, std::vector<Attribute>{Attribute{"value", doms[j], AccessMode::output}});
        }
    }
    return DatabaseSchema(std::move(rels), schema.domains());
}

DGraph d_graph(const DatabaseSchema& schema, const KeywordQuery& query) {
    if (query.any_untyped()) throw std::invalid_argument("d-graph needs every keyword domain to be known");
    return d_graph(schema, keyword_domains(schema, query));
}

DGraph d_graph(const DatabaseSchema& schema, const std::vector<std::vector<std::string>>& domains_per_keyword) {
    DGraph g{expanded_schema(schema, domains_per_keyword), {}, {}};
    for (const auto& r : g.expanded.relations())
        for (std::size_t i = 0; i < r.arity(); ++i) {
            const auto& a = r.attributes()[i];
            g.nodes.push_back(DGraphNode{r.name(), i, a.name, a.domain, a.mode});
        }
    for (std::size_t u = 0; u < g.nodes.size(); ++u) {
        if (g.nodes[u].mode != AccessMode::output) continue;
        for (std::size_t v = 0; v < g.nodes.size(); ++v) {
            if (g.nodes[v].mode == AccessMode::input && g.nodes[v].domain == g.nodes[u].domain)
                g.arcs.emplace_back(u, v);
        }
    }
    std::ranges::sort(g.arcs);
    return g;
}

std::set<std::string> visible_relations(const DGraph& graph) {
    const auto& rels = graph.expanded.relations();
    std::vector<bool> usable(rels.size(), false);
    std::set<std::string> produced;  // domains with an output node in a usable relation
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < rels.size(); ++i) {
            if (usable[i]) continue;
            bool fed = std::ranges::all_of(rels[i].input_positions(), [&](std::size_t p) {
                return produced.contains(rels[i].attributes()[p].domain);
            });
            if (!fed) continue;
            usable[i] = true;
            changed = true;
            for (const auto& a : rels[i].attributes())
                if (!a.is_input()) produced.insert(a.domain);
        }
    }
    std::set<std::string> out;
    for (std::size_t i = 0; i < rels.size(); ++i)
        if (usable[i] && !is_keyword_relation(rels[i].name())) out.insert(rels[i].name());
    return out;
}

std::set<std::string> visible_relations_by_chains(const DGraph& graph) {
    // A relation is "entered" when a chain of arcs reaches one of its input
    // nodes; its output nodes may then continue the chain.
    std::set<std::string> entered;
    for (const auto& r : graph.expanded.relations())
        if (r.is_input_free()) entered.insert(r.name());
    std::vector<bool> visible_node(graph.nodes.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [u, v] : graph.arcs) {
            if (visible_node[v] || !entered.contains(graph.nodes[u].relation)) continue;
            visible_node[v] = true;
            entered.insert(graph.nodes[v].relation);
            changed = true;
        }
    }
    std::set<std::string> out;
    for (const auto& r : graph.expanded.relations()) {
        if (is_keyword_relation(r.name())) continue;
        bool all = true;
        for (std::size_t n = 0; n < graph.nodes.size(); ++n) {
            if (graph.nodes[n].relation == r.name() && graph.nodes[n].mode == AccessMode::input && !visible_node[n])
                all = false;
        }
        if (all) out.insert(r.name());
    }
    return out;
}

std::string to_dot(const JoinGraph& graph) {
    std::ostringstream out;
    out << "graph join {\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        out << "  t" << i << " [label=\"" << dot_escape(graph.nodes[i].text()) << "\"];\n";
    for (auto [a, b] : graph.edges) out << "  t" << a << " -- t" << b << ";\n";
    out << "}\n";
    return out.str();
}

std::string to_dot(const SchemaJoinGraph& graph) {
    std::vector<std::size_t> order(graph.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return graph.nodes[a] < graph.nodes[b]; });
    std::ostringstream out;
    out << "graph schema {\n";
    for (auto i : order) out << "  \"" << dot_escape(graph.nodes[i]) << "\";\n";
    std::vector<std::pair<std::string, std::string>> edges;
    for (auto [a, b] : graph.edges) edges.emplace_back(std::min(graph.nodes[a], graph.nodes[b]),
                                                       std::max(graph.nodes[a], graph.nodes[b]));
    std::ranges::sort(edges);
    for (const auto& [a, b] : edges) out << "  \"" << dot_escape(a) << "\" -- \"" << dot_escape(b) << "\";\n";
    out << "}\n";
    return out.str();
}

std::string to_dot(const DGraph& graph) {
    std::vector<std::size_t> order(graph.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::sort(order, [&](std::size_t a, std::size_t b) {
        const auto& x = graph.nodes[a];
        const auto& y = graph.nodes[b];
        return std::tie(x.relation, x.position) < std::tie(y.relation, y.position);
    });
    std::vector<std::size_t> rank(graph.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    std::ostringstream out;
    out << "digraph dependencies {\n";
    for (auto n : order) {
        const auto& node = graph.nodes[n];
        out << "  n" << rank[n] << " [label=\"" << dot_escape(node.relation) << "." << dot_escape(node.attribute)
            << ":" << dot_escape(node.domain) << (node.mode == AccessMode::input ? "^i" : "") << "\"];\n";
    }
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (auto [u, v] : graph.arcs) arcs.emplace_back(rank[u], rank[v]);
    std::ranges::sort(arcs);
    for (auto [u, v] : arcs) out << "  n" << u << " -> n" << v << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace kwdeep
