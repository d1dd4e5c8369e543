#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kwdeep/graphs.h"
#include "support.h"

using namespace kwtest;

namespace {
std::set<std::pair<std::string, std::string>> edge_names(const JoinGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (auto [a, b] : g.edges) out.emplace(g.nodes[a].text(), g.nodes[b].text());
    return out;
}

std::set<std::pair<std::string, std::string>> edge_names(const SchemaJoinGraph& g) {
    std::set<std::pair<std::string, std::string>> out;
    for (auto [a, b] : g.edges) out.emplace(std::min(g.nodes[a], g.nodes[b]), std::max(g.nodes[a], g.nodes[b]));
    return out;
}
}  // namespace

TEST_CASE("join graph of the example 1 reachable portion") {
    auto s = load_schema("ex1.schema");
    auto ts = tuples_of("r1(c0,c1)\nr1(c2,c3)\nr2(c1,c2)\nr2(c1,c6)\nr3(c2,c1,c8)\nr3(c6,c8,c9)\n", s);
    auto g = join_graph(ts);
    // Shared typed values by hand: c1:A2 joins t11,t21,t23,t31; c2:A1 joins
    // t12,t21,t31; c6:A1 joins t23,t33.  c8 is A3 in t31 but A2 in t33.
    const std::string t11 = "r1(c0, c1)", t12 = "r1(c2, c3)", t21 = "r2(c1, c2)", t23 = "r2(c1, c6)",
                      t31 = "r3(c2, c1, c8)", t33 = "r3(c6, c8, c9)";
    auto e = [](std::string a, std::string b) { return std::pair{std::min(a, b), std::max(a, b)}; };
    std::set<std::pair<std::string, std::string>> expected{e(t11, t21), e(t11, t23), e(t11, t31), e(t21, t23),
                                                           e(t21, t31), e(t23, t31), e(t12, t21), e(t12, t31),
                                                           e(t23, t33)};
    std::set<std::pair<std::string, std::string>> got;
    for (auto [a, b] : edge_names(g)) got.insert(e(a, b));
    CHECK(got == expected);
    CHECK(g.nodes.size() == 6);
    CHECK(g.connected());
}

TEST_CASE("connected covering sets") {
    auto s = load_schema("intro.schema");
    auto q = query_of("IT:Dept,DBA:Role");
    auto pair = tuples_of("r1(IT, John)\nr3(P1, John, DBA)\n", s);
    CHECK(is_connected_covering(pair, q));
    auto apart = tuples_of("r1(IT, John)\nr3(P1, Ann, DBA)\n", s);
    CHECK(covers(apart, q));
    CHECK_FALSE(is_connected_covering(apart, q));
    CHECK_FALSE(is_connected_covering(std::vector<Tuple>{}, q));

    auto s1 = load_schema("ex1.schema");
    auto q1 = query_of("c1:A2,c8:A2");
    CHECK_FALSE(is_connected_covering(tuples_of("r1(c0,c1)\nr3(c6,c8,c9)\n", s1), q1));
}

TEST_CASE("components index into the input") {
    auto s = load_schema("intro.schema");
    auto ts = tuples_of("r1(IT, John)\nr1(AI, Mike)\nr2(John, P1)\n", s);
    auto comps = tuple_components(ts);
    CHECK(comps.size() == 2);
    std::size_t total = 0;
    for (const auto& c : comps) total += c.size();
    CHECK(total == 3);
}

TEST_CASE("schema join graph of the intro schema") {
    auto g = schema_join_graph(load_schema("intro.schema"));
    CHECK(edge_names(g) ==
          std::set<std::pair<std::string, std::string>>{{"r1", "r2"}, {"r1", "r3"}, {"r2", "r3"}});
}

TEST_CASE("schema join graph: disjoint relations and self-loops") {
    CHECK(schema_join_graph(schema_of("r1(a:A, b:B)\nr2(c:C, d:D)")).edges.empty());
    auto g = schema_join_graph(schema_of("r(x:A, y:A)\ns(z:B)"));
    CHECK(g.has_edge(0, 0));
    CHECK_FALSE(g.has_edge(1, 1));
    auto unary = schema_join_graph(schema_of("r(x:A, y:B)\nk(v:A)"), true);
    CHECK(unary.nodes == std::vector<std::string>{"r"});
}

TEST_CASE("expanded schema adds one unary output relation per keyword") {
    auto s = load_schema("intro.schema");
    auto e = expanded_schema(s, query_of("IT:Dept,DBA:Role"));
    REQUIRE(e.size() == 5);
    const auto& k0 = e.relations()[3];
    CHECK(is_keyword_relation(k0.name()));
    CHECK(k0.arity() == 1);
    CHECK(k0.attributes()[0].domain == "Dept");
    CHECK_FALSE(k0.attributes()[0].is_input());
    CHECK_THROWS_AS(expanded_schema(s, query_of("IT")), std::invalid_argument);
}

TEST_CASE("d-graph arcs run from outputs to inputs of the same domain") {
    auto s = schema_of("r(a:A^i, b:B)\ns(b:B^i, c:C, a:A)");
    auto g = d_graph(s, query_of("a:A,c:C"));
    std::set<std::string> arcs;
    for (auto [u, v] : g.arcs)
        arcs.insert(g.nodes[u].relation + "." + g.nodes[u].attribute + ">" + g.nodes[v].relation + "." +
                    g.nodes[v].attribute);
    CHECK(arcs.contains("r.b>s.b"));
    CHECK(arcs.contains("s.a>r.a"));
    CHECK(arcs.contains("__kw_0.value>r.a"));
    CHECK(arcs.size() == 3);
}

TEST_CASE("visibility verdicts of the d-graph examples") {
    auto q = query_of("a:A,c:C");
    SUBCASE("D values are never produced") {
        auto v = visible_relations(d_graph(schema_of("r(a:A^i, b:B)\ns(b:B, c:C, d:D^i)"), q));
        CHECK(v == std::set<std::string>{"r"});
    }
    SUBCASE("all visible") {
        auto v = visible_relations(d_graph(schema_of("r(a:A^i, b:B)\ns(b:B^i, c:C, d:D)"), q));
        CHECK(v == std::set<std::string>{"r", "s"});
    }
    SUBCASE("u needs E") {
        auto v = visible_relations(d_graph(load_schema("ex8.schema"), q));
        CHECK(v == std::set<std::string>{"r", "s"});
    }
}

TEST_CASE("chain visibility agrees with single-input schemas and can differ otherwise") {
    auto q = query_of("a:A");
    auto single = schema_of("x(a:A^i, b:B)\ny(b:B^i, c:C)\nz(d:D^i, a:A)");
    CHECK(visible_relations(d_graph(single, q)) == visible_relations_by_chains(d_graph(single, q)));
    // x needs F, which nothing produces; its B output still reaches y along an arc chain.
    auto multi = schema_of("x(a:A^i, f:F^i, b:B)\ny(b:B^i)");
    CHECK(visible_relations(d_graph(multi, q)).empty());
    CHECK(visible_relations_by_chains(d_graph(multi, q)) == std::set<std::string>{"y"});
}

TEST_CASE("DOT exports are deterministic") {
    auto s = load_schema("intro.schema");
    auto a = to_dot(schema_join_graph(s));
    CHECK(a == to_dot(schema_join_graph(s)));
    CHECK(a.starts_with("graph"));
    CHECK(a.find("\"r1\" -- \"r2\"") != std::string::npos);
    auto d = to_dot(d_graph(s, query_of("IT:Dept")));
    CHECK(d.starts_with("digraph"));
    auto j = to_dot(join_graph(tuples_of("r1(IT, John)\nr2(John, P1)\n", s)));
    CHECK(j.find("--") != std::string::npos);
}
