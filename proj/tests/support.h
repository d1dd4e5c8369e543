// Shared fixtures, random generators and independent oracles for the tests.
#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kwdeep/core.h"
#include "kwdeep/engine.h"
#include "kwdeep/io.h"

#ifndef KWDEEP_TEST_DATA
#define KWDEEP_TEST_DATA "tests/data"
#endif

namespace kwtest {

using namespace kwdeep;

inline DatabaseSchema schema_of(const std::string& text) { return parse_schema(text); }
inline DatabaseInstance instance_of(const std::string& text, const DatabaseSchema& s) {
    return parse_instance(text, s);
}
inline KeywordQuery query_of(const std::string& text) { return parse_query(text); }

inline std::string data_path(const std::string& name) { return std::string(KWDEEP_TEST_DATA) + "/" + name; }
inline DatabaseSchema load_schema(const std::string& name) { return parse_schema(read_file(data_path(name))); }
inline DatabaseInstance load_instance(const std::string& name, const DatabaseSchema& s) {
    return parse_instance(read_file(data_path(name)), s);
}

/// Tuple texts, sorted.
inline std::vector<std::string> texts(const std::vector<Tuple>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(t.text());
    std::ranges::sort(out);
    return out;
}

inline std::vector<Tuple> tuples_of(const std::string& text, const DatabaseSchema& s) {
    return parse_instance(text, s).all_tuples();
}

// --- oracles ---------------------------------------------------------------

/// Reachable tuples straight from the definition: a tuple is obtainable once
/// every input value of it is known.
inline std::set<std::string> reach_oracle(const DatabaseSchema& s, const DatabaseInstance& inst,
                                          const std::vector<Keyword>& constants) {
    std::set<std::pair<std::string, std::string>> known;  // (domain, literal)
    std::set<std::string> any_domain;                     // untyped constants
    for (const auto& k : constants) {
        if (k.domain) {
            known.emplace(*k.domain, k.literal);
        } else {
            any_domain.insert(k.literal);
        }
    }
    std::set<std::string> out;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [rel, ts] : inst.relations()) {
            const auto& r = s.at(rel);
            for (const auto& t : ts) {
                if (out.contains(t.text())) continue;
                bool ok = true;
                for (auto p : r.input_positions()) {
                    const auto& v = t.values()[p];
                    ok = ok && (known.contains({v.domain, v.literal}) || any_domain.contains(v.literal));
                }
                if (!ok) continue;
                out.insert(t.text());
                for (const auto& v : t.values()) known.emplace(v.domain, v.literal);
                changed = true;
            }
        }
    }
    return out;
}

inline bool keyword_in(const Keyword& k, const Tuple& t) {
    for (const auto& v : t.values())
        if (v.literal == k.literal && (!k.domain || *k.domain == v.domain)) return true;
    return false;
}

/// Connectivity by repeated flooding over shared (domain, literal) pairs.
inline bool connected_oracle(const std::vector<Tuple>& ts) {
    if (ts.empty()) return false;
    std::vector<bool> in(ts.size(), false);
    in[0] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (in[i]) continue;
            for (std::size_t j = 0; j < ts.size() && !in[i]; ++j) {
                if (!in[j]) continue;
                for (const auto& v : ts[i].values())
                    if (std::ranges::find(ts[j].values(), v) != ts[j].values().end()) {
                        in[i] = true;
                        changed = true;
                        break;
                    }
            }
        }
    }
    return std::ranges::all_of(in, [](bool b) { return b; });
}

inline bool covering_oracle(const std::vector<Tuple>& ts, const KeywordQuery& q) {
    return std::ranges::all_of(q.keywords(), [&](const Keyword& k) {
        return std::ranges::any_of(ts, [&](const Tuple& t) { return keyword_in(k, t); });
    });
}

inline std::vector<Tuple> subset(const std::vector<Tuple>& ts, unsigned mask) {
    std::vector<Tuple> out;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if ((mask >> i) & 1U) out.push_back(ts[i]);
    return out;
}

/// Answer by definition: covering, connected, no proper subset covering and connected.
inline bool answer_oracle(const std::vector<Tuple>& candidate, const KeywordQuery& q) {
    if (candidate.size() > 16) return false;
    if (!covering_oracle(candidate, q) || !connected_oracle(candidate)) return false;
    unsigned full = (1U << candidate.size()) - 1;
    for (unsigned m = 1; m < full; ++m) {
        auto s = subset(candidate, m);
        if (covering_oracle(s, q) && connected_oracle(s)) return false;
    }
    return true;
}

/// Size of the smallest connected covering subset; 0 when none.  Only for
/// small tuple sets.
inline std::size_t optimal_size_oracle(const std::vector<Tuple>& ts, const KeywordQuery& q) {
    std::size_t best = 0;
    for (unsigned m = 1; m < (1U << ts.size()); ++m) {
        auto n = static_cast<std::size_t>(std::popcount(m));
        if (best && n >= best) continue;
        auto s = subset(ts, m);
        if (covering_oracle(s, q) && connected_oracle(s)) best = n;
    }
    return best;
}

// --- random generation -------------------------------------------------------

struct RandomCase {
    DatabaseSchema schema;
    DatabaseInstance instance;
    KeywordQuery query{std::vector<Keyword>{Keyword{"x", std::nullopt}}};
};

inline const std::vector<std::string>& random_domains() {
    static const std::vector<std::string> d{"A", "B", "C", "D"};
    return d;
}

/// Literals are prefixed by their domain so that domains stay disjoint.
inline std::string literal(const std::string& domain, int i) {
    std::string s(1, static_cast<char>(std::tolower(domain[0])));
    return s + std::to_string(i);
}

struct GenParams {
    std::size_t max_relations = 5;
    std::size_t max_arity = 3;
    double input_probability = 0.3;
    std::size_t max_tuples = 40;
    int values_per_domain = 4;
    std::size_t max_keywords = 3;
    bool untyped = false;
};

inline DatabaseSchema random_schema(std::mt19937& rng, const GenParams& p) {
    std::uniform_int_distribution<std::size_t> nrel(1, p.max_relations);
    std::uniform_int_distribution<std::size_t> arity(1, p.max_arity);
    std::uniform_int_distribution<std::size_t> dom(0, random_domains().size() - 1);
    std::bernoulli_distribution input(p.input_probability);
    std::vector<RelationSchema> rels;
    auto n = nrel(rng);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Attribute> attrs;
        auto k = arity(rng);
        for (std::size_t j = 0; j < k; ++j)
            attrs.push_back(Attribute{"a" + std::to_string(j), random_domains()[dom(rng)],
                                      input(rng) ? AccessMode::input : AccessMode::output});
        rels.emplace_back("r" + std::to_string(i), std::move(attrs));
    }
    return DatabaseSchema(std::move(rels), std::set<std::string>(random_domains().begin(), random_domains().end()));
}

inline DatabaseInstance random_instance(std::mt19937& rng, const DatabaseSchema& s, const GenParams& p) {
    DatabaseInstance inst;
    std::uniform_int_distribution<std::size_t> ntup(0, p.max_tuples);
    std::uniform_int_distribution<std::size_t> rel(0, s.size() - 1);
    std::uniform_int_distribution<int> val(0, p.values_per_domain - 1);
    auto n = ntup(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = s.relations()[rel(rng)];
        std::vector<Value> vs;
        for (const auto& a : r.attributes()) vs.push_back(Value{a.domain, literal(a.domain, val(rng))});
        inst.add(Tuple(r.name(), std::move(vs)));
    }
    return inst;
}

inline KeywordQuery random_query(std::mt19937& rng, const GenParams& p) {
    std::uniform_int_distribution<std::size_t> nk(1, p.max_keywords);
    std::uniform_int_distribution<std::size_t> dom(0, random_domains().size() - 1);
    std::uniform_int_distribution<int> val(0, p.values_per_domain - 1);
    std::vector<Keyword> ks;
    auto n = nk(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& d = random_domains()[dom(rng)];
        ks.push_back(Keyword{literal(d, val(rng)), p.untyped ? std::nullopt : std::optional<std::string>(d)});
    }
    return KeywordQuery(std::move(ks));
}

inline RandomCase random_case(std::mt19937& rng, const GenParams& p = {}) {
    RandomCase c;
    c.schema = random_schema(rng, p);
    c.instance = random_instance(rng, c.schema, p);
    c.query = random_query(rng, p);
    return c;
}

}  // namespace kwtest
