#include "kwdeep/analysis.h"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>

namespace kwdeep {

namespace {

std::vector<std::string> typed_domains(const KeywordQuery& query, const DatabaseSchema& schema) {
    std::vector<std::string> out;
    for (const auto& k : query.keywords()) {
        if (!k.domain) throw UnknownDomainError("keyword '" + k.literal + "' has no domain");
        if (!schema.domains().contains(*k.domain))
            throw UnknownDomainError("keyword '" + k.literal + "' has domain '" + *k.domain + "' outside the catalog");
        out.push_back(*k.domain);
    }
    return out;
}

// Compatibility for one concrete domain per keyword.
bool compatible_domains(const std::vector<std::string>& domains, const DatabaseSchema& schema) {
    for (const auto& d : domains)
        if (std::ranges::none_of(schema.relations(), [&](const RelationSchema& r) { return r.has_domain(d); }))
            return false;

    auto j = schema_join_graph(schema, true);
    std::vector<std::size_t> comp(j.nodes.size());
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (auto [a, b] : j.edges) comp[find(a)] = find(b);

    auto holders = [&](const std::string& d) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < j.nodes.size(); ++i)
            if (schema.at(j.nodes[i]).has_domain(d)) out.push_back(i);
        return out;
    };
    for (std::size_t i = 0; i + 1 < domains.size(); ++i) {
        auto left = holders(domains[i]);
        if (domains[i] == domains[i + 1]) {
            if (left.empty()) return false;
            continue;
        }
        auto right = holders(domains[i + 1]);
        bool linked = false;
        for (auto a : left)
            for (auto b : right) linked = linked || find(a) == find(b);
        if (!linked) return false;
    }
    return true;
}

std::vector<std::vector<std::string>> singletons(const std::vector<std::string>& domains) {
    std::vector<std::vector<std::string>> out;
    for (const auto& d : domains) out.push_back({d});
    return out;
}

bool answerable_domains(const std::vector<std::string>& domains, const DatabaseSchema& schema) {
    auto visible = visible_relations(d_graph(schema, singletons(domains)));
    return compatible_domains(domains, schema.restricted_to(visible));
}

std::set<std::string> useful_within(const DatabaseSchema& schema, const std::set<std::string>& members,
                                    const std::vector<std::vector<std::string>>& keyword_domains) {
    std::set<std::string> kw;
    for (const auto& ds : keyword_domains) kw.insert(ds.begin(), ds.end());
    std::set<std::string> useful;
    for (const auto& name : members) {
        const auto& r = schema.at(name);
        if (std::ranges::any_of(r.attributes(), [&](const Attribute& a) { return kw.contains(a.domain); }))
            useful.insert(name);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& name : members) {
            if (useful.contains(name)) continue;
            const auto& r = schema.at(name);
            bool feeds = std::ranges::any_of(useful, [&](const std::string& u) {
                return std::ranges::any_of(schema.at(u).attributes(), [&](const Attribute& a) {
                    return a.is_input() && r.has_output_domain(a.domain);
                });
            });
            if (feeds) {
                useful.insert(name);
                changed = true;
            }
        }
    }
    return useful;
}

}  // namespace

std::vector<std::vector<std::string>> checked_keyword_domains(const KeywordQuery& query,
                                                              const DatabaseSchema& schema) {
    for (const auto& k : query.keywords())
        if (k.domain && !schema.domains().contains(*k.domain))
            throw UnknownDomainError("keyword '" + k.literal + "' has domain '" + *k.domain + "' outside the catalog");
    return keyword_domains(schema, query);
}

bool compatible(const KeywordQuery& query, const DatabaseSchema& schema) {
    return compatible_domains(typed_domains(query, schema), schema);
}

bool answerable(const KeywordQuery& query, const DatabaseSchema& schema) {
    return answerable_domains(typed_domains(query, schema), schema);
}

bool answerable_for_some_typing(const KeywordQuery& query, const DatabaseSchema& schema) {
    auto candidates = checked_keyword_domains(query, schema);
    if (std::ranges::any_of(candidates, [](const auto& c) { return c.empty(); })) return false;
    // Odometer over the candidate product; generous cap against blow-up.
    std::vector<std::size_t> pick(candidates.size(), 0);
    constexpr std::size_t cap = 1'000'000;
    for (std::size_t n = 0; n < cap; ++n) {
        std::vector<std::string> domains;
        for (std::size_t i = 0; i < pick.size(); ++i) domains.push_back(candidates[i][pick[i]]);
        if (answerable_domains(domains, schema)) return true;
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == candidates[i].size()) pick[i++] = 0;
        if (i == pick.size()) return false;
    }
    return false;
}

std::set<std::string> visible_subschema(const KeywordQuery& query, const DatabaseSchema& schema) {
    return visible_relations(d_graph(schema, checked_keyword_domains(query, schema)));
}

std::set<std::string> useful_nodes(const KeywordQuery& query, const DatabaseSchema& schema) {
    auto doms = checked_keyword_domains(query, schema);
    return useful_within(schema, visible_relations(d_graph(schema, doms)), doms);
}

std::optional<DatabaseInstance> construct_answer_instance(const KeywordQuery& query, const DatabaseSchema& schema) {
    auto domains = typed_domains(query, schema);
    if (!answerable_domains(domains, schema)) return std::nullopt;
    auto sub = schema.restricted_to(visible_relations(d_graph(schema, singletons(domains))));

    std::set<std::string> literals;
    for (const auto& k : query.keywords()) literals.insert(k.literal);
    // Keyword values are preferred: they are available before any access.
    auto val = [&](const std::string& d) -> std::string {
        for (const auto& k : query.keywords())
            if (*k.domain == d) return k.literal;
        std::string x = "x_" + d;
        while (literals.contains(x)) x += "_";
        return x;
    };

    using Slots = std::vector<std::optional<std::string>>;
    struct Draft {
        const RelationSchema* rel;
        Slots slots;
    };
    std::vector<Draft> drafts;
    auto fresh = [&](const RelationSchema& r) { return Draft{&r, Slots(r.arity())}; };
    auto slot_of = [](const Draft& t, const std::string& d, bool want_free) -> std::optional<std::size_t> {
        for (std::size_t p = 0; p < t.rel->arity(); ++p)
            if (t.rel->attributes()[p].domain == d && (!want_free || !t.slots[p])) return p;
        return std::nullopt;
    };

    auto j = schema_join_graph(sub, true);
    auto idx_with = [&](const std::string& d) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < j.nodes.size(); ++i)
            if (sub.at(j.nodes[i]).has_domain(d)) out.push_back(i);
        return out;
    };

    const auto& kws = query.keywords();
    for (std::size_t i = 0; i + 1 < kws.size(); ++i) {
        const auto& d1 = domains[i];
        const auto& d2 = domains[i + 1];
        if (d1 == d2) {
            const auto& r = sub.at(j.nodes[idx_with(d1).front()]);
            auto t = fresh(r);
            t.slots[*slot_of(t, d1, true)] = kws[i].literal;
            if (auto p = slot_of(t, d1, true)) {
                t.slots[*p] = kws[i + 1].literal;
                drafts.push_back(std::move(t));
            } else {
                // Two tuples joined through the (val-filled) remaining attributes.
                auto u = fresh(r);
                u.slots[*slot_of(u, d1, true)] = kws[i + 1].literal;
                drafts.push_back(std::move(t));
                drafts.push_back(std::move(u));
            }
            continue;
        }
        // Shortest path in the join graph between holders of d1 and d2.
        auto starts = idx_with(d1);
        std::vector<std::optional<std::size_t>> prev(j.nodes.size());
        std::vector<bool> seen(j.nodes.size(), false);
        std::deque<std::size_t> queue;
        for (auto s : starts) {
            seen[s] = true;
            queue.push_back(s);
        }
        std::optional<std::size_t> goal;
        while (!queue.empty() && !goal) {
            auto x = queue.front();
            queue.pop_front();
            if (sub.at(j.nodes[x]).has_domain(d2)) {
                goal = x;
                break;
            }
            for (auto y : j.adjacency[x])
                if (!seen[y]) {
                    seen[y] = true;
                    prev[y] = x;
                    queue.push_back(y);
                }
        }
        std::vector<std::size_t> path;
        for (auto x = goal; x; x = prev[*x]) path.push_back(*x);
        std::ranges::reverse(path);

        std::vector<Draft> chain;
        for (auto x : path) chain.push_back(fresh(sub.at(j.nodes[x])));
        chain.front().slots[*slot_of(chain.front(), d1, true)] = kws[i].literal;
        auto& last = chain.back();
        if (auto p = slot_of(last, d2, true)) {
            last.slots[*p] = kws[i + 1].literal;
        } else {
            // Single relation holding d1 == d2 only once cannot happen here (d1 != d2).
            last.slots[*slot_of(last, d2, false)] = kws[i + 1].literal;
        }
        for (std::size_t s = 0; s + 1 < chain.size(); ++s) {
            auto& a = chain[s];
            auto& b = chain[s + 1];
            bool linked = false;
            for (std::size_t p = 0; p < a.rel->arity() && !linked; ++p)
                for (std::size_t q = 0; q < b.rel->arity() && !linked; ++q) {
                    const auto& d = a.rel->attributes()[p].domain;
                    if (b.rel->attributes()[q].domain != d) continue;
                    if (a.slots[p] && b.slots[q] && a.slots[p] != b.slots[q]) continue;
                    auto v = a.slots[p] ? a.slots[p] : b.slots[q] ? b.slots[q] : std::optional{val(d)};
                    a.slots[p] = v;
                    b.slots[q] = v;
                    linked = true;
                }
        }
        for (auto& t : chain) drafts.push_back(std::move(t));
    }
    if (kws.size() == 1) {
        auto holders = idx_with(domains[0]);
        const RelationSchema* r = nullptr;
        if (!holders.empty()) {
            r = &sub.at(j.nodes[holders.front()]);
        } else {
            for (const auto& rel : sub.relations())
                if (rel.has_domain(domains[0])) r = &rel;
        }
        auto t = fresh(*r);
        t.slots[*slot_of(t, domains[0], true)] = kws[0].literal;
        drafts.push_back(std::move(t));
    }
    for (const auto& r : sub.relations()) drafts.push_back(fresh(r));

    DatabaseInstance out;
    for (auto& t : drafts) {
        std::vector<Value> values;
        for (std::size_t p = 0; p < t.rel->arity(); ++p) {
            const auto& d = t.rel->attributes()[p].domain;
            values.push_back(Value{d, t.slots[p] ? *t.slots[p] : val(d)});
        }
        out.add(Tuple(t.rel->name(), std::move(values)));
    }
    return out;
}

// ---------------------------------------------------------------------------

WitnessPlanner::WitnessPlanner(const DatabaseSchema& schema, std::vector<std::vector<std::string>> keyword_domains,
                               WitnessOrder order)
    : schema_(schema), keyword_domains_(std::move(keyword_domains)), graph_(schema_join_graph(schema_)) {
    const auto n = schema_.size();
    if (n > 64) throw std::length_error("witness planning supports at most 64 relations");
    for (const auto& ds : keyword_domains_) seeded_domains_.insert(ds.begin(), ds.end());

    auto by_name = [&](std::size_t a, std::size_t b) {
        return order == WitnessOrder::canonical ? graph_.nodes[a] < graph_.nodes[b] : graph_.nodes[a] > graph_.nodes[b];
    };
    start_order_.resize(n);
    std::iota(start_order_.begin(), start_order_.end(), 0);
    std::ranges::sort(start_order_, by_name);
    neighbours_ = graph_.adjacency;
    for (auto& adj : neighbours_) std::ranges::sort(adj, by_name);

    for (const auto& ds : keyword_domains_) {
        std::uint64_t m = 0;
        for (std::size_t r = 0; r < n; ++r)
            for (const auto& d : ds)
                if (schema_.relations()[r].has_domain(d)) m |= std::uint64_t{1} << r;
        anchor_masks_.push_back(m);
    }

    // Visible relations of the whole schema.
    std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::uint64_t visible = 0;
    {
        std::set<std::string> produced = seeded_domains_;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t r = 0; r < n; ++r) {
                if ((visible >> r) & 1U) continue;
                const auto& rel = schema_.relations()[r];
                if (!std::ranges::all_of(rel.input_positions(), [&](std::size_t p) {
                        return produced.contains(rel.attributes()[p].domain);
                    }))
                    continue;
                visible |= std::uint64_t{1} << r;
                changed = true;
                for (const auto& a : rel.attributes())
                    if (!a.is_input()) produced.insert(a.domain);
            }
        }
    }
    (void)all;

    // Components of the join graph restricted to visible relations.
    std::vector<std::uint64_t> comp(n, 0);
    std::vector<bool> done(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (!((visible >> s) & 1U) || done[s]) continue;
        std::uint64_t c = 0;
        std::vector<std::size_t> stack{s};
        done[s] = true;
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            c |= std::uint64_t{1} << x;
            for (auto y : neighbours_[x])
                if (!done[y] && ((visible >> y) & 1U)) {
                    done[y] = true;
                    stack.push_back(y);
                }
        }
        bool anchored = std::ranges::all_of(anchor_masks_, [&](std::uint64_t m) { return (m & c) != 0; });
        if (std::popcount(c) >= 2 && anchored) {
            candidates_ |= c;
            infinite_ = true;
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        std::uint64_t bit = std::uint64_t{1} << r;
        if ((candidates_ & bit) || !(visible & bit)) continue;
        if (is_witness(Walk{r})) {
            candidates_ |= bit;
            if (graph_.has_edge(r, r)) infinite_ = true;
        }
    }
    horizon_ = 2 * static_cast<std::size_t>(std::popcount(candidates_)) + 2;
}

bool WitnessPlanner::anchors_some(std::size_t relation) const {
    return std::ranges::any_of(anchor_masks_, [&](std::uint64_t m) { return (m >> relation) & 1U; });
}

bool WitnessPlanner::visible_within(std::uint64_t mask) const {
    if (auto it = visible_memo_.find(mask); it != visible_memo_.end()) return it->second;
    std::set<std::string> produced = seeded_domains_;
    std::uint64_t usable = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t r = 0; r < schema_.size(); ++r) {
            std::uint64_t bit = std::uint64_t{1} << r;
            if (!(mask & bit) || (usable & bit)) continue;
            const auto& rel = schema_.relations()[r];
            if (!std::ranges::all_of(rel.input_positions(),
                                     [&](std::size_t p) { return produced.contains(rel.attributes()[p].domain); }))
                continue;
            usable |= bit;
            changed = true;
            for (const auto& a : rel.attributes())
                if (!a.is_input()) produced.insert(a.domain);
        }
    }
    return visible_memo_[mask] = usable == mask;
}

bool WitnessPlanner::is_witness(const Walk& walk) const {
    if (walk.empty()) return false;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i)
        if (!graph_.has_edge(walk[i], walk[i + 1])) return false;
    std::uint64_t mask = 0;
    std::uint64_t interior = 0;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        mask |= std::uint64_t{1} << walk[i];
        if (i > 0 && i + 1 < walk.size()) interior |= std::uint64_t{1} << walk[i];
    }
    auto key = std::tuple{mask, interior, walk.back()};
    if (auto it = witness_memo_.find(key); it != witness_memo_.end()) return it->second;

    bool ok = anchors_some(walk.back()) &&
              std::ranges::all_of(anchor_masks_, [&](std::uint64_t m) { return (m & mask) != 0; }) &&
              visible_within(mask);
    if (ok) {
        // Usefulness inside the walk: anchors and connectors seed the fixpoint.
        std::uint64_t useful = interior;
        for (auto m : anchor_masks_) useful |= m & mask;
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t r = 0; r < schema_.size(); ++r) {
                std::uint64_t bit = std::uint64_t{1} << r;
                if (!(mask & bit) || (useful & bit)) continue;
                const auto& rel = schema_.relations()[r];
                for (std::size_t u = 0; u < schema_.size() && !(useful & bit); ++u) {
                    if (!((useful >> u) & 1U)) continue;
                    for (const auto& a : schema_.relations()[u].attributes())
                        if (a.is_input() && rel.has_output_domain(a.domain)) {
                            useful |= bit;
                            changed = true;
                            break;
                        }
                }
            }
        }
        ok = useful == mask;
    }
    return witness_memo_[key] = ok;
}

std::size_t WitnessPlanner::cost(const Walk& walk, const std::vector<bool>& accessed) const {
    std::uint64_t seen = 0;
    for (auto r : walk)
        if (accessed[r]) seen |= std::uint64_t{1} << r;
    return walk.size() - static_cast<std::size_t>(std::popcount(seen));
}

Witness WitnessPlanner::describe(const Walk& walk, const std::vector<bool>& accessed) const {
    Witness w;
    for (auto r : walk) w.path.push_back(graph_.nodes[r]);
    for (auto m : anchor_masks_) {
        std::size_t pos = 0;
        while (pos < walk.size() && !((m >> walk[pos]) & 1U)) ++pos;
        w.anchors.push_back(pos);
    }
    w.cost = cost(walk, accessed);
    return w;
}

bool WitnessPlanner::visit_level(std::size_t level, const std::vector<bool>& accessed,
                                 const std::function<bool(const Walk&)>& visitor,
                                 const std::function<bool(const Walk&)>& prune) const {
    for (auto s : start_order_) {
        if (!is_candidate(s)) continue;
        Walk walk{s};
        std::uint64_t distinct = accessed[s] ? std::uint64_t{1} << s : 0;
        if (extend(walk, accessed[s] ? 0 : 1, level, distinct, accessed, visitor, prune)) return true;
    }
    return false;
}

bool WitnessPlanner::extend(Walk& walk, std::size_t partial, std::size_t level, std::uint64_t distinct_accessed,
                            const std::vector<bool>& accessed,
                            const std::function<bool(const Walk&)>& visitor,
                            const std::function<bool(const Walk&)>& prune) const {
    if (partial > level) return false;
    if (prune && prune(walk)) return false;
    if (partial == level && is_witness(walk) && visitor(walk)) return true;
    for (auto y : neighbours_[walk.back()]) {
        if (!is_candidate(y)) continue;
        std::uint64_t bit = std::uint64_t{1} << y;
        bool free = accessed[y] && !(distinct_accessed & bit);
        std::size_t next = partial + (free ? 0 : 1);
        if (next > level) continue;
        walk.push_back(y);
        bool stop = extend(walk, next, level, distinct_accessed | (accessed[y] ? bit : 0), accessed, visitor, prune);
        walk.pop_back();
        if (stop) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------

namespace {
std::vector<bool> accessed_snapshot(const DatabaseSchema& schema, const AccessExecutor* executor) {
    std::vector<bool> out;
    for (const auto& r : schema.relations()) out.push_back(executor && executor->has_accessed(r.name()));
    return out;
}
}  // namespace

WitnessStream::WitnessStream(const KeywordQuery& query, const DatabaseSchema& schema, const AccessExecutor* executor,
                             WitnessOrder order)
    : planner_(schema, checked_keyword_domains(query, schema), order),
      accessed_(accessed_snapshot(schema, executor)) {}

std::optional<Witness> WitnessStream::next() {
    while (cursor_ == buffer_.size()) {
        if (!planner_.has_witnesses()) return std::nullopt;
        // Finite streams only hold single-relation witnesses, of cost at most 1.
        if (!planner_.infinite() && level_ > 1) return std::nullopt;
        buffer_.clear();
        cursor_ = 0;
        planner_.visit_level(level_++, accessed_, [&](const WitnessPlanner::Walk& w) {
            buffer_.push_back(planner_.describe(w, accessed_));
            return false;
        });
    }
    return buffer_[cursor_++];
}

}  // namespace kwdeep
