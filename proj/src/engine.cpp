#include "kwdeep/engine.h"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "kwdeep/graphs.h"

namespace kwdeep {

namespace {

std::vector<Tuple> canonical_copy(std::span<const Tuple> tuples) {
    std::vector<Tuple> out(tuples.begin(), tuples.end());
    canonicalize(out);
    return out;
}

bool component_covers(std::span<const Tuple> tuples, const std::vector<std::size_t>& comp,
                      const KeywordQuery& query) {
    return std::ranges::all_of(query.keywords(), [&](const Keyword& k) {
        return std::ranges::any_of(comp, [&](std::size_t i) {
            return std::ranges::any_of(tuples[i].values(), [&](const Value& v) { return k.matches(v); });
        });
    });
}

// Cartesian product of sorted value lists, in lexicographic order.
std::vector<Binding> product(const RelationSchema& rel, const std::vector<std::vector<std::string>>& lists) {
    std::vector<Binding> out;
    if (std::ranges::any_of(lists, [](const auto& l) { return l.empty(); })) return out;
    std::vector<std::size_t> pick(lists.size(), 0);
    const auto& inputs = rel.input_positions();
    while (true) {
        Binding b{rel.name(), {}};
        for (std::size_t j = 0; j < pick.size(); ++j)
            b.values.push_back(Value{rel.attributes()[inputs[j]].domain, lists[j][pick[j]]});
        out.push_back(std::move(b));
        std::size_t j = pick.size();
        while (j > 0) {
            --j;
            if (++pick[j] < lists[j].size()) break;
            pick[j] = 0;
            if (j == 0) return out;
        }
        if (pick.empty()) return out;
    }
}

}  // namespace

bool has_covering_component(std::span<const Tuple> tuples, const KeywordQuery& query) {
    for (const auto& comp : tuple_components(tuples))
        if (component_covers(tuples, comp, query)) return true;
    return false;
}

std::optional<Answer> peel(std::span<const Tuple> tuples, const KeywordQuery& query) {
    auto current = canonical_copy(tuples);
    if (!has_covering_component(current, query)) return std::nullopt;
    // One canonical pass suffices: a tuple that cannot go now cannot go later.
    for (std::size_t i = 0; i < current.size();) {
        std::vector<Tuple> without = current;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
        if (has_covering_component(without, query)) {
            current = std::move(without);
        } else {
            ++i;
        }
    }
    return Answer{std::move(current)};
}

bool check_answer(std::span<const Tuple> candidate, const KeywordQuery& query, std::span<const Tuple> reachable) {
    auto c = canonical_copy(candidate);
    std::set<Tuple> pool(reachable.begin(), reachable.end());
    if (!std::ranges::all_of(c, [&](const Tuple& t) { return pool.contains(t); })) return false;
    if (!is_connected_covering(c, query)) return false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::vector<Tuple> without = c;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
        if (has_covering_component(without, query)) return false;
    }
    return true;
}

std::optional<Answer> optimal_answer_within(std::span<const Tuple> tuples, const KeywordQuery& query) {
    auto all = canonical_copy(tuples);
    std::vector<std::vector<std::size_t>> comps;
    for (auto& comp : tuple_components(all))
        if (component_covers(all, comp, query)) comps.push_back(comp);
    if (comps.empty()) return std::nullopt;

    std::size_t largest = 0;
    for (const auto& comp : comps) largest = std::max(largest, comp.size());
    for (std::size_t k = 1; k <= largest; ++k) {
        std::optional<std::vector<std::size_t>> best;
        for (const auto& comp : comps) {
            if (comp.size() < k) continue;
            // k-combinations of this component in lexicographic index order.
            std::vector<std::size_t> pick(k);
            for (std::size_t i = 0; i < k; ++i) pick[i] = i;
            while (true) {
                std::vector<Tuple> subset;
                std::vector<std::size_t> ids;
                for (auto p : pick) {
                    subset.push_back(all[comp[p]]);
                    ids.push_back(comp[p]);
                }
                if (is_connected_covering(subset, query)) {
                    if (!best || ids < *best) best = ids;
                    break;
                }
                std::size_t i = k;
                while (i > 0 && pick[i - 1] == comp.size() - k + (i - 1)) --i;
                if (i == 0) break;
                ++pick[i - 1];
                for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
        if (best) {
            Answer a;
            for (auto i : *best) a.tuples.push_back(all[i]);
            return a;
        }
    }
    return std::nullopt;
}

std::vector<Tuple> reachable_portion(const DatabaseSchema& schema, AccessExecutor& executor,
                                     std::span<const Keyword> constants) {
    auto domains = schema.attribute_domains();
    std::map<std::string, std::set<std::string>> known;
    for (const auto& k : constants) {
        if (k.domain) {
            known[*k.domain].insert(k.literal);
        } else {
            for (const auto& d : domains) known[d].insert(k.literal);
        }
    }
    std::vector<const RelationSchema*> order;
    for (const auto& r : schema.relations()) order.push_back(&r);
    std::ranges::sort(order, [](auto* a, auto* b) { return a->name() < b->name(); });

    std::set<Tuple> found;
    std::set<Binding> tried;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto* r : order) {
            std::vector<std::vector<std::string>> lists;
            for (auto p : r->input_positions()) {
                const auto& s = known[r->attributes()[p].domain];
                lists.emplace_back(s.begin(), s.end());
            }
            for (auto& b : product(*r, lists)) {
                if (!tried.insert(b).second) continue;
                changed = true;
                for (auto& t : executor.access(r->name(), b)) {
                    for (const auto& v : t.values()) known[v.domain].insert(v.literal);
                    found.insert(std::move(t));
                }
            }
        }
    }
    return {found.begin(), found.end()};
}

std::vector<Tuple> reachable_portion(const DatabaseSchema& schema, AccessExecutor& executor,
                                     std::span<const Value> constants) {
    std::vector<Keyword> ks;
    for (const auto& v : constants) ks.push_back(Keyword{v.literal, v.domain});
    return reachable_portion(schema, executor, ks);
}

std::optional<Answer> optimal_answer(const KeywordQuery& query, const DatabaseSchema& schema,
                                     AccessExecutor& executor) {
    auto reach = reachable_portion(schema, executor, query.keywords());
    return optimal_answer_within(reach, query);
}

// ---------------------------------------------------------------------------

namespace {

class Extractor {
public:
    Extractor(const KeywordQuery& query, const DatabaseSchema& schema, AccessExecutor& executor,
              const ExtractOptions& options)
        : query_(query), schema_(schema), executor_(executor), options_(options) {
        for (const auto& k : query_.keywords()) known_domain_.push_back(k.domain);
        auto doms = schema_.attribute_domains();
        attribute_domains_.assign(doms.begin(), doms.end());
    }

    ExtractResult run(bool unknown_domains) {
        result_.answerable = unknown_domains ? answerable_for_some_typing(query_, schema_)
                                             : answerable(query_, schema_);
        if (!result_.answerable) return std::move(result_);
        rebuild_planner();
        while (result_.witnesses.size() < options_.max_witnesses) {
            auto walk = next_witness();
            if (!walk) break;
            std::vector<std::string> names;
            for (auto r : *walk) names.push_back(schema_.relations()[r].name());
            result_.witnesses.push_back(std::move(names));
            if (follow(*walk, 0)) {
                result_.answer = std::move(answer_);
                break;
            }
        }
        return std::move(result_);
    }

private:
    void rebuild_planner() {
        std::vector<std::vector<std::string>> candidates;
        for (const auto& d : known_domain_) {
            if (d) {
                candidates.push_back({*d});
            } else {
                candidates.push_back(attribute_domains_);
            }
        }
        planner_ = std::make_unique<WitnessPlanner>(schema_, std::move(candidates), options_.order);
    }

    std::vector<std::string> container(const std::string& domain) const {
        std::set<std::string> out;
        if (auto it = extracted_.find(domain); it != extracted_.end()) out = it->second;
        for (std::size_t i = 0; i < known_domain_.size(); ++i)
            if (!known_domain_[i] || *known_domain_[i] == domain) out.insert(query_.keywords()[i].literal);
        return {out.begin(), out.end()};
    }

    const std::vector<Binding>& formable(std::size_t r) {
        auto& slot = formable_cache_[r];
        if (slot.first != version_ + 1) {
            const auto& rel = schema_.relations()[r];
            std::vector<std::vector<std::string>> lists;
            for (auto p : rel.input_positions()) lists.push_back(container(rel.attributes()[p].domain));
            slot = {version_ + 1, product(rel, lists)};
        }
        return slot.second;
    }

    bool has_new(std::size_t r) {
        return std::ranges::any_of(formable(r), [&](const Binding& b) { return !attempted_.contains(b); });
    }

    // Whether the walk can make progress now: every position before the first
    // one with a fresh binding has some binding at all.
    enum class Prefix { progress, blocked, exhausted };
    Prefix status(const WitnessPlanner::Walk& walk) {
        for (auto r : walk) {
            if (formable(r).empty()) return Prefix::blocked;
            if (has_new(r)) return Prefix::progress;
        }
        return Prefix::exhausted;
    }

    std::optional<WitnessPlanner::Walk> next_witness() {
        bool any = false;
        for (std::size_t r = 0; r < schema_.size() && !any; ++r) any = planner_->is_candidate(r) && has_new(r);
        if (!any) return std::nullopt;
        std::vector<bool> accessed;
        for (const auto& r : schema_.relations()) accessed.push_back(executor_.has_accessed(r.name()));
        std::optional<WitnessPlanner::Walk> found;
        for (std::size_t level = 0; level <= planner_->cost_horizon() && !found; ++level) {
            planner_->visit_level(
                level, accessed,
                [&](const WitnessPlanner::Walk& w) {
                    if (status(w) != Prefix::progress) return false;
                    found = w;
                    return true;
                },
                [&](const WitnessPlanner::Walk& w) { return status(w) == Prefix::blocked; });
        }
        return found;
    }

    // Records the output of one access.  Returns whether any tuple was new.
    bool absorb(std::vector<Tuple> tuples) {
        bool fresh = false;
        bool discovered = false;
        for (auto& t : tuples) {
            if (!seen_.insert(t).second) continue;
            fresh = true;
            for (const auto& v : t.values()) extracted_[v.domain].insert(v.literal);
            for (std::size_t i = 0; i < known_domain_.size(); ++i) {
                if (known_domain_[i]) continue;
                for (const auto& v : t.values())
                    if (v.literal == query_.keywords()[i].literal) {
                        known_domain_[i] = v.domain;
                        discovered = true;
                        break;
                    }
            }
        }
        if (fresh || discovered) ++version_;
        if (discovered) rebuild_planner();
        return fresh;
    }

    bool try_peel() {
        std::vector<Tuple> all(seen_.begin(), seen_.end());
        if (options_.coverage_precheck && !covers(all, query_)) return false;
        answer_ = peel(all, query_);
        return answer_.has_value();
    }

    // Depth-first over the walk; true once an answer is found.
    bool follow(const WitnessPlanner::Walk& walk, std::size_t pos) {
        if (pos == walk.size()) return false;
        const auto r = walk[pos];
        const auto& name = schema_.relations()[r].name();
        std::set<Binding> tried_here;
        std::optional<std::size_t> recursed_at;
        while (true) {
            std::vector<Binding> pending;
            for (const auto& b : formable(r))
                if (!tried_here.contains(b)) pending.push_back(b);
            if (pending.empty()) return false;
            for (auto& b : pending) {
                tried_here.insert(b);
                if (attempted_.insert(b).second) {
                    if (absorb(executor_.access(name, b)) && try_peel()) return true;
                }
                if (recursed_at == version_) continue;
                if (follow(walk, pos + 1)) return true;
                recursed_at = version_;
            }
        }
    }

    const KeywordQuery& query_;
    const DatabaseSchema& schema_;
    AccessExecutor& executor_;
    ExtractOptions options_;
    std::vector<std::optional<std::string>> known_domain_;
    std::vector<std::string> attribute_domains_;
    std::map<std::string, std::set<std::string>> extracted_;
    std::set<Tuple> seen_;
    std::set<Binding> attempted_;
    std::size_t version_ = 0;
    std::map<std::size_t, std::pair<std::size_t, std::vector<Binding>>> formable_cache_;
    std::unique_ptr<WitnessPlanner> planner_;
    std::optional<Answer> answer_;
    ExtractResult result_;
};

}  // namespace

ExtractResult extract(const KeywordQuery& query, const DatabaseSchema& schema, AccessExecutor& executor,
                      const ExtractOptions& options) {
    if (query.any_untyped()) throw UnknownDomainError("extract needs typed keywords; see extract_unknown_domains");
    return Extractor(query, schema, executor, options).run(false);
}

ExtractResult extract_unknown_domains(const KeywordQuery& query, const DatabaseSchema& schema,
                                      AccessExecutor& executor, const ExtractOptions& options) {
    return Extractor(query, schema, executor, options).run(true);
}

}  // namespace kwdeep
