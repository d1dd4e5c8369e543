#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kwdeep/core.h"
#include "kwdeep/graphs.h"
#include "kwdeep/source.h"

namespace kwdeep {

/// A keyword whose domain is unknown, or not in the schema catalog, was given
/// to an analysis that needs typed keywords.
class UnknownDomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Whether an answer is possible under some access patterns and some
/// instance.  Keywords are chained in query order.
bool compatible(const KeywordQuery& query, const DatabaseSchema& schema);

/// Whether an answer is possible under the schema's access patterns for
/// some instance: compatibility against the visible part of the schema.
bool answerable(const KeywordQuery& query, const DatabaseSchema& schema);

/// answerable() for some assignment of domains to the untyped keywords.
bool answerable_for_some_typing(const KeywordQuery& query, const DatabaseSchema& schema);

/// Largest sub-schema whose relations are all visible once the keyword
/// relations are added.
std::set<std::string> visible_subschema(const KeywordQuery& query, const DatabaseSchema& schema);

/// Relations that may provide a keyword, or values that let a useful
/// relation be accessed.
std::set<std::string> useful_nodes(const KeywordQuery& query, const DatabaseSchema& schema);

/// A small instance on which `query` has an answer, built by chaining tuples
/// along schema join graph paths between consecutive keywords.  Extra
/// "feeder" tuples make every chain tuple reachable through the access
/// patterns.  Empty when the query is not answerable.
std::optional<DatabaseInstance> construct_answer_instance(const KeywordQuery& query, const DatabaseSchema& schema);

struct Witness {
    std::vector<std::string> path;
    /// Position of a relation anchoring each keyword (query order).
    std::vector<std::size_t> anchors;
    std::size_t cost = 0;
};

enum class WitnessOrder { canonical, reversed };

/// Static witness structure for one query typing.  Walks range over the
/// schema join graph; cost is the walk length minus the number of distinct
/// relations on it that were already accessed.
class WitnessPlanner {
public:
    using Walk = std::vector<std::size_t>;

    WitnessPlanner(const DatabaseSchema& schema, std::vector<std::vector<std::string>> keyword_domains,
                   WitnessOrder order = WitnessOrder::canonical);

    const DatabaseSchema& schema() const { return schema_; }

    /// Relations occurring in at least one witness.
    bool is_candidate(std::size_t relation) const { return (candidates_ >> relation) & 1U; }
    bool has_witnesses() const { return candidates_ != 0; }
    /// False when every witness is a single relation without a self-loop.
    bool infinite() const { return infinite_; }
    /// Upper bound on the cost at which a witness through any candidate
    /// relation appears.
    std::size_t cost_horizon() const { return horizon_; }

    bool is_witness(const Walk& walk) const;
    std::size_t cost(const Walk& walk, const std::vector<bool>& accessed) const;
    Witness describe(const Walk& walk, const std::vector<bool>& accessed) const;

    /// Visits the witnesses of exactly `level` cost in tie-break order.
    /// The visitor returns true to stop; the return value reports whether it did.
    /// `prune`, when set, cuts a walk together with all its extensions.
    bool visit_level(std::size_t level, const std::vector<bool>& accessed,
                     const std::function<bool(const Walk&)>& visitor,
                     const std::function<bool(const Walk&)>& prune = {}) const;

private:
    bool extend(Walk& walk, std::size_t partial, std::size_t level, std::uint64_t distinct_accessed,
                const std::vector<bool>& accessed, const std::function<bool(const Walk&)>& visitor,
                const std::function<bool(const Walk&)>& prune) const;
    bool visible_within(std::uint64_t mask) const;
    bool anchors_some(std::size_t relation) const;

    DatabaseSchema schema_;
    std::vector<std::vector<std::string>> keyword_domains_;
    SchemaJoinGraph graph_;
    std::vector<std::size_t> start_order_;
    std::vector<std::vector<std::size_t>> neighbours_;
    std::vector<std::uint64_t> anchor_masks_;  // per keyword
    std::set<std::string> seeded_domains_;
    std::uint64_t candidates_ = 0;
    bool infinite_ = false;
    std::size_t horizon_ = 0;
    mutable std::unordered_map<std::uint64_t, bool> visible_memo_;
    mutable std::map<std::tuple<std::uint64_t, std::uint64_t, std::size_t>, bool> witness_memo_;
};

/// Witnesses in nondecreasing cost order against a snapshot of which
/// relations `executor` has accessed (none when null).  The stream is
/// infinite whenever some witness has two or more nodes.
class WitnessStream {
public:
    WitnessStream(const KeywordQuery& query, const DatabaseSchema& schema, const AccessExecutor* executor = nullptr,
                  WitnessOrder order = WitnessOrder::canonical);

    std::optional<Witness> next();

private:
    WitnessPlanner planner_;
    std::vector<bool> accessed_;
    std::size_t level_ = 0;
    std::vector<Witness> buffer_;
    std::size_t cursor_ = 0;
};

/// Domain candidates for each keyword; throws UnknownDomainError for typed
/// keywords whose domain is not in the catalog.
std::vector<std::vector<std::string>> checked_keyword_domains(const KeywordQuery& query,
                                                              const DatabaseSchema& schema);

}  // namespace kwdeep
