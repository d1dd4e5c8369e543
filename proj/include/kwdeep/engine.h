#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kwdeep/analysis.h"
#include "kwdeep/core.h"
#include "kwdeep/source.h"

namespace kwdeep {

struct Answer {
    std::vector<Tuple> tuples;  // canonical order

    bool operator==(const Answer&) const = default;
};

/// Some connected component of the join graph covers every keyword.
bool has_covering_component(std::span<const Tuple> tuples, const KeywordQuery& query);

/// Minimal answer inside `tuples`, obtained by repeatedly dropping tuples
/// (canonical order) whose removal keeps a covering component.  Empty when
/// no component covers the query.
std::optional<Answer> peel(std::span<const Tuple> tuples, const KeywordQuery& query);

/// `candidate` is drawn from `reachable`, covers the query, is connected and
/// no proper subset is.
bool check_answer(std::span<const Tuple> candidate, const KeywordQuery& query, std::span<const Tuple> reachable);

struct ExtractOptions {
    /// Skip the peeling step while the extracted tuples miss some keyword.
    bool coverage_precheck = true;
    WitnessOrder order = WitnessOrder::canonical;
    std::size_t max_witnesses = std::numeric_limits<std::size_t>::max();
};

struct ExtractResult {
    std::optional<Answer> answer;
    bool answerable = false;
    /// Witnesses in the order they were followed.
    std::vector<std::vector<std::string>> witnesses;
};

/// Answer extraction driven by witnesses.  Untyped keywords are rejected
/// with UnknownDomainError; use extract_unknown_domains for those.
ExtractResult extract(const KeywordQuery& query, const DatabaseSchema& schema, AccessExecutor& executor,
                      const ExtractOptions& options = {});

/// Variant accepting untyped keywords: they are tried in every domain until
/// an extracted tuple reveals where they live.
ExtractResult extract_unknown_domains(const KeywordQuery& query, const DatabaseSchema& schema,
                                      AccessExecutor& executor, const ExtractOptions& options = {});

/// Every tuple obtainable from `constants` through the access patterns.
/// Untyped constants are tried in every attribute domain.
std::vector<Tuple> reachable_portion(const DatabaseSchema& schema, AccessExecutor& executor,
                                     std::span<const Keyword> constants);
std::vector<Tuple> reachable_portion(const DatabaseSchema& schema, AccessExecutor& executor,
                                     std::span<const Value> constants);

/// Smallest answer within the reachable portion, by exhaustive search.
std::optional<Answer> optimal_answer(const KeywordQuery& query, const DatabaseSchema& schema,
                                     AccessExecutor& executor);

/// Same, over an explicit tuple set.
std::optional<Answer> optimal_answer_within(std::span<const Tuple> tuples, const KeywordQuery& query);

}  // namespace kwdeep
