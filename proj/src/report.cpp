#include "kwdeep/report.h"

#include <json.hpp>

namespace kwdeep {

std::string to_json(const RunReport& report) {
    nlohmann::ordered_json j;
    j["verdict"] = report.answer ? "answer" : "no-answer";
    auto tuples = nlohmann::ordered_json::array();
    if (report.answer)
        for (const auto& t : report.answer->tuples) tuples.push_back(t.text());
    j["tuples"] = tuples;
    j["total_accesses"] = report.stats.total;
    auto per = nlohmann::ordered_json::object();
    for (const auto& [rel, n] : report.stats.per_relation) per[rel] = n;
    j["per_relation"] = per;
    j["witnesses_attempted"] = report.witnesses_attempted;
    if (report.elapsed_ms) j["elapsed_ms"] = *report.elapsed_ms;
    return j.dump(2) + "\n";
}

}  // namespace kwdeep
