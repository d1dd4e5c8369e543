#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "kwdeep/cli.h"
#include "support.h"

using namespace kwtest;

namespace {
struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome invoke(const RunConfig& c) {
    std::ostringstream out, err;
    int status = run(c, out, err);
    return {status, out.str(), err.str()};
}

RunConfig config(Mode mode, const std::string& stem, const std::string& query) {
    RunConfig c;
    c.mode = mode;
    c.schema_path = data_path(stem + ".schema");
    c.instance_path = data_path(stem + ".instance");
    c.query = query;
    return c;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("kwdeep_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}
}  // namespace

TEST_CASE("analyze on a non-answerable query") {
    auto r = invoke(config(Mode::analyze, "ex8", "a:A,c:C"));
    CHECK(r.status == 1);
    CHECK(r.out == "compatible=true answerable=false visible=r,s useful=r,s\n");
}

TEST_CASE("analyze on the intro query, with DOT files") {
    auto c = config(Mode::analyze, "intro", "IT:Dept,DBA:Role");
    auto dir = scratch("dot");
    c.dot_dir = dir.string();
    auto r = invoke(c);
    CHECK(r.status == 0);
    CHECK(r.out == "compatible=true answerable=true visible=r1,r2,r3 useful=r1,r2,r3\n");
    CHECK(std::filesystem::exists(dir / "schema_join_graph.dot"));
    CHECK(std::filesystem::exists(dir / "d_graph.dot"));
}

TEST_CASE("query prints the two-tuple answer after three accesses") {
    auto c = config(Mode::query, "intro", "IT:Dept,DBA:Role");
    auto log = scratch("log.tsv");
    c.log_path = log.string();
    auto r = invoke(c);
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "answer");
    CHECK(j["tuples"] == nlohmann::json::array({"r1(IT, John)", "r3(P1, John, DBA)"}));
    CHECK(j["total_accesses"] == 3);
    CHECK(j["per_relation"]["r2"] == 1);
    CHECK(j["witnesses_attempted"] == 1);
    CHECK_FALSE(j.contains("elapsed_ms"));
    CHECK(read_file(log.string()) == "1\tr1\tIT\t1\n2\tr2\tJohn\t1\n3\tr3\tP1\t2\n");
}

TEST_CASE("untyped keywords switch to the unknown-domain mode") {
    auto r = invoke(config(Mode::query, "intro", "IT,DBA"));
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["total_accesses"] == 6);
}

TEST_CASE("timing is opt-in") {
    auto c = config(Mode::query, "intro", "IT:Dept,DBA:Role");
    c.timing = true;
    CHECK(nlohmann::json::parse(invoke(c).out).contains("elapsed_ms"));
}

TEST_CASE("reports are byte-identical across runs") {
    for (auto mode : {Mode::query, Mode::optimal, Mode::stats}) {
        auto c = config(mode, "cycle", "a:A,c:C");
        CHECK(invoke(c).out == invoke(c).out);
    }
}

TEST_CASE("no answer exits with 1") {
    auto r = invoke(config(Mode::query, "intro", "AI:Dept,DBA:Role"));
    CHECK(r.status == 1);
    CHECK(nlohmann::json::parse(r.out)["verdict"] == "no-answer");
}

TEST_CASE("reach prints the reachable tuples") {
    auto c = config(Mode::reach, "ex1", "");
    c.constants = "c0:A1";
    auto r = invoke(c);
    CHECK(r.status == 0);
    CHECK(r.out == "r1(c0, c1)\nr1(c2, c3)\nr2(c1, c2)\nr2(c1, c6)\nr3(c2, c1, c8)\nr3(c6, c8, c9)\n");
    // Example 1 overlaps domains on c8; that is a warning, not an error.
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("optimal mode") {
    auto r = invoke(config(Mode::optimal, "cycle", "a:A,c:C"));
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)["tuples"] == nlohmann::json::array({"s(b3, c, a)"}));
}

TEST_CASE("stats never shows extract above the baseline") {
    for (std::string stem : {"intro", "cycle", "selfloop", "ex1"}) {
        std::string q = stem == "intro" ? "IT:Dept,DBA:Role" : stem == "ex1" ? "c0,c8" : "a:A,c:C";
        auto r = invoke(config(Mode::stats, stem, q));
        std::istringstream in(r.out);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.starts_with("total")) continue;
            std::istringstream f(line.substr(6));
            std::size_t a = 0, b = 0;
            f >> a >> b;
            CHECK(a <= b);
        }
    }
}

TEST_CASE("input errors exit with 2 and a position") {
    auto dir = scratch("bad");
    std::filesystem::create_directories(dir);
    auto bad = dir / "bad.schema";
    {
        std::ofstream f(bad);
        f << "r(a:A)\ns(b B)\n";
    }
    auto c = config(Mode::analyze, "intro", "x:A");
    c.schema_path = bad.string();
    auto r = invoke(c);
    CHECK(r.status == 2);
    CHECK(r.err.find(":2:") != std::string::npos);

    auto missing = config(Mode::query, "nope", "a:A");
    CHECK(invoke(missing).status == 2);
    auto empty = config(Mode::query, "intro", "");
    CHECK(invoke(empty).status == 2);
    auto unknown = config(Mode::analyze, "intro", "IT:Nope");
    CHECK(invoke(unknown).status == 2);
}
