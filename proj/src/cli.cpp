#include "kwdeep/cli.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "kwdeep/analysis.h"
#include "kwdeep/engine.h"
#include "kwdeep/graphs.h"
#include "kwdeep/io.h"
#include "kwdeep/report.h"

namespace kwdeep {

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string join(const std::set<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ",") + n;
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path.string() + "'");
    f << text;
}

DatabaseSchema load_schema(const RunConfig& c, std::ostream& err) {
    if (c.schema_path.empty()) throw InputError("--schema is required");
    DatabaseSchema schema;
    try {
        schema = parse_schema(read_file(c.schema_path));
    } catch (const ParseError& e) {
        throw InputError(c.schema_path + ":" + e.what());
    }
    auto v = validate_schema(schema);
    if (!v.ok()) {
        for (const auto& m : v.violations) err << c.schema_path << ": " << m << "\n";
        throw InputError("invalid schema");
    }
    return schema;
}

DatabaseInstance load_instance(const RunConfig& c, const DatabaseSchema& schema, const KeywordQuery* query,
                               std::ostream& err) {
    if (c.instance_path.empty()) throw InputError("--instance is required");
    DatabaseInstance inst;
    try {
        inst = parse_instance(read_file(c.instance_path), schema);
    } catch (const ParseError& e) {
        throw InputError(c.instance_path + ":" + e.what());
    }
    // Overlapping domains are reported but tolerated.
    for (const auto& m : validate_instance(schema, inst, query).violations)
        err << "warning: " << c.instance_path << ": " << m << "\n";
    return inst;
}

KeywordQuery load_query(const RunConfig& c) {
    if (c.query.empty()) throw InputError("--query is required");
    try {
        return parse_query(c.query);
    } catch (const ParseError& e) {
        throw InputError(std::string("--query:") + e.what());
    }
}

void write_log(const RunConfig& c, const AccessExecutor& ex) {
    if (c.log_path) write_text(*c.log_path, format_access_log(ex.log()));
}

int analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto schema = load_schema(c, err);
    auto query = load_query(c);
    if (query.any_untyped()) throw InputError("analyze needs a domain for every keyword");
    for (const auto& k : query.keywords())
        if (!schema.domains().contains(*k.domain)) throw InputError("unknown domain '" + *k.domain + "'");
    bool comp = compatible(query, schema);
    bool ans = answerable(query, schema);
    out << "compatible=" << (comp ? "true" : "false") << " answerable=" << (ans ? "true" : "false")
        << " visible=" << join(visible_subschema(query, schema)) << " useful=" << join(useful_nodes(query, schema))
        << "\n";
    if (c.dot_dir) {
        std::filesystem::create_directories(*c.dot_dir);
        std::filesystem::path dir(*c.dot_dir);
        write_text(dir / "schema_join_graph.dot", to_dot(schema_join_graph(schema)));
        write_text(dir / "d_graph.dot", to_dot(d_graph(schema, query)));
    }
    return ans ? exit_found : exit_not_found;
}

int query_mode(const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto schema = load_schema(c, err);
    auto query = load_query(c);
    auto inst = load_instance(c, schema, &query, err);
    auto ex = AccessExecutor::over(schema, inst);
    ExtractOptions opts;
    opts.coverage_precheck = !c.seedless;
    auto start = std::chrono::steady_clock::now();
    auto res = query.any_untyped() ? extract_unknown_domains(query, schema, ex, opts) : extract(query, schema, ex, opts);
    std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    RunReport report{res.answer, ex.stats(), res.witnesses.size(), std::nullopt};
    if (c.timing) report.elapsed_ms = elapsed.count();
    out << to_json(report);
    write_log(c, ex);
    if (c.dot_dir && res.answer) {
        std::filesystem::create_directories(*c.dot_dir);
        write_text(std::filesystem::path(*c.dot_dir) / "answer_join_graph.dot", to_dot(join_graph(res.answer->tuples)));
    }
    return res.answer ? exit_found : exit_not_found;
}

int reach_mode(const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto schema = load_schema(c, err);
    auto inst = load_instance(c, schema, nullptr, err);
    std::vector<Keyword> constants;
    try {
        constants = parse_keywords(c.constants);
    } catch (const ParseError& e) {
        throw InputError(std::string("--constants:") + e.what());
    }
    auto ex = AccessExecutor::over(schema, inst);
    for (const auto& t : reachable_portion(schema, ex, constants)) out << t.text() << "\n";
    write_log(c, ex);
    return exit_found;
}

int optimal_mode(const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto schema = load_schema(c, err);
    auto query = load_query(c);
    auto inst = load_instance(c, schema, &query, err);
    auto ex = AccessExecutor::over(schema, inst);
    auto start = std::chrono::steady_clock::now();
    auto answer = optimal_answer(query, schema, ex);
    std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    RunReport report{answer, ex.stats(), 0, std::nullopt};
    if (c.timing) report.elapsed_ms = elapsed.count();
    out << to_json(report);
    write_log(c, ex);
    return answer ? exit_found : exit_not_found;
}

int stats_mode(const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto schema = load_schema(c, err);
    auto query = load_query(c);
    auto inst = load_instance(c, schema, &query, err);
    auto ex = AccessExecutor::over(schema, inst);
    ExtractOptions opts;
    opts.coverage_precheck = !c.seedless;
    auto res = query.any_untyped() ? extract_unknown_domains(query, schema, ex, opts) : extract(query, schema, ex, opts);
    auto base = AccessExecutor::over(schema, inst);
    reachable_portion(schema, base, query.keywords());
    auto a = ex.stats();
    auto b = base.stats();
    out << "relation\textract\tbaseline\n";
    for (const auto& [rel, n] : a.per_relation) out << rel << "\t" << n << "\t" << b.per_relation[rel] << "\n";
    out << "total\t" << a.total << "\t" << b.total << "\n";
    out << "verdict\t" << (res.answer ? "answer" : "no-answer") << "\n";
    write_log(c, ex);
    return res.answer ? exit_found : exit_not_found;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.mode) {
            case Mode::analyze: return analyze(config, out, err);
            case Mode::query: return query_mode(config, out, err);
            case Mode::reach: return reach_mode(config, out, err);
            case Mode::optimal: return optimal_mode(config, out, err);
            case Mode::stats: return stats_mode(config, out, err);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
    }
    return exit_input_error;
}

}  // namespace kwdeep
