// kwdeep: keyword queries over sources with access patterns.
#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "kwdeep/cli.h"

int main(int argc, char** argv) {
    CLI::App app{"Keyword queries over relational sources with access limitations"};
    app.require_subcommand(1, 1);

    kwdeep::RunConfig config;
    const std::map<std::string, kwdeep::Mode> modes{{"analyze", kwdeep::Mode::analyze},
                                                    {"query", kwdeep::Mode::query},
                                                    {"reach", kwdeep::Mode::reach},
                                                    {"optimal", kwdeep::Mode::optimal},
                                                    {"stats", kwdeep::Mode::stats}};
    const std::map<std::string, std::string> blurbs{
        {"analyze", "compatibility, answerability, visible and useful relations"},
        {"query", "extract an answer through the access patterns"},
        {"reach", "reachable portion from --constants"},
        {"optimal", "smallest answer in the reachable portion"},
        {"stats", "extract accesses against the reachable-portion baseline"}};

    for (const auto& [name, mode] : modes) {
        auto* sub = app.add_subcommand(name, blurbs.at(name));
        sub->add_option("--schema", config.schema_path, "schema file")->required();
        if (mode != kwdeep::Mode::analyze)
            sub->add_option("--instance", config.instance_path, "instance file")->required();
        if (mode == kwdeep::Mode::reach) {
            sub->add_option("--constants", config.constants, "comma-separated literal[:Domain] list")->required();
        } else {
            sub->add_option("--query", config.query, "comma-separated literal[:Domain] keywords")->required();
        }
        sub->add_option("--dot", config.dot_dir, "directory for DOT exports");
        sub->add_option("--log", config.log_path, "write the access log here");
        sub->add_flag("--seedless", config.seedless, "peel on every access, without the coverage pre-check");
        sub->add_flag("--timing", config.timing, "include elapsed_ms in reports");
        sub->callback([&config, mode = mode] { config.mode = mode; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kwdeep::exit_input_error;
    }
    return kwdeep::run(config, std::cout, std::cerr);
}
