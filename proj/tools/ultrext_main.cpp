// Command-line front end. Talks to the engine exclusively through the C API.

#include "ultrext/ultrext.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string make_config(bool json, bool timings, bool parallel, bool fail_fast,
                        unsigned long long seed, const std::string& universe) {
    std::ostringstream out;
    out << "{\"json\":" << (json ? "true" : "false");
    out << ",\"timings\":" << (timings ? "true" : "false");
    out << ",\"parallel\":" << (parallel ? "true" : "false");
    out << ",\"fail_fast\":" << (fail_fast ? "true" : "false");
    out << ",\"seed\":" << seed;
    if (!universe.empty()) {
        out << ",\"universe\":[";
        std::stringstream labels(universe);
        std::string label;
        bool first = true;
        while (std::getline(labels, label, ',')) {
            if (!first) out << ",";
            first = false;
            out << "\"" << label << "\"";
        }
        out << "]";
    }
    out << "}";
    return out.str();
}

int run_file(const std::string& path, const std::string& config) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();

    ux_session* session = ux_session_new(config.c_str());
    if (!session) {
        std::cerr << "invalid configuration\n";
        return 2;
    }
    char* records = nullptr;
    int failures = 0;
    ux_status status = ux_run_script(session, buffer.str().c_str(), &records, &failures);
    if (status == UX_ERR_PARSE) {
        std::cerr << "parse error: " << ux_last_error(session) << "\n";
        ux_session_free(session);
        return 2;
    }
    if (status != UX_OK) {
        std::cerr << "error: " << ux_last_error(session) << "\n";
        ux_session_free(session);
        return 1;
    }
    std::cout << records;
    ux_string_free(records);
    ux_session_free(session);
    return failures > 0 ? 1 : 0;
}

int run_repl(const std::string& config) {
    ux_session* session = ux_session_new(config.c_str());
    if (!session) {
        std::cerr << "invalid configuration\n";
        return 2;
    }
    std::cout << "ultrext " << ux_version() << " -- :load FILE, :env, :quit\n";
    std::string line;
    while (true) {
        std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        if (line == ":quit" || line == ":q") break;
        if (line == ":env") {
            char* env = ux_environment(session);
            std::cout << env;
            ux_string_free(env);
            continue;
        }
        if (line.rfind(":load ", 0) == 0) {
            std::ifstream in(line.substr(6));
            if (!in) {
                std::cout << "cannot open " << line.substr(6) << "\n";
                continue;
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            line = buffer.str();
        }
        char* records = nullptr;
        ux_status status = ux_eval(session, line.c_str(), &records);
        if (status == UX_OK) {
            std::cout << records;
            ux_string_free(records);
        } else {
            std::cout << "error: " << ux_last_error(session) << "\n";
        }
    }
    ux_session_free(session);
    return 0;
}

int run_check(const std::string& suite, int trials, unsigned long long seed, bool json) {
    if (suite == "list") {
        for (int i = 0; i < ux_suite_count(); ++i) std::cout << ux_suite_name(i) << "\n";
        return 0;
    }
    char* report = nullptr;
    int failures = 0;
    ux_status status = ux_check_suite(suite.c_str(), trials, seed, json ? 1 : 0, &report, &failures);
    if (status == UX_ERR_INVALID_ARGUMENT) {
        std::cerr << "unknown suite: " << suite << " (try 'ultrext check list')\n";
        return 2;
    }
    if (status != UX_OK) {
        std::cerr << "suite failed to run\n";
        return 1;
    }
    std::cout << report;
    ux_string_free(report);
    return failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for ultrafilter extensions of first-order models"};
    app.require_subcommand(1);

    bool json = false, timings = false, parallel = false, fail_fast = false;
    unsigned long long seed = 0;
    std::string universe;
    std::string backend = "symbolic";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", json, "structured JSON output, one record per line");
        cmd->add_flag("--timings", timings, "append timing fields (breaks byte-stable output)");
        cmd->add_option("--seed", seed, "generator seed (ULTREXT_SEED as fallback)");
        cmd->add_option("--backend", backend, "symbolic (default) or finite");
        cmd->add_option("--universe", universe, "finite universe labels, comma separated");
    };

    std::string script_path;
    auto* run = app.add_subcommand("run", "run a script file");
    run->add_option("file", script_path, "script file")->required();
    add_common(run);
    run->add_flag("--parallel", parallel, "evaluate queries concurrently after definitions");
    run->add_flag("--fail-fast", fail_fast, "stop at the first failed statement");

    auto* repl = app.add_subcommand("repl", "interactive session");
    add_common(repl);

    std::string suite;
    int trials = 200;
    auto* check = app.add_subcommand("check", "run a differential suite ('list' to enumerate)");
    check->add_option("suite", suite, "suite name")->required();
    check->add_option("--trials", trials, "number of generated cases");
    check->add_option("--seed", seed, "generator seed");
    check->add_flag("--json", json, "JSON report");

    CLI11_PARSE(app, argc, argv);

    if (backend == "finite" && universe.empty()) universe = "a,b,c";
    if (backend != "finite") universe.clear();
    std::string config = make_config(json, timings, parallel, fail_fast, seed, universe);

    if (run->parsed()) return run_file(script_path, config);
    if (repl->parsed()) return run_repl(config);
    if (check->parsed()) return run_check(suite, trials, seed, json);
    return 2;
}
