#include "ultrext/ultrext.h"

#include "engine.hpp"
#include "oracle.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>

struct ux_session {
    std::unique_ptr<ultrext::Session> session;
    std::string last_error;
    int last_line = 0;
    int last_column = 0;
};

namespace {

char* dup_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

std::string render_all(const ultrext::Session& session,
                       const std::vector<ultrext::ResultRecord>& records) {
    std::string out;
    for (const auto& record : records) {
        out += session.render(record);
        out += "\n";
    }
    return out;
}

void clear_error(ux_session* s) {
    s->last_error.clear();
    s->last_line = 0;
    s->last_column = 0;
}

std::string report_to_text(const ultrext::Report& report) {
    std::ostringstream out;
    out << "suite=" << report.name << " trials=" << report.trials
        << " resolved=" << report.resolved << " failures=" << report.failures.size()
        << " status=" << (report.passed() ? "pass" : "fail") << "\n";
    for (const auto& failure : report.failures) out << "failure: " << failure << "\n";
    return out.str();
}

std::string report_to_json(const ultrext::Report& report) {
    nlohmann::ordered_json j;
    j["suite"] = report.name;
    j["trials"] = report.trials;
    j["resolved"] = report.resolved;
    j["failures"] = report.failures;
    j["status"] = report.passed() ? "pass" : "fail";
    return j.dump() + "\n";
}

}  // namespace

extern "C" {

ux_session* ux_session_new(const char* config_json) {
    ultrext::EngineConfig config;
    if (config_json && *config_json) {
        nlohmann::json parsed = nlohmann::json::parse(config_json, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object()) return nullptr;
        config.json = parsed.value("json", false);
        config.timings = parsed.value("timings", false);
        config.parallel = parsed.value("parallel", false);
        config.fail_fast = parsed.value("fail_fast", false);
        config.seed = parsed.value("seed", 0ull);
        if (parsed.contains("universe")) {
            if (!parsed["universe"].is_array()) return nullptr;
            for (const auto& label : parsed["universe"]) {
                if (!label.is_string()) return nullptr;
                config.universe_labels.push_back(label.get<std::string>());
            }
        }
    }
    if (config.seed == 0) {
        if (const char* env_seed = std::getenv("ULTREXT_SEED")) {
            config.seed = std::strtoull(env_seed, nullptr, 10);
        }
    }
    auto* wrapper = new ux_session;
    try {
        wrapper->session = std::make_unique<ultrext::Session>(config);
    } catch (const std::exception&) {
        delete wrapper;
        return nullptr;
    }
    return wrapper;
}

void ux_session_free(ux_session* session) { delete session; }

ux_status ux_run_script(ux_session* session, const char* text, char** records_out,
                        int* n_failures_out) {
    if (!session || !text) return UX_ERR_INVALID_ARGUMENT;
    clear_error(session);
    try {
        int before = session->session->failure_count();
        auto records = session->session->run_text(text);
        if (records_out) *records_out = dup_string(render_all(*session->session, records));
        if (n_failures_out) *n_failures_out = session->session->failure_count() - before;
        return UX_OK;
    } catch (const ultrext::ParseError& e) {
        session->last_error = e.what();
        session->last_line = e.line();
        session->last_column = e.column();
        return UX_ERR_PARSE;
    } catch (const std::exception& e) {
        session->last_error = e.what();
        return UX_ERR_EVAL;
    }
}

ux_status ux_eval(ux_session* session, const char* text, char** records_out) {
    return ux_run_script(session, text, records_out, nullptr);
}

char* ux_environment(ux_session* session) {
    if (!session) return nullptr;
    return dup_string(session->session->environment_listing());
}

const char* ux_last_error(const ux_session* session) {
    return session ? session->last_error.c_str() : "";
}

int ux_last_error_line(const ux_session* session) { return session ? session->last_line : 0; }

int ux_last_error_column(const ux_session* session) { return session ? session->last_column : 0; }

int ux_suite_count(void) { return static_cast<int>(ultrext::suite_names().size()); }

const char* ux_suite_name(int index) {
    static thread_local std::string storage;
    auto names = ultrext::suite_names();
    if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
    storage = names[static_cast<std::size_t>(index)];
    return storage.c_str();
}

ux_status ux_check_suite(const char* suite, int trials, unsigned long long seed, int as_json,
                         char** report_out, int* n_failures_out) {
    if (!suite) return UX_ERR_INVALID_ARGUMENT;
    if (seed == 0) {
        if (const char* env_seed = std::getenv("ULTREXT_SEED"))
            seed = std::strtoull(env_seed, nullptr, 10);
        if (seed == 0) seed = 20240801;
    }
    try {
        ultrext::Report report = ultrext::run_suite(suite, trials, seed);
        if (report_out)
            *report_out = dup_string(as_json ? report_to_json(report) : report_to_text(report));
        if (n_failures_out) *n_failures_out = static_cast<int>(report.failures.size());
        return UX_OK;
    } catch (const std::invalid_argument&) {
        return UX_ERR_INVALID_ARGUMENT;
    } catch (const std::exception&) {
        return UX_ERR_EVAL;
    }
}

void ux_string_free(char* text) { std::free(text); }

const char* ux_version(void) { return "0.1.0"; }

}  // extern "C"
