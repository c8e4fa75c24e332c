// qualimeter CLI: thin shell over the C API in qualimeter.h.
//
// Exit codes: 0 success, 1 validation errors, 2 usage errors, 3 I/O errors.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>

#include "CLI11.hpp"

#include "qualimeter.h"

namespace {

struct StringOut {
    char* value = nullptr;
    ~StringOut() { qm_string_free(value); }
    char** slot() { return &value; }
    std::string str() const { return value ? value : ""; }
};

std::string project_dir() {
    const char* env = std::getenv("QUALIMETER_PROJECT");
    return env ? env : "";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

// Failures still produce parseable stdout when the caller asked for JSON.
int fail(qm_status status, const std::string& msg, bool json) {
    if (json)
        std::printf("{\"error\": \"%s\"}\n", json_escape(msg).c_str());
    std::fprintf(stderr, "qualimeter: %s\n", msg.c_str());
    return static_cast<int>(status);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qualimeter - hierarchical quality model engine"};
    app.require_subcommand(1);

    // validate
    std::string v_model, v_ruleset, v_format = "text";
    auto* validate = app.add_subcommand("validate",
                                        "Check a model against derivation rules");
    validate->add_option("model", v_model, "QMDL model file")->required();
    validate->add_option("--ruleset", v_ruleset, "Ruleset override file");
    validate->add_option("--format", v_format, "Output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));

    // serialize
    std::string s_model;
    auto* serialize =
        app.add_subcommand("serialize", "Print the canonical QMDL form");
    serialize->add_option("model", s_model, "QMDL model file")->required();

    // evaluate
    std::string e_model, e_records, e_as_of, e_format = "json";
    auto* evaluate = app.add_subcommand(
        "evaluate", "One-shot evaluation of records against a model");
    evaluate->add_option("--model", e_model, "QMDL model file")->required();
    evaluate->add_option("--records", e_records, "Record lines (JSONL)")
        ->required();
    evaluate->add_option("--as-of", e_as_of, "ISO-8601 UTC timestamp")
        ->required();
    evaluate->add_option("--format", e_format, "Output format: json|md")
        ->check(CLI::IsMember({"json", "md"}));

    // diversity
    std::string d_population, d_mode = "structural";
    auto* diversity = app.add_subcommand(
        "diversity", "Polymorphism degree of a model population");
    diversity->add_option("--population", d_population, "Population file")
        ->required();
    diversity->add_option("--mode", d_mode, "Distance mode: structural|weighted")
        ->check(CLI::IsMember({"structural", "weighted"}));

    // init
    std::string i_objectives, i_out, i_scope, i_environment, i_dependencies,
        i_lessons;
    auto* init =
        app.add_subcommand("init", "Initial phase: consolidate the context");
    init->add_option("--objectives", i_objectives, "Objectives file")
        ->required();
    init->add_option("--out", i_out, "Context output file")->required();
    init->add_option("--scope", i_scope, "Scope and boundaries");
    init->add_option("--environment", i_environment, "Measurement environment");
    init->add_option("--dependencies", i_dependencies,
                     "Semicolon-separated dependency list");
    init->add_option("--lessons", i_lessons, "Lessons-learned file");

    // plan
    std::string p_context, p_model, p_frequency, p_out,
        p_lifecycle = "development";
    auto* plan =
        app.add_subcommand("plan", "Planning phase: build the evaluation plan");
    plan->add_option("--context", p_context, "Context JSON file")->required();
    plan->add_option("--model", p_model, "QMDL model file")->required();
    plan->add_option("--frequency", p_frequency, "Collection frequency, e.g. 24h")
        ->required();
    plan->add_option("--lifecycle", p_lifecycle, "Lifecycle stage");
    plan->add_option("--out", p_out, "Plan output file")->required();

    // ingest
    std::string g_plan, g_records;
    auto* ingest =
        app.add_subcommand("ingest", "Append validated records to the store");
    ingest->add_option("--plan", g_plan, "Plan JSON file")->required();
    ingest->add_option("--records", g_records, "New record lines (JSONL)")
        ->required();

    // run
    std::string r_plan, r_as_of;
    auto* run = app.add_subcommand("run", "Execute a cycle and write reports");
    run->add_option("--plan", r_plan, "Plan JSON file")->required();
    run->add_option("--as-of", r_as_of, "ISO-8601 UTC timestamp")->required();

    // report
    std::string t_plan;
    bool t_latest = false;
    auto* report = app.add_subcommand("report", "Re-emit a written report");
    report->add_option("--plan", t_plan, "Plan JSON file")->required();
    report->add_flag("--latest", t_latest, "Emit the latest report summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return 0;
        }
        app.exit(e);
        return 2;
    }

    std::string project = project_dir();
    StringOut err;

    if (*validate) {
        bool json = v_format == "json";
        qm_model* model = nullptr;
        qm_status st = qm_model_load(v_model.c_str(), &model, err.slot());
        if (st != QM_OK) return fail(st, err.str(), json);
        std::unique_ptr<qm_model, decltype(&qm_model_free)> guard(
            model, qm_model_free);
        StringOut out;
        int n_errors = 0, n_warnings = 0;
        st = qm_model_validate(model,
                               v_ruleset.empty() ? nullptr : v_ruleset.c_str(),
                               json ? 1 : 0, out.slot(), &n_errors, &n_warnings,
                               err.slot());
        if (st != QM_OK && st != QM_ERR_VALIDATION)
            return fail(st, err.str(), json);
        std::fputs(out.str().c_str(), stdout);
        return static_cast<int>(st);
    }

    if (*serialize) {
        qm_model* model = nullptr;
        qm_status st = qm_model_load(s_model.c_str(), &model, err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::unique_ptr<qm_model, decltype(&qm_model_free)> guard(
            model, qm_model_free);
        StringOut out;
        st = qm_model_serialize(model, out.slot(), err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::fputs(out.str().c_str(), stdout);
        return 0;
    }

    if (*evaluate) {
        StringOut out;
        qm_status st =
            qm_evaluate(e_model.c_str(), e_records.c_str(), e_as_of.c_str(),
                        e_format.c_str(), out.slot(), err.slot());
        if (st != QM_OK) return fail(st, err.str(), e_format == "json");
        std::fputs(out.str().c_str(), stdout);
        return 0;
    }

    if (*diversity) {
        double pi = 0;
        qm_status st = qm_diversity(d_population.c_str(), d_mode.c_str(), &pi,
                                    err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::printf("pi = %.9f\n", pi);
        return 0;
    }

    if (*init) {
        qm_status st = qm_init_context(
            i_objectives.c_str(), i_scope.c_str(), i_environment.c_str(),
            i_dependencies.c_str(),
            i_lessons.empty() ? nullptr : i_lessons.c_str(), i_out.c_str(),
            err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::printf("context written to %s\n", i_out.c_str());
        return 0;
    }

    if (*plan) {
        qm_status st = qm_plan(p_context.c_str(), p_model.c_str(),
                               p_frequency.c_str(), p_lifecycle.c_str(),
                               project.c_str(), p_out.c_str(), err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::printf("plan written to %s\n", p_out.c_str());
        return 0;
    }

    if (*ingest) {
        long accepted = 0;
        StringOut diagnostics;
        qm_status st = qm_ingest(g_plan.c_str(), g_records.c_str(),
                                 project.c_str(), &accepted,
                                 diagnostics.slot(), err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::fputs(diagnostics.str().c_str(), stderr);
        std::printf("ingested %ld records\n", accepted);
        return 0;
    }

    if (*run) {
        StringOut dir;
        qm_status st = qm_run(r_plan.c_str(), r_as_of.c_str(), project.c_str(),
                              dir.slot(), err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::printf("report written to %s\n", dir.str().c_str());
        return 0;
    }

    if (*report) {
        if (!t_latest) {
            std::fprintf(stderr, "qualimeter: report requires --latest\n");
            return 2;
        }
        StringOut out;
        qm_status st = qm_report_latest(t_plan.c_str(), project.c_str(),
                                        out.slot(), err.slot());
        if (st != QM_OK) return fail(st, err.str(), false);
        std::fputs(out.str().c_str(), stdout);
        return 0;
    }

    return 2;
}
