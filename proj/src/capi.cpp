#include "qualimeter.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "qualimeter/aggregate.hpp"
#include "qualimeter/core.hpp"
#include "qualimeter/diversity.hpp"
#include "qualimeter/process.hpp"
#include "qualimeter/qmdl.hpp"
#include "qualimeter/rules.hpp"

#include "json.hpp"

using namespace qualimeter;
namespace fs = std::filesystem;

struct qm_model {
    QualityModel model;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** errmsg, const std::string& msg) {
    if (errmsg) *errmsg = dup_string(msg);
}

qm_status status_of(const Error& e) {
    switch (e.code()) {
    case Errc::IoError:
    case Errc::StoreUnwritable:
        return QM_ERR_IO;
    default:
        return QM_ERR_VALIDATION;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path resolve(const char* project_dir, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return p;
    fs::path base = (project_dir && *project_dir) ? fs::path(project_dir)
                                                  : fs::current_path();
    return base / p;
}

// shared by qm_ingest / qm_run / qm_report_latest
struct LoadedPlan {
    process::EvaluationPlan plan;
    QualityModel model;
    fs::path store;
};

LoadedPlan load_plan(const char* plan_path, const char* project_dir,
                     bool check_hash) {
    LoadedPlan lp;
    lp.plan = process::plan_from_json(read_file(plan_path));
    fs::path model_file = resolve(project_dir, lp.plan.model_path);
    lp.model = qmdl::parse(read_file(model_file.string()));
    if (check_hash && process::model_hash(lp.model) != lp.plan.model_hash)
        throw Error(Errc::ModelHashMismatch,
                    "model file '" + model_file.string() +
                        "' no longer matches the plan's model hash");
    lp.store = resolve(project_dir, lp.plan.collection.storage_path);
    return lp;
}

std::string compact_timestamp(std::int64_t epoch) {
    std::string ts = process::format_timestamp(epoch);
    std::string out;
    for (char c : ts)
        if (c != '-' && c != ':') out += c;
    return out;
}

template <typename Fn>
qm_status guarded(char** errmsg, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        set_err(errmsg, std::string(errc_name(e.code())) + ": " + e.what());
        return status_of(e);
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        return QM_ERR_IO;
    }
}

} // namespace

extern "C" {

const char* qm_version(void) { return "0.1.0"; }

void qm_string_free(char* s) { std::free(s); }

void qm_model_free(qm_model* model) { delete model; }

qm_status qm_model_parse(const char* qmdl_text, qm_model** out, char** errmsg) {
    if (!qmdl_text || !out) {
        set_err(errmsg, "qmdl_text and out must be non-NULL");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto m = std::make_unique<qm_model>();
        m->model = qmdl::parse(qmdl_text);
        *out = m.release();
        return QM_OK;
    });
}

qm_status qm_model_load(const char* path, qm_model** out, char** errmsg) {
    if (!path || !out) {
        set_err(errmsg, "path and out must be non-NULL");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto m = std::make_unique<qm_model>();
        m->model = qmdl::parse(read_file(path));
        *out = m.release();
        return QM_OK;
    });
}

qm_status qm_model_serialize(const qm_model* model, char** out, char** errmsg) {
    if (!model || !out) {
        set_err(errmsg, "model and out must be non-NULL");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        *out = dup_string(qmdl::serialize(model->model));
        return QM_OK;
    });
}

qm_status qm_model_validate(const qm_model* model,
                            const char* ruleset_overrides_path, int as_json,
                            char** report, int* n_errors, int* n_warnings,
                            char** errmsg) {
    if (!model) {
        set_err(errmsg, "model must be non-NULL");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto ruleset = rules::default_ruleset();
        if (ruleset_overrides_path)
            ruleset = rules::apply_overrides(
                ruleset, read_file(ruleset_overrides_path));
        auto violations = rules::check(model->model, ruleset);
        auto advisories = agg::operator_scale_warnings(model->model);
        int errors = 0, warnings = static_cast<int>(advisories.size());
        for (const auto& v : violations)
            (v.severity == rules::Severity::Error ? errors : warnings)++;
        if (n_errors) *n_errors = errors;
        if (n_warnings) *n_warnings = warnings;
        if (report) {
            if (as_json) {
                nlohmann::json items = nlohmann::json::array();
                for (const auto& v : violations)
                    items.push_back({{"rule", v.rule_id},
                                     {"path", v.path},
                                     {"severity", rules::severity_name(v.severity)},
                                     {"message", v.message}});
                nlohmann::json j{{"model", model->model.id},
                                 {"violations", items},
                                 {"advisories", advisories},
                                 {"errors", errors},
                                 {"warnings", warnings}};
                *report = dup_string(j.dump(2) + "\n");
            } else {
                std::ostringstream os;
                for (const auto& v : violations)
                    os << v.rule_id << " " << rules::severity_name(v.severity)
                       << " " << v.path << ": " << v.message << "\n";
                for (const auto& a : advisories)
                    os << "scale warning: " << a << "\n";
                os << errors << " errors, " << warnings << " warnings\n";
                *report = dup_string(os.str());
            }
        }
        return errors > 0 ? QM_ERR_VALIDATION : QM_OK;
    });
}

qm_status qm_evaluate(const char* model_path, const char* records_path,
                      const char* as_of, const char* format, char** out,
                      char** errmsg) {
    if (!model_path || !records_path || !as_of || !out) {
        set_err(errmsg, "model_path, records_path, as_of and out are required");
        return QM_ERR_USAGE;
    }
    std::string fmt = format ? format : "json";
    if (fmt != "json" && fmt != "md") {
        set_err(errmsg, "format must be 'json' or 'md'");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        QualityModel model = qmdl::parse(read_file(model_path));
        std::vector<process::MeasurementRecord> records =
            process::load_records(model, records_path);

        // ad-hoc single-shot plan so the execution path is identical to run
        process::EvaluationPlan plan;
        plan.model_hash = process::model_hash(model);
        plan.collection.frequency_seconds = 86400;
        process::EvaluationReport report = process::execute_cycle(
            plan, model, records, process::parse_timestamp(as_of));
        *out = dup_string(fmt == "json" ? process::render_dashboard_json(report)
                                        : process::render_summary_md(report));
        return QM_OK;
    });
}

qm_status qm_diversity(const char* population_path, const char* mode,
                       double* pi, char** errmsg) {
    if (!population_path || !pi) {
        set_err(errmsg, "population_path and pi must be non-NULL");
        return QM_ERR_USAGE;
    }
    std::string mode_name = mode ? mode : "structural";
    if (mode_name != "structural" && mode_name != "weighted") {
        set_err(errmsg, "mode must be 'structural' or 'weighted'");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto pop = diversity::load_population(population_path);
        *pi = diversity::polymorphism_degree(
            pop, diversity::distance_mode_from(mode_name));
        return QM_OK;
    });
}

qm_status qm_init_context(const char* objectives_path, const char* scope,
                          const char* environment, const char* dependencies,
                          const char* lessons_path, const char* out_path,
                          char** errmsg) {
    if (!objectives_path || !out_path) {
        set_err(errmsg, "objectives_path and out_path are required");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto objectives = process::parse_objectives(read_file(objectives_path));
        std::vector<std::string> deps;
        if (dependencies && *dependencies) {
            std::istringstream ds(dependencies);
            std::string item;
            while (std::getline(ds, item, ';'))
                if (!item.empty()) deps.push_back(item);
        }
        std::vector<std::string> lessons;
        if (lessons_path) {
            std::istringstream ls(read_file(lessons_path));
            std::string line;
            while (std::getline(ls, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (!line.empty() && line[0] != '#') lessons.push_back(line);
            }
        }
        process::MeasurementContext ctx = process::init_phase(
            std::move(objectives), scope ? scope : "", std::move(deps),
            environment ? environment : "", std::move(lessons));
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::IoError,
                        "cannot write context to '" + std::string(out_path) + "'");
        out << process::context_to_json(ctx);
        return QM_OK;
    });
}

qm_status qm_plan(const char* context_path, const char* model_path,
                  const char* frequency, const char* lifecycle_stage,
                  const char* project_dir, const char* out_path, char** errmsg) {
    if (!context_path || !model_path || !frequency || !out_path) {
        set_err(errmsg,
                "context_path, model_path, frequency and out_path are required");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        process::MeasurementContext ctx =
            process::context_from_json(read_file(context_path));
        fs::path model_file = resolve(project_dir, model_path);
        QualityModel model = qmdl::parse(read_file(model_file.string()));

        process::CollectionSettings collection;
        collection.frequency_text = frequency;
        collection.frequency_seconds = process::parse_frequency(frequency);

        process::EvaluationPlan plan = process::plan_phase(
            ctx, model, model_path,
            lifecycle_stage ? lifecycle_stage : "development", collection);
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::IoError,
                        "cannot write plan to '" + std::string(out_path) + "'");
        out << process::plan_to_json(plan);
        return QM_OK;
    });
}

qm_status qm_ingest(const char* plan_path, const char* records_path,
                    const char* project_dir, long* accepted, char** diagnostics,
                    char** errmsg) {
    if (!plan_path || !records_path) {
        set_err(errmsg, "plan_path and records_path are required");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        LoadedPlan lp = load_plan(plan_path, project_dir, /*check_hash=*/false);
        process::IngestResult result = process::ingest(
            lp.model, read_file(records_path), lp.store.string());
        if (accepted) *accepted = static_cast<long>(result.accepted);
        if (diagnostics) {
            std::string all;
            for (const auto& d : result.diagnostics) all += d + "\n";
            *diagnostics = dup_string(all);
        }
        return QM_OK;
    });
}

qm_status qm_run(const char* plan_path, const char* as_of,
                 const char* project_dir, char** report_dir, char** errmsg) {
    if (!plan_path || !as_of) {
        set_err(errmsg, "plan_path and as_of are required");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        LoadedPlan lp = load_plan(plan_path, project_dir, /*check_hash=*/true);
        std::vector<process::MeasurementRecord> records;
        if (fs::exists(lp.store))
            records = process::load_records(lp.model, lp.store.string());

        std::int64_t as_of_epoch = process::parse_timestamp(as_of);
        process::EvaluationReport report =
            process::execute_cycle(lp.plan, lp.model, records, as_of_epoch);

        fs::path dir = resolve(project_dir, "reports") /
                       compact_timestamp(as_of_epoch);
        process::write_report(report, dir.string());
        if (report_dir) *report_dir = dup_string(dir.string());
        return QM_OK;
    });
}

qm_status qm_report_latest(const char* plan_path, const char* project_dir,
                           char** out, char** errmsg) {
    if (!plan_path || !out) {
        set_err(errmsg, "plan_path and out are required");
        return QM_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        // plan file is read for validation only; reports live per project
        (void)process::plan_from_json(read_file(plan_path));
        fs::path reports = resolve(project_dir, "reports");
        if (!fs::is_directory(reports))
            throw Error(Errc::IoError,
                        "no reports directory under '" + reports.string() + "'");
        std::string best;
        for (const auto& entry : fs::directory_iterator(reports)) {
            if (!entry.is_directory()) continue;
            if (!fs::exists(entry.path() / "summary.md")) continue;
            std::string name = entry.path().filename().string();
            if (name > best) best = name;
        }
        if (best.empty())
            throw Error(Errc::IoError, "no reports written yet");
        *out = dup_string(read_file((reports / best / "summary.md").string()));
        return QM_OK;
    });
}

} // extern "C"
