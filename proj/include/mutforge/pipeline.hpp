#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mutforge/archive.hpp"
#include "mutforge/clock.hpp"
#include "mutforge/errors.hpp"
#include "mutforge/extraction.hpp"
#include "mutforge/language.hpp"
#include "mutforge/llm.hpp"
#include "mutforge/prompting.hpp"
#include "mutforge/reporting.hpp"
#include "mutforge/runner.hpp"
#include "mutforge/sites.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge {

struct RunConfig {
    std::string project_root;
    std::vector<std::string> test_command;
    std::string out_dir = "mutforge-out";
    std::string run_id;

    std::string model;
    double temperature = 0.0;
    int max_tokens = 250;
    std::string template_name = "full";
    std::string system_prompt_name = "expert";
    std::int64_t window_lines = 200;
    std::int64_t max_nr_prompts = 2000;
    std::int64_t rate_limit_ms = 0;
    int nr_attempts = 3;
    int workers = 1;
    double timeout_factor = 1.5;
    std::int64_t timeout_slack_ms = 5000;

    std::string mock_fixtures; // path to a scripted-completions file; empty = live endpoint
    std::string endpoint_url;
    std::string api_key;
    std::optional<double> fail_under;
};

namespace detail {

inline const std::set<std::string>& excluded_dir_names() {
    static const std::set<std::string> names = {".git",  "node_modules", "test",  "tests",
                                                "__tests__", "coverage", "dist", "build"};
    return names;
}

inline std::string default_run_id() {
    char buf[32];
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return "run-" + std::string(buf) + "-" + std::to_string(getpid());
}

inline std::string project_name(const std::filesystem::path& root) {
    auto canonical = std::filesystem::weakly_canonical(root);
    std::string name = canonical.filename().string();
    return name.empty() ? canonical.string() : name;
}

} // namespace detail

// Relative paths of mutable source files, sorted for determinism. Test,
// dependency, and output directories are never mutated (they still get
// copied into run workspaces).
inline std::vector<std::string> discover_source_files(const std::filesystem::path& project_root,
                                                      const LanguageProfile& profile) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    for (fs::recursive_directory_iterator it(project_root), end; it != end; ++it) {
        if (it->is_directory()) {
            if (detail::excluded_dir_names().count(it->path().filename().string()))
                it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file()) continue;
        std::string ext = it->path().extension().string();
        if (!profile.handles_extension(ext)) continue;
        paths.push_back(fs::relative(it->path(), project_root).generic_string());
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

// The template option accepts a catalog name or a path to a template file.
inline PromptTemplate resolve_template(const std::string& name_or_path) {
    for (const auto& t : template_catalog())
        if (t.name == name_or_path) return t;
    if (std::filesystem::exists(name_or_path)) {
        std::string stem = std::filesystem::path(name_or_path).stem().string();
        return load_template_file(name_or_path, stem);
    }
    throw Error("unknown template (not a catalog name or readable file): " + name_or_path);
}

// Prompt generation, completion, and mutant extraction over one project.
inline RunArtifacts cmd_generate(const RunConfig& config, CompletionBackend& backend,
                                 Clock& clock,
                                 const std::function<void(const std::string&)>& log = {}) {
    namespace fs = std::filesystem;
    auto wall_start = std::chrono::steady_clock::now();

    const LanguageProfile* profile = find_profile("cscript");
    PromptTemplate tmpl = resolve_template(config.template_name);
    const SystemPrompt& system = find_system_prompt(config.system_prompt_name);

    RunArtifacts artifacts;
    RunManifest& manifest = artifacts.manifest;
    manifest.run_id = config.run_id.empty() ? detail::default_run_id() : config.run_id;
    manifest.project = detail::project_name(config.project_root);
    manifest.started_at = now_utc_iso8601();
    manifest.model = config.model;
    manifest.temperature = config.temperature;
    manifest.max_tokens = config.max_tokens;
    manifest.template_name = tmpl.name;
    manifest.system_prompt_name = system.name;
    manifest.window_lines = config.window_lines;
    manifest.max_nr_prompts = config.max_nr_prompts;
    manifest.rate_limit_ms = config.rate_limit_ms;
    manifest.nr_attempts = config.nr_attempts;
    manifest.workers = config.workers;
    manifest.timeout_factor = config.timeout_factor;
    manifest.timeout_slack_ms = config.timeout_slack_ms;
    manifest.test_command = config.test_command;
    manifest.endpoint_url = config.endpoint_url;
    manifest.mock_fixtures = config.mock_fixtures;

    std::vector<std::string> rel_paths = discover_source_files(config.project_root, *profile);

    struct LoadedFile {
        SourceFile file;
        std::vector<PlaceholderSite> sites;
    };
    std::vector<LoadedFile> files;
    for (const auto& rel : rel_paths) {
        SourceFile file;
        file.path = rel;
        file.text = read_text_file((fs::path(config.project_root) / rel).string());
        file.language_id = std::string(profile->id());
        file.lines = LineIndex(file.text);
        try {
            files.push_back({file, enumerate_sites(file, *profile)});
        } catch (const ParseError& e) {
            manifest.skipped_files.push_back({rel, e.what()});
            if (log) log("skipping " + rel + ": " + e.what());
        }
    }
    if (files.empty()) throw Error("no parsable source files under " + config.project_root);

    LlmClient client(backend, {config.rate_limit_ms, config.nr_attempts}, clock);
    std::map<std::string, ExtractionLedger> ledger_by_file;
    std::set<std::string> seen_keys;
    std::vector<Usage> usages;
    int prompt_id = 0;
    bool capped = false;

    for (const auto& [file, sites] : files) {
        ledger_by_file[file.path]; // a parsed file appears even with zero prompts
        for (const auto& site : sites) {
            if (prompt_id >= config.max_nr_prompts) {
                capped = true;
                break;
            }
            Prompt prompt = render_prompt(file, site, tmpl, system,
                                          static_cast<std::size_t>(config.window_lines));
            prompt.id = ++prompt_id;
            prompt.rendered_at = now_utc_iso8601();

            ChatRequest request{config.model, system.text, prompt.user_text, config.temperature,
                                config.max_tokens};
            ChatResponse response = client.complete(request);
            usages.push_back(response.usage);
            if (response.usage_estimated) manifest.tokens_estimated = true;

            ExtractionLedger& ledger = ledger_by_file[file.path];
            auto candidates = extract_candidates(response.content, site, prompt);
            ledger.candidates += static_cast<std::int64_t>(candidates.size());
            for (const auto& candidate : candidates) {
                switch (filter_candidate(candidate, site, file, *profile, seen_keys)) {
                case FilterVerdict::Identical: ++ledger.identical; break;
                case FilterVerdict::Duplicate: ++ledger.duplicate; break;
                case FilterVerdict::Invalid: ++ledger.invalid; break;
                case FilterVerdict::Accepted: {
                    ++ledger.mutants;
                    Provenance prov{prompt.id, candidate.option_index, tmpl.name, config.model,
                                    config.temperature};
                    artifacts.mutants.push_back(
                        build_mutant(candidate, site, file, std::move(prov)));
                    break;
                }
                }
            }
            artifacts.prompts.push_back(std::move(prompt));
            artifacts.completions.push_back(std::move(response));
        }
        if (capped) break;
    }

    ExtractionLedger run_ledger;
    for (const auto& [path, ledger] : ledger_by_file) {
        if (!ledger.conserved())
            throw Error("ledger conservation violated for " + path);
        run_ledger += ledger;
    }
    if (!run_ledger.conserved()) throw Error("run ledger conservation violated");

    manifest.tokens = run_token_totals(usages);

    SummaryRow row;
    row.project = manifest.project;
    row.prompts = prompt_id;
    row.candidates = run_ledger.candidates;
    row.invalid = run_ledger.invalid;
    row.identical = run_ledger.identical;
    row.duplicate = run_ledger.duplicate;
    row.mutants = run_ledger.mutants;
    artifacts.summary = build_summary_table({row});
    artifacts.flags = flag_equivalents(artifacts.mutants);

    manifest.generation_wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    manifest.finished_at = now_utc_iso8601();

    write_run_archive(config.out_dir, artifacts);
    return artifacts;
}

// Executes the archived mutants against the project's tests and fills in
// outcomes, summary, and report (the precomputed-mutants path).
inline RunArtifacts cmd_run(const RunConfig& config,
                            const std::function<void(const std::string&)>& log = {}) {
    namespace fs = std::filesystem;
    auto wall_start = std::chrono::steady_clock::now();

    LoadedRun loaded = load_run_archive(config.out_dir);
    RunArtifacts artifacts;
    artifacts.manifest = loaded.manifest;
    artifacts.manifest.test_command = config.test_command;
    artifacts.manifest.timeout_factor = config.timeout_factor;
    artifacts.manifest.timeout_slack_ms = config.timeout_slack_ms;
    artifacts.manifest.workers = config.workers;

    std::map<std::string, LineIndex> line_index_by_file;
    for (const auto& j : loaded.mutants) {
        std::string rel = j.at("file").get<std::string>();
        auto it = line_index_by_file.find(rel);
        if (it == line_index_by_file.end()) {
            std::string text = read_text_file((fs::path(config.project_root) / rel).string());
            it = line_index_by_file.emplace(rel, LineIndex(text)).first;
        }
        artifacts.mutants.push_back(mutant_from_json(j, &it->second));
    }

    TestPlan plan;
    plan.project_root = config.project_root;
    plan.test_command = config.test_command;
    plan.timeout_factor = config.timeout_factor;
    plan.timeout_slack_ms = config.timeout_slack_ms;
    if (plan.test_command.empty()) throw Error("run needs a test command");

    if (log) log("measuring baseline test run");
    plan.baseline_ms = run_baseline(plan);
    artifacts.manifest.baseline_ms = plan.baseline_ms;
    if (log)
        log("baseline " + std::to_string(plan.baseline_ms) + " ms, per-mutant timeout " +
            std::to_string(plan.derived_timeout_ms()) + " ms");

    std::function<void(std::size_t, const MutantOutcome&)> progress;
    if (log)
        progress = [&](std::size_t i, const MutantOutcome& outcome) {
            log("mutant " + std::to_string(i + 1) + "/" +
                std::to_string(artifacts.mutants.size()) + " " +
                std::string(outcome_name(outcome.outcome)) + " (" +
                std::to_string(outcome.duration_ms) + " ms)");
        };
    artifacts.outcomes = execute_all(artifacts.mutants, plan, config.workers, progress);
    artifacts.has_outcomes = true;

    artifacts.manifest.errored_mutants.clear();
    for (const auto& outcome : artifacts.outcomes)
        if (outcome.outcome == OutcomeKind::Errored)
            artifacts.manifest.errored_mutants.push_back({outcome.mutant_id, outcome.note});

    // Ledger columns carry over from the generation summary when present.
    SummaryRow row;
    row.project = artifacts.manifest.project;
    if (loaded.has_summary && !loaded.summary.rows.empty()) {
        row = loaded.summary.rows.front();
    } else {
        auto n = static_cast<std::int64_t>(artifacts.mutants.size());
        row.candidates = n;
        row.mutants = n;
    }
    RunSummary run_summary = summarize(artifacts.outcomes, ExtractionLedger{});
    row.killed = run_summary.total.killed;
    row.survived = run_summary.total.survived;
    row.timeout = run_summary.total.timeout;
    row.mutation_score = run_summary.total.mutation_score;
    artifacts.summary = build_summary_table({row});
    artifacts.flags = flag_equivalents(artifacts.mutants);

    artifacts.manifest.execution_wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    artifacts.manifest.finished_at = now_utc_iso8601();

    write_run_archive(config.out_dir, artifacts);
    return artifacts;
}

struct AnalysisArtifacts {
    std::optional<VariabilityReport> variability_report;
    SimilarityStats similarity;
    std::vector<EquivalenceFlag> flags;
    std::string note;
};

// Cross-run statistics over archived run directories.
inline AnalysisArtifacts cmd_analyze(const std::vector<std::string>& run_dirs,
                                     const std::string& out_dir) {
    if (run_dirs.empty()) throw Error("analyze needs at least one run directory");

    std::vector<RunRecord> records;
    std::vector<std::pair<std::string, Mutant>> project_mutants;
    std::vector<Mutant> all_mutants;
    for (const auto& dir : run_dirs) {
        LoadedRun run = load_run_archive(dir);
        RunRecord record;
        record.run_id = run.manifest.run_id.empty() ? dir : run.manifest.run_id;
        record.fingerprint = {run.manifest.model, run.manifest.temperature,
                              run.manifest.template_name};
        for (const auto& j : run.mutants) {
            Mutant m = mutant_from_json(j);
            record.keys_by_project[run.manifest.project].insert(m.id);
            project_mutants.emplace_back(run.manifest.project, m);
            all_mutants.push_back(std::move(m));
        }
        record.keys_by_project[run.manifest.project]; // projects with zero mutants still count
        records.push_back(std::move(record));
    }

    AnalysisArtifacts out;
    if (records.size() >= 2)
        out.variability_report = variability(records);
    else
        out.note = "variability skipped: needs at least 2 run directories";
    out.similarity = similarity_stats(project_mutants);
    out.flags = flag_equivalents(all_mutants);

    std::filesystem::create_directories(out_dir);
    if (out.variability_report)
        detail::write_json_file(std::filesystem::path(out_dir) / "variability.json",
                                variability_to_json(*out.variability_report));
    detail::write_json_file(std::filesystem::path(out_dir) / "similarity.json",
                            similarity_to_json(out.similarity));
    detail::write_json_file(std::filesystem::path(out_dir) / "equivalence-flags.json",
                            flags_to_json(out.flags));
    return out;
}

} // namespace mutforge
