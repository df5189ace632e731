#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mutforge/analysis.hpp"
#include "mutforge/errors.hpp"
#include "mutforge/extraction.hpp"
#include "mutforge/llm.hpp"
#include "mutforge/prompting.hpp"
#include "mutforge/reporting.hpp"
#include "mutforge/runner.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge {

struct RunArtifacts {
    RunManifest manifest;
    std::vector<Prompt> prompts;
    std::vector<ChatResponse> completions; // index-aligned with prompts
    std::vector<Mutant> mutants;
    std::vector<MutantOutcome> outcomes;
    SummaryTable summary;
    std::vector<EquivalenceFlag> flags;
    bool has_outcomes = false;
};

namespace detail {

inline std::string padded(int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05d", n);
    return buf;
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    write_text_file(path.string(), doc.dump(2) + "\n");
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    return nlohmann::json::parse(read_text_file(path.string()));
}

} // namespace detail

inline nlohmann::json prompt_to_json(const Prompt& p) {
    return nlohmann::json{
        {"id", p.id},
        {"site_id", p.site_id},
        {"template", p.template_name},
        {"system_prompt", p.system_name},
        {"system_text", p.system_text},
        {"user_text", p.user_text},
        {"rendered_at", p.rendered_at},
    };
}

inline nlohmann::json completion_to_json(int prompt_id, const ChatResponse& r) {
    return nlohmann::json{
        {"prompt_id", prompt_id},
        {"content", r.content},
        {"usage",
         {{"prompt_tokens", r.usage.prompt_tokens},
          {"completion_tokens", r.usage.completion_tokens},
          {"total_tokens", r.usage.total_tokens},
          {"estimated", r.usage_estimated}}},
        {"latency_ms", r.latency_ms},
    };
}

void write_html_report(const std::filesystem::path& run_dir, const RunArtifacts& artifacts);

// Lays down the full on-disk shape of one run:
//   manifest.json, prompts/, completions/, mutants.json, outcomes.json,
//   summary.json, report/
inline void write_run_archive(const std::filesystem::path& dir, const RunArtifacts& artifacts) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir / "prompts", ec);
    fs::create_directories(dir / "completions", ec);
    if (ec) throw IoError("cannot create run directory " + dir.string());

    detail::write_json_file(dir / "manifest.json", manifest_to_json(artifacts.manifest));

    for (std::size_t i = 0; i < artifacts.prompts.size(); ++i) {
        const Prompt& p = artifacts.prompts[i];
        detail::write_json_file(dir / "prompts" / ("prompt_" + detail::padded(p.id) + ".json"),
                                prompt_to_json(p));
        if (i < artifacts.completions.size())
            detail::write_json_file(
                dir / "completions" / ("completion_" + detail::padded(p.id) + ".json"),
                completion_to_json(p.id, artifacts.completions[i]));
    }

    nlohmann::json mutants = nlohmann::json::array();
    for (const auto& m : artifacts.mutants) mutants.push_back(mutant_to_json(m));
    detail::write_json_file(dir / "mutants.json", mutants);

    if (artifacts.has_outcomes)
        detail::write_json_file(dir / "outcomes.json", outcomes_to_json(artifacts.outcomes));

    detail::write_json_file(dir / "summary.json", summary_table_to_json(artifacts.summary));
    write_html_report(dir, artifacts);
}

struct LoadedRun {
    std::filesystem::path dir;
    RunManifest manifest;
    nlohmann::json mutants = nlohmann::json::array();
    std::vector<MutantOutcome> outcomes;
    SummaryTable summary;
    bool has_outcomes = false;
    bool has_summary = false;

    bool partial() const { return !has_outcomes || !has_summary; }
};

inline LoadedRun load_run_archive(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::exists(dir / "manifest.json"))
        throw IoError("not a run archive (no manifest.json): " + dir.string());
    if (!fs::exists(dir / "mutants.json"))
        throw IoError("not a run archive (no mutants.json): " + dir.string());

    LoadedRun run;
    run.dir = dir;
    run.manifest = manifest_from_json(detail::read_json_file(dir / "manifest.json"));
    run.mutants = detail::read_json_file(dir / "mutants.json");

    if (fs::exists(dir / "outcomes.json")) {
        std::map<std::string, std::string> files;
        for (const auto& m : run.mutants)
            files[m.at("id").get<std::string>()] = m.at("file").get<std::string>();
        run.outcomes = outcomes_from_json(detail::read_json_file(dir / "outcomes.json"), files);
        run.has_outcomes = true;
    }
    if (fs::exists(dir / "summary.json")) {
        run.summary = summary_table_from_json(detail::read_json_file(dir / "summary.json"));
        run.has_summary = true;
    }
    return run;
}

namespace detail {

inline std::string html_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&#39;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string file_page_name(std::size_t index, std::string_view path) {
    std::string slug;
    for (char c : path)
        slug += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    return "file_" + padded(static_cast<int>(index + 1)) + "_" + slug + ".html";
}

inline constexpr std::string_view kReportCss = R"CSS(
body { font-family: -apple-system, "Segoe UI", Helvetica, Arial, sans-serif;
       margin: 2rem auto; max-width: 72rem; padding: 0 1rem; color: #1c1c1c; }
h1 { font-size: 1.4rem; } h2 { font-size: 1.1rem; margin-top: 2rem; }
table { border-collapse: collapse; margin: 1rem 0; }
th, td { border: 1px solid #ccc; padding: 0.35rem 0.6rem; font-size: 0.9rem; }
th { background: #f2f2f2; text-align: left; }
td.num { text-align: right; font-variant-numeric: tabular-nums; }
code, pre { font-family: ui-monospace, "SF Mono", Consolas, monospace; font-size: 0.85rem; }
pre { background: #f6f6f6; border: 1px solid #ddd; padding: 0.5rem; overflow-x: auto; }
details { border: 1px solid #ddd; border-radius: 4px; margin: 0.4rem 0; padding: 0.3rem 0.6rem; }
summary { cursor: pointer; }
.badge { display: inline-block; border-radius: 3px; padding: 0 0.4rem; font-size: 0.78rem;
         color: #fff; margin-right: 0.5rem; }
.badge.killed { background: #2e7d32; } .badge.survived { background: #c62828; }
.badge.timeout { background: #1565c0; } .badge.errored { background: #757575; }
.flag { background: #fff3cd; border: 1px solid #ffe69c; border-radius: 3px;
        padding: 0 0.3rem; font-size: 0.78rem; margin-left: 0.3rem; }
.meta { color: #555; font-size: 0.85rem; }
)CSS";

inline std::string html_page(std::string_view title, std::string_view body) {
    std::string out = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    out += "<title>" + html_escape(title) + "</title>\n<style>" + std::string(kReportCss) +
           "</style>\n</head>\n<body>\n";
    out += body;
    out += "</body>\n</html>\n";
    return out;
}

inline std::string summary_table_html(const SummaryTable& table) {
    std::string out = "<table>\n<tr>";
    for (const char* col : kSummaryColumns) out += "<th>" + std::string(col) + "</th>";
    out += "</tr>\n";
    auto row_html = [](const SummaryRow& row, bool total) {
        std::string tr = "<tr>";
        auto cells = summary_row_cells(row, total);
        for (std::size_t i = 0; i < cells.size(); ++i)
            tr += (i == 0 ? "<td>" : "<td class=\"num\">") + html_escape(cells[i]) + "</td>";
        return tr + "</tr>\n";
    };
    for (const auto& row : table.rows) out += row_html(row, false);
    out += row_html(table.total, true);
    out += "</table>\n";
    return out;
}

} // namespace detail

// Static, self-contained pages: an index with the summary table and one page
// per mutated source file with every mutant's fragments and outcome.
inline void write_html_report(const std::filesystem::path& run_dir,
                              const RunArtifacts& artifacts) {
    namespace fs = std::filesystem;
    fs::path report_dir = run_dir / "report";
    std::error_code ec;
    fs::create_directories(report_dir, ec);
    if (ec) throw IoError("cannot create report directory " + report_dir.string());

    std::map<std::string, const MutantOutcome*> outcome_by_id;
    for (const auto& o : artifacts.outcomes) outcome_by_id[o.mutant_id] = &o;
    std::map<std::string, std::vector<const EquivalenceFlag*>> flags_by_id;
    for (const auto& f : artifacts.flags) flags_by_id[f.mutant_id].push_back(&f);

    std::map<std::string, std::vector<const Mutant*>> by_file;
    for (const auto& m : artifacts.mutants) by_file[m.file].push_back(&m);
    for (auto& [file, list] : by_file)
        std::sort(list.begin(), list.end(), [](const Mutant* a, const Mutant* b) {
            return a->span.start_offset < b->span.start_offset;
        });

    std::string index;
    index += "<h1>Mutation run " + detail::html_escape(artifacts.manifest.run_id) + "</h1>\n";
    index += "<p class=\"meta\">project " + detail::html_escape(artifacts.manifest.project) +
             " &middot; model " + detail::html_escape(artifacts.manifest.model) +
             " &middot; template " + detail::html_escape(artifacts.manifest.template_name) +
             " &middot; temperature " + format_score(artifacts.manifest.temperature) + "</p>\n";
    index += detail::summary_table_html(artifacts.summary);
    index += "<h2>Files</h2>\n<table>\n<tr><th>file</th><th>mutants</th><th>killed</th>"
             "<th>survived</th><th>timeout</th></tr>\n";

    std::size_t file_nr = 0;
    for (const auto& [file, list] : by_file) {
        std::string page_name = detail::file_page_name(file_nr, file);
        std::int64_t killed = 0, survived = 0, timeout = 0;
        for (const Mutant* m : list) {
            auto it = outcome_by_id.find(m->id);
            if (it == outcome_by_id.end()) continue;
            switch (it->second->outcome) {
            case OutcomeKind::Killed: ++killed; break;
            case OutcomeKind::Survived: ++survived; break;
            case OutcomeKind::Timeout: ++timeout; break;
            case OutcomeKind::Errored: break;
            }
        }
        index += "<tr><td><a href=\"" + page_name + "\">" + detail::html_escape(file) +
                 "</a></td><td class=\"num\">" + std::to_string(list.size()) +
                 "</td><td class=\"num\">" + std::to_string(killed) + "</td><td class=\"num\">" +
                 std::to_string(survived) + "</td><td class=\"num\">" + std::to_string(timeout) +
                 "</td></tr>\n";

        std::string body;
        body += "<p><a href=\"index.html\">&larr; back to summary</a></p>\n";
        body += "<h1>" + detail::html_escape(file) + "</h1>\n";
        for (const Mutant* m : list) {
            std::string badge = "none";
            std::string outcome_text = "not executed";
            auto it = outcome_by_id.find(m->id);
            if (it != outcome_by_id.end()) {
                badge = std::string(outcome_name(it->second->outcome));
                outcome_text = badge + ", " + std::to_string(it->second->duration_ms) + " ms";
                if (it->second->exit_code)
                    outcome_text += ", exit " + std::to_string(*it->second->exit_code);
            }
            body += "<details>\n<summary><span class=\"badge " + badge + "\">" +
                    detail::html_escape(badge) + "</span><code>" +
                    detail::html_escape(std::string(site_kind_name(m->kind))) + "</code> at line " +
                    std::to_string(m->span.start_line) + ", col " +
                    std::to_string(m->span.start_col);
            for (const EquivalenceFlag* f : flags_by_id[m->id])
                body += "<span class=\"flag\">" +
                        detail::html_escape(std::string(equivalence_pattern_name(f->pattern))) +
                        "</span>";
            body += "</summary>\n";
            body += "<p class=\"meta\">mutant <code>" + detail::html_escape(m->id) +
                    "</code> &middot; " + detail::html_escape(outcome_text) +
                    " &middot; prompt " + std::to_string(m->provenance.prompt_id) + ", option " +
                    std::to_string(m->provenance.option_index) + "</p>\n";
            body += "<p>original</p><pre>" + detail::html_escape(m->original) + "</pre>\n";
            body += "<p>replacement</p><pre>" + detail::html_escape(m->replacement) + "</pre>\n";
            for (const EquivalenceFlag* f : flags_by_id[m->id])
                body += "<p class=\"meta\">flag " +
                        detail::html_escape(std::string(equivalence_pattern_name(f->pattern))) +
                        ": " + detail::html_escape(f->rationale) + "</p>\n";
            body += "</details>\n";
        }
        write_text_file((report_dir / page_name).string(),
                        detail::html_page(file, body));
        ++file_nr;
    }
    index += "</table>\n";
    write_text_file((report_dir / "index.html").string(),
                    detail::html_page("Mutation run " + artifacts.manifest.run_id, index));
}

} // namespace mutforge
