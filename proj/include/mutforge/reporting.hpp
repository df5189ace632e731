#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
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
#include "mutforge/runner.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::string utc_iso8601(std::time_t t) {
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string now_utc_iso8601() {
    return utc_iso8601(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
}

struct SkippedFile {
    std::string path;
    std::string reason;
};

struct ErroredMutant {
    std::string mutant_id;
    std::string note;
};

struct RunManifest {
    std::string run_id;
    std::string project;
    std::string started_at;
    std::string finished_at;

    std::string model;
    double temperature = 0.0;
    int max_tokens = 250;
    std::string template_name;
    std::string system_prompt_name;
    std::int64_t window_lines = 200;
    std::int64_t max_nr_prompts = 2000;
    std::int64_t rate_limit_ms = 0;
    int nr_attempts = 3;
    int workers = 1;
    double timeout_factor = 1.5;
    std::int64_t timeout_slack_ms = 5000;
    std::vector<std::string> test_command;
    std::string endpoint_url;
    std::string mock_fixtures;

    Usage tokens;
    bool tokens_estimated = false;
    double generation_wall_s = 0.0;
    double execution_wall_s = 0.0;
    std::int64_t baseline_ms = 0;

    std::vector<SkippedFile> skipped_files;
    std::vector<ErroredMutant> errored_mutants;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& s : m.skipped_files)
        skipped.push_back({{"path", s.path}, {"reason", s.reason}});
    nlohmann::json errored = nlohmann::json::array();
    for (const auto& e : m.errored_mutants)
        errored.push_back({{"mutant_id", e.mutant_id}, {"note", e.note}});
    return nlohmann::json{
        {"run_id", m.run_id},
        {"tool_version", std::string(kToolVersion)},
        {"project", m.project},
        {"started_at", m.started_at},
        {"finished_at", m.finished_at},
        {"config",
         {{"model", m.model},
          {"temperature", m.temperature},
          {"max_tokens", m.max_tokens},
          {"template", m.template_name},
          {"system_prompt", m.system_prompt_name},
          {"window_lines", m.window_lines},
          {"max_nr_prompts", m.max_nr_prompts},
          {"rate_limit_ms", m.rate_limit_ms},
          {"nr_attempts", m.nr_attempts},
          {"workers", m.workers},
          {"timeout_factor", m.timeout_factor},
          {"timeout_slack_ms", m.timeout_slack_ms},
          {"test_command", m.test_command},
          {"endpoint_url", m.endpoint_url},
          {"mock_fixtures", m.mock_fixtures}}},
        {"tokens",
         {{"prompt", m.tokens.prompt_tokens},
          {"completion", m.tokens.completion_tokens},
          {"total", m.tokens.total_tokens},
          {"estimated", m.tokens_estimated}}},
        {"phase_wall_s", {{"generation", m.generation_wall_s}, {"execution", m.execution_wall_s}}},
        {"baseline_ms", m.baseline_ms},
        {"skipped_files", skipped},
        {"errored_mutants", errored},
    };
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    m.run_id = j.value("run_id", std::string());
    m.project = j.value("project", std::string());
    m.started_at = j.value("started_at", std::string());
    m.finished_at = j.value("finished_at", std::string());
    const auto& c = j.at("config");
    m.model = c.value("model", std::string());
    m.temperature = c.value("temperature", 0.0);
    m.max_tokens = c.value("max_tokens", 250);
    m.template_name = c.value("template", std::string());
    m.system_prompt_name = c.value("system_prompt", std::string());
    m.window_lines = c.value("window_lines", std::int64_t(200));
    m.max_nr_prompts = c.value("max_nr_prompts", std::int64_t(2000));
    m.rate_limit_ms = c.value("rate_limit_ms", std::int64_t(0));
    m.nr_attempts = c.value("nr_attempts", 3);
    m.workers = c.value("workers", 1);
    m.timeout_factor = c.value("timeout_factor", 1.5);
    m.timeout_slack_ms = c.value("timeout_slack_ms", std::int64_t(5000));
    if (c.contains("test_command"))
        m.test_command = c["test_command"].get<std::vector<std::string>>();
    m.endpoint_url = c.value("endpoint_url", std::string());
    m.mock_fixtures = c.value("mock_fixtures", std::string());
    if (j.contains("tokens")) {
        const auto& t = j["tokens"];
        m.tokens.prompt_tokens = t.value("prompt", std::int64_t(0));
        m.tokens.completion_tokens = t.value("completion", std::int64_t(0));
        m.tokens.total_tokens = t.value("total", std::int64_t(0));
        m.tokens_estimated = t.value("estimated", false);
    }
    if (j.contains("phase_wall_s")) {
        m.generation_wall_s = j["phase_wall_s"].value("generation", 0.0);
        m.execution_wall_s = j["phase_wall_s"].value("execution", 0.0);
    }
    m.baseline_ms = j.value("baseline_ms", std::int64_t(0));
    if (j.contains("skipped_files"))
        for (const auto& s : j["skipped_files"])
            m.skipped_files.push_back(
                {s.value("path", std::string()), s.value("reason", std::string())});
    if (j.contains("errored_mutants"))
        for (const auto& e : j["errored_mutants"])
            m.errored_mutants.push_back(
                {e.value("mutant_id", std::string()), e.value("note", std::string())});
    return m;
}

struct SummaryRow {
    std::string project;
    std::int64_t prompts = 0;
    std::int64_t candidates = 0;
    std::int64_t invalid = 0;
    std::int64_t identical = 0;
    std::int64_t duplicate = 0;
    std::int64_t mutants = 0;
    std::int64_t killed = 0;
    std::int64_t survived = 0;
    std::int64_t timeout = 0;
    double mutation_score = 0.0;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
    SummaryRow total; // mutation_score unused; rendered as "---"
};

// Rows must satisfy ledger conservation; scores are recomputed from counts.
// The score denominator is the executed mutants (killed+survived+timeout),
// which equals the mutants column except when some mutants errored.
inline SummaryTable build_summary_table(std::vector<SummaryRow> rows) {
    SummaryTable table;
    table.total.project = "Total";
    for (auto& row : rows) {
        if (row.mutants != row.candidates - row.invalid - row.identical - row.duplicate)
            throw Error("summary row for " + row.project + " violates ledger conservation");
        row.mutation_score =
            mutation_score(row.killed, row.timeout, row.killed + row.survived + row.timeout);
        table.total.prompts += row.prompts;
        table.total.candidates += row.candidates;
        table.total.invalid += row.invalid;
        table.total.identical += row.identical;
        table.total.duplicate += row.duplicate;
        table.total.mutants += row.mutants;
        table.total.killed += row.killed;
        table.total.survived += row.survived;
        table.total.timeout += row.timeout;
    }
    table.rows = std::move(rows);
    return table;
}

inline std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", score);
    return buf;
}

enum class SummaryFormat { Text, Csv, Json };

inline nlohmann::json summary_row_to_json(const SummaryRow& row, bool is_total) {
    nlohmann::json j = {
        {"project", row.project},     {"prompts", row.prompts},
        {"candidates", row.candidates}, {"invalid", row.invalid},
        {"identical", row.identical}, {"duplicate", row.duplicate},
        {"mutants", row.mutants},     {"killed", row.killed},
        {"survived", row.survived},   {"timeout", row.timeout},
    };
    if (is_total)
        j["mutation_score"] = "---";
    else
        j["mutation_score"] = format_score(row.mutation_score);
    return j;
}

inline SummaryRow summary_row_from_json(const nlohmann::json& j) {
    SummaryRow row;
    row.project = j.at("project").get<std::string>();
    row.prompts = j.at("prompts").get<std::int64_t>();
    row.candidates = j.at("candidates").get<std::int64_t>();
    row.invalid = j.at("invalid").get<std::int64_t>();
    row.identical = j.at("identical").get<std::int64_t>();
    row.duplicate = j.at("duplicate").get<std::int64_t>();
    row.mutants = j.at("mutants").get<std::int64_t>();
    row.killed = j.at("killed").get<std::int64_t>();
    row.survived = j.at("survived").get<std::int64_t>();
    row.timeout = j.at("timeout").get<std::int64_t>();
    if (j.at("mutation_score").is_string() &&
        j.at("mutation_score").get<std::string>() != "---")
        row.mutation_score = std::stod(j.at("mutation_score").get<std::string>());
    return row;
}

inline nlohmann::json summary_table_to_json(const SummaryTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) rows.push_back(summary_row_to_json(row, false));
    return nlohmann::json{{"rows", rows}, {"total", summary_row_to_json(table.total, true)}};
}

inline SummaryTable summary_table_from_json(const nlohmann::json& j) {
    std::vector<SummaryRow> rows;
    for (const auto& row : j.at("rows")) rows.push_back(summary_row_from_json(row));
    return build_summary_table(std::move(rows));
}

namespace detail {

inline const char* kSummaryColumns[] = {"project",   "prompts",  "candidates", "invalid",
                                        "identical", "duplicate", "mutants",    "killed",
                                        "survived",  "timeout",  "mutation_score"};

inline std::vector<std::string> summary_row_cells(const SummaryRow& row, bool is_total) {
    return {row.project,
            std::to_string(row.prompts),
            std::to_string(row.candidates),
            std::to_string(row.invalid),
            std::to_string(row.identical),
            std::to_string(row.duplicate),
            std::to_string(row.mutants),
            std::to_string(row.killed),
            std::to_string(row.survived),
            std::to_string(row.timeout),
            is_total ? "---" : format_score(row.mutation_score)};
}

inline std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

inline std::string render_summary(const SummaryTable& table, SummaryFormat format) {
    std::vector<std::vector<std::string>> grid;
    grid.emplace_back(std::begin(detail::kSummaryColumns), std::end(detail::kSummaryColumns));
    for (const auto& row : table.rows) grid.push_back(detail::summary_row_cells(row, false));
    grid.push_back(detail::summary_row_cells(table.total, true));

    if (format == SummaryFormat::Json) return summary_table_to_json(table).dump(2) + "\n";

    if (format == SummaryFormat::Csv) {
        std::string out;
        for (const auto& cells : grid) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += detail::csv_escape(cells[i]);
            }
            out += '\n';
        }
        return out;
    }

    std::vector<std::size_t> widths(grid[0].size(), 0);
    for (const auto& cells : grid)
        for (std::size_t i = 0; i < cells.size(); ++i)
            widths[i] = std::max(widths[i], cells[i].size());
    std::string out;
    for (const auto& cells : grid) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += "  ";
            std::size_t pad = widths[i] - cells[i].size();
            if (i == 0) { // left-align the project column, right-align numbers
                out += cells[i];
                if (i + 1 < cells.size()) out.append(pad, ' ');
            } else {
                out.append(pad, ' ');
                out += cells[i];
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace mutforge
