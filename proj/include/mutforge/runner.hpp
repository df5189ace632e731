#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mutforge/errors.hpp"
#include "mutforge/extraction.hpp"
#include "mutforge/hash.hpp"
#include "mutforge/sites.hpp"
#include "mutforge/source_file.hpp"
#include "mutforge/subprocess.hpp"

namespace mutforge {

struct TestPlan {
    std::string project_root;
    std::vector<std::string> test_command;
    std::int64_t baseline_ms = 0;
    double timeout_factor = 1.5;
    std::int64_t timeout_slack_ms = 5000;

    std::int64_t derived_timeout_ms() const {
        return static_cast<std::int64_t>(timeout_factor * static_cast<double>(baseline_ms)) +
               timeout_slack_ms;
    }
};

enum class OutcomeKind { Killed, Survived, Timeout, Errored };

inline std::string_view outcome_name(OutcomeKind kind) {
    switch (kind) {
    case OutcomeKind::Killed: return "killed";
    case OutcomeKind::Survived: return "survived";
    case OutcomeKind::Timeout: return "timeout";
    case OutcomeKind::Errored: return "errored";
    }
    return "unknown";
}

inline OutcomeKind outcome_from_name(std::string_view name) {
    if (name == "killed") return OutcomeKind::Killed;
    if (name == "survived") return OutcomeKind::Survived;
    if (name == "timeout") return OutcomeKind::Timeout;
    if (name == "errored") return OutcomeKind::Errored;
    throw Error("unknown outcome: " + std::string(name));
}

struct MutantOutcome {
    std::string mutant_id;
    std::string file;
    OutcomeKind outcome = OutcomeKind::Errored;
    std::optional<int> exit_code;
    std::int64_t duration_ms = 0;
    std::string note; // errored reason
};

struct OutcomeCounts {
    std::int64_t mutants = 0; // killed + survived + timeout
    std::int64_t killed = 0;
    std::int64_t survived = 0;
    std::int64_t timeout = 0;
    std::int64_t errored = 0;
    double mutation_score = 0.0;
};

struct RunSummary {
    std::map<std::string, OutcomeCounts> per_file;
    OutcomeCounts total;
    double wall_time_s = 0.0;
};

// Detected fraction, percent, rounded to 2 decimals.
inline double mutation_score(std::int64_t killed, std::int64_t timeout, std::int64_t mutants) {
    if (mutants <= 0) return 0.0;
    double raw = 100.0 * static_cast<double>(killed + timeout) / static_cast<double>(mutants);
    return std::round(raw * 100.0) / 100.0;
}

inline RunSummary summarize(const std::vector<MutantOutcome>& outcomes,
                            const ExtractionLedger& ledger) {
    if (!ledger.conserved())
        throw Error("extraction ledger violates conservation: mutants != candidates - invalid - "
                    "identical - duplicate");
    RunSummary summary;
    for (const auto& outcome : outcomes) {
        OutcomeCounts& row = summary.per_file[outcome.file];
        switch (outcome.outcome) {
        case OutcomeKind::Killed:
            ++row.killed;
            ++summary.total.killed;
            break;
        case OutcomeKind::Survived:
            ++row.survived;
            ++summary.total.survived;
            break;
        case OutcomeKind::Timeout:
            ++row.timeout;
            ++summary.total.timeout;
            break;
        case OutcomeKind::Errored:
            ++row.errored;
            ++summary.total.errored;
            break;
        }
    }
    for (auto& [file, row] : summary.per_file) {
        row.mutants = row.killed + row.survived + row.timeout;
        row.mutation_score = mutation_score(row.killed, row.timeout, row.mutants);
    }
    summary.total.mutants = summary.total.killed + summary.total.survived + summary.total.timeout;
    summary.total.mutation_score =
        mutation_score(summary.total.killed, summary.total.timeout, summary.total.mutants);
    return summary;
}

// An isolated copy of the project tree that applies one mutant at a time and
// restores the touched file afterward, so mutants never compound.
class Workspace {
public:
    Workspace(const std::filesystem::path& project_root, const std::filesystem::path& dir)
        : dir_(dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        copy_tree(project_root, dir_);
    }

    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    ~Workspace() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }

    const std::filesystem::path& dir() const { return dir_; }

    void apply(const Mutant& m) {
        if (!pristine_path_.empty())
            throw SandboxError("workspace already holds a mutant; restore first");
        std::filesystem::path target = dir_ / m.file;
        std::string text = read_text_file(target.string());
        if (m.span.end_offset > text.size() ||
            text.compare(m.span.start_offset, m.span.end_offset - m.span.start_offset,
                         m.original) != 0)
            throw SandboxError("mutant " + m.id + " does not match workspace text of " + m.file);
        pristine_path_ = target;
        pristine_text_ = text;
        write_text_file(target.string(),
                        splice(text, m.span.start_offset, m.span.end_offset, m.replacement));
    }

    void restore() {
        if (pristine_path_.empty()) return;
        write_text_file(pristine_path_.string(), pristine_text_);
        pristine_path_.clear();
        pristine_text_.clear();
    }

    static void copy_tree(const std::filesystem::path& from, const std::filesystem::path& to) {
        for (const auto& entry : std::filesystem::recursive_directory_iterator(from)) {
            std::filesystem::path rel = std::filesystem::relative(entry.path(), from);
            if (!rel.empty() && rel.begin()->string() == ".git") continue;
            std::filesystem::path dest = to / rel;
            if (entry.is_directory()) {
                std::filesystem::create_directories(dest);
            } else if (entry.is_regular_file()) {
                std::filesystem::create_directories(dest.parent_path());
                std::filesystem::copy_file(entry.path(), dest,
                                           std::filesystem::copy_options::overwrite_existing);
            }
        }
    }

private:
    std::filesystem::path dir_;
    std::filesystem::path pristine_path_;
    std::string pristine_text_;
};

inline std::filesystem::path unique_scratch_dir(std::string_view tag) {
    static std::atomic<std::uint64_t> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("mutforge-" + std::string(tag) + "-" + std::to_string(getpid()) + "-" +
                std::to_string(counter.fetch_add(1)));
    return dir;
}

// Clean-tree test run; gates mutation and calibrates the per-mutant timeout.
inline std::int64_t run_baseline(const TestPlan& plan,
                                 std::int64_t baseline_cap_ms = 600000) {
    Workspace ws(plan.project_root, unique_scratch_dir("baseline"));
    ProcessResult result = run_process(plan.test_command, ws.dir().string(), baseline_cap_ms);
    if (result.timed_out)
        throw BaselineFailedError("baseline test run exceeded " +
                                  std::to_string(baseline_cap_ms) + " ms");
    if (result.exit_code != 0) {
        std::string tail = result.output.size() > 2000
                               ? result.output.substr(result.output.size() - 2000)
                               : result.output;
        throw BaselineFailedError("tests fail on the unmutated project (exit " +
                                  std::to_string(result.exit_code) + "):\n" + tail);
    }
    return result.duration_ms;
}

inline MutantOutcome execute_mutant(const Mutant& m, const TestPlan& plan, Workspace& ws) {
    MutantOutcome out;
    out.mutant_id = m.id;
    out.file = m.file;
    try {
        ws.apply(m);
        ProcessResult result =
            run_process(plan.test_command, ws.dir().string(), plan.derived_timeout_ms());
        ws.restore();
        out.duration_ms = result.duration_ms;
        if (result.timed_out) {
            out.outcome = OutcomeKind::Timeout;
        } else if (result.exit_code == 0) {
            out.outcome = OutcomeKind::Survived;
            out.exit_code = 0;
        } else {
            out.outcome = OutcomeKind::Killed;
            out.exit_code = result.exit_code;
        }
    } catch (const Error& e) {
        ws.restore();
        out.outcome = OutcomeKind::Errored;
        out.note = e.what();
    }
    return out;
}

// Runs every mutant, W workspaces in parallel; results keep input order.
inline std::vector<MutantOutcome> execute_all(
    const std::vector<Mutant>& mutants, const TestPlan& plan, int workers,
    const std::function<void(std::size_t, const MutantOutcome&)>& progress = {}) {
    std::vector<MutantOutcome> outcomes(mutants.size());
    if (mutants.empty()) return outcomes;
    workers = std::max(1, std::min<int>(workers, static_cast<int>(mutants.size())));

    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;
    auto work = [&](int worker_nr) {
        Workspace ws(plan.project_root,
                     unique_scratch_dir("worker" + std::to_string(worker_nr)));
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= mutants.size()) break;
            outcomes[i] = execute_mutant(mutants[i], plan, ws);
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(i, outcomes[i]);
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    return outcomes;
}

// Content hash over every regular file (sorted relative paths); proves the
// pristine tree survived a run untouched.
inline std::string hash_tree(const std::filesystem::path& root) {
    std::vector<std::string> rel_paths;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        rel_paths.push_back(std::filesystem::relative(entry.path(), root).generic_string());
    }
    std::sort(rel_paths.begin(), rel_paths.end());
    std::string acc;
    for (const auto& rel : rel_paths) {
        acc += rel;
        acc += '\x1f';
        acc += sha256_hex(read_text_file((root / rel).string()));
        acc += '\x1e';
    }
    return sha256_hex(acc);
}

inline nlohmann::json outcomes_to_json(const std::vector<MutantOutcome>& outcomes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& o : outcomes) {
        if (o.outcome == OutcomeKind::Errored) continue; // surfaced via the manifest
        nlohmann::json row = {
            {"mutant_id", o.mutant_id},
            {"outcome", std::string(outcome_name(o.outcome))},
            {"duration_ms", o.duration_ms},
        };
        if (o.exit_code)
            row["exit_code"] = *o.exit_code;
        else
            row["exit_code"] = nullptr;
        arr.push_back(std::move(row));
    }
    return arr;
}

inline std::vector<MutantOutcome> outcomes_from_json(const nlohmann::json& arr,
                                                     const std::map<std::string, std::string>&
                                                         mutant_files = {}) {
    std::vector<MutantOutcome> outcomes;
    for (const auto& row : arr) {
        MutantOutcome o;
        o.mutant_id = row.at("mutant_id").get<std::string>();
        o.outcome = outcome_from_name(row.at("outcome").get<std::string>());
        o.duration_ms = row.at("duration_ms").get<std::int64_t>();
        if (row.contains("exit_code") && !row["exit_code"].is_null())
            o.exit_code = row["exit_code"].get<int>();
        auto it = mutant_files.find(o.mutant_id);
        if (it != mutant_files.end()) o.file = it->second;
        outcomes.push_back(std::move(o));
    }
    return outcomes;
}

} // namespace mutforge
