#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mutforge/errors.hpp"
#include "mutforge/extraction.hpp"
#include "mutforge/lexer.hpp"

namespace mutforge {

struct ConfigFingerprint {
    std::string model;
    double temperature = 0.0;
    std::string template_name;

    bool operator==(const ConfigFingerprint&) const = default;
};

struct RunRecord {
    std::string run_id;
    ConfigFingerprint fingerprint;
    std::map<std::string, std::set<std::string>> keys_by_project;
};

struct VariabilityRow {
    std::size_t min_count = 0;
    std::size_t max_count = 0;
    std::size_t distinct_count = 0;
    std::size_t common_count = 0;
    double common_pct = 0.0;
};

using VariabilityReport = std::map<std::string, VariabilityRow>;

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

// Cross-run mutant stability: per project, the spread of per-run counts plus
// the union (distinct) and intersection (common) of the mutant key sets.
inline VariabilityReport variability(const std::vector<RunRecord>& runs) {
    if (runs.size() < 2) throw Error("variability needs at least 2 runs");
    for (const auto& run : runs)
        if (!(run.fingerprint == runs.front().fingerprint))
            throw ConfigMismatchError("run " + run.run_id +
                                      " has a different config fingerprint than " +
                                      runs.front().run_id);

    std::set<std::string> projects;
    for (const auto& run : runs)
        for (const auto& [project, keys] : run.keys_by_project) projects.insert(project);

    VariabilityReport report;
    for (const auto& project : projects) {
        static const std::set<std::string> empty;
        VariabilityRow row;
        std::set<std::string> unite;
        std::set<std::string> common;
        bool first = true;
        row.min_count = SIZE_MAX;
        for (const auto& run : runs) {
            auto it = run.keys_by_project.find(project);
            const std::set<std::string>& keys = it == run.keys_by_project.end() ? empty : it->second;
            row.min_count = std::min(row.min_count, keys.size());
            row.max_count = std::max(row.max_count, keys.size());
            unite.insert(keys.begin(), keys.end());
            if (first) {
                common = keys;
                first = false;
            } else {
                std::set<std::string> next;
                std::set_intersection(common.begin(), common.end(), keys.begin(), keys.end(),
                                      std::inserter(next, next.begin()));
                common = std::move(next);
            }
        }
        row.distinct_count = unite.size();
        row.common_count = common.size();
        row.common_pct = row.distinct_count == 0
                             ? 0.0
                             : round2(100.0 * static_cast<double>(row.common_count) /
                                      static_cast<double>(row.distinct_count));
        report[project] = row;
    }
    return report;
}

// Minimal edit count under unit-cost insert/delete/substitute.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    std::vector<std::size_t> row(a.size() + 1);
    for (std::size_t i = 0; i <= a.size(); ++i) row[i] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
        std::size_t diag = row[0];
        row[0] = j;
        for (std::size_t i = 1; i <= a.size(); ++i) {
            std::size_t next_diag = row[i];
            std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[i] = std::min({row[i] + 1, row[i - 1] + 1, subst});
            diag = next_diag;
        }
    }
    return row[a.size()];
}

// Mean edit distance between originals and replacements per (project, template).
using SimilarityStats = std::map<std::pair<std::string, std::string>, double>;

inline SimilarityStats similarity_stats(
    const std::vector<std::pair<std::string, Mutant>>& project_mutants) {
    std::map<std::pair<std::string, std::string>, std::pair<std::uint64_t, std::size_t>> acc;
    for (const auto& [project, mutant] : project_mutants) {
        auto& slot = acc[{project, mutant.provenance.template_name}];
        slot.first += levenshtein(mutant.original, mutant.replacement);
        slot.second += 1;
    }
    SimilarityStats stats;
    for (const auto& [key, slot] : acc)
        stats[key] = static_cast<double>(slot.first) / static_cast<double>(slot.second);
    return stats;
}

enum class EquivalencePattern {
    NullCheckRewrite,
    SubstringFamilySwap,
    RegexFlagAdded,
    NoopSliceCall,
    ExtraCallArguments,
};

inline std::string_view equivalence_pattern_name(EquivalencePattern p) {
    switch (p) {
    case EquivalencePattern::NullCheckRewrite: return "NullCheckRewrite";
    case EquivalencePattern::SubstringFamilySwap: return "SubstringFamilySwap";
    case EquivalencePattern::RegexFlagAdded: return "RegexFlagAdded";
    case EquivalencePattern::NoopSliceCall: return "NoopSliceCall";
    case EquivalencePattern::ExtraCallArguments: return "ExtraCallArguments";
    }
    return "Unknown";
}

struct EquivalenceFlag {
    std::string mutant_id;
    EquivalencePattern pattern = EquivalencePattern::NullCheckRewrite;
    std::string rationale;
};

namespace detail {

inline std::optional<std::vector<std::string>> fragment_tokens(std::string_view text) {
    try {
        std::vector<std::string> out;
        for (const auto& tok : cscript::Lexer(text).tokenize()) {
            if (tok.kind == cscript::TokenKind::Eof) break;
            out.emplace_back(tok.text);
        }
        return out;
    } catch (const ParseError&) {
        return std::nullopt;
    }
}

inline bool is_cmp_op(std::string_view s) {
    return s == "==" || s == "!=" || s == "===" || s == "!==";
}

inline bool is_nullish(std::string_view s) { return s == "null" || s == "undefined"; }

// The checked expression inside a null/undefined test. Comparison forms are
// `E op null` / `null op E`; the negation form is `!E`.
struct NullCheck {
    std::vector<std::string> core;
    bool comparison_form = false;
};

inline std::optional<NullCheck> parse_null_check(const std::vector<std::string>& t) {
    if (t.size() >= 3 && is_cmp_op(t[t.size() - 2]) && is_nullish(t.back()))
        return NullCheck{{t.begin(), t.end() - 2}, true};
    if (t.size() >= 3 && is_nullish(t.front()) && is_cmp_op(t[1]))
        return NullCheck{{t.begin() + 2, t.end()}, true};
    if (t.size() >= 2 && t.front() == "!") return NullCheck{{t.begin() + 1, t.end()}, false};
    return std::nullopt;
}

inline bool is_substring_family(std::string_view name) {
    return name == "substring" || name == "substr" || name == "slice";
}

// Position of a `.name(` member-call where name is in the substring family.
// A family name as the final token also counts, so bare callee fragments
// (`s.slice`) match as well as full calls (`s.slice(1)`).
inline std::optional<std::size_t> find_family_call(const std::vector<std::string>& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i - 1] == "." && is_substring_family(t[i]) &&
            (i + 1 == t.size() || t[i + 1] == "("))
            return i;
    return std::nullopt;
}

inline bool regex_parts(std::string_view lit, std::string_view& body, std::string_view& flags) {
    if (lit.size() < 2 || lit.front() != '/') return false;
    std::size_t close = lit.rfind('/');
    if (close == 0) return false;
    body = lit.substr(0, close + 1);
    flags = lit.substr(close + 1);
    return true;
}

} // namespace detail

inline std::vector<EquivalenceFlag> flag_equivalents(const std::vector<Mutant>& mutants) {
    std::vector<EquivalenceFlag> flags;
    for (const auto& m : mutants) {
        auto orig_opt = detail::fragment_tokens(m.original);
        auto repl_opt = detail::fragment_tokens(m.replacement);
        if (!orig_opt || !repl_opt) continue;
        const auto& orig = *orig_opt;
        const auto& repl = *repl_opt;
        if (orig.empty() || repl.empty()) continue;

        auto add = [&](EquivalencePattern pattern, std::string rationale) {
            flags.push_back({m.id, pattern, std::move(rationale)});
        };

        // (a) null/undefined-check rewrites
        auto orig_check = detail::parse_null_check(orig);
        auto repl_check = detail::parse_null_check(repl);
        if (orig_check && repl_check && orig_check->core == repl_check->core &&
            (orig_check->comparison_form || repl_check->comparison_form)) {
            add(EquivalencePattern::NullCheckRewrite,
                "null/undefined check rewritten over the same expression; polarity-sensitive, "
                "the truth value may be inverted");
        }

        // (b) substring/substr/slice family swaps
        auto orig_call = detail::find_family_call(orig);
        auto repl_call = detail::find_family_call(repl);
        if (orig_call && repl_call && *orig_call == *repl_call &&
            orig.size() == repl.size() && orig[*orig_call] != repl[*repl_call]) {
            bool rest_equal = true;
            for (std::size_t i = 0; i < orig.size(); ++i)
                if (i != *orig_call && orig[i] != repl[i]) {
                    rest_equal = false;
                    break;
                }
            if (rest_equal)
                add(EquivalencePattern::SubstringFamilySwap,
                    orig[*orig_call] + " swapped for " + repl[*repl_call] +
                        " with identical receiver and arguments");
        }

        // (c) added regex modifiers
        if (orig.size() == repl.size()) {
            std::optional<std::size_t> regex_diff;
            bool others_equal = true;
            for (std::size_t i = 0; i < orig.size(); ++i) {
                if (orig[i] == repl[i]) continue;
                if (!orig[i].empty() && orig[i].front() == '/' && !repl[i].empty() &&
                    repl[i].front() == '/' && !regex_diff) {
                    regex_diff = i;
                } else {
                    others_equal = false;
                    break;
                }
            }
            if (others_equal && regex_diff) {
                std::string_view ob, of, rb, rf;
                if (detail::regex_parts(orig[*regex_diff], ob, of) &&
                    detail::regex_parts(repl[*regex_diff], rb, rf) && ob == rb &&
                    rf.size() > of.size() &&
                    std::all_of(of.begin(), of.end(),
                                [&](char c) { return rf.find(c) != std::string_view::npos; })) {
                    add(EquivalencePattern::RegexFlagAdded,
                        "regex body unchanged, modifier(s) added: " + std::string(rf));
                }
            }
        }

        // (d) inserted no-op whole-array slice call
        if (repl.size() == orig.size() + 4) {
            for (std::size_t at = 0; at + 4 <= repl.size(); ++at) {
                if (repl[at] == "." && repl[at + 1] == "slice" && repl[at + 2] == "(" &&
                    repl[at + 3] == ")") {
                    std::vector<std::string> stripped;
                    stripped.reserve(orig.size());
                    stripped.insert(stripped.end(), repl.begin(),
                                    repl.begin() + static_cast<std::ptrdiff_t>(at));
                    stripped.insert(stripped.end(),
                                    repl.begin() + static_cast<std::ptrdiff_t>(at + 4), repl.end());
                    if (stripped == orig) {
                        add(EquivalencePattern::NoopSliceCall,
                            "argument-less .slice() inserted; copies the array without changing "
                            "contents");
                        break;
                    }
                }
            }
        }

        // (e) call with more arguments than the original at the same callee
        if (orig.size() >= 3 && repl.size() > orig.size() && orig.back() == ")" &&
            repl.back() == ")" && orig[orig.size() - 2] != "," ) {
            bool prefix = std::equal(orig.begin(), orig.end() - 1, repl.begin());
            if (prefix) {
                const std::string& next = repl[orig.size() - 1];
                bool zero_arg_call = orig[orig.size() - 2] == "(";
                if ((zero_arg_call && next != ")") || (!zero_arg_call && next == ","))
                    add(EquivalencePattern::ExtraCallArguments,
                        "same callee and original arguments with extra trailing argument(s); "
                        "extras are ignored unless the callee inspects them");
            }
        }
    }
    return flags;
}

inline nlohmann::json variability_to_json(const VariabilityReport& report) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [project, row] : report) {
        obj[project] = {
            {"min", row.min_count},           {"max", row.max_count},
            {"distinct", row.distinct_count}, {"common", row.common_count},
            {"common_pct", row.common_pct},
        };
    }
    return obj;
}

inline nlohmann::json similarity_to_json(const SimilarityStats& stats) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [key, mean] : stats) {
        arr.push_back({
            {"project", key.first},
            {"template", key.second},
            {"mean_levenshtein", mean},
        });
    }
    return arr;
}

inline nlohmann::json flags_to_json(const std::vector<EquivalenceFlag>& flags) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : flags) {
        arr.push_back({
            {"mutant_id", f.mutant_id},
            {"pattern", std::string(equivalence_pattern_name(f.pattern))},
            {"rationale", f.rationale},
        });
    }
    return arr;
}

} // namespace mutforge
