#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mutforge/hash.hpp"
#include "mutforge/language.hpp"
#include "mutforge/prompting.hpp"
#include "mutforge/sites.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge {

struct CandidateMutant {
    std::string site_id;
    int prompt_id = 0;
    int option_index = 0; // 1-based position of the fenced block in the completion
    std::string replacement;
    std::string explanation;
};

enum class FilterVerdict { Accepted, Invalid, Identical, Duplicate };

struct Provenance {
    int prompt_id = 0;
    int option_index = 0;
    std::string template_name;
    std::string model;
    double temperature = 0.0;
};

struct Mutant {
    std::string id; // stable hash of (file, span offsets, replacement)
    std::string file;
    SyntaxSpan span; // post-expansion
    std::string original;
    std::string replacement;
    SiteKind kind = SiteKind::IfCondition;
    Provenance provenance;
};

struct ExtractionLedger {
    std::int64_t candidates = 0;
    std::int64_t invalid = 0;
    std::int64_t identical = 0;
    std::int64_t duplicate = 0;
    std::int64_t mutants = 0;

    ExtractionLedger& operator+=(const ExtractionLedger& other) {
        candidates += other.candidates;
        invalid += other.invalid;
        identical += other.identical;
        duplicate += other.duplicate;
        mutants += other.mutants;
        return *this;
    }

    bool conserved() const { return mutants == candidates - invalid - identical - duplicate; }
};

inline ExtractionLedger ledger_totals(const std::vector<ExtractionLedger>& per_file) {
    ExtractionLedger total;
    for (const auto& ledger : per_file) total += ledger;
    return total;
}

namespace detail {

inline bool is_fence_line(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    return line.substr(i, 3) == "```";
}

inline bool is_blank(std::string_view line) {
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') return false;
    return true;
}

inline std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\n' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\n' || s[e - 1] == '\r'))
        --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

inline std::string join_block(const std::vector<std::string_view>& lines, std::size_t b,
                              std::size_t e) {
    // drop leading/trailing blank lines
    while (b < e && is_blank(lines[b])) ++b;
    while (e > b && is_blank(lines[e - 1])) --e;
    std::string out;
    for (std::size_t i = b; i < e; ++i) {
        if (i > b) out += '\n';
        std::string_view line = lines[i];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out += line;
    }
    return out;
}

} // namespace detail

// Pulls every fenced code block out of a completion, in order. A fence is a
// line whose first non-space characters are three backticks; any info string
// on the opening fence is ignored. Blocks that are empty after trimming
// blank lines yield no candidate but still consume an option index.
inline std::vector<CandidateMutant> extract_candidates(std::string_view completion_text,
                                                       const PlaceholderSite& site,
                                                       const Prompt& prompt) {
    auto lines = detail::split_lines(completion_text);
    std::vector<CandidateMutant> candidates;
    int option_index = 0;
    std::size_t i = 0;
    while (i < lines.size()) {
        if (!detail::is_fence_line(lines[i])) {
            ++i;
            continue;
        }
        std::size_t body_begin = ++i;
        while (i < lines.size() && !detail::is_fence_line(lines[i])) ++i;
        std::size_t body_end = i;
        bool closed = i < lines.size();
        if (closed) ++i; // consume the closing fence
        ++option_index;

        std::string replacement = detail::join_block(lines, body_begin, body_end);
        if (replacement.empty()) continue;

        CandidateMutant candidate;
        candidate.site_id = site.id;
        candidate.prompt_id = prompt.id;
        candidate.option_index = option_index;
        candidate.replacement = std::move(replacement);
        if (closed) {
            std::size_t expl_end = i;
            while (expl_end < lines.size() && !detail::is_fence_line(lines[expl_end])) ++expl_end;
            candidate.explanation =
                std::string(detail::trim(detail::join_block(lines, i, expl_end)));
        }
        candidates.push_back(std::move(candidate));
    }
    return candidates;
}

// The replacement as it will land in the file: header and whole-argument-list
// sites widen to the nearest enclosing node, with the fragment spliced into
// the node's text.
inline std::pair<SyntaxSpan, std::string> expanded_replacement(const SourceFile& file,
                                                               const PlaceholderSite& site,
                                                               std::string_view fragment) {
    SyntaxSpan span = expand_to_enclosing(site);
    if (span == site.span) return {span, std::string(fragment)};
    std::string_view node_text = file.slice(span);
    std::string widened =
        splice(node_text, site.span.start_offset - span.start_offset,
               site.span.end_offset - span.start_offset, fragment);
    return {span, widened};
}

inline std::string mutant_key(std::string_view path, const SyntaxSpan& span,
                              std::string_view replacement) {
    std::string key;
    key += path;
    key += '\x1f';
    key += std::to_string(span.start_offset);
    key += '\x1f';
    key += std::to_string(span.end_offset);
    key += '\x1f';
    key += replacement;
    return sha256_hex(key);
}

// Verdict precedence: Identical, then Duplicate, then Invalid. Accepted
// candidates register their mutant key in `seen` (run-wide).
inline FilterVerdict filter_candidate(const CandidateMutant& c, const PlaceholderSite& site,
                                      const SourceFile& file, const LanguageProfile& profile,
                                      std::set<std::string>& seen) {
    if (detail::trim(c.replacement) == detail::trim(site.original))
        return FilterVerdict::Identical;
    auto [span, replacement] = expanded_replacement(file, site, c.replacement);
    std::string key = mutant_key(site.path, span, replacement);
    if (seen.count(key)) return FilterVerdict::Duplicate;
    if (!validate_in_context(file, site, c.replacement, profile)) return FilterVerdict::Invalid;
    seen.insert(key);
    return FilterVerdict::Accepted;
}

inline Mutant build_mutant(const CandidateMutant& c, const PlaceholderSite& site,
                           const SourceFile& file, Provenance provenance) {
    Mutant m;
    auto [span, replacement] = expanded_replacement(file, site, c.replacement);
    m.file = site.path;
    m.span = span;
    m.original = std::string(file.slice(span));
    m.replacement = std::move(replacement);
    m.kind = site.kind;
    m.provenance = std::move(provenance);
    m.id = mutant_key(m.file, m.span, m.replacement);
    return m;
}

inline nlohmann::json mutant_to_json(const Mutant& m) {
    return nlohmann::json{
        {"id", m.id},
        {"file", m.file},
        {"range",
         {{"start", {{"line", m.span.start_line}, {"col", m.span.start_col}}},
          {"end", {{"line", m.span.end_line}, {"col", m.span.end_col}}}}},
        {"original", m.original},
        {"replacement", m.replacement},
        {"kind", std::string(site_kind_name(m.kind))},
        {"provenance",
         {{"prompt_id", m.provenance.prompt_id},
          {"option_index", m.provenance.option_index},
          {"template", m.provenance.template_name},
          {"model", m.provenance.model},
          {"temperature", m.provenance.temperature}}},
    };
}

// Rebuilds a mutant from its archived form. Byte offsets are recovered from
// the line/col range against the current file text; without a line index
// (analysis-only use) they are left at zero.
inline Mutant mutant_from_json(const nlohmann::json& j, const LineIndex* lines = nullptr) {
    Mutant m;
    m.id = j.at("id").get<std::string>();
    m.file = j.at("file").get<std::string>();
    const auto& range = j.at("range");
    int start_line = range.at("start").at("line").get<int>();
    int start_col = range.at("start").at("col").get<int>();
    int end_line = range.at("end").at("line").get<int>();
    int end_col = range.at("end").at("col").get<int>();
    if (lines) {
        m.span.start_offset = lines->line_start(start_line) + static_cast<std::size_t>(start_col) - 1;
        m.span.end_offset = lines->line_start(end_line) + static_cast<std::size_t>(end_col) - 1;
    }
    m.span.start_line = start_line;
    m.span.start_col = start_col;
    m.span.end_line = end_line;
    m.span.end_col = end_col;
    m.original = j.at("original").get<std::string>();
    m.replacement = j.at("replacement").get<std::string>();
    m.kind = site_kind_from_name(j.at("kind").get<std::string>());
    const auto& prov = j.at("provenance");
    m.provenance.prompt_id = prov.at("prompt_id").get<int>();
    m.provenance.option_index = prov.at("option_index").get<int>();
    m.provenance.template_name = prov.at("template").get<std::string>();
    m.provenance.model = prov.at("model").get<std::string>();
    m.provenance.temperature = prov.at("temperature").get<double>();
    return m;
}

} // namespace mutforge
