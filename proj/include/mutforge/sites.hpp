#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mutforge/ast.hpp"
#include "mutforge/hash.hpp"
#include "mutforge/language.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge {

inline constexpr std::string_view kPlaceholderToken = "<PLACEHOLDER>";

// Order matters: ties in start offset are broken by this enumeration order.
enum class SiteKind {
    IfCondition,
    SwitchDiscriminant,
    WhileCondition,
    DoWhileCondition,
    ForInit,
    ForTest,
    ForUpdate,
    ForHeader,
    ForInLeft,
    ForInRight,
    ForInHeader,
    ForOfLeft,
    ForOfRight,
    ForOfHeader,
    CallCallee,
    CallArgument,
    CallAllArguments,
};

inline std::string_view site_kind_name(SiteKind kind) {
    switch (kind) {
    case SiteKind::IfCondition: return "IfCondition";
    case SiteKind::SwitchDiscriminant: return "SwitchDiscriminant";
    case SiteKind::WhileCondition: return "WhileCondition";
    case SiteKind::DoWhileCondition: return "DoWhileCondition";
    case SiteKind::ForInit: return "ForInit";
    case SiteKind::ForTest: return "ForTest";
    case SiteKind::ForUpdate: return "ForUpdate";
    case SiteKind::ForHeader: return "ForHeader";
    case SiteKind::ForInLeft: return "ForInLeft";
    case SiteKind::ForInRight: return "ForInRight";
    case SiteKind::ForInHeader: return "ForInHeader";
    case SiteKind::ForOfLeft: return "ForOfLeft";
    case SiteKind::ForOfRight: return "ForOfRight";
    case SiteKind::ForOfHeader: return "ForOfHeader";
    case SiteKind::CallCallee: return "CallCallee";
    case SiteKind::CallArgument: return "CallArgument";
    case SiteKind::CallAllArguments: return "CallAllArguments";
    }
    return "Unknown";
}

inline SiteKind site_kind_from_name(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(SiteKind::CallAllArguments); ++i) {
        auto k = static_cast<SiteKind>(i);
        if (site_kind_name(k) == name) return k;
    }
    throw Error("unknown site kind: " + std::string(name));
}

struct PlaceholderSite {
    std::string id;
    std::string path;
    SyntaxSpan span;
    SyntaxSpan enclosing_span;
    SiteKind kind = SiteKind::IfCondition;
    int arg_index = -1; // CallArgument position, -1 otherwise
    std::string original;
};

inline std::string site_id(std::string_view path, const SyntaxSpan& span, SiteKind kind) {
    std::string key;
    key += path;
    key += '\x1f';
    key += std::to_string(span.start_offset);
    key += '\x1f';
    key += std::to_string(span.end_offset);
    key += '\x1f';
    key += site_kind_name(kind);
    return sha256_hex(key);
}

namespace detail {

inline void visit_nodes(const cscript::Node* node, std::vector<const cscript::Node*>& out) {
    if (!node) return;
    out.push_back(node);
    for (const auto& child : node->children) visit_nodes(child.get(), out);
}

inline void add_site(std::vector<PlaceholderSite>& sites, const SourceFile& file,
                     std::size_t start, std::size_t end, SiteKind kind, int arg_index = -1) {
    PlaceholderSite site;
    site.path = file.path;
    site.span = file.span_at(start, end);
    site.kind = kind;
    site.arg_index = arg_index;
    site.original = std::string(file.slice(site.span));
    site.id = site_id(site.path, site.span, kind);
    sites.push_back(std::move(site));
}

} // namespace detail

// All placeholder sites of a parsed file, in document order. Ties at the same
// start offset (a loop header and its first part, an argument list and its
// first argument) follow SiteKind enumeration order, then argument position.
inline std::vector<PlaceholderSite> enumerate_sites(const SourceFile& file,
                                                    const cscript::ParseTree& tree) {
    using cscript::Node;
    using cscript::NodeKind;

    std::vector<const Node*> nodes;
    detail::visit_nodes(tree.root.get(), nodes);

    std::vector<PlaceholderSite> sites;
    for (const Node* node : nodes) {
        switch (node->kind) {
        case NodeKind::IfStmt:
            detail::add_site(sites, file, node->children[0]->start, node->children[0]->end,
                             SiteKind::IfCondition);
            break;
        case NodeKind::SwitchStmt:
            detail::add_site(sites, file, node->children[0]->start, node->children[0]->end,
                             SiteKind::SwitchDiscriminant);
            break;
        case NodeKind::WhileStmt:
            detail::add_site(sites, file, node->children[0]->start, node->children[0]->end,
                             SiteKind::WhileCondition);
            break;
        case NodeKind::DoWhileStmt:
            detail::add_site(sites, file, node->children[1]->start, node->children[1]->end,
                             SiteKind::DoWhileCondition);
            break;
        case NodeKind::ForStmt: {
            if (node->children[0])
                detail::add_site(sites, file, node->children[0]->start, node->children[0]->end,
                                 SiteKind::ForInit);
            if (node->children[1])
                detail::add_site(sites, file, node->children[1]->start, node->children[1]->end,
                                 SiteKind::ForTest);
            if (node->children[2])
                detail::add_site(sites, file, node->children[2]->start, node->children[2]->end,
                                 SiteKind::ForUpdate);
            if (node->has_inner)
                detail::add_site(sites, file, node->inner_start, node->inner_end,
                                 SiteKind::ForHeader);
            break;
        }
        case NodeKind::ForInStmt:
        case NodeKind::ForOfStmt: {
            bool is_in = node->kind == NodeKind::ForInStmt;
            detail::add_site(sites, file, node->children[0]->start, node->children[0]->end,
                             is_in ? SiteKind::ForInLeft : SiteKind::ForOfLeft);
            detail::add_site(sites, file, node->children[1]->start, node->children[1]->end,
                             is_in ? SiteKind::ForInRight : SiteKind::ForOfRight);
            if (node->has_inner)
                detail::add_site(sites, file, node->inner_start, node->inner_end,
                                 is_in ? SiteKind::ForInHeader : SiteKind::ForOfHeader);
            break;
        }
        case NodeKind::CallExpr: {
            detail::add_site(sites, file, node->children[0]->start, node->children[0]->end,
                             SiteKind::CallCallee);
            for (std::size_t i = 1; i < node->children.size(); ++i)
                detail::add_site(sites, file, node->children[i]->start, node->children[i]->end,
                                 SiteKind::CallArgument, static_cast<int>(i - 1));
            if (node->has_inner)
                detail::add_site(sites, file, node->inner_start, node->inner_end,
                                 SiteKind::CallAllArguments);
            break;
        }
        default:
            break;
        }
    }

    std::stable_sort(sites.begin(), sites.end(),
                     [](const PlaceholderSite& a, const PlaceholderSite& b) {
                         if (a.span.start_offset != b.span.start_offset)
                             return a.span.start_offset < b.span.start_offset;
                         if (a.kind != b.kind) return a.kind < b.kind;
                         return a.arg_index < b.arg_index;
                     });

    // Attach the nearest single node covering each site's span.
    for (PlaceholderSite& site : sites) {
        const Node* covering =
            cscript::find_covering(tree.root.get(), site.span.start_offset, site.span.end_offset);
        if (covering)
            site.enclosing_span = file.span_at(covering->start, covering->end);
        else
            site.enclosing_span = site.span;
    }
    return sites;
}

inline std::vector<PlaceholderSite> enumerate_sites(const SourceFile& file,
                                                    const LanguageProfile& profile) {
    return enumerate_sites(file, profile.parse(file.text));
}

// Splices `replacement` over [start_offset, end_offset) of `text`.
inline std::string splice(std::string_view text, std::size_t start_offset,
                          std::size_t end_offset, std::string_view replacement) {
    std::string out;
    out.reserve(text.size() - (end_offset - start_offset) + replacement.size());
    out.append(text.substr(0, start_offset));
    out.append(replacement);
    out.append(text.substr(end_offset));
    return out;
}

inline std::string apply_fragment(const SourceFile& file, const PlaceholderSite& site,
                                  std::string_view fragment) {
    return splice(file.text, site.span.start_offset, site.span.end_offset, fragment);
}

inline bool validate_in_context(const SourceFile& file, const PlaceholderSite& site,
                                std::string_view fragment, const LanguageProfile& profile) {
    return profile.parses(apply_fragment(file, site, fragment));
}

inline bool is_multi_node_kind(SiteKind kind) {
    return kind == SiteKind::ForHeader || kind == SiteKind::ForInHeader ||
           kind == SiteKind::ForOfHeader || kind == SiteKind::CallAllArguments;
}

// Loop headers and whole argument lists are not single syntax nodes; widen
// those to the nearest covering node so a mutant always spans one node.
inline SyntaxSpan expand_to_enclosing(const PlaceholderSite& site) {
    return is_multi_node_kind(site.kind) ? site.enclosing_span : site.span;
}

// File text with the site replaced by the placeholder token, cut down to at
// most window_lines lines centered on the placeholder's line.
inline std::string render_with_placeholder(const SourceFile& file, const PlaceholderSite& site,
                                           std::size_t window_lines) {
    std::string substituted =
        splice(file.text, site.span.start_offset, site.span.end_offset, kPlaceholderToken);
    LineIndex lines(substituted);
    int total = lines.line_count();
    int window = static_cast<int>(window_lines);
    if (window >= total) return substituted;

    int center = lines.line_of(site.span.start_offset); // 1-based
    int lo = std::max(1, center - window / 2);
    int hi = lo + window - 1;
    if (hi > total) {
        hi = total;
        lo = std::max(1, hi - window + 1);
    }
    std::size_t begin = lines.line_start(lo);
    std::size_t end = hi < total ? lines.line_start(hi + 1) : substituted.size();
    return substituted.substr(begin, end - begin);
}

} // namespace mutforge
