#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mutforge/ast.hpp"
#include "mutforge/errors.hpp"
#include "mutforge/parser.hpp"

namespace mutforge {

// A language profile bundles everything the pipeline needs to know about a
// source language: which files belong to it, how to parse them, and how to
// check whether a rewritten file still parses.
class LanguageProfile {
public:
    virtual ~LanguageProfile() = default;

    virtual std::string_view id() const = 0;
    virtual std::vector<std::string_view> file_extensions() const = 0;

    // Throws ParseError on malformed input.
    virtual cscript::ParseTree parse(std::string_view text) const = 0;

    bool parses(std::string_view text) const {
        try {
            parse(text);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    }

    bool handles_extension(std::string_view ext) const {
        for (auto e : file_extensions())
            if (e == ext) return true;
        return false;
    }
};

class CScriptProfile final : public LanguageProfile {
public:
    std::string_view id() const override { return "cscript"; }

    std::vector<std::string_view> file_extensions() const override { return {".js", ".cjs"}; }

    cscript::ParseTree parse(std::string_view text) const override {
        return cscript::Parser(text).parse_program();
    }
};

inline const LanguageProfile* find_profile(std::string_view id) {
    static const CScriptProfile cscript_profile;
    if (id == cscript_profile.id()) return &cscript_profile;
    return nullptr;
}

inline const LanguageProfile* profile_for_path(std::string_view path) {
    static const CScriptProfile cscript_profile;
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos) return nullptr;
    if (cscript_profile.handles_extension(path.substr(dot))) return &cscript_profile;
    return nullptr;
}

} // namespace mutforge
