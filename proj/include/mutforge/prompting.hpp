#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mutforge/errors.hpp"
#include "mutforge/sites.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge {

struct PromptTemplate {
    std::string name;
    std::string body;
};

struct SystemPrompt {
    std::string name;
    std::string text;
};

struct Prompt {
    int id = 0; // 1-based, assigned in site enumeration order
    std::string site_id;
    std::string template_name;
    std::string system_name;
    std::string system_text;
    std::string user_text;
    std::string rendered_at;
};

namespace detail {

inline constexpr std::string_view kTemplateFull =
    R"TMPL(Your task is to apply mutation testing to the following
code:
```
{{{code}}}
```

by replacing the PLACEHOLDER with a buggy code fragment
that has different behavior than the original code fragment,
which was:
```
{{{orig}}}
```
Please consider changes such as using different operators,
changing constants, referring to different variables, object
properties, functions, or methods.

Provide three answers as fenced code blocks containing a
single line of code, using the following template:

Option 1: The PLACEHOLDER can be replaced with:
```
<code fragment>
```
This would result in different behavior because
<brief explanation>.

Option 2: The PLACEHOLDER can be replaced with:
```
<code fragment>
```
This would result in different behavior because
<brief explanation>.

Option 3: The PLACEHOLDER can be replaced with:
```
<code fragment>
```
This would result in different behavior because
<brief explanation>.

Please conclude your response with "DONE.")TMPL";

inline constexpr std::string_view kTemplateOneMutation =
    R"TMPL(Your task is to apply mutation testing to the following
code:
```
{{{code}}}
```

by replacing the PLACEHOLDER with a buggy code fragment
that has different behavior than the original code fragment,
which was:
```
{{{orig}}}
```
Please consider changes such as using different operators,
changing constants, referring to different variables, object
properties, functions, or methods.

Provide one answer as a fenced code block containing a
single line of code, using the following template:

Option 1: The PLACEHOLDER can be replaced with:
```
<code fragment>
```
This would result in different behavior because
<brief explanation>.

Please conclude your response with "DONE.")TMPL";

inline constexpr std::string_view kTemplateNoExplanation =
    R"TMPL(Your task is to apply mutation testing to the following
code:
```
{{{code}}}
```

by replacing the PLACEHOLDER with a buggy code fragment
that has different behavior than the original code fragment,
which was:
```
{{{orig}}}
```
Please consider changes such as using different operators,
changing constants, referring to different variables, object
properties, functions, or methods.

Provide three answers as fenced code blocks containing a
single line of code, using the following template:

Option 1: The PLACEHOLDER can be replaced with:
```
<code fragment>
```

Option 2: The PLACEHOLDER can be replaced with:
```
<code fragment>
```

Option 3: The PLACEHOLDER can be replaced with:
```
<code fragment>
```

Please conclude your response with "DONE.")TMPL";

inline constexpr std::string_view kTemplateNoInstructions =
    R"TMPL(Your task is to apply mutation testing to the following
code:
```
{{{code}}}
```

by replacing the PLACEHOLDER with a buggy code fragment
that has different behavior than the original code fragment,
which was:
```
{{{orig}}}
```

Provide three answers as fenced code blocks containing a
single line of code, using the following template:

Option 1: The PLACEHOLDER can be replaced with:
```
<code fragment>
```
This would result in different behavior because
<brief explanation>.

Option 2: The PLACEHOLDER can be replaced with:
```
<code fragment>
```
This would result in different behavior because
<brief explanation>.

Option 3: The PLACEHOLDER can be replaced with:
```
<code fragment>
```
This would result in different behavior because
<brief explanation>.

Please conclude your response with "DONE.")TMPL";

inline constexpr std::string_view kTemplateBasic =
    R"TMPL(Your task is to apply mutation testing to the following
code:
```
{{{code}}}
```

by replacing the PLACEHOLDER with a buggy code fragment
that has different behavior than the original code fragment,
which was:
```
{{{orig}}}
```)TMPL";

inline constexpr std::string_view kSystemExpert =
    "You are an expert in mutation testing. Your job is to make small changes "
    "to a project's code in order to find weaknesses in its test suite. If "
    "none of the tests fail after you make a change, that indicates that the "
    "tests may not be as effective as the developers might have hoped, and "
    "provide them with a starting point for improving their test suite.";

inline constexpr std::string_view kSystemGeneric =
    "You are a programming assistant. You are expected to be concise and "
    "precise and avoid any unnecessary examples, tests, and verbosity.";

inline std::string replace_all(std::string text, std::string_view hole, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(hole, pos)) != std::string::npos) {
        text.replace(pos, hole.size(), value);
        pos += value.size();
    }
    return text;
}

} // namespace detail

inline constexpr std::string_view kCodeHole = "{{{code}}}";
inline constexpr std::string_view kOrigHole = "{{{orig}}}";

inline void check_template(const PromptTemplate& tmpl) {
    if (tmpl.body.find(kCodeHole) == std::string::npos)
        throw RenderError("template '" + tmpl.name + "' is missing the " + std::string(kCodeHole) +
                          " hole");
    if (tmpl.body.find(kOrigHole) == std::string::npos)
        throw RenderError("template '" + tmpl.name + "' is missing the " + std::string(kOrigHole) +
                          " hole");
}

inline const std::vector<PromptTemplate>& template_catalog() {
    static const std::vector<PromptTemplate> catalog = {
        {"full", std::string(detail::kTemplateFull)},
        {"onemutation", std::string(detail::kTemplateOneMutation)},
        {"noexplanation", std::string(detail::kTemplateNoExplanation)},
        {"noinstructions", std::string(detail::kTemplateNoInstructions)},
        {"basic", std::string(detail::kTemplateBasic)},
    };
    return catalog;
}

inline const std::vector<SystemPrompt>& system_prompt_catalog() {
    static const std::vector<SystemPrompt> catalog = {
        {"expert", std::string(detail::kSystemExpert)},
        {"generic", std::string(detail::kSystemGeneric)},
    };
    return catalog;
}

inline const PromptTemplate& find_template(std::string_view name) {
    for (const auto& t : template_catalog())
        if (t.name == name) return t;
    throw Error("unknown prompt template: " + std::string(name));
}

inline const SystemPrompt& find_system_prompt(std::string_view name) {
    for (const auto& s : system_prompt_catalog())
        if (s.name == name) return s;
    throw Error("unknown system prompt: " + std::string(name));
}

inline PromptTemplate load_template_file(const std::string& path, std::string name) {
    PromptTemplate tmpl{std::move(name), read_text_file(path)};
    check_template(tmpl);
    return tmpl;
}

inline Prompt render_prompt(const SourceFile& file, const PlaceholderSite& site,
                            const PromptTemplate& tmpl, const SystemPrompt& system,
                            std::size_t window_lines) {
    check_template(tmpl);
    std::string code = render_with_placeholder(file, site, window_lines);
    if (code.empty()) throw RenderError("empty code window for site " + site.id);
    if (site.original.empty()) throw RenderError("empty original fragment for site " + site.id);

    Prompt prompt;
    prompt.site_id = site.id;
    prompt.template_name = tmpl.name;
    prompt.system_name = system.name;
    prompt.system_text = system.text;
    prompt.user_text = detail::replace_all(tmpl.body, kCodeHole, code);
    prompt.user_text = detail::replace_all(std::move(prompt.user_text), kOrigHole, site.original);
    return prompt;
}

} // namespace mutforge
