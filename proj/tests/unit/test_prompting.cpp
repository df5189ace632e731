#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <string>

#include "mutforge/language.hpp"
#include "mutforge/prompting.hpp"
#include "mutforge/sites.hpp"

using namespace mutforge;

namespace {

PlaceholderSite first_site(const SourceFile& sf) {
    auto sites = enumerate_sites(sf, *find_profile("cscript"));
    REQUIRE_FALSE(sites.empty());
    return sites.front();
}

} // namespace

TEST_CASE("template catalog holds the five layouts") {
    auto catalog = template_catalog();
    REQUIRE(catalog.size() == 5);
    CHECK(catalog[0].name == "full");
    CHECK(catalog[1].name == "onemutation");
    CHECK(catalog[2].name == "noexplanation");
    CHECK(catalog[3].name == "noinstructions");
    CHECK(catalog[4].name == "basic");
    for (const auto& t : catalog) {
        CHECK(t.body.find("{{{code}}}") != std::string::npos);
        CHECK(t.body.find("{{{orig}}}") != std::string::npos);
    }
}

TEST_CASE("system prompt catalog holds expert and generic") {
    auto prompts = system_prompt_catalog();
    REQUIRE(prompts.size() == 2);
    CHECK(prompts[0].name == "expert");
    CHECK(prompts[0].text.find("You are an expert in mutation testing.") !=
          std::string::npos);
    CHECK(prompts[0].text.find("weaknesses in its test suite") != std::string::npos);
    CHECK(prompts[1].name == "generic");
    CHECK(find_system_prompt("expert").name == "expert");
    CHECK_THROWS_AS(find_system_prompt("nope"), Error);
}

TEST_CASE("full template asks for three fenced options and DONE") {
    const std::string& body = find_template("full").body;
    CHECK(body.find("Option 1: The PLACEHOLDER can be replaced with:") != std::string::npos);
    CHECK(body.find("Option 2: The PLACEHOLDER can be replaced with:") != std::string::npos);
    CHECK(body.find("Option 3: The PLACEHOLDER can be replaced with:") != std::string::npos);
    CHECK(body.find("Provide three answers as fenced code blocks") != std::string::npos);
    CHECK(body.find("This would result in different behavior because") != std::string::npos);
    CHECK(body.find("Please consider changes such as using different operators") !=
          std::string::npos);
    CHECK(body.find("\"DONE.\"") != std::string::npos);
}

TEST_CASE("template variants trim specific sections") {
    const std::string& one = find_template("onemutation").body;
    CHECK(one.find("Provide one answer as a fenced code block") != std::string::npos);
    CHECK(one.find("Option 2") == std::string::npos);

    const std::string& noexp = find_template("noexplanation").body;
    CHECK(noexp.find("Option 3") != std::string::npos);
    CHECK(noexp.find("This would result in different behavior because") == std::string::npos);

    const std::string& noinstr = find_template("noinstructions").body;
    CHECK(noinstr.find("Please consider changes") == std::string::npos);
    CHECK(noinstr.find("Option 3") != std::string::npos);

    const std::string& basic = find_template("basic").body;
    CHECK(basic.find("Option 1") == std::string::npos);
    CHECK(basic.find("Please consider changes") == std::string::npos);
    CHECK(basic.find("by replacing the PLACEHOLDER") != std::string::npos);

    CHECK_THROWS_AS(find_template("unknown"), Error);
}

TEST_CASE("rendering fills both holes and leaves no markers behind") {
    SourceFile sf("t.js", "if (a < b) { f(); }", "cscript");
    PlaceholderSite site = first_site(sf);
    Prompt prompt = render_prompt(sf, site, find_template("full"),
                                  find_system_prompt("expert"), 200);
    CHECK(prompt.site_id == site.id);
    CHECK(prompt.template_name == "full");
    CHECK(prompt.system_name == "expert");
    CHECK(prompt.user_text.find("if (<PLACEHOLDER>) { f(); }") != std::string::npos);
    CHECK(prompt.user_text.find("a < b") != std::string::npos); // original shown separately
    CHECK(prompt.user_text.find("{{{") == std::string::npos);
    CHECK(prompt.user_text.find("}}}") == std::string::npos);
}

TEST_CASE("rendering is deterministic for the same inputs") {
    SourceFile sf("t.js", "while (x > 0) { x--; }", "cscript");
    PlaceholderSite site = first_site(sf);
    Prompt a = render_prompt(sf, site, find_template("basic"), find_system_prompt("generic"), 40);
    Prompt b = render_prompt(sf, site, find_template("basic"), find_system_prompt("generic"), 40);
    CHECK(a.user_text == b.user_text);
    CHECK(a.system_text == b.system_text);
}

TEST_CASE("templates without both holes are rejected") {
    PromptTemplate missing_orig{"bad", "only {{{code}}} here"};
    CHECK_THROWS_AS(check_template(missing_orig), RenderError);
    PromptTemplate missing_code{"bad", "only {{{orig}}} here"};
    CHECK_THROWS_AS(check_template(missing_code), RenderError);

    SourceFile sf("t.js", "if (a) { f(); }", "cscript");
    PlaceholderSite site = first_site(sf);
    CHECK_THROWS_AS(
        render_prompt(sf, site, missing_orig, find_system_prompt("expert"), 200),
        RenderError);
}

TEST_CASE("custom template files load and render") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "mutforge-test-template.txt";
    write_text_file(path, "Replace in:\n{{{code}}}\nInstead of: {{{orig}}}\n");
    PromptTemplate custom = load_template_file(path.string(), "custom");
    CHECK(custom.name == "custom");

    SourceFile sf("t.js", "if (a < b) { f(); }", "cscript");
    Prompt prompt = render_prompt(sf, first_site(sf), custom, find_system_prompt("generic"), 200);
    CHECK(prompt.user_text == "Replace in:\nif (<PLACEHOLDER>) { f(); }\nInstead of: a < b\n");
    fs::remove(path);
}

TEST_CASE("rendering rejects degenerate sites") {
    SourceFile sf("t.js", "if (a) { f(); }", "cscript");
    PlaceholderSite site = first_site(sf);
    site.original.clear();
    CHECK_THROWS_AS(
        render_prompt(sf, site, find_template("full"), find_system_prompt("expert"), 200),
        RenderError);
}
