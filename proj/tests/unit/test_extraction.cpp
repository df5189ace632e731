#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "mutforge/extraction.hpp"

using namespace mutforge;

namespace {

const LanguageProfile& profile() { return *find_profile("cscript"); }

struct SiteFixture {
    SourceFile file;
    std::vector<PlaceholderSite> sites;

    explicit SiteFixture(std::string text)
        : file("t.js", std::move(text), "cscript"), sites(enumerate_sites(file, profile())) {}

    const PlaceholderSite& of(SiteKind kind) const {
        for (const auto& s : sites)
            if (s.kind == kind) return s;
        FAIL("no site of requested kind");
        return sites.front();
    }
};

Prompt prompt_stub(const PlaceholderSite& site, int id = 7) {
    Prompt p;
    p.id = id;
    p.site_id = site.id;
    p.template_name = "full";
    return p;
}

} // namespace

TEST_CASE("fenced blocks are pulled in order with explanations") {
    SiteFixture fx("if (a < b) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    std::string completion =
        "Option 1: The PLACEHOLDER can be replaced with:\n"
        "```\n"
        "a > b\n"
        "```\n"
        "This would result in different behavior because the comparison flips.\n"
        "\n"
        "Option 2: The PLACEHOLDER can be replaced with:\n"
        "```js\n"
        "a <= b\n"
        "```\n"
        "Boundary included.\n"
        "DONE.";
    auto candidates = extract_candidates(completion, site, prompt_stub(site));
    REQUIRE(candidates.size() == 2);
    CHECK(candidates[0].replacement == "a > b");
    CHECK(candidates[0].option_index == 1);
    CHECK(candidates[0].prompt_id == 7);
    CHECK(candidates[0].site_id == site.id);
    // The explanation spans everything up to the next fence, including the
    // next option's lead-in prose.
    CHECK(candidates[0].explanation ==
          "This would result in different behavior because the comparison flips.\n"
          "\n"
          "Option 2: The PLACEHOLDER can be replaced with:");
    CHECK(candidates[1].replacement == "a <= b"); // info string "js" ignored
    CHECK(candidates[1].option_index == 2);
    CHECK(candidates[1].explanation == "Boundary included.\nDONE.");
}

TEST_CASE("fence lines may be indented and blocks are blank-trimmed") {
    SiteFixture fx("if (a) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    std::string completion = "  ```\n"
                             "\n"
                             "  !a\n"
                             "\n"
                             "  ```\n";
    auto candidates = extract_candidates(completion, site, prompt_stub(site));
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].replacement == "  !a"); // inner indentation survives, blank edges do not
}

TEST_CASE("empty fenced blocks consume an option index but yield nothing") {
    SiteFixture fx("if (a) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    std::string completion = "```\n"
                             "\n"
                             "```\n"
                             "text between\n"
                             "```\n"
                             "!a\n"
                             "```\n";
    auto candidates = extract_candidates(completion, site, prompt_stub(site));
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].option_index == 2);
    CHECK(candidates[0].replacement == "!a");
}

TEST_CASE("an unterminated fence still yields its body without an explanation") {
    SiteFixture fx("if (a) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    auto candidates = extract_candidates("```\n!a", site, prompt_stub(site));
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].replacement == "!a");
    CHECK(candidates[0].explanation.empty());
}

TEST_CASE("completions without fences yield no candidates") {
    SiteFixture fx("if (a) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    CHECK(extract_candidates("No suitable mutation was found. DONE.", site, prompt_stub(site))
              .empty());
    CHECK(extract_candidates("", site, prompt_stub(site)).empty());
}

TEST_CASE("carriage returns are stripped from block lines") {
    SiteFixture fx("if (a) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    auto candidates = extract_candidates("```\r\n!a\r\n```\r\n", site, prompt_stub(site));
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].replacement == "!a");
}

TEST_CASE("filter verdicts follow identical, duplicate, invalid precedence") {
    SiteFixture fx("if (a < b) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    std::set<std::string> seen;

    CandidateMutant c;
    c.site_id = site.id;
    c.replacement = "  a < b "; // trimmed equality with the original
    CHECK(filter_candidate(c, site, fx.file, profile(), seen) == FilterVerdict::Identical);

    c.replacement = "a > b";
    CHECK(filter_candidate(c, site, fx.file, profile(), seen) == FilterVerdict::Accepted);
    CHECK(filter_candidate(c, site, fx.file, profile(), seen) == FilterVerdict::Duplicate);

    c.replacement = "if (";
    CHECK(filter_candidate(c, site, fx.file, profile(), seen) == FilterVerdict::Invalid);

    // an invalid fragment is not remembered, so a later valid one still lands
    c.replacement = "a >= b";
    CHECK(filter_candidate(c, site, fx.file, profile(), seen) == FilterVerdict::Accepted);
}

TEST_CASE("identical wins over invalid for an unparseable original echo") {
    // the original text is always valid, so this exercises order of checks
    SiteFixture fx("while (x) { f(); }");
    const auto& site = fx.of(SiteKind::WhileCondition);
    std::set<std::string> seen;
    CandidateMutant c;
    c.site_id = site.id;
    c.replacement = "x";
    CHECK(filter_candidate(c, site, fx.file, profile(), seen) == FilterVerdict::Identical);
    CHECK(seen.empty());
}

TEST_CASE("duplicates are detected through span expansion") {
    SiteFixture fx("f(x);");
    const auto& arg = fx.of(SiteKind::CallArgument);
    const auto& all_args = fx.of(SiteKind::CallAllArguments);
    std::set<std::string> seen;

    CandidateMutant c;
    c.site_id = arg.id;
    c.replacement = "y";
    CHECK(filter_candidate(c, arg, fx.file, profile(), seen) == FilterVerdict::Accepted);

    // same fragment at the whole-argument-list site lands on the same node
    c.site_id = all_args.id;
    CHECK(filter_candidate(c, all_args, fx.file, profile(), seen) == FilterVerdict::Duplicate);
}

TEST_CASE("expanded replacements splice the fragment into the enclosing node") {
    SiteFixture fx("for (let i = 0; i < x; i++) { a.m(p, q); }");
    const auto& header = fx.of(SiteKind::ForHeader);
    auto [span, replacement] = expanded_replacement(fx.file, header, "let i = 1; i < x; i++");
    CHECK(fx.file.slice(span) == fx.file.text);
    CHECK(replacement == "for (let i = 1; i < x; i++) { a.m(p, q); }");

    const auto& all_args = fx.of(SiteKind::CallAllArguments);
    auto [call_span, call_repl] = expanded_replacement(fx.file, all_args, "q, p");
    CHECK(fx.file.slice(call_span) == "a.m(p, q)");
    CHECK(call_repl == "a.m(q, p)");

    const auto& test = fx.of(SiteKind::ForTest);
    auto [test_span, test_repl] = expanded_replacement(fx.file, test, "i <= x");
    CHECK(test_span == test.span);
    CHECK(test_repl == "i <= x");
}

TEST_CASE("mutant keys separate files, spans, and replacements") {
    SyntaxSpan span{4, 9};
    SyntaxSpan other{4, 10};
    std::string base = mutant_key("a.js", span, "x + 1");
    CHECK(base == mutant_key("a.js", span, "x + 1"));
    CHECK(base != mutant_key("b.js", span, "x + 1"));
    CHECK(base != mutant_key("a.js", other, "x + 1"));
    CHECK(base != mutant_key("a.js", span, "x + 2"));
    CHECK(base.size() == 64);
}

TEST_CASE("build_mutant records the expanded span and provenance") {
    SiteFixture fx("a.m(p, q);");
    const auto& all_args = fx.of(SiteKind::CallAllArguments);

    CandidateMutant c;
    c.site_id = all_args.id;
    c.prompt_id = 12;
    c.option_index = 3;
    c.replacement = "q";

    Provenance prov{12, 3, "full", "some-model", 0.5};
    Mutant m = build_mutant(c, all_args, fx.file, prov);
    CHECK(m.file == "t.js");
    CHECK(m.original == "a.m(p, q)");
    CHECK(m.replacement == "a.m(q)");
    CHECK(m.kind == SiteKind::CallAllArguments);
    CHECK(m.id == mutant_key("t.js", m.span, "a.m(q)"));
    CHECK(m.provenance.prompt_id == 12);
    CHECK(m.provenance.option_index == 3);
    CHECK(m.provenance.template_name == "full");
    CHECK(m.provenance.model == "some-model");
    CHECK(m.provenance.temperature == 0.5);
}

TEST_CASE("mutant json round trip preserves every field") {
    SiteFixture fx("while (i < n) {\n  f(i);\n}\n");
    const auto& site = fx.of(SiteKind::WhileCondition);

    CandidateMutant c;
    c.site_id = site.id;
    c.prompt_id = 2;
    c.option_index = 1;
    c.replacement = "i <= n";
    Mutant m = build_mutant(c, site, fx.file, {2, 1, "basic", "mock", 0.0});

    nlohmann::json j = mutant_to_json(m);
    CHECK(j["id"] == m.id);
    CHECK(j["file"] == "t.js");
    CHECK(j["range"]["start"]["line"] == 1);
    CHECK(j["range"]["start"]["col"] == 8);
    CHECK(j["range"]["end"]["line"] == 1);
    CHECK(j["range"]["end"]["col"] == 13);
    CHECK(j["original"] == "i < n");
    CHECK(j["replacement"] == "i <= n");
    CHECK(j["kind"] == "WhileCondition");
    CHECK(j["provenance"]["prompt_id"] == 2);
    CHECK(j["provenance"]["option_index"] == 1);
    CHECK(j["provenance"]["template"] == "basic");
    CHECK(j["provenance"]["model"] == "mock");
    CHECK(j["provenance"]["temperature"] == 0.0);

    LineIndex lines(fx.file.text);
    Mutant back = mutant_from_json(j, &lines);
    CHECK(back.id == m.id);
    CHECK(back.span.start_offset == m.span.start_offset);
    CHECK(back.span.end_offset == m.span.end_offset);
    CHECK(back.original == m.original);
    CHECK(back.replacement == m.replacement);
    CHECK(back.kind == m.kind);
    CHECK(back.provenance.template_name == "basic");

    Mutant lineless = mutant_from_json(j);
    CHECK(lineless.span.start_line == 1);
    CHECK(lineless.original == "i < n");
}

TEST_CASE("ledger bookkeeping matches a published run's arithmetic") {
    // one large observed run: candidates split exactly into verdict buckets
    ExtractionLedger complex_js;
    complex_js.candidates = 1451;
    complex_js.invalid = 194;
    complex_js.identical = 13;
    complex_js.duplicate = 45;
    complex_js.mutants = 1199;
    CHECK(complex_js.conserved());
    CHECK(complex_js.candidates - complex_js.invalid - complex_js.identical -
              complex_js.duplicate ==
          complex_js.mutants);

    ExtractionLedger run_total;
    run_total.candidates = 9967;
    run_total.invalid = 2894;
    run_total.identical = 156;
    run_total.duplicate = 205;
    run_total.mutants = 6712;
    CHECK(run_total.conserved());

    ExtractionLedger broken = run_total;
    broken.mutants += 1;
    CHECK_FALSE(broken.conserved());
}

TEST_CASE("ledgers accumulate per verdict") {
    SiteFixture fx("if (a < b) { f(); }");
    const auto& site = fx.of(SiteKind::IfCondition);
    std::set<std::string> seen;
    ExtractionLedger ledger;

    for (const char* frag : {"a > b", "a < b", "a > b", "if (", "a >= b"}) {
        ledger.candidates += 1;
        CandidateMutant c;
        c.site_id = site.id;
        c.replacement = frag;
        switch (filter_candidate(c, site, fx.file, profile(), seen)) {
        case FilterVerdict::Accepted: ledger.mutants += 1; break;
        case FilterVerdict::Invalid: ledger.invalid += 1; break;
        case FilterVerdict::Identical: ledger.identical += 1; break;
        case FilterVerdict::Duplicate: ledger.duplicate += 1; break;
        }
    }
    CHECK(ledger.candidates == 5);
    CHECK(ledger.mutants == 2);
    CHECK(ledger.invalid == 1);
    CHECK(ledger.identical == 1);
    CHECK(ledger.duplicate == 1);
    CHECK(ledger.conserved());

    ExtractionLedger total;
    total += ledger;
    total += ledger;
    CHECK(total.candidates == 10);
    CHECK(total.mutants == 4);
    CHECK(total.conserved());
}
