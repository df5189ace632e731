#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mutforge/analysis.hpp"

using namespace mutforge;

namespace {

// Textbook recursion, no DP; only safe for short strings.
std::size_t lev_oracle(std::string_view a, std::string_view b) {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    std::size_t skip_a = lev_oracle(a.substr(1), b) + 1;
    std::size_t skip_b = lev_oracle(a, b.substr(1)) + 1;
    std::size_t subst = lev_oracle(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1);
    return std::min({skip_a, skip_b, subst});
}

RunRecord make_run(const std::string& id,
                   std::map<std::string, std::set<std::string>> keys) {
    RunRecord run;
    run.run_id = id;
    run.fingerprint = {"test-model", 0.0, "full"};
    run.keys_by_project = std::move(keys);
    return run;
}

Mutant flag_probe(const std::string& original, const std::string& replacement) {
    Mutant m;
    m.id = "probe-" + original + "->" + replacement;
    m.file = "x.js";
    m.original = original;
    m.replacement = replacement;
    return m;
}

std::vector<EquivalencePattern> patterns_for(const std::string& original,
                                             const std::string& replacement) {
    std::vector<EquivalencePattern> out;
    for (const auto& flag : flag_equivalents({flag_probe(original, replacement)}))
        out.push_back(flag.pattern);
    return out;
}

} // namespace

TEST_CASE("round2 rounds half away from zero at two decimals") {
    CHECK(round2(96.1538) == Catch::Approx(96.15).margin(1e-12));
    CHECK(round2(60.5505) == Catch::Approx(60.55).margin(1e-12));
    CHECK(round2(0.005) == Catch::Approx(0.01).margin(1e-12));
    CHECK(round2(100.0) == 100.0);
    CHECK(round2(0.0) == 0.0);
}

TEST_CASE("levenshtein matches known distances") {
    CHECK(levenshtein("", "") == 0);
    CHECK(levenshtein("abc", "") == 3);
    CHECK(levenshtein("", "abc") == 3);
    CHECK(levenshtein("abc", "abc") == 0);
    CHECK(levenshtein("a", "b") == 1);
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("flaw", "lawn") == 2);
    CHECK(levenshtein("intention", "execution") == 5);
    CHECK(levenshtein("i < n", "i <= n") == 1);
    CHECK(levenshtein("a === b", "a !== b") == 1);
}

TEST_CASE("levenshtein agrees with a recursive oracle on random short strings") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> len(0, 7);
    std::uniform_int_distribution<int> chr(0, 3);
    auto word = [&] {
        std::string s;
        int n = len(rng);
        for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + chr(rng)));
        return s;
    };
    for (int i = 0; i < 200; ++i) {
        std::string a = word();
        std::string b = word();
        std::size_t got = levenshtein(a, b);
        CHECK(got == lev_oracle(a, b));
        CHECK(got == levenshtein(b, a));
        if (a == b) CHECK(got == 0);
        CHECK(got <= std::max(a.size(), b.size()));
        std::size_t diff =
            a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
        CHECK(got >= diff);
    }
}

TEST_CASE("variability needs two runs with one configuration") {
    CHECK_THROWS_AS(variability({}), Error);
    CHECK_THROWS_AS(variability({make_run("only", {{"p", {"a"}}})}), Error);

    RunRecord one = make_run("one", {{"p", {"a"}}});
    RunRecord two = make_run("two", {{"p", {"a"}}});
    two.fingerprint.temperature = 0.5;
    CHECK_THROWS_AS(variability({one, two}), ConfigMismatchError);

    two.fingerprint = one.fingerprint;
    two.fingerprint.template_name = "basic";
    CHECK_THROWS_AS(variability({one, two}), ConfigMismatchError);
}

TEST_CASE("variability over identical runs reports full agreement") {
    RunRecord a = make_run("a", {{"p", {"k1", "k2", "k3"}}});
    RunRecord b = make_run("b", {{"p", {"k1", "k2", "k3"}}});
    VariabilityReport report = variability({a, b});
    REQUIRE(report.count("p") == 1);
    const VariabilityRow& row = report.at("p");
    CHECK(row.min_count == 3);
    CHECK(row.max_count == 3);
    CHECK(row.distinct_count == 3);
    CHECK(row.common_count == 3);
    CHECK(row.common_pct == 100.0);
}

TEST_CASE("variability over disjoint runs reports zero agreement") {
    RunRecord a = make_run("a", {{"p", {"k1", "k2"}}});
    RunRecord b = make_run("b", {{"p", {"k3", "k4"}}});
    VariabilityReport report = variability({a, b});
    const VariabilityRow& row = report.at("p");
    CHECK(row.min_count == 2);
    CHECK(row.max_count == 2);
    CHECK(row.distinct_count == 4);
    CHECK(row.common_count == 0);
    CHECK(row.common_pct == 0.0);
}

TEST_CASE("variability treats a project missing from a run as empty") {
    RunRecord a = make_run("a", {{"p", {"k1"}}, {"q", {"x"}}});
    RunRecord b = make_run("b", {{"p", {"k1"}}});
    VariabilityReport report = variability({a, b});
    const VariabilityRow& q = report.at("q");
    CHECK(q.min_count == 0);
    CHECK(q.max_count == 1);
    CHECK(q.distinct_count == 1);
    CHECK(q.common_count == 0);
    CHECK(q.common_pct == 0.0);
}

TEST_CASE("variability on a nested three-run spread") {
    auto keys = [](int n) {
        std::set<std::string> out;
        for (int i = 0; i < n; ++i) out.insert("k" + std::to_string(i));
        return out;
    };
    RunRecord a = make_run("a", {{"plural", keys(200)}});
    RunRecord b = make_run("b", {{"plural", keys(208)}});
    RunRecord c = make_run("c", {{"plural", keys(204)}});
    VariabilityReport report = variability({a, b, c});
    const VariabilityRow& row = report.at("plural");
    CHECK(row.min_count == 200);
    CHECK(row.max_count == 208);
    CHECK(row.distinct_count == 208);
    CHECK(row.common_count == 200);
    CHECK(row.common_pct == Catch::Approx(96.15).margin(1e-9));
}

TEST_CASE("variability agrees with a brute-force recomputation on random runs") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> nr_keys(0, 12);
    std::uniform_int_distribution<int> key_id(0, 19);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RunRecord> runs;
        int nr_runs = 2 + trial % 4;
        for (int r = 0; r < nr_runs; ++r) {
            std::set<std::string> keys;
            int n = nr_keys(rng);
            for (int i = 0; i < n; ++i) keys.insert("k" + std::to_string(key_id(rng)));
            runs.push_back(make_run("r" + std::to_string(r), {{"p", keys}}));
        }
        VariabilityReport report = variability(runs);
        const VariabilityRow& row = report.at("p");

        std::size_t min_c = SIZE_MAX, max_c = 0;
        std::set<std::string> unite;
        for (const auto& run : runs) {
            const auto& keys = run.keys_by_project.at("p");
            min_c = std::min(min_c, keys.size());
            max_c = std::max(max_c, keys.size());
            unite.insert(keys.begin(), keys.end());
        }
        std::size_t common = 0;
        for (const auto& k : unite) {
            bool everywhere = true;
            for (const auto& run : runs)
                if (!run.keys_by_project.at("p").count(k)) {
                    everywhere = false;
                    break;
                }
            if (everywhere) ++common;
        }
        CHECK(row.min_count == min_c);
        CHECK(row.max_count == max_c);
        CHECK(row.distinct_count == unite.size());
        CHECK(row.common_count == common);
        double expect_pct = unite.empty() ? 0.0
                                          : round2(100.0 * static_cast<double>(common) /
                                                   static_cast<double>(unite.size()));
        CHECK(row.common_pct == Catch::Approx(expect_pct).margin(1e-9));
    }
}

TEST_CASE("similarity_stats averages edit distance per project and template") {
    auto mutant = [](const std::string& tmpl, const std::string& orig,
                     const std::string& repl) {
        Mutant m;
        m.original = orig;
        m.replacement = repl;
        m.provenance.template_name = tmpl;
        return m;
    };
    std::vector<std::pair<std::string, Mutant>> input = {
        {"alpha", mutant("full", "abc", "abd")},  // distance 1
        {"alpha", mutant("full", "a", "abc")},    // distance 2
        {"alpha", mutant("basic", "x", "x")},     // distance 0
        {"beta", mutant("full", "i < n", "i <= n")}, // distance 1
    };
    SimilarityStats stats = similarity_stats(input);
    REQUIRE(stats.size() == 3);
    CHECK(stats.at({"alpha", "full"}) == Catch::Approx(1.5).margin(1e-9));
    CHECK(stats.at({"alpha", "basic"}) == 0.0);
    CHECK(stats.at({"beta", "full"}) == Catch::Approx(1.0).margin(1e-9));

    CHECK(similarity_stats({}).empty());
}

TEST_CASE("null and undefined check rewrites are flagged") {
    auto flagged = patterns_for("x != null", "!x");
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == EquivalencePattern::NullCheckRewrite);

    CHECK(patterns_for("!x", "x == null").size() == 1);
    CHECK(patterns_for("value !== undefined", "!value").size() == 1);
    CHECK(patterns_for("undefined === x", "!x").size() == 1);
    CHECK(patterns_for("x != null", "x === undefined").size() == 1);

    SECTION("different subject expressions do not match") {
        CHECK(patterns_for("x != null", "!y").empty());
    }
    SECTION("two bang forms have no comparison side") {
        CHECK(patterns_for("!x", "!(x)").empty());
    }
    SECTION("comparisons against other literals do not match") {
        CHECK(patterns_for("x != 0", "!x").empty());
    }
}

TEST_CASE("substring family swaps are flagged") {
    auto flagged = patterns_for("word.slice(1)", "word.substring(1)");
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == EquivalencePattern::SubstringFamilySwap);

    CHECK(patterns_for("s.substring(a, b)", "s.substr(a, b)").size() == 1);

    SECTION("a bare callee fragment still matches") {
        auto bare = patterns_for("word.slice", "word.substr");
        REQUIRE(bare.size() == 1);
        CHECK(bare[0] == EquivalencePattern::SubstringFamilySwap);
    }
    SECTION("changed arguments do not match") {
        CHECK(patterns_for("s.slice(1)", "s.substring(2)").empty());
    }
    SECTION("changed receiver does not match") {
        CHECK(patterns_for("s.slice(1)", "t.substring(1)").empty());
    }
    SECTION("non-family methods do not match") {
        CHECK(patterns_for("s.trim()", "s.substring()").empty());
    }
    SECTION("same method is not a swap") {
        CHECK(patterns_for("s.slice(1)", "s.slice(1)").empty());
    }
}

TEST_CASE("added regex modifiers are flagged") {
    auto flagged = patterns_for("s.match(/abc/)", "s.match(/abc/g)");
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == EquivalencePattern::RegexFlagAdded);

    CHECK(patterns_for("/a+b/i", "/a+b/gi").size() == 1);

    SECTION("a changed body does not match") {
        CHECK(patterns_for("s.match(/abc/)", "s.match(/abd/g)").empty());
    }
    SECTION("removed modifiers do not match") {
        CHECK(patterns_for("/a/gi", "/a/g").empty());
    }
    SECTION("same modifiers do not match") {
        CHECK(patterns_for("/a/g", "/a/g").empty());
    }
    SECTION("replaced modifiers do not match") {
        CHECK(patterns_for("/a/i", "/a/g").empty());
    }
}

TEST_CASE("inserted no-op slice calls are flagged") {
    auto flagged = patterns_for("arr", "arr.slice()");
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == EquivalencePattern::NoopSliceCall);

    CHECK(patterns_for("items.concat(x)", "items.slice().concat(x)").size() == 1);

    SECTION("slice with arguments is not a no-op") {
        CHECK(patterns_for("arr", "arr.slice(0)").empty());
    }
    SECTION("other surrounding edits do not match") {
        CHECK(patterns_for("arr", "brr.slice()").empty());
    }
}

TEST_CASE("extra trailing call arguments are flagged") {
    auto flagged = patterns_for("percent(part, whole)", "percent(part, whole, 0)");
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0] == EquivalencePattern::ExtraCallArguments);

    SECTION("a zero-argument call gaining an argument matches") {
        auto zero = patterns_for("f()", "f(1)");
        REQUIRE(zero.size() == 1);
        CHECK(zero[0] == EquivalencePattern::ExtraCallArguments);
    }
    SECTION("a changed callee does not match") {
        CHECK(patterns_for("f(a)", "g(a, 0)").empty());
    }
    SECTION("changed existing arguments do not match") {
        CHECK(patterns_for("f(a)", "f(b, 0)").empty());
    }
    SECTION("an extended expression is not an extra argument") {
        CHECK(patterns_for("f(a)", "f(a + 1)").empty());
    }
    SECTION("fewer arguments do not match") {
        CHECK(patterns_for("f(a, b)", "f(a)").empty());
    }
}

TEST_CASE("unlexable fragments are skipped without flags") {
    CHECK(patterns_for("'oops", "!x").empty());
    CHECK(patterns_for("x != null", "'oops").empty());
}

TEST_CASE("flag_equivalents carries the mutant id and a rationale") {
    Mutant m = flag_probe("x != null", "!x");
    auto flags = flag_equivalents({m});
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].mutant_id == m.id);
    CHECK_FALSE(flags[0].rationale.empty());
    CHECK(equivalence_pattern_name(flags[0].pattern) == "NullCheckRewrite");
}

TEST_CASE("equivalence pattern names are stable") {
    CHECK(equivalence_pattern_name(EquivalencePattern::NullCheckRewrite) == "NullCheckRewrite");
    CHECK(equivalence_pattern_name(EquivalencePattern::SubstringFamilySwap) ==
          "SubstringFamilySwap");
    CHECK(equivalence_pattern_name(EquivalencePattern::RegexFlagAdded) == "RegexFlagAdded");
    CHECK(equivalence_pattern_name(EquivalencePattern::NoopSliceCall) == "NoopSliceCall");
    CHECK(equivalence_pattern_name(EquivalencePattern::ExtraCallArguments) ==
          "ExtraCallArguments");
}
