#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mutforge/http_backend.hpp"
#include "mutforge/pipeline.hpp"

namespace {

void log_line(const std::string& line) { std::cerr << line << "\n"; }

int run_generate(mutforge::RunConfig& config) {
    std::unique_ptr<mutforge::CompletionBackend> backend;
    if (!config.mock_fixtures.empty()) {
        if (config.model.empty()) config.model = "mock";
        backend = std::make_unique<mutforge::MockBackend>(
            mutforge::MockBackend::from_file(config.mock_fixtures));
    } else {
        if (config.endpoint_url.empty())
            throw mutforge::Error("live runs need --endpoint (or use --mock-fixtures)");
        if (config.model.empty()) throw mutforge::Error("live runs need --model");
        if (const char* key = std::getenv("MUTFORGE_API_KEY")) config.api_key = key;
        mutforge::EndpointConfig endpoint;
        endpoint.url = config.endpoint_url;
        endpoint.api_key = config.api_key;
        backend = std::make_unique<mutforge::HttpBackend>(endpoint);
    }
    mutforge::SystemClock clock;
    auto artifacts = mutforge::cmd_generate(config, *backend, clock, log_line);
    std::cout << mutforge::render_summary(artifacts.summary, mutforge::SummaryFormat::Text);
    std::cerr << "archive written to " << config.out_dir << "\n";
    return 0;
}

int run_execute(mutforge::RunConfig& config) {
    auto artifacts = mutforge::cmd_run(config, log_line);
    std::cout << mutforge::render_summary(artifacts.summary, mutforge::SummaryFormat::Text);
    if (!artifacts.manifest.errored_mutants.empty())
        std::cerr << artifacts.manifest.errored_mutants.size()
                  << " mutant(s) errored; see manifest.json\n";
    if (config.fail_under) {
        double score =
            artifacts.summary.rows.empty() ? 0.0 : artifacts.summary.rows.front().mutation_score;
        if (score < *config.fail_under) {
            std::cerr << "mutation score " << mutforge::format_score(score) << " is below "
                      << mutforge::format_score(*config.fail_under) << "\n";
            return 2;
        }
    }
    return 0;
}

int run_analyze(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    auto artifacts = mutforge::cmd_analyze(run_dirs, out_dir);
    if (!artifacts.note.empty()) std::cerr << artifacts.note << "\n";
    std::cerr << "analysis written to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LLM-driven mutation testing: prompt, mutate, run, report"};
    app.require_subcommand(1);

    mutforge::RunConfig config;
    double fail_under = -1.0;

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--out", config.out_dir, "run archive directory");
    };

    CLI::App* generate =
        app.add_subcommand("generate", "generate prompts, query the model, extract mutants");
    generate->add_option("project", config.project_root, "target project root")
        ->required()
        ->check(CLI::ExistingDirectory);
    generate->add_option("--model", config.model, "model identifier sent to the endpoint");
    generate->add_option("--temperature", config.temperature, "sampling temperature")
        ->check(CLI::Range(0.0, 2.0));
    generate->add_option("--max-tokens", config.max_tokens, "completion token cap");
    generate->add_option("--max-nr-prompts", config.max_nr_prompts, "prompt cap per run");
    generate->add_option("--template", config.template_name,
                         "prompt template name or file path");
    generate->add_option("--system-prompt", config.system_prompt_name, "system prompt name");
    generate->add_option("--window-lines", config.window_lines,
                         "source lines shown around the placeholder");
    generate->add_option("--rate-limit", config.rate_limit_ms,
                         "minimum ms between request starts");
    generate->add_option("--nr-attempts", config.nr_attempts,
                         "total tries per request on rate-limit errors");
    generate->add_option("--mock-fixtures", config.mock_fixtures,
                         "scripted completions file (offline mode)");
    generate->add_option("--endpoint", config.endpoint_url, "chat-completions endpoint URL");
    add_shared(generate);

    CLI::App* run = app.add_subcommand("run", "execute archived mutants against the test suite");
    run->add_option("project", config.project_root, "target project root")
        ->required()
        ->check(CLI::ExistingDirectory);
    run->add_option("command", config.test_command,
                    "test command argv (after --)")
        ->required();
    run->add_option("--workers", config.workers, "parallel workspaces");
    run->add_option("--timeout-factor", config.timeout_factor, "baseline multiplier");
    run->add_option("--timeout-slack-ms", config.timeout_slack_ms, "added timeout ms");
    run->add_option("--fail-under", fail_under, "exit nonzero when the score is below this");
    add_shared(run);

    std::vector<std::string> run_dirs;
    std::string analysis_out = "analysis";
    CLI::App* analyze =
        app.add_subcommand("analyze", "cross-run variability, similarity, equivalence flags");
    analyze->add_option("run_dirs", run_dirs, "archived run directories")->required();
    analyze->add_option("--out", analysis_out, "analysis output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return run_generate(config);
        if (run->parsed()) {
            if (fail_under >= 0.0) config.fail_under = fail_under;
            return run_execute(config);
        }
        if (analyze->parsed()) return run_analyze(run_dirs, analysis_out);
    } catch (const mutforge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
