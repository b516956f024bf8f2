// Command-line front end: evaluate / ablate / similarity / compare.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "postag/commands.hpp"

namespace {

using postag::RunConfig;

// Flags override anything the --config file set, but only when actually
// passed on the command line.
struct EvalFlags {
    std::string config_path;
    std::string method, mode, backend_kind, quote_style;
    int shots = 0;
    bool instruction = false, no_instruction = false;
    std::vector<std::string> languages;
    std::size_t sample_size = 200;
    std::uint64_t seed = 42;
    std::string corpus_dir, demos, meta, out;
    std::string endpoint, model, mock_fixture, api_key_env;
    int max_concurrency = 8, retry = 3, gen_max_tokens = 8;
    long timeout_ms = 30000;
    bool occurrence_suffix = false;
};

void add_eval_options(CLI::App& cmd, EvalFlags& f) {
    cmd.add_option("--config", f.config_path, "JSON config file (flags override it)");
    cmd.add_option("--method", f.method, "decom | iter");
    cmd.add_option("--mode", f.mode, "prob | gen");
    cmd.add_option("--shots", f.shots, "number of demonstrations k");
    cmd.add_flag("--instruction", f.instruction, "prepend the tag-set instruction");
    cmd.add_flag("--no-instruction", f.no_instruction, "omit the instruction");
    cmd.add_option("--languages", f.languages, "language codes")->delimiter(',');
    cmd.add_option("--sample-size", f.sample_size, "sentences sampled per language");
    cmd.add_option("--seed", f.seed, "sampling / demo-selection seed");
    cmd.add_option("--corpus-dir", f.corpus_dir, "directory of <lang>.conllu files");
    cmd.add_option("--demos", f.demos, "English training CoNLL-U for demonstrations");
    cmd.add_option("--meta", f.meta, "language metadata file");
    cmd.add_option("--out", f.out, "output directory");
    cmd.add_option("--backend", f.backend_kind, "mock | http");
    cmd.add_option("--endpoint", f.endpoint, "completion endpoint URL");
    cmd.add_option("--model", f.model, "model name sent to the endpoint");
    cmd.add_option("--mock-fixture", f.mock_fixture, "mock table/transcript JSON");
    cmd.add_option("--max-concurrency", f.max_concurrency, "parallel requests cap");
    cmd.add_option("--timeout-ms", f.timeout_ms, "request timeout");
    cmd.add_option("--retry", f.retry, "transport retries");
    cmd.add_option("--api-key-env", f.api_key_env, "env var holding the bearer token");
    cmd.add_option("--quote-style", f.quote_style, "ascii | typeset");
    cmd.add_option("--gen-max-tokens", f.gen_max_tokens, "generation budget per token");
    cmd.add_flag("--occurrence-suffix", f.occurrence_suffix,
                 "mark duplicate surfaces as 'word #k' (not paper-faithful)");
}

RunConfig build_config(const CLI::App& cmd, const EvalFlags& f) {
    RunConfig config;
    if (!f.config_path.empty()) config = RunConfig::from_json_file(f.config_path);

    auto passed = [&](const std::string& name) { return cmd.count(name) > 0; };
    if (passed("--method")) {
        auto m = postag::parse_method(f.method);
        if (!m) throw postag::ConfigError("method must be decom or iter");
        config.method = *m;
    }
    if (passed("--mode")) {
        auto m = postag::parse_mode(f.mode);
        if (!m) throw postag::ConfigError("mode must be prob or gen");
        config.mode = *m;
    }
    if (passed("--shots")) config.shots = f.shots;
    if (passed("--languages")) config.languages = f.languages;
    if (passed("--sample-size")) config.sample_size = f.sample_size;
    if (passed("--seed")) config.seed = f.seed;
    if (passed("--corpus-dir")) config.corpus_dir = f.corpus_dir;
    if (passed("--demos")) config.demo_corpus = f.demos;
    if (passed("--meta")) config.meta_path = f.meta;
    if (passed("--out")) config.output_dir = f.out;
    if (passed("--backend")) {
        if (f.backend_kind == "mock")
            config.backend.kind = postag::BackendKind::Mock;
        else if (f.backend_kind == "http")
            config.backend.kind = postag::BackendKind::Http;
        else
            throw postag::ConfigError("backend must be mock or http");
    }
    if (passed("--endpoint")) config.backend.endpoint = f.endpoint;
    if (passed("--model")) config.backend.model_name = f.model;
    if (passed("--mock-fixture")) config.backend.mock_fixture = f.mock_fixture;
    if (passed("--max-concurrency")) config.backend.max_concurrency = f.max_concurrency;
    if (passed("--timeout-ms"))
        config.backend.timeout = std::chrono::milliseconds(f.timeout_ms);
    if (passed("--retry")) config.backend.retry = f.retry;
    if (passed("--api-key-env")) config.backend.api_key_env = f.api_key_env;
    if (passed("--gen-max-tokens")) config.gen_max_tokens = f.gen_max_tokens;
    if (f.occurrence_suffix) config.occurrence_suffix = true;
    if (passed("--quote-style")) {
        if (f.quote_style == "ascii")
            config.quote_style = postag::QuoteStyle::Ascii;
        else if (f.quote_style == "typeset")
            config.quote_style = postag::QuoteStyle::Typeset;
        else
            throw postag::ConfigError("quote-style must be ascii or typeset");
    }

    // Zero-shot defaults to carrying the instruction; an explicit flag wins.
    if (f.instruction && f.no_instruction)
        throw postag::ConfigError("--instruction and --no-instruction conflict");
    if (f.instruction)
        config.with_instruction = true;
    else if (f.no_instruction)
        config.with_instruction = false;
    else if (!passed("--config"))
        config.with_instruction = config.shots == 0;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prompting-based multilingual POS tagging harness"};
    app.require_subcommand(1);

    EvalFlags eval_flags;
    CLI::App* evaluate = app.add_subcommand("evaluate", "run one evaluation");
    add_eval_options(*evaluate, eval_flags);

    EvalFlags ablate_flags;
    std::vector<int> k_values;
    CLI::App* ablate = app.add_subcommand("ablate", "sweep the demonstration count k");
    add_eval_options(*ablate, ablate_flags);
    ablate->add_option("--k", k_values, "k values to sweep")->delimiter(',');

    std::string vectors_path, similarity_out;
    CLI::App* similarity = app.add_subcommand("similarity", "language similarity table");
    similarity->add_option("--vectors", vectors_path, "feature vector file")->required();
    similarity->add_option("--out", similarity_out, "output CSV (default stdout)");

    std::string iter_dir, decom_dir, compare_out;
    bool compare_few_shot = false;
    CLI::App* compare = app.add_subcommand("compare", "join two runs: F1 deltas + speedup");
    compare->add_option("--iter", iter_dir, "iterative run directory")->required();
    compare->add_option("--decom", decom_dir, "decomposed run directory")->required();
    compare->add_option("--out", compare_out, "output CSV (default stdout)");
    compare->add_flag("--few-shot", compare_few_shot, "label the speedup as few-shot");

    std::string zero_dir, few_dir, group_meta, group_vectors, group_out;
    CLI::App* group = app.add_subcommand(
        "group", "stratify zero/few-shot results by family, script and corpus share");
    group->add_option("--zero", zero_dir, "zero-shot run directory")->required();
    group->add_option("--few", few_dir, "few-shot run directory")->required();
    group->add_option("--meta", group_meta, "language metadata file")->required();
    group->add_option("--vectors", group_vectors, "feature vectors (for rank scores)");
    group->add_option("--out-dir", group_out, "output directory (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : postag::kExitConfigError;
    }

    try {
        if (evaluate->parsed())
            return postag::cmd_evaluate(build_config(*evaluate, eval_flags));
        if (ablate->parsed())
            return postag::cmd_ablate(build_config(*ablate, ablate_flags), k_values);
        if (similarity->parsed())
            return postag::cmd_similarity(vectors_path, similarity_out);
        if (compare->parsed())
            return postag::cmd_compare(iter_dir, decom_dir, compare_out, compare_few_shot);
        if (group->parsed())
            return postag::cmd_group(zero_dir, few_dir, group_meta, group_vectors,
                                     group_out);
    } catch (const postag::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return postag::kExitConfigError;
    } catch (const postag::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return postag::kExitEvalFailure;
    }
    return postag::kExitConfigError;
}
