#include "postag/run_config.hpp"

#include <fstream>

#include <json.hpp>

#include "postag/random.hpp"

namespace postag {

std::string_view to_string(Method m) { return m == Method::Decom ? "decom" : "iter"; }
std::string_view to_string(Mode m) { return m == Mode::Prob ? "prob" : "gen"; }

std::optional<Method> parse_method(std::string_view text) {
    if (text == "decom") return Method::Decom;
    if (text == "iter") return Method::Iter;
    return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view text) {
    if (text == "prob") return Mode::Prob;
    if (text == "gen") return Mode::Gen;
    return std::nullopt;
}

void RunConfig::validate() const {
    if (method == Method::Iter && mode == Mode::Prob)
        throw ConfigError("mode=prob is only valid with method=decom; "
                          "the iterative baseline decodes by generation");
    if (shots < 0) throw ConfigError("shots must be >= 0");
    if (sampler != kSamplerName)
        throw ConfigError("unknown sampler '" + sampler + "' (pinned: " +
                          std::string(kSamplerName) + ")");
    if (languages.empty()) throw ConfigError("no languages configured");
    if (backend.max_concurrency < 1) throw ConfigError("max_concurrency must be >= 1");
    if (shots > 0 && demo_corpus.empty())
        throw ConfigError("few-shot runs need a demonstration corpus (--demos)");
    if (gen_max_tokens < 1) throw ConfigError("gen_max_tokens must be >= 1");
    prompt_template().validate();
}

PromptTemplate RunConfig::prompt_template() const {
    PromptTemplate tmpl;
    tmpl.quote_style = quote_style;
    tmpl.occurrence_suffix = occurrence_suffix;
    if (query_pattern_override) tmpl.query_pattern = *query_pattern_override;
    if (demo_pattern_override) tmpl.demo_pattern = *demo_pattern_override;
    if (separator_override) tmpl.separator = *separator_override;
    return tmpl;
}

std::optional<std::string> RunConfig::instruction() const {
    if (!with_instruction) return std::nullopt;
    if (instruction_override) return instruction_override;
    return default_instruction();
}

namespace {

nlohmann::json backend_to_json(const BackendConfig& b) {
    return {
        {"kind", b.kind == BackendKind::Mock ? "mock" : "http"},
        {"endpoint", b.endpoint},
        {"model_name", b.model_name},
        {"max_concurrency", b.max_concurrency},
        {"timeout_ms", b.timeout.count()},
        {"retry", b.retry},
        {"backoff_initial_ms", b.backoff_initial.count()},
        {"api_key_env", b.api_key_env},
        {"length_normalize_scores", b.length_normalize_scores},
        {"mock_fixture", b.mock_fixture},
    };
}

BackendConfig backend_from_json(const nlohmann::json& j) {
    BackendConfig b;
    std::string kind = j.value("kind", "mock");
    if (kind == "mock")
        b.kind = BackendKind::Mock;
    else if (kind == "http")
        b.kind = BackendKind::Http;
    else
        throw ConfigError("backend kind must be mock or http, got '" + kind + "'");
    b.endpoint = j.value("endpoint", "");
    b.model_name = j.value("model_name", "");
    b.max_concurrency = j.value("max_concurrency", 8);
    b.timeout = std::chrono::milliseconds(j.value("timeout_ms", 30000));
    b.retry = j.value("retry", 3);
    b.backoff_initial = std::chrono::milliseconds(j.value("backoff_initial_ms", 100));
    b.api_key_env = j.value("api_key_env", "");
    b.length_normalize_scores = j.value("length_normalize_scores", false);
    b.mock_fixture = j.value("mock_fixture", "");
    return b;
}

}  // namespace

std::string RunConfig::to_json_string() const {
    nlohmann::json j = {
        {"method", std::string(to_string(method))},
        {"mode", std::string(to_string(mode))},
        {"shots", shots},
        {"with_instruction", with_instruction},
        {"languages", languages},
        {"sample_size", sample_size},
        {"seed", seed},
        {"sampler", sampler},
        {"backend", backend_to_json(backend)},
        {"corpus_dir", corpus_dir},
        {"demo_corpus", demo_corpus},
        {"meta_path", meta_path},
        {"output_dir", output_dir},
        {"quote_style", quote_style == QuoteStyle::Ascii ? "ascii" : "typeset"},
        {"occurrence_suffix", occurrence_suffix},
        {"gen_max_tokens", gen_max_tokens},
    };
    if (instruction_override) j["instruction_override"] = *instruction_override;
    if (query_pattern_override) j["query_pattern"] = *query_pattern_override;
    if (demo_pattern_override) j["demo_pattern"] = *demo_pattern_override;
    if (separator_override) j["separator"] = *separator_override;
    return j.dump(2);
}

RunConfig RunConfig::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad config JSON: " + std::string(e.what()));
    }
    RunConfig c;
    if (j.contains("method")) {
        auto m = parse_method(j["method"].get<std::string>());
        if (!m) throw ConfigError("method must be decom or iter");
        c.method = *m;
    }
    if (j.contains("mode")) {
        auto m = parse_mode(j["mode"].get<std::string>());
        if (!m) throw ConfigError("mode must be prob or gen");
        c.mode = *m;
    }
    c.shots = j.value("shots", 0);
    c.with_instruction = j.value("with_instruction", true);
    c.languages = j.value("languages", std::vector<std::string>{});
    c.sample_size = j.value("sample_size", std::size_t{200});
    c.seed = j.value("seed", std::uint64_t{42});
    c.sampler = j.value("sampler", std::string(kSamplerName));
    if (j.contains("backend")) c.backend = backend_from_json(j["backend"]);
    c.corpus_dir = j.value("corpus_dir", "");
    c.demo_corpus = j.value("demo_corpus", "");
    c.meta_path = j.value("meta_path", "");
    c.output_dir = j.value("output_dir", "");
    if (j.contains("instruction_override"))
        c.instruction_override = j["instruction_override"].get<std::string>();
    if (j.contains("query_pattern"))
        c.query_pattern_override = j["query_pattern"].get<std::string>();
    if (j.contains("demo_pattern"))
        c.demo_pattern_override = j["demo_pattern"].get<std::string>();
    if (j.contains("separator")) c.separator_override = j["separator"].get<std::string>();
    c.occurrence_suffix = j.value("occurrence_suffix", false);
    std::string quotes = j.value("quote_style", "ascii");
    if (quotes == "ascii")
        c.quote_style = QuoteStyle::Ascii;
    else if (quotes == "typeset")
        c.quote_style = QuoteStyle::Typeset;
    else
        throw ConfigError("quote_style must be ascii or typeset");
    c.gen_max_tokens = j.value("gen_max_tokens", 8);
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

std::string run_root(const RunConfig& config) {
    std::string dir = std::string(to_string(config.method)) + "-" +
                      std::string(to_string(config.mode)) + "-k" +
                      std::to_string(config.shots);
    if (config.with_instruction) dir += "-instr";
    return dir;
}

std::string run_subdir(const RunConfig& config, const std::string& language) {
    return run_root(config) + "/" + language;
}

}  // namespace postag
