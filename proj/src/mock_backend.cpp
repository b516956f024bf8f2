#include "postag/mock_backend.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

namespace postag {

namespace {

// Truncate at the earliest occurrence of any stop sequence.
std::string apply_stop(std::string text, const std::vector<std::string>& stop) {
    std::size_t cut = std::string::npos;
    for (const std::string& s : stop) {
        if (s.empty()) continue;
        std::size_t pos = text.find(s);
        if (pos != std::string::npos) cut = std::min(cut, pos);
    }
    if (cut != std::string::npos) text.resize(cut);
    return text;
}

// The mock's token pieces are maximal non-space runs; keep at most
// max_tokens of them (with the whitespace that precedes each).
std::string apply_token_budget(const std::string& text, int max_tokens) {
    int pieces = 0;
    bool in_piece = false;
    std::size_t end = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        bool space = text[i] == ' ' || text[i] == '\t' || text[i] == '\n';
        if (!space && !in_piece) {
            if (pieces == max_tokens) break;
            in_piece = true;
            ++pieces;
        } else if (space) {
            in_piece = false;
        }
        if (!space) end = i + 1;
        if (space && pieces < max_tokens) end = i + 1;
    }
    return text.substr(0, end);
}

}  // namespace

MockBackend::MockBackend(ScoreTable table, Transcripts transcripts, MockOptions options)
    : table_(std::move(table)), options_(options), slots_(options.max_concurrency) {
    transcripts_.assign(transcripts.begin(), transcripts.end());
    std::sort(transcripts_.begin(), transcripts_.end(),
              [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
}

std::optional<std::string> MockBackend::query_token(const std::string& prompt) {
    static constexpr std::string_view tail = "' is a kind of";
    if (prompt.size() < tail.size() ||
        prompt.compare(prompt.size() - tail.size(), tail.size(), tail) != 0)
        return std::nullopt;
    static constexpr std::string_view mark = "the part-of-speech tag of ";
    std::size_t pos = prompt.rfind(mark);
    if (pos == std::string::npos) return std::nullopt;
    std::size_t begin = pos + mark.size();
    if (begin < prompt.size() && (prompt[begin] == '\'' || prompt[begin] == '`')) ++begin;
    std::size_t end = prompt.size() - tail.size();
    if (end < begin) return std::nullopt;
    return prompt.substr(begin, end - begin);
}

std::optional<std::string> MockBackend::iterative_token(const std::string& prompt) {
    if (prompt.empty() || prompt.back() != '_') return std::nullopt;
    std::size_t start = prompt.find_last_of(" \n");
    start = start == std::string::npos ? 0 : start + 1;
    std::size_t len = prompt.size() - 1 - start;
    if (len == 0) return std::nullopt;
    return prompt.substr(start, len);
}

std::map<PosTag, double> MockBackend::row_for(const std::string& token) const {
    auto it = table_.find(token);
    if (it != table_.end()) return it->second;
    if (options_.unknown_token == UnknownTokenPolicy::Error)
        throw Error("mock backend: no scoring row for token '" + token + "'");
    return {};  // uniform: every candidate gets the default logprob
}

std::vector<CandidateScore> MockBackend::score_candidates(
    const std::string& prompt, const std::vector<PosTag>& candidates) {
    check_candidates(candidates);
    SemaphoreGuard guard(slots_);

    MockCallRecord record;
    record.kind = MockCallRecord::Kind::Score;
    record.prompt = prompt;
    {
        std::lock_guard lock(log_mutex_);
        record.seq_begin = seq_++;
        record.in_flight_at_start = ++in_flight_;
        max_in_flight_ = std::max(max_in_flight_, in_flight_);
    }
    record.t_begin = std::chrono::steady_clock::now();
    if (options_.latency.count() > 0) std::this_thread::sleep_for(options_.latency);

    std::optional<std::string> token = query_token(prompt);
    if (!token) token = iterative_token(prompt);
    if (!token) throw Error("mock backend: cannot locate queried token in prompt");
    std::map<PosTag, double> row = row_for(*token);

    std::vector<CandidateScore> scores;
    scores.reserve(candidates.size());
    for (PosTag c : candidates) {
        auto it = row.find(c);
        scores.push_back({c, it != row.end() ? it->second : options_.default_logprob});
    }

    record.t_end = std::chrono::steady_clock::now();
    {
        std::lock_guard lock(log_mutex_);
        record.seq_end = seq_++;
        --in_flight_;
        log_.push_back(std::move(record));
    }
    return scores;
}

std::string MockBackend::derive_generation(const std::string& prompt) const {
    std::optional<std::string> token = query_token(prompt);
    bool decomposed = token.has_value();
    if (!token) token = iterative_token(prompt);
    if (!token) throw Error("mock backend: no transcript matches and prompt shape unknown");

    std::map<PosTag, double> row = row_for(*token);
    PosTag best = PosTag::ADJ;
    double best_score = -std::numeric_limits<double>::infinity();
    for (PosTag c : all_tags()) {  // canonical order = deterministic tie-break
        auto it = row.find(c);
        double s = it != row.end() ? it->second : options_.default_logprob;
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    }
    std::string tag(to_string(best));
    return decomposed ? tag + "." : tag;
}

std::string MockBackend::generate(const std::string& prompt, int max_tokens,
                                  const std::vector<std::string>& stop) {
    if (max_tokens < 1) throw Error("generate: max_tokens must be >= 1");
    SemaphoreGuard guard(slots_);

    MockCallRecord record;
    record.kind = MockCallRecord::Kind::Generate;
    record.prompt = prompt;
    {
        std::lock_guard lock(log_mutex_);
        record.seq_begin = seq_++;
        record.in_flight_at_start = ++in_flight_;
        max_in_flight_ = std::max(max_in_flight_, in_flight_);
    }
    record.t_begin = std::chrono::steady_clock::now();
    if (options_.latency.count() > 0) std::this_thread::sleep_for(options_.latency);

    std::string text;
    bool matched = false;
    for (const auto& [suffix, reply] : transcripts_) {
        if (prompt.size() >= suffix.size() &&
            prompt.compare(prompt.size() - suffix.size(), suffix.size(), suffix) == 0) {
            text = reply;
            matched = true;
            break;
        }
    }
    if (!matched) {
        if (!options_.derive_generation_from_table)
            throw Error("mock backend: no transcript matches prompt suffix");
        text = derive_generation(prompt);
    }
    text = apply_stop(std::move(text), stop);
    text = apply_token_budget(text, max_tokens);

    record.result = text;
    record.t_end = std::chrono::steady_clock::now();
    {
        std::lock_guard lock(log_mutex_);
        record.seq_end = seq_++;
        --in_flight_;
        log_.push_back(std::move(record));
    }
    return text;
}

std::vector<MockCallRecord> MockBackend::call_log() const {
    std::lock_guard lock(log_mutex_);
    return log_;
}

int MockBackend::max_in_flight_observed() const {
    std::lock_guard lock(log_mutex_);
    return max_in_flight_;
}

void MockBackend::reset_log() {
    std::lock_guard lock(log_mutex_);
    log_.clear();
    max_in_flight_ = 0;
}

std::shared_ptr<MockBackend> MockBackend::from_json_file(
    const std::string& path, std::optional<int> max_concurrency_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open mock fixture: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad mock fixture JSON: " + std::string(e.what()));
    }

    ScoreTable table;
    const nlohmann::json table_json = j.value("table", nlohmann::json::object());
    for (const auto& [token, row] : table_json.items()) {
        std::map<PosTag, double> scores;
        for (const auto& [tag_name, lp] : row.items()) {
            std::optional<PosTag> tag = parse_tag(tag_name);
            if (!tag) throw ParseError("mock fixture: unknown tag '" + tag_name + "'");
            scores[*tag] = lp.get<double>();
        }
        table[token] = std::move(scores);
    }
    Transcripts transcripts;
    const nlohmann::json transcripts_json =
        j.value("transcripts", nlohmann::json::object());
    for (const auto& [suffix, reply] : transcripts_json.items())
        transcripts[suffix] = reply.get<std::string>();

    MockOptions options;
    options.latency = std::chrono::milliseconds(j.value("latency_ms", 0));
    options.default_logprob = j.value("default_logprob", -18.0);
    options.derive_generation_from_table = j.value("derive_generation_from_table", true);
    options.max_concurrency = j.value("max_concurrency", 64);
    std::string policy = j.value("unknown_token", "uniform");
    if (policy == "uniform")
        options.unknown_token = UnknownTokenPolicy::Uniform;
    else if (policy == "error")
        options.unknown_token = UnknownTokenPolicy::Error;
    else
        throw ParseError("mock fixture: unknown_token must be uniform or error");
    if (max_concurrency_override) options.max_concurrency = *max_concurrency_override;

    return std::make_shared<MockBackend>(std::move(table), std::move(transcripts), options);
}

std::shared_ptr<MockBackend> mock_from_table(MockBackend::ScoreTable table,
                                             MockBackend::Transcripts transcripts,
                                             MockOptions options) {
    return std::make_shared<MockBackend>(std::move(table), std::move(transcripts), options);
}

}  // namespace postag
