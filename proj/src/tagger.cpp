#include "postag/tagger.hpp"

#include <atomic>
#include <cctype>
#include <functional>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

namespace postag {

namespace {

PosTag argmax_canonical(const std::vector<CandidateScore>& scores) {
    PosTag best = scores.front().label;
    double best_score = scores.front().logprob;
    for (const CandidateScore& s : scores) {
        if (s.logprob > best_score) {  // strict: first (canonical) max wins ties
            best_score = s.logprob;
            best = s.label;
        }
    }
    return best;
}

std::vector<PosTag> canonical_candidates() {
    return {all_tags().begin(), all_tags().end()};
}

// Runs fn(i) for every i in [0, n), on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t thread_count = std::min<std::size_t>(n, std::max(workers, 1));
    if (thread_count == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        threads.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// "stop at first whitespace after at least one non-space character"
std::string_view first_piece(std::string_view text) {
    std::size_t begin = 0;
    while (begin < text.size() &&
           std::isspace(static_cast<unsigned char>(text[begin])))
        ++begin;
    std::size_t end = begin;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
        ++end;
    return text.substr(begin, end - begin);
}

}  // namespace

std::string_view to_string(TagMode mode) {
    switch (mode) {
        case TagMode::DecomProb: return "decom_prob";
        case TagMode::DecomGen: return "decom_gen";
        case TagMode::Iter: return "iter";
    }
    return "?";
}

std::optional<TagMode> parse_tag_mode(std::string_view text) {
    if (text == "decom_prob") return TagMode::DecomProb;
    if (text == "decom_gen") return TagMode::DecomGen;
    if (text == "iter") return TagMode::Iter;
    return std::nullopt;
}

std::optional<PosTag> extract_tag(std::string_view generated) {
    std::size_t i = 0;
    while (i < generated.size()) {
        if (!std::isalpha(static_cast<unsigned char>(generated[i]))) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < generated.size() &&
               std::isalpha(static_cast<unsigned char>(generated[i])))
            ++i;
        if (std::optional<PosTag> tag = parse_tag(generated.substr(begin, i - begin)))
            return tag;
    }
    return std::nullopt;
}

Prediction tag_decomposed_prob(const Sentence& x, const std::string& demonstration_prefix,
                               CompletionBackend& backend, const TaggerOptions& opts,
                               const PromptTemplate& tmpl) {
    PromptSet prompts = generate_prompts(x, demonstration_prefix, tmpl);
    const std::size_t n = x.size();
    const std::vector<PosTag> candidates = canonical_candidates();

    Prediction pred;
    pred.sentence = x;
    pred.mode = TagMode::DecomProb;
    pred.predicted_tags.resize(n, PosTag::X);
    pred.request_count = n;
    std::vector<std::vector<CandidateScore>> scores(n);

    auto run_one = [&](std::size_t i) {
        scores[i] = backend.score_candidates(prompts.prompts[i], candidates);
        pred.predicted_tags[i] = argmax_canonical(scores[i]);
    };

    auto t0 = std::chrono::steady_clock::now();
    if (opts.sequential_order) {
        for (std::size_t i : *opts.sequential_order) run_one(i);
    } else {
        parallel_for(n, backend.max_concurrency(), run_one);
    }
    pred.wall_time = std::chrono::steady_clock::now() - t0;

    if (opts.keep_scores) pred.per_token_scores = std::move(scores);
    return pred;
}

Prediction tag_decomposed_gen(const Sentence& x, const std::string& demonstration_prefix,
                              CompletionBackend& backend, const TaggerOptions& opts,
                              const PromptTemplate& tmpl) {
    PromptSet prompts = generate_prompts(x, demonstration_prefix, tmpl);
    const std::size_t n = x.size();

    Prediction pred;
    pred.sentence = x;
    pred.mode = TagMode::DecomGen;
    pred.predicted_tags.resize(n, PosTag::X);
    pred.request_count = n;
    std::atomic<std::size_t> failures{0};

    auto run_one = [&](std::size_t i) {
        std::string text =
            backend.generate(prompts.prompts[i], opts.gen_max_tokens, opts.gen_stop);
        if (std::optional<PosTag> tag = extract_tag(text)) {
            pred.predicted_tags[i] = *tag;
        } else {
            pred.predicted_tags[i] = PosTag::X;  // keep |Y| = n; surfaced in the report
            failures.fetch_add(1);
        }
    };

    auto t0 = std::chrono::steady_clock::now();
    if (opts.sequential_order) {
        for (std::size_t i : *opts.sequential_order) run_one(i);
    } else {
        parallel_for(n, backend.max_concurrency(), run_one);
    }
    pred.wall_time = std::chrono::steady_clock::now() - t0;
    pred.extraction_failures = failures.load();
    return pred;
}

Prediction tag_iterative(const Sentence& x, std::span<const Sentence> demos,
                         const std::optional<std::string>& instruction,
                         CompletionBackend& backend, const TaggerOptions& opts) {
    const std::size_t n = x.size();
    Prediction pred;
    pred.sentence = x;
    pred.mode = TagMode::Iter;
    pred.request_count = n;

    std::chrono::duration<double, std::milli> backend_time{0};
    for (std::size_t t = 0; t < n; ++t) {
        std::string prompt = render_iterative(x, pred.predicted_tags, demos, instruction);
        auto t0 = std::chrono::steady_clock::now();
        std::string text = backend.generate(prompt, opts.gen_max_tokens, {"\n"});
        backend_time += std::chrono::steady_clock::now() - t0;
        std::optional<PosTag> tag = extract_tag(first_piece(text));
        if (!tag) {
            tag = PosTag::X;
            ++pred.extraction_failures;
        }
        pred.predicted_tags.push_back(*tag);
    }
    pred.wall_time = backend_time;  // backend latency only; rendering excluded
    return pred;
}

void write_predictions_jsonl(std::ostream& out, std::span<const Prediction> predictions) {
    for (const Prediction& p : predictions) {
        nlohmann::json rec;
        rec["mode"] = std::string(to_string(p.mode));
        rec["language"] = p.sentence.language;
        rec["source_id"] = p.sentence.source_id;
        auto& tokens = rec["tokens"] = nlohmann::json::array();
        auto& gold = rec["gold"] = nlohmann::json::array();
        for (const Token& t : p.sentence.tokens) {
            tokens.push_back(t.surface);
            gold.push_back(t.gold_tag ? std::string(to_string(*t.gold_tag)) : "_");
        }
        auto& predicted = rec["predicted"] = nlohmann::json::array();
        for (PosTag tag : p.predicted_tags) predicted.push_back(std::string(to_string(tag)));
        rec["request_count"] = p.request_count;
        rec["extraction_failures"] = p.extraction_failures;
        out << rec.dump() << "\n";
    }
}

void write_timings_jsonl(std::ostream& out, std::span<const Prediction> predictions) {
    for (const Prediction& p : predictions) {
        nlohmann::json rec;
        rec["source_id"] = p.sentence.source_id;
        rec["wall_time_ms"] = p.wall_time.count();
        out << rec.dump() << "\n";
    }
}

std::vector<DumpRecord> read_predictions_jsonl(std::istream& in) {
    std::vector<DumpRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("bad prediction record: " + std::string(e.what()), line_no);
        }
        DumpRecord r;
        r.mode = rec.value("mode", "");
        r.language = rec.value("language", "");
        r.source_id = rec.value("source_id", "");
        for (const auto& t : rec.value("tokens", nlohmann::json::array()))
            r.tokens.push_back(t.get<std::string>());
        for (const auto& t : rec.value("gold", nlohmann::json::array()))
            r.gold.push_back(t.get<std::string>());
        for (const auto& t : rec.value("predicted", nlohmann::json::array()))
            r.predicted.push_back(t.get<std::string>());
        r.request_count = rec.value("request_count", std::size_t{0});
        r.extraction_failures = rec.value("extraction_failures", std::size_t{0});
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<std::pair<std::string, double>> read_timings_jsonl(std::istream& in) {
    std::vector<std::pair<std::string, double>> timings;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line);
        timings.emplace_back(rec.value("source_id", ""), rec.value("wall_time_ms", 0.0));
    }
    return timings;
}

}  // namespace postag
