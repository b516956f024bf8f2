#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "postag/mock_backend.hpp"
#include "postag/tagger.hpp"
#include "testutil.hpp"

using namespace postag;
using testutil::make_sentence;

namespace {

Sentence viel_erfolg() {
    return make_sentence({"Viel", "Erfolg", "!"},
                         {PosTag::ADJ, PosTag::NOUN, PosTag::PUNCT}, "de", "demo-1");
}

MockBackend::ScoreTable viel_table() {
    return {
        {"Viel", {{PosTag::ADJ, -0.2}, {PosTag::DET, -1.5}}},
        {"Erfolg", {{PosTag::NOUN, -0.1}, {PosTag::ADJ, -3.0}}},
        {"!", {{PosTag::PUNCT, -0.05}, {PosTag::SYM, -2.2}}},
    };
}

// Independent oracle: best tag per table row, canonical order breaking ties.
PosTag table_argmax(const MockBackend::ScoreTable& table, const std::string& surface,
                    double fallback = -18.0) {
    PosTag best = PosTag::ADJ;
    double best_score = -1e300;
    auto row = table.count(surface) ? table.at(surface)
                                    : std::map<PosTag, double>{};
    for (PosTag t : all_tags()) {
        double s = row.count(t) ? row.at(t) : fallback;
        if (s > best_score) {
            best_score = s;
            best = t;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("extract_tag: first maximal alphabetic run that equals a tag") {
    CHECK(extract_tag("ADV") == PosTag::ADV);
    CHECK(extract_tag(" PUNCT.\nSentence:") == PosTag::PUNCT);
    CHECK(extract_tag("NOUN.") == PosTag::NOUN);
    CHECK(extract_tag("PROPN because it is a name") == PosTag::PROPN);
    CHECK_FALSE(extract_tag("adjective").has_value());
    CHECK_FALSE(extract_tag("I think it is a verb").has_value());
    CHECK_FALSE(extract_tag("").has_value());
    CHECK_FALSE(extract_tag("PROPNX").has_value());   // run too long
    CHECK(extract_tag("...VERB...") == PosTag::VERB);
    CHECK(extract_tag("xx NOUN yy") == PosTag::NOUN); // skips non-matching runs
    CHECK(extract_tag("AUXARY AUX") == PosTag::AUX);  // maximal-run rule
}

TEST_CASE("decomposed prob mode matches the brute-force table argmax") {
    auto mock = mock_from_table(viel_table());
    Sentence x = viel_erfolg();
    Prediction pred = tag_decomposed_prob(x, "", *mock);

    REQUIRE(pred.predicted_tags.size() == 3);
    CHECK(pred.predicted_tags[0] == PosTag::ADJ);
    CHECK(pred.predicted_tags[1] == PosTag::NOUN);
    CHECK(pred.predicted_tags[2] == PosTag::PUNCT);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(pred.predicted_tags[i] == table_argmax(viel_table(), x.tokens[i].surface));
    CHECK(pred.request_count == 3);
    CHECK(pred.mode == TagMode::DecomProb);
    CHECK(pred.extraction_failures == 0);
}

TEST_CASE("single-token sentence needs exactly one call") {
    auto mock = mock_from_table(viel_table());
    Sentence x = make_sentence({"Viel"});
    Prediction pred = tag_decomposed_prob(x, "", *mock);
    CHECK(pred.predicted_tags == std::vector<PosTag>{PosTag::ADJ});
    CHECK(pred.request_count == 1);
    CHECK(mock->call_log().size() == 1);
}

TEST_CASE("uniform scores fall back to canonical tie-break (ADJ first)") {
    auto mock = mock_from_table({});  // unknown token -> uniform row
    Prediction pred = tag_decomposed_prob(make_sentence({"anything"}), "", *mock);
    CHECK(pred.predicted_tags[0] == PosTag::ADJ);
}

TEST_CASE("decomposed predictions are evaluation-order invariant") {
    auto mock = mock_from_table(viel_table());
    Sentence x = viel_erfolg();
    Prediction concurrent = tag_decomposed_prob(x, "", *mock);

    TaggerOptions reversed;
    reversed.sequential_order = std::vector<std::size_t>{2, 1, 0};
    Prediction sequential = tag_decomposed_prob(x, "", *mock, reversed);
    CHECK(concurrent.predicted_tags == sequential.predicted_tags);

    TaggerOptions shuffled;
    shuffled.sequential_order = std::vector<std::size_t>{1, 2, 0};
    CHECK(tag_decomposed_prob(x, "", *mock, shuffled).predicted_tags ==
          concurrent.predicted_tags);
}

TEST_CASE("per-token scores kept on request, in candidate order") {
    auto mock = mock_from_table(viel_table());
    TaggerOptions opts;
    opts.keep_scores = true;
    Prediction pred = tag_decomposed_prob(viel_erfolg(), "", *mock, opts);
    REQUIRE(pred.per_token_scores.has_value());
    REQUIRE(pred.per_token_scores->size() == 3);
    for (const auto& scores : *pred.per_token_scores) {
        REQUIRE(scores.size() == kTagCount);
        for (std::size_t i = 0; i < kTagCount; ++i) CHECK(scores[i].label == all_tags()[i]);
    }
}

TEST_CASE("decomposed gen mode extracts tags and counts failures") {
    Sentence x = viel_erfolg();
    std::string q0 = "of 'Viel' is a kind of";
    std::string q1 = "of 'Erfolg' is a kind of";
    std::string q2 = "of '!' is a kind of";
    MockBackend::Transcripts transcripts = {
        {q0, "ADJ."},
        {q1, "PROPN because it is a name"},
        {q2, "I think it is a verb"},  // no uppercase tag: falls back to X
    };
    auto mock = mock_from_table({}, transcripts);
    Prediction pred = tag_decomposed_gen(x, "", *mock);
    REQUIRE(pred.predicted_tags.size() == 3);
    CHECK(pred.predicted_tags[0] == PosTag::ADJ);
    CHECK(pred.predicted_tags[1] == PosTag::PROPN);
    CHECK(pred.predicted_tags[2] == PosTag::X);
    CHECK(pred.extraction_failures == 1);
    CHECK(pred.request_count == 3);
}

TEST_CASE("prob and gen agree when the mock derives generations from its table") {
    auto mock = mock_from_table(viel_table());
    Sentence x = viel_erfolg();
    Prediction prob = tag_decomposed_prob(x, "", *mock);
    Prediction gen = tag_decomposed_gen(x, "", *mock);
    CHECK(prob.predicted_tags == gen.predicted_tags);
    CHECK(gen.extraction_failures == 0);
}

TEST_CASE("iterative mode replays the published flow with ordered calls") {
    Sentence x = viel_erfolg();
    // Scripted continuations for each decoding step.
    MockBackend::Transcripts transcripts = {
        {"Sentence: Viel Erfolg !\nViel_", "ADJ Erfolg_NOUN"},
        {"Viel_ADJ Erfolg_", "NOUN !_PUNCT"},
        {"Viel_ADJ Erfolg_NOUN !_", "PUNCT"},
    };
    auto mock = mock_from_table({}, transcripts);
    Prediction pred = tag_iterative(x, {}, default_instruction(), *mock);

    CHECK(pred.predicted_tags ==
          std::vector<PosTag>{PosTag::ADJ, PosTag::NOUN, PosTag::PUNCT});
    CHECK(pred.request_count == 3);
    CHECK(pred.mode == TagMode::Iter);

    auto log = mock->call_log();
    REQUIRE(log.size() == 3);
    // Strictly sequential: each call finishes before the next begins.
    for (std::size_t i = 1; i < log.size(); ++i) {
        CHECK(log[i - 1].seq_end < log[i].seq_begin);
        CHECK(log[i - 1].t_end <= log[i].t_begin);
        CHECK(log[i].in_flight_at_start == 1);
    }
    // Each prompt carries the previously decoded prefix.
    CHECK(log[1].prompt.ends_with("Viel_ADJ Erfolg_"));
    CHECK(log[2].prompt.ends_with("Viel_ADJ Erfolg_NOUN !_"));
}

TEST_CASE("iterative decoding canonicalizes the appended label") {
    Sentence x = make_sentence({"a", "b"});
    MockBackend::Transcripts transcripts = {
        // First step emits noise after the tag; only "DET" may be fed back.
        {"Sentence: a b\na_", "DET garbage trailing text"},
        {"a_DET b_", "NOUN"},
    };
    auto mock = mock_from_table({}, transcripts);
    Prediction pred = tag_iterative(x, {}, std::nullopt, *mock);
    CHECK(pred.predicted_tags == std::vector<PosTag>{PosTag::DET, PosTag::NOUN});
    CHECK(mock->call_log()[1].prompt.ends_with("a_DET b_"));
}

TEST_CASE("iterative extraction failure falls back to X and keeps decoding") {
    Sentence x = make_sentence({"a", "b"});
    MockBackend::Transcripts transcripts = {
        {"Sentence: a b\na_", "???"},
        {"a_X b_", "VERB"},
    };
    auto mock = mock_from_table({}, transcripts);
    Prediction pred = tag_iterative(x, {}, std::nullopt, *mock);
    CHECK(pred.predicted_tags == std::vector<PosTag>{PosTag::X, PosTag::VERB});
    CHECK(pred.extraction_failures == 1);
}

TEST_CASE("iterative single-token sentence issues one call") {
    auto mock = mock_from_table(viel_table());
    Prediction pred = tag_iterative(make_sentence({"Viel"}), {}, std::nullopt, *mock);
    CHECK(pred.request_count == 1);
    CHECK(mock->call_log().size() == 1);
    CHECK(pred.predicted_tags == std::vector<PosTag>{PosTag::ADJ});
}

TEST_CASE("in-flight requests never exceed the backend cap") {
    MockOptions options;
    options.latency = std::chrono::milliseconds(1);
    options.max_concurrency = 3;
    MockBackend::ScoreTable table;
    std::vector<std::string> surfaces;
    for (int i = 0; i < 24; ++i) {
        std::string w = "w" + std::to_string(i);
        surfaces.push_back(w);
        table[w] = {{PosTag::NOUN, -0.1}};
    }
    auto mock = mock_from_table(table, {}, options);
    Prediction pred = tag_decomposed_prob(make_sentence(surfaces), "", *mock);
    CHECK(pred.request_count == 24);
    CHECK(mock->max_in_flight_observed() <= 3);
}

TEST_CASE("prediction dumps round-trip through JSONL") {
    auto mock = mock_from_table(viel_table());
    std::vector<Prediction> preds = {tag_decomposed_prob(viel_erfolg(), "", *mock)};
    std::ostringstream pred_out, timing_out;
    write_predictions_jsonl(pred_out, preds);
    write_timings_jsonl(timing_out, preds);

    std::istringstream pred_in(pred_out.str());
    auto records = read_predictions_jsonl(pred_in);
    REQUIRE(records.size() == 1);
    CHECK(records[0].mode == "decom_prob");
    CHECK(records[0].language == "de");
    CHECK(records[0].source_id == "demo-1");
    CHECK(records[0].tokens == std::vector<std::string>{"Viel", "Erfolg", "!"});
    CHECK(records[0].gold == std::vector<std::string>{"ADJ", "NOUN", "PUNCT"});
    CHECK(records[0].predicted == std::vector<std::string>{"ADJ", "NOUN", "PUNCT"});
    CHECK(records[0].request_count == 3);

    std::istringstream timing_in(timing_out.str());
    auto timings = read_timings_jsonl(timing_in);
    REQUIRE(timings.size() == 1);
    CHECK(timings[0].first == "demo-1");
    CHECK(timings[0].second >= 0.0);

    // The dump itself carries no timing field, so reruns are byte-stable.
    CHECK(pred_out.str().find("wall_time") == std::string::npos);
}
