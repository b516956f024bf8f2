#include <doctest.h>

#include <cmath>
#include <set>

#include "property_suites.hpp"
#include "postag/analysis.hpp"
#include "postag/corpus.hpp"
#include "postag/random.hpp"

using namespace postag;

namespace {
constexpr std::size_t kCases = 1000;
}

TEST_CASE("property: decomposed tagging is evaluation-order invariant") {
    auto r = testutil::prop_order_invariance(kCases);
    INFO(r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases == kCases);
}

TEST_CASE("property: request_count = n in every mode") {
    auto r = testutil::prop_request_count(kCases);
    INFO(r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases == kCases);
}

TEST_CASE("property: argmax ties break deterministically in canonical order") {
    auto r = testutil::prop_tiebreak_determinism(kCases);
    INFO(r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases == kCases);
}

TEST_CASE("property: extraction failures fall back to X, |Y| stays n") {
    auto r = testutil::prop_extraction_fallback(kCases);
    INFO(r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases == kCases);
}

TEST_CASE("property: F1 bounds and weighted-recall identity") {
    auto r = testutil::prop_f1_bounds(kCases);
    INFO(r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases == kCases);
}

TEST_CASE("property: confusion-matrix checksums") {
    auto r = testutil::prop_confusion_checksums(kCases);
    INFO(r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases == kCases);
}

TEST_CASE("property: CoNLL-U round trip over random sentences") {
    testutil::Gen gen(77);
    for (int c = 0; c < 500; ++c) {
        std::size_t n = 1 + gen.below(12);
        std::vector<std::string> surfaces;
        std::vector<PosTag> tags;
        for (std::size_t i = 0; i < n; ++i) {
            surfaces.push_back(gen.word());
            tags.push_back(gen.tag());
        }
        Sentence s = testutil::make_sentence(surfaces, tags, "xx",
                                             "r" + std::to_string(c));
        std::istringstream in(to_conllu(s));
        auto parsed = parse_conllu(in, {.language = "xx"});
        REQUIRE(parsed.size() == 1);
        CHECK(parsed[0] == s);
    }
}

TEST_CASE("property: every parsed gold tag is a tag-set member") {
    // Holds by construction of the parser; exercise it across random
    // serialized corpora.
    testutil::Gen gen(78);
    for (int c = 0; c < 200; ++c) {
        std::string blob;
        std::size_t sentences = 1 + gen.below(5);
        for (std::size_t s = 0; s < sentences; ++s) {
            std::size_t n = 1 + gen.below(6);
            std::vector<std::string> surfaces;
            std::vector<PosTag> tags;
            for (std::size_t i = 0; i < n; ++i) {
                surfaces.push_back(gen.word());
                tags.push_back(gen.tag());
            }
            blob += to_conllu(testutil::make_sentence(surfaces, tags));
        }
        std::istringstream in(blob);
        for (const Sentence& s : parse_conllu(in))
            for (const Token& t : s.tokens) {
                REQUIRE(t.gold_tag.has_value());
                CHECK(parse_tag(to_string(*t.gold_tag)).has_value());
            }
    }
}

TEST_CASE("property: sampling is idempotent per seed and a subset by identity") {
    testutil::Gen gen(79);
    for (int c = 0; c < 300; ++c) {
        std::size_t population = 1 + gen.below(120);
        std::vector<Sentence> corpus;
        for (std::size_t i = 0; i < population; ++i)
            corpus.push_back(testutil::make_sentence({"w"}, {PosTag::X}, "xx",
                                                     "s" + std::to_string(i)));
        std::size_t n = gen.below(population + 20);
        std::uint64_t seed = gen.below(1 << 30);
        auto a = sample_instances(corpus, n, seed);
        auto b = sample_instances(corpus, n, seed);
        CHECK(a == b);
        CHECK(a.size() == std::min(n, population));

        std::set<std::string> ids;
        for (const Sentence& s : corpus) ids.insert(s.source_id);
        std::set<std::string> picked;
        for (const Sentence& s : a) {
            CHECK(ids.count(s.source_id) == 1);
            picked.insert(s.source_id);
        }
        CHECK(picked.size() == a.size());  // without replacement
    }
}

TEST_CASE("property: ranks survive strictly monotone similarity transforms") {
    testutil::Gen gen(80);
    for (int c = 0; c < 300; ++c) {
        std::map<std::string, double> sims;
        std::size_t n = 2 + gen.below(37);
        for (std::size_t i = 0; i < n; ++i)
            sims["l" + std::to_string(i)] = gen.real(-1.0, 1.0);
        auto base = rank_languages(sims);
        std::map<std::string, double> scaled, shifted;
        for (const auto& [code, v] : sims) {
            scaled[code] = 3.5 * v;
            shifted[code] = std::exp(v) + 2.0;
        }
        CHECK(rank_languages(scaled) == base);
        CHECK(rank_languages(shifted) == base);
    }
}

TEST_CASE("property: speedup grows linearly with length under full concurrency") {
    // Timing-based: tolerances stay loose to absorb scheduler jitter.
    for (int n : {2, 4, 8, 16}) {
        MockOptions options;
        options.latency = std::chrono::milliseconds(8);
        options.max_concurrency = 32;
        MockBackend::ScoreTable table;
        std::vector<std::string> surfaces;
        for (int i = 0; i < n; ++i) {
            std::string w = "w" + std::to_string(i);
            surfaces.push_back(w);
            table[w] = {{PosTag::NOUN, -0.1}};
        }
        auto mock = mock_from_table(table, {}, options);
        Sentence x = testutil::make_sentence(surfaces);
        Prediction decom = tag_decomposed_prob(x, "", *mock);
        Prediction iter = tag_iterative(x, {}, std::nullopt, *mock);
        double ratio = iter.wall_time.count() / decom.wall_time.count();
        CHECK(ratio > 0.55 * n);
        CHECK(iter.wall_time.count() >= 0.9 * 8.0 * n);
    }
}
