#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "postag/corpus.hpp"
#include "postag/mock_backend.hpp"

namespace testutil {

inline std::string data_path(const std::string& relative) {
    return std::string(POSTAG_TEST_DATA_DIR) + "/" + relative;
}

inline std::string bundled_path(const std::string& relative) {
    return std::string(POSTAG_DATA_DIR) + "/" + relative;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline postag::Sentence make_sentence(const std::vector<std::string>& surfaces,
                                      const std::vector<postag::PosTag>& tags = {},
                                      const std::string& language = "en",
                                      const std::string& id = "s1") {
    postag::Sentence s;
    s.language = language;
    s.source_id = id;
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
        postag::Token t;
        t.surface = surfaces[i];
        t.index = i;
        if (i < tags.size()) t.gold_tag = tags[i];
        s.tokens.push_back(std::move(t));
    }
    return s;
}

inline std::vector<std::string> split_words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> words;
    std::string w;
    while (in >> w) words.push_back(w);
    return words;
}

/// Scratch directory wiped on construction; lives under the build tree.
class TempDir {
public:
    explicit TempDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("postag_test_" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string str() const { return path_.string(); }
    std::filesystem::path path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Seeded generator helpers for the property suites.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
    }
    double real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    postag::PosTag tag() {
        return postag::all_tags()[below(postag::kTagCount)];
    }
    std::string word() {
        static const char* kWords[] = {"Viel", "Erfolg", "!",    "the",  "cat",
                                       "sat",  "on",     "mat",  ".",    "a",
                                       "dog",  "runs",   "fast", "und",  "der",
                                       "Hund", "läuft",  "schnell", ",", "99"};
        return kWords[below(std::size(kWords))];
    }
    std::vector<postag::PosTag> tags(std::size_t n) {
        std::vector<postag::PosTag> out(n);
        for (auto& t : out) t = tag();
        return out;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace testutil
