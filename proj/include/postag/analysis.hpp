#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postag/corpus.hpp"

namespace postag {

/// The five typological feature spaces a language is represented in.
enum class Feature { Syntactic, Phonological, Inventory, Family, Geographic };

inline constexpr std::size_t kFeatureCount = 5;
const std::array<Feature, kFeatureCount>& all_features();
std::string_view to_string(Feature f);
std::optional<Feature> parse_feature(std::string_view name);

struct LanguageVector {
    std::string code;  // ISO 639-3
    std::array<std::vector<double>, kFeatureCount> features;
};

/// 100 * cos(u, v). Throws on length mismatch or zero vectors.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// Rank 1 = least similar, rank N = most similar; ties broken by
/// language code ascending (lower code, lower rank).
std::map<std::string, int> rank_languages(const std::map<std::string, double>& sims);

struct SimilarityRow {
    std::string code;  // ISO 639-3 of the compared language
    std::array<double, kFeatureCount> sim{};   // percent
    std::array<int, kFeatureCount> rank{};
    double rank_score = 0.0;  // mean of the five ranks
};

double rank_score(const SimilarityRow& row);

/// Cosine similarity of every language to English across the five
/// feature spaces, with per-feature ranks and the averaged rank score.
/// Rows come back sorted by rank score descending.
std::vector<SimilarityRow> compute_similarity_table(
    const std::map<std::string, LanguageVector>& vectors,
    const std::string& reference = "eng");

/// Feature-vector file: sections headed by "language: <code>" followed by
/// five "<feature> <v1> <v2> ..." lines. Refuses vectors with missing
/// (non-numeric or absent) entries.
std::map<std::string, LanguageVector> load_language_vectors(const std::string& path);
std::map<std::string, LanguageVector> parse_language_vectors(std::istream& in);

/// ISO 639-1 <-> 639-3 for the evaluation languages.
std::optional<std::string> iso3_code(const std::string& iso1);
std::optional<std::string> iso1_code(const std::string& iso3);

struct LanguageResult {
    double zero_shot_f1 = 0.0;
    double few_shot_f1 = 0.0;
};

struct GroupCell {
    std::string group;    // e.g. "IE/few"
    std::vector<double> values;
    double mean = 0.0;
    bool empty_flagged = false;
};

struct ScatterPoint {
    std::string code;
    double rank_score = 0.0;
    double zero_shot_f1 = 0.0;
    double few_shot_f1 = 0.0;
    double gain = 0.0;  // few - zero
};

struct GroupedReport {
    std::vector<GroupCell> by_family;        // {IE, non-IE} x {zero, few}
    std::vector<GroupCell> by_script_share;  // {known, unknown} x {H, L} x {zero, few}
    std::vector<ScatterPoint> scatter;
};

/// Stratifies per-language F1 pairs by family and by script/corpus-share
/// class, and pairs each language's few-zero gain with its rank score.
/// Throws naming any code missing from the metadata.
GroupedReport group_report(const std::map<std::string, LanguageResult>& results,
                           const LanguageMetaMap& meta,
                           const std::map<std::string, double>& rank_scores_iso3 = {});

void write_similarity_csv(std::ostream& out, std::span<const SimilarityRow> rows,
                          const std::string& reference = "eng");
void write_group_csv(std::ostream& out, const GroupedReport& report);
void write_scatter_csv(std::ostream& out, const GroupedReport& report);

}  // namespace postag
