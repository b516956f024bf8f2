#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "postag/tagger.hpp"
#include "postag/tagset.hpp"

namespace postag {

struct TagStats {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;  // gold occurrences
};

struct EvalReport {
    std::array<TagStats, kTagCount> per_tag{};
    double weighted_f1 = 0.0;
    double accuracy = 0.0;
    std::array<std::array<std::size_t, kTagCount>, kTagCount> confusion{};  // [gold][pred]
    std::size_t n_tokens = 0;
    std::string language;
};

/// Per-tag precision/recall/F1 with the 0/0 -> 0 convention; weighted F1
/// weighs each tag's F1 by its gold support. Throws on length mismatch
/// or empty input.
EvalReport weighted_f1_report(std::span<const PosTag> gold, std::span<const PosTag> pred,
                              const std::string& language = "");

/// Pools every sentence of a language into one gold/pred pair.
EvalReport evaluate_predictions(std::span<const Prediction> predictions,
                                const std::string& language);

struct AggregateRow {
    std::string language;
    double weighted_f1 = 0.0;
    double accuracy = 0.0;
    std::size_t n_tokens = 0;
};

struct AggregateReport {
    std::vector<AggregateRow> rows;
    std::optional<double> english_f1;      // reported separately
    std::optional<double> multilingual_f1; // unweighted mean over non-English
    double overall_f1 = 0.0;
};

AggregateReport aggregate(std::span<const EvalReport> reports);

enum class ShotSetting { ZeroShot, FewShot };

struct SpeedupReport {
    std::map<TagMode, double> mode_times_ms;
    double ratio = 0.0;  // time(iter) / time(decom)
    ShotSetting setting = ShotSetting::ZeroShot;
};

/// Ratio of summed wall times over identical sentence sets. Throws when
/// the sentence sets differ or the decomposed time is zero.
SpeedupReport speedup(std::span<const Prediction> iter_predictions,
                      std::span<const Prediction> decom_predictions,
                      ShotSetting setting = ShotSetting::ZeroShot);

SpeedupReport speedup_from_times(double iter_total_ms, double decom_total_ms,
                                 TagMode decom_mode, ShotSetting setting);

/// CSV with one row per language: language, weighted_f1, accuracy,
/// n_tokens plus per-tag F1 columns.
void write_report_csv(std::ostream& out, std::span<const EvalReport> reports);

/// Full report (per-tag stats and confusion matrix) as a JSON document.
std::string report_to_json(const EvalReport& report);

}  // namespace postag
