#include "postag/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include <json.hpp>

namespace postag {

namespace {

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return buf;
}

}  // namespace

EvalReport weighted_f1_report(std::span<const PosTag> gold, std::span<const PosTag> pred,
                              const std::string& language) {
    if (gold.size() != pred.size())
        throw Error("weighted F1: gold/pred length mismatch (" +
                    std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) + ")");
    if (gold.empty()) throw Error("weighted F1: empty input");

    EvalReport report;
    report.language = language;
    report.n_tokens = gold.size();

    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        ++report.confusion[tag_index(gold[i])][tag_index(pred[i])];
        if (gold[i] == pred[i]) ++correct;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());

    double weighted_sum = 0.0;
    for (std::size_t t = 0; t < kTagCount; ++t) {
        std::size_t tp = report.confusion[t][t];
        std::size_t gold_count = 0, pred_count = 0;
        for (std::size_t o = 0; o < kTagCount; ++o) {
            gold_count += report.confusion[t][o];
            pred_count += report.confusion[o][t];
        }
        TagStats& stats = report.per_tag[t];
        stats.support = gold_count;
        stats.precision = pred_count ? static_cast<double>(tp) / pred_count : 0.0;
        stats.recall = gold_count ? static_cast<double>(tp) / gold_count : 0.0;
        stats.f1 = (stats.precision + stats.recall) > 0.0
                       ? 2.0 * stats.precision * stats.recall /
                             (stats.precision + stats.recall)
                       : 0.0;
        weighted_sum += static_cast<double>(gold_count) * stats.f1;
    }
    report.weighted_f1 = weighted_sum / static_cast<double>(gold.size());
    return report;
}

EvalReport evaluate_predictions(std::span<const Prediction> predictions,
                                const std::string& language) {
    std::vector<PosTag> gold, pred;
    for (const Prediction& p : predictions) {
        for (const Token& t : p.sentence.tokens) {
            if (!t.gold_tag)
                throw Error("sentence '" + p.sentence.source_id +
                            "' has untagged tokens; evaluation sets must be fully tagged");
            gold.push_back(*t.gold_tag);
        }
        pred.insert(pred.end(), p.predicted_tags.begin(), p.predicted_tags.end());
    }
    return weighted_f1_report(gold, pred, language);
}

AggregateReport aggregate(std::span<const EvalReport> reports) {
    if (reports.empty()) throw Error("aggregate: no reports");
    AggregateReport agg;
    double total = 0.0, non_english = 0.0;
    std::size_t non_english_count = 0;
    for (const EvalReport& r : reports) {
        agg.rows.push_back({r.language, r.weighted_f1, r.accuracy, r.n_tokens});
        total += r.weighted_f1;
        if (r.language == "en") {
            agg.english_f1 = r.weighted_f1;
        } else {
            non_english += r.weighted_f1;
            ++non_english_count;
        }
    }
    if (non_english_count)
        agg.multilingual_f1 = non_english / static_cast<double>(non_english_count);
    agg.overall_f1 = total / static_cast<double>(reports.size());
    return agg;
}

SpeedupReport speedup_from_times(double iter_total_ms, double decom_total_ms,
                                 TagMode decom_mode, ShotSetting setting) {
    if (decom_total_ms <= 0.0)
        throw Error("speedup: decomposed wall time is zero");
    if (iter_total_ms <= 0.0)
        throw Error("speedup: iterative wall time is zero");
    SpeedupReport report;
    report.mode_times_ms[TagMode::Iter] = iter_total_ms;
    report.mode_times_ms[decom_mode] = decom_total_ms;
    report.ratio = iter_total_ms / decom_total_ms;
    report.setting = setting;
    return report;
}

SpeedupReport speedup(std::span<const Prediction> iter_predictions,
                      std::span<const Prediction> decom_predictions,
                      ShotSetting setting) {
    auto key_set = [](std::span<const Prediction> preds) {
        std::set<std::pair<std::string, std::string>> keys;
        for (const Prediction& p : preds)
            keys.emplace(p.sentence.language, p.sentence.source_id);
        return keys;
    };
    if (key_set(iter_predictions) != key_set(decom_predictions))
        throw Error("speedup: the two runs cover different sentence sets");

    double iter_total = 0.0, decom_total = 0.0;
    TagMode decom_mode = TagMode::DecomProb;
    for (const Prediction& p : iter_predictions) iter_total += p.wall_time.count();
    for (const Prediction& p : decom_predictions) {
        decom_total += p.wall_time.count();
        decom_mode = p.mode;
    }
    return speedup_from_times(iter_total, decom_total, decom_mode, setting);
}

void write_report_csv(std::ostream& out, std::span<const EvalReport> reports) {
    out << "language,n_tokens,weighted_f1,accuracy";
    for (PosTag tag : all_tags()) out << ",f1_" << to_string(tag);
    out << "\n";
    for (const EvalReport& r : reports) {
        out << r.language << ',' << r.n_tokens << ',' << fmt(r.weighted_f1) << ','
            << fmt(r.accuracy);
        for (const TagStats& s : r.per_tag) out << ',' << fmt(s.f1);
        out << "\n";
    }
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["language"] = report.language;
    j["n_tokens"] = report.n_tokens;
    j["weighted_f1"] = report.weighted_f1;
    j["accuracy"] = report.accuracy;
    nlohmann::json per_tag = nlohmann::json::object();
    for (std::size_t t = 0; t < kTagCount; ++t) {
        const TagStats& s = report.per_tag[t];
        per_tag[std::string(to_string(static_cast<PosTag>(t)))] = {
            {"precision", s.precision},
            {"recall", s.recall},
            {"f1", s.f1},
            {"support", s.support},
        };
    }
    j["per_tag"] = std::move(per_tag);
    nlohmann::json confusion = nlohmann::json::array();
    for (const auto& row : report.confusion) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t count : row) r.push_back(count);
        confusion.push_back(std::move(r));
    }
    j["confusion"] = std::move(confusion);
    return j.dump(2);
}

}  // namespace postag
