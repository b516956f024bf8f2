#include "postag/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace postag {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "syntactic", "phonological", "inventory", "family", "geographic",
};

// The 38 evaluation languages.
constexpr std::array<std::pair<std::string_view, std::string_view>, 38> kIsoPairs = {{
    {"af", "afr"}, {"ar", "ara"}, {"bg", "bul"}, {"de", "deu"}, {"el", "ell"},
    {"en", "eng"}, {"es", "spa"}, {"et", "est"}, {"eu", "eus"}, {"fa", "fas"},
    {"fi", "fin"}, {"fr", "fra"}, {"he", "heb"}, {"hi", "hin"}, {"hu", "hun"},
    {"id", "ind"}, {"it", "ita"}, {"ja", "jpn"}, {"kk", "kaz"}, {"ko", "kor"},
    {"lt", "lit"}, {"mr", "mar"}, {"nl", "nld"}, {"pl", "pol"}, {"pt", "por"},
    {"ro", "ron"}, {"ru", "rus"}, {"ta", "tam"}, {"te", "tel"}, {"th", "tha"},
    {"tl", "tgl"}, {"tr", "tur"}, {"uk", "ukr"}, {"ur", "urd"}, {"vi", "vie"},
    {"wo", "wol"}, {"yo", "yor"}, {"zh", "zho"},
}};

std::string fmt(double value, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

}  // namespace

const std::array<Feature, kFeatureCount>& all_features() {
    static const std::array<Feature, kFeatureCount> features = {
        Feature::Syntactic, Feature::Phonological, Feature::Inventory,
        Feature::Family, Feature::Geographic,
    };
    return features;
}

std::string_view to_string(Feature f) { return kFeatureNames[static_cast<std::size_t>(f)]; }

std::optional<Feature> parse_feature(std::string_view name) {
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        if (kFeatureNames[i] == name) return static_cast<Feature>(i);
    return std::nullopt;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw Error("cosine similarity: vector lengths differ (" +
                    std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
    if (u.empty()) throw Error("cosine similarity: empty vectors");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw Error("cosine similarity: zero vector");
    return 100.0 * dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::map<std::string, int> rank_languages(const std::map<std::string, double>& sims) {
    std::vector<std::pair<std::string, double>> order(sims.begin(), sims.end());
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    std::map<std::string, int> ranks;
    for (std::size_t i = 0; i < order.size(); ++i)
        ranks[order[i].first] = static_cast<int>(i) + 1;
    return ranks;
}

double rank_score(const SimilarityRow& row) {
    double sum = 0.0;
    for (int r : row.rank) sum += r;
    return sum / static_cast<double>(kFeatureCount);
}

std::vector<SimilarityRow> compute_similarity_table(
    const std::map<std::string, LanguageVector>& vectors, const std::string& reference) {
    auto ref_it = vectors.find(reference);
    if (ref_it == vectors.end())
        throw Error("similarity: reference language '" + reference + "' not in vector file");
    const LanguageVector& ref = ref_it->second;

    std::map<std::string, SimilarityRow> rows;
    std::array<std::map<std::string, double>, kFeatureCount> sims_by_feature;
    for (const auto& [code, vec] : vectors) {
        if (code == reference) continue;
        SimilarityRow row;
        row.code = code;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            double sim = cosine_similarity(ref.features[f], vec.features[f]);
            row.sim[f] = sim;
            sims_by_feature[f][code] = sim;
        }
        rows[code] = std::move(row);
    }

    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        std::map<std::string, int> ranks = rank_languages(sims_by_feature[f]);
        for (auto& [code, row] : rows) row.rank[f] = ranks[code];
    }

    std::vector<SimilarityRow> out;
    out.reserve(rows.size());
    for (auto& [code, row] : rows) {
        row.rank_score = rank_score(row);
        out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end(), [](const SimilarityRow& a, const SimilarityRow& b) {
        if (a.rank_score != b.rank_score) return a.rank_score > b.rank_score;
        return a.code < b.code;
    });
    return out;
}

std::map<std::string, LanguageVector> parse_language_vectors(std::istream& in) {
    std::map<std::string, LanguageVector> vectors;
    LanguageVector current;
    std::array<bool, kFeatureCount> seen{};
    bool open = false;
    std::size_t line_no = 0;

    auto flush = [&] {
        if (!open) return;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            if (!seen[f])
                throw ParseError("language '" + current.code + "' is missing the " +
                                 std::string(kFeatureNames[f]) + " vector");
        }
        vectors[current.code] = std::move(current);
        current = LanguageVector{};
        seen.fill(false);
        open = false;
    };

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        static constexpr std::string_view kHeader = "language:";
        if (line.rfind(kHeader, 0) == 0) {
            flush();
            std::string code = line.substr(kHeader.size());
            code.erase(0, code.find_first_not_of(' '));
            if (code.empty()) throw ParseError("empty language code", line_no);
            current.code = code;
            open = true;
            continue;
        }
        if (!open) throw ParseError("feature line before any language header", line_no);
        std::istringstream fields(line);
        std::string name;
        fields >> name;
        std::optional<Feature> feature = parse_feature(name);
        if (!feature) throw ParseError("unknown feature '" + name + "'", line_no);
        std::vector<double> values;
        std::string field;
        while (fields >> field) {
            try {
                std::size_t used = 0;
                double v = std::stod(field, &used);
                if (used != field.size() || std::isnan(v))
                    throw std::invalid_argument(field);
                values.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("missing or non-numeric entry '" + field + "' in " +
                                     name + " vector of '" + current.code + "'",
                                 line_no);
            }
        }
        if (values.empty())
            throw ParseError("empty " + name + " vector for '" + current.code + "'", line_no);
        current.features[static_cast<std::size_t>(*feature)] = std::move(values);
        seen[static_cast<std::size_t>(*feature)] = true;
    }
    flush();
    return vectors;
}

std::map<std::string, LanguageVector> load_language_vectors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open language vector file: " + path);
    return parse_language_vectors(in);
}

std::optional<std::string> iso3_code(const std::string& iso1) {
    for (const auto& [one, three] : kIsoPairs)
        if (one == iso1) return std::string(three);
    return std::nullopt;
}

std::optional<std::string> iso1_code(const std::string& iso3) {
    for (const auto& [one, three] : kIsoPairs)
        if (three == iso3) return std::string(one);
    return std::nullopt;
}

GroupedReport group_report(const std::map<std::string, LanguageResult>& results,
                           const LanguageMetaMap& meta,
                           const std::map<std::string, double>& rank_scores_iso3) {
    std::vector<std::string> missing;
    for (const auto& [code, _] : results)
        if (!meta.contains(code)) missing.push_back(code);
    if (!missing.empty()) {
        std::string joined;
        for (const std::string& c : missing) joined += (joined.empty() ? "" : ", ") + c;
        throw Error("group report: no metadata for: " + joined);
    }

    GroupedReport report;
    auto add_cells = [](std::vector<GroupCell>& cells,
                        const std::map<std::string, std::vector<double>>& buckets) {
        for (const auto& [group, values] : buckets) {
            GroupCell cell;
            cell.group = group;
            cell.values = values;
            if (values.empty()) {
                cell.empty_flagged = true;
            } else {
                double sum = 0.0;
                for (double v : values) sum += v;
                cell.mean = sum / static_cast<double>(values.size());
            }
            cells.push_back(std::move(cell));
        }
    };

    std::map<std::string, std::vector<double>> family_buckets = {
        {"IE/zero", {}}, {"IE/few", {}}, {"non-IE/zero", {}}, {"non-IE/few", {}}};
    std::map<std::string, std::vector<double>> script_buckets;
    for (const char* script : {"known", "unknown"})
        for (const char* share : {"H", "L"})
            for (const char* setting : {"zero", "few"})
                script_buckets[std::string(script) + "/" + share + "/" + setting] = {};

    for (const auto& [code, result] : results) {
        const LanguageMeta& m = meta.lookup(code);
        bool ie = m.family == "Indo-European";
        family_buckets[ie ? "IE/zero" : "non-IE/zero"].push_back(result.zero_shot_f1);
        family_buckets[ie ? "IE/few" : "non-IE/few"].push_back(result.few_shot_f1);
        std::string key = std::string(m.script_known ? "known" : "unknown") + "/" +
                          (m.share == CorpusShare::High ? "H" : "L");
        script_buckets[key + "/zero"].push_back(result.zero_shot_f1);
        script_buckets[key + "/few"].push_back(result.few_shot_f1);

        ScatterPoint point;
        point.code = code;
        point.zero_shot_f1 = result.zero_shot_f1;
        point.few_shot_f1 = result.few_shot_f1;
        point.gain = result.few_shot_f1 - result.zero_shot_f1;
        if (std::optional<std::string> three = iso3_code(code)) {
            auto it = rank_scores_iso3.find(*three);
            if (it != rank_scores_iso3.end()) point.rank_score = it->second;
        }
        report.scatter.push_back(std::move(point));
    }
    add_cells(report.by_family, family_buckets);
    add_cells(report.by_script_share, script_buckets);
    return report;
}

void write_similarity_csv(std::ostream& out, std::span<const SimilarityRow> rows,
                          const std::string& reference) {
    out << "pair";
    for (Feature f : all_features()) {
        std::string_view name = to_string(f);
        out << ',' << name.substr(0, 3) << ".," << name.substr(0, 3) << "_rank";
    }
    out << ",rank_score\n";
    for (const SimilarityRow& row : rows) {
        out << reference << '-' << row.code;
        for (std::size_t f = 0; f < kFeatureCount; ++f)
            out << ',' << fmt(row.sim[f], 2) << ',' << row.rank[f];
        out << ',' << fmt(row.rank_score, 1) << "\n";
    }
}

void write_group_csv(std::ostream& out, const GroupedReport& report) {
    out << "grouping,group,count,mean_f1,values\n";
    auto dump = [&](const char* grouping, const std::vector<GroupCell>& cells) {
        for (const GroupCell& cell : cells) {
            out << grouping << ',' << cell.group << ',' << cell.values.size() << ','
                << (cell.empty_flagged ? "empty" : fmt(cell.mean, 6)) << ',';
            for (std::size_t i = 0; i < cell.values.size(); ++i)
                out << (i ? " " : "") << fmt(cell.values[i], 6);
            out << "\n";
        }
    };
    dump("family", report.by_family);
    dump("script_share", report.by_script_share);
}

void write_scatter_csv(std::ostream& out, const GroupedReport& report) {
    out << "language,rank_score,zero_shot_f1,few_shot_f1,gain\n";
    for (const ScatterPoint& p : report.scatter)
        out << p.code << ',' << fmt(p.rank_score, 1) << ',' << fmt(p.zero_shot_f1, 6)
            << ',' << fmt(p.few_shot_f1, 6) << ',' << fmt(p.gain, 6) << "\n";
}

}  // namespace postag
