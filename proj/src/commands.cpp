#include "postag/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "postag/analysis.hpp"
#include "postag/metrics.hpp"
#include "postag/tagger.hpp"

namespace fs = std::filesystem;

namespace postag {

namespace {

struct LanguageRun {
    std::string language;
    std::vector<Prediction> predictions;
    EvalReport report;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Demonstration> demos_for(const RunConfig& config) {
    if (config.shots == 0) return {};
    std::vector<Sentence> train =
        parse_conllu_file(config.demo_corpus, {.language = "en", .require_gold_tags = false});
    std::vector<Demonstration> all = select_fewshot_examples(train, config.seed);
    if (static_cast<std::size_t>(config.shots) < all.size())
        all.resize(static_cast<std::size_t>(config.shots));
    return all;
}

std::vector<Sentence> iterative_demo_sentences(const std::vector<Demonstration>& demos) {
    std::vector<Sentence> sentences;
    sentences.reserve(demos.size());
    for (const Demonstration& d : demos) {
        if (!d.context.fully_tagged())
            throw PromptError("iterative demonstrations need fully tagged sentences; '" +
                              d.context.source_id + "' has untagged tokens");
        sentences.push_back(d.context);
    }
    return sentences;
}

LanguageRun run_language(const RunConfig& config, const std::string& language,
                         const std::vector<Demonstration>& demos,
                         CompletionBackend& backend) {
    fs::path corpus_path = fs::path(config.corpus_dir) / (language + ".conllu");
    std::vector<Sentence> corpus = parse_conllu_file(
        corpus_path.string(), {.language = language, .require_gold_tags = true});
    if (corpus.empty()) throw Error("no sentences in " + corpus_path.string());
    std::vector<Sentence> sample = sample_instances(corpus, config.sample_size, config.seed);

    const PromptTemplate tmpl = config.prompt_template();
    TaggerOptions opts;
    opts.gen_max_tokens = config.gen_max_tokens;

    LanguageRun run;
    run.language = language;
    run.predictions.reserve(sample.size());

    if (config.method == Method::Decom) {
        std::string prefix = build_demonstrations(demos, config.instruction(), tmpl);
        for (const Sentence& sentence : sample) {
            run.predictions.push_back(
                config.mode == Mode::Prob
                    ? tag_decomposed_prob(sentence, prefix, backend, opts, tmpl)
                    : tag_decomposed_gen(sentence, prefix, backend, opts, tmpl));
        }
    } else {
        std::vector<Sentence> demo_sentences = iterative_demo_sentences(demos);
        for (const Sentence& sentence : sample) {
            run.predictions.push_back(tag_iterative(sentence, demo_sentences,
                                                    config.instruction(), backend, opts));
        }
    }
    run.report = evaluate_predictions(run.predictions, language);
    return run;
}

void write_language_outputs(const RunConfig& config, const LanguageRun& run) {
    fs::path dir = fs::path(config.output_dir) / run_subdir(config, run.language);
    fs::create_directories(dir);

    std::ostringstream predictions, timings, report_csv;
    write_predictions_jsonl(predictions, run.predictions);
    write_timings_jsonl(timings, run.predictions);
    std::vector<EvalReport> single = {run.report};
    write_report_csv(report_csv, single);

    atomic_write_file((dir / "predictions.jsonl").string(), predictions.str());
    atomic_write_file((dir / "timings.jsonl").string(), timings.str());
    atomic_write_file((dir / "report.csv").string(), report_csv.str());
    atomic_write_file((dir / "report.json").string(), report_to_json(run.report));

    // Volatile run metadata (clock time, total latency) lives here, never
    // in the dumps, so reruns stay byte-identical.
    double total_ms = 0.0;
    std::size_t requests = 0, failures = 0;
    for (const Prediction& p : run.predictions) {
        total_ms += p.wall_time.count();
        requests += p.request_count;
        failures += p.extraction_failures;
    }
    nlohmann::json meta = {
        {"config", nlohmann::json::parse(config.to_json_string())},
        {"language", run.language},
        {"unix_time", std::chrono::duration_cast<std::chrono::seconds>(
                          std::chrono::system_clock::now().time_since_epoch())
                          .count()},
        {"backend_wall_time_ms", total_ms},
        {"requests", requests},
        {"extraction_failures", failures},
    };
    atomic_write_file((dir / "run_meta.json").string(), meta.dump(2));
}

}  // namespace

void atomic_write_file(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

const std::vector<std::string>& default_ablation_languages() {
    static const std::vector<std::string> langs = {"en", "de", "el", "fa",
                                                   "hi", "nl", "ru", "zh"};
    return langs;
}

int cmd_evaluate(const RunConfig& config) {
    config.validate();
    std::shared_ptr<CompletionBackend> backend = make_backend(config.backend);
    std::vector<Demonstration> demos = demos_for(config);

    std::vector<EvalReport> reports;
    std::vector<std::string> failed;
    for (const std::string& language : config.languages) {
        try {
            LanguageRun run = run_language(config, language, demos, *backend);
            write_language_outputs(config, run);
            reports.push_back(run.report);
            std::cout << language << ": weighted_f1=" << run.report.weighted_f1
                      << " accuracy=" << run.report.accuracy
                      << " tokens=" << run.report.n_tokens << "\n";
        } catch (const Error& e) {
            failed.push_back(language);
            std::cerr << language << ": FAILED: " << e.what() << "\n";
        }
    }

    if (!reports.empty()) {
        AggregateReport agg = aggregate(reports);
        std::ostringstream summary;
        write_report_csv(summary, reports);
        summary << "\n";
        if (agg.english_f1) summary << "en," << agg.english_f1.value() << "\n";
        if (agg.multilingual_f1) summary << "mult.," << agg.multilingual_f1.value() << "\n";
        summary << "avg.," << agg.overall_f1 << "\n";
        fs::path root = fs::path(config.output_dir) / run_root(config);
        fs::create_directories(root);
        atomic_write_file((root / "summary.csv").string(), summary.str());
        if (agg.english_f1)
            std::cout << "en: " << *agg.english_f1 << "\n";
        if (agg.multilingual_f1)
            std::cout << "mult.: " << *agg.multilingual_f1 << "\n";
    }
    return failed.empty() ? kExitOk : kExitEvalFailure;
}

int cmd_ablate(const RunConfig& base, const std::vector<int>& k_values) {
    if (k_values.empty()) throw ConfigError("ablation needs a non-empty k list");
    RunConfig config = base;
    if (config.languages.empty()) config.languages = default_ablation_languages();
    config.validate();

    // rows: k, columns: language
    std::map<int, std::map<std::string, double>> matrix;
    bool any_failed = false;
    for (int k : k_values) {
        RunConfig run_config = config;
        run_config.shots = k;
        run_config.with_instruction = k == 0;  // zero-shot always carries the instruction
        if (k > 0 && run_config.demo_corpus.empty())
            throw ConfigError("ablation with k>0 needs a demonstration corpus");
        std::shared_ptr<CompletionBackend> backend = make_backend(run_config.backend);
        std::vector<Demonstration> demos = demos_for(run_config);
        for (const std::string& language : run_config.languages) {
            try {
                LanguageRun run = run_language(run_config, language, demos, *backend);
                write_language_outputs(run_config, run);
                matrix[k][language] = run.report.weighted_f1;
            } catch (const Error& e) {
                any_failed = true;
                std::cerr << "k=" << k << " " << language << ": FAILED: " << e.what()
                          << "\n";
            }
        }
    }

    std::ostringstream csv;
    csv << "k";
    for (const std::string& language : config.languages) csv << ',' << language;
    csv << ",avg.\n";
    for (const auto& [k, row] : matrix) {
        csv << k;
        double sum = 0.0;
        std::size_t count = 0;
        for (const std::string& language : config.languages) {
            auto it = row.find(language);
            if (it != row.end()) {
                csv << ',' << it->second;
                sum += it->second;
                ++count;
            } else {
                csv << ",";
            }
        }
        csv << ',' << (count ? sum / static_cast<double>(count) : 0.0) << "\n";
    }
    fs::create_directories(config.output_dir);
    atomic_write_file((fs::path(config.output_dir) / "ablation.csv").string(), csv.str());
    std::cout << csv.str();
    return any_failed ? kExitEvalFailure : kExitOk;
}

int cmd_similarity(const std::string& vectors_path, const std::string& output_csv) {
    std::map<std::string, LanguageVector> vectors = load_language_vectors(vectors_path);
    if (!vectors.count("eng"))
        throw ConfigError("vector file lacks the English reference entry 'eng'");
    if (vectors.size() != 38)
        throw ConfigError("vector file must cover English plus all 37 target languages; got " +
                          std::to_string(vectors.size()) + " entries");
    std::vector<SimilarityRow> rows = compute_similarity_table(vectors);
    std::ostringstream csv;
    write_similarity_csv(csv, rows);
    if (output_csv.empty()) {
        std::cout << csv.str();
    } else {
        fs::create_directories(fs::path(output_csv).parent_path().empty()
                                   ? fs::path(".")
                                   : fs::path(output_csv).parent_path());
        atomic_write_file(output_csv, csv.str());
    }
    return kExitOk;
}

namespace {

struct JoinedRun {
    // (language, source_id) -> record
    std::map<std::pair<std::string, std::string>, DumpRecord> records;
    double total_wall_ms = 0.0;
};

JoinedRun load_run_dir(const std::string& dir) {
    JoinedRun run;
    bool any = false;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.path().filename() != "predictions.jsonl") continue;
        any = true;
        std::ifstream in(entry.path());
        std::vector<DumpRecord> records = read_predictions_jsonl(in);
        std::map<std::string, double> timings;
        fs::path timing_path = entry.path().parent_path() / "timings.jsonl";
        if (fs::exists(timing_path)) {
            std::ifstream tin(timing_path);
            for (auto& [id, ms] : read_timings_jsonl(tin)) timings[id] = ms;
        }
        for (DumpRecord& r : records) {
            auto it = timings.find(r.source_id);
            if (it != timings.end()) r.wall_time_ms = it->second;
            run.total_wall_ms += r.wall_time_ms;
            run.records[{r.language, r.source_id}] = std::move(r);
        }
    }
    if (!any) throw Error("no predictions.jsonl found under " + dir);
    return run;
}

std::vector<PosTag> parse_tag_list(const std::vector<std::string>& names) {
    std::vector<PosTag> tags;
    tags.reserve(names.size());
    for (const std::string& name : names) {
        std::optional<PosTag> tag = parse_tag(name);
        if (!tag) throw Error("prediction dump contains unknown tag '" + name + "'");
        tags.push_back(*tag);
    }
    return tags;
}

}  // namespace

namespace {

// language -> weighted F1, read from the per-language report files.
std::map<std::string, double> load_language_f1(const std::string& run_dir) {
    std::map<std::string, double> f1;
    for (const auto& entry : fs::recursive_directory_iterator(run_dir)) {
        if (entry.path().filename() != "report.csv") continue;
        std::ifstream in(entry.path());
        std::string header, row;
        if (!std::getline(in, header) || !std::getline(in, row)) continue;
        std::size_t c1 = row.find(','), c2 = row.find(',', c1 + 1);
        std::size_t c3 = row.find(',', c2 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) continue;
        std::string language = row.substr(0, c1);
        f1[language] = std::stod(row.substr(c2 + 1, c3 - c2 - 1));
    }
    if (f1.empty()) throw Error("no report.csv found under " + run_dir);
    return f1;
}

}  // namespace

int cmd_group(const std::string& zero_run_dir, const std::string& few_run_dir,
              const std::string& meta_path, const std::string& vectors_path,
              const std::string& out_dir) {
    std::map<std::string, double> zero_f1 = load_language_f1(zero_run_dir);
    std::map<std::string, double> few_f1 = load_language_f1(few_run_dir);
    if (zero_f1.size() != few_f1.size())
        throw Error("zero- and few-shot runs cover different language sets");

    std::map<std::string, LanguageResult> results;
    for (const auto& [language, zero] : zero_f1) {
        auto it = few_f1.find(language);
        if (it == few_f1.end())
            throw Error("language " + language + " missing from the few-shot run");
        results[language] = {zero, it->second};
    }

    LanguageMetaMap meta = load_language_meta(meta_path);
    std::map<std::string, double> rank_scores;
    if (!vectors_path.empty()) {
        auto vectors = load_language_vectors(vectors_path);
        for (const SimilarityRow& row : compute_similarity_table(vectors))
            rank_scores[row.code] = row.rank_score;
    }

    GroupedReport report = group_report(results, meta, rank_scores);
    std::ostringstream groups, scatter;
    write_group_csv(groups, report);
    write_scatter_csv(scatter, report);
    if (out_dir.empty()) {
        std::cout << groups.str() << "\n" << scatter.str();
    } else {
        fs::create_directories(out_dir);
        atomic_write_file((fs::path(out_dir) / "groups.csv").string(), groups.str());
        atomic_write_file((fs::path(out_dir) / "scatter.csv").string(), scatter.str());
    }
    return kExitOk;
}

int cmd_compare(const std::string& iter_run_dir, const std::string& decom_run_dir,
                const std::string& output_csv, bool few_shot) {
    JoinedRun iter_run = load_run_dir(iter_run_dir);
    JoinedRun decom_run = load_run_dir(decom_run_dir);

    if (iter_run.records.size() != decom_run.records.size())
        throw Error("join error: runs cover different sentence counts (" +
                    std::to_string(iter_run.records.size()) + " vs " +
                    std::to_string(decom_run.records.size()) + ")");
    for (const auto& [key, _] : iter_run.records)
        if (!decom_run.records.count(key))
            throw Error("join error: sentence " + key.first + "/" + key.second +
                        " missing from the decomposed run");

    // Pool per language, then score both runs on the joined set.
    std::map<std::string, std::pair<std::vector<PosTag>, std::vector<PosTag>>> iter_pool,
        decom_pool;
    for (const auto& [key, iter_rec] : iter_run.records) {
        const DumpRecord& decom_rec = decom_run.records.at(key);
        std::vector<PosTag> gold = parse_tag_list(iter_rec.gold);
        auto& ip = iter_pool[key.first];
        auto& dp = decom_pool[key.first];
        auto ipred = parse_tag_list(iter_rec.predicted);
        auto dpred = parse_tag_list(decom_rec.predicted);
        ip.first.insert(ip.first.end(), gold.begin(), gold.end());
        ip.second.insert(ip.second.end(), ipred.begin(), ipred.end());
        dp.first.insert(dp.first.end(), gold.begin(), gold.end());
        dp.second.insert(dp.second.end(), dpred.begin(), dpred.end());
    }

    std::ostringstream csv;
    csv << "language,iter_f1,decom_f1,delta\n";
    for (const auto& [language, ip] : iter_pool) {
        EvalReport iter_report = weighted_f1_report(ip.first, ip.second, language);
        const auto& dp = decom_pool.at(language);
        EvalReport decom_report = weighted_f1_report(dp.first, dp.second, language);
        csv << language << ',' << iter_report.weighted_f1 << ','
            << decom_report.weighted_f1 << ','
            << decom_report.weighted_f1 - iter_report.weighted_f1 << "\n";
    }

    SpeedupReport speed = speedup_from_times(
        iter_run.total_wall_ms, decom_run.total_wall_ms, TagMode::DecomProb,
        few_shot ? ShotSetting::FewShot : ShotSetting::ZeroShot);
    csv << "\nspeedup," << speed.ratio << "\n";

    if (output_csv.empty()) {
        std::cout << csv.str();
    } else {
        atomic_write_file(output_csv, csv.str());
        std::cout << "speedup: " << speed.ratio << "x ("
                  << (few_shot ? "few" : "zero") << "-shot)\n";
    }
    return kExitOk;
}

}  // namespace postag
