#pragma once

#include <string>
#include <vector>

#include "postag/run_config.hpp"

namespace postag {

/// Exit-code contract shared by every subcommand: 0 success, 1
/// evaluation failures, 2 configuration errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEvalFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Runs the configured method over sampled sentences of every language;
/// writes prediction/timing dumps, per-language reports and a summary
/// under output_dir. Nonzero when any language fails entirely.
int cmd_evaluate(const RunConfig& config);

/// One evaluation per k; writes the k x language weighted-F1 matrix to
/// <output_dir>/ablation.csv.
int cmd_ablate(const RunConfig& config, const std::vector<int>& k_values);

/// Emits the full language-similarity table (per-feature cosine, ranks,
/// rank score). Empty output path prints to stdout.
int cmd_similarity(const std::string& vectors_path, const std::string& output_csv = "");

/// Joins two run directories over identical sentence ids; writes paired
/// per-language F1 plus the iter/decom speedup ratio.
int cmd_compare(const std::string& iter_run_dir, const std::string& decom_run_dir,
                const std::string& output_csv = "", bool few_shot = false);

/// Stratifies a zero-shot and a few-shot run by language family and
/// script/corpus-share class and pairs per-language gains with rank
/// scores; writes groups.csv and scatter.csv under out_dir.
int cmd_group(const std::string& zero_run_dir, const std::string& few_run_dir,
              const std::string& meta_path, const std::string& vectors_path,
              const std::string& out_dir);

/// Write-temp-then-rename so concurrent sweeps never observe partial files.
void atomic_write_file(const std::string& path, const std::string& content);

/// The default ablation language subset.
const std::vector<std::string>& default_ablation_languages();

}  // namespace postag
