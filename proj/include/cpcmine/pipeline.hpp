#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpcmine/counts.hpp"

namespace cpcmine {

struct PipelineConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path catalog;
    std::filesystem::path light_verbs;     // empty: builtin list
    std::filesystem::path person_lexicon;  // empty: no lexicon
    int w_max = 3;
    WindowMode window_mode = WindowMode::Cumulative;
    long min_support = 2;
    long high_total = 3000;
    long low_total = 6000;
    bool include_self_pairs = false;
    unsigned seed = 0;
    std::filesystem::path output_dir;

    // Checks ranges and that every referenced path exists.
    void validate() const;
};

// JSON config file. Relative paths are resolved against the file's directory;
// corpus_dir, catalog, output_dir and seed are required, the rest defaulted.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
std::string pipeline_config_json(const PipelineConfig& config);

struct StageRecord {
    std::string name;
    std::string status;     // completed | skipped | failed | stale
    std::string input_key;  // digest over the stage's parameters and inputs
    std::map<std::string, std::string> outputs;  // out_dir-relative path -> digest
    double seconds = 0.0;
    std::string error;
};

struct RunManifest {
    bool completed = false;
    std::string config_digest;
    std::map<std::string, std::string> inputs;  // absolute path -> digest
    std::vector<StageRecord> stages;

    const StageRecord* find_stage(const std::string& name) const;
};

std::string manifest_json(const RunManifest& manifest);
RunManifest parse_manifest(const std::string& text, const std::string& source);
RunManifest load_manifest(const std::filesystem::path& out_dir);

// A stage aborted the run. `validation` distinguishes bad input data from
// execution failures so the CLI can pick its exit code.
class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, const std::string& message, bool validation);

    const std::string& stage() const { return stage_; }
    bool validation() const { return validation_; }

private:
    std::string stage_;
    bool validation_ = false;
};

// Runs ingest, extract, count, score, rank and eval_gen in order, writing
// every artifact plus manifest.json under config.output_dir. Stages whose
// inputs and parameters match the previous manifest are skipped unless
// `force`. A lock file in the output directory rejects concurrent runs.
RunManifest run_pipeline(const PipelineConfig& config, bool force = false);

// Single-stage workers behind run_pipeline, also driven directly by the CLI
// subcommands. Each reads and writes only the paths it is given.
namespace stages {

void ingest(const std::filesystem::path& corpus_dir, const std::filesystem::path& catalog,
            const std::filesystem::path& out_store);
void extract(const std::filesystem::path& store, const std::filesystem::path& light_verbs,
             const std::filesystem::path& person_lexicon,
             const std::filesystem::path& out_events);
void count(const std::filesystem::path& events, const std::filesystem::path& catalog,
           int w_max, WindowMode mode, const std::filesystem::path& counts_dir,
           const std::filesystem::path& profiles_dir);
void score(const std::filesystem::path& counts_dir,
           const std::filesystem::path& profiles_dir, long min_support,
           const std::filesystem::path& out_scores);
void rank(const std::filesystem::path& scores, const std::filesystem::path& catalog,
          const std::filesystem::path& profiles_dir, long high_total, long low_total,
          bool include_self_pairs, const std::filesystem::path& out_dir);
void eval_gen(const std::filesystem::path& high_pairs,
              const std::filesystem::path& low_pairs, unsigned seed,
              const std::filesystem::path& eval_dir);

}  // namespace stages

struct ReportBundle {
    std::string text;
    std::string json;
};

// Summarizes a completed run directory: corpus table per scope, top pairs,
// top-30 overlap matrix, selection quotas, eval item counts.
ReportBundle render_report(const std::filesystem::path& out_dir, int top_k = 7,
                           long overlap_k = 30);

}  // namespace cpcmine
