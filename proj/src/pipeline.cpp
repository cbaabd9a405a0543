#include "cpcmine/pipeline.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "cpcmine/annotation.hpp"
#include "cpcmine/eval.hpp"
#include "cpcmine/io_util.hpp"
#include "cpcmine/ranking.hpp"
#include "cpcmine/scoring.hpp"

namespace fs = std::filesystem;

namespace cpcmine {

namespace {

fs::path resolve_against(const fs::path& base, const std::string& value) {
    fs::path p(value);
    if (p.is_absolute()) {
        return p.lexically_normal();
    }
    return (base / p).lexically_normal();
}

std::string path_or_empty(const fs::path& p) { return p.empty() ? "" : p.string(); }

}  // namespace

void PipelineConfig::validate() const {
    if (corpus_dir.empty() || catalog.empty() || output_dir.empty()) {
        throw std::invalid_argument("config needs corpus_dir, catalog and output_dir");
    }
    if (!fs::is_directory(corpus_dir)) {
        throw std::invalid_argument("corpus_dir is not a directory: " +
                                    corpus_dir.string());
    }
    if (!fs::is_regular_file(catalog)) {
        throw std::invalid_argument("catalog file not found: " + catalog.string());
    }
    for (const auto* optional : {&light_verbs, &person_lexicon}) {
        if (!optional->empty() && !fs::is_regular_file(*optional)) {
            throw std::invalid_argument("word list not found: " + optional->string());
        }
    }
    if (w_max < 1) {
        throw std::invalid_argument("w_max must be at least 1");
    }
    if (min_support < 1) {
        throw std::invalid_argument("min_support must be at least 1");
    }
    if (high_total <= 0 || low_total <= 0) {
        throw std::invalid_argument("selection totals must be positive");
    }
}

PipelineConfig load_pipeline_config(const fs::path& path) {
    const std::string source = path.string();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(source, 0, err.what());
    }
    if (!j.is_object()) {
        throw ParseError(source, 0, "config must be a JSON object");
    }

    static const std::set<std::string> known = {
        "corpus_dir", "catalog",    "light_verbs",        "person_lexicon",
        "w_max",      "window_mode", "min_support",       "high_total",
        "low_total",  "seed",       "include_self_pairs", "output_dir"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) {
            throw ParseError(source, 0, "unknown config key '" + key + "'");
        }
    }
    for (const char* required : {"corpus_dir", "catalog", "output_dir", "seed"}) {
        if (!j.contains(required)) {
            throw ParseError(source, 0, std::string("config must set ") + required);
        }
    }

    PipelineConfig config;
    fs::path base = fs::absolute(path).parent_path();
    try {
        config.corpus_dir = resolve_against(base, j["corpus_dir"].get<std::string>());
        config.catalog = resolve_against(base, j["catalog"].get<std::string>());
        if (j.contains("light_verbs")) {
            config.light_verbs = resolve_against(base, j["light_verbs"].get<std::string>());
        }
        if (j.contains("person_lexicon")) {
            config.person_lexicon =
                resolve_against(base, j["person_lexicon"].get<std::string>());
        }
        config.output_dir = resolve_against(base, j["output_dir"].get<std::string>());
        if (j.contains("w_max")) {
            config.w_max = j["w_max"].get<int>();
        }
        if (j.contains("window_mode")) {
            config.window_mode = window_mode_from_name(j["window_mode"].get<std::string>());
        }
        if (j.contains("min_support")) {
            config.min_support = j["min_support"].get<long>();
        }
        if (j.contains("high_total")) {
            config.high_total = j["high_total"].get<long>();
        }
        if (j.contains("low_total")) {
            config.low_total = j["low_total"].get<long>();
        }
        if (j.contains("include_self_pairs")) {
            config.include_self_pairs = j["include_self_pairs"].get<bool>();
        }
        auto seed = j["seed"].get<long long>();
        if (seed < 0 || seed > 0xffffffffLL) {
            throw ParseError(source, 0, "seed must fit an unsigned 32-bit integer");
        }
        config.seed = static_cast<unsigned>(seed);
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(source, 0, err.what());
    } catch (const std::invalid_argument& err) {
        throw ParseError(source, 0, err.what());
    }
    return config;
}

std::string pipeline_config_json(const PipelineConfig& config) {
    nlohmann::json j;
    j["corpus_dir"] = config.corpus_dir.string();
    j["catalog"] = config.catalog.string();
    j["light_verbs"] = path_or_empty(config.light_verbs);
    j["person_lexicon"] = path_or_empty(config.person_lexicon);
    j["w_max"] = config.w_max;
    j["window_mode"] = std::string(window_mode_name(config.window_mode));
    j["min_support"] = config.min_support;
    j["high_total"] = config.high_total;
    j["low_total"] = config.low_total;
    j["include_self_pairs"] = config.include_self_pairs;
    j["seed"] = config.seed;
    j["output_dir"] = config.output_dir.string();
    return j.dump(2) + "\n";
}

const StageRecord* RunManifest::find_stage(const std::string& name) const {
    for (const auto& stage : stages) {
        if (stage.name == name) {
            return &stage;
        }
    }
    return nullptr;
}

std::string manifest_json(const RunManifest& manifest) {
    nlohmann::json j;
    j["format"] = "cpcmine-run-v1";
    j["completed"] = manifest.completed;
    j["config_digest"] = manifest.config_digest;
    j["inputs"] = nlohmann::json::object();
    for (const auto& [path, digest] : manifest.inputs) {
        j["inputs"][path] = digest;
    }
    j["stages"] = nlohmann::json::array();
    for (const auto& stage : manifest.stages) {
        nlohmann::json js;
        js["name"] = stage.name;
        js["status"] = stage.status;
        js["input_key"] = stage.input_key;
        js["seconds"] = stage.seconds;
        js["outputs"] = nlohmann::json::object();
        for (const auto& [path, digest] : stage.outputs) {
            js["outputs"][path] = digest;
        }
        if (!stage.error.empty()) {
            js["error"] = stage.error;
        }
        j["stages"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string& text, const std::string& source) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(source, 0, err.what());
    }
    if (!j.is_object() || j.value("format", "") != "cpcmine-run-v1") {
        throw ParseError(source, 0, "not a run manifest");
    }
    RunManifest manifest;
    try {
        manifest.completed = j.value("completed", false);
        manifest.config_digest = j.value("config_digest", "");
        if (j.contains("inputs")) {
            for (const auto& [path, digest] : j["inputs"].items()) {
                manifest.inputs[path] = digest.get<std::string>();
            }
        }
        for (const auto& js : j.value("stages", nlohmann::json::array())) {
            StageRecord stage;
            stage.name = js.at("name").get<std::string>();
            stage.status = js.at("status").get<std::string>();
            stage.input_key = js.value("input_key", "");
            stage.seconds = js.value("seconds", 0.0);
            stage.error = js.value("error", "");
            if (js.contains("outputs")) {
                for (const auto& [path, digest] : js["outputs"].items()) {
                    stage.outputs[path] = digest.get<std::string>();
                }
            }
            manifest.stages.push_back(std::move(stage));
        }
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(source, 0, err.what());
    }
    return manifest;
}

RunManifest load_manifest(const fs::path& out_dir) {
    fs::path path = out_dir / "manifest.json";
    if (!fs::is_regular_file(path)) {
        throw std::invalid_argument("no manifest.json under " + out_dir.string());
    }
    return parse_manifest(read_text_file(path), path.string());
}

StageFailure::StageFailure(std::string stage, const std::string& message, bool validation)
    : std::runtime_error("stage '" + stage + "' failed: " + message),
      stage_(std::move(stage)),
      validation_(validation) {}

namespace {

class LockGuard {
public:
    explicit LockGuard(const fs::path& out_dir) : path_(out_dir / ".cpcmine.lock") {
        if (fs::exists(path_)) {
            throw std::runtime_error(
                "output directory is locked by another run (" + path_.string() +
                "); remove the lock file if that run is gone");
        }
        std::ofstream os(path_);
        os << "pid " << ::getpid() << "\n";
    }

    ~LockGuard() {
        std::error_code ec;
        fs::remove(path_, ec);
    }

    LockGuard(const LockGuard&) = delete;
    LockGuard& operator=(const LockGuard&) = delete;

private:
    fs::path path_;
};

std::vector<fs::path> corpus_files(const fs::path& corpus_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::string name = entry.path().filename().string();
        if (!name.empty() && name.front() == '.') {
            continue;
        }
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw std::invalid_argument("corpus directory is empty: " + corpus_dir.string());
    }
    return files;
}

// scope name from the "# scope\t..." header of a profiles file
std::string profiles_scope(const fs::path& path) {
    std::string scope;
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t lineno) {
        if (lineno > 1 || scope.size()) {
            return;
        }
        auto fields = split(line, '\t');
        if (fields.size() == 2 && fields[0] == "# scope") {
            scope = fields[1];
        }
    });
    if (scope.empty()) {
        throw ParseError(path.string(), 1, "profiles file lacks a scope header");
    }
    return scope;
}

std::map<std::string, std::map<std::string, ArgProfile>> read_profiles_dir(
    const fs::path& dir) {
    std::map<std::string, std::map<std::string, ArgProfile>> out;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        out[profiles_scope(path)] = read_profiles_file(path);
    }
    return out;
}

std::vector<fs::path> files_under(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::map<std::string, std::vector<ScoredPair>> scores_by_scope(
    const std::vector<ScoredPair>& scores) {
    std::map<std::string, std::vector<ScoredPair>> by_scope;
    for (const auto& sp : scores) {
        by_scope[sp.scope].push_back(sp);
    }
    return by_scope;
}

struct StageDef {
    std::string name;
    std::function<std::string()> key;
    std::function<std::vector<fs::path>()> run;
};

nlohmann::json quota_json(const std::vector<ScopeQuota>& quotas) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& q : quotas) {
        arr.push_back({{"scope", q.scope},
                       {"quota", q.quota},
                       {"taken", q.taken},
                       {"shortfall", q.shortfall()}});
    }
    return arr;
}

}  // namespace

namespace stages {

void ingest(const fs::path& corpus_dir, const fs::path& catalog_path,
            const fs::path& out_store) {
    std::vector<SceneDocument> docs;
    for (const auto& file : corpus_files(corpus_dir)) {
        auto parsed = parse_annotation_file(file);
        docs.insert(docs.end(), parsed.begin(), parsed.end());
    }
    if (docs.empty()) {
        throw std::invalid_argument("corpus contains no scenes");
    }
    FilmCatalog catalog = load_catalog(catalog_path);
    for (const auto& doc : docs) {
        if (!catalog.find(doc.film_id)) {
            throw std::invalid_argument("film '" + doc.film_id +
                                        "' is not in the catalog");
        }
    }
    std::stable_sort(docs.begin(), docs.end(),
                     [](const SceneDocument& a, const SceneDocument& b) {
                         return std::tie(a.film_id, a.scene_ordinal) <
                                std::tie(b.film_id, b.scene_ordinal);
                     });
    write_store(out_store, docs);
}

void extract(const fs::path& store, const fs::path& light_verbs,
             const fs::path& person_lexicon, const fs::path& out_events) {
    auto docs = read_store(store);
    ExtractionConfig extraction;
    if (!light_verbs.empty()) {
        extraction.light_verbs = load_word_list(light_verbs);
    }
    if (!person_lexicon.empty()) {
        extraction.person_lexicon = PersonLexicon::load(person_lexicon);
    }
    write_events_file(out_events, extract_corpus(docs, extraction));
}

void count(const fs::path& events_path, const fs::path& catalog_path, int w_max,
           WindowMode mode, const fs::path& counts_dir, const fs::path& profiles_dir) {
    auto events = read_events_file(events_path);
    FilmCatalog catalog = load_catalog(catalog_path);
    fs::create_directories(counts_dir);
    if (!profiles_dir.empty()) {
        fs::create_directories(profiles_dir);
    }
    for (const auto& scope : build_scopes(catalog)) {
        auto scoped = filter_scope(events, scope);
        write_count_tables(counts_dir,
                           count_scope(scene_streams(scoped), w_max, mode, scope.name));
        if (!profiles_dir.empty()) {
            write_profiles_file(
                profiles_dir / (sanitize_scope_filename(scope.name) + ".profiles.tsv"),
                scope.name, build_arg_profiles(scoped));
        }
    }
}

void score(const fs::path& counts_dir, const fs::path& profiles_dir, long min_support,
           const fs::path& out_scores) {
    auto tables_by_scope = read_count_tables(counts_dir);
    auto profiles = read_profiles_dir(profiles_dir);
    std::vector<ScoredPair> all;
    for (const auto& [scope, tables] : tables_by_scope) {
        auto scored = score_scope(tables, profiles[scope], min_support);
        all.insert(all.end(), scored.begin(), scored.end());
    }
    write_scores_file(out_scores, all);
}

void rank(const fs::path& scores_path, const fs::path& catalog_path,
          const fs::path& profiles_dir, long high_total, long low_total,
          bool include_self_pairs, const fs::path& out_dir) {
    auto by_scope = scores_by_scope(read_scores_file(scores_path));
    FilmCatalog catalog = load_catalog(catalog_path);
    SelectionConfig selection{high_total, low_total, include_self_pairs};
    SelectionResult result = select_extremes(by_scope, selection, catalog);
    auto profiles = read_profiles_dir(profiles_dir);
    auto high = dedup_merge(result.high, profiles, true);
    auto low = dedup_merge(result.low, profiles, false);
    fs::create_directories(out_dir);
    write_pairs_file(out_dir / "high_pairs.tsv", high);
    write_pairs_file(out_dir / "low_pairs.tsv", low);
    nlohmann::json j;
    j["high"] = {{"total", high_total},
                 {"selected", result.high.size()},
                 {"merged", high.size()},
                 {"quotas", quota_json(result.high_quotas)}};
    j["low"] = {{"total", low_total},
                {"selected", result.low.size()},
                {"merged", low.size()},
                {"quotas", quota_json(result.low_quotas)}};
    write_text_file(out_dir / "selection.json", j.dump(2) + "\n");
}

void eval_gen(const fs::path& high_pairs, const fs::path& low_pairs, unsigned seed,
              const fs::path& eval_dir) {
    auto high = read_pairs_file(high_pairs);
    auto low = read_pairs_file(low_pairs);
    // a shallow low list cannot pair every high pair; use what fits
    if (low.size() < high.size()) {
        high.resize(low.size());
    }
    auto items = build_high_vs_low_items(high, low, seed);
    fs::create_directories(eval_dir);
    write_items_file(eval_dir / "high_low_items.csv", items);
    write_key_file(eval_dir / "high_low_key.csv", items);
    auto type_items = build_type_items(high);
    write_items_file(eval_dir / "type_items.csv", type_items);
    write_key_file(eval_dir / "type_key.csv", type_items);
}

}  // namespace stages

RunManifest run_pipeline(const PipelineConfig& config, bool force) {
    config.validate();
    fs::create_directories(config.output_dir);
    LockGuard lock(config.output_dir);
    const fs::path& out = config.output_dir;

    RunManifest previous;
    if (fs::is_regular_file(out / "manifest.json")) {
        try {
            previous = load_manifest(out);
        } catch (const std::exception&) {
            previous = RunManifest{};  // unreadable: rebuild from scratch
        }
    }

    RunManifest manifest;
    std::string config_text = pipeline_config_json(config);
    write_text_file(out / "config.json", config_text);
    manifest.config_digest = digest_bytes(config_text);

    auto add_input = [&](const fs::path& path) {
        std::string digest = digest_file(path);
        manifest.inputs[path.string()] = digest;
        return digest;
    };
    std::string catalog_digest = add_input(config.catalog);
    std::vector<std::string> corpus_digests;
    for (const auto& file : corpus_files(config.corpus_dir)) {
        corpus_digests.push_back(file.string() + "=" + add_input(file));
    }
    std::string light_digest =
        config.light_verbs.empty() ? "builtin" : add_input(config.light_verbs);
    std::string lexicon_digest =
        config.person_lexicon.empty() ? "none" : add_input(config.person_lexicon);

    auto key_of = [](std::initializer_list<std::string> parts) {
        std::string joined;
        for (const auto& part : parts) {
            joined += part;
            joined += '\x1f';
        }
        return digest_bytes(joined);
    };
    auto join = [](const std::vector<std::string>& parts) {
        std::string joined;
        for (const auto& part : parts) {
            joined += part;
            joined += ';';
        }
        return joined;
    };
    auto dir_digests = [](const fs::path& dir) {
        std::vector<std::string> parts;
        for (const auto& file : files_under(dir)) {
            parts.push_back(file.filename().string() + "=" + digest_file(file));
        }
        std::string joined;
        for (const auto& part : parts) {
            joined += part;
            joined += ';';
        }
        return joined;
    };

    std::vector<StageDef> defs;

    defs.push_back(
        {"ingest",
         [&] { return key_of({"ingest", join(corpus_digests), catalog_digest}); },
         [&]() -> std::vector<fs::path> {
             stages::ingest(config.corpus_dir, config.catalog, out / "store.json");
             return {out / "store.json"};
         }});

    defs.push_back(
        {"extract",
         [&] {
             return key_of({"extract", digest_file(out / "store.json"), light_digest,
                            lexicon_digest});
         },
         [&]() -> std::vector<fs::path> {
             stages::extract(out / "store.json", config.light_verbs,
                             config.person_lexicon, out / "events.tsv");
             return {out / "events.tsv"};
         }});

    defs.push_back(
        {"count",
         [&] {
             return key_of({"count", digest_file(out / "events.tsv"), catalog_digest,
                            std::to_string(config.w_max),
                            std::string(window_mode_name(config.window_mode))});
         },
         [&]() -> std::vector<fs::path> {
             stages::count(out / "events.tsv", config.catalog, config.w_max,
                           config.window_mode, out / "counts", out / "profiles");
             std::vector<fs::path> produced = files_under(out / "counts");
             auto profile_files = files_under(out / "profiles");
             produced.insert(produced.end(), profile_files.begin(), profile_files.end());
             return produced;
         }});

    defs.push_back(
        {"score",
         [&] {
             return key_of({"score", dir_digests(out / "counts"),
                            dir_digests(out / "profiles"),
                            std::to_string(config.min_support)});
         },
         [&]() -> std::vector<fs::path> {
             stages::score(out / "counts", out / "profiles", config.min_support,
                           out / "scores.tsv");
             return {out / "scores.tsv"};
         }});

    defs.push_back(
        {"rank",
         [&] {
             return key_of({"rank", digest_file(out / "scores.tsv"), catalog_digest,
                            dir_digests(out / "profiles"),
                            std::to_string(config.high_total),
                            std::to_string(config.low_total),
                            config.include_self_pairs ? "self" : "noself"});
         },
         [&]() -> std::vector<fs::path> {
             stages::rank(out / "scores.tsv", config.catalog, out / "profiles",
                          config.high_total, config.low_total,
                          config.include_self_pairs, out);
             return {out / "high_pairs.tsv", out / "low_pairs.tsv",
                     out / "selection.json"};
         }});

    defs.push_back(
        {"eval_gen",
         [&] {
             return key_of({"eval_gen", digest_file(out / "high_pairs.tsv"),
                            digest_file(out / "low_pairs.tsv"),
                            std::to_string(config.seed)});
         },
         [&]() -> std::vector<fs::path> {
             stages::eval_gen(out / "high_pairs.tsv", out / "low_pairs.tsv", config.seed,
                              out / "eval");
             return {out / "eval" / "high_low_items.csv",
                     out / "eval" / "high_low_key.csv",
                     out / "eval" / "type_items.csv", out / "eval" / "type_key.csv"};
         }});

    auto outputs_intact = [&](const StageRecord& record) {
        if (record.outputs.empty()) {
            return false;
        }
        for (const auto& [rel, digest] : record.outputs) {
            fs::path path = out / rel;
            if (!fs::is_regular_file(path) || digest_file(path) != digest) {
                return false;
            }
        }
        return true;
    };

    std::size_t failed_at = defs.size();
    std::string failure_message;
    bool failure_validation = false;

    for (std::size_t i = 0; i < defs.size(); ++i) {
        const auto& def = defs[i];
        StageRecord record;
        record.name = def.name;
        try {
            record.input_key = def.key();
            const StageRecord* prior = previous.find_stage(def.name);
            if (!force && prior && prior->input_key == record.input_key &&
                (prior->status == "completed" || prior->status == "skipped") &&
                outputs_intact(*prior)) {
                record.status = "skipped";
                record.outputs = prior->outputs;
                manifest.stages.push_back(std::move(record));
                continue;
            }
            auto start = std::chrono::steady_clock::now();
            auto produced = def.run();
            auto stop = std::chrono::steady_clock::now();
            record.seconds = std::chrono::duration<double>(stop - start).count();
            for (const auto& file : produced) {
                record.outputs[fs::relative(file, out).generic_string()] =
                    digest_file(file);
            }
            record.status = "completed";
            manifest.stages.push_back(std::move(record));
        } catch (const std::exception& err) {
            record.status = "failed";
            record.error = err.what();
            manifest.stages.push_back(std::move(record));
            failed_at = i;
            failure_message = err.what();
            failure_validation = dynamic_cast<const std::invalid_argument*>(&err) != nullptr;
            break;
        }
    }

    if (failed_at < defs.size()) {
        // later stages keep whatever a previous run left; flag it untrustworthy
        for (std::size_t i = failed_at + 1; i < defs.size(); ++i) {
            StageRecord record;
            record.name = defs[i].name;
            record.status = "stale";
            if (const StageRecord* prior = previous.find_stage(record.name)) {
                record.outputs = prior->outputs;
            }
            manifest.stages.push_back(std::move(record));
        }
        manifest.completed = false;
        write_text_file(out / "manifest.json", manifest_json(manifest));
        throw StageFailure(defs[failed_at].name, failure_message, failure_validation);
    }

    manifest.completed = true;
    write_text_file(out / "manifest.json", manifest_json(manifest));
    return manifest;
}

namespace {

std::string pad(const std::string& text, std::size_t width, bool right) {
    if (text.size() >= width) {
        return text;
    }
    std::string spaces(width - text.size(), ' ');
    return right ? spaces + text : text + spaces;
}

}  // namespace

ReportBundle render_report(const fs::path& out_dir, int top_k, long overlap_k) {
    RunManifest manifest = load_manifest(out_dir);
    if (!manifest.completed) {
        throw std::invalid_argument("run under " + out_dir.string() +
                                    " is incomplete; rerun the pipeline first");
    }
    PipelineConfig config = load_pipeline_config(out_dir / "config.json");
    FilmCatalog catalog = load_catalog(config.catalog);
    auto tables_by_scope = read_count_tables(out_dir / "counts");
    auto by_scope = scores_by_scope(read_scores_file(out_dir / "scores.tsv"));
    auto profiles = read_profiles_dir(out_dir / "profiles");

    // scope order: genres alphabetically, whole-corpus scope last
    std::vector<std::string> scope_names;
    for (const auto& scope : build_scopes(catalog)) {
        scope_names.push_back(scope.name);
    }

    auto films_per_genre = catalog.films_per_genre();
    auto words_of = [&](const std::string& scope) {
        long words = 0;
        long films = 0;
        for (const auto& entry : catalog.entries) {
            if (scope == kAllScope || entry.genres.count(scope)) {
                words += entry.word_count;
                ++films;
            }
        }
        return std::pair<long, long>(films, words);
    };

    std::map<std::string, std::vector<MergedPair>> merged_by_scope;
    for (const auto& name : scope_names) {
        auto it = by_scope.find(name);
        if (it == by_scope.end()) {
            merged_by_scope[name] = {};
            continue;
        }
        std::map<std::string, std::map<std::string, ArgProfile>> scoped_profiles;
        auto prof = profiles.find(name);
        if (prof != profiles.end()) {
            scoped_profiles[name] = prof->second;
        }
        merged_by_scope[name] = dedup_merge(it->second, scoped_profiles, true);
    }

    nlohmann::json j;
    std::ostringstream text;

    text << "corpus\n======\n";
    text << pad("scope", 14, false) << pad("films", 8, true) << pad("words", 12, true)
         << pad("events", 10, true) << pad("pairs", 10, true) << '\n';
    j["scopes"] = nlohmann::json::array();
    for (const auto& name : scope_names) {
        auto [films, words] = words_of(name);
        long events = 0;
        auto tables = tables_by_scope.find(name);
        if (tables != tables_by_scope.end() && !tables->second.empty()) {
            events = tables->second.front().total_events;
        }
        long pairs = 0;
        if (auto it = by_scope.find(name); it != by_scope.end()) {
            pairs = static_cast<long>(it->second.size());
        }
        text << pad(name, 14, false) << pad(std::to_string(films), 8, true)
             << pad(std::to_string(words), 12, true) << pad(std::to_string(events), 10, true)
             << pad(std::to_string(pairs), 10, true) << '\n';
        j["scopes"].push_back({{"scope", name},
                               {"films", films},
                               {"words", words},
                               {"events", events},
                               {"scored_pairs", pairs}});
    }

    text << "\ntop pairs\n=========\n";
    j["top_pairs"] = nlohmann::json::object();
    for (const auto& name : scope_names) {
        const auto& merged = merged_by_scope[name];
        text << '[' << name << "]\n";
        j["top_pairs"][name] = nlohmann::json::array();
        for (std::size_t i = 0; i < merged.size() && i < static_cast<std::size_t>(top_k);
             ++i) {
            const auto& mp = merged[i];
            text << "  " << i + 1 << ". " << render_pair(mp) << "  (cpc "
                 << format_double(mp.best_cpc) << ")\n";
            j["top_pairs"][name].push_back(
                {{"e1", mp.e1}, {"e2", mp.e2}, {"rendered", render_pair(mp)},
                 {"cpc", mp.best_cpc}});
        }
        if (merged.empty()) {
            text << "  (no pairs)\n";
        }
    }

    text << "\ntop-" << overlap_k << " overlap\n==============\n";
    auto matrix = overlap_matrix(merged_by_scope, overlap_k);
    text << pad("", 14, false);
    for (const auto& name : scope_names) {
        text << pad(name, 12, true);
    }
    text << '\n';
    j["overlap"] = nlohmann::json::object();
    j["overlap"]["k"] = overlap_k;
    j["overlap"]["matrix"] = nlohmann::json::object();
    for (const auto& row : scope_names) {
        text << pad(row, 14, false);
        nlohmann::json jrow = nlohmann::json::object();
        for (const auto& col : scope_names) {
            long value = matrix.at({row, col});
            text << pad(std::to_string(value), 12, true);
            jrow[col] = value;
        }
        text << '\n';
        j["overlap"]["matrix"][row] = std::move(jrow);
    }

    text << "\nselection\n=========\n";
    nlohmann::json selection;
    fs::path selection_path = out_dir / "selection.json";
    if (fs::is_regular_file(selection_path)) {
        selection = nlohmann::json::parse(read_text_file(selection_path));
        for (const char* side : {"high", "low"}) {
            const auto& s = selection[side];
            text << side << ": total " << s["total"].get<long>() << ", selected "
                 << s["selected"].get<long>() << ", merged " << s["merged"].get<long>()
                 << '\n';
            for (const auto& q : s["quotas"]) {
                text << "  " << pad(q["scope"].get<std::string>(), 14, false) << " quota "
                     << pad(std::to_string(q["quota"].get<long>()), 6, true) << "  taken "
                     << pad(std::to_string(q["taken"].get<long>()), 6, true);
                if (q["shortfall"].get<long>() > 0) {
                    text << "  shortfall " << q["shortfall"].get<long>();
                }
                text << '\n';
            }
        }
        auto high_merged = read_pairs_file(out_dir / "high_pairs.tsv");
        long vs_all = overlap(high_merged, merged_by_scope[kAllScope], overlap_k);
        text << "merged high vs " << kAllScope << " top-" << overlap_k << " overlap: "
             << vs_all << '\n';
        selection["high_vs_all_overlap"] = vs_all;
    }
    j["selection"] = selection;

    text << "\neval items\n==========\n";
    j["eval"] = nlohmann::json::object();
    for (const char* kind : {"high_low", "type"}) {
        fs::path items_path = out_dir / "eval" / (std::string(kind) + "_items.csv");
        long count = 0;
        if (fs::is_regular_file(items_path)) {
            count = static_cast<long>(read_items_file(items_path).size());
        }
        text << kind << ": " << count << " items\n";
        j["eval"][kind] = count;
    }

    ReportBundle bundle;
    bundle.text = text.str();
    bundle.json = j.dump(2) + "\n";
    return bundle;
}

}  // namespace cpcmine
