#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cpcmine/eval.hpp"
#include "cpcmine/io_util.hpp"
#include "cpcmine/pipeline.hpp"
#include "cpcmine/ranking.hpp"

namespace {

using namespace cpcmine;

struct Options {
    std::string corpus_dir, catalog, out, store, light_verbs, person_lexicon;
    std::string events, counts, profiles, scores, out_dir;
    std::string file_a, file_b, merged, external;
    std::string mode, high, low, cpc_pairs, pairs, items, key, responses;
    std::string config, run_dir, json_out;
    int w_max = 3;
    std::string window_mode = "cumulative";
    long min_support = 2;
    long high_total = 3000;
    long low_total = 6000;
    long k = 30;
    long sample = 100;
    int panel = 5;
    unsigned seed = 0;
    bool include_self_pairs = false;
    bool force = false;
    bool pooled = false;
    int top_k = 7;
    long overlap_k = 30;
};

int dispatch(const CLI::App& app, Options& opt) {
    if (app.got_subcommand("ingest")) {
        stages::ingest(opt.corpus_dir, opt.catalog, opt.out);
        std::cout << "wrote " << opt.out << "\n";
    } else if (app.got_subcommand("extract")) {
        stages::extract(opt.store, opt.light_verbs, opt.person_lexicon, opt.out);
        std::cout << "wrote " << opt.out << "\n";
    } else if (app.got_subcommand("count")) {
        stages::count(opt.events, opt.catalog, opt.w_max,
                      window_mode_from_name(opt.window_mode), opt.out, opt.profiles);
        std::cout << "wrote count tables under " << opt.out << "\n";
    } else if (app.got_subcommand("score")) {
        stages::score(opt.counts, opt.profiles, opt.min_support, opt.out);
        std::cout << "wrote " << opt.out << "\n";
    } else if (app.got_subcommand("rank")) {
        stages::rank(opt.scores, opt.catalog, opt.profiles, opt.high_total,
                     opt.low_total, opt.include_self_pairs, opt.out_dir);
        std::cout << "wrote high/low pair lists under " << opt.out_dir << "\n";
    } else if (app.got_subcommand("overlap")) {
        auto list_a = read_pairs_file(opt.file_a);
        auto list_b = read_pairs_file(opt.file_b);
        std::cout << "overlap@" << opt.k << " = " << overlap(list_a, list_b, opt.k)
                  << "\n";
    } else if (app.got_subcommand("compare-external")) {
        auto cmp = compare_external(read_pairs_file(opt.merged),
                                    read_pairs_file(opt.external));
        std::cout << "merged pairs: " << cmp.merged_size << "\n"
                  << "external pairs: " << cmp.external_size << "\n"
                  << "overlap: " << cmp.matches.size() << "\n";
        for (const auto& [e1, e2] : cmp.matches) {
            std::cout << "  " << e1 << " - " << e2 << "\n";
        }
    } else if (app.got_subcommand("eval-gen")) {
        std::vector<JudgmentItem> items;
        if (opt.mode == "high-low") {
            if (opt.high.empty() || opt.low.empty()) {
                throw std::invalid_argument("mode high-low needs --high and --low");
            }
            items = build_high_vs_low_items(read_pairs_file(opt.high),
                                            read_pairs_file(opt.low), opt.seed);
        } else if (opt.mode == "comparison") {
            if (opt.cpc_pairs.empty() || opt.external.empty()) {
                throw std::invalid_argument("mode comparison needs --cpc and --external");
            }
            auto build = build_comparison_items(read_pairs_file(opt.cpc_pairs),
                                                read_pairs_file(opt.external),
                                                opt.sample, opt.seed);
            for (const auto& lemma : build.unmatched) {
                std::cerr << "warning: no external pair starts with '" << lemma
                          << "'; sampled pair skipped\n";
            }
            items = std::move(build.items);
        } else if (opt.mode == "type") {
            if (opt.pairs.empty()) {
                throw std::invalid_argument("mode type needs --pairs");
            }
            items = build_type_items(read_pairs_file(opt.pairs));
        } else {
            throw std::invalid_argument("mode must be high-low, comparison, or type");
        }
        write_items_file(opt.items, items);
        if (!opt.key.empty()) {
            write_key_file(opt.key, items);
        }
        std::cout << "wrote " << items.size() << " items to " << opt.items << "\n";
    } else if (app.got_subcommand("eval-score")) {
        auto items = read_items_file(opt.items);
        auto responses = group_responses(read_responses_file(opt.responses));
        bool all_type = !items.empty();
        bool any_type = false;
        for (const auto& item : items) {
            bool is_type = item.kind == ItemKind::CausalityType;
            all_type = all_type && is_type;
            any_type = any_type || is_type;
        }
        if (any_type && !all_type) {
            throw std::invalid_argument("items file mixes choice and type items");
        }
        AgreementReport report;
        if (all_type) {
            report = score_type_items(items, responses, opt.panel);
        } else {
            if (opt.key.empty()) {
                throw std::invalid_argument("choice items need --key");
            }
            report = score_choice_items(items, read_key_file(opt.key), responses,
                                        opt.panel);
        }
        nlohmann::json j = nlohmann::json::parse(agreement_report_json(report));
        if (opt.pooled) {
            j["alpha_pooled"] = pooled_alpha(responses);
        }
        std::string text = j.dump(2) + "\n";
        write_text_file(opt.out, text);
        std::cout << text;
    } else if (app.got_subcommand("run")) {
        RunManifest manifest = run_pipeline(load_pipeline_config(opt.config), opt.force);
        for (const auto& stage : manifest.stages) {
            std::cout << stage.name << ": " << stage.status << "\n";
        }
    } else if (app.got_subcommand("report")) {
        ReportBundle bundle = render_report(opt.run_dir, opt.top_k, opt.overlap_k);
        std::cout << bundle.text;
        if (!opt.json_out.empty()) {
            write_text_file(opt.json_out, bundle.json);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-pair causality mining over film-scene corpora"};
    app.require_subcommand(1);
    Options opt;

    auto* ingest = app.add_subcommand("ingest", "validate a corpus into one store file");
    ingest->add_option("--corpus-dir", opt.corpus_dir, "directory of annotation files")
        ->required();
    ingest->add_option("--catalog", opt.catalog, "film catalog CSV")->required();
    ingest->add_option("--out", opt.out, "store file to write")->required();

    auto* extract = app.add_subcommand("extract", "extract generalized events");
    extract->add_option("--store", opt.store, "store file from ingest")->required();
    extract->add_option("--light-verbs", opt.light_verbs, "one lemma per line");
    extract->add_option("--person-lexicon", opt.person_lexicon, "one lemma per line");
    extract->add_option("--out", opt.out, "events TSV to write")->required();

    auto* count = app.add_subcommand("count", "window co-occurrence counts per scope");
    count->add_option("--events", opt.events, "events TSV from extract")->required();
    count->add_option("--catalog", opt.catalog, "film catalog CSV (derives the scopes)")
        ->required();
    count->add_option("--wmax", opt.w_max, "largest window size")->capture_default_str();
    count->add_option("--window-mode", opt.window_mode, "cumulative or exact")
        ->capture_default_str();
    count->add_option("--out", opt.out, "directory for count tables")->required();
    count->add_option("--profiles-out", opt.profiles, "directory for argument profiles");

    auto* score = app.add_subcommand("score", "CP, CPC and SCP for counted pairs");
    score->add_option("--counts", opt.counts, "count table directory")->required();
    score->add_option("--profiles", opt.profiles, "argument profile directory")
        ->required();
    score->add_option("--min-support", opt.min_support, "window-1 count floor")
        ->capture_default_str();
    score->add_option("--out", opt.out, "scores TSV to write")->required();

    auto* rank = app.add_subcommand("rank", "select and merge high/low pair lists");
    rank->add_option("--scores", opt.scores, "scores TSV")->required();
    rank->add_option("--catalog", opt.catalog, "film catalog CSV")->required();
    rank->add_option("--profiles", opt.profiles, "argument profile directory")
        ->required();
    rank->add_option("--high", opt.high_total, "high-pair total")->capture_default_str();
    rank->add_option("--low", opt.low_total, "low-pair total")->capture_default_str();
    rank->add_flag("--include-self-pairs", opt.include_self_pairs,
                   "keep pairs of an event with itself");
    rank->add_option("--out-dir", opt.out_dir, "directory for the pair lists")
        ->required();

    auto* overlap_cmd = app.add_subcommand("overlap", "top-k overlap of two pair lists");
    overlap_cmd->add_option("--a", opt.file_a, "pair list TSV")->required();
    overlap_cmd->add_option("--b", opt.file_b, "pair list TSV")->required();
    overlap_cmd->add_option("--k", opt.k, "depth")->capture_default_str();

    auto* compare = app.add_subcommand("compare-external",
                                       "intersect merged pairs with an external list");
    compare->add_option("--merged", opt.merged, "merged pair TSV")->required();
    compare->add_option("--external", opt.external, "external pair TSV")->required();

    auto* eval_gen = app.add_subcommand("eval-gen", "generate judgment item files");
    eval_gen->add_option("--mode", opt.mode, "high-low, comparison, or type")
        ->required();
    eval_gen->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
    eval_gen->add_option("--high", opt.high, "high pair TSV (high-low)");
    eval_gen->add_option("--low", opt.low, "low pair TSV (high-low)");
    eval_gen->add_option("--cpc", opt.cpc_pairs, "cpc pair TSV (comparison)");
    eval_gen->add_option("--external", opt.external, "external pair TSV (comparison)");
    eval_gen->add_option("--sample", opt.sample, "comparison sample size")
        ->capture_default_str();
    eval_gen->add_option("--pairs", opt.pairs, "pair TSV (type)");
    eval_gen->add_option("--items", opt.items, "worker-facing items CSV to write")
        ->required();
    eval_gen->add_option("--key", opt.key, "answer key CSV to write");

    auto* eval_score = app.add_subcommand("eval-score", "score collected judgments");
    eval_score->add_option("--items", opt.items, "items CSV")->required();
    eval_score->add_option("--key", opt.key, "answer key CSV (choice items)");
    eval_score->add_option("--responses", opt.responses, "responses CSV")->required();
    eval_score->add_option("--panel", opt.panel, "judgments per item")
        ->capture_default_str();
    eval_score->add_flag("--pooled", opt.pooled, "also report pooled alpha");
    eval_score->add_option("--out", opt.out, "report JSON to write")->required();

    auto* run = app.add_subcommand("run", "full pipeline from a config file");
    run->add_option("--config", opt.config, "pipeline config JSON")->required();
    run->add_flag("--force", opt.force, "rerun stages even when inputs are unchanged");

    auto* report = app.add_subcommand("report", "summarize a completed run directory");
    report->add_option("--run-dir", opt.run_dir, "pipeline output directory")
        ->required();
    report->add_option("--json", opt.json_out, "also write the JSON report here");
    report->add_option("--top-k", opt.top_k, "pairs listed per scope")
        ->capture_default_str();
    report->add_option("--overlap-k", opt.overlap_k, "overlap matrix depth")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    try {
        return dispatch(app, opt);
    } catch (const StageFailure& err) {
        std::cerr << "error: " << err.what() << "\n";
        return err.validation() ? 1 : 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
