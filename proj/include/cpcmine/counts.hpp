#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpcmine/catalog.hpp"
#include "cpcmine/events.hpp"

namespace cpcmine {

// Cumulative pairs every event with the w following events of its scene;
// Exact pairs it with the event at distance w only.
enum class WindowMode { Cumulative, Exact };

std::string_view window_mode_name(WindowMode mode);
WindowMode window_mode_from_name(std::string_view name);

// Unigram and ordered pair counts for one scope at one window size.
// Windows never cross scene boundaries.
struct PairCountTable {
    std::string scope;
    int window = 1;
    WindowMode mode = WindowMode::Cumulative;
    std::map<std::string, long> unigram;
    std::map<std::pair<std::string, std::string>, long> ordered_pair;
    long total_events = 0;
    long total_ordered_pairs = 0;

    bool contains(const std::string& lemma) const { return unigram.count(lemma) > 0; }
    long observed(const std::string& e1, const std::string& e2) const;

    // Observed ordered count, or 1 when the ordering was never seen.
    // Both lemmas must be in the unigram table.
    long smoothed_count(const std::string& e1, const std::string& e2) const;

    // Estimators behind every score:
    //   P(e)        = unigram(e) / total_events
    //   P(e1->e2)   = smoothed(e1,e2) / total_ordered_pairs
    //   P(e1,e2)    = (smoothed(e1,e2) + smoothed(e2,e1)) / total_ordered_pairs,
    //                 collapsing to a single term when e1 == e2
    double p_event(const std::string& e) const;
    double p_ordered(const std::string& e1, const std::string& e2) const;
    double p_joint(const std::string& e1, const std::string& e2) const;
};

// Scene lemma streams for one scope: events grouped by (film_id, scene),
// ordered by linear_index within each scene.
std::vector<std::vector<std::string>> scene_streams(const std::vector<EventInstance>& events);

std::vector<EventInstance> filter_scope(const std::vector<EventInstance>& events,
                                        const AnalysisScope& scope);

// One table per window size 1..w_max. Unigram counts are window-independent
// and replicated into each table.
std::vector<PairCountTable> count_scope(const std::vector<std::vector<std::string>>& scenes,
                                        int w_max,
                                        WindowMode mode = WindowMode::Cumulative,
                                        const std::string& scope_name = "");

// Count store layout under a directory:
//   <scope>.unigrams.tsv       lemma, count rows; totals in '#' header lines
//   <scope>__w<k>.pairs.tsv    lemma1, lemma2, count rows; totals header
// Scope names are read from the headers, not from file names.
void write_count_tables(const std::filesystem::path& dir,
                        const std::vector<PairCountTable>& tables);
std::map<std::string, std::vector<PairCountTable>> read_count_tables(
    const std::filesystem::path& dir);

std::string sanitize_scope_filename(const std::string& scope);

}  // namespace cpcmine
