#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpcmine/catalog.hpp"
#include "cpcmine/scoring.hpp"

namespace cpcmine {

struct SelectionConfig {
    long high_total = 3000;
    long low_total = 6000;
    bool include_self_pairs = false;
};

struct ScopeQuota {
    std::string scope;
    long quota = 0;
    long taken = 0;

    long shortfall() const { return quota - taken; }
};

struct SelectionResult {
    std::vector<ScoredPair> high;  // per-genre top picks, genres in name order
    std::vector<ScoredPair> low;   // per-genre bottom picks, ascending cpc
    std::vector<ScopeQuota> high_quotas;
    std::vector<ScopeQuota> low_quotas;
};

// Splits total across the weighted keys so shares are proportional to weights,
// using largest-remainder rounding. Integer arithmetic only; ties go to the
// larger weight, then the lexicographically smaller key.
std::map<std::string, long> apportion_largest_remainder(
    const std::map<std::string, long>& weights, long total);

// Extreme selection: per-genre quotas proportional to film counts,
// quota taken from the top (high) and bottom (low) of each genre's cpc
// ranking. Genres with fewer scored pairs than quota yield everything they
// have; the gap shows up as ScopeQuota::shortfall.
SelectionResult select_extremes(
    const std::map<std::string, std::vector<ScoredPair>>& scores_by_scope,
    const SelectionConfig& config, const FilmCatalog& catalog);

struct MergedPair {
    std::string e1;
    std::string e2;
    ArgCombination args1;
    ArgCombination args2;
    double best_cpc = 0.0;
    std::set<std::string> source_scopes;
};

// Collapses a selection to one MergedPair per (e1, e2). Arguments come from
// the highest aggregate combination frequency across contributing scopes
// (profiles_by_scope), empty subjects are backfilled to person, and best_cpc
// is the max (keep_max) or min cpc among contributors. Output ranked by
// best_cpc, descending when keep_max and ascending otherwise.
std::vector<MergedPair> dedup_merge(
    const std::vector<ScoredPair>& selection,
    const std::map<std::string, std::map<std::string, ArgProfile>>& profiles_by_scope,
    bool keep_max);

// |top-k(a) ∩ top-k(b)| under the (e1, e2) key; k clamps to list sizes.
long overlap(const std::vector<MergedPair>& a, const std::vector<MergedPair>& b, long k);

// Pairwise overlap counts for every ordered (scope_a, scope_b) combination.
std::map<std::pair<std::string, std::string>, long> overlap_matrix(
    const std::map<std::string, std::vector<MergedPair>>& lists, long k);

// Top-k pairs of scope_list absent from every other top-k list.
std::vector<MergedPair> unique_to_scope(const std::vector<MergedPair>& scope_list,
                                        const std::vector<std::vector<MergedPair>>& others,
                                        long k);

struct ExternalComparison {
    long merged_size = 0;
    long external_size = 0;
    std::vector<std::pair<std::string, std::string>> matches;  // sorted keys
};

ExternalComparison compare_external(const std::vector<MergedPair>& merged,
                                    const std::vector<MergedPair>& external);

// Generalized-pair interchange TSV: e1_subj, e1_lemma, e1_particle, e1_dobj,
// e1_iobj, then the same five for e2, then an optional score column.
void write_pairs_file(const std::filesystem::path& path,
                      const std::vector<MergedPair>& pairs, bool with_score = true);
std::vector<MergedPair> read_pairs_file(const std::filesystem::path& path);

}  // namespace cpcmine
