#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cpcmine/ranking.hpp"

namespace cpcmine {

enum class ItemKind { HighVsLow, CpcVsExternal, CausalityType };

std::string_view item_kind_name(ItemKind kind);
ItemKind item_kind_from_name(std::string_view name, const std::string& source,
                             std::size_t lineno);

struct JudgmentItem {
    std::string item_id;
    ItemKind kind = ItemKind::HighVsLow;
    std::string option_a;
    std::string option_b;   // empty for causality_type items
    char hidden_key = 0;    // 'A' or 'B'; 0 when there is no right answer
};

// Worker-facing rendering: "[person] pick up [smth]". Slot order is subject,
// lemma, particle, indirect object, direct object; empty slots are omitted.
std::string render_event(const std::string& lemma, const ArgCombination& args);
std::string render_pair(const MergedPair& pair);

// One item per high pair, paired with a distinct randomly drawn low pair.
// Sampling and A/B assignment are driven by the seed alone.
std::vector<JudgmentItem> build_high_vs_low_items(const std::vector<MergedPair>& high,
                                                  const std::vector<MergedPair>& low,
                                                  unsigned seed);

struct ComparisonBuild {
    std::vector<JudgmentItem> items;
    std::vector<std::string> unmatched;  // sampled first-event lemmas with no external pair
};

// Samples sample_size cpc pairs with pairwise-distinct first-event lemmas and
// pits each against the external pair sharing that first event. Sampled pairs
// without a match are skipped and listed in `unmatched`.
ComparisonBuild build_comparison_items(const std::vector<MergedPair>& cpc_pairs,
                                       const std::vector<MergedPair>& external,
                                       long sample_size, unsigned seed);

// One causality-type item per pair; no hidden key, option_b left empty.
std::vector<JudgmentItem> build_type_items(const std::vector<MergedPair>& pairs);

struct Response {
    std::string item_id;
    std::string annotator_id;
    std::string label;
};

// item_id -> annotator_id -> label. Throws on a duplicate (item, annotator).
using ResponseTable = std::map<std::string, std::map<std::string, std::string>>;
ResponseTable group_responses(const std::vector<Response>& rows);

struct AgreementReport {
    double majority_rate = 0.0;
    double unanimity_rate = 0.0;
    double alpha_pairwise_mean = 0.0;
    std::map<std::string, long> type_distribution;  // majority label -> item count
    long items_scored = 0;    // items with a full panel
    long items_excluded = 0;  // items dropped for a wrong panel size
    long undecided = 0;       // type items with no majority label
};

// Scores two-option items: majority = strictly more than panel/2 votes for the
// keyed option, unanimity = all of them. Items without exactly `panel` labels
// are excluded and counted.
AgreementReport score_choice_items(const std::vector<JudgmentItem>& items,
                                   const std::map<std::string, char>& keys,
                                   const ResponseTable& responses, int panel = 5);

// Scores causality-type items: majority label = any label with strictly more
// than panel/2 votes; undecided items stay out of the distribution.
AgreementReport score_type_items(const std::vector<JudgmentItem>& items,
                                 const ResponseTable& responses, int panel = 5);

// Krippendorff's nominal alpha per unordered annotator pair, averaged. Pairs
// with no co-labeled items drop out of the mean; zero expected disagreement
// counts as perfect agreement (1.0).
double pairwise_alpha(const ResponseTable& responses);

// Single alpha over all annotators at once (coincidence weights 1/(m_u - 1)).
double pooled_alpha(const ResponseTable& responses);

// CSV files. Items: item_id,kind,option_a,option_b. Key: item_id,key with
// key in {A, B, none}. Responses: item_id,annotator_id,label.
void write_items_file(const std::filesystem::path& path,
                      const std::vector<JudgmentItem>& items);
std::vector<JudgmentItem> read_items_file(const std::filesystem::path& path);
void write_key_file(const std::filesystem::path& path,
                    const std::vector<JudgmentItem>& items);
std::map<std::string, char> read_key_file(const std::filesystem::path& path);
void write_responses_file(const std::filesystem::path& path,
                          const std::vector<Response>& rows);
std::vector<Response> read_responses_file(const std::filesystem::path& path);

// Report serialization used by the scoring CLI.
std::string agreement_report_json(const AgreementReport& report);

}  // namespace cpcmine
