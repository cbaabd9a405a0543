#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cpcmine/counts.hpp"
#include "cpcmine/events.hpp"

namespace cpcmine {

// Pointwise mutual information of the unordered pair under the table's
// estimators. Natural log, like every score here.
double pmi(const PairCountTable& table, const std::string& e1, const std::string& e2);

// CP(e1,e2) = pmi(e1,e2) + ln(P(e1->e2) / P(e2->e1)), both directions smoothed.
double causal_potential(const PairCountTable& table, const std::string& e1,
                        const std::string& e2);

// Sum of cp_per_window[i-1] / i for windows i = 1..w_max.
double cpc_from_cp(const std::vector<double>& cp_per_window);

// CPC over tables covering windows 1..w_max (validated).
double cpc(const std::vector<PairCountTable>& tables, const std::string& e1,
           const std::string& e2);

// Symmetric-conditional-probability baseline on the table's raw ordered count:
// (count(e1->e2)/unigram(e1)) * (count(e1->e2)/unigram(e2)). No smoothing, so
// unseen pairs score 0; order-sensitive by construction.
double scp(const PairCountTable& table, const std::string& e1, const std::string& e2);

struct ScoredPair {
    std::string scope;
    std::string e1;
    std::string e2;
    ArgCombination args1;
    ArgCombination args2;
    std::map<int, double> pmi_per_window;
    std::map<int, double> cp_per_window;
    double cpc = 0.0;
    double scp = 0.0;
    std::map<int, long> support;  // raw ordered count per window

    bool self_pair() const { return e1 == e2; }
};

// Scores every ordered pair whose window-1 observed count reaches min_support.
// tables must cover windows 1..w_max of a single scope; profiles supply the
// modal argument combinations. Output sorted by cpc descending, ties by
// (e1, e2) ascending.
std::vector<ScoredPair> score_scope(const std::vector<PairCountTable>& tables,
                                    const std::map<std::string, ArgProfile>& profiles,
                                    long min_support);

// Pipe-joined slot rendering used in the scores file: subj|dobj|iobj|particle,
// empty slots and missing particles written as "none".
std::string render_args(const ArgCombination& args);
ArgCombination parse_args(std::string_view text, const std::string& source,
                          std::size_t lineno);

// Scores TSV. One '#'-prefixed header row names the columns; the column set
// widens with w_max (pmi_w1.., cp_w1.., support_w1..).
void write_scores_file(const std::filesystem::path& path,
                       const std::vector<ScoredPair>& pairs);
std::vector<ScoredPair> read_scores_file(const std::filesystem::path& path);

}  // namespace cpcmine
