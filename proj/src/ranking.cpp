#include "cpcmine/ranking.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cpcmine/io_util.hpp"

namespace cpcmine {

namespace {

using PairKey = std::pair<std::string, std::string>;

std::set<PairKey> top_keys(const std::vector<MergedPair>& list, long k) {
    std::set<PairKey> keys;
    long limit = std::min<long>(k, static_cast<long>(list.size()));
    for (long i = 0; i < limit; ++i) {
        keys.insert({list[i].e1, list[i].e2});
    }
    return keys;
}

}  // namespace

std::map<std::string, long> apportion_largest_remainder(
    const std::map<std::string, long>& weights, long total) {
    if (total < 0) {
        throw std::invalid_argument("apportionment total must be nonnegative");
    }
    if (weights.empty()) {
        throw std::invalid_argument("apportionment needs at least one key");
    }
    long long weight_sum = 0;
    for (const auto& [key, w] : weights) {
        if (w < 0) {
            throw std::invalid_argument("negative weight for '" + key + "'");
        }
        weight_sum += w;
    }
    if (weight_sum == 0) {
        throw std::invalid_argument("apportionment weights sum to zero");
    }

    std::map<std::string, long> quota;
    struct Rem {
        long long remainder;
        long weight;
        std::string key;
    };
    std::vector<Rem> rems;
    long long assigned = 0;
    for (const auto& [key, w] : weights) {
        long long product = static_cast<long long>(total) * w;
        long share = static_cast<long>(product / weight_sum);
        quota[key] = share;
        assigned += share;
        rems.push_back({product % weight_sum, w, key});
    }
    long leftover = static_cast<long>(total - assigned);
    std::sort(rems.begin(), rems.end(), [](const Rem& a, const Rem& b) {
        if (a.remainder != b.remainder) {
            return a.remainder > b.remainder;
        }
        if (a.weight != b.weight) {
            return a.weight > b.weight;
        }
        return a.key < b.key;
    });
    for (long i = 0; i < leftover; ++i) {
        ++quota[rems[static_cast<std::size_t>(i)].key];
    }
    return quota;
}

SelectionResult select_extremes(
    const std::map<std::string, std::vector<ScoredPair>>& scores_by_scope,
    const SelectionConfig& config, const FilmCatalog& catalog) {
    if (config.high_total <= 0 || config.low_total <= 0) {
        throw std::invalid_argument("selection totals must be positive");
    }
    auto genre_films = catalog.films_per_genre();
    for (const auto& [genre, films] : genre_films) {
        if (!scores_by_scope.count(genre)) {
            throw std::invalid_argument("no scores for genre scope '" + genre + "'");
        }
        (void)films;
    }

    auto high_quota = apportion_largest_remainder(genre_films, config.high_total);
    auto low_quota = apportion_largest_remainder(genre_films, config.low_total);

    SelectionResult result;
    for (const auto& [genre, films] : genre_films) {
        (void)films;
        std::vector<ScoredPair> ranked;
        for (const auto& sp : scores_by_scope.at(genre)) {
            if (!config.include_self_pairs && sp.self_pair()) {
                continue;
            }
            ranked.push_back(sp);
        }
        std::sort(ranked.begin(), ranked.end(),
                  [](const ScoredPair& a, const ScoredPair& b) {
                      if (a.cpc != b.cpc) {
                          return a.cpc > b.cpc;
                      }
                      return std::tie(a.e1, a.e2) < std::tie(b.e1, b.e2);
                  });

        ScopeQuota hq{genre, high_quota.at(genre), 0};
        long take_high = std::min<long>(hq.quota, static_cast<long>(ranked.size()));
        for (long i = 0; i < take_high; ++i) {
            result.high.push_back(ranked[static_cast<std::size_t>(i)]);
        }
        hq.taken = take_high;
        result.high_quotas.push_back(hq);

        ScopeQuota lq{genre, low_quota.at(genre), 0};
        long take_low = std::min<long>(lq.quota, static_cast<long>(ranked.size()));
        // bottom of the ranking, worst first
        for (long i = 0; i < take_low; ++i) {
            result.low.push_back(ranked[ranked.size() - 1 - static_cast<std::size_t>(i)]);
        }
        lq.taken = take_low;
        result.low_quotas.push_back(lq);
    }
    return result;
}

std::vector<MergedPair> dedup_merge(
    const std::vector<ScoredPair>& selection,
    const std::map<std::string, std::map<std::string, ArgProfile>>& profiles_by_scope,
    bool keep_max) {
    struct Bucket {
        const ScoredPair* best = nullptr;
        std::set<std::string> scopes;
    };
    std::map<PairKey, Bucket> buckets;
    for (const auto& sp : selection) {
        auto& bucket = buckets[{sp.e1, sp.e2}];
        bucket.scopes.insert(sp.scope);
        if (!bucket.best || (keep_max ? sp.cpc > bucket.best->cpc
                                      : sp.cpc < bucket.best->cpc)) {
            bucket.best = &sp;
        }
    }

    auto aggregate_modal = [&](const std::string& lemma, const std::set<std::string>& scopes,
                               const ArgCombination& fallback) {
        CombinationCounts total;
        for (const auto& scope : scopes) {
            auto scope_it = profiles_by_scope.find(scope);
            if (scope_it == profiles_by_scope.end()) {
                continue;
            }
            auto prof_it = scope_it->second.find(lemma);
            if (prof_it == scope_it->second.end()) {
                continue;
            }
            for (const auto& [combo, count] : prof_it->second.counts) {
                total[combo] += count;
            }
        }
        if (total.empty()) {
            return fallback;
        }
        ArgProfile agg;
        agg.lemma = lemma;
        agg.counts = std::move(total);
        return agg.modal();
    };

    std::vector<MergedPair> merged;
    merged.reserve(buckets.size());
    for (const auto& [key, bucket] : buckets) {
        MergedPair mp;
        mp.e1 = key.first;
        mp.e2 = key.second;
        mp.best_cpc = bucket.best->cpc;
        mp.source_scopes = bucket.scopes;
        mp.args1 = aggregate_modal(mp.e1, bucket.scopes, bucket.best->args1);
        mp.args2 = aggregate_modal(mp.e2, bucket.scopes, bucket.best->args2);
        if (mp.args1.subj == Slot::None) {
            mp.args1.subj = Slot::Person;
        }
        if (mp.args2.subj == Slot::None) {
            mp.args2.subj = Slot::Person;
        }
        merged.push_back(std::move(mp));
    }

    std::sort(merged.begin(), merged.end(), [&](const MergedPair& a, const MergedPair& b) {
        if (a.best_cpc != b.best_cpc) {
            return keep_max ? a.best_cpc > b.best_cpc : a.best_cpc < b.best_cpc;
        }
        return std::tie(a.e1, a.e2) < std::tie(b.e1, b.e2);
    });
    return merged;
}

long overlap(const std::vector<MergedPair>& a, const std::vector<MergedPair>& b, long k) {
    if (k < 0) {
        throw std::invalid_argument("overlap k must be nonnegative");
    }
    auto keys_a = top_keys(a, k);
    auto keys_b = top_keys(b, k);
    long shared = 0;
    for (const auto& key : keys_a) {
        shared += keys_b.count(key) ? 1 : 0;
    }
    return shared;
}

std::map<std::pair<std::string, std::string>, long> overlap_matrix(
    const std::map<std::string, std::vector<MergedPair>>& lists, long k) {
    std::map<std::pair<std::string, std::string>, long> matrix;
    for (const auto& [name_a, list_a] : lists) {
        for (const auto& [name_b, list_b] : lists) {
            matrix[{name_a, name_b}] = overlap(list_a, list_b, k);
        }
    }
    return matrix;
}

std::vector<MergedPair> unique_to_scope(const std::vector<MergedPair>& scope_list,
                                        const std::vector<std::vector<MergedPair>>& others,
                                        long k) {
    std::set<PairKey> seen;
    for (const auto& other : others) {
        auto keys = top_keys(other, k);
        seen.insert(keys.begin(), keys.end());
    }
    std::vector<MergedPair> unique;
    long limit = std::min<long>(k, static_cast<long>(scope_list.size()));
    for (long i = 0; i < limit; ++i) {
        const auto& mp = scope_list[static_cast<std::size_t>(i)];
        if (!seen.count({mp.e1, mp.e2})) {
            unique.push_back(mp);
        }
    }
    return unique;
}

ExternalComparison compare_external(const std::vector<MergedPair>& merged,
                                    const std::vector<MergedPair>& external) {
    std::set<PairKey> external_keys;
    for (const auto& mp : external) {
        external_keys.insert({mp.e1, mp.e2});
    }
    std::set<PairKey> merged_keys;
    for (const auto& mp : merged) {
        merged_keys.insert({mp.e1, mp.e2});
    }
    ExternalComparison cmp;
    cmp.merged_size = static_cast<long>(merged_keys.size());
    cmp.external_size = static_cast<long>(external_keys.size());
    for (const auto& key : merged_keys) {
        if (external_keys.count(key)) {
            cmp.matches.push_back(key);
        }
    }
    return cmp;
}

namespace {

constexpr const char* kPairsHeader =
    "# e1_subj\te1_lemma\te1_particle\te1_dobj\te1_iobj\te2_subj\te2_lemma\te2_particle"
    "\te2_dobj\te2_iobj\tscore";

void append_event_cols(std::ostringstream& os, const std::string& lemma,
                       const ArgCombination& args) {
    os << slot_name(args.subj) << '\t' << lemma << '\t'
       << (args.particle.empty() ? "none" : args.particle) << '\t'
       << slot_name(args.dobj) << '\t' << slot_name(args.iobj);
}

}  // namespace

void write_pairs_file(const std::filesystem::path& path,
                      const std::vector<MergedPair>& pairs, bool with_score) {
    std::ostringstream os;
    os << kPairsHeader << '\n';
    for (const auto& mp : pairs) {
        append_event_cols(os, mp.e1, mp.args1);
        os << '\t';
        append_event_cols(os, mp.e2, mp.args2);
        if (with_score) {
            os << '\t' << format_double(mp.best_cpc);
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

std::vector<MergedPair> read_pairs_file(const std::filesystem::path& path) {
    const std::string source = path.string();
    std::vector<MergedPair> pairs;
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty() || line.front() == '#') {
            return;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 10 && fields.size() != 11) {
            throw ParseError(source, lineno,
                             "pair rows need 10 fields plus an optional score");
        }
        auto read_event = [&](std::size_t base, std::string& lemma, ArgCombination& args) {
            args.subj = slot_from_name(fields[base], source, lineno);
            lemma = fields[base + 1];
            if (fields[base + 2] != "none") {
                args.particle = fields[base + 2];
            }
            args.dobj = slot_from_name(fields[base + 3], source, lineno);
            args.iobj = slot_from_name(fields[base + 4], source, lineno);
            if (lemma.empty()) {
                throw ParseError(source, lineno, "empty event lemma");
            }
        };
        MergedPair mp;
        read_event(0, mp.e1, mp.args1);
        read_event(5, mp.e2, mp.args2);
        if (fields.size() == 11) {
            mp.best_cpc = parse_double(fields[10], source, lineno);
        }
        pairs.push_back(std::move(mp));
    });
    return pairs;
}

}  // namespace cpcmine
