#include "cpcmine/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cpcmine/io_util.hpp"

namespace cpcmine {

namespace {

// std::shuffle and the distribution classes are implementation-defined, so
// item files would differ across standard libraries. Draw from the raw engine
// instead; the modulo bias is irrelevant at these sizes.
std::size_t draw_below(std::mt19937& rng, std::size_t bound) {
    return static_cast<std::size_t>(rng() % bound);
}

void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::swap(idx[i - 1], idx[draw_below(rng, i)]);
    }
}

std::string item_id(const char* prefix, std::size_t ordinal) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-%04zu", prefix, ordinal);
    return buf;
}

const std::set<std::string>& type_labels() {
    static const std::set<std::string> labels = {"physical", "motivational",
                                                 "psychological", "enabling"};
    return labels;
}

}  // namespace

std::string_view item_kind_name(ItemKind kind) {
    switch (kind) {
        case ItemKind::HighVsLow:
            return "high_vs_low";
        case ItemKind::CpcVsExternal:
            return "cpc_vs_external";
        case ItemKind::CausalityType:
            return "causality_type";
    }
    return "high_vs_low";
}

ItemKind item_kind_from_name(std::string_view name, const std::string& source,
                             std::size_t lineno) {
    if (name == "high_vs_low") {
        return ItemKind::HighVsLow;
    }
    if (name == "cpc_vs_external") {
        return ItemKind::CpcVsExternal;
    }
    if (name == "causality_type") {
        return ItemKind::CausalityType;
    }
    throw ParseError(source, lineno, "unknown item kind '" + std::string(name) + "'");
}

std::string render_event(const std::string& lemma, const ArgCombination& args) {
    auto slot_text = [](Slot slot) -> const char* {
        switch (slot) {
            case Slot::Person:
                return "[person]";
            case Slot::Something:
                return "[smth]";
            case Slot::None:
                return nullptr;
        }
        return nullptr;
    };
    std::string out;
    if (const char* subj = slot_text(args.subj)) {
        out += subj;
        out += ' ';
    }
    out += lemma;
    if (!args.particle.empty()) {
        out += ' ';
        out += args.particle;
    }
    if (const char* iobj = slot_text(args.iobj)) {
        out += ' ';
        out += iobj;
    }
    if (const char* dobj = slot_text(args.dobj)) {
        out += ' ';
        out += dobj;
    }
    return out;
}

std::string render_pair(const MergedPair& pair) {
    return render_event(pair.e1, pair.args1) + " - " + render_event(pair.e2, pair.args2);
}

std::vector<JudgmentItem> build_high_vs_low_items(const std::vector<MergedPair>& high,
                                                  const std::vector<MergedPair>& low,
                                                  unsigned seed) {
    if (low.size() < high.size()) {
        throw std::invalid_argument("need at least as many low pairs as high pairs (" +
                                    std::to_string(low.size()) + " < " +
                                    std::to_string(high.size()) + ")");
    }
    std::mt19937 rng(seed);
    std::vector<std::size_t> low_order(low.size());
    for (std::size_t i = 0; i < low.size(); ++i) {
        low_order[i] = i;
    }
    shuffle_indices(low_order, rng);

    std::vector<JudgmentItem> items;
    items.reserve(high.size());
    for (std::size_t i = 0; i < high.size(); ++i) {
        JudgmentItem item;
        item.item_id = item_id("hl", i + 1);
        item.kind = ItemKind::HighVsLow;
        std::string high_text = render_pair(high[i]);
        std::string low_text = render_pair(low[low_order[i]]);
        bool high_is_a = draw_below(rng, 2) == 0;
        item.option_a = high_is_a ? high_text : low_text;
        item.option_b = high_is_a ? low_text : high_text;
        item.hidden_key = high_is_a ? 'A' : 'B';
        items.push_back(std::move(item));
    }
    return items;
}

ComparisonBuild build_comparison_items(const std::vector<MergedPair>& cpc_pairs,
                                       const std::vector<MergedPair>& external,
                                       long sample_size, unsigned seed) {
    if (sample_size <= 0) {
        throw std::invalid_argument("sample size must be positive");
    }
    std::set<std::string> distinct_firsts;
    for (const auto& mp : cpc_pairs) {
        distinct_firsts.insert(mp.e1);
    }
    if (static_cast<long>(distinct_firsts.size()) < sample_size) {
        throw std::invalid_argument(
            "cannot sample " + std::to_string(sample_size) +
            " pairs with distinct first events; max feasible is " +
            std::to_string(distinct_firsts.size()));
    }

    std::mt19937 rng(seed);
    std::vector<std::size_t> order(cpc_pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    shuffle_indices(order, rng);

    std::vector<const MergedPair*> sample;
    std::set<std::string> used_firsts;
    for (std::size_t idx : order) {
        if (static_cast<long>(sample.size()) == sample_size) {
            break;
        }
        const MergedPair& mp = cpc_pairs[idx];
        if (used_firsts.insert(mp.e1).second) {
            sample.push_back(&mp);
        }
    }

    // best external match per first-event lemma: highest score, then e2
    std::map<std::string, const MergedPair*> external_by_first;
    for (const auto& mp : external) {
        auto [it, inserted] = external_by_first.try_emplace(mp.e1, &mp);
        if (!inserted) {
            const MergedPair& cur = *it->second;
            if (mp.best_cpc > cur.best_cpc ||
                (mp.best_cpc == cur.best_cpc && mp.e2 < cur.e2)) {
                it->second = &mp;
            }
        }
    }

    ComparisonBuild build;
    std::size_t ordinal = 0;
    for (const MergedPair* cpc_pair : sample) {
        auto match = external_by_first.find(cpc_pair->e1);
        if (match == external_by_first.end()) {
            build.unmatched.push_back(cpc_pair->e1);
            continue;
        }
        JudgmentItem item;
        item.item_id = item_id("cmp", ++ordinal);
        item.kind = ItemKind::CpcVsExternal;
        std::string cpc_text = render_pair(*cpc_pair);
        std::string ext_text = render_pair(*match->second);
        bool cpc_is_a = draw_below(rng, 2) == 0;
        item.option_a = cpc_is_a ? cpc_text : ext_text;
        item.option_b = cpc_is_a ? ext_text : cpc_text;
        item.hidden_key = cpc_is_a ? 'A' : 'B';
        build.items.push_back(std::move(item));
    }
    return build;
}

std::vector<JudgmentItem> build_type_items(const std::vector<MergedPair>& pairs) {
    std::vector<JudgmentItem> items;
    items.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        JudgmentItem item;
        item.item_id = item_id("type", i + 1);
        item.kind = ItemKind::CausalityType;
        item.option_a = render_pair(pairs[i]);
        items.push_back(std::move(item));
    }
    return items;
}

ResponseTable group_responses(const std::vector<Response>& rows) {
    ResponseTable table;
    for (const auto& row : rows) {
        auto [it, inserted] = table[row.item_id].try_emplace(row.annotator_id, row.label);
        (void)it;
        if (!inserted) {
            throw std::invalid_argument("annotator '" + row.annotator_id +
                                        "' labeled item '" + row.item_id + "' twice");
        }
    }
    return table;
}

namespace {

// Nominal-data alpha from a label x label coincidence matrix.
double alpha_from_coincidence(const std::map<std::string, std::map<std::string, double>>& o) {
    std::map<std::string, double> row_sum;
    double total = 0.0;
    double observed_disagree = 0.0;
    for (const auto& [a, row] : o) {
        for (const auto& [b, mass] : row) {
            row_sum[a] += mass;
            total += mass;
            if (a != b) {
                observed_disagree += mass;
            }
        }
    }
    double expected_disagree = 0.0;
    for (const auto& [a, na] : row_sum) {
        for (const auto& [b, nb] : row_sum) {
            if (a != b) {
                expected_disagree += na * nb;
            }
        }
    }
    if (expected_disagree == 0.0) {
        // one label in play: no room to disagree, call it perfect agreement
        return 1.0;
    }
    double d_o = observed_disagree / total;
    double d_e = expected_disagree / (total * (total - 1.0));
    return 1.0 - d_o / d_e;
}

}  // namespace

double pairwise_alpha(const ResponseTable& responses) {
    std::set<std::string> annotators;
    for (const auto& [item, labels] : responses) {
        (void)item;
        for (const auto& [annotator, label] : labels) {
            (void)label;
            annotators.insert(annotator);
        }
    }
    if (annotators.size() < 2) {
        throw std::invalid_argument("pairwise alpha needs at least two annotators");
    }

    std::vector<std::string> names(annotators.begin(), annotators.end());
    double sum = 0.0;
    long pairs_used = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            std::map<std::string, std::map<std::string, double>> o;
            bool any = false;
            for (const auto& [item, labels] : responses) {
                (void)item;
                auto a = labels.find(names[i]);
                auto b = labels.find(names[j]);
                if (a == labels.end() || b == labels.end()) {
                    continue;
                }
                o[a->second][b->second] += 1.0;
                o[b->second][a->second] += 1.0;
                any = true;
            }
            if (!any) {
                continue;
            }
            sum += alpha_from_coincidence(o);
            ++pairs_used;
        }
    }
    if (pairs_used == 0) {
        throw std::invalid_argument("no annotator pair shares a labeled item");
    }
    return sum / static_cast<double>(pairs_used);
}

double pooled_alpha(const ResponseTable& responses) {
    std::map<std::string, std::map<std::string, double>> o;
    bool any = false;
    for (const auto& [item, labels] : responses) {
        (void)item;
        if (labels.size() < 2) {
            continue;
        }
        double weight = 1.0 / static_cast<double>(labels.size() - 1);
        for (const auto& [annot_a, label_a] : labels) {
            for (const auto& [annot_b, label_b] : labels) {
                if (annot_a == annot_b) {
                    continue;
                }
                o[label_a][label_b] += weight;
                any = true;
            }
        }
    }
    if (!any) {
        throw std::invalid_argument("no item carries two or more labels");
    }
    return alpha_from_coincidence(o);
}

namespace {

struct PanelSplit {
    ResponseTable valid;
    long excluded = 0;
};

PanelSplit split_by_panel(const std::vector<JudgmentItem>& items,
                          const ResponseTable& responses, int panel) {
    if (panel < 1) {
        throw std::invalid_argument("panel size must be at least 1");
    }
    std::set<std::string> known;
    for (const auto& item : items) {
        known.insert(item.item_id);
    }
    for (const auto& [item_id, labels] : responses) {
        (void)labels;
        if (!known.count(item_id)) {
            throw std::invalid_argument("response references unknown item '" + item_id +
                                        "'");
        }
    }
    PanelSplit out;
    for (const auto& item : items) {
        auto it = responses.find(item.item_id);
        std::size_t got = it == responses.end() ? 0 : it->second.size();
        if (got == static_cast<std::size_t>(panel)) {
            out.valid[item.item_id] = it->second;
        } else {
            ++out.excluded;
        }
    }
    return out;
}

}  // namespace

AgreementReport score_choice_items(const std::vector<JudgmentItem>& items,
                                   const std::map<std::string, char>& keys,
                                   const ResponseTable& responses, int panel) {
    PanelSplit split = split_by_panel(items, responses, panel);
    if (split.valid.empty()) {
        throw std::invalid_argument("no item has a full annotator panel");
    }

    AgreementReport report;
    report.items_excluded = split.excluded;
    long majority = 0;
    long unanimous = 0;
    for (const auto& [item_id, labels] : split.valid) {
        auto key_it = keys.find(item_id);
        if (key_it == keys.end() || (key_it->second != 'A' && key_it->second != 'B')) {
            throw std::invalid_argument("missing or invalid key for item '" + item_id +
                                        "'");
        }
        std::string keyed(1, key_it->second);
        long for_key = 0;
        for (const auto& [annotator, label] : labels) {
            (void)annotator;
            if (label != "A" && label != "B") {
                throw std::invalid_argument("label '" + label + "' on item '" + item_id +
                                            "' is not A or B");
            }
            if (label == keyed) {
                ++for_key;
            }
        }
        if (2 * for_key > panel) {
            ++majority;
        }
        if (for_key == panel) {
            ++unanimous;
        }
        ++report.items_scored;
    }
    report.majority_rate = static_cast<double>(majority) / report.items_scored;
    report.unanimity_rate = static_cast<double>(unanimous) / report.items_scored;
    report.alpha_pairwise_mean = pairwise_alpha(split.valid);
    return report;
}

AgreementReport score_type_items(const std::vector<JudgmentItem>& items,
                                 const ResponseTable& responses, int panel) {
    PanelSplit split = split_by_panel(items, responses, panel);
    if (split.valid.empty()) {
        throw std::invalid_argument("no item has a full annotator panel");
    }

    AgreementReport report;
    report.items_excluded = split.excluded;
    long majority = 0;
    long unanimous = 0;
    for (const auto& [item_id, labels] : split.valid) {
        std::map<std::string, long> votes;
        for (const auto& [annotator, label] : labels) {
            (void)annotator;
            if (!type_labels().count(label)) {
                throw std::invalid_argument("label '" + label + "' on item '" + item_id +
                                            "' is not a causality type");
            }
            ++votes[label];
        }
        const std::string* winner = nullptr;
        for (const auto& [label, count] : votes) {
            if (2 * count > panel) {
                winner = &label;
                break;  // at most one label can clear n/2
            }
        }
        if (winner) {
            ++majority;
            ++report.type_distribution[*winner];
            if (votes.at(*winner) == panel) {
                ++unanimous;
            }
        } else {
            ++report.undecided;
        }
        ++report.items_scored;
    }
    report.majority_rate = static_cast<double>(majority) / report.items_scored;
    report.unanimity_rate = static_cast<double>(unanimous) / report.items_scored;
    report.alpha_pairwise_mean = pairwise_alpha(split.valid);
    return report;
}

void write_items_file(const std::filesystem::path& path,
                      const std::vector<JudgmentItem>& items) {
    std::ostringstream os;
    os << "item_id,kind,option_a,option_b\n";
    for (const auto& item : items) {
        os << csv_quote(item.item_id) << ',' << item_kind_name(item.kind) << ','
           << csv_quote(item.option_a) << ',' << csv_quote(item.option_b) << '\n';
    }
    write_text_file(path, os.str());
}

std::vector<JudgmentItem> read_items_file(const std::filesystem::path& path) {
    const std::string source = path.string();
    std::vector<JudgmentItem> items;
    bool saw_header = false;
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty()) {
            return;
        }
        auto fields = parse_csv_line(line, source, lineno);
        if (!saw_header) {
            if (fields != std::vector<std::string>{"item_id", "kind", "option_a",
                                                   "option_b"}) {
                throw ParseError(source, lineno, "unexpected items header");
            }
            saw_header = true;
            return;
        }
        if (fields.size() != 4) {
            throw ParseError(source, lineno, "item rows need 4 fields");
        }
        JudgmentItem item;
        item.item_id = fields[0];
        item.kind = item_kind_from_name(fields[1], source, lineno);
        item.option_a = fields[2];
        item.option_b = fields[3];
        if (item.item_id.empty()) {
            throw ParseError(source, lineno, "empty item_id");
        }
        items.push_back(std::move(item));
    });
    if (!saw_header) {
        throw ParseError(source, 0, "items file has no header row");
    }
    return items;
}

void write_key_file(const std::filesystem::path& path,
                    const std::vector<JudgmentItem>& items) {
    std::ostringstream os;
    os << "item_id,key\n";
    for (const auto& item : items) {
        os << csv_quote(item.item_id) << ',';
        if (item.hidden_key == 'A' || item.hidden_key == 'B') {
            os << item.hidden_key;
        } else {
            os << "none";
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

std::map<std::string, char> read_key_file(const std::filesystem::path& path) {
    const std::string source = path.string();
    std::map<std::string, char> keys;
    bool saw_header = false;
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty()) {
            return;
        }
        auto fields = parse_csv_line(line, source, lineno);
        if (!saw_header) {
            if (fields != std::vector<std::string>{"item_id", "key"}) {
                throw ParseError(source, lineno, "unexpected key header");
            }
            saw_header = true;
            return;
        }
        if (fields.size() != 2) {
            throw ParseError(source, lineno, "key rows need 2 fields");
        }
        char key = 0;
        if (fields[1] == "A") {
            key = 'A';
        } else if (fields[1] == "B") {
            key = 'B';
        } else if (fields[1] != "none") {
            throw ParseError(source, lineno, "key must be A, B, or none");
        }
        if (!keys.emplace(fields[0], key).second) {
            throw ParseError(source, lineno, "duplicate key for item '" + fields[0] + "'");
        }
    });
    if (!saw_header) {
        throw ParseError(source, 0, "key file has no header row");
    }
    return keys;
}

void write_responses_file(const std::filesystem::path& path,
                          const std::vector<Response>& rows) {
    std::ostringstream os;
    os << "item_id,annotator_id,label\n";
    for (const auto& row : rows) {
        os << csv_quote(row.item_id) << ',' << csv_quote(row.annotator_id) << ','
           << csv_quote(row.label) << '\n';
    }
    write_text_file(path, os.str());
}

std::vector<Response> read_responses_file(const std::filesystem::path& path) {
    const std::string source = path.string();
    std::vector<Response> rows;
    bool saw_header = false;
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty()) {
            return;
        }
        auto fields = parse_csv_line(line, source, lineno);
        if (!saw_header) {
            if (fields != std::vector<std::string>{"item_id", "annotator_id", "label"}) {
                throw ParseError(source, lineno, "unexpected responses header");
            }
            saw_header = true;
            return;
        }
        if (fields.size() != 3) {
            throw ParseError(source, lineno, "response rows need 3 fields");
        }
        if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw ParseError(source, lineno, "empty response field");
        }
        rows.push_back({fields[0], fields[1], fields[2]});
    });
    if (!saw_header) {
        throw ParseError(source, 0, "responses file has no header row");
    }
    return rows;
}

std::string agreement_report_json(const AgreementReport& report) {
    nlohmann::json j;
    j["majority_rate"] = report.majority_rate;
    j["unanimity_rate"] = report.unanimity_rate;
    j["alpha_pairwise_mean"] = report.alpha_pairwise_mean;
    j["items_scored"] = report.items_scored;
    j["items_excluded"] = report.items_excluded;
    j["undecided"] = report.undecided;
    j["type_distribution"] = nlohmann::json::object();
    for (const auto& [label, count] : report.type_distribution) {
        j["type_distribution"][label] = count;
    }
    return j.dump(2) + "\n";
}

}  // namespace cpcmine
