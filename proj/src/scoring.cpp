#include "cpcmine/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cpcmine/io_util.hpp"

namespace cpcmine {

namespace {

void check_windows(const std::vector<PairCountTable>& tables) {
    if (tables.empty()) {
        throw std::invalid_argument("no count tables given");
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (tables[i].window != static_cast<int>(i) + 1) {
            throw std::invalid_argument("count tables must cover windows 1..w_max in order");
        }
    }
}

}  // namespace

double pmi(const PairCountTable& table, const std::string& e1, const std::string& e2) {
    double joint = table.p_joint(e1, e2);
    double marginal = table.p_event(e1) * table.p_event(e2);
    return std::log(joint / marginal);
}

double causal_potential(const PairCountTable& table, const std::string& e1,
                        const std::string& e2) {
    double forward = table.p_ordered(e1, e2);
    double backward = table.p_ordered(e2, e1);
    return pmi(table, e1, e2) + std::log(forward / backward);
}

double cpc_from_cp(const std::vector<double>& cp_per_window) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cp_per_window.size(); ++i) {
        sum += cp_per_window[i] / static_cast<double>(i + 1);
    }
    return sum;
}

double cpc(const std::vector<PairCountTable>& tables, const std::string& e1,
           const std::string& e2) {
    check_windows(tables);
    std::vector<double> cps;
    cps.reserve(tables.size());
    for (const auto& table : tables) {
        cps.push_back(causal_potential(table, e1, e2));
    }
    return cpc_from_cp(cps);
}

double scp(const PairCountTable& table, const std::string& e1, const std::string& e2) {
    long u1 = 0;
    long u2 = 0;
    if (auto it = table.unigram.find(e1); it != table.unigram.end()) {
        u1 = it->second;
    }
    if (auto it = table.unigram.find(e2); it != table.unigram.end()) {
        u2 = it->second;
    }
    if (u1 == 0 || u2 == 0) {
        throw std::invalid_argument("unknown event lemma: " + (u1 == 0 ? e1 : e2));
    }
    double fwd = static_cast<double>(table.observed(e1, e2));
    return (fwd / static_cast<double>(u1)) * (fwd / static_cast<double>(u2));
}

std::vector<ScoredPair> score_scope(const std::vector<PairCountTable>& tables,
                                    const std::map<std::string, ArgProfile>& profiles,
                                    long min_support) {
    check_windows(tables);
    if (min_support < 1) {
        throw std::invalid_argument("min_support must be at least 1");
    }

    auto modal_of = [&](const std::string& lemma) {
        auto it = profiles.find(lemma);
        return it == profiles.end() ? ArgCombination{} : it->second.modal();
    };

    const PairCountTable& base = tables.front();
    std::vector<ScoredPair> out;
    for (const auto& [key, count] : base.ordered_pair) {
        if (count < min_support) {
            continue;
        }
        ScoredPair sp;
        sp.scope = base.scope;
        sp.e1 = key.first;
        sp.e2 = key.second;
        sp.args1 = modal_of(sp.e1);
        sp.args2 = modal_of(sp.e2);
        std::vector<double> cps;
        cps.reserve(tables.size());
        for (const auto& table : tables) {
            double cp = causal_potential(table, sp.e1, sp.e2);
            sp.pmi_per_window[table.window] = pmi(table, sp.e1, sp.e2);
            sp.cp_per_window[table.window] = cp;
            sp.support[table.window] = table.observed(sp.e1, sp.e2);
            cps.push_back(cp);
        }
        sp.cpc = cpc_from_cp(cps);
        sp.scp = scp(tables.back(), sp.e1, sp.e2);
        out.push_back(std::move(sp));
    }

    std::sort(out.begin(), out.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.cpc != b.cpc) {
            return a.cpc > b.cpc;
        }
        return std::tie(a.e1, a.e2) < std::tie(b.e1, b.e2);
    });
    return out;
}

std::string render_args(const ArgCombination& args) {
    std::string text;
    text += slot_name(args.subj);
    text += '|';
    text += slot_name(args.dobj);
    text += '|';
    text += slot_name(args.iobj);
    text += '|';
    text += args.particle.empty() ? "none" : args.particle;
    return text;
}

ArgCombination parse_args(std::string_view text, const std::string& source,
                          std::size_t lineno) {
    auto fields = split(text, '|');
    if (fields.size() != 4) {
        throw ParseError(source, lineno, "argument combinations need 4 |-separated slots");
    }
    ArgCombination args;
    args.subj = slot_from_name(fields[0], source, lineno);
    args.dobj = slot_from_name(fields[1], source, lineno);
    args.iobj = slot_from_name(fields[2], source, lineno);
    if (fields[3] != "none") {
        args.particle = fields[3];
    }
    return args;
}

namespace {

std::string scores_header(int w_max) {
    std::string header = "# scope\te1\targs1\te2\targs2";
    auto block = [&](const char* prefix) {
        for (int w = 1; w <= w_max; ++w) {
            header += '\t';
            header += prefix;
            header += "_w";
            header += std::to_string(w);
        }
    };
    block("pmi");
    block("cp");
    header += "\tcpc\tscp";
    block("support");
    return header;
}

}  // namespace

void write_scores_file(const std::filesystem::path& path,
                       const std::vector<ScoredPair>& pairs) {
    int w_max = 0;
    for (const auto& sp : pairs) {
        w_max = std::max(w_max, static_cast<int>(sp.cp_per_window.size()));
    }
    if (w_max == 0) {
        w_max = 1;
    }
    std::ostringstream os;
    os << scores_header(w_max) << '\n';
    for (const auto& sp : pairs) {
        os << sp.scope << '\t' << sp.e1 << '\t' << render_args(sp.args1) << '\t' << sp.e2
           << '\t' << render_args(sp.args2);
        for (int w = 1; w <= w_max; ++w) {
            os << '\t' << format_double(sp.pmi_per_window.at(w));
        }
        for (int w = 1; w <= w_max; ++w) {
            os << '\t' << format_double(sp.cp_per_window.at(w));
        }
        os << '\t' << format_double(sp.cpc) << '\t' << format_double(sp.scp);
        for (int w = 1; w <= w_max; ++w) {
            os << '\t' << sp.support.at(w);
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

std::vector<ScoredPair> read_scores_file(const std::filesystem::path& path) {
    const std::string source = path.string();
    std::string text = read_text_file(path);

    int w_max = 0;
    bool saw_header = false;
    std::vector<ScoredPair> pairs;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty()) {
            return;
        }
        if (line.front() == '#') {
            std::size_t cols = split(line, '\t').size();
            if (cols < 8 || (cols - 7) % 3 != 0) {
                throw ParseError(source, lineno, "malformed scores header");
            }
            w_max = static_cast<int>((cols - 7) / 3);
            if (std::string(line) != scores_header(w_max)) {
                throw ParseError(source, lineno, "unexpected scores header layout");
            }
            saw_header = true;
            return;
        }
        if (!saw_header) {
            throw ParseError(source, lineno, "scores data before header row");
        }
        auto fields = split(line, '\t');
        if (fields.size() != static_cast<std::size_t>(7 + 3 * w_max)) {
            throw ParseError(source, lineno, "score row has wrong field count");
        }
        ScoredPair sp;
        sp.scope = fields[0];
        sp.e1 = fields[1];
        sp.args1 = parse_args(fields[2], source, lineno);
        sp.e2 = fields[3];
        sp.args2 = parse_args(fields[4], source, lineno);
        std::size_t at = 5;
        for (int w = 1; w <= w_max; ++w) {
            sp.pmi_per_window[w] = parse_double(fields[at++], source, lineno);
        }
        for (int w = 1; w <= w_max; ++w) {
            sp.cp_per_window[w] = parse_double(fields[at++], source, lineno);
        }
        sp.cpc = parse_double(fields[at++], source, lineno);
        sp.scp = parse_double(fields[at++], source, lineno);
        for (int w = 1; w <= w_max; ++w) {
            sp.support[w] = parse_long(fields[at++], source, lineno);
        }
        pairs.push_back(std::move(sp));
    });
    if (!saw_header) {
        throw ParseError(source, 0, "scores file has no header row");
    }
    return pairs;
}

}  // namespace cpcmine
