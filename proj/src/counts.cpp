#include "cpcmine/counts.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cpcmine/io_util.hpp"

namespace cpcmine {

std::string_view window_mode_name(WindowMode mode) {
    return mode == WindowMode::Cumulative ? "cumulative" : "exact";
}

WindowMode window_mode_from_name(std::string_view name) {
    if (name == "cumulative") return WindowMode::Cumulative;
    if (name == "exact") return WindowMode::Exact;
    throw std::invalid_argument("unknown window mode '" + std::string(name) + "'");
}

long PairCountTable::observed(const std::string& e1, const std::string& e2) const {
    auto it = ordered_pair.find({e1, e2});
    return it == ordered_pair.end() ? 0 : it->second;
}

long PairCountTable::smoothed_count(const std::string& e1, const std::string& e2) const {
    if (!contains(e1)) {
        throw std::invalid_argument("lemma not in unigram table: '" + e1 + "'");
    }
    if (!contains(e2)) {
        throw std::invalid_argument("lemma not in unigram table: '" + e2 + "'");
    }
    long c = observed(e1, e2);
    return c > 0 ? c : 1;
}

double PairCountTable::p_event(const std::string& e) const {
    if (!contains(e)) {
        throw std::invalid_argument("lemma not in unigram table: '" + e + "'");
    }
    return static_cast<double>(unigram.at(e)) / static_cast<double>(total_events);
}

double PairCountTable::p_ordered(const std::string& e1, const std::string& e2) const {
    if (total_ordered_pairs <= 0) {
        throw std::invalid_argument("table has no ordered pairs");
    }
    return static_cast<double>(smoothed_count(e1, e2)) /
           static_cast<double>(total_ordered_pairs);
}

double PairCountTable::p_joint(const std::string& e1, const std::string& e2) const {
    if (total_ordered_pairs <= 0) {
        throw std::invalid_argument("table has no ordered pairs");
    }
    long joint = (e1 == e2) ? smoothed_count(e1, e2)
                            : smoothed_count(e1, e2) + smoothed_count(e2, e1);
    return static_cast<double>(joint) / static_cast<double>(total_ordered_pairs);
}

std::vector<std::vector<std::string>> scene_streams(const std::vector<EventInstance>& events) {
    std::map<std::pair<std::string, long>, std::vector<std::pair<long, std::string>>> by_scene;
    for (const auto& ev : events) {
        by_scene[{ev.film_id, ev.scene_ordinal}].emplace_back(ev.linear_index, ev.lemma);
    }
    std::vector<std::vector<std::string>> streams;
    streams.reserve(by_scene.size());
    for (auto& [key, items] : by_scene) {
        (void)key;
        std::stable_sort(items.begin(), items.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::string> stream;
        stream.reserve(items.size());
        for (auto& [idx, lemma] : items) {
            (void)idx;
            stream.push_back(std::move(lemma));
        }
        streams.push_back(std::move(stream));
    }
    return streams;
}

std::vector<EventInstance> filter_scope(const std::vector<EventInstance>& events,
                                        const AnalysisScope& scope) {
    std::vector<EventInstance> out;
    for (const auto& ev : events) {
        if (scope.film_ids.count(ev.film_id) > 0) {
            out.push_back(ev);
        }
    }
    return out;
}

std::vector<PairCountTable> count_scope(const std::vector<std::vector<std::string>>& scenes,
                                        int w_max, WindowMode mode,
                                        const std::string& scope_name) {
    if (w_max < 1) {
        throw std::invalid_argument("w_max must be >= 1");
    }
    std::map<std::string, long> unigram;
    long total_events = 0;
    for (const auto& scene : scenes) {
        for (const auto& lemma : scene) {
            ++unigram[lemma];
            ++total_events;
        }
    }
    std::vector<PairCountTable> tables;
    tables.reserve(static_cast<std::size_t>(w_max));
    for (int w = 1; w <= w_max; ++w) {
        PairCountTable table;
        table.scope = scope_name;
        table.window = w;
        table.mode = mode;
        table.unigram = unigram;
        table.total_events = total_events;
        for (const auto& scene : scenes) {
            const auto n = static_cast<long>(scene.size());
            for (long i = 0; i < n; ++i) {
                long k_lo = (mode == WindowMode::Cumulative) ? 1 : w;
                for (long k = k_lo; k <= w; ++k) {
                    if (i + k >= n) {
                        break;
                    }
                    ++table.ordered_pair[{scene[i], scene[i + k]}];
                    ++table.total_ordered_pairs;
                }
            }
        }
        tables.push_back(std::move(table));
    }
    return tables;
}

std::string sanitize_scope_filename(const std::string& scope) {
    std::string out;
    out.reserve(scope.size());
    for (char c : scope) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '-' || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "_" : out;
}

void write_count_tables(const std::filesystem::path& dir,
                        const std::vector<PairCountTable>& tables) {
    std::filesystem::create_directories(dir);
    std::set<std::string> unigrams_written;
    for (const auto& t : tables) {
        const std::string base = sanitize_scope_filename(t.scope);
        // Unigram counts are window-independent, so one file per scope.
        if (unigrams_written.insert(t.scope).second) {
            std::ostringstream os;
            os << "# scope\t" << t.scope << '\n';
            os << "# total_events\t" << t.total_events << '\n';
            for (const auto& [lemma, count] : t.unigram) {
                os << lemma << '\t' << count << '\n';
            }
            write_text_file(dir / (base + ".unigrams.tsv"), os.str());
        }
        std::ostringstream os;
        os << "# scope\t" << t.scope << '\n';
        os << "# window\t" << t.window << '\n';
        os << "# window_mode\t" << window_mode_name(t.mode) << '\n';
        os << "# total_events\t" << t.total_events << '\n';
        os << "# total_ordered_pairs\t" << t.total_ordered_pairs << '\n';
        for (const auto& [pair, count] : t.ordered_pair) {
            os << pair.first << '\t' << pair.second << '\t' << count << '\n';
        }
        std::ostringstream name;
        name << base << "__w" << t.window << ".pairs.tsv";
        write_text_file(dir / name.str(), os.str());
    }
}

namespace {

std::map<std::string, std::string> read_hash_headers(std::string_view text,
                                                     const std::string& source) {
    std::map<std::string, std::string> headers;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty() || line.front() != '#') {
            return;
        }
        auto fields = split(line.substr(1), '\t');
        if (fields.size() != 2) {
            throw ParseError(source, lineno, "malformed header line");
        }
        headers[trim(fields[0])] = fields[1];
    });
    return headers;
}

}  // namespace

std::map<std::string, std::vector<PairCountTable>> read_count_tables(
    const std::filesystem::path& dir) {
    struct ScopeData {
        std::map<std::string, long> unigram;
        long total_events = 0;
        bool has_unigrams = false;
        std::map<int, PairCountTable> windows;
    };
    std::map<std::string, ScopeData> scopes;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    for (const auto& path : files) {
        const std::string name = path.filename().string();
        const std::string source = path.string();
        if (name.size() > 13 && name.substr(name.size() - 13) == ".unigrams.tsv") {
            std::string text = read_text_file(path);
            auto headers = read_hash_headers(text, source);
            if (!headers.count("scope") || !headers.count("total_events")) {
                throw ParseError(source, 0, "missing scope/total_events headers");
            }
            auto& data = scopes[headers["scope"]];
            data.total_events = parse_long(headers["total_events"], source, 0);
            data.has_unigrams = true;
            for_each_line(text, [&](std::string_view line, std::size_t lineno) {
                if (line.empty() || line.front() == '#' || trim(line).empty()) {
                    return;
                }
                auto fields = split(line, '\t');
                if (fields.size() != 2) {
                    throw ParseError(source, lineno, "unigram rows need 2 fields");
                }
                data.unigram[fields[0]] = parse_long(fields[1], source, lineno);
            });
        } else if (name.size() > 10 && name.substr(name.size() - 10) == ".pairs.tsv") {
            std::string text = read_text_file(path);
            auto headers = read_hash_headers(text, source);
            for (const char* required :
                 {"scope", "window", "total_events", "total_ordered_pairs"}) {
                if (!headers.count(required)) {
                    throw ParseError(source, 0,
                                     std::string("missing header '") + required + "'");
                }
            }
            PairCountTable table;
            table.scope = headers["scope"];
            table.window = static_cast<int>(parse_long(headers["window"], source, 0));
            if (headers.count("window_mode")) {
                table.mode = window_mode_from_name(headers["window_mode"]);
            }
            table.total_events = parse_long(headers["total_events"], source, 0);
            table.total_ordered_pairs = parse_long(headers["total_ordered_pairs"], source, 0);
            for_each_line(text, [&](std::string_view line, std::size_t lineno) {
                if (line.empty() || line.front() == '#' || trim(line).empty()) {
                    return;
                }
                auto fields = split(line, '\t');
                if (fields.size() != 3) {
                    throw ParseError(source, lineno, "pair rows need 3 fields");
                }
                table.ordered_pair[{fields[0], fields[1]}] =
                    parse_long(fields[2], source, lineno);
            });
            scopes[table.scope].windows[table.window] = std::move(table);
        }
    }

    std::map<std::string, std::vector<PairCountTable>> out;
    for (auto& [scope, data] : scopes) {
        if (!data.has_unigrams) {
            throw std::invalid_argument("count store for scope '" + scope +
                                        "' is missing its unigram file");
        }
        std::vector<PairCountTable> tables;
        int expected = 1;
        for (auto& [w, table] : data.windows) {
            if (w != expected++) {
                throw std::invalid_argument("count store for scope '" + scope +
                                            "' has non-consecutive windows");
            }
            table.unigram = data.unigram;
            table.total_events = data.total_events;
            tables.push_back(std::move(table));
        }
        if (tables.empty()) {
            throw std::invalid_argument("count store for scope '" + scope +
                                        "' has no pair tables");
        }
        out[scope] = std::move(tables);
    }
    return out;
}

}  // namespace cpcmine
