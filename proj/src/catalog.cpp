#include "cpcmine/catalog.hpp"

#include <stdexcept>

#include "cpcmine/io_util.hpp"

namespace cpcmine {

namespace {
constexpr std::string_view kHeader = "film_id,title,genres,word_count";
}

const CatalogEntry* FilmCatalog::find(std::string_view film_id) const {
    for (const auto& e : entries) {
        if (e.film_id == film_id) {
            return &e;
        }
    }
    return nullptr;
}

std::map<std::string, long> FilmCatalog::films_per_genre() const {
    std::map<std::string, long> counts;
    for (const auto& e : entries) {
        for (const auto& g : e.genres) {
            ++counts[g];
        }
    }
    return counts;
}

FilmCatalog parse_catalog_text(std::string_view text, const std::string& source_name) {
    FilmCatalog catalog;
    std::set<std::string> seen;
    bool header_checked = false;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty()) {
            return;
        }
        if (!header_checked) {
            header_checked = true;
            if (trim(line) != kHeader) {
                throw ParseError(source_name, lineno,
                                 "catalog header must be '" + std::string(kHeader) + "'");
            }
            return;
        }
        auto fields = parse_csv_line(line, source_name, lineno);
        if (fields.size() != 4) {
            throw ParseError(source_name, lineno, "catalog rows need 4 fields");
        }
        CatalogEntry entry;
        entry.film_id = fields[0];
        entry.title = fields[1];
        if (entry.film_id.empty()) {
            throw ParseError(source_name, lineno, "empty film_id");
        }
        if (!seen.insert(entry.film_id).second) {
            throw ParseError(source_name, lineno, "duplicate film_id '" + entry.film_id + "'");
        }
        for (const auto& g : split(fields[2], '|')) {
            std::string genre = trim(g);
            if (genre.empty()) {
                continue;
            }
            if (genre == kAllScope) {
                throw ParseError(source_name, lineno, "'ALL' is a reserved scope name");
            }
            entry.genres.insert(genre);
        }
        if (entry.genres.empty()) {
            throw ParseError(source_name, lineno,
                             "film '" + entry.film_id + "' has no genres");
        }
        entry.word_count = parse_long(fields[3], source_name, lineno);
        if (entry.word_count < 0) {
            throw ParseError(source_name, lineno, "negative word_count");
        }
        catalog.entries.push_back(std::move(entry));
    });
    if (!header_checked) {
        throw ParseError(source_name, 0, "empty catalog file");
    }
    if (catalog.entries.empty()) {
        throw ParseError(source_name, 0, "catalog has no film rows");
    }
    return catalog;
}

FilmCatalog load_catalog(const std::filesystem::path& path) {
    return parse_catalog_text(read_text_file(path), path.string());
}

std::vector<AnalysisScope> build_scopes(const FilmCatalog& catalog) {
    if (catalog.entries.empty()) {
        throw std::invalid_argument("cannot build scopes from an empty catalog");
    }
    std::map<std::string, AnalysisScope> by_name;
    AnalysisScope all;
    all.name = kAllScope;
    for (const auto& e : catalog.entries) {
        all.film_ids.insert(e.film_id);
        for (const auto& g : e.genres) {
            auto& scope = by_name[g];
            scope.name = g;
            scope.film_ids.insert(e.film_id);
        }
    }
    std::vector<AnalysisScope> scopes;
    scopes.reserve(by_name.size() + 1);
    for (auto& [name, scope] : by_name) {
        (void)name;
        scopes.push_back(std::move(scope));
    }
    scopes.push_back(std::move(all));
    return scopes;
}

}  // namespace cpcmine
