#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cpcmine {

// Name of the scope that spans the whole catalog. Reserved; no genre may use it.
inline constexpr const char* kAllScope = "ALL";

struct CatalogEntry {
    std::string film_id;
    std::string title;
    std::set<std::string> genres;
    long word_count = 0;  // informational only, never used for scoring

    bool operator==(const CatalogEntry&) const = default;
};

// Film/genre catalog. CSV with header `film_id,title,genres,word_count`,
// genres pipe-delimited. Films may belong to several genres.
struct FilmCatalog {
    std::vector<CatalogEntry> entries;

    const CatalogEntry* find(std::string_view film_id) const;
    std::map<std::string, long> films_per_genre() const;
};

// A corpus slice counts and scores are computed over: one genre, or ALL.
struct AnalysisScope {
    std::string name;
    std::set<std::string> film_ids;

    bool operator==(const AnalysisScope&) const = default;
};

FilmCatalog parse_catalog_text(std::string_view text, const std::string& source_name);
FilmCatalog load_catalog(const std::filesystem::path& path);

// One scope per distinct genre plus the ALL scope, sorted by name. A film
// appears in the scope of each of its genres and exactly once in ALL.
std::vector<AnalysisScope> build_scopes(const FilmCatalog& catalog);

}  // namespace cpcmine
