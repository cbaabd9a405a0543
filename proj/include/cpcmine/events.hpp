#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cpcmine/annotation.hpp"

namespace cpcmine {

// Generalized argument slot of an event.
enum class Slot { Person, Something, None };

std::string_view slot_name(Slot slot);
Slot slot_from_name(std::string_view name, const std::string& file, std::size_t line);

// Argument slots plus verb particle of one event instance. An empty particle
// means the verb had none.
struct ArgCombination {
    Slot subj = Slot::None;
    Slot dobj = Slot::None;
    Slot iobj = Slot::None;
    std::string particle;

    bool operator==(const ArgCombination&) const = default;
};

// Tie-break order used wherever a single combination must be picked from
// equals: person < something < none per slot, combinations with a particle
// before those without, particles compared as text.
struct ArgCombinationOrder {
    bool operator()(const ArgCombination& a, const ArgCombination& b) const;
};

using CombinationCounts = std::map<ArgCombination, long, ArgCombinationOrder>;

// Per-lemma tally of observed argument combinations.
struct ArgProfile {
    std::string lemma;
    CombinationCounts counts;

    // Highest-count combination; ties resolve to the ArgCombinationOrder-least.
    ArgCombination modal() const;
};

// Noun lemmas treated as persons. Plain text file, one lowercase lemma per
// line, '#' comments allowed. Stands in for any external lexical resource.
struct PersonLexicon {
    std::unordered_set<std::string> entries;

    bool contains(std::string_view lemma) const;
    static PersonLexicon load(const std::filesystem::path& path);
};

std::set<std::string> default_light_verbs();
std::set<std::string> load_word_list(const std::filesystem::path& path);

struct ExtractionConfig {
    std::set<std::string> light_verbs = default_light_verbs();
    PersonLexicon person_lexicon;
};

// One extracted verb event.
struct EventInstance {
    std::string lemma;  // lowercase, never a light verb
    Slot subj = Slot::None;
    Slot dobj = Slot::None;
    Slot iobj = Slot::None;
    std::string particle;
    std::string film_id;
    long scene_ordinal = 0;
    long linear_index = 0;  // 0-based position in the scene's event stream

    ArgCombination args() const { return {subj, dobj, iobj, particle}; }
    bool operator==(const EventInstance&) const = default;
};

// person iff the token is NER-tagged PERSON, is a pronoun other than "it"
// (PRP, PRP$, WP, WP$), or its lemma is in the lexicon; something otherwise.
Slot generalize_argument(const AnnotatedToken& token, const PersonLexicon& lexicon);

// One event per token whose POS starts with VB and whose lemma is not a
// light verb, in textual order. Arguments come from the verb's direct
// dependents: nsubj/agent -> subj, dobj/nsubjpass -> dobj, iobj -> iobj,
// compound:prt -> particle; first dependent in token order wins per slot.
std::vector<EventInstance> extract_events(const SceneDocument& doc,
                                          const ExtractionConfig& config);

// Whole-corpus extraction with linear_index rebased to a single global
// sequence, so scenes split across store documents keep their stream order.
std::vector<EventInstance> extract_corpus(const std::vector<SceneDocument>& docs,
                                          const ExtractionConfig& config);

// Tally of argument combinations per lemma over one analysis scope.
std::map<std::string, ArgProfile> build_arg_profiles(const std::vector<EventInstance>& events);

// Event stream file: one event per line, tab-separated
// (film_id, scene_ordinal, linear_index, lemma, subj, dobj, iobj, particle).
void write_events_file(const std::filesystem::path& path,
                       const std::vector<EventInstance>& events);
std::vector<EventInstance> read_events_file(const std::filesystem::path& path);

// Profile table: lemma, subj, dobj, iobj, particle, count rows.
void write_profiles_file(const std::filesystem::path& path,
                         const std::string& scope,
                         const std::map<std::string, ArgProfile>& profiles);
std::map<std::string, ArgProfile> read_profiles_file(const std::filesystem::path& path);

}  // namespace cpcmine
