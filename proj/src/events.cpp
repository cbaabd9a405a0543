#include "cpcmine/events.hpp"

#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cpcmine/io_util.hpp"

namespace cpcmine {

namespace {

int slot_rank(Slot s) {
    switch (s) {
        case Slot::Person: return 0;
        case Slot::Something: return 1;
        case Slot::None: return 2;
    }
    return 3;
}

bool is_pronoun_pos(const std::string& pos) {
    return pos == "PRP" || pos == "PRP$" || pos == "WP" || pos == "WP$";
}

constexpr std::string_view kNoParticle = "none";

}  // namespace

std::string_view slot_name(Slot slot) {
    switch (slot) {
        case Slot::Person: return "person";
        case Slot::Something: return "something";
        case Slot::None: return "none";
    }
    return "none";
}

Slot slot_from_name(std::string_view name, const std::string& file, std::size_t line) {
    if (name == "person") return Slot::Person;
    if (name == "something") return Slot::Something;
    if (name == "none") return Slot::None;
    throw ParseError(file, line, "unknown slot value '" + std::string(name) + "'");
}

bool ArgCombinationOrder::operator()(const ArgCombination& a, const ArgCombination& b) const {
    auto key = [](const ArgCombination& c) {
        return std::make_tuple(slot_rank(c.subj), slot_rank(c.dobj), slot_rank(c.iobj),
                               c.particle.empty() ? 1 : 0, std::string_view(c.particle));
    };
    return key(a) < key(b);
}

ArgCombination ArgProfile::modal() const {
    if (counts.empty()) {
        return {};
    }
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) {
            best = it;  // strict: the order-least key wins ties
        }
    }
    return best->first;
}

bool PersonLexicon::contains(std::string_view lemma) const {
    return entries.count(to_lower(lemma)) > 0;
}

PersonLexicon PersonLexicon::load(const std::filesystem::path& path) {
    PersonLexicon lex;
    for (const auto& word : load_word_list(path)) {
        lex.entries.insert(word);
    }
    return lex;
}

std::set<std::string> default_light_verbs() {
    return {"be", "let", "do", "begin", "have", "start", "try"};
}

std::set<std::string> load_word_list(const std::filesystem::path& path) {
    std::set<std::string> words;
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t) {
        std::string word = trim(line);
        if (word.empty() || word.front() == '#') {
            return;
        }
        words.insert(to_lower(word));
    });
    return words;
}

Slot generalize_argument(const AnnotatedToken& token, const PersonLexicon& lexicon) {
    if (token.ner == "PERSON") {
        return Slot::Person;
    }
    if (is_pronoun_pos(token.pos) && to_lower(token.surface) != "it") {
        return Slot::Person;
    }
    if (lexicon.contains(token.lemma)) {
        return Slot::Person;
    }
    return Slot::Something;
}

std::vector<EventInstance> extract_events(const SceneDocument& doc,
                                          const ExtractionConfig& config) {
    std::vector<EventInstance> events;
    long linear_index = 0;
    for (const auto& sentence : doc.sentences) {
        for (const auto& tok : sentence) {
            if (tok.pos.rfind("VB", 0) != 0) {
                continue;
            }
            std::string lemma = to_lower(tok.lemma.empty() ? tok.surface : tok.lemma);
            if (lemma.empty() || config.light_verbs.count(lemma) > 0) {
                continue;
            }
            EventInstance ev;
            ev.lemma = std::move(lemma);
            ev.film_id = doc.film_id;
            ev.scene_ordinal = doc.scene_ordinal;
            ev.linear_index = linear_index++;
            bool have_subj = false, have_dobj = false, have_iobj = false, have_prt = false;
            for (const auto& dep : sentence) {
                if (dep.head != tok.index) {
                    continue;
                }
                if (!have_subj && (dep.deprel == "nsubj" || dep.deprel == "agent")) {
                    ev.subj = generalize_argument(dep, config.person_lexicon);
                    have_subj = true;
                } else if (!have_dobj && (dep.deprel == "dobj" || dep.deprel == "nsubjpass")) {
                    ev.dobj = generalize_argument(dep, config.person_lexicon);
                    have_dobj = true;
                } else if (!have_iobj && dep.deprel == "iobj") {
                    ev.iobj = generalize_argument(dep, config.person_lexicon);
                    have_iobj = true;
                } else if (!have_prt && dep.deprel == "compound:prt") {
                    ev.particle = to_lower(dep.lemma.empty() ? dep.surface : dep.lemma);
                    have_prt = true;
                }
            }
            events.push_back(std::move(ev));
        }
    }
    return events;
}

std::vector<EventInstance> extract_corpus(const std::vector<SceneDocument>& docs,
                                          const ExtractionConfig& config) {
    std::vector<EventInstance> all;
    long base = 0;
    for (const auto& doc : docs) {
        auto events = extract_events(doc, config);
        for (auto& ev : events) {
            ev.linear_index += base;
            all.push_back(std::move(ev));
        }
        base = all.empty() ? 0 : all.back().linear_index + 1;
    }
    return all;
}

std::map<std::string, ArgProfile> build_arg_profiles(const std::vector<EventInstance>& events) {
    std::map<std::string, ArgProfile> profiles;
    for (const auto& ev : events) {
        auto& profile = profiles[ev.lemma];
        profile.lemma = ev.lemma;
        ++profile.counts[ev.args()];
    }
    return profiles;
}

void write_events_file(const std::filesystem::path& path,
                       const std::vector<EventInstance>& events) {
    std::ostringstream os;
    for (const auto& ev : events) {
        os << ev.film_id << '\t' << ev.scene_ordinal << '\t' << ev.linear_index << '\t'
           << ev.lemma << '\t' << slot_name(ev.subj) << '\t' << slot_name(ev.dobj) << '\t'
           << slot_name(ev.iobj) << '\t'
           << (ev.particle.empty() ? kNoParticle : std::string_view(ev.particle)) << '\n';
    }
    write_text_file(path, os.str());
}

std::vector<EventInstance> read_events_file(const std::filesystem::path& path) {
    std::vector<EventInstance> events;
    const std::string source = path.string();
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty()) {
            return;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 8) {
            throw ParseError(source, lineno, "event rows need 8 tab-separated fields");
        }
        EventInstance ev;
        ev.film_id = fields[0];
        ev.scene_ordinal = parse_long(fields[1], source, lineno);
        ev.linear_index = parse_long(fields[2], source, lineno);
        ev.lemma = fields[3];
        ev.subj = slot_from_name(fields[4], source, lineno);
        ev.dobj = slot_from_name(fields[5], source, lineno);
        ev.iobj = slot_from_name(fields[6], source, lineno);
        if (fields[7] != kNoParticle) {
            ev.particle = fields[7];
        }
        if (ev.lemma.empty()) {
            throw ParseError(source, lineno, "empty event lemma");
        }
        events.push_back(std::move(ev));
    });
    return events;
}

void write_profiles_file(const std::filesystem::path& path,
                         const std::string& scope,
                         const std::map<std::string, ArgProfile>& profiles) {
    std::ostringstream os;
    os << "# scope\t" << scope << '\n';
    for (const auto& [lemma, profile] : profiles) {
        for (const auto& [combo, count] : profile.counts) {
            os << lemma << '\t' << slot_name(combo.subj) << '\t' << slot_name(combo.dobj)
               << '\t' << slot_name(combo.iobj) << '\t'
               << (combo.particle.empty() ? kNoParticle : std::string_view(combo.particle))
               << '\t' << count << '\n';
        }
    }
    write_text_file(path, os.str());
}

std::map<std::string, ArgProfile> read_profiles_file(const std::filesystem::path& path) {
    std::map<std::string, ArgProfile> profiles;
    const std::string source = path.string();
    for_each_line(read_text_file(path), [&](std::string_view line, std::size_t lineno) {
        if (trim(line).empty() || line.front() == '#') {
            return;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 6) {
            throw ParseError(source, lineno, "profile rows need 6 tab-separated fields");
        }
        ArgCombination combo;
        combo.subj = slot_from_name(fields[1], source, lineno);
        combo.dobj = slot_from_name(fields[2], source, lineno);
        combo.iobj = slot_from_name(fields[3], source, lineno);
        if (fields[4] != kNoParticle) {
            combo.particle = fields[4];
        }
        long count = parse_long(fields[5], source, lineno);
        if (count < 0) {
            throw ParseError(source, lineno, "negative combination count");
        }
        auto& profile = profiles[fields[0]];
        profile.lemma = fields[0];
        profile.counts[combo] += count;
    });
    return profiles;
}

}  // namespace cpcmine
