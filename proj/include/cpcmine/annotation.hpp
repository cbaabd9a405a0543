#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cpcmine {

// One token of a dependency-annotated sentence.
//
// File format, one token per line, 7 tab-separated fields:
//   index  surface  lemma  pos  head  deprel  ner
// index is the 1-based position within the sentence, head the sentence-local
// index of the governor (0 for the root). A blank line ends a sentence. A
// line of the form
//   # scene film_id<TAB>scene_ordinal
// starts a new scene document; other '#' lines are comments. A file without
// scene headers is a single scene whose film id is the file stem.
struct AnnotatedToken {
    int index = 0;
    std::string surface;
    std::string lemma;
    std::string pos;
    int head = 0;
    std::string deprel;
    std::string ner;

    bool operator==(const AnnotatedToken&) const = default;
};

using Sentence = std::vector<AnnotatedToken>;

// One scene description. Sentence and token order follow the text, which the
// corpus assumes to be the temporal order of the narrated events.
struct SceneDocument {
    std::string film_id;
    long scene_ordinal = 0;
    std::vector<Sentence> sentences;

    bool operator==(const SceneDocument&) const = default;
};

std::vector<SceneDocument> parse_annotation_text(std::string_view text,
                                                 const std::string& source_name,
                                                 const std::string& default_film_id);
std::vector<SceneDocument> parse_annotation_file(const std::filesystem::path& path);

// Inverse of parsing: render_annotation(parse_annotation_text(t)) re-parses
// to the same document list.
std::string render_annotation(const std::vector<SceneDocument>& docs);
void write_annotation_file(const std::filesystem::path& path,
                           const std::vector<SceneDocument>& docs);

// Normalized corpus store: one JSON file holding every validated scene, the
// unit the downstream stages read. Tokens are stored as 7-element arrays in
// the field order documented above.
void write_store(const std::filesystem::path& path,
                 const std::vector<SceneDocument>& docs);
std::vector<SceneDocument> read_store(const std::filesystem::path& path);

}  // namespace cpcmine
