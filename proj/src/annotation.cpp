#include "cpcmine/annotation.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "cpcmine/io_util.hpp"

namespace cpcmine {

namespace {

constexpr std::string_view kSceneHeader = "# scene ";

struct ParserState {
    std::vector<SceneDocument> docs;
    SceneDocument current;
    Sentence sentence;
    bool have_doc = false;

    void flush_sentence() {
        if (!sentence.empty()) {
            current.sentences.push_back(std::move(sentence));
            sentence.clear();
        }
    }

    void flush_doc() {
        flush_sentence();
        if (have_doc) {
            docs.push_back(std::move(current));
            current = SceneDocument{};
            have_doc = false;
        }
    }
};

AnnotatedToken parse_token_line(const std::vector<std::string>& fields,
                                const std::string& source, std::size_t lineno) {
    AnnotatedToken tok;
    tok.index = static_cast<int>(parse_long(fields[0], source, lineno));
    tok.surface = fields[1];
    tok.lemma = fields[2];
    tok.pos = fields[3];
    tok.head = static_cast<int>(parse_long(fields[4], source, lineno));
    tok.deprel = fields[5];
    tok.ner = fields[6];
    if (tok.index < 1) {
        throw ParseError(source, lineno, "token index must be >= 1");
    }
    if (tok.head < 0) {
        throw ParseError(source, lineno, "head must be >= 0");
    }
    if (tok.head == tok.index) {
        throw ParseError(source, lineno, "token cannot be its own head");
    }
    if (tok.pos.empty()) {
        throw ParseError(source, lineno, "empty POS tag");
    }
    return tok;
}

}  // namespace

std::vector<SceneDocument> parse_annotation_text(std::string_view text,
                                                 const std::string& source_name,
                                                 const std::string& default_film_id) {
    ParserState st;
    for_each_line(text, [&](std::string_view line, std::size_t lineno) {
        if (line.empty() || trim(line).empty()) {
            st.flush_sentence();
            return;
        }
        if (line.substr(0, kSceneHeader.size()) == kSceneHeader) {
            st.flush_doc();
            auto rest = split(line.substr(kSceneHeader.size()), '\t');
            if (rest.size() != 2) {
                throw ParseError(source_name, lineno,
                                 "scene header needs 'film_id<TAB>scene_ordinal'");
            }
            long ordinal = parse_long(rest[1], source_name, lineno);
            if (rest[0].empty() || ordinal < 0) {
                throw ParseError(source_name, lineno, "invalid scene header");
            }
            st.current.film_id = rest[0];
            st.current.scene_ordinal = ordinal;
            st.have_doc = true;
            return;
        }
        if (line.front() == '#') {
            return;  // comment
        }
        auto fields = split(line, '\t');
        if (fields.size() != 7) {
            std::ostringstream os;
            os << "expected 7 tab-separated fields, got " << fields.size();
            throw ParseError(source_name, lineno, os.str());
        }
        if (!st.have_doc) {
            st.current.film_id = default_film_id;
            st.current.scene_ordinal = 0;
            st.have_doc = true;
        }
        st.sentence.push_back(parse_token_line(fields, source_name, lineno));
    });
    st.flush_doc();
    return st.docs;
}

std::vector<SceneDocument> parse_annotation_file(const std::filesystem::path& path) {
    return parse_annotation_text(read_text_file(path), path.string(), path.stem().string());
}

std::string render_annotation(const std::vector<SceneDocument>& docs) {
    std::ostringstream os;
    for (const auto& doc : docs) {
        os << "# scene " << doc.film_id << '\t' << doc.scene_ordinal << '\n';
        for (const auto& sentence : doc.sentences) {
            for (const auto& tok : sentence) {
                os << tok.index << '\t' << tok.surface << '\t' << tok.lemma << '\t'
                   << tok.pos << '\t' << tok.head << '\t' << tok.deprel << '\t'
                   << tok.ner << '\n';
            }
            os << '\n';
        }
    }
    return os.str();
}

void write_annotation_file(const std::filesystem::path& path,
                           const std::vector<SceneDocument>& docs) {
    write_text_file(path, render_annotation(docs));
}

void write_store(const std::filesystem::path& path,
                 const std::vector<SceneDocument>& docs) {
    nlohmann::json root;
    root["format"] = "cpcmine-store-v1";
    auto& out_docs = root["documents"] = nlohmann::json::array();
    for (const auto& doc : docs) {
        nlohmann::json jdoc;
        jdoc["film_id"] = doc.film_id;
        jdoc["scene_ordinal"] = doc.scene_ordinal;
        auto& sentences = jdoc["sentences"] = nlohmann::json::array();
        for (const auto& sentence : doc.sentences) {
            nlohmann::json jsent = nlohmann::json::array();
            for (const auto& tok : sentence) {
                jsent.push_back({tok.index, tok.surface, tok.lemma, tok.pos, tok.head,
                                 tok.deprel, tok.ner});
            }
            sentences.push_back(std::move(jsent));
        }
        out_docs.push_back(std::move(jdoc));
    }
    write_text_file(path, root.dump(1, '\t') + "\n");
}

std::vector<SceneDocument> read_store(const std::filesystem::path& path) {
    const std::string source = path.string();
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(source, 0, err.what());
    }
    if (!root.is_object() || root.value("format", "") != "cpcmine-store-v1" ||
        !root.contains("documents") || !root["documents"].is_array()) {
        throw ParseError(source, 0, "not a corpus store file");
    }
    std::vector<SceneDocument> docs;
    try {
        for (const auto& jdoc : root["documents"]) {
            SceneDocument doc;
            doc.film_id = jdoc.at("film_id").get<std::string>();
            doc.scene_ordinal = jdoc.at("scene_ordinal").get<long>();
            for (const auto& jsent : jdoc.at("sentences")) {
                Sentence sentence;
                for (const auto& jtok : jsent) {
                    if (!jtok.is_array() || jtok.size() != 7) {
                        throw ParseError(source, 0, "token entries need 7 fields");
                    }
                    AnnotatedToken tok;
                    tok.index = jtok[0].get<int>();
                    tok.surface = jtok[1].get<std::string>();
                    tok.lemma = jtok[2].get<std::string>();
                    tok.pos = jtok[3].get<std::string>();
                    tok.head = jtok[4].get<int>();
                    tok.deprel = jtok[5].get<std::string>();
                    tok.ner = jtok[6].get<std::string>();
                    sentence.push_back(std::move(tok));
                }
                doc.sentences.push_back(std::move(sentence));
            }
            docs.push_back(std::move(doc));
        }
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(source, 0, err.what());
    }
    return docs;
}

}  // namespace cpcmine
