#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cpcmine/annotation.hpp"
#include "cpcmine/counts.hpp"
#include "cpcmine/eval.hpp"
#include "cpcmine/io_util.hpp"
#include "cpcmine/pipeline.hpp"
#include "cpcmine/ranking.hpp"
#include "cpcmine/scoring.hpp"

namespace py = pybind11;
using namespace cpcmine;

namespace {

ExtractionConfig make_extraction_config(const std::vector<std::string>& light_verbs,
                                        const std::vector<std::string>& person_lexicon,
                                        bool default_light) {
    ExtractionConfig config;
    if (!default_light) {
        config.light_verbs.clear();
        for (const auto& verb : light_verbs) {
            config.light_verbs.insert(to_lower(verb));
        }
    }
    for (const auto& word : person_lexicon) {
        config.person_lexicon.entries.insert(to_lower(word));
    }
    return config;
}

py::dict json_to_dict(const std::string& text) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(text);
}

}  // namespace

PYBIND11_MODULE(_cpcmine, m) {
    m.doc() = "causal event-pair mining over dependency-annotated scene text";

    py::class_<SceneDocument>(m, "SceneDocument")
        .def_readonly("film_id", &SceneDocument::film_id)
        .def_readonly("scene_ordinal", &SceneDocument::scene_ordinal)
        .def_property_readonly(
            "sentence_count",
            [](const SceneDocument& doc) { return doc.sentences.size(); })
        .def("__repr__", [](const SceneDocument& doc) {
            return "SceneDocument(" + doc.film_id + ", " +
                   std::to_string(doc.scene_ordinal) + ")";
        });

    py::class_<EventInstance>(m, "EventInstance")
        .def_readonly("lemma", &EventInstance::lemma)
        .def_readonly("particle", &EventInstance::particle)
        .def_readonly("film_id", &EventInstance::film_id)
        .def_readonly("scene_ordinal", &EventInstance::scene_ordinal)
        .def_readonly("linear_index", &EventInstance::linear_index)
        .def_property_readonly(
            "subj", [](const EventInstance& ev) { return std::string(slot_name(ev.subj)); })
        .def_property_readonly(
            "dobj", [](const EventInstance& ev) { return std::string(slot_name(ev.dobj)); })
        .def_property_readonly(
            "iobj", [](const EventInstance& ev) { return std::string(slot_name(ev.iobj)); })
        .def("__repr__", [](const EventInstance& ev) {
            return "EventInstance(" + ev.lemma + ")";
        });

    py::class_<PairCountTable>(m, "PairCountTable")
        .def_readonly("scope", &PairCountTable::scope)
        .def_readonly("window", &PairCountTable::window)
        .def_readonly("unigram", &PairCountTable::unigram)
        .def_readonly("total_events", &PairCountTable::total_events)
        .def_readonly("total_ordered_pairs", &PairCountTable::total_ordered_pairs)
        .def("observed", &PairCountTable::observed)
        .def("smoothed_count", &PairCountTable::smoothed_count)
        .def("p_event", &PairCountTable::p_event)
        .def("p_ordered", &PairCountTable::p_ordered)
        .def("p_joint", &PairCountTable::p_joint);

    py::class_<ScoredPair>(m, "ScoredPair")
        .def_readonly("scope", &ScoredPair::scope)
        .def_readonly("e1", &ScoredPair::e1)
        .def_readonly("e2", &ScoredPair::e2)
        .def_readonly("pmi_per_window", &ScoredPair::pmi_per_window)
        .def_readonly("cp_per_window", &ScoredPair::cp_per_window)
        .def_readonly("cpc", &ScoredPair::cpc)
        .def_readonly("scp", &ScoredPair::scp)
        .def_readonly("support", &ScoredPair::support)
        .def_property_readonly(
            "args1", [](const ScoredPair& sp) { return render_args(sp.args1); })
        .def_property_readonly(
            "args2", [](const ScoredPair& sp) { return render_args(sp.args2); })
        .def("__repr__", [](const ScoredPair& sp) {
            return "ScoredPair(" + sp.e1 + ", " + sp.e2 + ", cpc=" +
                   format_double(sp.cpc) + ")";
        });

    m.def("parse_annotation", &parse_annotation_text, py::arg("text"),
          py::arg("source") = "<python>", py::arg("default_film_id") = "doc",
          "Parse dependency-annotated scene text into scene documents.");

    m.def(
        "extract_events",
        [](const std::vector<SceneDocument>& docs,
           const std::vector<std::string>& light_verbs,
           const std::vector<std::string>& person_lexicon, bool default_light_verbs) {
            return extract_corpus(
                docs, make_extraction_config(light_verbs, person_lexicon,
                                             default_light_verbs));
        },
        py::arg("docs"), py::arg("light_verbs") = std::vector<std::string>{},
        py::arg("person_lexicon") = std::vector<std::string>{},
        py::arg("default_light_verbs") = true,
        "Extract generalized events from scene documents.");

    m.def(
        "count_streams",
        [](const std::vector<std::vector<std::string>>& scenes, int w_max,
           const std::string& mode, const std::string& scope) {
            return count_scope(scenes, w_max, window_mode_from_name(mode), scope);
        },
        py::arg("scenes"), py::arg("w_max") = 3, py::arg("mode") = "cumulative",
        py::arg("scope") = "", "Count unigrams and ordered pairs per window size.");

    m.def(
        "count_events",
        [](const std::vector<EventInstance>& events, int w_max, const std::string& mode,
           const std::string& scope) {
            return count_scope(scene_streams(events), w_max, window_mode_from_name(mode),
                               scope);
        },
        py::arg("events"), py::arg("w_max") = 3, py::arg("mode") = "cumulative",
        py::arg("scope") = "", "Count extracted events grouped into scene streams.");

    m.def("pmi", &pmi, py::arg("table"), py::arg("e1"), py::arg("e2"));
    m.def("causal_potential", &causal_potential, py::arg("table"), py::arg("e1"),
          py::arg("e2"));
    m.def("cpc", &cpc, py::arg("tables"), py::arg("e1"), py::arg("e2"));
    m.def("scp", &scp, py::arg("table"), py::arg("e1"), py::arg("e2"));

    m.def(
        "score_events",
        [](const std::vector<EventInstance>& events, int w_max, long min_support,
           const std::string& mode, const std::string& scope) {
            auto tables =
                count_scope(scene_streams(events), w_max, window_mode_from_name(mode),
                            scope);
            return score_scope(tables, build_arg_profiles(events), min_support);
        },
        py::arg("events"), py::arg("w_max") = 3, py::arg("min_support") = 1,
        py::arg("mode") = "cumulative", py::arg("scope") = "",
        "Count and score one event list in a single call.");

    m.def("pairwise_alpha", &pairwise_alpha, py::arg("responses"),
          "Mean Krippendorff's nominal alpha over annotator pairs; responses maps "
          "item_id -> {annotator_id: label}.");
    m.def("pooled_alpha", &pooled_alpha, py::arg("responses"));

    m.def(
        "run_pipeline",
        [](const std::filesystem::path& config_path, bool force) {
            RunManifest manifest = run_pipeline(load_pipeline_config(config_path), force);
            return json_to_dict(manifest_json(manifest));
        },
        py::arg("config_path"), py::arg("force") = false,
        "Run the full pipeline from a config file; returns the manifest as a dict.");

    m.def(
        "render_report",
        [](const std::filesystem::path& run_dir, int top_k, long overlap_k) {
            ReportBundle bundle = render_report(run_dir, top_k, overlap_k);
            py::dict out;
            out["text"] = bundle.text;
            out["data"] = json_to_dict(bundle.json);
            return out;
        },
        py::arg("run_dir"), py::arg("top_k") = 7, py::arg("overlap_k") = 30,
        "Summarize a completed run directory.");

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
}
