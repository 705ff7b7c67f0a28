// Python bindings for the evaluation core. The surface mirrors the C++
// headers: analysis parsing and scoring, the statistics used for validation,
// summarization, prompt construction, and the seeded synthesis heuristics.
// Backend plumbing stays in C++; embeddings enter build_summary as a plain
// callable so Python callers can supply their own.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <random>

#include "green/analysis.hpp"
#include "green/corpus.hpp"
#include "green/errors.hpp"
#include "green/prompting.hpp"
#include "green/scoring.hpp"
#include "green/stats.hpp"
#include "green/summarizer.hpp"
#include "green/synthesis.hpp"
#include "green/taxonomy.hpp"

namespace py = pybind11;
using namespace green;

namespace {

std::vector<std::pair<std::string, std::string>> subcategory_table() {
  std::vector<std::pair<std::string, std::string>> rows;
  for (ErrorSubcategory s : all_subcategories()) {
    rows.emplace_back(std::string(1, subcategory_letter(s)),
                      std::string(subcategory_description(s)));
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radiology report evaluation core";

  py::register_exception<Error>(m, "Error");

  py::enum_<ErrorSubcategory>(m, "ErrorSubcategory")
      .value("A", ErrorSubcategory::A)
      .value("B", ErrorSubcategory::B)
      .value("C", ErrorSubcategory::C)
      .value("D", ErrorSubcategory::D)
      .value("E", ErrorSubcategory::E)
      .value("F", ErrorSubcategory::F);

  m.def("subcategories", &subcategory_table,
        "(letter, description) rows in report order");
  m.def(
      "subcategory_description",
      [](ErrorSubcategory s) { return std::string(subcategory_description(s)); },
      py::arg("subcategory"));

  // ---- analysis ------------------------------------------------------------

  py::class_<SubcategoryFinding>(m, "SubcategoryFinding")
      .def(py::init<>())
      .def_readwrite("count", &SubcategoryFinding::count)
      .def_readwrite("explanations", &SubcategoryFinding::explanations);

  py::class_<GreenAnalysis>(m, "GreenAnalysis")
      .def(py::init<>())
      .def_readwrite("explanation", &GreenAnalysis::explanation)
      .def_readwrite("sig", &GreenAnalysis::sig)
      .def_readwrite("insig", &GreenAnalysis::insig)
      .def_readwrite("matched_count", &GreenAnalysis::matched_count)
      .def_readwrite("matched_findings", &GreenAnalysis::matched_findings)
      .def_readonly("raw", &GreenAnalysis::raw)
      .def("sig_for", &GreenAnalysis::sig_for, py::arg("subcategory"),
           py::return_value_policy::copy)
      .def("insig_for", &GreenAnalysis::insig_for, py::arg("subcategory"),
           py::return_value_policy::copy);

  py::enum_<PreferenceLabel>(m, "PreferenceLabel")
      .value("first_better", PreferenceLabel::first_better)
      .value("second_better", PreferenceLabel::second_better)
      .value("equal", PreferenceLabel::equal);

  // Attribute access on .sig/.insig copies the array; building an analysis
  // from counts is the supported construction path from Python.
  m.def("analysis_from_counts",
        [](const std::vector<int>& sig_counts,
           const std::vector<int>& insig_counts, int matched_count) {
          if (sig_counts.size() != kSubcategoryCount ||
              insig_counts.size() != kSubcategoryCount) {
            throw py::value_error("expected six counts per significance");
          }
          GreenAnalysis a;
          for (int i = 0; i < kSubcategoryCount; ++i) {
            a.sig[i].count = sig_counts[i];
            a.insig[i].count = insig_counts[i];
          }
          a.matched_count = matched_count;
          return a;
        },
        py::arg("sig_counts"), py::arg("insig_counts"),
        py::arg("matched_count"));

  m.def("parse_green_analysis",
        [](const std::string& raw) { return parse_green_analysis(raw); },
        py::arg("raw"));
  m.def("render_green_analysis", &render_green_analysis, py::arg("analysis"));
  m.def("parse_preference",
        [](const std::string& raw) { return parse_preference(raw); },
        py::arg("raw"));

  // ---- scoring -------------------------------------------------------------

  m.def("green_score", &green_score, py::arg("analysis"));
  m.def("significant_error_count", &significant_error_count,
        py::arg("analysis"));
  m.def("total_error_count", &total_error_count, py::arg("analysis"));

  py::class_<GreenResult>(m, "GreenResult")
      .def(py::init<>())
      .def_readwrite("pair_id", &GreenResult::pair_id)
      .def_readwrite("analysis", &GreenResult::analysis)
      .def_readwrite("score", &GreenResult::score)
      .def_readwrite("fingerprint", &GreenResult::fingerprint);

  py::class_<ScoreAggregate>(m, "ScoreAggregate")
      .def_readonly("mean", &ScoreAggregate::mean)
      .def_readonly("std_population", &ScoreAggregate::std_population)
      .def_readonly("std_sample", &ScoreAggregate::std_sample)
      .def_readonly("n", &ScoreAggregate::n)
      .def_readonly("parse_failures", &ScoreAggregate::parse_failures);

  m.def("make_result", &make_result, py::arg("pair_id"), py::arg("analysis"),
        py::arg("fingerprint"));
  m.def("aggregate", &aggregate, py::arg("results"),
        py::arg("parse_failures") = 0);
  m.def("results_to_jsonl", &results_to_jsonl, py::arg("results"));
  m.def("write_results", &write_results, py::arg("results"), py::arg("path"));
  m.def("load_results", &load_results, py::arg("path"));

  // ---- statistics ----------------------------------------------------------

  py::class_<CorrelationResult>(m, "CorrelationResult")
      .def_readonly("tau", &CorrelationResult::tau)
      .def_readonly("ci_low", &CorrelationResult::ci_low)
      .def_readonly("ci_high", &CorrelationResult::ci_high)
      .def_readonly("n", &CorrelationResult::n)
      .def_readonly("resamples", &CorrelationResult::resamples);

  py::class_<WilcoxonResult>(m, "WilcoxonResult")
      .def_readonly("w_statistic", &WilcoxonResult::w_statistic)
      .def_readonly("p_value", &WilcoxonResult::p_value)
      .def_readonly("n_effective", &WilcoxonResult::n_effective)
      .def_readonly("exact", &WilcoxonResult::exact);

  py::class_<MaeResult>(m, "MaeResult")
      .def_readonly("mae", &MaeResult::mae)
      .def_readonly("std_sample", &MaeResult::std_sample)
      .def_readonly("n", &MaeResult::n);

  py::class_<MaeMatrix>(m, "MaeMatrix")
      .def_readonly("rater_ids", &MaeMatrix::rater_ids)
      .def_readonly("cells", &MaeMatrix::cells)
      .def("mean_off_diagonal", &MaeMatrix::mean_off_diagonal);

  py::class_<WilsonInterval>(m, "WilsonInterval")
      .def_readonly("low", &WilsonInterval::low)
      .def_readonly("high", &WilsonInterval::high);

  py::class_<PreferenceOutcome>(m, "PreferenceOutcome")
      .def_readonly("accuracy", &PreferenceOutcome::accuracy)
      .def_readonly("ci_low", &PreferenceOutcome::ci_low)
      .def_readonly("ci_high", &PreferenceOutcome::ci_high)
      .def_readonly("n_used", &PreferenceOutcome::n_used)
      .def_readonly("n_ties", &PreferenceOutcome::n_ties);

  py::class_<CurvePoint>(m, "CurvePoint")
      .def_readonly("cutoff", &CurvePoint::cutoff)
      .def_readonly("accuracy", &CurvePoint::accuracy)
      .def_readonly("n", &CurvePoint::n);

  py::enum_<Choice>(m, "Choice")
      .value("candidate1", Choice::candidate1)
      .value("candidate2", Choice::candidate2);

  m.def("kendall_tau", &kendall_tau, py::arg("x"), py::arg("y"));
  m.def("tau_with_ci", &tau_with_ci, py::arg("x"), py::arg("y"),
        py::arg("resamples"), py::arg("seed"));
  m.def("wilcoxon_signed_rank", &wilcoxon_signed_rank, py::arg("a"),
        py::arg("b"));
  m.def("mae_pair", &mae_pair, py::arg("a"), py::arg("b"));
  m.def("mae_matrix", &mae_matrix, py::arg("raters"));
  m.def("wilson_interval", &wilson_interval, py::arg("successes"),
        py::arg("n"), py::arg("z") = 1.959963984540054);
  m.def("preference_accuracy", &preference_accuracy, py::arg("scores1"),
        py::arg("scores2"), py::arg("expert_choice"),
        py::arg("higher_is_better"));
  m.def("confidence_stratified_accuracy", &confidence_stratified_accuracy,
        py::arg("scores1"), py::arg("scores2"), py::arg("expert_choice"),
        py::arg("confidence"), py::arg("higher_is_better"),
        py::arg("cutoffs"));
  m.def("rouge_l", &rouge_l, py::arg("candidate"), py::arg("reference"));
  m.def("bleu", &bleu, py::arg("candidate"), py::arg("reference"));

  // ---- summarization -------------------------------------------------------

  py::class_<KmeansResult>(m, "KmeansResult")
      .def_readonly("labels", &KmeansResult::labels)
      .def_readonly("centroids", &KmeansResult::centroids)
      .def_readonly("inertia", &KmeansResult::inertia);

  py::class_<ClusterSelection>(m, "ClusterSelection")
      .def_readonly("k", &ClusterSelection::k)
      .def_readonly("labels", &ClusterSelection::labels)
      .def_readonly("chosen_cluster", &ClusterSelection::chosen_cluster)
      .def_readonly("representatives", &ClusterSelection::representatives)
      .def_readonly("silhouette", &ClusterSelection::silhouette);

  py::class_<SubcategorySummary>(m, "SubcategorySummary")
      .def_readonly("rate", &SubcategorySummary::rate)
      .def_readonly("representatives", &SubcategorySummary::representatives)
      .def_readonly("k", &SubcategorySummary::k)
      .def_readonly("silhouette", &SubcategorySummary::silhouette)
      .def_readonly("sentence_count", &SubcategorySummary::sentence_count);

  py::class_<SummaryReport>(m, "SummaryReport")
      .def_readonly("score_mean", &SummaryReport::score_mean)
      .def_readonly("score_std", &SummaryReport::score_std)
      .def_readonly("n", &SummaryReport::n)
      .def_readonly("parse_failures", &SummaryReport::parse_failures)
      .def_readonly("per_subcategory", &SummaryReport::per_subcategory);

  m.def("collect_explanations", &collect_explanations, py::arg("results"),
        py::arg("subcategory"));
  m.def("subcategory_rate", &subcategory_rate, py::arg("results"),
        py::arg("subcategory"));
  m.def("silhouette_mean", &silhouette_mean, py::arg("embeddings"),
        py::arg("labels"));
  m.def("kmeans", &kmeans, py::arg("points"), py::arg("k"), py::arg("seed"),
        py::arg("restarts") = 10);
  m.def("cluster_and_select", &cluster_and_select, py::arg("sentences"),
        py::arg("embeddings"), py::arg("seed"));
  m.def("build_summary", &build_summary, py::arg("results"), py::arg("embed"),
        py::arg("seed"), py::arg("parse_failures") = 0);
  m.def("render_summary", &render_summary, py::arg("report"));
  m.def("summary_to_json", &summary_to_json, py::arg("report"));

  // ---- prompting -----------------------------------------------------------

  py::class_<TemplateLibrary>(m, "TemplateLibrary")
      .def_static("load", &TemplateLibrary::load, py::arg("dir"))
      .def("evaluation", &TemplateLibrary::evaluation)
      .def("preference", &TemplateLibrary::preference)
      .def("corruption_errors", &TemplateLibrary::corruption_errors)
      .def("corruption_rephrase", &TemplateLibrary::corruption_rephrase)
      .def("checksums", &TemplateLibrary::checksums);

  py::class_<CorruptionSpec>(m, "CorruptionSpec")
      .def(py::init<>())
      .def_readwrite("error_types", &CorruptionSpec::error_types)
      .def_readwrite("subtle", &CorruptionSpec::subtle);

  m.def("build_eval_prompt",
        [](const TemplateLibrary& lib, const std::string& reference,
           const std::string& candidate) {
          return build_eval_prompt(lib, reference, candidate);
        },
        py::arg("templates"), py::arg("reference"), py::arg("candidate"));
  m.def("build_preference_prompt",
        [](const TemplateLibrary& lib, const std::string& reference,
           const std::string& candidate1, const std::string& candidate2) {
          return build_preference_prompt(lib, reference, candidate1,
                                         candidate2);
        },
        py::arg("templates"), py::arg("reference"), py::arg("candidate1"),
        py::arg("candidate2"));
  m.def("sample_corruption_spec",
        [](uint64_t seed) {
          std::mt19937_64 rng(seed);
          return sample_corruption_spec(rng);
        },
        py::arg("seed"));
  m.def("build_corruption_prompt",
        [](const TemplateLibrary& lib, const std::string& report,
           const CorruptionSpec& spec) {
          return build_corruption_prompt(lib, report, spec);
        },
        py::arg("templates"), py::arg("report"), py::arg("spec"));
  m.def("join_error_descriptions", &join_error_descriptions,
        py::arg("types"));

  // ---- synthesis -----------------------------------------------------------

  py::class_<ReportPair>(m, "ReportPair")
      .def(py::init<>())
      .def_readwrite("id", &ReportPair::id)
      .def_readwrite("reference", &ReportPair::reference)
      .def_readwrite("candidate", &ReportPair::candidate)
      .def_readwrite("source", &ReportPair::source);

  m.def("split_sentences",
        [](const std::string& report) {
          return sentence_texts(split_sentences(report));
        },
        py::arg("report"), "Trimmed sentence bodies, empties dropped");
  m.def("shuffle_sentences",
        [](const std::string& report, uint64_t seed) {
          std::mt19937_64 rng(seed);
          return shuffle_sentences(report, rng);
        },
        py::arg("report"), py::arg("seed"));
  m.def("drop_sentences",
        [](const std::string& report, double drop_fraction, uint64_t seed) {
          std::mt19937_64 rng(seed);
          return drop_sentences(report, drop_fraction, rng);
        },
        py::arg("report"), py::arg("drop_fraction"), py::arg("seed"));
  m.def("random_pairing",
        [](const std::vector<std::string>& reports, uint64_t seed) {
          std::mt19937_64 rng(seed);
          return random_pairing(reports, rng);
        },
        py::arg("reports"), py::arg("seed"));
}
