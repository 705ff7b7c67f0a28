"""Radiology report evaluation: analysis parsing, scoring, validation
statistics, summarization and synthesis heuristics over the C++ core."""

from greeneval._core import (
    Choice,
    ClusterSelection,
    CorrelationResult,
    CorruptionSpec,
    CurvePoint,
    Error,
    ErrorSubcategory,
    GreenAnalysis,
    GreenResult,
    KmeansResult,
    MaeMatrix,
    MaeResult,
    PreferenceLabel,
    PreferenceOutcome,
    ReportPair,
    ScoreAggregate,
    SubcategoryFinding,
    SubcategorySummary,
    SummaryReport,
    TemplateLibrary,
    WilcoxonResult,
    WilsonInterval,
    aggregate,
    analysis_from_counts,
    bleu,
    build_corruption_prompt,
    build_eval_prompt,
    build_preference_prompt,
    build_summary,
    cluster_and_select,
    collect_explanations,
    confidence_stratified_accuracy,
    drop_sentences,
    green_score,
    join_error_descriptions,
    kendall_tau,
    kmeans,
    load_results,
    mae_matrix,
    mae_pair,
    make_result,
    parse_green_analysis,
    parse_preference,
    preference_accuracy,
    random_pairing,
    render_green_analysis,
    render_summary,
    results_to_jsonl,
    rouge_l,
    sample_corruption_spec,
    shuffle_sentences,
    significant_error_count,
    silhouette_mean,
    split_sentences,
    subcategories,
    subcategory_description,
    subcategory_rate,
    summary_to_json,
    tau_with_ci,
    total_error_count,
    wilcoxon_signed_rank,
    wilson_interval,
    write_results,
)

__all__ = [name for name in dir() if not name.startswith("_")]
