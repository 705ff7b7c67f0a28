#include "green/errors.hpp"

namespace green {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_record: return "MalformedRecord";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::negative_count: return "NegativeCount";
    case Errc::confidence_out_of_range: return "ConfidenceOutOfRange";
    case Errc::empty_reference: return "EmptyReference";
    case Errc::empty_report: return "EmptyReport";
    case Errc::template_checksum_mismatch: return "TemplateChecksumMismatch";
    case Errc::backend_unavailable: return "BackendUnavailable";
    case Errc::backend_refused: return "BackendRefused";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::missing_section: return "MissingSection";
    case Errc::unparsable_count: return "UnparsableCount";
    case Errc::no_label_found: return "NoLabelFound";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::all_tied: return "AllTied";
    case Errc::all_zero_differences: return "AllZeroDifferences";
    case Errc::empty_input: return "EmptyInput";
    case Errc::missing_annotation: return "MissingAnnotation";
    case Errc::too_few_sentences: return "TooFewSentences";
    case Errc::too_few_reports: return "TooFewReports";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::missing_candidate_marker: return "MissingCandidateMarker";
    case Errc::degenerate_clustering: return "DegenerateClustering";
    case Errc::config_error: return "ConfigError";
    case Errc::io_error: return "IoError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace green
