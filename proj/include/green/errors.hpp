#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace green {

// One code per contract violation the public surface can report. Tests match
// on the code, messages are for humans.
enum class Errc {
  // corpus
  malformed_record,
  duplicate_id,
  negative_count,
  confidence_out_of_range,
  // prompting
  empty_reference,
  empty_report,
  template_checksum_mismatch,
  // gateway
  backend_unavailable,
  backend_refused,
  dimension_mismatch,
  // parsing
  missing_section,
  unparsable_count,
  no_label_found,
  // statistics
  length_mismatch,
  all_tied,
  all_zero_differences,
  empty_input,
  missing_annotation,
  // synthesis
  too_few_sentences,
  too_few_reports,
  shape_mismatch,
  missing_candidate_marker,
  // clustering
  degenerate_clustering,
  // plumbing
  config_error,
  io_error,
  invalid_argument,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace green
