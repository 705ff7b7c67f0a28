#include "green/taxonomy.hpp"

namespace green {

std::optional<ErrorSubcategory> subcategory_from_letter(char letter) {
  if (letter >= 'A' && letter <= 'F') letter = static_cast<char>(letter - 'A' + 'a');
  if (letter < 'a' || letter > 'f') return std::nullopt;
  return static_cast<ErrorSubcategory>(letter - 'a');
}

std::string_view subcategory_description(ErrorSubcategory s) {
  switch (s) {
    case ErrorSubcategory::A:
      return "False report of a finding in the candidate";
    case ErrorSubcategory::B:
      return "Missing a finding present in the reference";
    case ErrorSubcategory::C:
      return "Misidentification of a finding's anatomic location/position";
    case ErrorSubcategory::D:
      return "Misassessment of the severity of a finding";
    case ErrorSubcategory::E:
      return "Mentioning a comparison that isn't in the reference";
    case ErrorSubcategory::F:
      return "Omitting a comparison detailing a change from a prior study";
  }
  return "";
}

}  // namespace green
