#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::corpus {

// Field values that carry no information and are removed before flattening.
const std::vector<std::string>& default_drop_values();

struct FilteredFields {
    std::vector<std::pair<std::string, std::string>> fields;  // kept, original order
    std::size_t dropped = 0;
};

// Removes fields whose value is in `drop_values` (compared after trimming).
// Returns nullopt (record rejected) when the dropped share is strictly
// greater than `reject_fraction`; an exact boundary ratio is kept.
// Requires at least one input field.
std::optional<FilteredFields> filter_patient_fields(
    const std::vector<std::pair<std::string, std::string>>& fields,
    double reject_fraction = 0.30,
    const std::vector<std::string>& drop_values = default_drop_values());

// "Key: Value; Key: Value" over the kept fields, in order.
std::string flatten_patient_record(const std::vector<std::pair<std::string, std::string>>& fields);

// Exact inverse of flatten_patient_record for keys/values that do not
// themselves contain the "; " / ": " separators (true of filtered fields).
std::vector<std::pair<std::string, std::string>> parse_flattened(std::string_view text);

// Exact-match protocol lookup against the shipped seven-area table.
// Unknown protocols map to SubjectArea::others; callers that need to track
// unmapped rates check protocol_is_mapped first.
SubjectArea map_protocol_to_subject(std::string_view protocol);
bool protocol_is_mapped(std::string_view protocol);
const std::vector<std::pair<std::string, SubjectArea>>& protocol_subject_table();

}  // namespace emsrag::corpus
