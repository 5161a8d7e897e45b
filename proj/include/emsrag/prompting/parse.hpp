#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::prompting {

enum class ParseMethod { TagMatch, LetterScan, OptionTextMatch };
const char* parse_method_name(ParseMethod m);

struct ParsedAnswer {
    std::set<char> labels;  // always a subset of the record's option labels
    std::string raw;        // the completion text that was parsed
    ParseMethod method = ParseMethod::TagMatch;
};

// Extracts the answered option letters from a completion, trying in order:
//  1. TagMatch — letters on the last line containing "answer:" (any case);
//  2. LetterScan — standalone uppercase option letters on the last non-empty
//     line;
//  3. OptionTextMatch — the longest option text appearing verbatim
//     (case-insensitive) anywhere in the completion.
// Letters outside the record's option labels are ignored at every stage.
// Returns nullopt when no stage produces at least one valid label; the caller
// scores such a question as incorrect and logs it.
std::optional<ParsedAnswer> parse_answer(std::string_view completion,
                                         const std::vector<corpus::Option>& options);

}  // namespace emsrag::prompting
