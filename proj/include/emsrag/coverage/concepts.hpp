#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emsrag/backends/chat.hpp"

namespace emsrag::coverage {

// Chain-of-thought concept-extraction prompt with a {text} placeholder.
const std::string& extraction_prompt_template();
std::string render_extraction_prompt(std::string_view text);

// Items of the final bracketed JSON-ish list in a completion. Parsing is
// deliberately lenient: items may miss a quote on either side (models emit
// that malformation). Throws UnparseableList when no bracketed list exists.
std::vector<std::string> parse_concept_list(std::string_view completion);

// Full extraction: render, call the backend, parse, lowercase, de-duplicate
// preserving first occurrence. Empty input short-circuits to {} without a call.
std::vector<std::string> extract_concepts(std::string_view text, backends::ChatBackend& backend,
                                          const std::string& model);

struct SemanticType {
    std::string code;  // e.g. "Sosy"
    std::string name;  // e.g. "Sign or Symptom"
};

// The retained-type whitelist (37 entries). Codes compare case-insensitively.
const std::vector<SemanticType>& semantic_type_whitelist();
bool type_whitelisted(std::string_view code);

struct NormalizedConcept {
    std::string term;
    std::string canonical;
    std::string semantic_type;
};

// Maps a surface concept to (canonical form, semantic type code), or nullopt
// when the service knows nothing about it. Implementations may throw
// NormalizerUnavailable.
class ConceptNormalizer {
public:
    virtual ~ConceptNormalizer() = default;
    virtual std::optional<std::pair<std::string, std::string>> normalize(
        const std::string& term) = 0;
    virtual std::string id() const = 0;
};

// Offline default: every concept maps to itself with type "unknown".
class IdentityNormalizer : public ConceptNormalizer {
public:
    std::optional<std::pair<std::string, std::string>> normalize(
        const std::string& term) override {
        return std::make_pair(term, std::string("unknown"));
    }
    std::string id() const override { return "identity"; }
};

// Keeps concepts whose type is whitelisted; "unknown" is kept only when
// keep_unknown is set. Concepts the normalizer cannot map are dropped.
std::vector<NormalizedConcept> normalize_concepts(const std::vector<std::string>& concepts,
                                                  ConceptNormalizer& normalizer,
                                                  bool keep_unknown);

}  // namespace emsrag::coverage
