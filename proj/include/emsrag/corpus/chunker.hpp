#pragma once

#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include "emsrag/corpus/types.hpp"

namespace emsrag::corpus {

struct TokenSpan {
    std::size_t begin = 0;  // byte offsets into the source text
    std::size_t end = 0;    // exclusive
};

class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::vector<TokenSpan> tokenize(std::string_view text) const = 0;
};

// Maximal runs of non-whitespace bytes.
class WhitespaceTokenizer : public Tokenizer {
public:
    std::vector<TokenSpan> tokenize(std::string_view text) const override;
};

struct ChunkingConfig {
    std::size_t window = 512;   // tokens per chunk
    std::size_t overlap = 128;  // tokens shared by consecutive chunks
};

// Sliding-window chunking with stride = window - overlap. Every token lands
// in at least one chunk; consecutive chunks overlap by exactly `overlap`
// tokens; only the final chunk may be shorter than the window. For n tokens,
// the chunk count is 1 when n <= window, else ceil((n - overlap) / stride).
// Chunk ids are "<parent_id>#<ordinal>". Throws EmptyText when the text has
// no tokens and std::invalid_argument unless 0 <= overlap < window.
std::vector<Chunk> chunk_text(std::string_view text, const ChunkingConfig& config,
                              const Tokenizer& tokenizer, std::string_view parent_id,
                              CorpusTag corpus, SubjectArea subject);

}  // namespace emsrag::corpus
