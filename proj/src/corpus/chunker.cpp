#include "emsrag/corpus/chunker.hpp"

#include <cctype>
#include <stdexcept>

#include "emsrag/common/error.hpp"

namespace emsrag::corpus {

std::vector<TokenSpan> WhitespaceTokenizer::tokenize(std::string_view text) const {
    std::vector<TokenSpan> spans;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        const std::size_t begin = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        spans.push_back(TokenSpan{begin, i});
    }
    return spans;
}

std::vector<Chunk> chunk_text(std::string_view text, const ChunkingConfig& config,
                              const Tokenizer& tokenizer, std::string_view parent_id,
                              CorpusTag corpus, SubjectArea subject) {
    if (config.window == 0 || config.overlap >= config.window)
        throw std::invalid_argument("chunk_text: require 0 <= overlap < window");
    const std::vector<TokenSpan> tokens = tokenizer.tokenize(text);
    if (tokens.empty()) throw EmptyText("chunk_text: no tokens in '" + std::string(parent_id) + "'");

    const std::size_t stride = config.window - config.overlap;
    std::vector<Chunk> chunks;
    std::size_t start = 0;
    std::size_t ordinal = 0;
    while (true) {
        const std::size_t end = std::min(start + config.window, tokens.size());
        Chunk chunk;
        chunk.id = std::string(parent_id) + "#" + std::to_string(ordinal);
        chunk.parent_id = std::string(parent_id);
        chunk.corpus = corpus;
        chunk.subject = subject;
        chunk.token_start = start;
        chunk.token_end = end;
        chunk.text = std::string(text.substr(tokens[start].begin,
                                             tokens[end - 1].end - tokens[start].begin));
        chunks.push_back(std::move(chunk));
        ++ordinal;
        if (start + config.window >= tokens.size()) break;
        start += stride;
    }
    return chunks;
}

}  // namespace emsrag::corpus
