#include "emsrag/index/embed.hpp"

#include <stdexcept>

#include "emsrag/common/error.hpp"

namespace emsrag::index {

std::vector<std::vector<float>> embed_texts(backends::EmbeddingBackend& backend,
                                            const std::vector<std::string>& texts,
                                            std::size_t batch_size, int retries) {
    if (texts.empty()) throw std::invalid_argument("embed_texts: empty batch");
    if (batch_size == 0) throw std::invalid_argument("embed_texts: batch_size must be >= 1");

    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (std::size_t offset = 0; offset < texts.size(); offset += batch_size) {
        const std::size_t n = std::min(batch_size, texts.size() - offset);
        const std::vector<std::string> batch(texts.begin() + static_cast<std::ptrdiff_t>(offset),
                                             texts.begin() +
                                                 static_cast<std::ptrdiff_t>(offset + n));
        std::vector<std::vector<float>> vectors;
        std::string last_error;
        for (int attempt = 0; attempt <= retries; ++attempt) {
            try {
                vectors = backend.embed(batch);
                break;
            } catch (const DimensionMismatch&) {
                throw;  // not transient
            } catch (const Error& e) {
                last_error = e.what();
                if (attempt == retries)
                    throw BackendUnavailable("embed_texts: batch at offset " +
                                             std::to_string(offset) + " failed: " + last_error);
            }
        }
        if (vectors.size() != batch.size())
            throw MalformedResponse("embed_texts: backend returned " +
                                    std::to_string(vectors.size()) + " vectors for " +
                                    std::to_string(batch.size()) + " texts");
        for (const auto& vec : vectors)
            if (static_cast<int>(vec.size()) != backend.dim())
                throw DimensionMismatch("embed_texts: vector dim " + std::to_string(vec.size()) +
                                        ", backend dim " + std::to_string(backend.dim()));
        for (auto& vec : vectors) out.push_back(std::move(vec));
    }
    return out;
}

}  // namespace emsrag::index
