#pragma once

#include <string>
#include <vector>

#include "emsrag/backends/embedding.hpp"

namespace emsrag::index {

// Embeds `texts` through the backend in batches of at most `batch_size`,
// retrying failed batches up to `retries` extra times. The concatenated
// result is identical to a single unbatched call on a deterministic backend.
// Throws BackendUnavailable after retries are exhausted and
// DimensionMismatch if any returned vector disagrees with backend.dim().
std::vector<std::vector<float>> embed_texts(backends::EmbeddingBackend& backend,
                                            const std::vector<std::string>& texts,
                                            std::size_t batch_size = 64, int retries = 2);

}  // namespace emsrag::index
