#include "emsrag/backends/embedding.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "emsrag/common/error.hpp"
#include "emsrag/common/hash.hpp"
#include "emsrag/common/jsonl.hpp"
#include "emsrag/common/rng.hpp"

namespace emsrag::backends {

MockEmbeddingBackend::MockEmbeddingBackend(int dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("MockEmbeddingBackend: dim must be positive");
}

void MockEmbeddingBackend::script(const std::string& text, std::vector<float> vec) {
    if (static_cast<int>(vec.size()) != dim_)
        throw DimensionMismatch("scripted vector has dim " + std::to_string(vec.size()) +
                                ", backend dim " + std::to_string(dim_));
    std::lock_guard<std::mutex> lock(mu_);
    scripted_[text] = std::move(vec);
}

void MockEmbeddingBackend::load_script_jsonl(const std::filesystem::path& path) {
    for (const auto& row : jsonl::read_file(path))
        script(row.at("text").get<std::string>(), row.at("vector").get<std::vector<float>>());
}

std::vector<float> MockEmbeddingBackend::hashed_vector(const std::string& text) const {
    rng::SplitMix64 gen(fnv1a64(text));
    std::vector<float> vec(static_cast<std::size_t>(dim_));
    double norm_sq = 0.0;
    for (auto& v : vec) {
        v = static_cast<float>(gen.uniform(-1.0, 1.0));
        norm_sq += static_cast<double>(v) * v;
    }
    const double norm = std::sqrt(norm_sq);
    if (norm > 0)
        for (auto& v : vec) v = static_cast<float>(v / norm);
    else
        vec[0] = 1.0f;
    return vec;
}

std::vector<std::vector<float>> MockEmbeddingBackend::embed(const std::vector<std::string>& texts) {
    calls_.fetch_add(1);
    texts_.fetch_add(static_cast<long>(texts.size()));
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& text : texts) {
        const auto it = scripted_.find(text);
        out.push_back(it != scripted_.end() ? it->second : hashed_vector(text));
    }
    return out;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(std::string base_url, std::string model, int dim,
                                           BackendPolicy policy, std::string api_key,
                                           std::string endpoint_path)
    : base_url_(std::move(base_url)),
      model_(std::move(model)),
      dim_(dim),
      policy_(policy),
      api_key_(std::move(api_key)),
      endpoint_path_(std::move(endpoint_path)),
      gate_(std::make_unique<ConcurrencyGate>(policy.max_concurrent)) {}

HttpEmbeddingBackend::~HttpEmbeddingBackend() = default;

std::string HttpEmbeddingBackend::id() const { return "http-embed:" + model_; }

std::vector<std::vector<float>> HttpEmbeddingBackend::embed(
    const std::vector<std::string>& texts) {
    ConcurrencyGate::Scope admission(*gate_);

    nlohmann::json body{{"model", model_}, {"input", texts}};
    const std::string payload = body.dump();

    httplib::Client client(base_url_);
    client.set_read_timeout(std::chrono::seconds(120));
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    std::string last_error;
    for (int attempt = 0; attempt <= policy_.retry; ++attempt) {
        if (attempt > 0) {
            const double backoff = policy_.backoff_base_sec * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
        }
        auto result = client.Post(endpoint_path_, headers, payload, "application/json");
        if (!result) {
            last_error = httplib::to_string(result.error());
            continue;
        }
        if (result->status == 429 || result->status >= 500) {
            last_error = "HTTP " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200)
            throw BackendUnavailable(id() + ": HTTP " + std::to_string(result->status) + " " +
                                     result->body.substr(0, 200));
        try {
            const auto parsed = nlohmann::json::parse(result->body);
            std::vector<std::vector<float>> out;
            out.reserve(texts.size());
            for (const auto& item : parsed.at("data"))
                out.push_back(item.at("embedding").get<std::vector<float>>());
            if (out.size() != texts.size())
                throw MalformedResponse(id() + ": got " + std::to_string(out.size()) +
                                        " embeddings for " + std::to_string(texts.size()) +
                                        " inputs");
            for (const auto& vec : out)
                if (static_cast<int>(vec.size()) != dim_)
                    throw DimensionMismatch(id() + ": embedding dim " +
                                            std::to_string(vec.size()) + ", expected " +
                                            std::to_string(dim_));
            return out;
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponse(id() + ": " + e.what() + "; body: " +
                                    result->body.substr(0, 200));
        }
    }
    throw BackendUnavailable(id() + ": " + last_error + " after " +
                             std::to_string(policy_.retry + 1) + " attempts");
}

}  // namespace emsrag::backends
