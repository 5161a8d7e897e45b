#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "emsrag/backends/chat.hpp"  // BackendPolicy, ConcurrencyGate

namespace emsrag::backends {

class EmbeddingBackend {
public:
    virtual ~EmbeddingBackend() = default;
    // One vector per input text, in order. All vectors share dim().
    virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) = 0;
    virtual int dim() const = 0;
    virtual std::string id() const = 0;
};

// Deterministic embedding stand-in. Default mode derives each vector from a
// hash of the text (identical texts always embed identically); individual
// texts can be scripted to hand-set vectors for fixtures.
class MockEmbeddingBackend : public EmbeddingBackend {
public:
    explicit MockEmbeddingBackend(int dim = 64);

    void script(const std::string& text, std::vector<float> vec);
    void load_script_jsonl(const std::filesystem::path& path);  // {"text","vector"}

    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;
    int dim() const override { return dim_; }
    std::string id() const override { return "mock-embed"; }

    long call_count() const { return calls_.load(); }
    long text_count() const { return texts_.load(); }

private:
    std::vector<float> hashed_vector(const std::string& text) const;

    int dim_;
    std::map<std::string, std::vector<float>> scripted_;
    std::atomic<long> calls_{0};
    std::atomic<long> texts_{0};
    mutable std::mutex mu_;
};

// Embeddings HTTP client: POST {model, input: [texts]} to `endpoint_path`,
// reads data[i].embedding. Same retry/backoff/admission policy semantics as
// the chat client.
class HttpEmbeddingBackend : public EmbeddingBackend {
public:
    HttpEmbeddingBackend(std::string base_url, std::string model, int dim,
                         BackendPolicy policy = {}, std::string api_key = {},
                         std::string endpoint_path = "/v1/embeddings");
    ~HttpEmbeddingBackend() override;

    std::vector<std::vector<float>> embed(const std::vector<std::string>& texts) override;
    int dim() const override { return dim_; }
    std::string id() const override;

private:
    std::string base_url_;
    std::string model_;
    int dim_;
    BackendPolicy policy_;
    std::string api_key_;
    std::string endpoint_path_;
    std::unique_ptr<ConcurrencyGate> gate_;
};

}  // namespace emsrag::backends
