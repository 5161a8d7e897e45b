#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emsrag::backends {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    double timeout_sec = 60.0;
};

struct ChatUsage {
    long prompt_tokens = -1;      // -1 when the service does not report usage
    long completion_tokens = -1;
};

struct ChatResponse {
    std::string text;
    ChatUsage usage;
    int retries = 0;  // transient failures absorbed before this response
};

struct BackendPolicy {
    int max_concurrent = 4;       // admission bound on in-flight requests
    int retry = 3;                // attempts after the first, on 429/5xx/transport errors
    double backoff_base_sec = 0.5;  // sleep = base * 2^attempt
    int rate_per_minute = 0;      // 0 = unlimited
};

// Counting-semaphore admission gate. Tracks the maximum number of
// simultaneous holders so tests can assert the bound was never exceeded.
class ConcurrencyGate {
public:
    explicit ConcurrencyGate(int limit);
    void acquire();
    void release();
    int limit() const { return limit_; }
    int max_in_flight() const { return max_in_flight_.load(); }

    class Scope {
    public:
        explicit Scope(ConcurrencyGate& gate) : gate_(gate) { gate_.acquire(); }
        ~Scope() { gate_.release(); }
        Scope(const Scope&) = delete;
        Scope& operator=(const Scope&) = delete;

    private:
        ConcurrencyGate& gate_;
    };

private:
    const int limit_;
    int in_flight_ = 0;
    std::atomic<int> max_in_flight_{0};
    std::mutex mu_;
    std::condition_variable cv_;
};

// Stable identity of a prompt: fnv1a64 over system and user text. Used to key
// the mock backend's script and to correlate audit records.
std::string prompt_fingerprint(std::string_view system_text, std::string_view user_text);

// One JSONL record per backend call (request summary + response). Thread-safe.
class AuditLog {
public:
    explicit AuditLog(std::filesystem::path path) : path_(std::move(path)) {}
    void record(std::string_view backend_id, const ChatRequest& request,
                const std::string& response_text, double latency_ms, int retries);

private:
    std::filesystem::path path_;
    std::mutex mu_;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse chat(const ChatRequest& request) = 0;
    virtual std::string id() const = 0;
};

// Deterministic stand-in for a chat service. Completions are selected by
// prompt fingerprint from a scripted map, falling back to a fixed default;
// echo mode returns the user message verbatim. Instrumented with call and
// concurrency counters so policy contracts are testable.
class MockChatBackend : public ChatBackend {
public:
    explicit MockChatBackend(std::string default_completion = "Answer: A");

    // Echo mode returns the user message verbatim instead of a scripted lookup.
    void set_echo(bool echo) { echo_ = echo; }

    void script(std::string_view system_text, std::string_view user_text, std::string completion);
    void script_fingerprint(std::string fingerprint, std::string completion);
    void load_script_jsonl(const std::filesystem::path& path);  // {"fingerprint","completion"}

    void set_delay_ms(int ms) { delay_ms_ = ms; }
    void set_audit(std::shared_ptr<AuditLog> audit) { audit_ = std::move(audit); }

    ChatResponse chat(const ChatRequest& request) override;
    std::string id() const override { return "mock-chat"; }

    long call_count() const { return calls_.load(); }
    int max_in_flight() const { return max_in_flight_.load(); }

private:
    bool echo_ = false;
    std::string default_completion_;
    std::map<std::string, std::string> by_fingerprint_;
    std::atomic<long> calls_{0};
    std::atomic<int> in_flight_{0};
    std::atomic<int> max_in_flight_{0};
    int delay_ms_ = 0;
    std::shared_ptr<AuditLog> audit_;
    mutable std::mutex mu_;
};

// Chat-completions HTTP client: POST {model, messages, temperature} to
// `endpoint_path`, reads choices[0].message.content. Retries 429/5xx and
// transport failures with exponential backoff under the policy's admission
// gate. Throws BackendUnavailable / Timeout / MalformedResponse.
class HttpChatBackend : public ChatBackend {
public:
    HttpChatBackend(std::string base_url, std::string model, BackendPolicy policy = {},
                    std::string api_key = {}, std::string endpoint_path = "/v1/chat/completions");
    ~HttpChatBackend() override;

    void set_audit(std::shared_ptr<AuditLog> audit) { audit_ = std::move(audit); }

    ChatResponse chat(const ChatRequest& request) override;
    std::string id() const override;

private:
    std::string base_url_;
    std::string model_;
    BackendPolicy policy_;
    std::string api_key_;
    std::string endpoint_path_;
    std::unique_ptr<ConcurrencyGate> gate_;
    std::shared_ptr<AuditLog> audit_;
    std::mutex rate_mu_;
    double next_allowed_monotonic_ = 0.0;  // rate_per_minute spacing
};

}  // namespace emsrag::backends
