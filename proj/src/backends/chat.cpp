#include "emsrag/backends/chat.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "emsrag/common/error.hpp"
#include "emsrag/common/hash.hpp"
#include "emsrag/common/jsonl.hpp"

namespace emsrag::backends {

namespace {

double monotonic_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::pair<std::string, std::string> split_system_user(const ChatRequest& request) {
    std::string system_text;
    std::string user_text;
    for (const auto& m : request.messages) {
        if (m.role == "system") {
            if (!system_text.empty()) system_text += '\n';
            system_text += m.content;
        } else {
            if (!user_text.empty()) user_text += '\n';
            user_text += m.content;
        }
    }
    return {system_text, user_text};
}

}  // namespace

ConcurrencyGate::ConcurrencyGate(int limit) : limit_(limit > 0 ? limit : 1) {}

void ConcurrencyGate::acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
    int seen = max_in_flight_.load();
    while (in_flight_ > seen && !max_in_flight_.compare_exchange_weak(seen, in_flight_)) {
    }
}

void ConcurrencyGate::release() {
    {
        std::lock_guard<std::mutex> lock(mu_);
        --in_flight_;
    }
    cv_.notify_one();
}

std::string prompt_fingerprint(std::string_view system_text, std::string_view user_text) {
    std::uint64_t h = fnv1a64(system_text);
    h = fnv1a64("\x1f", h);  // separator so ("ab","c") != ("a","bc")
    h = fnv1a64(user_text, h);
    return to_hex(h);
}

void AuditLog::record(std::string_view backend_id, const ChatRequest& request,
                      const std::string& response_text, double latency_ms, int retries) {
    const auto [system_text, user_text] = split_system_user(request);
    nlohmann::json row{
        {"backend", std::string(backend_id)},
        {"model", request.model},
        {"fingerprint", prompt_fingerprint(system_text, user_text)},
        {"system", system_text},
        {"user", user_text},
        {"response", response_text},
        {"latency_ms", latency_ms},
        {"retries", retries},
    };
    std::lock_guard<std::mutex> lock(mu_);
    std::ofstream out(path_, std::ios::app);
    if (!out) throw IoError("cannot open audit log " + path_.string());
    out << row.dump() << '\n';
}

MockChatBackend::MockChatBackend(std::string default_completion)
    : default_completion_(std::move(default_completion)) {}


void MockChatBackend::script(std::string_view system_text, std::string_view user_text,
                             std::string completion) {
    script_fingerprint(prompt_fingerprint(system_text, user_text), std::move(completion));
}

void MockChatBackend::script_fingerprint(std::string fingerprint, std::string completion) {
    std::lock_guard<std::mutex> lock(mu_);
    by_fingerprint_[std::move(fingerprint)] = std::move(completion);
}

void MockChatBackend::load_script_jsonl(const std::filesystem::path& path) {
    for (const auto& row : jsonl::read_file(path))
        script_fingerprint(row.at("fingerprint").get<std::string>(),
                           row.at("completion").get<std::string>());
}

ChatResponse MockChatBackend::chat(const ChatRequest& request) {
    const int now = in_flight_.fetch_add(1) + 1;
    int seen = max_in_flight_.load();
    while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
    }
    calls_.fetch_add(1);
    if (delay_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));

    const auto [system_text, user_text] = split_system_user(request);
    ChatResponse response;
    if (echo_) {
        response.text = user_text;
    } else {
        const std::string fp = prompt_fingerprint(system_text, user_text);
        std::lock_guard<std::mutex> lock(mu_);
        const auto it = by_fingerprint_.find(fp);
        response.text = it == by_fingerprint_.end() ? default_completion_ : it->second;
    }
    in_flight_.fetch_sub(1);
    if (audit_) audit_->record(id(), request, response.text, 0.0, 0);
    return response;
}

HttpChatBackend::HttpChatBackend(std::string base_url, std::string model, BackendPolicy policy,
                                 std::string api_key, std::string endpoint_path)
    : base_url_(std::move(base_url)),
      model_(std::move(model)),
      policy_(policy),
      api_key_(std::move(api_key)),
      endpoint_path_(std::move(endpoint_path)),
      gate_(std::make_unique<ConcurrencyGate>(policy.max_concurrent)) {}

HttpChatBackend::~HttpChatBackend() = default;

std::string HttpChatBackend::id() const { return "http-chat:" + model_; }

ChatResponse HttpChatBackend::chat(const ChatRequest& request) {
    ConcurrencyGate::Scope admission(*gate_);

    if (policy_.rate_per_minute > 0) {
        double wait = 0.0;
        {
            std::lock_guard<std::mutex> lock(rate_mu_);
            const double now = monotonic_seconds();
            const double spacing = 60.0 / policy_.rate_per_minute;
            const double slot = std::max(now, next_allowed_monotonic_);
            next_allowed_monotonic_ = slot + spacing;
            wait = slot - now;
        }
        if (wait > 0) std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }

    nlohmann::json body{{"model", request.model.empty() ? model_ : request.model},
                        {"temperature", request.temperature},
                        {"messages", nlohmann::json::array()}};
    for (const auto& m : request.messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    const std::string payload = body.dump();

    httplib::Client client(base_url_);
    client.set_connection_timeout(std::chrono::duration<double>(request.timeout_sec));
    client.set_read_timeout(std::chrono::duration<double>(request.timeout_sec));
    client.set_write_timeout(std::chrono::duration<double>(request.timeout_sec));
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    const auto started = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt <= policy_.retry; ++attempt) {
        if (attempt > 0) {
            const double backoff = policy_.backoff_base_sec * std::pow(2.0, attempt - 1);
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
        }
        auto result = client.Post(endpoint_path_, headers, payload, "application/json");
        if (!result) {
            last_error = httplib::to_string(result.error());
            if (result.error() == httplib::Error::ConnectionTimeout ||
                result.error() == httplib::Error::Read || result.error() == httplib::Error::Write) {
                continue;  // transport-level, retryable
            }
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
            ChatResponse response;
            response.text =
                parsed.at("choices").at(0).at("message").at("content").get<std::string>();
            if (parsed.contains("usage")) {
                response.usage.prompt_tokens = parsed["usage"].value("prompt_tokens", -1);
                response.usage.completion_tokens = parsed["usage"].value("completion_tokens", -1);
            }
            response.retries = attempt;
            if (audit_) {
                const double latency_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              started)
                        .count();
                audit_->record(id(), request, response.text, latency_ms, attempt);
            }
            return response;
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponse(id() + ": " + e.what() + "; body: " +
                                    result->body.substr(0, 200));
        }
    }
    if (last_error.find("imeout") != std::string::npos)
        throw Timeout(id() + ": " + last_error + " after " + std::to_string(policy_.retry + 1) +
                      " attempts");
    throw BackendUnavailable(id() + ": " + last_error + " after " +
                             std::to_string(policy_.retry + 1) + " attempts");
}

}  // namespace emsrag::backends
