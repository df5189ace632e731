#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mutforge/clock.hpp"
#include "mutforge/errors.hpp"
#include "mutforge/hash.hpp"
#include "mutforge/source_file.hpp"

namespace mutforge {

struct ChatRequest {
    std::string model;
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    int max_tokens = 250;
};

struct Usage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    std::int64_t total_tokens = 0;

    Usage& operator+=(const Usage& other) {
        prompt_tokens += other.prompt_tokens;
        completion_tokens += other.completion_tokens;
        total_tokens += other.total_tokens;
        return *this;
    }
};

struct ChatResponse {
    std::string content;
    Usage usage;
    std::int64_t latency_ms = 0;
    bool usage_estimated = false;
};

struct ClientPolicy {
    std::int64_t rate_limit_ms = 0;
    int nr_attempts = 3;
};

inline Usage run_token_totals(const std::vector<Usage>& usages) {
    Usage total;
    for (const auto& u : usages) total += u;
    return total;
}

// Raw wire-level result: HTTP status plus body. Status 0 means the request
// never reached the endpoint.
struct WireReply {
    int status = 0;
    std::string body;
    std::string detail;
};

class CompletionBackend {
public:
    virtual ~CompletionBackend() = default;
    virtual WireReply send(const ChatRequest& req) = 0;
};

inline nlohmann::json chat_request_body(const ChatRequest& req) {
    return nlohmann::json{
        {"model", req.model},
        {"messages",
         {{{"role", "system"}, {"content", req.system_text}},
          {{"role", "user"}, {"content", req.user_text}}}},
        {"temperature", req.temperature},
        {"max_tokens", req.max_tokens},
    };
}

inline std::int64_t estimate_tokens(std::string_view text) {
    return static_cast<std::int64_t>((text.size() + 3) / 4);
}

// Scripted stand-in for a completions endpoint. The fixture maps
// SHA-256(user_text) to a reply script:
//   {
//     "entries": {
//       "<hex digest>": {
//         "content": "...",
//         "errors": [429, 429],
//         "usage": {"prompt_tokens": 10, "completion_tokens": 5}
//       }
//     },
//     "default": {"content": ""}
//   }
// The optional "errors" list is consumed first, one status per call, before
// the scripted content is served. Unmapped prompts get the "default" entry.
class MockBackend final : public CompletionBackend {
public:
    static MockBackend from_file(const std::string& path) {
        return MockBackend(nlohmann::json::parse(read_text_file(path)));
    }

    explicit MockBackend(nlohmann::json fixture) : fixture_(std::move(fixture)) {
        if (!fixture_.is_object()) throw Error("mock fixture must be a JSON object");
    }

    WireReply send(const ChatRequest& req) override {
        std::string digest = sha256_hex(req.user_text);
        const nlohmann::json* entry = nullptr;
        if (fixture_.contains("entries") && fixture_["entries"].contains(digest))
            entry = &fixture_["entries"][digest];
        else if (fixture_.contains("default"))
            entry = &fixture_["default"];
        if (!entry) return {404, "", "no fixture entry for prompt " + digest};

        std::size_t call_nr = calls_[digest]++;
        if (entry->contains("errors")) {
            const auto& errors = (*entry)["errors"];
            if (call_nr < errors.size()) return {errors[call_nr].get<int>(), "", "scripted error"};
        }

        nlohmann::json body = {
            {"choices", {{{"message", {{"role", "assistant"},
                                       {"content", entry->value("content", std::string())}}}}}},
        };
        if (entry->contains("usage")) body["usage"] = (*entry)["usage"];
        return {200, body.dump(), ""};
    }

    std::size_t calls_for(std::string_view user_text) const {
        auto it = calls_.find(sha256_hex(user_text));
        return it == calls_.end() ? 0 : it->second;
    }

private:
    nlohmann::json fixture_;
    std::map<std::string, std::size_t> calls_;
};

// Sends chat requests to one backend, enforcing the pacing and retry policy:
// consecutive request starts (retries included) are at least rate_limit_ms
// apart, and only status 429 is retried, up to nr_attempts tries in total.
class LlmClient {
public:
    LlmClient(CompletionBackend& backend, ClientPolicy policy, Clock& clock)
        : backend_(backend), policy_(policy), clock_(clock) {
        if (policy_.nr_attempts < 1) throw Error("nr_attempts must be at least 1");
        if (policy_.rate_limit_ms < 0) throw Error("rate_limit_ms must be nonnegative");
    }

    ChatResponse complete(const ChatRequest& req) {
        for (int attempt = 1;; ++attempt) {
            std::int64_t start = wait_for_slot();
            WireReply reply = backend_.send(req);
            if (reply.status == 429) {
                if (attempt >= policy_.nr_attempts)
                    throw RateLimitedError("rate-limited " + std::to_string(attempt) +
                                           " times; giving up");
                continue;
            }
            if (reply.status != 200)
                throw TransportError("endpoint returned status " + std::to_string(reply.status) +
                                     (reply.detail.empty() ? "" : ": " + reply.detail));
            ChatResponse response = parse_reply(req, reply.body);
            response.latency_ms = clock_.now_ms() - start;
            return response;
        }
    }

private:
    CompletionBackend& backend_;
    ClientPolicy policy_;
    Clock& clock_;
    std::int64_t next_slot_ms_ = 0;
    bool any_request_ = false;

    std::int64_t wait_for_slot() {
        std::int64_t now = clock_.now_ms();
        if (any_request_ && now < next_slot_ms_) {
            clock_.sleep_ms(next_slot_ms_ - now);
            now = clock_.now_ms();
        }
        any_request_ = true;
        next_slot_ms_ = now + policy_.rate_limit_ms;
        return now;
    }

    static ChatResponse parse_reply(const ChatRequest& req, const std::string& body) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponseError(std::string("response is not JSON: ") + e.what());
        }
        if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty())
            throw MalformedResponseError("response has no choices");
        const auto& first = doc["choices"][0];
        if (!first.contains("message") || !first["message"].contains("content") ||
            !first["message"]["content"].is_string())
            throw MalformedResponseError("response choice has no message content");

        ChatResponse response;
        response.content = first["message"]["content"].get<std::string>();
        if (doc.contains("usage") && doc["usage"].is_object()) {
            const auto& usage = doc["usage"];
            response.usage.prompt_tokens = usage.value("prompt_tokens", std::int64_t(0));
            response.usage.completion_tokens = usage.value("completion_tokens", std::int64_t(0));
            response.usage.total_tokens =
                usage.value("total_tokens",
                            response.usage.prompt_tokens + response.usage.completion_tokens);
        } else {
            response.usage.prompt_tokens =
                estimate_tokens(req.system_text) + estimate_tokens(req.user_text);
            response.usage.completion_tokens = estimate_tokens(response.content);
            response.usage.total_tokens =
                response.usage.prompt_tokens + response.usage.completion_tokens;
            response.usage_estimated = true;
        }
        return response;
    }
};

} // namespace mutforge
