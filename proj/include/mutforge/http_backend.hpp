#pragma once

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdint>
#include <string>
#include <utility>

#include "mutforge/errors.hpp"
#include "mutforge/llm.hpp"

namespace mutforge {

struct EndpointConfig {
    std::string url; // e.g. https://host[:port]/v1/chat/completions
    std::string api_key;
    std::string auth_header = "Authorization";
    std::int64_t read_timeout_ms = 120000;
};

// POSTs chat requests to a completions endpoint over HTTP(S).
class HttpBackend final : public CompletionBackend {
public:
    explicit HttpBackend(EndpointConfig config) : config_(std::move(config)) {
        auto scheme_end = config_.url.find("://");
        if (scheme_end == std::string::npos)
            throw Error("endpoint URL must include a scheme: " + config_.url);
        auto path_start = config_.url.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            base_ = config_.url;
            path_ = "/";
        } else {
            base_ = config_.url.substr(0, path_start);
            path_ = config_.url.substr(path_start);
        }
    }

    WireReply send(const ChatRequest& req) override {
        httplib::Client client(base_);
        client.set_read_timeout(std::chrono::milliseconds(config_.read_timeout_ms));
        client.set_connection_timeout(std::chrono::seconds(10));

        httplib::Headers headers;
        if (!config_.api_key.empty()) {
            std::string value = config_.auth_header == "Authorization"
                                    ? "Bearer " + config_.api_key
                                    : config_.api_key;
            headers.emplace(config_.auth_header, value);
        }

        auto result =
            client.Post(path_, headers, chat_request_body(req).dump(), "application/json");
        if (!result)
            return {0, "", "request failed: " + httplib::to_string(result.error())};
        return {result->status, result->body, ""};
    }

private:
    EndpointConfig config_;
    std::string base_;
    std::string path_;
};

} // namespace mutforge
