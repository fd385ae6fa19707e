#include "hlsdiff/llm.hpp"

#include <cstdlib>
#include <optional>

#include "hlsdiff/embed.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hlsdiff {

std::string prompt_hash(const std::string& prompt) {
    uint64_t h = fnv1a64(prompt);
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

std::optional<std::string> extract_fenced_block(const std::string& text) {
    size_t open = std::string::npos;
    size_t pos = 0;
    std::optional<std::string> last;
    while ((pos = text.find("```", pos)) != std::string::npos) {
        if (open == std::string::npos) {
            open = pos + 3;
            // skip an info string like ```minic
            size_t nl = text.find('\n', open);
            if (nl != std::string::npos) open = nl + 1;
            pos += 3;
        } else {
            last = text.substr(open, pos - open);
            open = std::string::npos;
            pos += 3;
        }
    }
    return last;
}

RemoteClient::RemoteClient(std::string base_url, std::string model, std::string key)
    : base_url_(std::move(base_url)), model_(std::move(model)), key_(std::move(key)) {}

std::unique_ptr<RemoteClient> RemoteClient::from_env() {
    const char* url = std::getenv("HLSDIFF_LLM_URL");
    if (!url || !*url)
        throw ClientError{"HLSDIFF_LLM_URL is not set; remote client unavailable"};
    const char* model = std::getenv("HLSDIFF_LLM_MODEL");
    const char* key = std::getenv("HLSDIFF_LLM_KEY");
    return std::make_unique<RemoteClient>(url, model ? model : "",
                                          key ? key : "");
}

std::string RemoteClient::complete(const std::string& prompt, const LLMParams& params) {
    std::string base = base_url_;
    std::string path = "/v1/chat/completions";
    size_t scheme = base.find("://");
    size_t slash = scheme == std::string::npos ? base.find('/')
                                               : base.find('/', scheme + 3);
    if (slash != std::string::npos) {
        path = base.substr(slash);
        base = base.substr(0, slash);
    }

    nlohmann::json body = {
        {"model", params.model.empty() ? model_ : params.model},
        {"temperature", params.temperature},
        {"messages", {{{"role", "user"}, {"content", prompt}}}},
    };

    httplib::Client cli(base);
    cli.set_connection_timeout(30);
    cli.set_read_timeout(120);
    httplib::Headers headers;
    if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);

    auto res = cli.Post(path, headers, body.dump(), "application/json");
    if (!res)
        throw ClientError{"remote LLM request failed: " +
                          httplib::to_string(res.error())};
    if (res->status != 200)
        throw ClientError{"remote LLM returned status " +
                          std::to_string(res->status) + ": " + res->body};
    try {
        auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ClientError{std::string("remote LLM response unparsable: ") + e.what()};
    }
}

}  // namespace hlsdiff
