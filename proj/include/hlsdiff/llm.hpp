#pragma once

#include <memory>
#include <optional>
#include <string>

namespace hlsdiff {

struct ClientError {
    std::string message;
};

struct LLMParams {
    double temperature = 0.2;
    std::string model;  // empty = client default
};

class LLMClient {
public:
    virtual ~LLMClient() = default;
    virtual std::string complete(const std::string& prompt,
                                 const LLMParams& params = {}) = 0;
    virtual std::string name() const = 0;
};

// stable key for canned mock responses (hex, 16 digits)
std::string prompt_hash(const std::string& prompt);

// last ```-fenced block in a response, without the fences; nullopt when none
std::optional<std::string> extract_fenced_block(const std::string& text);

// Serves canned responses from a directory keyed by prompt hash
// (<hash>.txt). Total: prompts without a canned file get the fallback text.
class DirectoryMockClient : public LLMClient {
public:
    explicit DirectoryMockClient(std::string dir, std::string fallback = "");
    std::string complete(const std::string& prompt, const LLMParams& params) override;
    std::string name() const override { return "mock:" + dir_; }

private:
    std::string dir_;
    std::string fallback_;
};

// Returns the prompt verbatim; a stand-in for chain plumbing tests.
class EchoMockClient : public LLMClient {
public:
    std::string complete(const std::string& prompt, const LLMParams& params) override;
    std::string name() const override { return "mock:echo"; }
};

// Always throws ClientError; exercises remote-failure fallbacks.
class FailingClient : public LLMClient {
public:
    std::string complete(const std::string& prompt, const LLMParams& params) override;
    std::string name() const override { return "mock:failing"; }
};

// Emulates a competent repair assistant: reads the before/after example and
// the current harness out of the repair prompt, applies the rewrite
// textually, and answers with the revised harness in a fenced block.
class RuleApplyingMockClient : public LLMClient {
public:
    std::string complete(const std::string& prompt, const LLMParams& params) override;
    std::string name() const override { return "mock:rule-applying"; }
};

// Chat-completions endpoint configured by HLSDIFF_LLM_URL, HLSDIFF_LLM_MODEL
// and HLSDIFF_LLM_KEY. All transport or protocol failures raise ClientError;
// no text is ever fabricated locally.
class RemoteClient : public LLMClient {
public:
    RemoteClient(std::string base_url, std::string model, std::string key);
    static std::unique_ptr<RemoteClient> from_env();  // throws ClientError
    std::string complete(const std::string& prompt, const LLMParams& params) override;
    std::string name() const override { return "remote:" + model_; }

private:
    std::string base_url_;
    std::string model_;
    std::string key_;
};

}  // namespace hlsdiff
