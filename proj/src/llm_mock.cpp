#include <fstream>
#include <optional>
#include <sstream>

#include "hlsdiff/llm.hpp"

namespace hlsdiff {

DirectoryMockClient::DirectoryMockClient(std::string dir, std::string fallback)
    : dir_(std::move(dir)), fallback_(std::move(fallback)) {}

std::string DirectoryMockClient::complete(const std::string& prompt,
                                          const LLMParams&) {
    std::ifstream in(dir_ + "/" + prompt_hash(prompt) + ".txt");
    if (!in) return fallback_;
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string EchoMockClient::complete(const std::string& prompt, const LLMParams&) {
    return prompt;
}

std::string FailingClient::complete(const std::string&, const LLMParams&) {
    throw ClientError{"simulated remote failure"};
}

namespace {

// text between a header line and the next known header (trimmed)
std::string section_between(const std::string& text, const std::string& from,
                            const std::string& to) {
    size_t a = text.find(from);
    if (a == std::string::npos) return "";
    a += from.size();
    size_t b = to.empty() ? std::string::npos : text.find(to, a);
    std::string s = text.substr(a, b == std::string::npos ? b : b - a);
    size_t lo = s.find_first_not_of(" \t\r\n");
    if (lo == std::string::npos) return "";
    size_t hi = s.find_last_not_of(" \t\r\n");
    return s.substr(lo, hi - lo + 1);
}

}  // namespace

std::string RuleApplyingMockClient::complete(const std::string& prompt,
                                             const LLMParams&) {
    auto source = extract_fenced_block(prompt);
    if (!source) return "";
    std::string before = section_between(prompt, "Example before:", "Example after:");
    std::string after = section_between(prompt, "Example after:", "Current harness:");
    std::string body = *source;
    if (!before.empty()) {
        size_t at = body.find(before);
        if (at != std::string::npos) body.replace(at, before.size(), after);
    }
    if (!body.empty() && body.back() != '\n') body += "\n";
    return "```\n" + body + "```\n";
}

}  // namespace hlsdiff
