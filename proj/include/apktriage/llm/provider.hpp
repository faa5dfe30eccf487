// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <apktriage/llm/exchange.hpp>

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace apktriage::llm
{

struct ChatReply
{
    std::string text;
    Usage usage;
};

class ChatProvider
{
public:
    virtual ~ChatProvider() = default;
    virtual ChatReply chat(const std::string& model_id, Tier tier, const std::vector<Message>& messages) = 0;
};

/// Produces the assistant reply for a conversation.
using ScriptedPolicy = std::function<std::string(const std::vector<Message>&)>;

/// Offline provider: each tier answers through a deterministic policy and
/// usage comes from the reference tokenizer.
class ScriptedProvider : public ChatProvider
{
public:
    void set_policy(Tier tier, ScriptedPolicy policy);
    ChatReply chat(const std::string& model_id, Tier tier, const std::vector<Message>& messages) override;

private:
    std::map<Tier, ScriptedPolicy> _policies;
};

struct HttpOptions
{
    /// e.g. `https://api.example.com/v1`; requests go to `<base_url>/chat/completions`.
    std::string base_url;
    std::string api_key;
    int retries = 2;
    std::chrono::milliseconds backoff{250};
    std::chrono::milliseconds timeout{30000};
};

/// Chat-completions client. Transport failures, 429 and 5xx responses are
/// retried with linear backoff; other statuses fail at once.
///
/// Throws HttpError(status) (status 0 when no response arrived),
/// Error(Timeout), or Error(Schema) for a malformed response body.
class HttpChatProvider : public ChatProvider
{
public:
    explicit HttpChatProvider(HttpOptions options);
    ChatReply chat(const std::string& model_id, Tier tier, const std::vector<Message>& messages) override;

private:
    HttpOptions _options;
    std::string _scheme_host;
    std::string _path;
};

/// `{"model":..,"messages":[{"role":..,"content":..}]}`
std::string build_chat_request(const std::string& model_id, const std::vector<Message>& messages);
/// Reads `choices[0].message.content` and `usage.prompt_tokens/completion_tokens`.
/// Throws Error(Schema).
ChatReply parse_chat_response(std::string_view body);

} // namespace apktriage::llm
