// SPDX-License-Identifier: Apache-2.0
#include <apktriage/error.hpp>
#include <apktriage/llm/provider.hpp>

#include <httplib.h>
#include <json.hpp>

#include <thread>

namespace apktriage::llm
{

using nlohmann::json;

void ScriptedProvider::set_policy(Tier tier, ScriptedPolicy policy)
{
    _policies[tier] = std::move(policy);
}

ChatReply ScriptedProvider::chat(const std::string& model_id, Tier tier, const std::vector<Message>& messages)
{
    auto const it = _policies.find(tier);
    if (it == _policies.end() || !it->second)
        throw Error(ErrorCode::Backend, "no scripted policy for tier " + std::string(to_string(tier)) + " (model "
                                            + model_id + ")");
    ChatReply reply;
    reply.text = it->second(messages);
    reply.usage = {count_tokens(messages), count_tokens(reply.text)};
    return reply;
}

std::string build_chat_request(const std::string& model_id, const std::vector<Message>& messages)
{
    json body;
    body["model"] = model_id;
    body["messages"] = json::array();
    for (const auto& m: messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    return body.dump();
}

ChatReply parse_chat_response(std::string_view body)
{
    auto const doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error(ErrorCode::Schema, "response is not a JSON object");
    try
    {
        ChatReply reply;
        reply.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        if (auto const u = doc.find("usage"); u != doc.end() && u->is_object())
        {
            reply.usage.input_tokens = u->value("prompt_tokens", std::int64_t{0});
            reply.usage.output_tokens = u->value("completion_tokens", std::int64_t{0});
        }
        if (reply.usage.input_tokens < 0 || reply.usage.output_tokens < 0)
            throw Error(ErrorCode::Schema, "negative usage counts");
        return reply;
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorCode::Schema, std::string("unexpected response shape: ") + e.what());
    }
}

HttpChatProvider::HttpChatProvider(HttpOptions options): _options(std::move(options))
{
    auto const& url = _options.base_url;
    auto const scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorCode::Config, "base URL needs a scheme: '" + url + "'");
    auto const path_start = url.find('/', scheme_end + 3);
    _scheme_host = url.substr(0, path_start);
    _path = path_start == std::string::npos ? std::string{} : url.substr(path_start);
    while (!_path.empty() && _path.back() == '/')
        _path.pop_back();
    _path += "/chat/completions";
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.starts_with("https://"))
        throw Error(ErrorCode::Config, "https endpoints need a TLS-enabled build");
#endif
}

ChatReply HttpChatProvider::chat(const std::string& model_id, Tier, const std::vector<Message>& messages)
{
    auto const body = build_chat_request(model_id, messages);
    httplib::Headers headers;
    if (!_options.api_key.empty())
        headers.emplace("Authorization", "Bearer " + _options.api_key);

    auto const seconds = [](std::chrono::milliseconds ms) { return static_cast<time_t>(ms.count() / 1000); };
    auto const micros = [](std::chrono::milliseconds ms) { return static_cast<time_t>((ms.count() % 1000) * 1000); };

    // Last failure; status is meaningful only for ErrorCode::Http.
    ErrorCode last_code = ErrorCode::Http;
    int last_status = 0;
    std::string last_message;
    auto const fail = [&](ErrorCode code, int status, std::string message)
    {
        last_code = code;
        last_status = status;
        last_message = std::move(message);
    };
    for (int attempt = 0; attempt <= std::max(0, _options.retries); ++attempt)
    {
        if (attempt > 0)
            std::this_thread::sleep_for(_options.backoff * attempt);

        httplib::Client client(_scheme_host);
        client.set_connection_timeout(seconds(_options.timeout), micros(_options.timeout));
        client.set_read_timeout(seconds(_options.timeout), micros(_options.timeout));
        client.set_write_timeout(seconds(_options.timeout), micros(_options.timeout));

        auto const started = std::chrono::steady_clock::now();
        auto const res = client.Post(_path, headers, body, "application/json");
        auto const elapsed = std::chrono::steady_clock::now() - started;
        if (!res)
        {
            auto const err = res.error();
            if (err == httplib::Error::ConnectionTimeout
                || (err == httplib::Error::Read && elapsed >= _options.timeout))
                fail(ErrorCode::Timeout, 0, _scheme_host + _path + " timed out");
            else
                fail(ErrorCode::Http, 0, _scheme_host + _path + ": " + httplib::to_string(err));
            continue;
        }
        if (res->status == 429 || res->status >= 500)
        {
            fail(ErrorCode::Http, res->status, _scheme_host + _path + " answered " + std::to_string(res->status));
            continue;
        }
        if (res->status < 200 || res->status >= 300)
            throw HttpError(res->status, _scheme_host + _path + " answered " + std::to_string(res->status));
        try
        {
            return parse_chat_response(res->body);
        }
        catch (const Error& e)
        {
            fail(e.code(), 0, e.detail());
        }
    }
    if (last_code == ErrorCode::Http)
        throw HttpError(last_status, last_message);
    throw Error(last_code, last_message);
}

} // namespace apktriage::llm
