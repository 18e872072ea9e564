#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "practiq/provider.hpp"
#include "practiq/strutil.hpp"

namespace practiq::provider {

using json = nlohmann::json;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

long env_long(const char* name, long fallback) {
  const char* v = std::getenv(name);
  if (!v) return fallback;
  char* end = nullptr;
  long parsed = std::strtol(v, &end, 10);
  return end && *end == '\0' ? parsed : fallback;
}

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // /v1/chat/completions
};

Endpoint split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(Errc::InvalidArgument, "endpoint must include scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return Endpoint{url, "/v1/chat/completions"};
  return Endpoint{url.substr(0, path_start), url.substr(path_start)};
}

/// Caps in-flight requests and enforces a requests-per-minute budget.
class RateGate {
 public:
  RateGate(int max_concurrent, int rpm) : max_concurrent_(max_concurrent), rpm_(rpm) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < max_concurrent_; });
    ++in_flight_;
    if (rpm_ > 0) {
      auto now = std::chrono::steady_clock::now();
      auto minute_ago = now - std::chrono::minutes(1);
      while (!stamps_.empty() && stamps_.front() < minute_ago) stamps_.pop_front();
      if (static_cast<int>(stamps_.size()) >= rpm_) {
        auto wake = stamps_.front() + std::chrono::minutes(1);
        lock.unlock();
        std::this_thread::sleep_until(wake);
        lock.lock();
      }
      stamps_.push_back(std::chrono::steady_clock::now());
    }
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      --in_flight_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int in_flight_ = 0;
  int max_concurrent_;
  int rpm_;
  std::deque<std::chrono::steady_clock::time_point> stamps_;
};

class LiveProvider final : public Provider {
 public:
  LiveProvider(std::string endpoint, std::string model, std::string key)
      : endpoint_(split_endpoint(endpoint)),
        model_(std::move(model)),
        key_(std::move(key)),
        gate_(static_cast<int>(env_long("PRACTIQ_LLM_MAX_CONCURRENCY", 4)),
              static_cast<int>(env_long("PRACTIQ_LLM_RPM", 0))) {}

  ProviderResponse complete(const ProviderRequest& req) override {
    json body;
    body["model"] = model_;
    json messages = json::array();
    if (!req.system_prompt.empty())
      messages.push_back({{"role", "system"}, {"content", req.system_prompt}});
    for (const auto& m : req.messages)
      messages.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = std::move(messages);
    body["temperature"] = req.decode.temperature;
    body["top_p"] = req.decode.top_p;
    body["max_tokens"] = req.decode.max_tokens;
    const std::string payload = body.dump();

    const int max_attempts = 5;
    std::chrono::milliseconds backoff(500);
    std::string last_error;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(backoff);
        backoff = std::min(backoff * 2, std::chrono::milliseconds(8000));
      }
      gate_.acquire();
      httplib::Client client(endpoint_.base);
      client.set_connection_timeout(10);
      client.set_read_timeout(300);
      httplib::Headers headers;
      if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);
      auto res = client.Post(endpoint_.path, headers, payload, "application/json");
      gate_.release();

      if (!res) {
        last_error = "connection failure (" + httplib::to_string(res.error()) + ")";
        continue;  // transient
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;  // transient
      }
      if (res->status >= 400)
        throw Error(Errc::ProviderRefusal,
                    "provider rejected request: HTTP " + std::to_string(res->status) + " " +
                        res->body);
      json parsed = json::parse(res->body, nullptr, false);
      if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty())
        throw Error(Errc::ProviderRefusal, "malformed completion payload: " + res->body);
      ProviderResponse out;
      out.text = parsed["choices"][0]["message"].value("content", std::string{});
      if (parsed.contains("usage")) {
        out.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
        out.completion_tokens = parsed["usage"].value("completion_tokens", 0);
      }
      out.provider_id = id();
      return out;
    }
    throw Error(Errc::RateLimited,
                "provider unavailable after " + std::to_string(max_attempts) +
                    " attempts: " + last_error);
  }

  std::string id() const override { return "live:" + model_; }

 private:
  Endpoint endpoint_;
  std::string model_;
  std::string key_;
  RateGate gate_;
};

}  // namespace

std::unique_ptr<Provider> make_live_provider_from_env() {
  std::string endpoint = env_or("PRACTIQ_LLM_ENDPOINT", "");
  if (endpoint.empty())
    throw Error(Errc::InvalidArgument,
                "live provider requires PRACTIQ_LLM_ENDPOINT (and optionally "
                "PRACTIQ_LLM_MODEL, PRACTIQ_LLM_KEY)");
  return std::make_unique<LiveProvider>(endpoint, env_or("PRACTIQ_LLM_MODEL", "default"),
                                        env_or("PRACTIQ_LLM_KEY", ""));
}

}  // namespace practiq::provider
