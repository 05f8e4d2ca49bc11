#include "hypecast/mock_tts.hpp"

#include <istream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "hypecast/errors.hpp"
#include "hypecast/tts_client.hpp"

namespace hypecast {

namespace {

std::string canned_response_body() {
    return "{\"audioContent\":\"" + base64_encode(MockTtsServer::canned_audio()) + "\"}";
}

}  // namespace

const std::vector<unsigned char>& MockTtsServer::canned_audio() {
    static const std::vector<unsigned char> audio = [] {
        const char* text = "hypecast mock synthesized audio";
        return std::vector<unsigned char>(text, text + 31);
    }();
    return audio;
}

struct MockTtsServer::Impl {
    httplib::Server server;
    std::thread worker;
    int port = 0;

    mutable std::mutex mutex;
    std::vector<std::string> bodies;
    std::vector<Behavior> script;
    std::size_t next_behavior = 0;

    Behavior take_behavior() {
        std::lock_guard lock(mutex);
        if (next_behavior < script.size()) return script[next_behavior++];
        return {};
    }
};

MockTtsServer::MockTtsServer(int port) : impl_(std::make_unique<Impl>()) {
    Impl* impl = impl_.get();
    impl->server.Post("/v1/text:synthesize",
                      [impl](const httplib::Request& req, httplib::Response& res) {
                          {
                              std::lock_guard lock(impl->mutex);
                              impl->bodies.push_back(req.body);
                          }
                          Behavior b = impl->take_behavior();
                          if (b.latency_ms > 0)
                              std::this_thread::sleep_for(std::chrono::milliseconds(b.latency_ms));
                          res.status = b.status;
                          res.set_content(b.body ? *b.body : canned_response_body(),
                                          "application/json");
                      });

    if (port == 0) {
        impl->port = impl->server.bind_to_any_port("127.0.0.1");
        if (impl->port <= 0) throw std::runtime_error("mock TTS server failed to bind");
    } else {
        if (!impl->server.bind_to_port("127.0.0.1", port))
            throw std::runtime_error("mock TTS server failed to bind port " +
                                     std::to_string(port));
        impl->port = port;
    }
    impl->worker = std::thread([impl] { impl->server.listen_after_bind(); });
    impl->server.wait_until_ready();
}

MockTtsServer::~MockTtsServer() {
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

int MockTtsServer::port() const { return impl_->port; }

std::string MockTtsServer::endpoint() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1/text:synthesize";
}

void MockTtsServer::set_behaviors(std::vector<Behavior> script) {
    std::lock_guard lock(impl_->mutex);
    impl_->script = std::move(script);
    impl_->next_behavior = 0;
}

std::vector<std::string> MockTtsServer::request_bodies() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->bodies;
}

std::size_t MockTtsServer::request_count() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->bodies.size();
}

std::vector<MockTtsServer::Behavior> load_behavior_script(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("behavior script is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw ConfigError("behavior script must be a JSON array");
    std::vector<MockTtsServer::Behavior> script;
    for (const auto& entry : j) {
        if (!entry.is_object()) throw ConfigError("behavior entries must be objects");
        MockTtsServer::Behavior b;
        if (auto it = entry.find("status"); it != entry.end()) b.status = it->get<int>();
        if (auto it = entry.find("latency_ms"); it != entry.end()) b.latency_ms = it->get<int>();
        if (auto it = entry.find("body"); it != entry.end()) b.body = it->get<std::string>();
        script.push_back(std::move(b));
    }
    return script;
}

}  // namespace hypecast
