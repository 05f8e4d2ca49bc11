#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hypecast {

// In-process synthesize endpoint for hermetic tests: records every request
// body verbatim and can replay scripted failure modes (status codes,
// injected latency, malformed payloads).
class MockTtsServer {
public:
    struct Behavior {
        int status = 200;
        int latency_ms = 0;
        std::optional<std::string> body;  // overrides the canned response
    };

    // Binds 127.0.0.1 on an ephemeral port (or the given one) and serves
    // until destruction.
    explicit MockTtsServer(int port = 0);
    ~MockTtsServer();

    MockTtsServer(const MockTtsServer&) = delete;
    MockTtsServer& operator=(const MockTtsServer&) = delete;

    int port() const;
    std::string endpoint() const;  // full URL of the synthesize route

    // Behaviors are consumed one per request, in order; afterwards every
    // request succeeds with the canned payload.
    void set_behaviors(std::vector<Behavior> script);

    std::vector<std::string> request_bodies() const;
    std::size_t request_count() const;

    static const std::vector<unsigned char>& canned_audio();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Behavior script file: JSON array of {"status":int,"latency_ms":int,"body":str?}.
std::vector<MockTtsServer::Behavior> load_behavior_script(std::istream& in);

}  // namespace hypecast
