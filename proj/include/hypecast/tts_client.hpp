#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hypecast/phonetics.hpp"
#include "hypecast/pipeline.hpp"

namespace hypecast {

enum class AudioEncoding { MP3, LINEAR16 };

const char* to_string(AudioEncoding e);
const char* content_type_for(AudioEncoding e);

struct VoiceConfig {
    std::string language_code = "en-US";
    std::string voice_name = "en-US-Wavenet-D";
    AudioEncoding encoding = AudioEncoding::MP3;
};

// Hard bounds applied to the outgoing audioConfig numbers, independent of
// how the directive's phonetics were produced.
struct ClampRanges {
    double pitch_min = -6.0;
    double pitch_max = 14.0;
    double volume_min = -6.0;
    double volume_max = 6.0;

    static ClampRanges from(const PhoneticRange& pitch, const VolumeConfig& volume);
};

// Fixed-point decimal with at most four fractional digits, trailing zeros
// trimmed down to one. Keeps request bodies byte-stable.
std::string format_audio_param(double value);

// Canonical synthesize body: fixed key order, no whitespace, numbers via
// format_audio_param. Same directive in, same bytes out.
std::string build_request(const CommentaryDirective& d, const VoiceConfig& voice = {},
                          const ClampRanges& clamps = {});

class TtsError : public std::runtime_error {
public:
    enum class Kind { Transport, Decode, Timeout };

    TtsError(Kind kind, int status, const std::string& what)
        : std::runtime_error(what), kind_(kind), status_(status) {}

    Kind kind() const noexcept { return kind_; }
    int status() const noexcept { return status_; }  // 0 when no HTTP status applies

private:
    Kind kind_;
    int status_;
};

struct SynthesisResult {
    std::vector<unsigned char> audio_bytes;
    std::string content_type;
    std::int64_t request_latency_ms = 0;
};

// Minimal blocking client for the synthesize route. One call, one in-flight
// request; failures surface as TtsError and the caller decides how to react.
class TtsClient {
public:
    explicit TtsClient(std::string endpoint, std::string auth_token = {},
                       std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

    SynthesisResult synthesize(const std::string& body, AudioEncoding encoding);

    const std::string& path() const { return path_; }

private:
    std::string base_url_;
    std::string path_;
    std::string auth_token_;
    std::chrono::milliseconds timeout_;
};

std::string base64_encode(const unsigned char* data, std::size_t len);
std::string base64_encode(const std::vector<unsigned char>& data);
std::vector<unsigned char> base64_decode(std::string_view text);  // throws TtsError(Decode)

}  // namespace hypecast
