#include "hypecast/tts_client.hpp"

#include <algorithm>
#include <cstdio>

#include <httplib.h>
#include <json.hpp>

namespace hypecast {

const char* to_string(AudioEncoding e) {
    return e == AudioEncoding::MP3 ? "MP3" : "LINEAR16";
}

const char* content_type_for(AudioEncoding e) {
    return e == AudioEncoding::MP3 ? "audio/mpeg" : "audio/wav";
}

ClampRanges ClampRanges::from(const PhoneticRange& pitch, const VolumeConfig& volume) {
    return {pitch.min, pitch.max, volume.clamp_min, volume.clamp_max};
}

std::string format_audio_param(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    std::string s(buf);
    auto dot = s.find('.');
    auto last = s.find_last_not_of('0');
    s.erase(std::max(last, dot + 1) + 1);
    if (s == "-0.0") s = "0.0";
    return s;
}

std::string build_request(const CommentaryDirective& d, const VoiceConfig& voice,
                          const ClampRanges& clamps) {
    double pitch = std::clamp(d.phonetics.pitch, clamps.pitch_min, clamps.pitch_max);
    double volume = std::clamp(d.phonetics.volume_gain_db, clamps.volume_min, clamps.volume_max);
    std::string body = "{\"input\":{\"text\":";
    body += nlohmann::json(d.text).dump();
    body += "},\"voice\":{\"languageCode\":";
    body += nlohmann::json(voice.language_code).dump();
    body += ",\"name\":";
    body += nlohmann::json(voice.voice_name).dump();
    body += "},\"audioConfig\":{\"audioEncoding\":\"";
    body += to_string(voice.encoding);
    body += "\",\"pitch\":";
    body += format_audio_param(pitch);
    body += ",\"volumeGainDb\":";
    body += format_audio_param(volume);
    body += "}}";
    return body;
}

namespace {

constexpr char kDefaultPath[] = "/v1/text:synthesize";

constexpr char kBase64Chars[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int base64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

}  // namespace

std::string base64_encode(const unsigned char* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        unsigned int chunk = data[i] << 16;
        if (i + 1 < len) chunk |= data[i + 1] << 8;
        if (i + 2 < len) chunk |= data[i + 2];
        out += kBase64Chars[(chunk >> 18) & 0x3F];
        out += kBase64Chars[(chunk >> 12) & 0x3F];
        out += i + 1 < len ? kBase64Chars[(chunk >> 6) & 0x3F] : '=';
        out += i + 2 < len ? kBase64Chars[chunk & 0x3F] : '=';
    }
    return out;
}

std::string base64_encode(const std::vector<unsigned char>& data) {
    return base64_encode(data.data(), data.size());
}

std::vector<unsigned char> base64_decode(std::string_view text) {
    if (text.size() % 4 != 0)
        throw TtsError(TtsError::Kind::Decode, 0, "base64 payload length is not a multiple of 4");
    std::vector<unsigned char> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            char c = text[i + k];
            if (c == '=') {
                if (i + 4 != text.size() || k < 2)
                    throw TtsError(TtsError::Kind::Decode, 0, "misplaced base64 padding");
                vals[k] = 0;
                ++pad;
            } else {
                if (pad > 0)
                    throw TtsError(TtsError::Kind::Decode, 0, "base64 data after padding");
                vals[k] = base64_value(c);
                if (vals[k] < 0)
                    throw TtsError(TtsError::Kind::Decode, 0, "invalid base64 character");
            }
        }
        unsigned int chunk = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
        out.push_back(static_cast<unsigned char>((chunk >> 16) & 0xFF));
        if (pad < 2) out.push_back(static_cast<unsigned char>((chunk >> 8) & 0xFF));
        if (pad < 1) out.push_back(static_cast<unsigned char>(chunk & 0xFF));
    }
    return out;
}

TtsClient::TtsClient(std::string endpoint, std::string auth_token,
                     std::chrono::milliseconds timeout)
    : auth_token_(std::move(auth_token)), timeout_(timeout) {
    if (endpoint.empty()) throw ConfigError("TTS endpoint must not be empty");
    auto scheme_end = endpoint.find("://");
    auto path_start = endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        base_url_ = std::move(endpoint);
        path_ = kDefaultPath;
    } else {
        base_url_ = endpoint.substr(0, path_start);
        path_ = endpoint.substr(path_start);
    }
}

SynthesisResult TtsClient::synthesize(const std::string& body, AudioEncoding encoding) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    httplib::Headers headers;
    if (!auth_token_.empty()) headers.emplace("Authorization", "Bearer " + auth_token_);

    auto started = std::chrono::steady_clock::now();
    httplib::Result res = client.Post(path_, headers, body, "application/json");
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    if (!res) {
        auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
            throw TtsError(TtsError::Kind::Timeout, 0,
                           "synthesize timed out: " + httplib::to_string(err));
        throw TtsError(TtsError::Kind::Transport, 0,
                       "synthesize transport failure: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300)
        throw TtsError(TtsError::Kind::Transport, res->status,
                       "synthesize returned HTTP " + std::to_string(res->status));

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw TtsError(TtsError::Kind::Decode, res->status,
                       std::string("response is not JSON: ") + e.what());
    }
    auto it = j.find("audioContent");
    if (it == j.end() || !it->is_string())
        throw TtsError(TtsError::Kind::Decode, res->status,
                       "response lacks a string audioContent field");

    SynthesisResult result;
    result.audio_bytes = base64_decode(it->get<std::string>());
    if (result.audio_bytes.empty())
        throw TtsError(TtsError::Kind::Decode, res->status, "audioContent decoded to zero bytes");
    result.content_type = content_type_for(encoding);
    result.request_latency_ms = elapsed;
    return result;
}

}  // namespace hypecast
