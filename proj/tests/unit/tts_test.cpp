#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hypecast/mock_tts.hpp"
#include "hypecast/pipeline.hpp"
#include "hypecast/trace_gen.hpp"
#include "hypecast/tts_client.hpp"

using namespace hypecast;

namespace {

CommentaryDirective directive_with(double pitch, double volume, const std::string& text) {
    CommentaryDirective d;
    d.frame_index = 1;
    d.round_index = 0;
    d.round_time_s = 0.5;
    d.text = text;
    d.phonetics = {pitch, volume};
    d.highlight = 0.5;
    d.design = Design::D1;
    return d;
}

}  // namespace

TEST_SUITE("tts") {

TEST_CASE("audio params print as trimmed fixed-point decimals") {
    CHECK(format_audio_param(0.0) == "0.0");
    CHECK(format_audio_param(-0.0) == "0.0");
    CHECK(format_audio_param(-0.00001) == "0.0");
    CHECK(format_audio_param(1.5) == "1.5");
    CHECK(format_audio_param(2.0) == "2.0");
    CHECK(format_audio_param(6.47734) == "6.4773");
    CHECK(format_audio_param(-1.30134) == "-1.3013");
    CHECK(format_audio_param(14.0) == "14.0");
    CHECK(format_audio_param(1.23456789) == "1.2346");
    CHECK(format_audio_param(-6.0) == "-6.0");
    CHECK(format_audio_param(0.25) == "0.25");
}

TEST_CASE("request bodies are canonical bytes") {
    auto d = directive_with(0.0, 0.0, "Hello!");
    CHECK(build_request(d) ==
          R"({"input":{"text":"Hello!"},"voice":{"languageCode":"en-US",)"
          R"("name":"en-US-Wavenet-D"},"audioConfig":{"audioEncoding":"MP3",)"
          R"("pitch":0.0,"volumeGainDb":0.0}})");
    // identical inputs, identical bytes
    CHECK(build_request(d) == build_request(d));

    VoiceConfig wav;
    wav.encoding = AudioEncoding::LINEAR16;
    CHECK(build_request(d, wav).find("\"audioEncoding\":\"LINEAR16\"") != std::string::npos);
}

TEST_CASE("a baseline directive posts default pitch and volume") {
    PipelineConfig cfg;
    auto body = build_request(directive_with(
        adjust(0.77, Design::D1, cfg.pitch_range, cfg.volume.map).pitch,
        adjust(0.77, Design::D1, cfg.pitch_range, cfg.volume.map).volume_gain_db, "Steady."));
    CHECK(body.find("\"pitch\":0.0") != std::string::npos);
    CHECK(body.find("\"volumeGainDb\":0.0") != std::string::npos);
}

TEST_CASE("a high-value pitch directive serializes near the reference value") {
    PipelineConfig cfg;
    auto params = adjust(0.6239, Design::D4, cfg.pitch_range, cfg.volume.map);
    auto body = build_request(directive_with(params.pitch, params.volume_gain_db, "Big!"));
    auto j = nlohmann::json::parse(body);
    CHECK(std::fabs(j["audioConfig"]["pitch"].get<double>() - 6.4772) < 5e-3);
}

TEST_CASE("bodies contain exactly the synthesize leaf fields") {
    auto body = build_request(directive_with(3.25, -1.5, "Check the shape"));
    auto j = nlohmann::json::parse(body);
    REQUIRE(j.is_object());
    CHECK(j.size() == 3);
    CHECK(j["input"].size() == 1);
    CHECK(j["input"]["text"].is_string());
    CHECK(j["voice"].size() == 2);
    CHECK(j["voice"]["languageCode"] == "en-US");
    CHECK(j["voice"]["name"] == "en-US-Wavenet-D");
    CHECK(j["audioConfig"].size() == 3);
    CHECK(j["audioConfig"]["audioEncoding"] == "MP3");
    CHECK(j["audioConfig"]["pitch"].is_number());
    CHECK(j["audioConfig"]["volumeGainDb"].is_number());
}

TEST_CASE("tricky text survives serialization") {
    std::string text = "He said \"GG\"\nnew line\tand a backslash \\ plus caf\xC3\xA9";
    auto body = build_request(directive_with(1.0, 1.0, text));
    auto j = nlohmann::json::parse(body);
    CHECK(j["input"]["text"].get<std::string>() == text);
}

TEST_CASE("outgoing numbers respect the clamp ranges") {
    auto body = build_request(directive_with(99.0, -99.0, "clamp me"));
    auto j = nlohmann::json::parse(body);
    CHECK(j["audioConfig"]["pitch"].get<double>() == doctest::Approx(14.0));
    CHECK(j["audioConfig"]["volumeGainDb"].get<double>() == doctest::Approx(-6.0));

    ClampRanges tight{-1.0, 1.0, -0.5, 0.5};
    auto j2 = nlohmann::json::parse(build_request(directive_with(99.0, -99.0, "x"), {}, tight));
    CHECK(j2["audioConfig"]["pitch"].get<double>() == doctest::Approx(1.0));
    CHECK(j2["audioConfig"]["volumeGainDb"].get<double>() == doctest::Approx(-0.5));

    PipelineConfig cfg;
    auto derived = ClampRanges::from(cfg.pitch_range, cfg.volume);
    CHECK(derived.pitch_min == doctest::Approx(-6.0));
    CHECK(derived.pitch_max == doctest::Approx(14.0));
    CHECK(derived.volume_min == doctest::Approx(-6.0));
    CHECK(derived.volume_max == doctest::Approx(6.0));
}

TEST_CASE("base64 round-trips and rejects junk") {
    std::mt19937_64 rng(5);
    for (int len = 0; len < 40; ++len) {
        std::vector<unsigned char> blob;
        for (int i = 0; i < len; ++i) blob.push_back(static_cast<unsigned char>(rng() % 256));
        CHECK(base64_decode(base64_encode(blob)) == blob);
    }
    CHECK(base64_encode(std::vector<unsigned char>{'h', 'i'}) == "aGk=");
    CHECK_THROWS_AS(base64_decode("abc"), TtsError);       // bad length
    CHECK_THROWS_AS(base64_decode("a$=="), TtsError);      // bad character
    CHECK_THROWS_AS(base64_decode("=abc"), TtsError);      // misplaced padding
    CHECK_THROWS_AS(base64_decode("ab=c"), TtsError);      // data after padding
}

TEST_CASE("the mock round-trips audio and records bodies verbatim") {
    MockTtsServer mock;
    TtsClient client(mock.endpoint());

    auto d = directive_with(2.0, 1.0, "Round trip!");
    auto body = build_request(d);
    auto result = client.synthesize(body, AudioEncoding::MP3);
    CHECK(result.audio_bytes == MockTtsServer::canned_audio());
    CHECK(result.content_type == "audio/mpeg");
    CHECK(result.request_latency_ms >= 0);

    auto wav = client.synthesize(body, AudioEncoding::LINEAR16);
    CHECK(wav.content_type == "audio/wav");

    auto bodies = mock.request_bodies();
    REQUIRE(bodies.size() == 2);
    CHECK(bodies[0] == body);
    CHECK(bodies[1] == body);
}

TEST_CASE("server failures classify as transport, decode, or timeout") {
    MockTtsServer mock;
    TtsClient client(mock.endpoint(), "", std::chrono::milliseconds(400));
    auto body = build_request(directive_with(0.0, 0.0, "x"));

    SUBCASE("non-2xx status") {
        mock.set_behaviors({{500, 0, std::nullopt}});
        try {
            client.synthesize(body, AudioEncoding::MP3);
            FAIL("expected transport error");
        } catch (const TtsError& e) {
            CHECK(e.kind() == TtsError::Kind::Transport);
            CHECK(e.status() == 500);
        }
    }
    SUBCASE("malformed response body") {
        mock.set_behaviors({{200, 0, std::string("this is not json")}});
        CHECK_THROWS_AS(client.synthesize(body, AudioEncoding::MP3), TtsError);
        mock.set_behaviors({{200, 0, std::string(R"({"noAudio":true})")}});
        try {
            client.synthesize(body, AudioEncoding::MP3);
            FAIL("expected decode error");
        } catch (const TtsError& e) {
            CHECK(e.kind() == TtsError::Kind::Decode);
        }
        mock.set_behaviors({{200, 0, std::string(R"({"audioContent":"!!!!"})")}});
        CHECK_THROWS_AS(client.synthesize(body, AudioEncoding::MP3), TtsError);
        mock.set_behaviors({{200, 0, std::string(R"({"audioContent":""})")}});
        try {
            client.synthesize(body, AudioEncoding::MP3);
            FAIL("expected decode error for empty audio");
        } catch (const TtsError& e) {
            CHECK(e.kind() == TtsError::Kind::Decode);
        }
    }
    SUBCASE("latency past the deadline") {
        mock.set_behaviors({{200, 1200, std::nullopt}});
        try {
            client.synthesize(body, AudioEncoding::MP3);
            FAIL("expected timeout");
        } catch (const TtsError& e) {
            CHECK(e.kind() == TtsError::Kind::Timeout);
        }
    }
    SUBCASE("nothing listening") {
        TtsClient dead("http://127.0.0.1:1", "", std::chrono::milliseconds(400));
        try {
            dead.synthesize(body, AudioEncoding::MP3);
            FAIL("expected transport error");
        } catch (const TtsError& e) {
            CHECK((e.kind() == TtsError::Kind::Transport ||
                   e.kind() == TtsError::Kind::Timeout));
        }
    }
}

TEST_CASE("endpoint URLs split into base and route") {
    TtsClient bare("http://127.0.0.1:8080");
    CHECK(bare.path() == "/v1/text:synthesize");
    TtsClient custom("http://127.0.0.1:8080/api/tts");
    CHECK(custom.path() == "/api/tts");
    CHECK_THROWS_AS(TtsClient(""), ConfigError);
}

TEST_CASE("behavior scripts load from JSON") {
    std::ifstream in(HYPECAST_SOURCE_DIR "/tests/data/behaviors_sample.json");
    REQUIRE(in.good());
    auto script = load_behavior_script(in);
    REQUIRE(script.size() == 3);
    CHECK(script[0].status == 200);
    CHECK(script[1].status == 500);
    CHECK(script[2].latency_ms == 50);

    std::istringstream not_array(R"({"status":200})");
    CHECK_THROWS_AS(load_behavior_script(not_array), ConfigError);
    std::istringstream bad(R"(nope)");
    CHECK_THROWS_AS(load_behavior_script(bad), ConfigError);
}

TEST_CASE("a full script posts one conforming body per directive") {
    auto frames = generate_trace(60.0, 31);
    std::ostringstream buf;
    write_trace(buf, frames);
    std::istringstream in(buf.str());
    PipelineConfig cfg;
    cfg.design = Design::D2;
    auto lib = TemplateLibrary::builtin();
    auto script = run_pipeline(in, cfg, lib);
    REQUIRE(script.size() >= 5);

    MockTtsServer mock;
    TtsClient client(mock.endpoint());
    auto clamps = ClampRanges::from(cfg.pitch_range, cfg.volume);
    for (const auto& d : script) client.synthesize(build_request(d, {}, clamps), AudioEncoding::MP3);

    auto bodies = mock.request_bodies();
    REQUIRE(bodies.size() == script.size());
    for (const auto& body : bodies) {
        auto j = nlohmann::json::parse(body);
        CHECK(j.size() == 3);
        CHECK(j["input"]["text"].is_string());
        double pitch = j["audioConfig"]["pitch"].get<double>();
        double volume = j["audioConfig"]["volumeGainDb"].get<double>();
        CHECK(pitch >= clamps.pitch_min);
        CHECK(pitch <= clamps.pitch_max);
        CHECK(volume >= clamps.volume_min);
        CHECK(volume <= clamps.volume_max);
    }
}

TEST_CASE("dropped utterances never wedge the scheduler") {
    MockTtsServer mock;
    // every other request fails
    mock.set_behaviors({{500, 0, std::nullopt},
                        {200, 0, std::nullopt},
                        {503, 0, std::nullopt},
                        {200, 0, std::nullopt}});
    TtsClient client(mock.endpoint());

    PipelineConfig cfg;
    auto lib = TemplateLibrary::builtin();
    Scheduler scheduler(cfg, lib);
    auto frames = generate_trace(30.0, 12);

    int emitted = 0, delivered = 0;
    int current_round = -1;
    for (const auto& f : frames) {
        if (f.round_index != current_round) {
            current_round = f.round_index;
            scheduler.start_round({f.round_index, f.frame_index});
        }
        auto d = scheduler.tick(f);
        if (!d) continue;
        ++emitted;
        try {
            client.synthesize(build_request(*d), AudioEncoding::MP3);
            ++delivered;
        } catch (const TtsError&) {
            // dropped: report the slot free immediately
            scheduler.notify_playback_finished();
        }
    }
    CHECK(emitted >= 4);
    CHECK(delivered >= 1);
    CHECK(delivered < emitted);
    CHECK(mock.request_count() == static_cast<std::size_t>(emitted));
}

}  // TEST_SUITE
