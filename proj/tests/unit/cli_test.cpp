#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypecast/mock_tts.hpp"
#include "hypecast/pipeline.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <sys/wait.h>
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "hypecast_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::path out = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
    fs::path err = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    std::string cmd = std::string("\"") + HYPECAST_CLI_PATH + "\" " + args + " > \"" +
                      out.string() + "\" 2> \"" + err.string() + "\"";
    int status = std::system(cmd.c_str());
    RunResult r;
#if defined(__unix__) || defined(__APPLE__)
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
    r.exit_code = status;
#endif
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help documents every advertised flag and exits cleanly") {
    std::string all;
    for (const char* sub :
         {"", "annotate", "cues", "gen-trace", "synthesize", "serve-mock-tts", "study-eval"}) {
        auto r = run_cli(std::string(sub) + " --help");
        CHECK(r.exit_code == 0);
        all += r.out;
    }
    for (const char* flag :
         {"--log", "--design", "--seed", "--out", "--templates", "--config", "--pitch.min",
          "--pitch.max", "--pitch.default", "--volume.map_min", "--volume.map_max",
          "--volume.clamp_min", "--volume.clamp_max", "--volume.default", "--duration",
          "--script", "--endpoint", "--auth-token", "--audio-dir", "--port", "--behavior",
          "--counts", "--n"}) {
        CAPTURE(flag);
        CHECK(all.find(flag) != std::string::npos);
    }
}

TEST_CASE("a bare invocation is a usage error") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
}

TEST_CASE("gen-trace is deterministic and produces a parseable log") {
    auto log1 = scratch_dir() / "trace_a.jsonl";
    auto log2 = scratch_dir() / "trace_b.jsonl";
    CHECK(run_cli("gen-trace --duration 10 --seed 1 --out \"" + log1.string() + "\"").exit_code ==
          0);
    CHECK(run_cli("gen-trace --duration 10 --seed 1 --out \"" + log2.string() + "\"").exit_code ==
          0);
    auto text = slurp(log1);
    CHECK(text == slurp(log2));
    CHECK(count_lines(text) == 600);

    std::istringstream in(text);
    CHECK_NOTHROW(hypecast::read_frame_log(in, hypecast::RoundConfig{}));

    auto r = run_cli("gen-trace --duration 0 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("annotate writes a valid script and respects exit-code conventions") {
    auto log = scratch_dir() / "annotate_in.jsonl";
    REQUIRE(run_cli("gen-trace --duration 20 --seed 7 --out \"" + log.string() + "\"").exit_code ==
            0);

    auto script = scratch_dir() / "annotate_out.jsonl";
    auto r = run_cli("annotate --log \"" + log.string() + "\" --design 2 --seed 7 --out \"" +
                     script.string() + "\"");
    CHECK(r.exit_code == 0);
    auto text = slurp(script);
    REQUIRE(!text.empty());
    std::istringstream lines(text);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        auto d = hypecast::parse_directive(line);
        CHECK(d.design == hypecast::Design::D2);
        ++n;
    }
    CHECK(n >= 1);

    SUBCASE("missing log file") {
        auto miss = run_cli("annotate --log /no/such/file.jsonl");
        CHECK(miss.exit_code == 2);
        CHECK(!miss.err.empty());
    }
    SUBCASE("design out of range") {
        CHECK(run_cli("annotate --log \"" + log.string() + "\" --design 6").exit_code == 2);
        CHECK(run_cli("annotate --log \"" + log.string() + "\" --design 0").exit_code == 2);
    }
    SUBCASE("corrupt log is a runtime failure") {
        auto bad = scratch_dir() / "bad.jsonl";
        std::ofstream(bad) << "{\"frame\":0,\"round\":0\n";
        auto res = run_cli("annotate --log \"" + bad.string() + "\"");
        CHECK(res.exit_code == 1);
        CHECK(!res.err.empty());
    }
    SUBCASE("custom template file") {
        auto tpl = scratch_dir() / "tpl.jsonl";
        std::ofstream(tpl) << R"({"id":1,"pattern":"Something stirs.","tags":["Neutral"],)"
                           << R"("band":[0.0,1.0]})" << "\n"
                           << R"({"id":2,"pattern":"Contact!","tags":["AttackStarted",)"
                           << R"("RankedAttackStarted","HitLanded","BigHpDrop","RoundNearEnd",)"
                           << R"("CloseQuarters"],"band":[0.0,1.0]})" << "\n";
        auto res = run_cli("annotate --log \"" + log.string() + "\" --templates \"" +
                           tpl.string() + "\"");
        CHECK(res.exit_code == 0);
        bool used_custom = res.out.find("Something stirs.") != std::string::npos ||
                           res.out.find("Contact!") != std::string::npos;
        CHECK(used_custom);
    }
}

TEST_CASE("config files feed tuning values and flags override them") {
    auto log = scratch_dir() / "cfg_in.jsonl";
    REQUIRE(run_cli("gen-trace --duration 20 --seed 3 --out \"" + log.string() + "\"").exit_code ==
            0);
    auto cfg = scratch_dir() / "tuning.cfg";
    std::ofstream(cfg) << "pitch.min=0\npitch.max=14\n";

    auto with_cfg = run_cli("annotate --log \"" + log.string() + "\" --design 4 --config \"" +
                            cfg.string() + "\"");
    REQUIRE(with_cfg.exit_code == 0);
    std::istringstream lines(with_cfg.out);
    std::string line;
    bool any = false;
    while (std::getline(lines, line)) {
        auto d = hypecast::parse_directive(line);
        CHECK(d.phonetics.pitch >= 0.0);  // floor raised by the config file
        any = true;
    }
    CHECK(any);

    auto overridden = run_cli("annotate --log \"" + log.string() +
                              "\" --design 4 --pitch.min -6 --config \"" + cfg.string() + "\"");
    REQUIRE(overridden.exit_code == 0);
    bool saw_negative = false;
    std::istringstream lines2(overridden.out);
    while (std::getline(lines2, line))
        saw_negative = saw_negative || hypecast::parse_directive(line).phonetics.pitch < 0.0;
    CHECK(saw_negative);

    // nonsense range is rejected as configuration, not a crash
    CHECK(run_cli("annotate --log \"" + log.string() + "\" --pitch.min 20").exit_code == 2);
}

TEST_CASE("cues emits one record per frame with the cue fields") {
    auto log = scratch_dir() / "cues_in.jsonl";
    REQUIRE(run_cli("gen-trace --duration 5 --seed 2 --out \"" + log.string() + "\"").exit_code ==
            0);
    auto r = run_cli("cues --log \"" + log.string() + "\"");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 300);
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line);
        for (const char* key : {"frame", "score", "action", "distance", "highlight"})
            CHECK(j.contains(key));
        CHECK(j["highlight"].get<double>() >= 0.0);
        CHECK(j["highlight"].get<double>() <= 1.0);
    }
}

TEST_CASE("study-eval prints the goodness-of-fit summary") {
    auto r = run_cli("study-eval --counts 13,1,5,10,10 --n 39");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("chi2 = 11.641026") != std::string::npos);
    CHECK(r.out.find("df = 4") != std::string::npos);
    CHECK(r.out.find("p = 0.020230") != std::string::npos);
    CHECK(r.out.find("residuals = [1.861899") != std::string::npos);

    CHECK(run_cli("study-eval --counts 1,2,3 --n 99").exit_code == 2);
    CHECK(run_cli("study-eval").exit_code == 2);
}

TEST_CASE("synthesize posts every directive and saves the audio") {
    auto log = scratch_dir() / "synth_in.jsonl";
    REQUIRE(run_cli("gen-trace --duration 20 --seed 4 --out \"" + log.string() + "\"").exit_code ==
            0);
    auto script = scratch_dir() / "synth_script.jsonl";
    REQUIRE(run_cli("annotate --log \"" + log.string() + "\" --out \"" + script.string() + "\"")
                .exit_code == 0);
    int directives = count_lines(slurp(script));
    REQUIRE(directives >= 1);

    hypecast::MockTtsServer mock;
    auto audio_dir = scratch_dir() / "audio";

    SUBCASE("endpoint from the flag") {
        auto r = run_cli("synthesize --script \"" + script.string() + "\" --endpoint \"" +
                         mock.endpoint() + "\" --audio-dir \"" + audio_dir.string() + "\"");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("synthesized") != std::string::npos);
        CHECK(mock.request_count() == static_cast<std::size_t>(directives));
        int files = 0;
        for (const auto& entry : fs::directory_iterator(audio_dir)) {
            CHECK(entry.path().extension() == ".mp3");
            CHECK(fs::file_size(entry.path()) > 0);
            ++files;
        }
        CHECK(files == directives);
    }
    SUBCASE("endpoint from the environment") {
        setenv("TTS_ENDPOINT", mock.endpoint().c_str(), 1);
        auto r = run_cli("synthesize --script \"" + script.string() + "\"");
        unsetenv("TTS_ENDPOINT");
        CHECK(r.exit_code == 0);
        CHECK(mock.request_count() == static_cast<std::size_t>(directives));
    }
    SUBCASE("failures drop utterances without failing the run") {
        std::vector<hypecast::MockTtsServer::Behavior> everything_burns(
            static_cast<std::size_t>(directives), {500, 0, std::nullopt});
        mock.set_behaviors(everything_burns);
        auto r = run_cli("synthesize --script \"" + script.string() + "\" --endpoint \"" +
                         mock.endpoint() + "\"");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("dropped") != std::string::npos);
        CHECK(r.err.find("warning") != std::string::npos);
    }
    SUBCASE("missing script is a usage error") {
        CHECK(run_cli("synthesize --script /no/such.jsonl --endpoint \"" + mock.endpoint() +
                      "\"")
                  .exit_code == 2);
    }
}

TEST_CASE("the mock server subcommand announces its endpoint") {
    fs::path out = scratch_dir() / "serve_out.txt";
    std::string cmd = std::string("timeout -s TERM 2 \"") + HYPECAST_CLI_PATH +
                      "\" serve-mock-tts --port 0 > \"" + out.string() + "\" 2>&1";
    [[maybe_unused]] int status = std::system(cmd.c_str());
    CHECK(slurp(out).find("mock TTS listening on http://127.0.0.1:") != std::string::npos);
}

}  // TEST_SUITE
