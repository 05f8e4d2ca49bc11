#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypecast/game_model.hpp"
#include "hypecast/highlight.hpp"
#include "hypecast/mock_tts.hpp"
#include "hypecast/pipeline.hpp"
#include "hypecast/study_eval.hpp"
#include "hypecast/trace_gen.hpp"
#include "hypecast/tts_client.hpp"

namespace {

volatile std::sig_atomic_t g_interrupted = 0;

void on_signal(int) { g_interrupted = 1; }

const CLI::Validator ExistingFileOrDash(
    [](std::string& s) { return s == "-" ? std::string{} : CLI::ExistingFile(s); },
    "FILE|-");

// Tuning flags live on the root app so one --config file serves every
// subcommand that resolves phonetics; those subcommands enable fallthrough,
// so the flags may also be given after the subcommand name. The same names
// work as keys in the config file (flat key=value, e.g. pitch.min=-6).
void add_tuning_options(CLI::App& app, hypecast::PipelineConfig& cfg) {
    app.add_option("--pitch.min", cfg.pitch_range.min, "Lower pitch bound, semitones")
        ->capture_default_str();
    app.add_option("--pitch.max", cfg.pitch_range.max, "Upper pitch bound, semitones")
        ->capture_default_str();
    app.add_option("--pitch.default", cfg.pitch_range.default_value,
                   "Pitch used by designs that do not modulate it")
        ->capture_default_str();
    app.add_option("--volume.map_min", cfg.volume.map.min,
                   "Lower bound of the volume mapping range, dB")
        ->capture_default_str();
    app.add_option("--volume.map_max", cfg.volume.map.max,
                   "Upper bound of the volume mapping range, dB")
        ->capture_default_str();
    app.add_option("--volume.clamp_min", cfg.volume.clamp_min,
                   "Hard lower clamp on emitted volume gain, dB")
        ->capture_default_str();
    app.add_option("--volume.clamp_max", cfg.volume.clamp_max,
                   "Hard upper clamp on emitted volume gain, dB")
        ->capture_default_str();
    app.add_option("--volume.default", cfg.volume.map.default_value,
                   "Volume gain used by designs that do not modulate it")
        ->capture_default_str();
    app.set_config("--config", "", "Key=value file supplying tuning values; flags override it");
    // Keys like pitch.min are whole option names, not section paths; keep the
    // reader from splitting them on '.'.
    app.get_config_formatter_base()->parentSeparator('\x1f');
}

hypecast::TemplateLibrary load_templates(const std::string& path) {
    if (path.empty()) return hypecast::TemplateLibrary::builtin();
    std::ifstream in(path);
    if (!in) throw hypecast::ConfigError("cannot open templates file: " + path);
    return hypecast::TemplateLibrary::load_jsonl(in);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw hypecast::ConfigError("cannot open output file: " + path);
    return file;
}

std::istream& open_input(const std::string& path, std::ifstream& file) {
    if (path == "-") return std::cin;
    file.open(path, std::ios::binary);
    if (!file) throw hypecast::ConfigError("cannot open input file: " + path);
    return file;
}

void cmd_annotate(const std::string& log_path, const std::string& templates_path,
                  const std::string& out_path, hypecast::PipelineConfig cfg, int design) {
    cfg.design = hypecast::design_from_int(design);
    auto library = load_templates(templates_path);
    std::ifstream log_file;
    auto script = hypecast::run_pipeline(open_input(log_path, log_file), cfg, library);
    std::ofstream out_file;
    hypecast::write_script(open_output(out_path, out_file), script);
}

void cmd_cues(const std::string& log_path, const std::string& out_path,
              const hypecast::RoundConfig& round) {
    std::ifstream log_file;
    hypecast::FrameLogReader reader(open_input(log_path, log_file), round);
    std::ofstream out_file;
    std::ostream& out = open_output(out_path, out_file);

    auto table = hypecast::RankActTable::fighting_ice_defaults();
    hypecast::CueWeights weights;
    hypecast::RoundTracker tracker;
    while (auto item = reader.next()) {
        if (std::holds_alternative<hypecast::RoundStart>(*item)) {
            tracker.reset();
            continue;
        }
        const auto& frame = std::get<hypecast::FrameSnapshot>(*item);
        auto cues = hypecast::evaluate_frame(frame, round, table, weights, tracker);
        nlohmann::ordered_json j;
        j["frame"] = frame.frame_index;
        j["score"] = cues.score;
        j["action"] = cues.action;
        j["distance"] = cues.distance;
        j["highlight"] = cues.highlight;
        out << j.dump() << '\n';
    }
}

void cmd_gen_trace(double duration_s, std::uint64_t seed, const std::string& out_path) {
    auto frames = hypecast::generate_trace(duration_s, seed);
    std::ofstream out_file;
    hypecast::write_trace(open_output(out_path, out_file), frames);
}

void cmd_synthesize(const std::string& script_path, const std::string& endpoint,
                    const std::string& token, const std::string& audio_dir,
                    const std::string& encoding_name, int timeout_ms,
                    const hypecast::PipelineConfig& cfg) {
    hypecast::VoiceConfig voice;
    voice.encoding = encoding_name == "LINEAR16" ? hypecast::AudioEncoding::LINEAR16
                                                 : hypecast::AudioEncoding::MP3;
    auto clamps = hypecast::ClampRanges::from(cfg.pitch_range, cfg.volume);
    hypecast::TtsClient client(endpoint, token, std::chrono::milliseconds(timeout_ms));

    if (!audio_dir.empty()) std::filesystem::create_directories(audio_dir);

    std::ifstream in(script_path);
    if (!in) throw hypecast::ConfigError("cannot open script file: " + script_path);

    std::size_t index = 0, sent = 0, dropped = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto directive = hypecast::parse_directive(line);
        auto body = hypecast::build_request(directive, voice, clamps);
        try {
            auto result = client.synthesize(body, voice.encoding);
            if (!audio_dir.empty()) {
                const char* ext =
                    voice.encoding == hypecast::AudioEncoding::MP3 ? ".mp3" : ".wav";
                char name[32];
                std::snprintf(name, sizeof(name), "utt_%04zu%s", index, ext);
                std::ofstream audio(std::filesystem::path(audio_dir) / name,
                                    std::ios::binary);
                audio.write(reinterpret_cast<const char*>(result.audio_bytes.data()),
                            static_cast<std::streamsize>(result.audio_bytes.size()));
            }
            ++sent;
        } catch (const hypecast::TtsError& e) {
            // Dropped utterances are not fatal; the schedule simply moves on.
            std::cerr << "warning: utterance " << index << " dropped: " << e.what() << '\n';
            ++dropped;
        }
        ++index;
    }
    std::cout << "synthesized " << sent << '/' << index << " utterances";
    if (dropped > 0) std::cout << " (" << dropped << " dropped)";
    std::cout << '\n';
}

void cmd_serve_mock_tts(int port, const std::string& behavior_path) {
    hypecast::MockTtsServer server(port);
    if (!behavior_path.empty()) {
        std::ifstream in(behavior_path);
        if (!in) throw hypecast::ConfigError("cannot open behavior script: " + behavior_path);
        server.set_behaviors(hypecast::load_behavior_script(in));
    }
    std::cout << "mock TTS listening on " << server.endpoint() << std::endl;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

void cmd_study_eval(const std::vector<int>& counts, int n) {
    if (n < 0) n = std::accumulate(counts.begin(), counts.end(), 0);
    auto prefs = hypecast::PreferenceCounts::make(counts, n);
    auto gof = hypecast::chi_square_gof(prefs);
    auto residuals = hypecast::standardized_residuals(prefs);

    std::printf("chi2 = %.6f\n", gof.chi2);
    std::printf("df = %d\n", gof.df);
    std::printf("p = %.6f\n", gof.p);
    std::printf("residuals = [");
    for (std::size_t i = 0; i < residuals.size(); ++i)
        std::printf("%s%.6f", i == 0 ? "" : ", ", residuals[i]);
    std::printf("]\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypecast: live fighting-game commentary from telemetry logs"};
    app.require_subcommand(1);

    hypecast::PipelineConfig tuning;
    add_tuning_options(app, tuning);

    std::string log_path, templates_path, out_path = "-";
    int design = 2;
    std::uint64_t seed = 0;
    auto* annotate = app.add_subcommand(
        "annotate", "Turn a frame log into a commentary script (JSONL of directives)");
    annotate->fallthrough();
    annotate->add_option("--log", log_path, "Frame log path; '-' reads standard input")
        ->required()
        ->check(ExistingFileOrDash);
    annotate->add_option("--design", design, "Phonetic design, 1 through 5")
        ->check(CLI::Range(1, 5))
        ->capture_default_str();
    annotate->add_option("--seed", seed, "Seed for template selection")->capture_default_str();
    annotate->add_option("--templates", templates_path,
                         "Template library JSONL (defaults to the built-in set)")
        ->check(CLI::ExistingFile);
    annotate->add_option("--out", out_path, "Script output path; '-' writes standard output")
        ->capture_default_str();
    annotate->callback([&] { cmd_annotate(log_path, templates_path, out_path, tuning, design); });

    hypecast::RoundConfig cues_round;
    std::string cues_log, cues_out = "-";
    auto* cues = app.add_subcommand("cues", "Emit per-frame cue values (JSONL)");
    cues->add_option("--log", cues_log, "Frame log path; '-' reads standard input")
        ->required()
        ->check(ExistingFileOrDash);
    cues->add_option("--out", cues_out, "Output path; '-' writes standard output")
        ->capture_default_str();
    cues->callback([&] { cmd_cues(cues_log, cues_out, cues_round); });

    double duration_s = 60.0;
    std::uint64_t trace_seed = 0;
    std::string trace_out = "-";
    auto* gen = app.add_subcommand("gen-trace", "Generate a synthetic frame log");
    gen->add_option("--duration", duration_s, "Total seconds of play to simulate")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    gen->add_option("--seed", trace_seed, "Simulation seed")->capture_default_str();
    gen->add_option("--out", trace_out, "Log output path; '-' writes standard output")
        ->capture_default_str();
    gen->callback([&] { cmd_gen_trace(duration_s, trace_seed, trace_out); });

    std::string script_path, endpoint, token, audio_dir, encoding = "MP3";
    int timeout_ms = 5000;
    auto* synth = app.add_subcommand(
        "synthesize", "POST a commentary script to a text-to-speech endpoint");
    synth->fallthrough();
    synth->add_option("--script", script_path, "Commentary script JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    synth->add_option("--endpoint", endpoint, "Synthesize endpoint URL")
        ->envname("TTS_ENDPOINT")
        ->required();
    synth->add_option("--auth-token", token, "Bearer token, if the endpoint needs one")
        ->envname("TTS_AUTH_TOKEN");
    synth->add_option("--audio-dir", audio_dir, "Directory to write returned audio files into");
    synth->add_option("--encoding", encoding, "Audio encoding")
        ->check(CLI::IsMember({"MP3", "LINEAR16"}))
        ->capture_default_str();
    synth->add_option("--timeout-ms", timeout_ms, "Per-request timeout")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->callback([&] {
        cmd_synthesize(script_path, endpoint, token, audio_dir, encoding, timeout_ms, tuning);
    });

    int port = 0;
    std::string behavior_path;
    auto* mock = app.add_subcommand("serve-mock-tts",
                                    "Run the mock synthesize server until interrupted");
    mock->add_option("--port", port, "Port to bind on 127.0.0.1; 0 picks a free one")
        ->check(CLI::Range(0, 65535))
        ->capture_default_str();
    mock->add_option("--behavior", behavior_path,
                     "JSON array of per-request behaviors (status, latency_ms, body)")
        ->check(CLI::ExistingFile);
    mock->callback([&] { cmd_serve_mock_tts(port, behavior_path); });

    std::vector<int> counts;
    int n = -1;
    auto* study = app.add_subcommand("study-eval",
                                     "Chi-square goodness of fit over preference counts");
    study->add_option("--counts", counts, "Comma-separated votes per design")
        ->required()
        ->delimiter(',');
    study->add_option("--n", n, "Total respondents (defaults to the sum of counts)");
    study->callback([&] { cmd_study_eval(counts, n); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const hypecast::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
