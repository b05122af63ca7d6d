#include "dyco/cli.hpp"

#include "dyco/config.hpp"
#include "dyco/http_backend.hpp"
#include "dyco/metrics.hpp"
#include "dyco/mock_backend.hpp"
#include "dyco/orchestration.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>

namespace fs = std::filesystem;

namespace dyco {

int exit_code_for(Errc code) noexcept {
    switch (code) {
    case Errc::protocol:
    case Errc::corruption:
    case Errc::malformed_caption:
    case Errc::lookup:
    case Errc::range:
    case Errc::overflow:
    case Errc::extraction_parse: return exit_failure;
    case Errc::exhaustion:
    case Errc::backend_fatal:
    case Errc::backend_retryable: return exit_backend;
    case Errc::serialization:
    case Errc::format:
    case Errc::parse:
    case Errc::ingestion:
    case Errc::unknown_word:
    case Errc::pool_underflow:
    case Errc::capacity:
    case Errc::framing:
    case Errc::template_error:
    case Errc::config:
    case Errc::domain:
    case Errc::shape:
    case Errc::io: return exit_usage;
    }
    return exit_failure;
}

namespace {

WordList split_words(const std::string& csv) {
    WordList out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        auto w = normalize_word(item);
        if (!w.empty()) out.push_back(w);
    }
    return out;
}

std::string join(const WordList& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) out += (i ? ", " : "") + words[i];
    return out;
}

BitString parse_message(const std::string& text, std::optional<std::size_t> bit_length) {
    if (bit_length) return hex_to_bits(text, *bit_length);
    if (text.empty() || text.find_first_not_of("01") != std::string::npos) {
        throw Error(Errc::format, "message must be a bit string, or hex together with --bit-length");
    }
    return BitString(text);
}

/// Owns whatever backends a command needs.
struct BackendSet {
    std::unique_ptr<ModelBackend> text;
    std::unique_ptr<ModelBackend> image;

    Backends refs() { return {image ? *image : *text, *text}; }
};

BackendSet make_backends(const SessionConfig& cfg, const std::optional<std::string>& mock_schedule,
                         const fs::path& image_dir) {
    BackendSet set;
    if (mock_schedule || cfg.text_backend.kind == "mock") {
        auto schedule = mock_schedule ? FailureSchedule::from_file(*mock_schedule) : FailureSchedule{};
        set.text = std::make_unique<MockBackend>(std::move(schedule));
        return set;
    }
    set.text = std::make_unique<HttpBackend>(cfg.text_backend, image_dir);
    if (cfg.image_backend) {
        if (cfg.image_backend->kind == "mock") throw Error(Errc::config, "cannot mix a mock image backend with http");
        set.image = std::make_unique<HttpBackend>(*cfg.image_backend, image_dir);
    }
    return set;
}

void write_transcript(const std::optional<std::string>& dir, const std::vector<TranscriptEntry>& entries,
                      const std::string& name) {
    if (!dir) return;
    std::error_code ec;
    fs::create_directories(*dir, ec);
    if (ec) throw Error(Errc::io, "cannot create " + *dir + ": " + ec.message());
    Transcript t;
    for (const auto& e : entries) t.append(e);
    write_text_file(fs::path(*dir) / name, t.to_json());
}

PrivateKeyS parse_s_key(const std::string& value, std::size_t tau, unsigned b) {
    std::string text = fs::is_regular_file(value) ? read_text_file(value) : value;
    if (text.find(':') == std::string::npos) {
        auto hex = text;
        hex.erase(std::remove_if(hex.begin(), hex.end(), [](unsigned char c) { return std::isspace(c); }), hex.end());
        text = std::to_string(tau) + ":" + std::to_string(b) + ":" + hex;
    }
    return PrivateKeyS::from_text(text);
}

struct Options {
    // shared
    std::string config;
    std::optional<std::string> mock;
    std::optional<std::string> transcript;
    // session init
    std::string psk, seeds, anchor, dictionary, scene;
    std::uint32_t alpha = 24;
    unsigned b = 28;
    double sigma = 2.5;
    std::size_t tau = 5;
    // embed
    std::string message;
    std::optional<std::size_t> bit_length;
    std::string out;
    // extract
    std::string bundle;
    std::optional<std::string> s_key;
    std::size_t retries = 0;
    // codebook / verify-caption
    std::optional<std::string> override_seeds;
    std::string caption_file;
    std::string codewords;
    // metrics
    std::size_t bits = 0;
    std::string cover, stego;
};

int cmd_session_init(const Options& o, std::ostream& out) {
    SessionConfig cfg;
    cfg.psk_hex = o.psk;
    cfg.seed_words = split_words(o.seeds);
    cfg.anchor = o.anchor;
    cfg.params.alpha = o.alpha;
    cfg.params.b = o.b;
    cfg.params.sigma = o.sigma;
    cfg.tau = o.tau;
    if (!o.scene.empty()) cfg.scene = o.scene;

    fs::path config_path(o.config);
    fs::path dict_path(o.dictionary);
    auto base = config_path.has_parent_path() ? config_path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) throw Error(Errc::io, "cannot create " + base.string() + ": " + ec.message());
    if (dict_path.is_absolute()) {
        cfg.dictionary = dict_path.string();
    } else {
        // stored relative to the config so the pair can be moved together
        auto rel = fs::relative(fs::absolute(dict_path), fs::absolute(base), ec);
        cfg.dictionary = (ec || rel.empty()) ? fs::absolute(dict_path).string() : rel.generic_string();
    }
    cfg.base_dir = base;

    (void)cfg.plan();
    auto dict = load_dictionary_file(cfg.resolved_dictionary());
    auto k_ord = dict.order_seed_words(cfg.seed_words);
    // canonical order in the file too
    cfg.seed_words = k_ord.words();
    save_config(cfg, config_path);
    out << "config: " << config_path.string() << "\n";
    out << "seed words: " << join(k_ord.words()) << "\n";
    return exit_ok;
}

int cmd_embed(const Options& o, std::ostream& out, std::ostream& err) {
    auto cfg = load_config(o.config);
    auto plan = cfg.plan();
    SecretMessage m(parse_message(o.message, o.bit_length), plan.tau, plan.params.b);
    auto dict = load_dictionary_file(cfg.resolved_dictionary());

    fs::path out_dir(o.out);
    auto backends = make_backends(cfg, o.mock, out_dir / "generated");
    EmbedResult result = [&] {
        try {
            return embed_pipeline(plan, m, dict, backends.refs());
        } catch (const ExhaustionError& e) {
            write_transcript(o.transcript, e.transcript(), "embed-transcript.json");
            throw;
        }
    }();
    write_bundle(result.bundle, out_dir);
    write_transcript(o.transcript, result.transcript, "embed-transcript.json");
    out << "bundle: " << out_dir.string() << "\n";
    out << "caption: " << result.bundle.caption << "\n";
    out << "attempts: image " << result.bundle.image_attempts << ", caption " << result.bundle.caption_attempts
        << "\n";
    out << "s-key: " << result.bundle.key.to_text() << "\n";
    err << "send s_key.txt over a separate channel; publish only image and caption\n";
    return exit_ok;
}

int cmd_extract(const Options& o, std::ostream& out) {
    auto cfg = load_config(o.config);
    auto plan = cfg.plan();
    auto dict = load_dictionary_file(cfg.resolved_dictionary());
    std::optional<std::string> key_text;
    if (o.s_key) key_text = parse_s_key(*o.s_key, plan.tau, plan.params.b).to_text();
    auto bundle = read_bundle(o.bundle, key_text);

    auto backends = make_backends(cfg, o.mock, fs::path(o.bundle) / "received");
    Transcript transcript;
    RecordingBackend rec(*backends.text, transcript);
    ExtractOptions opts;
    opts.weights = plan.weights;
    opts.extraction_prompt = plan.prompts.extraction.body;
    opts.retries = o.retries;
    std::optional<ExtractResult> r;
    try {
        r = extract_pipeline(bundle, plan.psk, dict, plan.params, plan.tau, rec, opts);
    } catch (...) {
        write_transcript(o.transcript, transcript.entries(), "extract-transcript.json");
        throw;
    }
    write_transcript(o.transcript, transcript.entries(), "extract-transcript.json");
    out << "bits: " << r->message.bits().str() << "\n";
    out << "hex: " << bits_to_hex(r->message.bits()) << "\n";
    out << "bit-length: " << r->message.bits().size() << "\n";
    out << "seed words: " << join(r->seed_words.words()) << "\n";
    out << "attempts: " << r->attempts << "\n";
    return exit_ok;
}

int cmd_codebook_dump(const Options& o, std::ostream& out) {
    auto cfg = load_config(o.config);
    auto plan = cfg.plan();
    auto dict = load_dictionary_file(cfg.resolved_dictionary());
    auto seeds = o.override_seeds ? split_words(*o.override_seeds) : plan.seed_words;
    auto k_ord = dict.order_seed_words(seeds);
    out << session_codebook(dict, k_ord, plan.psk, plan.anchor, plan.params, plan.weights).to_json();
    return exit_ok;
}

int cmd_verify_caption(const Options& o, std::ostream& out) {
    auto cfg = load_config(o.config);
    auto plan = cfg.plan();
    auto dict = load_dictionary_file(cfg.resolved_dictionary());
    auto seeds = o.override_seeds ? split_words(*o.override_seeds) : plan.seed_words;
    auto pool = build_semantic_pool(dict, dict.order_seed_words(seeds), plan.params.alpha, plan.weights);
    auto required = split_words(o.codewords);
    for (const auto& w : required) {
        if (!pool.contains(w)) throw Error(Errc::config, "codeword '" + w + "' is not in the semantic pool");
    }
    auto verdict = verify_caption(read_text_file(o.caption_file), required, plan.anchor, pool);
    if (verdict.passed()) {
        out << "caption ok\n";
        return exit_ok;
    }
    for (const auto& v : verdict.violations) out << to_string(v.kind) << ": " << v.detail << "\n";
    return exit_failure;
}

std::vector<std::vector<double>> vectors_from(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open " + path);
    return read_vectors(in);
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Image-anchored text steganography: embed bits in a caption, recover them with a shared key"};
    app.name("dyco");
    app.require_subcommand(1);
    Options o;

    auto* session = app.add_subcommand("session", "session configuration");
    session->require_subcommand(1);
    auto* init = session->add_subcommand("init", "validate parameters and write a session config");
    init->add_option("--config", o.config, "config file to write")->required();
    init->add_option("--psk", o.psk, "pre-shared key, hex, at least 16 bytes")->required();
    init->add_option("--seeds", o.seeds, "comma-separated seed words")->required();
    init->add_option("--anchor", o.anchor, "anchor sequence")->required();
    init->add_option("--dictionary", o.dictionary, "dictionary JSONL file")->required();
    init->add_option("--alpha", o.alpha, "semantic pool size")->capture_default_str();
    init->add_option("--b", o.b, "bits per codeword")->capture_default_str();
    init->add_option("--sigma", o.sigma, "half-Gaussian width")->capture_default_str();
    init->add_option("--tau", o.tau, "codewords per caption")->capture_default_str();
    init->add_option("--scene", o.scene, "scene description for image generation");

    auto* embed = app.add_subcommand("embed", "hide a message; writes a bundle directory");
    embed->add_option("--config", o.config)->required();
    embed->add_option("--message", o.message, "bit string, or hex with --bit-length")->required();
    embed->add_option("--bit-length", o.bit_length, "message length when --message is hex");
    embed->add_option("--out", o.out, "bundle directory")->required();
    embed->add_option("--mock", o.mock, "use the mock backend with this failure schedule (JSON)");
    embed->add_option("--transcript", o.transcript, "directory for the backend transcript");

    auto* extract = app.add_subcommand("extract", "recover a message from a bundle");
    extract->add_option("--config", o.config)->required();
    extract->add_option("--bundle", o.bundle)->required();
    extract->add_option("--s-key", o.s_key, "S as tau:b:hex, bare hex, or a file; default bundle/s_key.txt");
    extract->add_option("--retries", o.retries, "further seed-word extractions after a failed decode")
        ->capture_default_str();
    extract->add_option("--mock", o.mock, "use the mock backend with this failure schedule (JSON)");
    extract->add_option("--transcript", o.transcript, "directory for the backend transcript");

    auto* codebook = app.add_subcommand("codebook", "codebook diagnostics");
    codebook->require_subcommand(1);
    auto* dump = codebook->add_subcommand("dump", "print the session codebook (secret; do not publish)");
    dump->add_option("--config", o.config)->required();
    dump->add_option("--seeds", o.override_seeds, "comma-separated seed words instead of the config's");

    auto* verify = app.add_subcommand("verify-caption", "check a caption against the embedding constraints");
    verify->add_option("--config", o.config)->required();
    verify->add_option("--caption", o.caption_file, "caption text file")->required();
    verify->add_option("--codewords", o.codewords, "required codewords in order, comma-separated")->required();
    verify->add_option("--seeds", o.override_seeds, "comma-separated seed words instead of the config's");

    auto* metrics = app.add_subcommand("metrics", "evaluation formulas");
    metrics->require_subcommand(1);
    auto* ec = metrics->add_subcommand("ec", "embedding capacity in bits per word");
    ec->add_option("--bits", o.bits)->required();
    ec->add_option("--caption", o.caption_file, "caption text file")->required();
    auto* kld = metrics->add_subcommand("kld", "Gaussian KL divergence between two vector sets");
    kld->add_option("--cover", o.cover, "one comma-separated vector per line")->required();
    kld->add_option("--stego", o.stego, "one comma-separated vector per line")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (init->parsed()) return cmd_session_init(o, out);
        if (embed->parsed()) return cmd_embed(o, out, err);
        if (extract->parsed()) return cmd_extract(o, out);
        if (dump->parsed()) return cmd_codebook_dump(o, out);
        if (verify->parsed()) return cmd_verify_caption(o, out);
        if (ec->parsed()) {
            auto r = embedding_capacity(o.bits, read_text_file(o.caption_file));
            out << "bits: " << r.embedded_bits << "\nwords: " << r.word_count << "\nbpw: " << r.bpw << "\n";
            return exit_ok;
        }
        if (kld->parsed()) {
            auto x = stats_from_vectors(vectors_from(o.cover));
            auto y = stats_from_vectors(vectors_from(o.stego));
            out << "kld: " << gaussian_kld(x, y) << "\n";
            return exit_ok;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    err << app.help();
    return exit_usage;
}

} // namespace dyco
