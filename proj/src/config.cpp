#include "dyco/config.hpp"

#include "dyco/error.hpp"

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace dyco {

namespace {

constexpr const char* kBundleFormat = "dyco-bundle/1";

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw Error(Errc::config, std::string(where) + ": unknown field '" + it.key() + "'");
    }
}

} // namespace

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot write " + path.string());
    out << text;
    if (!out.flush()) throw Error(Errc::io, "write failed for " + path.string());
}

void BackendConfig::validate() const {
    if (kind == "mock") return;
    if (kind != "http") throw Error(Errc::config, "backend kind must be 'mock' or 'http', got '" + kind + "'");
    if (endpoint.empty()) throw Error(Errc::config, "http backend needs an endpoint");
    if (credential_env.empty()) throw Error(Errc::config, "http backend needs credential_env");
    if (model.empty()) throw Error(Errc::config, "http backend needs a model");
    if (max_in_flight == 0) throw Error(Errc::config, "max_in_flight must be at least 1");
}

ordered_json BackendConfig::to_json() const {
    ordered_json j;
    j["kind"] = kind;
    if (kind == "http") {
        j["endpoint"] = endpoint;
        j["credential_env"] = credential_env;
        j["model"] = model;
        j["chat_path"] = chat_path;
        j["image_path"] = image_path;
        j["edit_path"] = edit_path;
        j["timeout_ms"] = timeout_ms;
        j["retries"] = retries;
        j["backoff_ms"] = backoff_ms;
        j["max_in_flight"] = max_in_flight;
    }
    return j;
}

BackendConfig BackendConfig::from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::config, "backend section must be an object");
    for (const char* secret : {"api_key", "key", "token", "credential", "password"}) {
        if (j.contains(secret)) {
            throw Error(Errc::config, std::string("backend field '") + secret +
                                          "' is not allowed; name an environment variable in credential_env");
        }
    }
    reject_unknown(j, {"kind", "endpoint", "credential_env", "model", "chat_path", "image_path", "edit_path",
                       "timeout_ms", "retries", "backoff_ms", "max_in_flight"},
                   "backend");
    BackendConfig c;
    c.kind = get_or<std::string>(j, "kind", c.kind);
    c.endpoint = get_or<std::string>(j, "endpoint", c.endpoint);
    c.credential_env = get_or<std::string>(j, "credential_env", c.credential_env);
    c.model = get_or<std::string>(j, "model", c.model);
    c.chat_path = get_or<std::string>(j, "chat_path", c.chat_path);
    c.image_path = get_or<std::string>(j, "image_path", c.image_path);
    c.edit_path = get_or<std::string>(j, "edit_path", c.edit_path);
    c.timeout_ms = get_or<unsigned>(j, "timeout_ms", c.timeout_ms);
    c.retries = get_or<unsigned>(j, "retries", c.retries);
    c.backoff_ms = get_or<unsigned>(j, "backoff_ms", c.backoff_ms);
    c.max_in_flight = get_or<unsigned>(j, "max_in_flight", c.max_in_flight);
    c.validate();
    return c;
}

fs::path SessionConfig::resolved_dictionary() const {
    if (dictionary.empty()) throw Error(Errc::config, "config has no dictionary path");
    fs::path p(dictionary);
    return p.is_absolute() ? p : base_dir / p;
}

PromptSet SessionConfig::prompt_set() const {
    PromptSet p = PromptSet::defaults();
    if (!prompts) return p;
    if (!prompts->is_object()) throw Error(Errc::config, "prompts must be an object");
    reject_unknown(*prompts, {"generation", "extraction", "image_feedback", "embedding", "caption_feedback"},
                   "prompts");
    auto set = [&](const char* key, PromptTemplate& t) {
        if (prompts->contains(key)) t.body = prompts->at(key).get<std::string>();
    };
    set("generation", p.generation);
    set("extraction", p.extraction);
    set("image_feedback", p.image_feedback);
    set("embedding", p.embedding);
    set("caption_feedback", p.caption_feedback);
    return p;
}

SessionPlan SessionConfig::plan() const {
    SessionPlan plan{PresharedKey::from_hex(psk_hex), seed_words, AnchorSequence(anchor), params, tau, weights,
                     scene,  prompt_set(),             max_attempts_image, max_attempts_caption};
    plan.validate();
    return plan;
}

std::string SessionConfig::to_json_text() const {
    ordered_json j;
    j["psk"] = psk_hex;
    j["alpha"] = params.alpha;
    j["b"] = params.b;
    j["sigma"] = params.sigma;
    j["anchor"] = anchor;
    j["seed_words"] = seed_words;
    j["tau"] = tau;
    j["weights"] = {{"rev", weights.lambda_rev}, {"fwd", weights.lambda_fwd}, {"pre", weights.lambda_pre}};
    j["scene"] = scene;
    j["max_attempts_image"] = max_attempts_image;
    j["max_attempts_caption"] = max_attempts_caption;
    j["dictionary"] = dictionary;
    j["backend"] = text_backend.to_json();
    if (image_backend) j["image_backend"] = image_backend->to_json();
    if (prompts) j["prompts"] = *prompts;
    return j.dump(2) + "\n";
}

SessionConfig SessionConfig::from_json(const json& j, fs::path base_dir) {
    if (!j.is_object()) throw Error(Errc::config, "config must be a JSON object");
    reject_unknown(j, {"psk", "alpha", "b", "sigma", "anchor", "seed_words", "tau", "weights", "scene",
                       "max_attempts_image", "max_attempts_caption", "dictionary", "backend", "image_backend",
                       "prompts"},
                   "config");
    try {
        SessionConfig c;
        c.base_dir = std::move(base_dir);
        c.psk_hex = j.at("psk").get<std::string>();
        c.params.alpha = j.at("alpha").get<std::uint32_t>();
        c.params.b = j.at("b").get<unsigned>();
        c.params.sigma = j.at("sigma").get<double>();
        c.anchor = j.at("anchor").get<std::string>();
        c.seed_words = j.at("seed_words").get<WordList>();
        c.tau = j.at("tau").get<std::size_t>();
        if (j.contains("weights")) {
            const auto& w = j["weights"];
            reject_unknown(w, {"rev", "fwd", "pre"}, "weights");
            c.weights = {get_or(w, "rev", c.weights.lambda_rev), get_or(w, "fwd", c.weights.lambda_fwd),
                         get_or(w, "pre", c.weights.lambda_pre)};
        }
        c.scene = get_or<std::string>(j, "scene", c.scene);
        c.max_attempts_image = get_or<std::size_t>(j, "max_attempts_image", c.max_attempts_image);
        c.max_attempts_caption = get_or<std::size_t>(j, "max_attempts_caption", c.max_attempts_caption);
        c.dictionary = get_or<std::string>(j, "dictionary", "");
        if (j.contains("backend")) c.text_backend = BackendConfig::from_json(j["backend"]);
        if (j.contains("image_backend")) c.image_backend = BackendConfig::from_json(j["image_backend"]);
        if (j.contains("prompts")) c.prompts = j["prompts"];
        (void)c.plan();
        return c;
    } catch (const json::exception& e) {
        throw Error(Errc::config, std::string("config: ") + e.what());
    }
}

SessionConfig load_config(const fs::path& path) {
    auto text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::config, path.string() + ": " + e.what());
    }
    return SessionConfig::from_json(j, path.parent_path());
}

void save_config(const SessionConfig& cfg, const fs::path& path) { write_text_file(path, cfg.to_json_text()); }

void write_bundle(const StegoBundle& bundle, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::io, "cannot create " + dir.string() + ": " + ec.message());

    ImageRef image = bundle.image;
    if (!image.scene && !image.path.empty() && fs::is_regular_file(image.path)) {
        fs::path target = dir / ("image" + fs::path(image.path).extension().string());
        if (!fs::equivalent(image.path, target, ec)) {
            fs::copy_file(image.path, target, fs::copy_options::overwrite_existing, ec);
            if (ec) throw Error(Errc::io, "cannot copy image: " + ec.message());
        }
        image.path = target.filename().string();
    }
    write_text_file(dir / "image.json", image.to_json().dump(2) + "\n");
    write_text_file(dir / "caption.txt", bundle.caption);
    ordered_json meta;
    meta["format"] = kBundleFormat;
    meta["anchor"] = bundle.anchor.text();
    meta["tau"] = bundle.tau;
    meta["b"] = bundle.b;
    meta["attempts"] = {{"image", bundle.image_attempts}, {"caption", bundle.caption_attempts}};
    write_text_file(dir / "metadata.json", meta.dump(2) + "\n");
    write_text_file(dir / "s_key.txt", bundle.key.to_text() + "\n");
}

StegoBundle read_bundle(const fs::path& dir, const std::optional<std::string>& s_key_override) {
    try {
        auto image = ImageRef::from_json(json::parse(read_text_file(dir / "image.json")));
        if (!image.scene && !image.path.empty() && fs::path(image.path).is_relative() &&
            image.path.find("://") == std::string::npos) {
            image.path = (dir / image.path).string();
        }
        auto meta = json::parse(read_text_file(dir / "metadata.json"));
        if (get_or<std::string>(meta, "format", "") != kBundleFormat) {
            throw Error(Errc::format, "metadata.json: unsupported bundle format");
        }
        std::string key_text = s_key_override ? *s_key_override : read_text_file(dir / "s_key.txt");
        StegoBundle b{std::move(image),
                      read_text_file(dir / "caption.txt"),
                      AnchorSequence(meta.at("anchor").get<std::string>()),
                      PrivateKeyS::from_text(key_text),
                      meta.at("tau").get<std::size_t>(),
                      meta.at("b").get<unsigned>(),
                      meta.at("attempts").at("image").get<std::size_t>(),
                      meta.at("attempts").at("caption").get<std::size_t>()};
        return b;
    } catch (const json::exception& e) {
        throw Error(Errc::format, "bundle " + dir.string() + ": " + e.what());
    }
}

} // namespace dyco
