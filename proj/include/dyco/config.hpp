#ifndef DYCO_CONFIG_HPP
#define DYCO_CONFIG_HPP

// Session configuration file and stego bundle directory I/O.

#include "dyco/orchestration.hpp"

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

namespace dyco {

struct BackendConfig {
    std::string kind = "mock";
    std::string endpoint;
    /// Name of the environment variable holding the credential.
    std::string credential_env;
    std::string model;
    std::string chat_path = "/v1/chat/completions";
    std::string image_path = "/v1/images/generations";
    std::string edit_path = "/v1/images/edits";
    unsigned timeout_ms = 60000;
    unsigned retries = 2;
    unsigned backoff_ms = 500;
    unsigned max_in_flight = 4;

    /// Throws Errc::config.
    void validate() const;
    [[nodiscard]] nlohmann::ordered_json to_json() const;
    static BackendConfig from_json(const nlohmann::json& j);
};

struct SessionConfig {
    std::string psk_hex;
    WordList seed_words;
    std::string anchor;
    SessionParams params;
    std::size_t tau = 5;
    ExpansionWeights weights;
    std::string scene = "an everyday outdoor scene";
    std::size_t max_attempts_image = 10;
    std::size_t max_attempts_caption = 10;
    /// As written in the file; see resolved_dictionary().
    std::string dictionary;
    BackendConfig text_backend;
    std::optional<BackendConfig> image_backend;
    std::optional<nlohmann::json> prompts;
    std::filesystem::path base_dir;

    [[nodiscard]] std::filesystem::path resolved_dictionary() const;
    [[nodiscard]] PromptSet prompt_set() const;
    /// Validates everything except dictionary membership.
    [[nodiscard]] SessionPlan plan() const;

    [[nodiscard]] std::string to_json_text() const;
    static SessionConfig from_json(const nlohmann::json& j, std::filesystem::path base_dir = {});
};

/// Throws Errc::io or Errc::config.
SessionConfig load_config(const std::filesystem::path& path);
void save_config(const SessionConfig& cfg, const std::filesystem::path& path);

/// image.json, caption.txt, metadata.json, s_key.txt. A file-backed image is
/// copied next to them and referenced by its bundle-relative name.
void write_bundle(const StegoBundle& bundle, const std::filesystem::path& dir);
/// Relative image paths are resolved against `dir`. `s_key_override` replaces
/// s_key.txt when the key travels separately.
StegoBundle read_bundle(const std::filesystem::path& dir, const std::optional<std::string>& s_key_override = {});

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace dyco

#endif // DYCO_CONFIG_HPP
