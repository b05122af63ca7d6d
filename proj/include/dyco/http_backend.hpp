#ifndef DYCO_HTTP_BACKEND_HPP
#define DYCO_HTTP_BACKEND_HPP

#include "dyco/backend.hpp"
#include "dyco/config.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <semaphore>
#include <string>

namespace dyco {

/// Chat-completions / images HTTP realization. Request and reply shapes
/// are described in docs/wire-format.md. Transport failures, 429 and 5xx
/// replies are retried up to `retries` times; anything else, or running out
/// of retries, raises Errc::backend_fatal.
class HttpBackend final : public ModelBackend {
public:
    /// Reads the credential from the environment variable named in the
    /// config; throws Errc::config if it is unset. Generated images are
    /// written below `image_dir`.
    HttpBackend(BackendConfig config, std::filesystem::path image_dir);

    ImageRef generate_image(const std::string& prompt) override;
    ImageRef refine_image(const ImageRef& image, const std::string& update_prompt) override;
    std::vector<std::string> extract_seed_words(const ImageRef& image, const std::string& prompt) override;
    std::string generate_text(const ImageRef* image, const std::string& prompt, TextPurpose purpose) override;

private:
    nlohmann::json post(const std::string& path, const nlohmann::json& body);
    ImageRef store_image(const nlohmann::json& reply);
    std::string chat(const ImageRef* image, const std::string& prompt);

    BackendConfig config_;
    std::filesystem::path image_dir_;
    std::string credential_;
    std::counting_semaphore<1024> in_flight_;
    std::atomic<std::size_t> images_{0};
};

std::string base64_encode(std::string_view bytes);
/// Throws Errc::format on malformed input.
std::string base64_decode(std::string_view text);

/// "data:<mime>;base64,..." for a local file, or the path unchanged when it
/// is already a URL.
std::string image_url(const ImageRef& image);

} // namespace dyco

#endif // DYCO_HTTP_BACKEND_HPP
