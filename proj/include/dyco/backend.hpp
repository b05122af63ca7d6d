#ifndef DYCO_BACKEND_HPP
#define DYCO_BACKEND_HPP

// Abstract image-generation / multimodal-understanding interface, the
// transcript recorder, and reply parsing shared by every realization.

#include "json.hpp"

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dyco {

/// What the mock "draws": concept words plus background distractors.
struct MockScene {
    std::vector<std::string> intended;
    std::vector<std::string> depicted;
    std::vector<std::string> distractors;

    friend bool operator==(const MockScene&, const MockScene&) = default;
};

/// Either a file (live backends) or a mock scene record.
struct ImageRef {
    std::string id;
    std::string path;
    std::optional<MockScene> scene;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
    static ImageRef from_json(const nlohmann::json& j);

    friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

enum class TextPurpose { caption, caption_feedback, image_feedback };

std::string_view to_string(TextPurpose p) noexcept;

class ModelBackend {
public:
    virtual ~ModelBackend() = default;

    virtual ImageRef generate_image(const std::string& prompt) = 0;
    virtual ImageRef refine_image(const ImageRef& image, const std::string& update_prompt) = 0;
    /// Throws Errc::extraction_parse when the reply carries no word list.
    virtual std::vector<std::string> extract_seed_words(const ImageRef& image, const std::string& prompt) = 0;
    virtual std::string generate_text(const ImageRef* image, const std::string& prompt, TextPurpose purpose) = 0;
};

/// Finds the "words: a, b, c" line (case-insensitive key) and returns the
/// normalized, de-duplicated words in reply order.
std::vector<std::string> parse_word_list_reply(std::string_view reply);

struct TranscriptEntry {
    std::string op;
    std::string purpose;
    std::string image_id;
    std::string prompt;
    std::string response;
};

/// Ordered record of every backend call in a session.
class Transcript {
public:
    void append(TranscriptEntry e);
    [[nodiscard]] std::vector<TranscriptEntry> entries() const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] std::string to_json() const;

private:
    mutable std::mutex mu_;
    std::vector<TranscriptEntry> entries_;
};

/// Forwards to an inner backend and appends every call (including failed
/// ones) to a transcript.
class RecordingBackend final : public ModelBackend {
public:
    RecordingBackend(ModelBackend& inner, Transcript& transcript) : inner_(inner), transcript_(transcript) {}

    ImageRef generate_image(const std::string& prompt) override;
    ImageRef refine_image(const ImageRef& image, const std::string& update_prompt) override;
    std::vector<std::string> extract_seed_words(const ImageRef& image, const std::string& prompt) override;
    std::string generate_text(const ImageRef* image, const std::string& prompt, TextPurpose purpose) override;

private:
    ModelBackend& inner_;
    Transcript& transcript_;
};

/// Which backend serves image generation and which serves text; the two may
/// be the same object.
struct Backends {
    ModelBackend& image;
    ModelBackend& text;
};

} // namespace dyco

#endif // DYCO_BACKEND_HPP
