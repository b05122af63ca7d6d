#ifndef DYCO_MOCK_BACKEND_HPP
#define DYCO_MOCK_BACKEND_HPP

#include "dyco/backend.hpp"

#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace dyco {

enum class ViolationKind { missing_codeword, wrong_order, wrong_multiplicity, missing_anchor, forbidden_word };

std::string_view to_string(ViolationKind k) noexcept;
ViolationKind violation_from_string(std::string_view s);

/// Words left out of a generated or refined image: the last `drop_count`
/// intended words plus any named in `drop_words`.
struct ImageStep {
    std::size_t drop_count = 0;
    std::vector<std::string> drop_words;
};

/// Recognition errors for one extraction call.
struct ExtractStep {
    std::vector<std::string> miss;
    std::vector<std::string> spurious;
};

struct CaptionStep {
    std::optional<ViolationKind> violate;
};

/// Per-attempt scripts. Call n (1-based, counted per kind) uses entry n-1,
/// or the default once the list runs out.
struct FailureSchedule {
    std::vector<ImageStep> image;
    std::vector<ExtractStep> extract;
    std::vector<CaptionStep> caption;
    ImageStep default_image;
    ExtractStep default_extract;
    CaptionStep default_caption;
    std::vector<std::string> distractors;

    static FailureSchedule from_json(const nlohmann::json& j);
    static FailureSchedule from_file(const std::string& path);
};

/// Deterministic stand-in for both the image generator and the multimodal
/// model. It reads its instructions back from the "Objects:", "Codewords:",
/// "Anchor:" and "Forbidden:" lines of the default prompt templates. Use one
/// instance per session; schedule advancement is serialized by a mutex.
class MockBackend final : public ModelBackend {
public:
    explicit MockBackend(FailureSchedule schedule = {}, std::string id_prefix = "mock-img-");

    ImageRef generate_image(const std::string& prompt) override;
    ImageRef refine_image(const ImageRef& image, const std::string& update_prompt) override;
    std::vector<std::string> extract_seed_words(const ImageRef& image, const std::string& prompt) override;
    std::string generate_text(const ImageRef* image, const std::string& prompt, TextPurpose purpose) override;

    struct Counters {
        std::size_t images = 0;
        std::size_t extractions = 0;
        std::size_t captions = 0;
        std::size_t feedback = 0;
    };
    [[nodiscard]] Counters counters() const;

private:
    ImageRef draw(std::vector<std::string> intended);

    FailureSchedule schedule_;
    std::string id_prefix_;
    mutable std::mutex mu_;
    Counters counters_;
};

/// The caption the mock writes for the given constraints, before any
/// scripted violation. Exposed for tests.
std::string compose_mock_caption(const std::vector<std::string>& codewords, const std::string& anchor,
                                 const std::vector<std::string>& forbidden,
                                 std::optional<ViolationKind> violate = std::nullopt);

} // namespace dyco

#endif // DYCO_MOCK_BACKEND_HPP
