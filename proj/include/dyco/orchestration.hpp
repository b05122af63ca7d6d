#ifndef DYCO_ORCHESTRATION_HPP
#define DYCO_ORCHESTRATION_HPP

#include "dyco/backend.hpp"
#include "dyco/codebook.hpp"
#include "dyco/dictionary.hpp"
#include "dyco/error.hpp"
#include "dyco/mapping.hpp"
#include "dyco/mock_backend.hpp"
#include "dyco/prompts.hpp"
#include "dyco/protocol.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace dyco {

struct SessionPlan {
    PresharedKey psk;
    WordList seed_words;
    AnchorSequence anchor;
    SessionParams params;
    std::size_t tau = 5;
    ExpansionWeights weights;
    std::string scene;
    PromptSet prompts = PromptSet::defaults();
    std::size_t max_attempts_image = 10;
    std::size_t max_attempts_caption = 10;

    /// Throws Errc::config.
    void validate() const;
};

struct Violation {
    ViolationKind kind;
    std::string detail;
};

struct CaptionVerdict {
    std::vector<Violation> violations;

    [[nodiscard]] bool passed() const noexcept { return violations.empty(); }
    [[nodiscard]] std::string describe() const;
};

/// Lowercase, whitespace split, edge punctuation stripped. Occurrences of a
/// non-empty anchor are cut out before tokenizing.
std::vector<std::string> tokenize_caption(std::string_view caption, std::string_view anchor = {});

CaptionVerdict verify_caption(std::string_view caption, const std::vector<std::string>& required,
                              const AnchorSequence& anchor, const SemanticPool& pool);

/// Raised when a reject-sampling loop hits its cap. Carries the calls made.
class ExhaustionError : public Error {
public:
    ExhaustionError(const std::string& what, std::vector<TranscriptEntry> transcript)
        : Error(Errc::exhaustion, what), transcript_(std::move(transcript)) {}

    [[nodiscard]] const std::vector<TranscriptEntry>& transcript() const noexcept { return transcript_; }

private:
    std::vector<TranscriptEntry> transcript_;
};

struct ImageResult {
    ImageRef image;
    std::size_t attempts = 0;
};

struct CaptionResult {
    std::string caption;
    std::size_t attempts = 0;
};

/// Backend calls go through `backends` as given; wrap them in
/// RecordingBackend to keep a transcript. `transcript` (optional) is only
/// read to populate an ExhaustionError.
ImageResult run_image_generation(const SessionPlan& plan, Backends backends, const Transcript* transcript = nullptr);

CaptionResult run_caption_generation(const SessionPlan& plan, Backends backends, const ImageRef& image,
                                     const std::vector<std::string>& required, const SemanticPool& pool,
                                     const Transcript* transcript = nullptr);

struct StegoBundle {
    ImageRef image;
    std::string caption;
    AnchorSequence anchor;
    PrivateKeyS key;
    std::size_t tau = 0;
    unsigned b = 0;
    std::size_t image_attempts = 0;
    std::size_t caption_attempts = 0;

    friend bool operator==(const StegoBundle&, const StegoBundle&) = default;
};

struct EmbedResult {
    StegoBundle bundle;
    std::vector<TranscriptEntry> transcript;
};

/// Framing and configuration are checked before the first backend call.
EmbedResult embed_pipeline(const SessionPlan& plan, const SecretMessage& message, const Dictionary& dict,
                           Backends backends);

struct ExtractOptions {
    ExpansionWeights weights;
    std::string extraction_prompt = PromptSet::defaults().extraction.body;
    std::size_t retries = 0;
};

struct ExtractResult {
    SecretMessage message;
    std::size_t attempts = 0;
    OrderedSeedWords seed_words;
};

/// Recovers the message. Up to `retries` further extractions are tried when
/// the recovered seed words do not yield a decodable caption.
ExtractResult extract_pipeline(const StegoBundle& bundle, const PresharedKey& psk, const Dictionary& dict,
                               const SessionParams& phi, std::size_t tau, ModelBackend& backend,
                               const ExtractOptions& options = {});

/// Codebook both parties derive for a seed-word set; shared by the
/// pipelines and the `codebook dump` command.
DynamicCodebook session_codebook(const Dictionary& dict, const OrderedSeedWords& k_ord, const PresharedKey& psk,
                                 const AnchorSequence& anchor, SessionParams phi, const ExpansionWeights& weights);

} // namespace dyco

#endif // DYCO_ORCHESTRATION_HPP
