#include "dyco/orchestration.hpp"

#include "dyco/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dyco {

namespace {

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) out += (i ? ", " : "") + words[i];
    return out;
}

std::vector<std::string> normalized(const std::vector<std::string>& words) {
    std::vector<std::string> out;
    for (const auto& w : words) {
        auto n = normalize_word(w);
        if (!n.empty()) out.push_back(std::move(n));
    }
    return out;
}

std::set<std::string> as_set(const std::vector<std::string>& words) {
    auto n = normalized(words);
    return {n.begin(), n.end()};
}

std::vector<TranscriptEntry> snapshot(const Transcript* t) { return t ? t->entries() : std::vector<TranscriptEntry>{}; }

} // namespace

void SessionPlan::validate() const {
    params.validate();
    if (seed_words.empty()) throw Error(Errc::config, "at least one seed word is required");
    if (tau == 0) throw Error(Errc::config, "tau must be at least 1");
    if (max_attempts_image == 0 || max_attempts_caption == 0) {
        throw Error(Errc::config, "max attempts must be at least 1");
    }
    weights.validate();
}

std::string CaptionVerdict::describe() const {
    if (violations.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out += "; ";
        out += std::string(to_string(violations[i].kind)) + " (" + violations[i].detail + ")";
    }
    return out;
}

std::vector<std::string> tokenize_caption(std::string_view caption, std::string_view anchor) {
    if (anchor.empty()) return normalize_tokens(caption);
    std::string text;
    std::size_t pos = 0;
    while (true) {
        auto hit = caption.find(anchor, pos);
        if (hit == std::string_view::npos) break;
        text.append(caption.substr(pos, hit - pos));
        text.push_back(' ');
        pos = hit + anchor.size();
    }
    text.append(caption.substr(pos));
    return normalize_tokens(text);
}

CaptionVerdict verify_caption(std::string_view caption, const std::vector<std::string>& required,
                              const AnchorSequence& anchor, const SemanticPool& pool) {
    CaptionVerdict v;
    auto tokens = tokenize_caption(caption, anchor.text());

    std::vector<std::string> seen;
    for (auto& t : tokens) {
        if (pool.contains(t)) seen.push_back(std::move(t));
    }
    std::map<std::string, std::size_t> want;
    for (const auto& w : required) ++want[w];
    std::map<std::string, std::size_t> got;
    for (const auto& w : seen) ++got[w];

    std::set<std::string> reported;
    for (const auto& w : seen) {
        if (!want.count(w) && reported.insert(w).second) v.violations.push_back({ViolationKind::forbidden_word, w});
    }
    bool counts_ok = true;
    for (const auto& [w, n] : want) {
        auto have = got.count(w) ? got[w] : 0;
        if (have == 0) {
            v.violations.push_back({ViolationKind::missing_codeword, w});
            counts_ok = false;
        } else if (have != n) {
            v.violations.push_back({ViolationKind::wrong_multiplicity,
                                    w + " appears " + std::to_string(have) + " times, expected " + std::to_string(n)});
            counts_ok = false;
        }
    }
    if (counts_ok) {
        std::vector<std::string> order;
        for (const auto& w : seen) {
            if (want.count(w)) order.push_back(w);
        }
        if (order != required) {
            v.violations.push_back({ViolationKind::wrong_order, "found " + join(order) + ", expected " + join(required)});
        }
    }
    if (caption.find(anchor.text()) == std::string_view::npos) {
        v.violations.push_back({ViolationKind::missing_anchor, anchor.text()});
    }
    return v;
}

ImageResult run_image_generation(const SessionPlan& plan, Backends backends, const Transcript* transcript) {
    const auto expected = as_set(plan.seed_words);
    const auto expected_text = join({expected.begin(), expected.end()});

    auto prompt = render_prompt(plan.prompts.generation, {{"scene", plan.scene}, {"seed_words", join(plan.seed_words)}});
    ImageRef image = backends.image.generate_image(prompt);
    const auto extraction = render_prompt(plan.prompts.extraction, {{"seed_words", join(plan.seed_words)}});

    for (std::size_t attempt = 1;; ++attempt) {
        std::string extracted_text;
        try {
            auto extracted = backends.text.extract_seed_words(image, extraction);
            if (as_set(extracted) == expected) return {image, attempt};
            extracted_text = join(normalized(extracted));
        } catch (const Error& e) {
            if (e.code() != Errc::extraction_parse) throw;
            extracted_text = "(unreadable reply)";
        }
        if (attempt == plan.max_attempts_image) {
            throw ExhaustionError("image generation failed after " + std::to_string(attempt) + " attempts",
                                  snapshot(transcript));
        }
        auto feedback = render_prompt(plan.prompts.image_feedback, {{"expected", expected_text},
                                                                    {"extracted", extracted_text},
                                                                    {"seed_words", join(plan.seed_words)},
                                                                    {"scene", plan.scene}});
        auto update = backends.text.generate_text(&image, feedback, TextPurpose::image_feedback);
        image = backends.image.refine_image(image, update);
    }
}

CaptionResult run_caption_generation(const SessionPlan& plan, Backends backends, const ImageRef& image,
                                     const std::vector<std::string>& required, const SemanticPool& pool,
                                     const Transcript* transcript) {
    std::vector<std::string> forbidden;
    for (const auto& w : pool.words) {
        if (std::find(required.begin(), required.end(), w) == required.end()) forbidden.push_back(w);
    }
    const PromptBindings common{{"scene", plan.scene},
                                {"anchor", plan.anchor.text()},
                                {"codewords", join(required)},
                                {"forbidden", join(forbidden)}};
    const auto embedding = render_prompt(plan.prompts.embedding, common);

    std::string prompt = embedding;
    for (std::size_t attempt = 1;; ++attempt) {
        auto caption = backends.text.generate_text(&image, prompt, TextPurpose::caption);
        auto verdict = verify_caption(caption, required, plan.anchor, pool);
        if (verdict.passed()) return {caption, attempt};
        if (attempt == plan.max_attempts_caption) {
            throw ExhaustionError("caption generation failed after " + std::to_string(attempt) +
                                      " attempts: " + verdict.describe(),
                                  snapshot(transcript));
        }
        auto bindings = common;
        bindings["caption"] = caption;
        bindings["violations"] = verdict.describe();
        auto update = backends.text.generate_text(&image, render_prompt(plan.prompts.caption_feedback, bindings),
                                                  TextPurpose::caption_feedback);
        prompt = embedding + "\n" + update + "\n";
    }
}

DynamicCodebook session_codebook(const Dictionary& dict, const OrderedSeedWords& k_ord, const PresharedKey& psk,
                                 const AnchorSequence& anchor, SessionParams phi, const ExpansionWeights& weights) {
    phi.theta = derive_theta(psk, k_ord, anchor);
    return build_codebook(dict, k_ord, phi, weights, derive_session_seed(phi));
}

EmbedResult embed_pipeline(const SessionPlan& plan, const SecretMessage& message, const Dictionary& dict,
                           Backends backends) {
    plan.validate();
    if (message.tau() != plan.tau || message.chunk_bits() != plan.params.b) {
        throw Error(Errc::framing, "message is framed as " + std::to_string(message.tau()) + "x" +
                                       std::to_string(message.chunk_bits()) + " bits, session expects " +
                                       std::to_string(plan.tau) + "x" + std::to_string(plan.params.b));
    }

    auto k_ord = dict.order_seed_words(normalized(plan.seed_words));
    SessionParams phi = plan.params;
    phi.theta = derive_theta(plan.psk, k_ord, plan.anchor);
    SessionSeed seed = derive_session_seed(phi);
    SemanticPool pool = build_semantic_pool(dict, k_ord, phi.alpha, plan.weights);
    for (const auto& w : pool.words) {
        if (w.find(plan.anchor.text()) != std::string::npos) {
            throw Error(Errc::config, "anchor '" + plan.anchor.text() + "' occurs inside pool word '" + w + "'");
        }
    }
    DynamicCodebook cb = build_codebook(pool, phi, seed);
    EncodedMessage enc = encode_message(cb, message);

    Transcript transcript;
    RecordingBackend image_rec(backends.image, transcript);
    RecordingBackend text_rec(backends.text, transcript);
    Backends recorded{image_rec, text_rec};

    SessionPlan ordered = plan;
    ordered.seed_words = k_ord.words();
    auto img = run_image_generation(ordered, recorded, &transcript);
    auto cap = run_caption_generation(ordered, recorded, img.image, enc.codewords, pool, &transcript);

    StegoBundle bundle{img.image, cap.caption,   plan.anchor, enc.key, plan.tau, plan.params.b,
                       img.attempts, cap.attempts};
    return {std::move(bundle), transcript.entries()};
}

ExtractResult extract_pipeline(const StegoBundle& bundle, const PresharedKey& psk, const Dictionary& dict,
                               const SessionParams& phi, std::size_t tau, ModelBackend& backend,
                               const ExtractOptions& options) {
    if (bundle.key.tau() != tau || bundle.key.chunk_bits() != phi.b || bundle.tau != tau || bundle.b != phi.b) {
        throw Error(Errc::protocol, "bundle dimensions do not match the session (tau " + std::to_string(tau) +
                                        ", b " + std::to_string(phi.b) + ")");
    }
    for (std::size_t attempt = 1;; ++attempt) {
        try {
            auto words = backend.extract_seed_words(bundle.image, options.extraction_prompt);
            auto k_ord = dict.order_seed_words(normalized(words));
            auto cb = session_codebook(dict, k_ord, psk, bundle.anchor, phi, options.weights);
            std::vector<std::string> codewords;
            for (auto& t : tokenize_caption(bundle.caption, bundle.anchor.text())) {
                if (cb.contains(t)) codewords.push_back(std::move(t));
            }
            return {decode_message(cb, codewords, bundle.key), attempt, std::move(k_ord)};
        } catch (const Error& e) {
            switch (e.code()) {
            case Errc::unknown_word:
            case Errc::extraction_parse:
            case Errc::malformed_caption:
            case Errc::corruption:
            case Errc::pool_underflow:
                if (attempt <= options.retries) continue;
                [[fallthrough]];
            default: throw;
            }
        }
    }
}

} // namespace dyco
