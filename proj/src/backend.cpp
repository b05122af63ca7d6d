#include "dyco/backend.hpp"

#include "dyco/dictionary.hpp"
#include "dyco/error.hpp"

#include <algorithm>
#include <cctype>

namespace dyco {

nlohmann::ordered_json ImageRef::to_json() const {
    nlohmann::ordered_json j;
    j["id"] = id;
    if (scene) {
        j["kind"] = "mock";
        j["scene"] = {{"intended", scene->intended},
                      {"depicted", scene->depicted},
                      {"distractors", scene->distractors}};
    } else {
        j["kind"] = "file";
        j["path"] = path;
    }
    return j;
}

ImageRef ImageRef::from_json(const nlohmann::json& j) {
    try {
        ImageRef ref;
        ref.id = j.at("id").get<std::string>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "mock") {
            const auto& s = j.at("scene");
            ref.scene = MockScene{s.at("intended").get<std::vector<std::string>>(),
                                  s.at("depicted").get<std::vector<std::string>>(),
                                  s.at("distractors").get<std::vector<std::string>>()};
        } else if (kind == "file") {
            ref.path = j.at("path").get<std::string>();
        } else {
            throw Error(Errc::format, "unknown image kind '" + kind + "'");
        }
        return ref;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::format, std::string("image reference: ") + e.what());
    }
}

std::string_view to_string(TextPurpose p) noexcept {
    switch (p) {
    case TextPurpose::caption: return "caption";
    case TextPurpose::caption_feedback: return "caption_feedback";
    case TextPurpose::image_feedback: return "image_feedback";
    }
    return "text";
}

std::vector<std::string> parse_word_list_reply(std::string_view reply) {
    std::string lowered(reply);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto pos = lowered.find("words:");
    if (pos == std::string::npos) {
        throw Error(Errc::extraction_parse, "reply has no 'words:' line");
    }
    auto start = pos + 6;
    auto end = lowered.find('\n', start);
    std::string_view list = std::string_view(lowered).substr(start, end == std::string::npos ? end : end - start);

    std::vector<std::string> words;
    std::size_t i = 0;
    while (i <= list.size()) {
        auto comma = list.find(',', i);
        auto item = list.substr(i, comma == std::string_view::npos ? std::string_view::npos : comma - i);
        for (auto& tok : normalize_tokens(item)) {
            if (std::find(words.begin(), words.end(), tok) == words.end()) words.push_back(std::move(tok));
        }
        if (comma == std::string_view::npos) break;
        i = comma + 1;
    }
    if (words.empty()) throw Error(Errc::extraction_parse, "reply word list is empty");
    return words;
}

void Transcript::append(TranscriptEntry e) {
    std::lock_guard lock(mu_);
    entries_.push_back(std::move(e));
}

std::vector<TranscriptEntry> Transcript::entries() const {
    std::lock_guard lock(mu_);
    return entries_;
}

std::size_t Transcript::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

std::string Transcript::to_json() const {
    std::lock_guard lock(mu_);
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        arr.push_back({{"seq", i + 1},
                       {"op", e.op},
                       {"purpose", e.purpose},
                       {"image", e.image_id},
                       {"prompt", e.prompt},
                       {"response", e.response}});
    }
    return arr.dump(2) + "\n";
}

namespace {

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) out += (i ? ", " : "") + words[i];
    return out;
}

template <class F>
auto recorded(Transcript& t, TranscriptEntry entry, F&& call, std::string (*render)(const decltype(call())&)) {
    try {
        auto result = call();
        entry.response = render(result);
        t.append(std::move(entry));
        return result;
    } catch (const std::exception& e) {
        entry.response = std::string("ERROR ") + e.what();
        t.append(std::move(entry));
        throw;
    }
}

std::string render_image(const ImageRef& r) { return r.to_json().dump(); }
std::string render_words(const std::vector<std::string>& w) { return "words: " + join(w); }
std::string render_text(const std::string& s) { return s; }

} // namespace

ImageRef RecordingBackend::generate_image(const std::string& prompt) {
    return recorded(transcript_, {"generate_image", "", "", prompt, ""},
                    [&] { return inner_.generate_image(prompt); }, render_image);
}

ImageRef RecordingBackend::refine_image(const ImageRef& image, const std::string& update_prompt) {
    return recorded(transcript_, {"refine_image", "", image.id, update_prompt, ""},
                    [&] { return inner_.refine_image(image, update_prompt); }, render_image);
}

std::vector<std::string> RecordingBackend::extract_seed_words(const ImageRef& image, const std::string& prompt) {
    return recorded(transcript_, {"extract_seed_words", "", image.id, prompt, ""},
                    [&] { return inner_.extract_seed_words(image, prompt); }, render_words);
}

std::string RecordingBackend::generate_text(const ImageRef* image, const std::string& prompt, TextPurpose purpose) {
    return recorded(transcript_,
                    {"generate_text", std::string(to_string(purpose)), image ? image->id : std::string(), prompt, ""},
                    [&] { return inner_.generate_text(image, prompt, purpose); }, render_text);
}

} // namespace dyco
