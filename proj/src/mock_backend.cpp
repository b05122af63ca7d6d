#include "dyco/mock_backend.hpp"

#include "dyco/dictionary.hpp"
#include "dyco/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace dyco {

std::string_view to_string(ViolationKind k) noexcept {
    switch (k) {
    case ViolationKind::missing_codeword: return "missing_codeword";
    case ViolationKind::wrong_order: return "wrong_order";
    case ViolationKind::wrong_multiplicity: return "wrong_multiplicity";
    case ViolationKind::missing_anchor: return "missing_anchor";
    case ViolationKind::forbidden_word: return "forbidden_word";
    }
    return "violation";
}

ViolationKind violation_from_string(std::string_view s) {
    for (auto k : {ViolationKind::missing_codeword, ViolationKind::wrong_order, ViolationKind::wrong_multiplicity,
                   ViolationKind::missing_anchor, ViolationKind::forbidden_word}) {
        if (to_string(k) == s) return k;
    }
    throw Error(Errc::config, "unknown violation kind '" + std::string(s) + "'");
}

namespace {

std::vector<std::string> normalized_list(const nlohmann::json& j) {
    std::vector<std::string> out;
    for (const auto& w : j.get<std::vector<std::string>>()) out.push_back(normalize_word(w));
    return out;
}

ImageStep image_step(const nlohmann::json& j) {
    ImageStep s;
    if (auto it = j.find("drop"); it != j.end()) {
        if (it->is_number_integer()) {
            if (it->get<long long>() < 0) throw Error(Errc::config, "drop count must be non-negative");
            s.drop_count = it->get<std::size_t>();
        } else {
            s.drop_words = normalized_list(*it);
        }
    }
    return s;
}

ExtractStep extract_step(const nlohmann::json& j) {
    ExtractStep s;
    if (j.contains("miss")) s.miss = normalized_list(j["miss"]);
    if (j.contains("spurious")) s.spurious = normalized_list(j["spurious"]);
    return s;
}

CaptionStep caption_step(const nlohmann::json& j) {
    CaptionStep s;
    if (j.contains("violate") && !j["violate"].is_null()) {
        s.violate = violation_from_string(j["violate"].get<std::string>());
    }
    return s;
}

template <class Step, class F>
std::vector<Step> steps(const nlohmann::json& j, const char* key, F parse) {
    std::vector<Step> out;
    if (j.contains(key)) {
        for (const auto& e : j.at(key)) out.push_back(parse(e));
    }
    return out;
}

template <class Step>
const Step& step_at(const std::vector<Step>& list, const Step& fallback, std::size_t call) {
    return call <= list.size() ? list[call - 1] : fallback;
}

// Value of the first "Key: ..." line, or nullopt.
std::optional<std::string> prompt_line(const std::string& prompt, std::string_view key) {
    std::istringstream in(prompt);
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() >= key.size() && std::equal(key.begin(), key.end(), line.begin(), [](char a, char b) {
                return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
            })) {
            auto value = line.substr(key.size());
            auto first = value.find_first_not_of(' ');
            return first == std::string::npos ? std::string() : value.substr(first);
        }
    }
    return std::nullopt;
}

std::vector<std::string> comma_list(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto w = normalize_word(item);
        if (!w.empty()) out.push_back(w);
    }
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& w) {
    return std::find(v.begin(), v.end(), w) != v.end();
}

} // namespace

FailureSchedule FailureSchedule::from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw Error(Errc::config, "mock schedule must be a JSON object");
        FailureSchedule s;
        s.image = steps<ImageStep>(j, "image", image_step);
        s.extract = steps<ExtractStep>(j, "extract", extract_step);
        s.caption = steps<CaptionStep>(j, "caption", caption_step);
        if (j.contains("default_image")) s.default_image = image_step(j["default_image"]);
        if (j.contains("default_extract")) s.default_extract = extract_step(j["default_extract"]);
        if (j.contains("default_caption")) s.default_caption = caption_step(j["default_caption"]);
        if (j.contains("distractors")) s.distractors = normalized_list(j["distractors"]);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::config, std::string("mock schedule: ") + e.what());
    }
}

FailureSchedule FailureSchedule::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open mock schedule " + path);
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::config, "mock schedule " + path + ": " + e.what());
    }
}

MockBackend::MockBackend(FailureSchedule schedule, std::string id_prefix)
    : schedule_(std::move(schedule)), id_prefix_(std::move(id_prefix)) {}

MockBackend::Counters MockBackend::counters() const {
    std::lock_guard lock(mu_);
    return counters_;
}

ImageRef MockBackend::draw(std::vector<std::string> intended) {
    std::lock_guard lock(mu_);
    std::size_t call = ++counters_.images;
    const auto& step = step_at(schedule_.image, schedule_.default_image, call);

    MockScene scene;
    scene.intended = intended;
    std::size_t keep = intended.size() - std::min(step.drop_count, intended.size());
    for (std::size_t i = 0; i < keep; ++i) {
        if (!contains(step.drop_words, intended[i])) scene.depicted.push_back(intended[i]);
    }
    scene.distractors = schedule_.distractors;
    return ImageRef{id_prefix_ + std::to_string(call), "", std::move(scene)};
}

ImageRef MockBackend::generate_image(const std::string& prompt) {
    auto objects = prompt_line(prompt, "Objects:");
    if (!objects) throw Error(Errc::backend_fatal, "mock image prompt has no 'Objects:' line");
    auto intended = comma_list(*objects);
    if (intended.empty()) throw Error(Errc::backend_fatal, "mock image prompt lists no objects");
    return draw(std::move(intended));
}

ImageRef MockBackend::refine_image(const ImageRef& image, const std::string& update_prompt) {
    if (!image.scene) throw Error(Errc::backend_fatal, "mock cannot refine a non-mock image");
    if (update_prompt.empty()) throw Error(Errc::backend_fatal, "empty update prompt");
    return draw(image.scene->intended);
}

std::vector<std::string> MockBackend::extract_seed_words(const ImageRef& image, const std::string& prompt) {
    if (!image.scene) throw Error(Errc::backend_fatal, "mock cannot read a non-mock image");
    if (prompt.empty()) throw Error(Errc::backend_fatal, "empty extraction prompt");
    std::lock_guard lock(mu_);
    std::size_t call = ++counters_.extractions;
    const auto& step = step_at(schedule_.extract, schedule_.default_extract, call);

    std::vector<std::string> words;
    for (const auto& w : image.scene->depicted) {
        if (!contains(step.miss, w)) words.push_back(w);
    }
    for (const auto& w : step.spurious) {
        if (!contains(words, w)) words.push_back(w);
    }
    if (words.empty()) throw Error(Errc::extraction_parse, "mock recognised nothing");
    return words;
}

std::string compose_mock_caption(const std::vector<std::string>& codewords, const std::string& anchor,
                                 const std::vector<std::string>& forbidden, std::optional<ViolationKind> violate) {
    std::vector<std::string> cw = codewords;
    bool with_anchor = true;
    std::string extra;
    if (violate) {
        switch (*violate) {
        case ViolationKind::missing_codeword:
            if (!cw.empty()) cw.erase(cw.begin());
            break;
        case ViolationKind::wrong_order:
            if (cw.size() > 1) std::rotate(cw.begin(), cw.begin() + 1, cw.end());
            break;
        case ViolationKind::wrong_multiplicity:
            if (!cw.empty()) cw.insert(cw.begin(), cw.front());
            break;
        case ViolationKind::missing_anchor: with_anchor = false; break;
        case ViolationKind::forbidden_word:
            if (!forbidden.empty()) extra = forbidden.front();
            break;
        }
    }

    std::set<std::string> banned(forbidden.begin(), forbidden.end());
    banned.insert(codewords.begin(), codewords.end());
    auto usable = [&](const char* w) { return !banned.count(w); };

    static constexpr const char* opener[] = {"Caught", "this", "moment", "with"};
    static constexpr const char* joiners[] = {"and", "near", "the", "beside", "then", "a", "under", "soft"};

    std::string out;
    auto put = [&](const std::string& w) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    };
    for (const char* w : opener) {
        std::string lw(w);
        lw[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(lw[0])));
        if (usable(lw.c_str())) put(w);
    }
    for (std::size_t i = 0; i < cw.size(); ++i) {
        if (i > 0) {
            const char* j = joiners[(i - 1) % std::size(joiners)];
            if (usable(j)) put(j);
        }
        put(cw[i]);
    }
    if (!extra.empty()) put(extra);
    if (usable("today")) put("today");
    if (with_anchor && !anchor.empty()) put(anchor);
    return out;
}

std::string MockBackend::generate_text(const ImageRef* image, const std::string& prompt, TextPurpose purpose) {
    if (prompt.empty()) throw Error(Errc::backend_fatal, "empty prompt");
    std::lock_guard lock(mu_);
    switch (purpose) {
    case TextPurpose::image_feedback: {
        ++counters_.feedback;
        std::string expected = prompt_line(prompt, "The image was supposed to show exactly these objects:")
                                   .value_or("the requested objects");
        return "Edit the image so that exactly these objects are clearly visible: " + expected;
    }
    case TextPurpose::caption_feedback: {
        ++counters_.feedback;
        return "Rewrite the caption and fix: " + prompt_line(prompt, "Problems:").value_or("the listed problems");
    }
    case TextPurpose::caption: break;
    }

    if (image == nullptr) throw Error(Errc::backend_fatal, "mock caption request without an image");
    auto codewords = prompt_line(prompt, "Codewords:");
    auto anchor = prompt_line(prompt, "Anchor:");
    if (!codewords || !anchor) throw Error(Errc::backend_fatal, "mock caption prompt lacks Codewords/Anchor lines");
    std::size_t call = ++counters_.captions;
    const auto& step = step_at(schedule_.caption, schedule_.default_caption, call);
    auto forbidden = comma_list(prompt_line(prompt, "Forbidden:").value_or(""));
    return compose_mock_caption(comma_list(*codewords), *anchor, forbidden, step.violate);
}

} // namespace dyco
