#include "dyco/dictionary.hpp"

#include "dyco/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

namespace dyco {

namespace {

bool is_ascii_punct(unsigned char c) { return c < 0x80 && std::ispunct(c) != 0; }

std::string strip_punct(std::string_view token) {
    std::size_t lo = 0;
    std::size_t hi = token.size();
    while (lo < hi && is_ascii_punct(static_cast<unsigned char>(token[lo]))) ++lo;
    while (hi > lo && is_ascii_punct(static_cast<unsigned char>(token[hi - 1]))) --hi;
    return std::string(token.substr(lo, hi - lo));
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void validate_headword(const std::string& w) {
    if (w.empty()) throw Error(Errc::ingestion, "empty headword");
    for (unsigned char c : w) {
        if (std::isspace(c)) throw Error(Errc::ingestion, "headword '" + w + "' contains whitespace");
        if (std::isupper(c)) throw Error(Errc::ingestion, "headword '" + w + "' is not lowercase");
    }
}

} // namespace

std::vector<std::string> normalize_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) {
            std::string tok = strip_punct(lower(text.substr(start, i - start)));
            if (!tok.empty()) out.push_back(std::move(tok));
        }
    }
    return out;
}

std::string normalize_word(std::string_view word) {
    auto edge = [](unsigned char c) { return is_ascii_punct(c) || std::isspace(c); };
    std::size_t lo = 0;
    std::size_t hi = word.size();
    while (lo < hi && edge(static_cast<unsigned char>(word[lo]))) ++lo;
    while (hi > lo && edge(static_cast<unsigned char>(word[hi - 1]))) --hi;
    return lower(word.substr(lo, hi - lo));
}

Dictionary::Dictionary(std::vector<DictionaryEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const DictionaryEntry& a, const DictionaryEntry& b) { return a.word < b.word; });
    by_word_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        validate_headword(entries_[i].word);
        if (!by_word_.emplace(entries_[i].word, i).second) {
            throw Error(Errc::ingestion, "duplicate word '" + entries_[i].word + "'");
        }
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto tokens = normalize_tokens(entries_[i].definition);
        std::sort(tokens.begin(), tokens.end());
        tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
        for (auto& t : tokens) definition_index_[std::move(t)].push_back(i);
    }
}

bool Dictionary::contains(std::string_view word) const {
    return by_word_.find(std::string(word)) != by_word_.end();
}

const DictionaryEntry& Dictionary::at(std::string_view word) const {
    auto it = by_word_.find(std::string(word));
    if (it == by_word_.end()) throw Error(Errc::unknown_word, "'" + std::string(word) + "' is not in the dictionary");
    return entries_[it->second];
}

OrderedSeedWords Dictionary::order_seed_words(std::span<const std::string> seeds) const {
    std::vector<std::string> words(seeds.begin(), seeds.end());
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());

    std::string missing;
    for (const auto& w : words) {
        if (!contains(w)) missing += (missing.empty() ? "" : ", ") + w;
    }
    if (!missing.empty()) throw Error(Errc::unknown_word, "seed words not in dictionary: " + missing);

    std::stable_sort(words.begin(), words.end(), [this](const std::string& a, const std::string& b) {
        return frequency(a) > frequency(b);
    });
    return OrderedSeedWords(std::move(words));
}

WordSet Dictionary::reverse_definition_matches(std::string_view seed) const {
    WordSet out;
    auto it = definition_index_.find(std::string(seed));
    if (it == definition_index_.end()) return out;
    for (std::size_t i : it->second) {
        if (entries_[i].word != seed) out.insert(entries_[i].word);
    }
    return out;
}

WordSet Dictionary::forward_context_matches(std::string_view seed) const {
    const DictionaryEntry& e = at(seed);
    WordSet out;
    auto take = [&](std::string_view text) {
        for (auto& tok : normalize_tokens(text)) {
            if (tok != seed && contains(tok)) out.insert(std::move(tok));
        }
    };
    take(e.definition);
    for (const auto& ex : e.examples) take(ex);
    for (const auto& syn : e.synonyms) take(syn);
    return out;
}

WordSet Dictionary::prefix_matches(std::string_view seed) const {
    WordSet out;
    if (seed.empty()) return out;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), seed,
                               [](const DictionaryEntry& e, std::string_view s) { return e.word < s; });
    for (; it != entries_.end() && std::string_view(it->word).starts_with(seed); ++it) {
        if (it->word != seed) out.insert(it->word);
    }
    return out;
}

Dictionary load_dictionary(std::istream& in) {
    std::vector<DictionaryEntry> entries;
    std::string line;
    std::size_t lineno = 0;
    std::unordered_map<std::string, std::size_t> first_seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;

        auto fail = [&](const std::string& why) {
            return Error(Errc::parse, "line " + std::to_string(lineno) + ": " + why);
        };
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw fail(std::string("malformed record (") + e.what() + ")");
        }
        if (!rec.is_object()) throw fail("record is not an object");
        for (const char* key : {"word", "frequency", "definition", "examples", "synonyms"}) {
            if (!rec.contains(key)) throw fail(std::string("missing field '") + key + "'");
        }
        DictionaryEntry e;
        try {
            if (!rec["frequency"].is_number_integer() || rec["frequency"].get<std::int64_t>() < 0) {
                throw fail("frequency must be a non-negative integer");
            }
            e.word = rec["word"].get<std::string>();
            e.frequency = rec["frequency"].get<std::uint64_t>();
            e.definition = rec["definition"].get<std::string>();
            e.examples = rec["examples"].get<std::vector<std::string>>();
            e.synonyms = rec["synonyms"].get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& ex) {
            throw fail(std::string("bad field type (") + ex.what() + ")");
        }
        for (auto& s : e.synonyms) s = normalize_word(s);
        try {
            validate_headword(e.word);
        } catch (const Error& err) {
            throw Error(Errc::ingestion, "line " + std::to_string(lineno) + ": " + err.what());
        }
        auto [pos, fresh] = first_seen.emplace(e.word, lineno);
        if (!fresh) {
            throw Error(Errc::ingestion, "line " + std::to_string(lineno) + ": duplicate word '" + e.word +
                                             "' (first seen on line " + std::to_string(pos->second) + ")");
        }
        entries.push_back(std::move(e));
    }
    return Dictionary(std::move(entries));
}

Dictionary load_dictionary_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open dictionary '" + path.string() + "'");
    return load_dictionary(in);
}

} // namespace dyco
