#ifndef DYCO_DICTIONARY_HPP
#define DYCO_DICTIONARY_HPP

#include "dyco/protocol.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dyco {

using WordSet = std::set<std::string>;

/// Lowercase, split on whitespace, strip leading/trailing ASCII punctuation
/// from each token, drop tokens that end up empty.
std::vector<std::string> normalize_tokens(std::string_view text);

/// Lowercase plus punctuation strip for a single word.
std::string normalize_word(std::string_view word);

struct DictionaryEntry {
    std::string word;
    std::uint64_t frequency = 0;
    std::string definition;
    std::vector<std::string> examples;
    std::vector<std::string> synonyms;
};

/// Public word corpus. Immutable after construction.
class Dictionary {
public:
    /// Throws Errc::ingestion on duplicate or invalid headwords.
    explicit Dictionary(std::vector<DictionaryEntry> entries);

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool contains(std::string_view word) const;
    /// Throws Errc::unknown_word.
    [[nodiscard]] const DictionaryEntry& at(std::string_view word) const;
    [[nodiscard]] std::uint64_t frequency(std::string_view word) const { return at(word).frequency; }
    /// Entries sorted by headword.
    [[nodiscard]] std::span<const DictionaryEntry> entries() const noexcept { return entries_; }

    /// Descending frequency, ties ascending lexicographic. Duplicate inputs
    /// collapse. Throws Errc::unknown_word listing every missing seed.
    [[nodiscard]] OrderedSeedWords order_seed_words(std::span<const std::string> seeds) const;

    /// Headwords (other than seed) whose definition contains seed as a token.
    [[nodiscard]] WordSet reverse_definition_matches(std::string_view seed) const;

    /// Headwords (other than seed) appearing in seed's definition, examples or
    /// synonyms. Throws Errc::unknown_word if seed is not a headword.
    [[nodiscard]] WordSet forward_context_matches(std::string_view seed) const;

    /// Headwords having seed as a strict prefix.
    [[nodiscard]] WordSet prefix_matches(std::string_view seed) const;

private:
    std::vector<DictionaryEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_word_;
    std::unordered_map<std::string, std::vector<std::size_t>> definition_index_;
};

/// One JSON object per line: word, frequency, definition, examples, synonyms.
/// Blank lines are skipped. Errors carry the 1-based line number.
Dictionary load_dictionary(std::istream& in);
Dictionary load_dictionary_file(const std::filesystem::path& path);

} // namespace dyco

#endif // DYCO_DICTIONARY_HPP
