#ifndef DYCO_CODEBOOK_HPP
#define DYCO_CODEBOOK_HPP

// Session-specific dynamic codebook: seed expansion over the dictionary,
// selection into an alpha-word semantic pool, half-Gaussian rank shaping,
// seed-keyed reordering, and integer interval partition of [0, 2^b).

#include "dyco/dictionary.hpp"
#include "dyco/protocol.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dyco {

struct ExpansionWeights {
    double lambda_rev = 3.0;
    double lambda_fwd = 2.0;
    double lambda_pre = 1.0;

    /// Non-negative, at least one positive. Throws Errc::config.
    void validate() const;
};

using ScoreMap = std::map<std::string, double>;

/// alpha words: the K seeds first (in K_ord order), then the selected
/// candidates by descending frequency.
struct SemanticPool {
    std::vector<std::string> words;
    std::size_t seed_count = 0;

    [[nodiscard]] bool contains(std::string_view w) const;
};

/// p_1..p_alpha, positive, summing to one, non-increasing.
struct RankDistribution {
    std::vector<long double> probabilities;
};

struct WeightedWord {
    std::string word;
    long double probability = 0;
};

struct CodebookEntry {
    std::string word;
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    [[nodiscard]] std::uint64_t length() const noexcept { return hi - lo; }
    friend bool operator==(const CodebookEntry&, const CodebookEntry&) = default;
};

/// Words with contiguous non-empty intervals covering [0, 2^b). Never leaves
/// the process that built it.
class DynamicCodebook {
public:
    /// Validates the partition invariant; throws Errc::protocol on violation.
    DynamicCodebook(std::vector<CodebookEntry> entries, std::uint32_t alpha, unsigned b, double sigma,
                    SessionSeed seed);

    [[nodiscard]] std::span<const CodebookEntry> entries() const noexcept { return entries_; }
    [[nodiscard]] std::uint32_t alpha() const noexcept { return alpha_; }
    [[nodiscard]] unsigned bits() const noexcept { return b_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }
    [[nodiscard]] SessionSeed seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t space() const noexcept { return std::uint64_t{1} << b_; }

    [[nodiscard]] bool contains(std::string_view word) const;
    /// Throws Errc::lookup for unknown words.
    [[nodiscard]] const CodebookEntry& interval_of(std::string_view word) const;
    /// Entry with lo <= idx < hi. Throws Errc::lookup when idx >= 2^b.
    [[nodiscard]] const CodebookEntry& locate(std::uint64_t idx) const;

    /// Diagnostic JSON document: params echo plus ordered entries.
    [[nodiscard]] std::string to_json() const;

    friend bool operator==(const DynamicCodebook& a, const DynamicCodebook& b) {
        return a.entries_ == b.entries_ && a.alpha_ == b.alpha_ && a.b_ == b.b_ && a.sigma_ == b.sigma_ &&
               a.seed_ == b.seed_;
    }

private:
    std::vector<CodebookEntry> entries_;
    std::uint32_t alpha_;
    unsigned b_;
    double sigma_;
    SessionSeed seed_;
};

/// Summed route weights per non-seed headword; zero scores are omitted.
ScoreMap expand_seeds(const Dictionary& dict, const OrderedSeedWords& k_ord, const ExpansionWeights& weights);

/// Throws Errc::pool_underflow when fewer than alpha - K candidates scored.
SemanticPool select_and_rank(const ScoreMap& scores, const OrderedSeedWords& k_ord, std::uint32_t alpha,
                             const Dictionary& dict);

/// q_j = exp(-(j-1)^2 / (2 sigma^2)), normalized.
RankDistribution shape_probabilities(std::uint32_t alpha, double sigma);

/// Output position i holds input pair perm[i], perm = prng_permutation(alpha, seed).
std::vector<WeightedWord> apply_seed_ordering(const SemanticPool& pool, const RankDistribution& dist,
                                              SessionSeed seed);

/// Largest-remainder quantization of p * 2^b into integer interval lengths.
std::vector<std::uint64_t> quantize_lengths(std::span<const long double> probabilities, unsigned b);

DynamicCodebook build_intervals(std::span<const WeightedWord> pairs, unsigned b, double sigma = 0.0,
                                SessionSeed seed = {});

/// Seed expansion and selection only (the caption's forbidden vocabulary).
SemanticPool build_semantic_pool(const Dictionary& dict, const OrderedSeedWords& k_ord, std::uint32_t alpha,
                                 const ExpansionWeights& weights);

DynamicCodebook build_codebook(const Dictionary& dict, const OrderedSeedWords& k_ord, const SessionParams& params,
                               const ExpansionWeights& weights, SessionSeed seed);

/// Same, from an already selected pool.
DynamicCodebook build_codebook(const SemanticPool& pool, const SessionParams& params, SessionSeed seed);

} // namespace dyco

#endif // DYCO_CODEBOOK_HPP
