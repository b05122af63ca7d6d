#include "dyco/codebook.hpp"

#include "dyco/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace dyco {

void ExpansionWeights::validate() const {
    for (double w : {lambda_rev, lambda_fwd, lambda_pre}) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::config, "expansion weights must be finite and >= 0");
    }
    if (lambda_rev <= 0.0 && lambda_fwd <= 0.0 && lambda_pre <= 0.0) {
        throw Error(Errc::config, "at least one expansion weight must be positive");
    }
}

bool SemanticPool::contains(std::string_view w) const {
    return std::find(words.begin(), words.end(), w) != words.end();
}

DynamicCodebook::DynamicCodebook(std::vector<CodebookEntry> entries, std::uint32_t alpha, unsigned b, double sigma,
                                 SessionSeed seed)
    : entries_(std::move(entries)), alpha_(alpha), b_(b), sigma_(sigma), seed_(seed) {
    if (b_ < 1 || b_ > 62) throw Error(Errc::protocol, "codebook bit width out of range");
    if (entries_.size() != alpha_) throw Error(Errc::protocol, "codebook size does not match alpha");
    std::uint64_t cursor = 0;
    std::set<std::string_view> seen;
    for (const auto& e : entries_) {
        if (e.lo != cursor) throw Error(Errc::protocol, "codebook intervals are not contiguous");
        if (e.hi <= e.lo) throw Error(Errc::protocol, "empty interval for '" + e.word + "'");
        if (!seen.insert(e.word).second) throw Error(Errc::protocol, "duplicate codebook word '" + e.word + "'");
        cursor = e.hi;
    }
    if (cursor != space()) throw Error(Errc::protocol, "codebook intervals do not cover [0, 2^b)");
}

bool DynamicCodebook::contains(std::string_view word) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const CodebookEntry& e) { return e.word == word; });
}

const CodebookEntry& DynamicCodebook::interval_of(std::string_view word) const {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const CodebookEntry& e) { return e.word == word; });
    if (it == entries_.end()) throw Error(Errc::lookup, "'" + std::string(word) + "' is not a codeword");
    return *it;
}

const CodebookEntry& DynamicCodebook::locate(std::uint64_t idx) const {
    if (idx >= space()) {
        throw Error(Errc::lookup, "index " + std::to_string(idx) + " outside [0, 2^" + std::to_string(b_) + ")");
    }
    auto it = std::upper_bound(entries_.begin(), entries_.end(), idx,
                               [](std::uint64_t v, const CodebookEntry& e) { return v < e.hi; });
    return *it;
}

std::string DynamicCodebook::to_json() const {
    nlohmann::ordered_json doc;
    doc["alpha"] = alpha_;
    doc["b"] = b_;
    doc["sigma"] = format_real(sigma_);
    doc["seed"] = seed_.value;
    auto& arr = doc["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : entries_) arr.push_back({{"word", e.word}, {"lo", e.lo}, {"hi", e.hi}});
    return doc.dump(2) + "\n";
}

ScoreMap expand_seeds(const Dictionary& dict, const OrderedSeedWords& k_ord, const ExpansionWeights& weights) {
    const auto& seeds = k_ord.words();
    std::set<std::string_view> seed_set(seeds.begin(), seeds.end());
    ScoreMap scores;
    auto credit = [&](const WordSet& words, double weight) {
        for (const auto& w : words) {
            if (!seed_set.contains(w)) scores[w] += weight;
        }
    };
    for (const auto& k : seeds) {
        credit(dict.reverse_definition_matches(k), weights.lambda_rev);
        credit(dict.forward_context_matches(k), weights.lambda_fwd);
        credit(dict.prefix_matches(k), weights.lambda_pre);
    }
    std::erase_if(scores, [](const auto& kv) { return !(kv.second > 0.0); });
    return scores;
}

SemanticPool select_and_rank(const ScoreMap& scores, const OrderedSeedWords& k_ord, std::uint32_t alpha,
                             const Dictionary& dict) {
    const std::size_t k = k_ord.size();
    if (k > alpha) {
        throw Error(Errc::config, "alpha (" + std::to_string(alpha) + ") is smaller than the seed count (" +
                                      std::to_string(k) + ")");
    }
    const std::size_t need = alpha - k;

    struct Candidate {
        const std::string* word;
        double score;
        std::uint64_t freq;
    };
    std::vector<Candidate> cands;
    cands.reserve(scores.size());
    for (const auto& [w, s] : scores) {
        if (std::find(k_ord.words().begin(), k_ord.words().end(), w) != k_ord.words().end()) continue;
        cands.push_back({&w, s, dict.frequency(w)});
    }
    if (cands.size() < need) {
        throw Error(Errc::pool_underflow, "need " + std::to_string(need) + " candidates, found " +
                                              std::to_string(cands.size()) + " (shortfall " +
                                              std::to_string(need - cands.size()) + ")");
    }
    auto by_frequency = [](const Candidate& a, const Candidate& b) {
        if (a.freq != b.freq) return a.freq > b.freq;
        return *a.word < *b.word;
    };
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(need), cands.end(),
                      [&](const Candidate& a, const Candidate& b) {
                          if (a.score != b.score) return a.score > b.score;
                          return by_frequency(a, b);
                      });
    cands.resize(need);
    std::sort(cands.begin(), cands.end(), by_frequency);

    SemanticPool pool;
    pool.seed_count = k;
    pool.words = k_ord.words();
    for (const auto& c : cands) pool.words.push_back(*c.word);
    return pool;
}

RankDistribution shape_probabilities(std::uint32_t alpha, double sigma) {
    if (alpha < 1) throw Error(Errc::domain, "alpha must be positive");
    if (!(sigma > 0.0)) throw Error(Errc::domain, "sigma must be positive");
    const long double two_sigma_sq = 2.0L * static_cast<long double>(sigma) * static_cast<long double>(sigma);
    RankDistribution dist;
    dist.probabilities.resize(alpha);
    long double total = 0;
    for (std::uint32_t j = 0; j < alpha; ++j) {
        long double r = j;
        dist.probabilities[j] = std::exp(-(r * r) / two_sigma_sq);
        total += dist.probabilities[j];
    }
    for (auto& p : dist.probabilities) p /= total;
    return dist;
}

std::vector<WeightedWord> apply_seed_ordering(const SemanticPool& pool, const RankDistribution& dist,
                                              SessionSeed seed) {
    if (pool.words.size() != dist.probabilities.size()) {
        throw Error(Errc::protocol, "pool has " + std::to_string(pool.words.size()) + " words but distribution has " +
                                        std::to_string(dist.probabilities.size()) + " entries");
    }
    auto perm = prng_permutation(pool.words.size(), seed);
    std::vector<WeightedWord> out;
    out.reserve(perm.size());
    for (std::size_t src : perm) out.push_back({pool.words[src], dist.probabilities[src]});
    return out;
}

std::vector<std::uint64_t> quantize_lengths(std::span<const long double> probabilities, unsigned b) {
    if (b < 1 || b > 62) throw Error(Errc::capacity, "bit width must be in [1, 62]");
    const std::uint64_t n = std::uint64_t{1} << b;
    const std::size_t alpha = probabilities.size();
    if (alpha == 0) throw Error(Errc::protocol, "empty distribution");
    if (alpha > n) {
        throw Error(Errc::capacity, std::to_string(alpha) + " words cannot share 2^" + std::to_string(b) + " slots");
    }
    long double sum = 0;
    for (long double p : probabilities) {
        if (!(p >= 0.0L)) throw Error(Errc::protocol, "negative or NaN probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0L) > 1e-9L) throw Error(Errc::protocol, "probabilities do not sum to one");

    std::vector<std::uint64_t> len(alpha);
    std::vector<long double> frac(alpha);
    std::int64_t assigned = 0;
    for (std::size_t j = 0; j < alpha; ++j) {
        long double raw = probabilities[j] * static_cast<long double>(n);
        long double fl = std::floor(raw);
        len[j] = static_cast<std::uint64_t>(fl);
        frac[j] = raw - fl;
        assigned += static_cast<std::int64_t>(len[j]);
    }
    std::int64_t deficit = static_cast<std::int64_t>(n) - assigned;

    std::vector<std::size_t> order(alpha);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (deficit > 0) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return frac[a] > frac[c]; });
        for (std::size_t i = 0; deficit > 0; i = (i + 1) % alpha, --deficit) ++len[order[i]];
    } else if (deficit < 0) {
        // Only reachable for large b, where sum(p) > 1 by rounding.
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
            if (frac[a] != frac[c]) return frac[a] < frac[c];
            return a > c;
        });
        for (std::size_t i = 0; deficit < 0; i = (i + 1) % alpha) {
            if (len[order[i]] > 0) {
                --len[order[i]];
                ++deficit;
            }
        }
    }

    for (std::size_t j = 0; j < alpha; ++j) {
        if (len[j] != 0) continue;
        auto donor = static_cast<std::size_t>(std::max_element(len.begin(), len.end()) - len.begin());
        --len[donor];
        len[j] = 1;
    }
    return len;
}

DynamicCodebook build_intervals(std::span<const WeightedWord> pairs, unsigned b, double sigma, SessionSeed seed) {
    std::vector<long double> probs;
    probs.reserve(pairs.size());
    for (const auto& p : pairs) probs.push_back(p.probability);
    auto len = quantize_lengths(probs, b);

    std::vector<CodebookEntry> entries;
    entries.reserve(pairs.size());
    std::uint64_t cursor = 0;
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        entries.push_back({pairs[j].word, cursor, cursor + len[j]});
        cursor += len[j];
    }
    return DynamicCodebook(std::move(entries), static_cast<std::uint32_t>(pairs.size()), b, sigma, seed);
}

SemanticPool build_semantic_pool(const Dictionary& dict, const OrderedSeedWords& k_ord, std::uint32_t alpha,
                                 const ExpansionWeights& weights) {
    weights.validate();
    return select_and_rank(expand_seeds(dict, k_ord, weights), k_ord, alpha, dict);
}

DynamicCodebook build_codebook(const Dictionary& dict, const OrderedSeedWords& k_ord, const SessionParams& params,
                               const ExpansionWeights& weights, SessionSeed seed) {
    params.validate();
    return build_codebook(build_semantic_pool(dict, k_ord, params.alpha, weights), params, seed);
}

DynamicCodebook build_codebook(const SemanticPool& pool, const SessionParams& params, SessionSeed seed) {
    params.validate();
    RankDistribution dist = shape_probabilities(params.alpha, params.sigma);
    auto pairs = apply_seed_ordering(pool, dist, seed);
    return build_intervals(pairs, params.b, params.sigma, seed);
}

} // namespace dyco
