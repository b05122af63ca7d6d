#ifndef DYCO_TESTS_ORACLES_HPP
#define DYCO_TESTS_ORACLES_HPP

// Test-only reference implementations. Each one deliberately avoids the
// library's code path (no indexes, no sorting shortcuts, extended precision).

#include "dyco/codebook.hpp"
#include "dyco/dictionary.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

inline bool has_token(const std::string& text, const std::string& word) {
    auto toks = dyco::normalize_tokens(text);
    return std::find(toks.begin(), toks.end(), word) != toks.end();
}

/// O(K * |D|) scan straight from the scoring rule.
inline dyco::ScoreMap naive_scores(const dyco::Dictionary& d, const dyco::OrderedSeedWords& k_ord,
                                   const dyco::ExpansionWeights& w) {
    const auto& seeds = k_ord.words();
    dyco::ScoreMap out;
    for (const auto& k : seeds) {
        const auto& ke = d.at(k);
        for (const auto& e : d.entries()) {
            if (std::find(seeds.begin(), seeds.end(), e.word) != seeds.end()) continue;
            double s = 0;
            if (has_token(e.definition, k)) s += w.lambda_rev;
            bool fwd = has_token(ke.definition, e.word);
            for (const auto& ex : ke.examples) fwd = fwd || has_token(ex, e.word);
            for (const auto& syn : ke.synonyms) fwd = fwd || has_token(syn, e.word);
            if (fwd) s += w.lambda_fwd;
            if (e.word.size() > k.size() && e.word.rfind(k, 0) == 0) s += w.lambda_pre;
            if (s != 0) out[e.word] += s;
        }
    }
    std::erase_if(out, [](const auto& kv) { return !(kv.second > 0.0); });
    return out;
}

/// Half-Gaussian rank probabilities evaluated with 50 decimal digits.
inline std::vector<double> half_gaussian(std::uint32_t alpha, double sigma) {
    using big = boost::multiprecision::cpp_dec_float_50;
    std::vector<big> q(alpha);
    big s = sigma;
    big total = 0;
    for (std::uint32_t j = 0; j < alpha; ++j) {
        big r = j;
        q[j] = boost::multiprecision::exp(-(r * r) / (2 * s * s));
        total += q[j];
    }
    std::vector<double> p(alpha);
    for (std::uint32_t j = 0; j < alpha; ++j) p[j] = static_cast<double>(q[j] / total);
    return p;
}

/// Largest remainder done one unit at a time: repeatedly hand a unit to the
/// first entry with the maximal remaining fraction, then repair zeros by
/// repeatedly scanning for the first maximal length.
inline std::vector<std::uint64_t> naive_quantize(const std::vector<long double>& p, unsigned b) {
    const std::uint64_t n = std::uint64_t{1} << b;
    std::vector<std::uint64_t> len;
    std::vector<long double> frac;
    std::vector<bool> bumped(p.size(), false);
    std::uint64_t total = 0;
    for (long double x : p) {
        long double raw = x * static_cast<long double>(n);
        auto f = static_cast<std::uint64_t>(std::floor(raw));
        len.push_back(f);
        frac.push_back(raw - static_cast<long double>(f));
        total += f;
    }
    while (total < n) {
        std::size_t best = p.size();
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (bumped[j]) continue;
            if (best == p.size() || frac[j] > frac[best]) best = j;
        }
        bumped[best] = true;
        ++len[best];
        ++total;
    }
    for (std::size_t j = 0; j < len.size(); ++j) {
        if (len[j] != 0) continue;
        std::size_t big = 0;
        for (std::size_t i = 1; i < len.size(); ++i) {
            if (len[i] > len[big]) big = i;
        }
        len[big] -= 1;
        len[j] = 1;
    }
    return len;
}

} // namespace oracle

#endif // DYCO_TESTS_ORACLES_HPP
