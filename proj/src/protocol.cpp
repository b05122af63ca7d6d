#include "dyco/protocol.hpp"

#include "dyco/bits.hpp"
#include "dyco/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <memory>
#include <numeric>
#include <set>

namespace dyco {

namespace {

void check_field_text(std::string_view s, std::string_view what) {
    if (s.find(kPartSeparator) != std::string_view::npos ||
        s.find(kListSeparator) != std::string_view::npos) {
        throw Error(Errc::serialization, std::string(what) + " contains a reserved separator byte");
    }
}

struct PartRenderer {
    std::string& out;

    void operator()(std::uint64_t v) const { out += std::to_string(v); }
    void operator()(double v) const { out += format_real(v); }
    void operator()(const WordList& words) const {
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i) out.push_back(kListSeparator);
            check_field_text(words[i], "list element");
            out += words[i];
        }
    }
    void operator()(const Bytes& bytes) const { out += bytes_to_hex(bytes); }
    void operator()(const Text& text) const {
        check_field_text(text.value, "text field");
        out += text.value;
    }
};

} // namespace

std::string format_real(double value) {
    if (!std::isfinite(value)) throw Error(Errc::serialization, "non-finite real");
    if (value == 0.0) value = 0.0; // drop the sign of -0
    // to_chars is exact: it rounds the true binary value, so a decimal tie
    // can only occur on exactly representable halves and resolves to even.
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
    if (res.ec != std::errc{}) throw Error(Errc::serialization, "real out of range");
    std::string s(buf, res.ptr);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string canonical_serialize(std::span<const Part> parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(kPartSeparator);
        std::visit(PartRenderer{out}, parts[i]);
    }
    return out;
}

std::string canonical_serialize(std::initializer_list<Part> parts) {
    return canonical_serialize(std::span<const Part>(parts.begin(), parts.size()));
}

Digest sha256(std::string_view data) {
    Digest d{};
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), d.data(), &len) != 1 || len != d.size()) {
        throw Error(Errc::protocol, "SHA-256 computation failed");
    }
    return d;
}

std::string digest_hex(const Digest& d) { return bytes_to_hex(Bytes(d.begin(), d.end())); }

std::uint64_t hash2int(std::string_view data) {
    Digest d = sha256(data);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | d[static_cast<std::size_t>(i)];
    return v;
}

PresharedKey::PresharedKey(Bytes bytes) : bytes_(std::move(bytes)) {
    if (bytes_.size() < kMinLength) {
        throw Error(Errc::config, "pre-shared key must be at least 16 bytes, got " +
                                      std::to_string(bytes_.size()));
    }
}

PresharedKey PresharedKey::from_hex(std::string_view hex) {
    try {
        return PresharedKey(hex_to_bytes(hex));
    } catch (const Error& e) {
        if (e.code() == Errc::format) throw Error(Errc::config, std::string("psk: ") + e.what());
        throw;
    }
}

AnchorSequence::AnchorSequence(std::string text) : text_(std::move(text)) {
    bool all_space = std::all_of(text_.begin(), text_.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
    if (text_.empty() || all_space) throw Error(Errc::config, "anchor sequence must be non-blank");
}

void SessionParams::validate() const {
    if (alpha < 2) throw Error(Errc::config, "alpha must be >= 2");
    if (b < 1 || b > 62) throw Error(Errc::config, "b must be in [1, 62]");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(Errc::config, "sigma must be a positive finite real");
    if (static_cast<std::uint64_t>(alpha) > interval_space()) {
        throw Error(Errc::config, "alpha (" + std::to_string(alpha) + ") exceeds 2^b (" +
                                      std::to_string(interval_space()) + ")");
    }
}

OrderedSeedWords::OrderedSeedWords(WordList words) : words_(std::move(words)) {
    if (words_.empty()) throw Error(Errc::config, "seed word list is empty");
    std::set<std::string> seen;
    for (const auto& w : words_) {
        if (w.empty()) throw Error(Errc::config, "empty seed word");
        if (!seen.insert(w).second) throw Error(Errc::config, "duplicate seed word '" + w + "'");
    }
}

Bytes derive_theta(const PresharedKey& psk, const OrderedSeedWords& k_ord,
                   const AnchorSequence& anchor) {
    Digest d = sha256(canonical_serialize({psk.bytes(), k_ord.words(), Text{anchor.text()}}));
    return Bytes(d.begin(), d.end());
}

SessionSeed derive_session_seed(const SessionParams& params) {
    return SessionSeed{hash2int(canonical_serialize(
        {std::uint64_t{params.alpha}, std::uint64_t{params.b}, params.sigma,
         params.theta}))};
}

std::vector<std::size_t> prng_permutation(std::size_t n, SessionSeed seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    SplitMix64 rng(seed.value);
    for (std::size_t i = n > 0 ? n - 1 : 0; i >= 1; --i) {
        auto j = static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

} // namespace dyco
