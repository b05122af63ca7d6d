#ifndef DYCO_PROTOCOL_HPP
#define DYCO_PROTOCOL_HPP

// Wire-protocol primitives both parties must reproduce bit-exactly:
// canonical serialization, SHA-256 hashing, splitmix64, and the session
// parameter/seed derivations.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dyco {

using Bytes = std::vector<std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

/// Strong wrapper for UTF-8 text fields (anchor, free text). Distinct from
/// Bytes so the serializer can render each kind canonically.
struct Text {
    std::string value;
};

using WordList = std::vector<std::string>;

/// One serializable field. Integers render as minimal decimal, reals with
/// six fractional digits, word lists joined by 0x1F, byte strings as
/// lowercase hex, text verbatim.
using Part = std::variant<std::uint64_t, double, WordList, Bytes, Text>;

inline constexpr char kPartSeparator = '\x1e';
inline constexpr char kListSeparator = '\x1f';

std::string canonical_serialize(std::span<const Part> parts);
std::string canonical_serialize(std::initializer_list<Part> parts);

/// Six fractional digits, round-half-even on the exact binary value.
std::string format_real(double value);

Digest sha256(std::string_view data);
std::string digest_hex(const Digest& d);

/// First 8 bytes of SHA-256(data), big-endian.
std::uint64_t hash2int(std::string_view data);

class PresharedKey {
public:
    explicit PresharedKey(Bytes bytes);
    static PresharedKey from_hex(std::string_view hex);

    [[nodiscard]] const Bytes& bytes() const noexcept { return bytes_; }

    friend bool operator==(const PresharedKey&, const PresharedKey&) = default;

    static constexpr std::size_t kMinLength = 16;

private:
    Bytes bytes_;
};

class AnchorSequence {
public:
    explicit AnchorSequence(std::string text);

    [[nodiscard]] const std::string& text() const noexcept { return text_; }

    friend bool operator==(const AnchorSequence&, const AnchorSequence&) = default;

private:
    std::string text_;
};

struct SessionParams {
    std::uint32_t alpha = 24;
    unsigned b = 28;
    double sigma = 2.5;
    Bytes theta;

    /// Throws Errc::config when an invariant does not hold.
    void validate() const;

    [[nodiscard]] std::uint64_t interval_space() const noexcept { return std::uint64_t{1} << b; }
};

struct SessionSeed {
    std::uint64_t value = 0;
    friend bool operator==(const SessionSeed&, const SessionSeed&) = default;
};

/// Distinct lowercase words, descending dictionary frequency, ties ascending.
/// Construction is done by Dictionary::order_seed_words; this type only
/// guarantees distinctness and shape.
class OrderedSeedWords {
public:
    OrderedSeedWords() = default;
    explicit OrderedSeedWords(WordList words);

    [[nodiscard]] const WordList& words() const noexcept { return words_; }
    [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }

    friend bool operator==(const OrderedSeedWords&, const OrderedSeedWords&) = default;

private:
    WordList words_;
};

Bytes derive_theta(const PresharedKey& psk, const OrderedSeedWords& k_ord,
                   const AnchorSequence& anchor);

SessionSeed derive_session_seed(const SessionParams& params);

/// splitmix64. The sequence is part of the protocol.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Fisher-Yates from n-1 down to 1 with j = next() mod (i+1).
std::vector<std::size_t> prng_permutation(std::size_t n, SessionSeed seed);

} // namespace dyco

#endif // DYCO_PROTOCOL_HPP
