#ifndef DYCO_MAPPING_HPP
#define DYCO_MAPPING_HPP

#include "dyco/bits.hpp"
#include "dyco/codebook.hpp"
#include "dyco/protocol.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dyco {

/// tau chunks of b bits each.
class SecretMessage {
public:
    /// Throws Errc::framing when bits.size() != tau * b.
    SecretMessage(BitString bits, std::size_t tau, unsigned b);

    [[nodiscard]] const BitString& bits() const noexcept { return bits_; }
    [[nodiscard]] std::size_t tau() const noexcept { return tau_; }
    [[nodiscard]] unsigned chunk_bits() const noexcept { return b_; }

    friend bool operator==(const SecretMessage&, const SecretMessage&) = default;

private:
    BitString bits_;
    std::size_t tau_;
    unsigned b_;
};

struct ChunkEncoding {
    std::uint64_t index = 0;
    std::string codeword;
    std::uint64_t base = 0;
    std::uint64_t offset = 0;
};

/// Masked offsets, one b-bit string per chunk, in chunk order.
class PrivateKeyS {
public:
    PrivateKeyS(std::vector<BitString> masked_offsets, unsigned b);

    [[nodiscard]] const std::vector<BitString>& masked_offsets() const noexcept { return masked_; }
    [[nodiscard]] std::size_t tau() const noexcept { return masked_.size(); }
    [[nodiscard]] unsigned chunk_bits() const noexcept { return b_; }

    /// "<tau>:<b>:<hex...>", each offset as ceil(b/4) lowercase hex digits.
    [[nodiscard]] std::string to_text() const;
    /// Inverse of to_text. Throws Errc::format on malformed input.
    static PrivateKeyS from_text(std::string_view text);

    friend bool operator==(const PrivateKeyS&, const PrivateKeyS&) = default;

private:
    std::vector<BitString> masked_;
    unsigned b_;
};

/// Left-to-right b-bit chunks. Throws Errc::framing.
std::vector<std::uint64_t> split_message(const BitString& bits, unsigned b);
std::vector<std::uint64_t> split_message(const SecretMessage& m);

/// Throws Errc::range when a chunk does not fit in b bits.
SecretMessage assemble_message(std::span<const std::uint64_t> chunks, unsigned b);

/// Throws Errc::range when idx >= 2^b.
ChunkEncoding encode_chunk(const DynamicCodebook& cb, std::uint64_t idx);

/// lo(codeword) + offset. Throws Errc::corruption when offset falls outside
/// the codeword's interval, Errc::lookup for unknown codewords.
std::uint64_t decode_chunk(const DynamicCodebook& cb, std::string_view codeword, std::uint64_t offset);

/// Chunk 0: low b bits of the seed. Chunk i > 0: low b bits of
/// hash2int(serialize([seed, i])).
BitString chunk_mask(SessionSeed seed, std::size_t chunk_index, unsigned b);

BitString mask_offset(std::uint64_t offset, SessionSeed seed, std::size_t chunk_index, unsigned b);
std::uint64_t unmask_offset(const BitString& masked, SessionSeed seed, std::size_t chunk_index, unsigned b);

struct EncodedMessage {
    std::vector<std::string> codewords;
    PrivateKeyS key;
};

/// split -> encode -> mask for every chunk.
EncodedMessage encode_message(const DynamicCodebook& cb, const SecretMessage& m);

/// Inverse of encode_message given the codewords in caption order.
/// Throws Errc::malformed_caption when the codeword count differs from tau.
SecretMessage decode_message(const DynamicCodebook& cb, std::span<const std::string> codewords,
                             const PrivateKeyS& key);

} // namespace dyco

#endif // DYCO_MAPPING_HPP
