#include "dyco/mapping.hpp"

#include "dyco/error.hpp"

#include <charconv>

namespace dyco {

namespace {

std::uint64_t low_bits(std::uint64_t v, unsigned b) { return b >= 64 ? v : (v & ((std::uint64_t{1} << b) - 1)); }

void check_width(unsigned b) {
    if (b < 1 || b > 62) throw Error(Errc::protocol, "chunk width must be in [1, 62]");
}

std::size_t hex_width(unsigned b) { return (b + 3) / 4; }

} // namespace

SecretMessage::SecretMessage(BitString bits, std::size_t tau, unsigned b) : bits_(std::move(bits)), tau_(tau), b_(b) {
    check_width(b);
    if (tau == 0) throw Error(Errc::framing, "tau must be at least 1");
    if (bits_.size() != tau * b) {
        throw Error(Errc::framing, "message has " + std::to_string(bits_.size()) + " bits, expected tau*b = " +
                                       std::to_string(tau * b));
    }
}

PrivateKeyS::PrivateKeyS(std::vector<BitString> masked_offsets, unsigned b) : masked_(std::move(masked_offsets)), b_(b) {
    check_width(b);
    for (const auto& m : masked_) {
        if (m.size() != b) throw Error(Errc::protocol, "masked offset width differs from b");
    }
}

std::string PrivateKeyS::to_text() const {
    std::string out = std::to_string(masked_.size()) + ":" + std::to_string(b_) + ":";
    for (const auto& m : masked_) out += bits_to_hex(m);
    return out;
}

PrivateKeyS PrivateKeyS::from_text(std::string_view text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
    auto c1 = text.find(':');
    auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw Error(Errc::format, "S key must look like <tau>:<b>:<hex>");
    auto parse_uint = [](std::string_view s, const char* what) {
        std::uint64_t v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw Error(Errc::format, std::string("S key: bad ") + what);
        }
        return v;
    };
    std::uint64_t tau = parse_uint(text.substr(0, c1), "tau");
    std::uint64_t b = parse_uint(text.substr(c1 + 1, c2 - c1 - 1), "b");
    if (tau == 0 || tau > 1u << 20) throw Error(Errc::format, "S key: tau out of range");
    if (b < 1 || b > 62) throw Error(Errc::format, "S key: b out of range");
    std::string_view hex = text.substr(c2 + 1);
    const std::size_t w = hex_width(static_cast<unsigned>(b));
    if (hex.size() != tau * w) {
        throw Error(Errc::format, "S key: expected " + std::to_string(tau * w) + " hex digits, got " +
                                      std::to_string(hex.size()));
    }
    std::vector<BitString> masked;
    for (std::size_t i = 0; i < tau; ++i) masked.push_back(hex_to_bits(hex.substr(i * w, w), b));
    return PrivateKeyS(std::move(masked), static_cast<unsigned>(b));
}

std::vector<std::uint64_t> split_message(const BitString& bits, unsigned b) {
    check_width(b);
    if (bits.empty() || bits.size() % b != 0) {
        throw Error(Errc::framing, "message length " + std::to_string(bits.size()) + " is not a positive multiple of " +
                                       std::to_string(b));
    }
    std::vector<std::uint64_t> chunks;
    for (std::size_t i = 0; i < bits.size(); i += b) chunks.push_back(bin2int(bits.substr(i, b)));
    return chunks;
}

std::vector<std::uint64_t> split_message(const SecretMessage& m) { return split_message(m.bits(), m.chunk_bits()); }

SecretMessage assemble_message(std::span<const std::uint64_t> chunks, unsigned b) {
    check_width(b);
    BitString bits;
    for (auto c : chunks) {
        if ((c >> b) != 0) throw Error(Errc::range, "chunk " + std::to_string(c) + " exceeds " + std::to_string(b) + " bits");
        bits += int2bin(c, b);
    }
    return SecretMessage(std::move(bits), chunks.size(), b);
}

ChunkEncoding encode_chunk(const DynamicCodebook& cb, std::uint64_t idx) {
    if (idx >= cb.space()) throw Error(Errc::range, "chunk index " + std::to_string(idx) + " outside the codebook");
    const CodebookEntry& e = cb.locate(idx);
    return ChunkEncoding{idx, e.word, e.lo, idx - e.lo};
}

std::uint64_t decode_chunk(const DynamicCodebook& cb, std::string_view codeword, std::uint64_t offset) {
    const CodebookEntry& e = cb.interval_of(codeword);
    if (offset >= e.length()) {
        throw Error(Errc::corruption, "offset " + std::to_string(offset) + " exceeds interval length " +
                                          std::to_string(e.length()) + " of '" + e.word + "'");
    }
    return e.lo + offset;
}

BitString chunk_mask(SessionSeed seed, std::size_t chunk_index, unsigned b) {
    check_width(b);
    std::uint64_t raw = chunk_index == 0
                            ? seed.value
                            : hash2int(canonical_serialize({seed.value, std::uint64_t{chunk_index}}));
    return int2bin(low_bits(raw, b), b);
}

BitString mask_offset(std::uint64_t offset, SessionSeed seed, std::size_t chunk_index, unsigned b) {
    return int2bin(offset, b) ^ chunk_mask(seed, chunk_index, b);
}

std::uint64_t unmask_offset(const BitString& masked, SessionSeed seed, std::size_t chunk_index, unsigned b) {
    if (masked.size() != b) throw Error(Errc::protocol, "masked offset width differs from b");
    return bin2int(masked ^ chunk_mask(seed, chunk_index, b));
}

EncodedMessage encode_message(const DynamicCodebook& cb, const SecretMessage& m) {
    if (m.chunk_bits() != cb.bits()) throw Error(Errc::framing, "message chunk width differs from codebook b");
    auto chunks = split_message(m);
    std::vector<std::string> words;
    std::vector<BitString> masked;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        ChunkEncoding enc = encode_chunk(cb, chunks[i]);
        words.push_back(enc.codeword);
        masked.push_back(mask_offset(enc.offset, cb.seed(), i, cb.bits()));
    }
    return EncodedMessage{std::move(words), PrivateKeyS(std::move(masked), cb.bits())};
}

SecretMessage decode_message(const DynamicCodebook& cb, std::span<const std::string> codewords,
                             const PrivateKeyS& key) {
    if (key.chunk_bits() != cb.bits()) throw Error(Errc::protocol, "S key width differs from codebook b");
    if (codewords.size() != key.tau()) {
        throw Error(Errc::malformed_caption, "caption carries " + std::to_string(codewords.size()) +
                                                 " codewords, S key expects " + std::to_string(key.tau()));
    }
    std::vector<std::uint64_t> chunks;
    for (std::size_t i = 0; i < codewords.size(); ++i) {
        std::uint64_t offset = unmask_offset(key.masked_offsets()[i], cb.seed(), i, cb.bits());
        chunks.push_back(decode_chunk(cb, codewords[i], offset));
    }
    return assemble_message(chunks, cb.bits());
}

} // namespace dyco
