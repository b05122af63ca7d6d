#ifndef DYCO_BITS_HPP
#define DYCO_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dyco {

/// A string over {'0','1'}, most significant bit first.
class BitString {
public:
    BitString() = default;

    /// Throws Errc::format on any character outside {0,1}.
    explicit BitString(std::string bits);

    [[nodiscard]] const std::string& str() const noexcept { return bits_; }
    [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
    [[nodiscard]] bool empty() const noexcept { return bits_.empty(); }

    [[nodiscard]] BitString substr(std::size_t pos, std::size_t len) const;

    /// Bitwise XOR; widths must match (Errc::protocol otherwise).
    friend BitString operator^(const BitString& a, const BitString& b);

    friend bool operator==(const BitString&, const BitString&) = default;

    BitString& operator+=(const BitString& rhs) {
        bits_ += rhs.bits_;
        return *this;
    }

private:
    std::string bits_;
};

/// Fixed-width big-endian rendering. width in [1, 64].
BitString int2bin(std::uint64_t value, unsigned width);

/// Big-endian interpretation of at most 64 bits.
std::uint64_t bin2int(const BitString& bits);
std::uint64_t bin2int(std::string_view bits);

/// Lowercase hex of the bits, left-padded with zero bits to a multiple of 4.
std::string bits_to_hex(const BitString& bits);

/// Parses hex and keeps the low bit_length bits. Rejects non-zero bits above
/// bit_length.
BitString hex_to_bits(std::string_view hex, std::size_t bit_length);

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> hex_to_bytes(std::string_view hex);

} // namespace dyco

#endif // DYCO_BITS_HPP
