#include "dyco/bits.hpp"

#include "dyco/error.hpp"

#include <algorithm>

namespace dyco {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

} // namespace

BitString::BitString(std::string bits) : bits_(std::move(bits)) {
    auto bad = std::find_if(bits_.begin(), bits_.end(), [](char c) { return c != '0' && c != '1'; });
    if (bad != bits_.end()) {
        throw Error(Errc::format, "invalid bit character at position " +
                                      std::to_string(bad - bits_.begin()));
    }
}

BitString BitString::substr(std::size_t pos, std::size_t len) const {
    BitString out;
    out.bits_ = bits_.substr(pos, len);
    return out;
}

BitString operator^(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) {
        throw Error(Errc::protocol, "xor width mismatch (" + std::to_string(a.size()) + " vs " +
                                        std::to_string(b.size()) + ")");
    }
    BitString out;
    out.bits_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.bits_[i] = (a.bits_[i] == b.bits_[i]) ? '0' : '1';
    }
    return out;
}

BitString int2bin(std::uint64_t value, unsigned width) {
    if (width == 0 || width > 64) {
        throw Error(Errc::overflow, "bit width must be in [1, 64], got " + std::to_string(width));
    }
    if (width < 64 && (value >> width) != 0) {
        throw Error(Errc::overflow, std::to_string(value) + " does not fit in " +
                                        std::to_string(width) + " bits");
    }
    std::string s(width, '0');
    for (unsigned i = 0; i < width; ++i) {
        if ((value >> i) & 1U) s[width - 1 - i] = '1';
    }
    return BitString(std::move(s));
}

std::uint64_t bin2int(std::string_view bits) {
    if (bits.empty()) throw Error(Errc::format, "empty bit string");
    if (bits.size() > 64) throw Error(Errc::overflow, "bit string longer than 64 bits");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        char c = bits[i];
        if (c != '0' && c != '1') {
            throw Error(Errc::format, "invalid bit character at position " + std::to_string(i));
        }
        v = (v << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

std::uint64_t bin2int(const BitString& bits) { return bin2int(std::string_view(bits.str())); }

std::string bits_to_hex(const BitString& bits) {
    const std::string& s = bits.str();
    std::size_t pad = (4 - s.size() % 4) % 4;
    std::string padded = std::string(pad, '0') + s;
    std::string out;
    out.reserve(padded.size() / 4);
    for (std::size_t i = 0; i < padded.size(); i += 4) {
        int nibble = 0;
        for (std::size_t k = 0; k < 4; ++k) nibble = (nibble << 1) | (padded[i + k] - '0');
        out.push_back(kHexDigits[nibble]);
    }
    return out;
}

BitString hex_to_bits(std::string_view hex, std::size_t bit_length) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.empty()) throw Error(Errc::format, "empty hex string");
    std::string all;
    all.reserve(hex.size() * 4);
    for (char c : hex) {
        int v = hex_value(c);
        if (v < 0) throw Error(Errc::format, std::string("invalid hex character '") + c + "'");
        for (int k = 3; k >= 0; --k) all.push_back(((v >> k) & 1) ? '1' : '0');
    }
    if (bit_length > all.size()) {
        throw Error(Errc::format, "hex string carries " + std::to_string(all.size()) +
                                      " bits, fewer than bit length " + std::to_string(bit_length));
    }
    std::size_t excess = all.size() - bit_length;
    if (all.find('1') < excess) {
        throw Error(Errc::format, "hex value exceeds bit length " + std::to_string(bit_length));
    }
    return BitString(all.substr(excess));
}

std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> hex_to_bytes(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error(Errc::format, "hex byte string has odd length");
    std::vector<std::uint8_t> out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::format, "invalid hex character in byte string");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

} // namespace dyco
