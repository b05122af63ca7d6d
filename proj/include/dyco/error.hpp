#ifndef DYCO_ERROR_HPP
#define DYCO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dyco {

/// Failure categories shared by every module. The CLI maps each one onto
/// its exit-code contract (see cli.cpp).
enum class Errc {
    serialization,
    overflow,
    format,
    parse,
    ingestion,
    unknown_word,
    pool_underflow,
    capacity,
    lookup,
    range,
    framing,
    protocol,
    corruption,
    malformed_caption,
    template_error,
    backend_retryable,
    backend_fatal,
    extraction_parse,
    exhaustion,
    config,
    domain,
    shape,
    io,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace dyco

#endif // DYCO_ERROR_HPP
