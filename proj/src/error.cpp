#include "dyco/error.hpp"

namespace dyco {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::serialization: return "serialization error";
    case Errc::overflow: return "overflow error";
    case Errc::format: return "format error";
    case Errc::parse: return "parse error";
    case Errc::ingestion: return "ingestion error";
    case Errc::unknown_word: return "unknown word";
    case Errc::pool_underflow: return "pool underflow";
    case Errc::capacity: return "capacity error";
    case Errc::lookup: return "lookup error";
    case Errc::range: return "range error";
    case Errc::framing: return "framing error";
    case Errc::protocol: return "protocol error";
    case Errc::corruption: return "corruption error";
    case Errc::malformed_caption: return "malformed caption";
    case Errc::template_error: return "template error";
    case Errc::backend_retryable: return "backend error (retryable)";
    case Errc::backend_fatal: return "backend error";
    case Errc::extraction_parse: return "extraction parse error";
    case Errc::exhaustion: return "attempts exhausted";
    case Errc::config: return "config error";
    case Errc::domain: return "domain error";
    case Errc::shape: return "shape error";
    case Errc::io: return "io error";
    }
    return "error";
}

} // namespace dyco
