#ifndef DYCO_METRICS_HPP
#define DYCO_METRICS_HPP

#include <cstddef>
#include <istream>
#include <string_view>
#include <vector>

namespace dyco {

struct CapacityReport {
    std::size_t embedded_bits = 0;
    std::size_t word_count = 0;
    double bpw = 0.0;
};

/// Words are whitespace-separated tokens. Throws Errc::domain for an empty caption.
CapacityReport embedding_capacity(std::size_t bits, std::string_view caption);

struct DistributionStats {
    std::vector<double> means;
    std::vector<double> stddevs;
};

/// Per-dimension Gaussian KL divergence, natural log:
/// sum of log(sy/sx) + (sx^2 + (mx-my)^2) / (2 sy^2) - 1/2.
/// Throws Errc::shape on dimension mismatch, Errc::domain on stddev <= 0.
double gaussian_kld(const DistributionStats& cover, const DistributionStats& stego);

/// Sample mean and standard deviation (divisor n-1) per dimension.
/// Throws Errc::domain for fewer than two vectors or a constant dimension,
/// Errc::shape for ragged input.
DistributionStats stats_from_vectors(const std::vector<std::vector<double>>& vectors);

/// One vector per non-blank line, comma-separated reals. Throws Errc::parse.
std::vector<std::vector<double>> read_vectors(std::istream& in);

} // namespace dyco

#endif // DYCO_METRICS_HPP
