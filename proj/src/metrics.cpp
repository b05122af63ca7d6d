#include "dyco/metrics.hpp"

#include "dyco/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace dyco {

CapacityReport embedding_capacity(std::size_t bits, std::string_view caption) {
    std::size_t words = 0;
    bool in_word = false;
    for (char c : caption) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++words;
        in_word = !space;
    }
    if (words == 0) throw Error(Errc::domain, "caption has no words");
    return {bits, words, static_cast<double>(bits) / static_cast<double>(words)};
}

double gaussian_kld(const DistributionStats& cover, const DistributionStats& stego) {
    const auto n = cover.means.size();
    if (cover.stddevs.size() != n || stego.means.size() != n || stego.stddevs.size() != n) {
        throw Error(Errc::shape, "statistics have mismatched dimensions");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sx = cover.stddevs[i];
        const double sy = stego.stddevs[i];
        if (!(sx > 0.0) || !(sy > 0.0)) throw Error(Errc::domain, "standard deviations must be positive");
        const double dm = cover.means[i] - stego.means[i];
        sum += std::log(sy / sx) + (sx * sx + dm * dm) / (2.0 * sy * sy) - 0.5;
    }
    return sum;
}

DistributionStats stats_from_vectors(const std::vector<std::vector<double>>& vectors) {
    if (vectors.size() < 2) throw Error(Errc::domain, "need at least two vectors");
    const auto dim = vectors.front().size();
    if (dim == 0) throw Error(Errc::shape, "vectors are empty");
    DistributionStats s{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
    // Welford, one pass per vector.
    double n = 0.0;
    std::vector<double> m2(dim, 0.0);
    for (const auto& v : vectors) {
        if (v.size() != dim) throw Error(Errc::shape, "vectors have different dimensions");
        n += 1.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = v[i] - s.means[i];
            s.means[i] += d / n;
            m2[i] += d * (v[i] - s.means[i]);
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        s.stddevs[i] = std::sqrt(m2[i] / (n - 1.0));
        if (!(s.stddevs[i] > 0.0)) {
            throw Error(Errc::domain, "dimension " + std::to_string(i) + " has zero variance");
        }
    }
    return s;
}

std::vector<std::vector<double>> read_vectors(std::istream& in) {
    std::vector<std::vector<double>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> v;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            auto comma = line.find(',', pos);
            auto field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto a = field.find_first_not_of(" \t\r");
            auto b = field.find_last_not_of(" \t\r");
            double x = 0.0;
            if (a == std::string::npos) throw Error(Errc::parse, "line " + std::to_string(lineno) + ": empty field");
            auto [p, ec] = std::from_chars(field.data() + a, field.data() + b + 1, x);
            if (ec != std::errc{} || p != field.data() + b + 1 || !std::isfinite(x)) {
                throw Error(Errc::parse, "line " + std::to_string(lineno) + ": bad number '" + field + "'");
            }
            v.push_back(x);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace dyco
