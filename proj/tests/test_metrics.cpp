#include "doctest.h"

#include "dyco/error.hpp"
#include "dyco/metrics.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace dyco;

namespace {

// Two-pass textbook formulas, kept independent of the one-pass implementation.
DistributionStats two_pass(const std::vector<std::vector<double>>& v) {
    const auto n = static_cast<long double>(v.size());
    DistributionStats s;
    for (std::size_t d = 0; d < v[0].size(); ++d) {
        long double sum = 0;
        for (const auto& x : v) sum += x[d];
        long double mean = sum / n;
        long double ss = 0;
        for (const auto& x : v) ss += (x[d] - mean) * (x[d] - mean);
        s.means.push_back(static_cast<double>(mean));
        s.stddevs.push_back(static_cast<double>(std::sqrt(ss / (n - 1))));
    }
    return s;
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return Errc::io;
}

} // namespace

TEST_CASE("embedding capacity") {
    std::string caption = "one two three four five six seven eight nine ten eleven "
                          "twelve thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty a b";
    auto r = embedding_capacity(140, caption);
    CHECK(r.word_count == 22);
    CHECK(r.bpw == doctest::Approx(140.0 / 22.0).epsilon(1e-15));
    CHECK(std::abs(r.bpw - 6.3636) < 1e-4);
    CHECK(embedding_capacity(0, caption).bpw == 0.0);
    CHECK(embedding_capacity(10, "  a\tb\n c  ").word_count == 3);
    CHECK(code_of([] { (void)embedding_capacity(5, ""); }) == Errc::domain);
    CHECK(code_of([] { (void)embedding_capacity(5, " \n\t "); }) == Errc::domain);
    // linear in bits for a fixed caption
    for (std::size_t bits : {1u, 7u, 140u, 1000u}) {
        CHECK(embedding_capacity(bits, caption).bpw == doctest::Approx(bits * embedding_capacity(1, caption).bpw));
    }
}

TEST_CASE("gaussian kld") {
    DistributionStats x{{0.0}, {1.0}};
    DistributionStats y{{0.0}, {std::exp(1.0)}};
    CHECK(std::abs(gaussian_kld(x, y) - (1.0 + 1.0 / (2.0 * std::exp(2.0)) - 0.5)) < 1e-12);
    CHECK(std::abs(gaussian_kld(x, y) - 0.56767) < 1e-4);
    CHECK(gaussian_kld(x, y) != doctest::Approx(gaussian_kld(y, x)));

    DistributionStats z{{1.5, -2.0, 0.25}, {0.3, 2.0, 7.0}};
    CHECK(std::abs(gaussian_kld(z, z)) < 1e-12);

    CHECK(code_of([&] { (void)gaussian_kld(x, z); }) == Errc::shape);
    CHECK(code_of([&] { (void)gaussian_kld(x, DistributionStats{{0.0}, {0.0}}); }) == Errc::domain);
    CHECK(code_of([&] { (void)gaussian_kld(DistributionStats{{0.0}, {-1.0}}, x); }) == Errc::domain);

    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> mu(-5, 5), sd(0.05, 5);
    for (int t = 0; t < 2000; ++t) {
        DistributionStats a, b;
        for (int d = 0; d < 4; ++d) {
            a.means.push_back(mu(rng));
            b.means.push_back(mu(rng));
            a.stddevs.push_back(sd(rng));
            b.stddevs.push_back(sd(rng));
        }
        REQUIRE(gaussian_kld(a, b) >= -1e-12);
    }
}

TEST_CASE("stats_from_vectors") {
    auto s = stats_from_vectors({{0.0}, {2.0}});
    CHECK(s.means[0] == 1.0);
    CHECK(s.stddevs[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(code_of([] { (void)stats_from_vectors({{1.0, 2.0}, {1.0, 3.0}}); }) == Errc::domain);
    CHECK(code_of([] { (void)stats_from_vectors({{1.0}}); }) == Errc::domain);
    CHECK(code_of([] { (void)stats_from_vectors({{1.0}, {1.0, 2.0}}); }) == Errc::shape);

    std::mt19937_64 rng(67);
    std::normal_distribution<double> g(3.0, 2.0);
    std::vector<std::vector<double>> v(100, std::vector<double>(8));
    for (auto& row : v)
        for (auto& x : row) x = g(rng);
    auto fast = stats_from_vectors(v);
    auto slow = two_pass(v);
    for (std::size_t d = 0; d < 8; ++d) {
        CHECK(std::abs(fast.means[d] - slow.means[d]) < 1e-12);
        CHECK(std::abs(fast.stddevs[d] - slow.stddevs[d]) < 1e-12);
    }
}

TEST_CASE("read_vectors") {
    std::istringstream in("1, 2.5,-3\n\n4,5e-1,6\r\n");
    auto v = read_vectors(in);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == std::vector<double>{1, 2.5, -3});
    CHECK(v[1] == std::vector<double>{4, 0.5, 6});
    std::istringstream bad("1,x\n");
    CHECK(code_of([&] { (void)read_vectors(bad); }) == Errc::parse);
    std::istringstream empty_field("1,,2\n");
    CHECK(code_of([&] { (void)read_vectors(empty_field); }) == Errc::parse);
}
