#include <doctest.h>

#include "enff/error.hpp"
#include "enff/random.hpp"
#include "enff/wavelet.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

using namespace enff;
using namespace enff::wavelet;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal(0.0, 10.0);
    return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double energy(const std::vector<double>& x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

// Direct-definition oracle: materialize the mirrored signal x~ = [..., x reversed, x, x reversed, ...]
// with enough padding, then y[k] = sum_j f[j] x~[2k+1-j].
std::vector<double> conv_downsample_oracle(const std::vector<double>& x, const std::vector<double>& f,
                                           std::size_t count) {
    const std::size_t N = x.size();
    const std::size_t pad = f.size() + N;
    std::vector<double> ext;
    std::vector<double> rev(x.rbegin(), x.rend());
    while (ext.size() < pad) {
        ext.insert(ext.begin(), rev.begin(), rev.end());
        ext.insert(ext.begin(), x.begin(), x.end());
    }
    const std::size_t origin = ext.size();
    ext.insert(ext.end(), x.begin(), x.end());
    while (ext.size() < origin + N + pad) {
        ext.insert(ext.end(), rev.begin(), rev.end());
        ext.insert(ext.end(), x.begin(), x.end());
    }
    std::vector<double> y(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            const long idx = static_cast<long>(origin) + static_cast<long>(2 * k + 1) - static_cast<long>(j);
            y[k] += f[j] * ext[static_cast<std::size_t>(idx)];
        }
    }
    return y;
}

}  // namespace

TEST_CASE("filter pair invariants") {
    for (const auto& f : {FilterPair::haar(), FilterPair::daubechies4()}) {
        const auto h = f.lowpass();
        const auto g = f.highpass();
        const std::size_t L = f.size();
        CHECK(std::accumulate(h.begin(), h.end(), 0.0) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
        CHECK(std::abs(std::accumulate(g.begin(), g.end(), 0.0)) < 1e-12);
        for (std::size_t k = 0; k < L; ++k) CHECK(g[k] == (k % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - k]);
        // Orthonormality of even shifts.
        for (std::size_t s = 0; s < L; s += 2) {
            double dot = 0.0;
            for (std::size_t k = 0; k + s < L; ++k) dot += h[k] * h[k + s];
            CHECK(dot == doctest::Approx(s == 0 ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
        }
    }
    CHECK(FilterPair::daubechies4().size() == 8);
}

TEST_CASE("Haar hand cases") {
    const auto haar = FilterPair::haar();
    const auto c = dwt_pair(std::vector<double>{1, 1, 1, 1}, haar);
    REQUIRE(c.approx.size() == 2);
    CHECK(c.approx[0] == doctest::Approx(std::numbers::sqrt2));
    CHECK(c.approx[1] == doctest::Approx(std::numbers::sqrt2));
    CHECK(c.detail[0] == doctest::Approx(0.0));
    CHECK(c.detail[1] == doctest::Approx(0.0));

    const auto alt = dwt_pair(std::vector<double>{1, -1, 1, -1}, haar);
    CHECK(alt.approx[0] == doctest::Approx(0.0));
    CHECK(alt.approx[1] == doctest::Approx(0.0));

    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8};
    const auto r = dwt_pair(x, haar);
    CHECK(max_abs_diff(idwt_pair(r.approx, r.detail, haar, x.size()), x) < 1e-10);
}

TEST_CASE("dwt_pair matches the direct convolution oracle") {
    for (const auto& f : {FilterPair::haar(), FilterPair::daubechies4()}) {
        for (std::size_t n : {64u, 65u, 9u, 8u}) {
            if (n < f.size()) continue;
            const auto x = random_signal(n, 100 + n);
            const auto c = dwt_pair(x, f);
            const auto count = coefficient_count(n, f.size());
            REQUIRE(c.approx.size() == count);
            const std::vector<double> h(f.lowpass().begin(), f.lowpass().end());
            const std::vector<double> g(f.highpass().begin(), f.highpass().end());
            CHECK(max_abs_diff(c.approx, conv_downsample_oracle(x, h, count)) < 1e-10);
            CHECK(max_abs_diff(c.detail, conv_downsample_oracle(x, g, count)) < 1e-10);
        }
    }
}

TEST_CASE("single-level perfect reconstruction") {
    for (const auto& f : {FilterPair::haar(), FilterPair::daubechies4()}) {
        for (std::size_t n : {8u, 9u, 31u, 512u, 513u}) {
            const auto x = random_signal(n, n);
            const auto c = dwt_pair(x, f);
            CHECK(max_abs_diff(idwt_pair(c.approx, c.detail, f, n), x) < 1e-8);
        }
        const auto n = 20u;
        const auto m = coefficient_count(n, f.size());
        const auto z = idwt_pair(std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), f, n);
        CHECK(energy(z) == 0.0);
        CHECK_THROWS_AS(idwt_pair(std::vector<double>(m + 1, 0.0), std::vector<double>(m, 0.0), f, n), Error);
    }
    CHECK_THROWS_AS(dwt_pair(std::vector<double>{1, 2, 3}, FilterPair::daubechies4()), Error);
}

TEST_CASE("decompose3 components are additive and full length") {
    for (const auto& f : {FilterPair::haar(), FilterPair::daubechies4()}) {
        for (std::size_t n : {1024u, 1000u, 777u}) {
            const auto x = random_signal(n, 7 * n);
            const auto d = decompose3(x, f);
            for (std::size_t c = 0; c < kComponentCount; ++c) CHECK(d.component(c).size() == n);
            CHECK(max_abs_diff(d.reconstruct(), x) < 1e-8);
        }
        CHECK_THROWS_AS(decompose3(std::vector<double>(8 * f.size() - 1, 1.0), f), Error);
    }
}

TEST_CASE("decompose3 separates constant, slow and fast content") {
    const auto f = FilterPair::daubechies4();
    const auto c = decompose3(std::vector<double>(256, 5.0), f);
    for (std::size_t i = 0; i < 256; ++i) {
        CHECK(std::abs(c.a3[i] - 5.0) < 1e-8);
        CHECK(std::abs(c.d1[i]) < 1e-8);
        CHECK(std::abs(c.d2[i]) < 1e-8);
        CHECK(std::abs(c.d3[i]) < 1e-8);
    }

    std::vector<double> alt(512);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : -1.0;
    const auto a = decompose3(alt, f);
    const double total = energy(a.a3) + energy(a.d3) + energy(a.d2) + energy(a.d1);
    CHECK(energy(a.d1) / total > 0.9);

    std::vector<double> slow(8760);
    for (std::size_t i = 0; i < slow.size(); ++i) slow[i] = std::sin(2.0 * std::numbers::pi * i / 8760.0);
    const auto s = decompose3(slow, f);
    const double st = energy(s.a3) + energy(s.d3) + energy(s.d2) + energy(s.d1);
    CHECK(energy(s.a3) / st > 0.95);
}

TEST_CASE("family names") {
    CHECK(parse_family("haar") == Family::Haar);
    CHECK(parse_family("db4") == Family::Daubechies4);
    CHECK(to_string(Family::Daubechies4) == "db4");
    CHECK_THROWS_AS(parse_family("sym8"), Error);
    CHECK(component_name(0) == "A3");
    CHECK(component_name(3) == "D1");
}
