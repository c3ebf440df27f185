#include <bit>
#include <cmath>
#include <set>
#include <vector>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "scramble_sense/readout.hpp"

using namespace scrsense;

TEST_CASE("apply_bitflip_noise") {
    SUBCASE("gamma_r = 0 is the identity") {
        BitstringCounts c;
        c.n = 3;
        c.add(Bitstring::from_u64(3, 5), 7.0);
        Rng rng(1);
        BitstringCounts out = apply_bitflip_noise(c, 0.0, rng);
        CHECK(out.counts.at(Bitstring::from_u64(3, 5)) == 7.0);
    }
    SUBCASE("n = 1: flip fraction ~ gamma_r") {
        BitstringCounts c;
        c.n = 1;
        const long long m = 100000;
        c.add(Bitstring::from_u64(1, 0), double(m));
        Rng rng(2);
        BitstringCounts out = apply_bitflip_noise(c, 0.1, rng);
        double flipped = 0;
        auto it = out.counts.find(Bitstring::from_u64(1, 1));
        if (it != out.counts.end()) flipped = it->second;
        double sigma = std::sqrt(m * 0.1 * 0.9);
        CHECK(std::abs(flipped - 0.1 * m) <= 5 * sigma);
    }
    SUBCASE("n = 10: per-bit flips are pairwise uncorrelated") {
        int n = 10;
        const long long m = 20000;
        BitstringCounts c;
        c.n = n;
        c.add(Bitstring::from_u64(n, 0), double(m));
        Rng rng(3);
        BitstringCounts out = apply_bitflip_noise(c, 0.2, rng);
        // accumulate per-bit and pairwise frequencies
        std::vector<double> single(n, 0.0);
        std::vector<std::vector<double>> pair(n, std::vector<double>(n, 0.0));
        for (const auto &[z, w] : out.counts)
            for (int i = 0; i < n; ++i)
                if (z.bits.test(i)) {
                    single[i] += w;
                    for (int j = i + 1; j < n; ++j)
                        if (z.bits.test(j)) pair[i][j] += w;
                }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double pi = single[i] / m, pj = single[j] / m, pij = pair[i][j] / m;
                double cov = pij - pi * pj;
                double sigma = std::sqrt(0.2 * 0.8 * 0.2 * 0.8 / m);  // approx sd of the sample covariance
                CHECK(std::abs(cov) <= 5 * sigma);
            }
    }
    SUBCASE("precondition") {
        BitstringCounts c;
        c.n = 1;
        Rng rng(4);
        CHECK_THROWS_AS(apply_bitflip_noise(c, 0.5, rng), std::invalid_argument);
    }
}

TEST_CASE("confusion_inverse_weight") {
    SUBCASE("n = 1, gamma_r = 0.1: weights (1.125, -0.125)") {
        Bitstring z0 = Bitstring::from_u64(1, 0), z1 = Bitstring::from_u64(1, 1);
        CHECK(confusion_inverse_weight(z0, z0, 0.1, 1) == doctest::Approx(1.125).epsilon(1e-12));
        CHECK(confusion_inverse_weight(z0, z1, 0.1, 1) == doctest::Approx(-0.125).epsilon(1e-12));
    }
    SUBCASE("gamma_r = 0 is the indicator") {
        Bitstring a = Bitstring::from_u64(4, 9), j = Bitstring::from_u64(4, 9), k = Bitstring::from_u64(4, 8);
        CHECK(confusion_inverse_weight(a, j, 0.0, 4) == 1.0);
        CHECK(confusion_inverse_weight(a, k, 0.0, 4) == 0.0);
    }
    SUBCASE("n = 3: assembled inverse times the confusion matrix is the identity") {
        int n = 3;
        double g = 0.12;
        std::size_t d = 8;
        oracle::Mat conf(d, std::vector<oracle::cd>(d));
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t j = 0; j < d; ++j) {
                int dist = hamming(Bitstring::from_u64(n, a), Bitstring::from_u64(n, j));
                conf[a][j] = std::pow(g, dist) * std::pow(1 - g, n - dist);
            }
        oracle::Mat inv(d, std::vector<oracle::cd>(d));
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t j = 0; j < d; ++j)
                inv[a][j] = confusion_inverse_weight(Bitstring::from_u64(n, a), Bitstring::from_u64(n, j), g, n);
        oracle::Mat prod = oracle::matmul(inv, conf);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t j = 0; j < d; ++j)
                CHECK(std::abs(prod[a][j] - (a == j ? oracle::cd(1) : oracle::cd(0))) < 1e-12);
    }
    SUBCASE("de-biasing: inverse applied to an exactly convolved distribution recovers it") {
        Rng rng(77);
        for (int n : {4, 8}) {
            std::size_t d = std::size_t(1) << n;
            double g = 0.07;
            std::vector<double> p(d);
            double norm = 0;
            for (auto &v : p) {
                v = rng.uniform();
                norm += v;
            }
            for (auto &v : p) v /= norm;
            std::vector<double> noisy(d, 0.0);
            for (std::size_t y = 0; y < d; ++y)
                for (std::size_t z = 0; z < d; ++z) {
                    int dist = std::popcount(y ^ z);
                    noisy[z] += p[y] * std::pow(g, dist) * std::pow(1 - g, n - dist);
                }
            for (std::size_t a = 0; a < d; ++a) {
                double rec = 0;
                for (std::size_t j = 0; j < d; ++j)
                    rec += confusion_inverse_weight(Bitstring::from_u64(n, a), Bitstring::from_u64(n, j), g, n) * noisy[j];
                CHECK(std::abs(rec - p[a]) < 1e-12);
            }
        }
    }
}

TEST_CASE("codeword sets and decoding") {
    SUBCASE("basic d_min and decode") {
        CodewordSet s = make_codeword_set(3, {Bitstring::from_u64(3, 7)});
        CHECK(s.d_min == 3);
        DecodeResult r = decode_nearest(Bitstring::from_u64(3, 4), s);  // text "001" -> bit 2
        CHECK(r.codeword == Bitstring::from_u64(3, 0));
        CHECK(r.distance == 1);
        CHECK(!r.tie);
    }
    SUBCASE("{0000, 1111, 0011}: d_min = 2") {
        CodewordSet s = make_codeword_set(4, {Bitstring::from_u64(4, 15), Bitstring::from_u64(4, 12)});
        CHECK(s.d_min == 2);
    }
    SUBCASE("duplicates rejected") {
        CHECK_THROWS_AS(make_codeword_set(3, {Bitstring::from_u64(3, 0)}), std::invalid_argument);
    }
    SUBCASE("ties flagged and broken toward the smaller codeword") {
        CodewordSet s = make_codeword_set(2, {Bitstring::from_u64(2, 3)});
        DecodeResult r = decode_nearest(Bitstring::from_u64(2, 1), s);
        CHECK(r.tie);
        CHECK(r.codeword == Bitstring::from_u64(2, 0));
    }
    SUBCASE("random 30-codeword set at n = 20: in-radius perturbations decode exactly") {
        Rng rng(99);
        int n = 20, k = 30;
        std::vector<Bitstring> words;
        std::set<std::uint64_t> seen = {0};
        while (int(words.size()) < k) {
            std::uint64_t w = rng.next_u64() & ((1ull << n) - 1);
            if (seen.insert(w).second) words.push_back(Bitstring::from_u64(n, w));
        }
        CodewordSet s = make_codeword_set(n, words);
        REQUIRE(s.d_min >= 1);
        int radius = (s.d_min - 1) / 2;
        int trials = 100000;
        for (int it = 0; it < trials; ++it) {
            const Bitstring &c = s.codewords[rng.uniform_int(s.codewords.size())];
            int flips = int(rng.uniform_int(std::uint64_t(radius) + 1));
            BitMask bits = c.bits;
            // flip `flips` distinct random positions
            std::set<int> pos;
            while (int(pos.size()) < flips) pos.insert(int(rng.uniform_int(n)));
            for (int q : pos) bits.set(q, !bits.test(q));
            DecodeResult r = decode_nearest(Bitstring(n, bits), s);
            CHECK(r.codeword == c);
        }
    }
    SUBCASE("exhaustive in-radius decoding at n = 12") {
        Rng rng(123);
        int n = 12, k = 6;
        std::vector<Bitstring> words;
        std::set<std::uint64_t> seen = {0};
        while (int(words.size()) < k) {
            std::uint64_t w = rng.next_u64() & ((1ull << n) - 1);
            if (seen.insert(w).second) words.push_back(Bitstring::from_u64(n, w));
        }
        CodewordSet s = make_codeword_set(n, words);
        for (const Bitstring &c : s.codewords)
            for (std::uint64_t z = 0; z < (1ull << n); ++z) {
                Bitstring zz = Bitstring::from_u64(n, z);
                if (2 * hamming(zz, c) < s.d_min) {
                    DecodeResult r = decode_nearest(zz, s);
                    CHECK(r.codeword == c);
                    CHECK(!r.tie);
                }
            }
    }
}

TEST_CASE("correctability bounds") {
    SUBCASE("k = 1: probability 1 for all d <= n") {
        for (int d = 1; d <= 8; ++d) CHECK(d_min_probability_bound(8, 1, d) == doctest::Approx(1.0));
    }
    SUBCASE("binary entropy endpoint: exponent vanishes at relative distance 1/2") {
        // d - 1 = n/2 makes H = 1, so the bound is exp(-k(k-1)/2)
        double b = d_min_probability_bound_exp(20, 5, 11);
        CHECK(b == doctest::Approx(std::exp(-10.0)).epsilon(1e-12));
    }
    SUBCASE("N = 20, K = 30, d = 5: Monte Carlo vs bound") {
        Rng rng(321);
        int n = 20, k = 30, d = 5, draws = 1000, hits = 0;
        for (int it = 0; it < draws; ++it) {
            std::vector<Bitstring> words;
            for (int i = 0; i < k; ++i) words.push_back(Bitstring::from_u64(n, rng.next_u64() & ((1ull << n) - 1)));
            if (min_pairwise_distance(words) >= d) ++hits;
        }
        double freq = double(hits) / draws;
        double bound = d_min_probability_bound(n, k, d);
        // the product form overcounts exclusions, so it sits below truth;
        // allow Monte Carlo slack
        CHECK(bound <= freq + 5 * std::sqrt(freq * (1 - freq) / draws) + 0.01);
    }
    SUBCASE("correctability_check report") {
        CodewordSet s = make_codeword_set(4, {Bitstring::from_u64(4, 15)});
        CorrectabilityReport r = correctability_check(s, 0.3);
        CHECK(r.d_min == 4);
        CHECK(r.threshold == doctest::Approx(0.5));
        CHECK(r.pass);
        CorrectabilityReport r2 = correctability_check(s, 0.6);
        CHECK(!r2.pass);
    }
}

TEST_CASE("decode_counts leaves zero-noise tallies unchanged") {
    CodewordSet s = make_codeword_set(4, {Bitstring::from_u64(4, 9), Bitstring::from_u64(4, 6)});
    BitstringCounts c;
    c.n = 4;
    c.add(Bitstring::from_u64(4, 0), 10);
    c.add(Bitstring::from_u64(4, 9), 3);
    c.add(Bitstring::from_u64(4, 6), 2);
    DecodedCounts out = decode_counts(c, s);
    CHECK(out.ties == 0);
    CHECK(out.counts.counts.at(Bitstring::from_u64(4, 0)) == 10);
    CHECK(out.counts.counts.at(Bitstring::from_u64(4, 9)) == 3);
    CHECK(out.counts.counts.at(Bitstring::from_u64(4, 6)) == 2);
}
