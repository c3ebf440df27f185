#include "scramble_sense/readout.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace scrsense {

BitstringCounts apply_bitflip_noise(const BitstringCounts &counts, double gamma_r, Rng &rng) {
    if (gamma_r < 0 || gamma_r >= 0.5) throw std::invalid_argument("gamma_r must be in [0, 0.5)");
    BitstringCounts out;
    out.n = counts.n;
    out.circuit_index = counts.circuit_index;
    if (gamma_r == 0) {
        out.counts = counts.counts;
        out.shots = counts.shots;
        return out;
    }
    for (const auto &[z, w] : counts.counts) {
        long long reps = std::llround(w);
        if (std::abs(w - double(reps)) > 1e-9) throw std::invalid_argument("bitflip noise needs integer counts");
        for (long long r = 0; r < reps; ++r) {
            BitMask bits = z.bits;
            for (int q = 0; q < counts.n; ++q)
                if (rng.bernoulli(gamma_r)) bits.set(q, !bits.test(q));
            out.add(Bitstring(counts.n, bits));
        }
    }
    return out;
}

double confusion_inverse_weight(const Bitstring &a, const Bitstring &j, double gamma_r, int n) {
    if (gamma_r == 0.5) throw std::invalid_argument("gamma_r = 0.5 is singular");
    if (gamma_r == 0) return a == j ? 1.0 : 0.0;
    int d = hamming(a, j);
    return std::pow(1.0 - 2.0 * gamma_r, -n) * std::pow(1.0 - gamma_r, n - d) * std::pow(-gamma_r, d);
}

int min_pairwise_distance(const std::vector<Bitstring> &codewords) {
    int best = codewords.empty() ? 0 : codewords[0].n;
    for (std::size_t i = 0; i < codewords.size(); ++i)
        for (std::size_t j = i + 1; j < codewords.size(); ++j) best = std::min(best, hamming(codewords[i], codewords[j]));
    return best;
}

CodewordSet make_codeword_set(int n, const std::vector<Bitstring> &signal_bitstrings) {
    CodewordSet set;
    set.n = n;
    set.codewords.push_back(Bitstring::from_u64(n, 0));
    for (const Bitstring &z : signal_bitstrings) set.codewords.push_back(z);
    std::set<Bitstring> uniq(set.codewords.begin(), set.codewords.end());
    if (uniq.size() != set.codewords.size()) throw std::invalid_argument("codeword collision");
    set.d_min = min_pairwise_distance(set.codewords);
    return set;
}

DecodeResult decode_nearest(const Bitstring &z, const CodewordSet &set) {
    if (set.codewords.empty()) throw std::invalid_argument("empty codeword set");
    DecodeResult best;
    best.distance = set.n + 1;
    for (const Bitstring &c : set.codewords) {
        int d = hamming(z, c);
        if (d < best.distance) {
            best.codeword = c;
            best.distance = d;
            best.tie = false;
        } else if (d == best.distance) {
            best.tie = true;
            if (c < best.codeword) best.codeword = c;
        }
    }
    return best;
}

double hamming_ball_volume(int n, int radius) {
    double v = 0, term = 1;
    for (int i = 0; i <= std::min(radius, n); ++i) {
        v += term;
        term *= double(n - i) / double(i + 1);
    }
    return v;
}

double d_min_probability_bound(int n, int k, int d) {
    if (d < 1) return 1.0;
    double vol = hamming_ball_volume(n, d - 1);
    double pow2n = std::pow(2.0, n);
    double bound = 1.0;
    for (int m = 0; m < k; ++m) bound *= std::max(0.0, (pow2n - m * vol) / pow2n);
    return bound;
}

double d_min_probability_bound_exp(int n, int k, int d) {
    if (d < 1) return 1.0;
    double x = double(d - 1) / n;
    double entropy = 0;
    if (x > 0 && x < 1) entropy = -x * std::log2(x) - (1 - x) * std::log2(1 - x);
    double exponent = std::pow(2.0, -double(n) * (1.0 - entropy)) * double(k) * double(k - 1) / 2.0;
    return std::exp(-exponent);
}

CorrectabilityReport correctability_check(const CodewordSet &set, double gamma_r) {
    CorrectabilityReport r;
    r.d_min = set.d_min;
    r.threshold = double(set.d_min) / (2.0 * set.n);
    r.pass = gamma_r < r.threshold;
    int k = int(set.codewords.size()) - 1;
    r.bound = d_min_probability_bound(set.n, k, set.d_min);
    r.bound_exp = d_min_probability_bound_exp(set.n, k, set.d_min);
    return r;
}

DecodedCounts decode_counts(const BitstringCounts &counts, const CodewordSet &set) {
    DecodedCounts out;
    out.counts.n = counts.n;
    out.counts.circuit_index = counts.circuit_index;
    for (const auto &[z, w] : counts.counts) {
        DecodeResult r = decode_nearest(z, set);
        out.counts.add(r.codeword, w);
        if (r.tie) out.ties += w;
    }
    return out;
}

}  // namespace scrsense
