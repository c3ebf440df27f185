#include "scramble_sense/signal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace scrsense {

double SignalSet::total_strength() const {
    double s = 0;
    for (const auto &sig : signals)
        s += (sig.kind == SignalKind::coherent) ? sig.amplitude * sig.amplitude : sig.amplitude;
    return s;
}

bool SignalSet::unique_triples() const {
    std::set<std::tuple<int, std::string, int>> seen;
    for (const auto &sig : signals) {
        auto key = std::make_tuple(int(sig.kind), to_string(sig.generator), sig.t);
        if (!seen.insert(key).second) return false;
    }
    return true;
}

double signal_fidelity_A(const SignalSet &s) {
    double a = 1.0;
    for (const auto &sig : s.signals) {
        if (sig.kind == SignalKind::coherent) {
            double c = std::cos(sig.amplitude);
            a *= c * c;
        } else {
            a *= 1.0 - sig.amplitude;
        }
    }
    return a;
}

SignalSet make_candidate_set(int n, int t_steps, const std::vector<PauliString> &coherent_pool,
                             const std::vector<PauliString> &incoherent_pool) {
    if (coherent_pool.empty() && incoherent_pool.empty()) throw std::invalid_argument("empty generator pool");
    SignalSet s;
    s.n = n;
    s.t_steps = t_steps;
    int id = 0;
    for (int t = 1; t <= t_steps; ++t) {
        for (const auto &g : coherent_pool) {
            if (g.n != n || g.is_identity() || g.phase != 0) throw std::invalid_argument("bad generator");
            s.signals.push_back({id++, SignalKind::coherent, g, t, 0.0});
        }
        for (const auto &g : incoherent_pool) {
            if (g.n != n || g.is_identity() || g.phase != 0) throw std::invalid_argument("bad generator");
            s.signals.push_back({id++, SignalKind::incoherent, g, t, 0.0});
        }
    }
    return s;
}

void randomize_amplitudes(SignalSet &s, const Sparsity &sparsity, const AmplitudeRanges &ranges, Rng &rng) {
    for (SignalKind kind : {SignalKind::coherent, SignalKind::incoherent}) {
        std::vector<int> idx;
        for (std::size_t i = 0; i < s.signals.size(); ++i)
            if (s.signals[i].kind == kind) idx.push_back(int(i));
        int want = (kind == SignalKind::coherent) ? sparsity.coherent_nonzero : sparsity.incoherent_nonzero;
        if (want > int(idx.size())) throw std::invalid_argument("sparsity exceeds candidate count");
        // Fisher-Yates prefix selection
        for (int i = 0; i < want; ++i) {
            std::size_t j = i + rng.uniform_int(idx.size() - i);
            std::swap(idx[i], idx[j]);
            auto &sig = s.signals[idx[i]];
            if (kind == SignalKind::coherent) {
                double mag = ranges.theta_min + (ranges.theta_max - ranges.theta_min) * rng.uniform();
                sig.amplitude = rng.bernoulli(0.5) ? mag : -mag;
            } else {
                sig.amplitude = ranges.gamma_min + (ranges.gamma_max - ranges.gamma_min) * rng.uniform();
            }
        }
    }
}

SignalSet random_sparse_instance(const std::vector<PauliString> &pool, int t_steps, const Sparsity &sparsity,
                                 const AmplitudeRanges &ranges, Rng &rng) {
    SignalSet s = make_candidate_set(pool.empty() ? 0 : pool[0].n, t_steps, pool, pool);
    randomize_amplitudes(s, sparsity, ranges, rng);
    return s;
}

std::vector<PauliString> z_string_pool(int n, int max_body) {
    std::vector<PauliString> pool;
    // enumerate masks by weight, ascending, for a stable ordering
    for (int w = 1; w <= max_body; ++w) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
            if (std::popcount(mask) != w) continue;
            PauliString p;
            p.n = n;
            p.z = BitMask::from_u64(mask);
            pool.push_back(p);
        }
    }
    return pool;
}

std::vector<PauliString> random_pauli_pool(int n, int count, int max_weight, Rng &rng) {
    std::set<std::string> seen;
    std::vector<PauliString> pool;
    while (int(pool.size()) < count) {
        std::string labels;
        for (int k = 0; k < n; ++k) labels += 'I';
        // choose a support of size 1..max_weight, then non-identity letters
        int w = 1 + int(rng.uniform_int(max_weight));
        std::vector<int> sites;
        while (int(sites.size()) < w) {
            int site = int(rng.uniform_int(n));
            if (std::find(sites.begin(), sites.end(), site) == sites.end()) sites.push_back(site);
        }
        for (int site : sites) labels[site] = "XYZ"[rng.uniform_int(3)];
        if (seen.insert(labels).second) pool.push_back(make_pauli(labels));
    }
    return pool;
}

}  // namespace scrsense
