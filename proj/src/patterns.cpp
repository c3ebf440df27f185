#include "scramble_sense/patterns.hpp"

#include <cmath>
#include <stdexcept>

namespace scrsense {

namespace {

bool is_z_string(const PauliString &p) { return p.x.none() && !p.z.none() && p.phase == 0; }

}  // namespace

double PerturbationPattern::value(const Bitstring &z) const {
    switch (kind) {
        case Kind::point_mass:
            return z == z_prime ? 1.0 : 0.0;
        case Kind::signed_uniform:
            if (sigma == 0) return 0.0;
            return sigma * (overlap_parity(z, mask) ? -magnitude : magnitude);
        case Kind::dense:
            return values[std::size_t(z.lo())];
    }
    return 0.0;
}

double PerturbationPattern::sum() const {
    switch (kind) {
        case Kind::point_mass:
            return 1.0;
        case Kind::signed_uniform:
            return 0.0;  // the character (-1)^{overlap} is balanced for mask != 0
        case Kind::dense: {
            double s = 0;
            for (double v : values) s += v;
            return s;
        }
    }
    return 0.0;
}

PerturbationPattern quad_pattern(const PauliString &z_string) {
    if (!is_z_string(z_string)) throw std::invalid_argument("quad pattern requires a non-identity Z-string");
    PerturbationPattern p;
    p.kind = PerturbationPattern::Kind::point_mass;
    p.n = z_string.n;
    p.z_prime = Bitstring(z_string.n, z_string.z);
    return p;
}

PerturbationPattern tilted_pattern(const PauliString &z_string, double phi) {
    if (!is_z_string(z_string)) throw std::invalid_argument("tilted pattern requires a non-identity Z-string");
    PerturbationPattern p;
    p.kind = PerturbationPattern::Kind::signed_uniform;
    p.n = z_string.n;
    p.mask = Bitstring(z_string.n, z_string.z);
    int s_a = z_string.z.popcount();
    double sine = std::sin(s_a * phi);
    if (std::abs(sine) < 1e-12) {
        p.sigma = 0;  // insensitive direction: s_a * phi is a multiple of pi
        return p;
    }
    p.sigma = sine > 0 ? +1 : -1;
    p.magnitude = std::abs(sine) * std::pow(2.0, -(z_string.n - 1));
    return p;
}

PerturbationPattern clifford_incoherent_pattern(const CliffordTableau &prefix, const PauliString &p) {
    if (prefix.n != p.n) throw std::invalid_argument("prefix and Pauli dimension mismatch");
    PerturbationPattern out;
    out.kind = PerturbationPattern::Kind::point_mass;
    out.n = p.n;
    // the jump branch ends in prefix^dag P prefix |0>, a basis state at the
    // x-support of the back-conjugated Pauli
    out.z_prime = x_support(conjugate(inverse(prefix), p));
    return out;
}

PerturbationPattern clifford_coherent_pattern(const CliffordTableau &prefix, const PauliString &p) {
    if (prefix.n != p.n) throw std::invalid_argument("prefix and Pauli dimension mismatch");
    PerturbationPattern out;
    out.kind = PerturbationPattern::Kind::signed_uniform;
    out.n = p.n;
    PauliString back = conjugate(inverse(prefix), p);
    out.mask = x_support(back);
    int n_y = count_y(back);
    if (n_y % 2 == 0) {
        out.sigma = 0;  // real matrix element: no first-order response
        return out;
    }
    // Im[s * i^{n_y}] with s = +/-1 and n_y odd
    int im = (n_y % 4 == 1) ? back.sign() : -back.sign();
    out.sigma = im;
    out.magnitude = std::pow(2.0, -(p.n - 1));
    return out;
}

namespace {

std::vector<double> distribution_with_amplitudes(Protocol protocol, const SignalSet &signals,
                                                 const ProtocolRandomness &randomness) {
    Circuit c = build_protocol_circuit(protocol, signals, randomness);
    return exact_distribution(c);
}

SignalSet single_signal(const SignalSet &all, std::size_t index, double amplitude) {
    SignalSet s;
    s.n = all.n;
    s.t_steps = all.t_steps;
    s.signals.push_back(all.signals[index]);
    s.signals[0].amplitude = amplitude;
    return s;
}

}  // namespace

DensePatternSet dense_patterns(Protocol protocol, const SignalSet &signals, const ProtocolRandomness &randomness,
                               double h) {
    DensePatternSet out;
    SignalSet none;
    none.n = signals.n;
    none.t_steps = signals.t_steps;
    out.p0 = distribution_with_amplitudes(protocol, none, randomness);
    std::size_t d = out.p0.size();

    for (std::size_t idx = 0; idx < signals.signals.size(); ++idx) {
        const SignalSpec &sig = signals.signals[idx];
        if (sig.kind == SignalKind::incoherent) {
            // exact: a deterministic Pauli insertion (jump probability 1)
            out.k[sig.id] = distribution_with_amplitudes(protocol, single_signal(signals, idx, 1.0), randomness);
        } else {
            auto central = [&](double step) {
                std::vector<double> plus =
                    distribution_with_amplitudes(protocol, single_signal(signals, idx, step), randomness);
                std::vector<double> minus =
                    distribution_with_amplitudes(protocol, single_signal(signals, idx, -step), randomness);
                std::vector<double> g(d);
                for (std::size_t z = 0; z < d; ++z) g[z] = (plus[z] - minus[z]) / (2 * step);
                return g;
            };
            std::vector<double> coarse = central(h);
            std::vector<double> fine = central(h / 2);
            double scale = 0, diff = 0;
            for (std::size_t z = 0; z < d; ++z) {
                scale = std::max(scale, std::abs(fine[z]));
                diff = std::max(diff, std::abs(coarse[z] - fine[z]));
            }
            if (diff > 1e-6 * std::max(scale, 1e-12))
                throw std::runtime_error("finite-difference derivative did not converge");
            out.dp[sig.id] = std::move(fine);
        }
    }
    return out;
}

}  // namespace scrsense
