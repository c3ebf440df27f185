#include "scramble_sense/dense_sim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

namespace scrsense {

using cd = std::complex<double>;

StateVector StateVector::zero_state(int n) {
    StateVector s;
    s.n = n;
    s.amp.assign(std::size_t(1) << n, cd(0));
    s.amp[0] = 1.0;
    return s;
}

StateVector StateVector::plus_state(int n) {
    StateVector s;
    s.n = n;
    double a = std::pow(2.0, -0.5 * n);
    s.amp.assign(std::size_t(1) << n, cd(a));
    return s;
}

StateVector StateVector::plus_y_state(int n) {
    StateVector s;
    s.n = n;
    std::size_t d = std::size_t(1) << n;
    s.amp.assign(d, cd(0));
    double a = std::pow(2.0, -0.5 * n);
    for (std::size_t z = 0; z < d; ++z) {
        int ones = std::popcount(z);
        s.amp[z] = a * std::pow(cd(0, 1), ones % 4);
    }
    return s;
}

double StateVector::norm() const {
    double n2 = 0;
    for (const auto &a : amp) n2 += std::norm(a);
    return std::sqrt(n2);
}

CliffordLayer make_clifford_layer(const CliffordTableau &t) {
    return CliffordLayer{t, std::make_shared<const std::vector<ElemGate>>(synthesize_clifford(t))};
}

int Circuit::channel_count() const {
    int c = 0;
    for (const auto &e : elements)
        if (std::holds_alternative<PauliChannel>(e)) ++c;
    return c;
}

std::vector<double> Circuit::channel_gammas() const {
    std::vector<double> g;
    for (const auto &e : elements)
        if (auto *ch = std::get_if<PauliChannel>(&e)) g.push_back(ch->gamma);
    return g;
}

void apply_pauli(StateVector &s, const PauliString &p) {
    std::size_t d = s.amp.size();
    std::vector<cd> out(d);
    int base = (p.phase + count_y(p)) & 3;
    std::uint64_t xm = p.x.lo(), zm = p.z.lo();
    static const cd iq[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    for (std::size_t z = 0; z < d; ++z) {
        int ph = (base + 2 * (std::popcount(z & zm) & 1)) & 3;
        out[z ^ xm] = iq[ph] * s.amp[z];
    }
    s.amp.swap(out);
}

namespace {

void apply_hadamard_all(StateVector &s) {
    for (int q = 0; q < s.n; ++q) apply_elem_gate(s.amp, s.n, ElemGate{GateKind::H, q, 0});
}

void apply_one_qubit(StateVector &s, int q, const cd m[2][2]) {
    std::size_t d = s.amp.size(), bit = std::size_t(1) << q;
    for (std::size_t i = 0; i < d; ++i)
        if (!(i & bit)) {
            cd a = s.amp[i], b = s.amp[i | bit];
            s.amp[i] = m[0][0] * a + m[0][1] * b;
            s.amp[i | bit] = m[1][0] * a + m[1][1] * b;
        }
}

void apply_x_rotation_all(StateVector &s, double phi) {
    cd c = std::cos(phi / 2), ms = cd(0, -std::sin(phi / 2));
    const cd m[2][2] = {{c, ms}, {ms, c}};
    for (int q = 0; q < s.n; ++q) apply_one_qubit(s, q, m);
}

void apply_pauli_rotation(StateVector &s, const PauliString &p, double theta) {
    if (theta == 0.0) return;
    StateVector ps = s;
    apply_pauli(ps, p);
    cd c = std::cos(theta), msin = cd(0, -std::sin(theta));
    for (std::size_t i = 0; i < s.amp.size(); ++i) s.amp[i] = c * s.amp[i] + msin * ps.amp[i];
}

void apply_haar_gate(StateVector &s, const HaarTwoQubit &g) {
    std::size_t d = s.amp.size();
    std::size_t bi = std::size_t(1) << g.i, bj = std::size_t(1) << g.j;
    for (std::size_t base = 0; base < d; ++base) {
        if (base & (bi | bj)) continue;
        std::size_t idx[4] = {base, base | bi, base | bj, base | bi | bj};  // local code = bit_j*2 + bit_i
        cd v[4];
        for (int k = 0; k < 4; ++k) v[k] = s.amp[idx[k]];
        for (int r = 0; r < 4; ++r) {
            cd acc(0);
            for (int k = 0; k < 4; ++k) acc += g.u[r * 4 + k] * v[k];
            s.amp[idx[r]] = acc;
        }
    }
}

}  // namespace

void apply_pauli_sum(const PauliSum &h, const StateVector &in, StateVector &out) {
    out.n = in.n;
    out.amp.assign(in.amp.size(), cd(0));
    StateVector tmp;
    for (const auto &[p, coeff] : h) {
        tmp = in;
        apply_pauli(tmp, p);
        for (std::size_t i = 0; i < in.amp.size(); ++i) out.amp[i] += coeff * tmp.amp[i];
    }
}

PauliSum kim_huse_hamiltonian(int n) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    const double hx = (std::sqrt(5.0) + 5.0) / 8.0;
    const double hz = (std::sqrt(5.0) + 1.0) / 4.0;
    PauliSum h;
    for (int i = 0; i < n; ++i) {
        PauliString zz;
        zz.n = n;
        zz.z.set(i);
        zz.z.set((i + 1) % n);  // periodic; at n=2 both orientations add up
        h.emplace_back(zz, -1.0);
    }
    for (int i = 0; i < n; ++i) h.emplace_back(single_site_pauli(n, i, 'X'), -hx);
    for (int i = 0; i < n; ++i) h.emplace_back(single_site_pauli(n, i, 'Z'), -hz);
    return h;
}

StateVector propagate_hamiltonian(const PauliSum &h, double tau, const StateVector &psi, double tol) {
    if (tol <= 0) throw std::invalid_argument("tol must be positive");
    if (tau == 0.0) return psi;
    const int m_max = 30, restart_cap = 200;
    StateVector cur = psi;
    double remaining = std::abs(tau);
    double sign = tau >= 0 ? 1.0 : -1.0;
    int restarts = 0;
    while (remaining > 0) {
        if (++restarts > restart_cap) throw std::runtime_error("Krylov propagation did not converge");
        // Lanczos basis from cur
        std::vector<StateVector> v;
        std::vector<double> alpha, beta;
        double nrm = cur.norm();
        StateVector v0 = cur;
        for (auto &a : v0.amp) a /= nrm;
        v.push_back(v0);
        StateVector w;
        int m = 0;
        bool invariant = false;
        for (int j = 0; j < m_max; ++j) {
            apply_pauli_sum(h, v[j], w);
            if (j > 0)
                for (std::size_t i = 0; i < w.amp.size(); ++i) w.amp[i] -= beta[j - 1] * v[j - 1].amp[i];
            double a = 0;
            for (std::size_t i = 0; i < w.amp.size(); ++i) a += std::real(std::conj(v[j].amp[i]) * w.amp[i]);
            alpha.push_back(a);
            for (std::size_t i = 0; i < w.amp.size(); ++i) w.amp[i] -= a * v[j].amp[i];
            // full reorthogonalization keeps the small basis clean
            for (int r = 0; r <= j; ++r) {
                cd ov(0);
                for (std::size_t i = 0; i < w.amp.size(); ++i) ov += std::conj(v[r].amp[i]) * w.amp[i];
                for (std::size_t i = 0; i < w.amp.size(); ++i) w.amp[i] -= ov * v[r].amp[i];
            }
            double b = w.norm();
            m = j + 1;
            if (b < 1e-12) {
                invariant = true;
                break;
            }
            beta.push_back(b);
            if (m == m_max) break;
            StateVector vn = w;
            for (auto &a2 : vn.amp) a2 /= b;
            v.push_back(vn);
        }
        // tridiagonal exponential
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        double dt = remaining;
        for (;;) {
            Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(m);
            e1(0) = 1.0;
            Eigen::VectorXcd y = es.eigenvectors() *
                                 ((es.eigenvalues().array() * (-sign * dt)).unaryExpr([](double x) {
                                      return std::exp(cd(0, x));
                                  }).matrix()
                                      .asDiagonal() *
                                  (es.eigenvectors().transpose() * e1));
            double err = invariant ? 0.0 : std::abs(beta.empty() ? 0.0 : beta.back() * std::abs(y(m - 1)));
            if (err < tol || dt < 1e-8) {
                StateVector next;
                next.n = cur.n;
                next.amp.assign(cur.amp.size(), cd(0));
                for (int j2 = 0; j2 < m; ++j2)
                    for (std::size_t i = 0; i < next.amp.size(); ++i) next.amp[i] += (nrm * y(j2)) * v[j2].amp[i];
                cur = next;
                remaining -= dt;
                break;
            }
            dt /= 2;
        }
    }
    double nrm = cur.norm();
    for (auto &a : cur.amp) a /= nrm;
    return cur;
}

std::array<cd, 16> haar_two_qubit(Rng &rng) {
    Eigen::Matrix4cd g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = cd(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(g);
    Eigen::Matrix4cd q = qr.householderQ();
    Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 4; ++j) {
        cd d = r(j, j);
        cd ph = d / std::abs(d);
        for (int i = 0; i < 4; ++i) q(i, j) *= ph;
    }
    std::array<cd, 16> out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i * 4 + j] = q(i, j);
    return out;
}

RucGates sample_ruc_gates(int n, int t_steps, Rng &rng) {
    RucGates g;
    g.n = n;
    for (int t = 0; t < t_steps + 1; ++t) {
        std::vector<HaarTwoQubit> layer;
        for (int row = 0; row < 2; ++row)
            for (auto [i, j] : brickwork_pairs(n, row)) layer.push_back(HaarTwoQubit{haar_two_qubit(rng), i, j});
        g.layers.push_back(std::move(layer));
    }
    return g;
}

Circuit build_protocol_circuit(Protocol protocol, const SignalSet &signals, const ProtocolRandomness &randomness) {
    Circuit c;
    c.n = signals.n;
    int t_steps = signals.t_steps;

    auto push_signal_layer = [&](int t) {
        for (const auto &sig : signals.signals) {
            if (sig.t != t || sig.amplitude == 0.0) continue;
            if (sig.kind == SignalKind::coherent)
                c.elements.push_back(PauliRotation{sig.generator, sig.amplitude});
            else
                c.elements.push_back(PauliChannel{sig.generator, sig.amplitude});
        }
    };

    switch (protocol) {
        case Protocol::quad_ramsey:
            c.init = InitState::plus;
            for (int t = 1; t <= t_steps; ++t) push_signal_layer(t);
            c.elements.push_back(HadamardAll{});
            c.basis = MeasBasis::z;
            break;
        case Protocol::tilted_ramsey:
            c.init = InitState::plus;
            for (int t = 1; t <= t_steps; ++t) push_signal_layer(t);
            c.elements.push_back(XRotationAll{randomness.phi});
            c.basis = MeasBasis::z;
            break;
        case Protocol::clifford_z:
        case Protocol::clifford_x: {
            const CircuitFamily *fam = randomness.family;
            if (!fam || fam->n != c.n || fam->t_steps < t_steps)
                throw std::invalid_argument("protocol/randomness mismatch: need a circuit family");
            c.init = InitState::zero;
            for (int t = 1; t <= t_steps; ++t) {
                c.elements.push_back(make_clifford_layer(fam->layers[t - 1]));
                push_signal_layer(t);
            }
            c.elements.push_back(make_clifford_layer(fam->t_steps == t_steps
                                                         ? fam->terminal_inverse
                                                         : inverse(fam->prefixes[t_steps - 1])));
            if (protocol == Protocol::clifford_x) {
                c.elements.push_back(HadamardAll{});
                c.basis = MeasBasis::x;
            }
            break;
        }
        case Protocol::ruc: {
            const RucGates *g = randomness.ruc;
            if (!g || g->n != c.n || int(g->layers.size()) < t_steps + 1)
                throw std::invalid_argument("protocol/randomness mismatch: need RUC gates");
            c.init = InitState::zero;
            for (int t = 1; t <= t_steps; ++t) {
                for (const auto &gate : g->layers[t - 1]) c.elements.push_back(gate);
                push_signal_layer(t);
            }
            for (const auto &gate : g->layers[t_steps]) c.elements.push_back(gate);
            c.basis = MeasBasis::z;
            break;
        }
        case Protocol::hamiltonian: {
            if (!randomness.hamiltonian) throw std::invalid_argument("protocol/randomness mismatch: need a Hamiltonian");
            c.init = InitState::plus_y;
            for (int t = 1; t <= t_steps; ++t) {
                c.elements.push_back(HamiltonianSegment{randomness.hamiltonian, randomness.tau});
                push_signal_layer(t);
            }
            c.elements.push_back(HamiltonianSegment{randomness.hamiltonian, randomness.tau});
            c.basis = MeasBasis::z;
            break;
        }
    }
    return c;
}

StateVector run_pure(const Circuit &c, const std::vector<std::uint8_t> &jump_pattern) {
    if (c.n > kDenseCapDefault) throw std::invalid_argument("dense cap exceeded");
    if (int(jump_pattern.size()) != c.channel_count()) throw std::invalid_argument("jump pattern length mismatch");
    StateVector s;
    switch (c.init) {
        case InitState::zero:
            s = StateVector::zero_state(c.n);
            break;
        case InitState::plus:
            s = StateVector::plus_state(c.n);
            break;
        case InitState::plus_y:
            s = StateVector::plus_y_state(c.n);
            break;
    }
    int ch = 0;
    for (const auto &e : c.elements) {
        if (auto *cl = std::get_if<CliffordLayer>(&e)) {
            for (const auto &g : *cl->gates) apply_elem_gate(s.amp, s.n, g);
        } else if (std::get_if<HadamardAll>(&e)) {
            apply_hadamard_all(s);
        } else if (auto *xr = std::get_if<XRotationAll>(&e)) {
            apply_x_rotation_all(s, xr->phi);
        } else if (auto *pr = std::get_if<PauliRotation>(&e)) {
            apply_pauli_rotation(s, pr->p, pr->theta);
        } else if (auto *pc = std::get_if<PauliChannel>(&e)) {
            if (jump_pattern[ch++]) apply_pauli(s, pc->p);
        } else if (auto *hg = std::get_if<HaarTwoQubit>(&e)) {
            apply_haar_gate(s, *hg);
        } else if (auto *hs = std::get_if<HamiltonianSegment>(&e)) {
            s = propagate_hamiltonian(*hs->h, hs->tau, s);
        }
    }
    return s;
}

std::vector<double> exact_distribution(const Circuit &c) {
    std::vector<double> gammas = c.channel_gammas();
    std::vector<int> active;
    for (std::size_t i = 0; i < gammas.size(); ++i)
        if (gammas[i] > 0) active.push_back(int(i));
    int na = int(active.size());
    if (!(c.n <= 10 || (c.n <= 12 && na <= 20)) || na > 24)
        throw std::invalid_argument("exact_distribution budget exceeded");

    std::size_t d = std::size_t(1) << c.n;
    std::vector<double> p(d, 0.0);
    std::vector<std::uint8_t> pattern(gammas.size(), 0);
    for (std::uint64_t sub = 0; sub < (std::uint64_t(1) << na); ++sub) {
        double wgt = 1.0;
        for (int i = 0; i < na; ++i) {
            bool jump = (sub >> i) & 1;
            pattern[active[i]] = jump;
            wgt *= jump ? gammas[active[i]] : 1.0 - gammas[active[i]];
        }
        StateVector s = run_pure(c, pattern);
        for (std::size_t z = 0; z < d; ++z) p[z] += wgt * std::norm(s.amp[z]);
    }
    return p;
}

BitstringCounts sample_shots(const Circuit &c, long long m, double gamma_r, Rng &rng) {
    if (m < 1) throw std::invalid_argument("need at least one shot");
    if (gamma_r < 0 || gamma_r >= 0.5) throw std::invalid_argument("gamma_r must be in [0, 0.5)");
    std::vector<double> gammas = c.channel_gammas();
    int nch = int(gammas.size());
    std::size_t d = std::size_t(1) << c.n;

    // Shots grouped by jump pattern so each distinct pattern is simulated
    // once; per-shot randomness comes from counter-derived substreams, so
    // the tallies are independent of grouping and worker count.
    std::map<std::vector<std::uint8_t>, std::vector<long long>> groups;
    for (long long i = 0; i < m; ++i) {
        Rng sr = rng.stream("shot", std::uint64_t(i));
        std::vector<std::uint8_t> pattern(nch);
        for (int ch = 0; ch < nch; ++ch) pattern[ch] = sr.bernoulli(gammas[ch]) ? 1 : 0;
        groups[pattern].push_back(i);
    }

    BitstringCounts out;
    out.n = c.n;
    std::vector<double> cdf(d);
    for (const auto &[pattern, shots] : groups) {
        StateVector s = run_pure(c, pattern);
        double acc = 0;
        for (std::size_t z = 0; z < d; ++z) {
            acc += std::norm(s.amp[z]);
            cdf[z] = acc;
        }
        for (long long i : shots) {
            Rng sr = rng.stream("shot", std::uint64_t(i));
            for (int ch = 0; ch < nch; ++ch) sr.bernoulli(gammas[ch]);  // re-advance past the jump draws
            double u = sr.uniform() * acc;
            std::size_t z = std::size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            if (z >= d) z = d - 1;
            std::uint64_t flipped = std::uint64_t(z);
            if (gamma_r > 0)
                for (int q = 0; q < c.n; ++q)
                    if (sr.bernoulli(gamma_r)) flipped ^= (std::uint64_t(1) << q);
            out.add(Bitstring::from_u64(c.n, flipped));
        }
    }
    return out;
}

}  // namespace scrsense
