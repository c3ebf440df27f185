#include "scramble_sense/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "scramble_sense/dense_sim.hpp"
#include "scramble_sense/readout.hpp"
#include "scramble_sense/tableau.hpp"
#include "scramble_sense/theory.hpp"

namespace scrsense {

namespace {

constexpr double kWarnDelta = 0.01;  // failure budget behind the n_c advisories

bool any_coherent(const SignalSet &s) {
    for (const auto &sig : s.signals)
        if (sig.kind == SignalKind::coherent) return true;
    return false;
}

bool any_incoherent(const SignalSet &s) {
    for (const auto &sig : s.signals)
        if (sig.kind == SignalKind::incoherent) return true;
    return false;
}

bool coherent_all_zero(const SignalSet &s) {
    for (const auto &sig : s.signals)
        if (sig.kind == SignalKind::coherent && sig.amplitude != 0.0) return false;
    return true;
}

double mean_nonzero_gamma(const SignalSet &s) {
    double acc = 0;
    int cnt = 0;
    for (const auto &sig : s.signals)
        if (sig.kind == SignalKind::incoherent && sig.amplitude != 0.0) {
            acc += sig.amplitude;
            ++cnt;
        }
    return cnt ? acc / cnt : 0.0;
}

// In-place per-bit binary-symmetric-channel pass over a length-2^n vector;
// `forward` applies the channel, otherwise its (product-form) inverse.
void bitflip_pass(std::vector<double> &p, int n, double gamma_r, bool forward) {
    double d00, d01;
    if (forward) {
        d00 = 1.0 - gamma_r;
        d01 = gamma_r;
    } else {
        double inv = 1.0 / (1.0 - 2.0 * gamma_r);
        d00 = (1.0 - gamma_r) * inv;
        d01 = -gamma_r * inv;
    }
    for (int b = 0; b < n; ++b) {
        std::size_t bit = std::size_t(1) << b;
        for (std::size_t z = 0; z < p.size(); ++z)
            if (!(z & bit)) {
                double a = p[z], c = p[z | bit];
                p[z] = d00 * a + d01 * c;
                p[z | bit] = d01 * a + d00 * c;
            }
    }
}

// Apply the exact confusion-matrix inverse to a tally (weighted counts out).
BitstringCounts confusion_correct_counts(const BitstringCounts &counts, int n, double gamma_r) {
    if (n > 16) throw std::invalid_argument("confusion-inverse tally correction needs n <= 16; use decoding instead");
    std::vector<double> p(std::size_t(1) << n, 0.0);
    for (const auto &[z, w] : counts.counts) p[std::size_t(z.lo())] += w;
    bitflip_pass(p, n, gamma_r, false);
    BitstringCounts out;
    out.n = n;
    out.circuit_index = counts.circuit_index;
    for (std::size_t z = 0; z < p.size(); ++z)
        if (p[z] != 0.0) out.add(Bitstring::from_u64(n, z), p[z]);
    out.shots = counts.shots;  // weights may dip negative; keep the declared M
    return out;
}

BitstringCounts counts_from_distribution(const std::vector<double> &p, int n, int circuit_index) {
    BitstringCounts out;
    out.n = n;
    out.circuit_index = circuit_index;
    for (std::size_t z = 0; z < p.size(); ++z)
        if (p[z] != 0.0) out.add(Bitstring::from_u64(n, z), p[z]);
    out.shots = 1.0;
    return out;
}

// Radius-limited error correction: replace z by its nearest codeword only
// when z lies strictly inside the decoding radius (2 d < d_min).  Shots
// outside every sphere are left unchanged — they mostly come from
// multi-jump events whose bitstrings must not be reassigned to codewords.
BitstringCounts decode_within_radius(const BitstringCounts &counts, const CodewordSet &set) {
    BitstringCounts out;
    out.n = counts.n;
    out.circuit_index = counts.circuit_index;
    for (const auto &[z, w] : counts.counts) {
        DecodeResult r = decode_nearest(z, set);
        out.add(2 * r.distance < set.d_min ? r.codeword : z, w);
    }
    return out;
}

RamseyProtocol ramsey_kind(ProtocolFamily f) {
    return f == ProtocolFamily::quadratic ? RamseyProtocol::quadratic : RamseyProtocol::tilted;
}

// Shared scaffolding between sampled trials and the infinite-M probe: the
// per-circuit counts plus the pattern columns each estimator needs.
struct PreparedData {
    std::vector<BitstringCounts> z_counts;  // quadratic/tilted/ruc/hamiltonian use this slot too
    std::vector<BitstringCounts> x_counts;
    std::vector<std::vector<PerturbationPattern>> incoherent_patterns;
    std::vector<std::vector<PerturbationPattern>> coherent_patterns;
    std::vector<DensePatternSet> dense;
    long long shots_coherent = 0;
    long long shots_incoherent = 0;
};

// m < 0 requests exact distributions ("M = infinity") instead of sampling.
PreparedData prepare_data(const ExperimentConfig &config, long long m, int rep) {
    const SignalSet &signals = config.signals;
    Rng trial = Rng(config.seed).stream("trial", std::uint64_t(rep));
    bool exact = m < 0;
    PreparedData data;

    auto realize = [&](const Circuit &circuit, long long shots, const char *label, int c) {
        if (exact) {
            std::vector<double> p = exact_distribution(circuit);
            if (config.gamma_r > 0) bitflip_pass(p, circuit.n, config.gamma_r, true);
            return counts_from_distribution(p, circuit.n, c);
        }
        Rng rng = trial.stream(label, std::uint64_t(c));
        BitstringCounts out = sample_shots(circuit, shots, config.gamma_r, rng);
        out.circuit_index = c;
        return out;
    };

    switch (config.protocol) {
        case ProtocolFamily::quadratic:
        case ProtocolFamily::tilted: {
            if (config.n_circuits != 1) throw std::invalid_argument("Ramsey protocols use a single circuit");
            ProtocolRandomness r;
            r.phi = config.phi;
            Protocol proto =
                config.protocol == ProtocolFamily::quadratic ? Protocol::quad_ramsey : Protocol::tilted_ramsey;
            Circuit circuit = build_protocol_circuit(proto, signals, r);
            data.z_counts.push_back(realize(circuit, m, "shots", 0));
            data.shots_coherent = exact ? 0 : m;
            break;
        }
        case ProtocolFamily::clifford_global:
        case ProtocolFamily::clifford_local: {
            FamilyKind fk = config.protocol == ProtocolFamily::clifford_global ? FamilyKind::global_uniform
                                                                              : FamilyKind::brickwork_local;
            bool has_coh = any_coherent(signals);
            bool fast_z = coherent_all_zero(signals);
            long long m_x = exact ? 0 : (has_coh ? m / 2 : 0);
            long long m_z = exact ? 0 : m - m_x;
            std::vector<long long> z_split = exact ? std::vector<long long>() : split_shots(m_z, config.n_circuits);
            std::vector<long long> x_split =
                exact || !has_coh ? std::vector<long long>() : split_shots(m_x, config.n_circuits);
            for (int c = 0; c < config.n_circuits; ++c) {
                Rng fam_rng = trial.stream("family", std::uint64_t(c));
                CircuitFamily fam = sample_circuit_family(fk, config.n, config.t_steps, fam_rng);
                std::vector<PerturbationPattern> ip, cp;
                for (const SignalSpec &sig : signals.signals) {
                    const CliffordTableau &prefix = fam.prefixes[sig.t - 1];
                    if (sig.kind == SignalKind::incoherent)
                        ip.push_back(clifford_incoherent_pattern(prefix, sig.generator));
                    else
                        cp.push_back(clifford_coherent_pattern(prefix, sig.generator));
                }

                BitstringCounts zc;
                if (exact && fast_z) {
                    // exact codeword distribution: jump-subset enumeration
                    // is exponential in K, so restrict to the dense cap path
                    ProtocolRandomness r;
                    r.family = &fam;
                    zc = realize(build_protocol_circuit(Protocol::clifford_z, signals, r), 0, "zshots", c);
                } else if (fast_z) {
                    std::vector<Bitstring> codewords;
                    std::vector<double> gammas;
                    for (std::size_t i = 0, j = 0; i < signals.signals.size(); ++i)
                        if (signals.signals[i].kind == SignalKind::incoherent) {
                            codewords.push_back(ip[j].z_prime);
                            gammas.push_back(signals.signals[i].amplitude);
                            ++j;
                        } else {
                            continue;
                        }
                    zc = sample_codeword_shots(config.n, codewords, gammas, z_split[c], config.gamma_r,
                                               trial.stream("zshots", std::uint64_t(c)));
                    zc.circuit_index = c;
                } else {
                    ProtocolRandomness r;
                    r.family = &fam;
                    zc = realize(build_protocol_circuit(Protocol::clifford_z, signals, r),
                                 exact ? 0 : z_split[c], "zshots", c);
                }
                if (config.corrections.decode) {
                    std::vector<Bitstring> words;
                    for (const auto &p : ip) words.push_back(p.z_prime);
                    CodewordSet set = make_codeword_set(config.n, words);
                    zc = decode_within_radius(zc, set);
                } else if (config.corrections.confusion_inverse && config.gamma_r > 0) {
                    zc = confusion_correct_counts(zc, config.n, config.gamma_r);
                }
                data.z_counts.push_back(zc);
                data.incoherent_patterns.push_back(ip);

                if (has_coh) {
                    ProtocolRandomness r;
                    r.family = &fam;
                    BitstringCounts xc = realize(build_protocol_circuit(Protocol::clifford_x, signals, r),
                                                 exact ? 0 : x_split[c], "xshots", c);
                    if (config.corrections.confusion_inverse && config.gamma_r > 0)
                        xc = confusion_correct_counts(xc, config.n, config.gamma_r);
                    data.x_counts.push_back(xc);
                    data.coherent_patterns.push_back(cp);
                }
            }
            data.shots_incoherent = m_z;
            data.shots_coherent = m_x;
            break;
        }
        case ProtocolFamily::ruc:
        case ProtocolFamily::hamiltonian: {
            Protocol proto = config.protocol == ProtocolFamily::ruc ? Protocol::ruc : Protocol::hamiltonian;
            std::shared_ptr<const PauliSum> ham;
            if (proto == Protocol::hamiltonian) ham = std::make_shared<PauliSum>(kim_huse_hamiltonian(config.n));
            std::vector<long long> msplit = exact ? std::vector<long long>() : split_shots(m, config.n_circuits);
            for (int c = 0; c < config.n_circuits; ++c) {
                ProtocolRandomness r;
                r.tau = config.hamiltonian_tau;
                RucGates gates;
                if (proto == Protocol::ruc) {
                    Rng gate_rng = trial.stream("ruc", std::uint64_t(c));
                    gates = sample_ruc_gates(config.n, config.t_steps, gate_rng);
                    r.ruc = &gates;
                } else {
                    r.hamiltonian = ham;
                }
                Circuit circuit = build_protocol_circuit(proto, signals, r);
                data.dense.push_back(dense_patterns(proto, signals, r));
                BitstringCounts counts = realize(circuit, exact ? 0 : msplit[c], "shots", c);
                if (config.corrections.confusion_inverse && config.gamma_r > 0)
                    counts = confusion_correct_counts(counts, config.n, config.gamma_r);
                data.z_counts.push_back(counts);
            }
            data.shots_coherent = data.shots_incoherent = exact ? 0 : m;
            break;
        }
    }
    return data;
}

EstimateReport estimate_from_data(const ExperimentConfig &config, const PreparedData &data) {
    const SignalSet &signals = config.signals;
    const CorrectionToggles &fix = config.corrections;
    double gr = fix.confusion_inverse ? config.gamma_r : 0.0;
    EstimateReport report;
    switch (config.protocol) {
        case ProtocolFamily::quadratic:
        case ProtocolFamily::tilted: {
            report = config.protocol == ProtocolFamily::quadratic
                         ? estimate_quadratic(data.z_counts[0], signals, gr)
                         : estimate_tilted(data.z_counts[0], signals, config.phi, gr);
            if (fix.second_order)
                report = iterate_second_order(report, signals, ramsey_kind(config.protocol), config.phi,
                                              fix.second_order_passes);
            break;
        }
        case ProtocolFamily::clifford_global:
        case ProtocolFamily::clifford_local: {
            EstimateReport iz = estimate_clifford_incoherent(data.z_counts, data.incoherent_patterns, signals);
            if (!data.x_counts.empty()) {
                EstimateReport cx =
                    estimate_clifford_coherent(data.x_counts, data.coherent_patterns, signals, iz.a_hat);
                if (fix.overlap) iz = overlap_correct(iz, cx, signals);
                report.a_hat = iz.a_hat;
                for (const SignalSpec &sig : signals.signals) {
                    const EstimateReport &src = sig.kind == SignalKind::coherent ? cx : iz;
                    const SignalEstimate *e = src.find(sig.id);
                    if (e) report.estimates.push_back(*e);
                }
            } else {
                report = iz;
            }
            break;
        }
        case ProtocolFamily::ruc:
        case ProtocolFamily::hamiltonian:
            report = estimate_dense(data.z_counts, data.dense, signals);
            break;
    }
    if (fix.threshold) report = hard_threshold(report, fix.theta_min, fix.gamma_min);
    return report;
}

// Quadratic recovery is magnitude-only: score against |theta|.
double signal_truth(const ExperimentConfig &config, const SignalSpec &sig) {
    if (config.protocol == ProtocolFamily::quadratic && sig.kind == SignalKind::coherent)
        return std::abs(sig.amplitude);
    return sig.amplitude;
}

TrialMetrics score_report(const ExperimentConfig &config, const EstimateReport &report, const PreparedData &data) {
    TrialMetrics m;
    m.shots_coherent = data.shots_coherent;
    m.shots_incoherent = data.shots_incoherent;
    double sq_c = 0, sq_ic = 0;
    int n_c = 0, n_ic = 0;
    for (const SignalSpec &sig : config.signals.signals) {
        const SignalEstimate *e = report.find(sig.id);
        double est = e ? e->estimate : 0.0;
        double err = est - signal_truth(config, sig);
        m.max_abs_error = std::max(m.max_abs_error, std::abs(err));
        if (sig.kind == SignalKind::coherent) {
            sq_c += err * err;
            ++n_c;
        } else {
            sq_ic += err * err;
            ++n_ic;
        }
    }
    if (n_c) m.rms_coherent = std::sqrt(sq_c / n_c);
    if (n_ic) m.rms_incoherent = std::sqrt(sq_ic / n_ic);
    return m;
}

// Theory overlays for the sweep: sqrt of the mean predicted variance per
// kind, with the same shot split run_trial uses.
std::pair<double, double> theory_rms(const ExperimentConfig &config, long long m) {
    const SignalSet &signals = config.signals;
    double a = signal_fidelity_A(signals);
    double coh = 0, incoh = 0;
    PredictionInput in;
    in.a = a;
    switch (config.protocol) {
        case ProtocolFamily::quadratic: {
            in.protocol = PredictionProtocol::quadratic;
            in.m = double(m);
            coh = std::sqrt(predict_variance(in));
            break;
        }
        case ProtocolFamily::tilted: {
            in.protocol = PredictionProtocol::tilted;
            in.m = double(m);
            in.phi = config.phi;
            double acc = 0;
            int cnt = 0;
            for (const SignalSpec &sig : signals.signals) {
                if (sig.kind != SignalKind::coherent) continue;
                in.s_a = sig.generator.z.popcount();
                if (std::abs(std::sin(in.s_a * in.phi)) < 1e-12) continue;
                acc += predict_variance(in);
                ++cnt;
            }
            if (cnt) coh = std::sqrt(acc / cnt);
            break;
        }
        case ProtocolFamily::clifford_global:
        case ProtocolFamily::clifford_local: {
            bool has_coh = any_coherent(signals);
            long long m_x = has_coh ? m / 2 : 0;
            long long m_z = m - m_x;
            if (has_coh) {
                in.protocol = PredictionProtocol::clifford_coherent;
                in.m = double(m_x);
                coh = std::sqrt(predict_variance(in));
            }
            if (any_incoherent(signals)) {
                in.protocol = PredictionProtocol::clifford_incoherent;
                in.m = double(m_z);
                in.gamma = mean_nonzero_gamma(signals);
                incoh = std::sqrt(predict_variance(in));
            }
            break;
        }
        case ProtocolFamily::ruc:
        case ProtocolFamily::hamiltonian: {
            in.protocol = PredictionProtocol::ruc;
            in.m = double(m);
            if (any_coherent(signals)) {
                in.beta = config.ruc_beta_coherent;
                coh = std::sqrt(predict_variance(in));
            }
            if (any_incoherent(signals)) {
                // beta_ic convention: var = beta_ic / (A M)
                incoh = std::sqrt(config.ruc_beta_incoherent / (a * double(m)));
            }
            break;
        }
    }
    return {coh, incoh};
}

}  // namespace

std::vector<std::string> check_config(const ExperimentConfig &config) {
    std::vector<std::string> warnings;
    int k_c = 0, k_ic = 0;
    for (const auto &sig : config.signals.signals)
        (sig.kind == SignalKind::coherent ? k_c : k_ic)++;
    if (config.protocol == ProtocolFamily::clifford_global || config.protocol == ProtocolFamily::clifford_local) {
        if (k_ic >= 2) {
            int need = required_circuits(CircuitKind::incoherent, k_ic, config.n, kWarnDelta);
            if (config.n_circuits < need)
                warnings.push_back("n_circuits " + std::to_string(config.n_circuits) +
                                   " below the incoherent collision bound " + std::to_string(need));
        }
        if (k_c >= 1) {
            int need = required_circuits(CircuitKind::coherent, k_c, config.n, kWarnDelta);
            if (config.n_circuits < need)
                warnings.push_back("n_circuits " + std::to_string(config.n_circuits) +
                                   " below the coherent insensitivity bound " + std::to_string(need));
        }
    }
    if ((config.protocol == ProtocolFamily::quadratic || config.protocol == ProtocolFamily::tilted) &&
        config.n_circuits != 1)
        warnings.push_back("Ramsey protocols ignore n_circuits != 1");
    return warnings;
}

TrialResult run_trial(const ExperimentConfig &config, long long m, int rep) {
    if (m < 1) throw std::invalid_argument("need at least one shot");
    PreparedData data = prepare_data(config, m, rep);
    TrialResult out;
    out.report = estimate_from_data(config, data);
    out.metrics = score_report(config, out.report, data);
    return out;
}

double log_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_slope needs >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] <= 0 || y[i] <= 0) throw std::invalid_argument("log_log_slope needs positive data");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double n = double(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double median_of_means(const std::vector<double> &values, int group_count) {
    if (values.empty()) throw std::invalid_argument("median_of_means on empty sample");
    int g = std::clamp(group_count, 1, int(values.size()));
    std::vector<double> means(g, 0.0);
    std::vector<int> sizes(g, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        means[i % g] += values[i];
        ++sizes[i % g];
    }
    for (int i = 0; i < g; ++i) means[i] /= sizes[i];
    std::sort(means.begin(), means.end());
    return g % 2 ? means[g / 2] : 0.5 * (means[g / 2 - 1] + means[g / 2]);
}

std::vector<ScalingRecord> scaling_sweep(const ExperimentConfig &config, const std::vector<long long> &m_list) {
    if (m_list.size() < 3) throw std::invalid_argument("scaling sweep needs at least 3 shot counts");
    std::vector<ScalingRecord> records;
    std::vector<double> xs_c, ys_c, xs_ic, ys_ic;
    for (long long m : m_list) {
        std::vector<double> rc, ric;
        for (int rep = 0; rep < std::max(config.repetitions, 1); ++rep) {
            TrialResult t = run_trial(config, m, rep);
            rc.push_back(t.metrics.rms_coherent);
            ric.push_back(t.metrics.rms_incoherent);
        }
        ScalingRecord rec;
        rec.m = m;
        rec.rms_coherent = median_of_means(rc);
        rec.rms_incoherent = median_of_means(ric);
        auto [tc, tic] = theory_rms(config, m);
        rec.theory_coherent = tc;
        rec.theory_incoherent = tic;
        double nan = std::numeric_limits<double>::quiet_NaN();
        if (rec.rms_coherent > 0) {
            xs_c.push_back(double(m));
            ys_c.push_back(rec.rms_coherent);
        }
        if (rec.rms_incoherent > 0) {
            xs_ic.push_back(double(m));
            ys_ic.push_back(rec.rms_incoherent);
        }
        rec.slope_coherent = xs_c.size() >= 2 ? log_log_slope(xs_c, ys_c) : nan;
        rec.slope_incoherent = xs_ic.size() >= 2 ? log_log_slope(xs_ic, ys_ic) : nan;
        records.push_back(rec);
    }
    return records;
}

SampleComplexity sample_complexity_beta(const ExperimentConfig &config, const std::vector<long long> &m_list) {
    double a = signal_fidelity_A(config.signals);
    double acc_c = 0, acc_ic = 0;
    long long cnt_c = 0, cnt_ic = 0;
    for (long long m : m_list)
        for (int rep = 0; rep < std::max(config.repetitions, 1); ++rep) {
            TrialResult t = run_trial(config, m, rep);
            for (const SignalSpec &sig : config.signals.signals) {
                const SignalEstimate *e = t.report.find(sig.id);
                double err = (e ? e->estimate : 0.0) - signal_truth(config, sig);
                if (sig.kind == SignalKind::coherent) {
                    acc_c += double(t.metrics.shots_coherent) * a * a * err * err;
                    ++cnt_c;
                } else if (sig.amplitude != 0.0) {
                    acc_ic += double(t.metrics.shots_incoherent) * a * err * err;
                    ++cnt_ic;
                }
            }
        }
    SampleComplexity out;
    if (cnt_c) out.beta_coherent = acc_c / double(cnt_c);
    if (cnt_ic) out.beta_incoherent = acc_ic / double(cnt_ic);
    return out;
}

BiasReport bias_infinite_m(const ExperimentConfig &config) {
    PreparedData data = prepare_data(config, -1, 0);
    BiasReport out;
    out.report = estimate_from_data(config, data);
    for (const SignalSpec &sig : config.signals.signals) {
        const SignalEstimate *e = out.report.find(sig.id);
        SignalBias b;
        b.id = sig.id;
        b.kind = sig.kind;
        b.bias = (e ? e->estimate : 0.0) - signal_truth(config, sig);
        out.biases.push_back(b);
        out.mean_squared += b.bias * b.bias;
        out.worst_case_squared = std::max(out.worst_case_squared, b.bias * b.bias);
    }
    if (!out.biases.empty()) out.mean_squared /= double(out.biases.size());
    return out;
}

double collision_empirical(int n, int k, int n_c, int draws, Rng &rng) {
    if (k < 2) return 0.0;
    if (draws < 1) throw std::invalid_argument("collision_empirical needs draws >= 1");
    std::vector<PauliString> paulis = random_pauli_pool(n, k, n, rng);
    int hits = 0;
    for (int it = 0; it < draws; ++it) {
        std::vector<std::vector<std::uint64_t>> words(k);
        for (int c = 0; c < n_c; ++c) {
            CliffordTableau inv = inverse(sample_uniform_clifford(n, rng));
            for (int i = 0; i < k; ++i) words[i].push_back(x_support(conjugate(inv, paulis[i])).bits.lo());
        }
        bool collided = false;
        for (int i = 0; i < k && !collided; ++i)
            for (int j = i + 1; j < k && !collided; ++j)
                if (words[i] == words[j]) collided = true;
        if (collided) ++hits;
    }
    return double(hits) / draws;
}

BitstringCounts sample_codeword_shots(int n, const std::vector<Bitstring> &codewords,
                                      const std::vector<double> &gammas, long long m, double gamma_r,
                                      const Rng &rng) {
    if (codewords.size() != gammas.size()) throw std::invalid_argument("codeword/gamma size mismatch");
    if (gamma_r < 0 || gamma_r >= 0.5) throw std::invalid_argument("gamma_r must be in [0, 0.5)");
    if (m < 1) throw std::invalid_argument("need at least one shot");
    BitstringCounts out;
    out.n = n;
    for (long long i = 0; i < m; ++i) {
        Rng shot = rng.stream("shot", std::uint64_t(i));
        BitMask z{};
        for (std::size_t j = 0; j < codewords.size(); ++j)
            if (gammas[j] > 0 && shot.bernoulli(gammas[j])) z = z ^ codewords[j].bits;
        if (gamma_r > 0)
            for (int b = 0; b < n; ++b)
                if (shot.bernoulli(gamma_r)) z.set(b, !z.test(b));
        out.add(Bitstring(n, z));
    }
    return out;
}

EstimateReport iterate_second_order(const EstimateReport &raw, const SignalSet &signals, RamseyProtocol protocol,
                                    double phi, int passes) {
    if (passes < 1) throw std::invalid_argument("need at least one pass");
    EstimateReport ref = second_order_correct(raw, signals, protocol, phi);
    for (int p = 1; p < passes; ++p) ref = second_order_correct(raw, signals, protocol, phi, &ref);
    return ref;
}

}  // namespace scrsense
