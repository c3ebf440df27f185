#include "scramble_sense/estimator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "scramble_sense/readout.hpp"

namespace scrsense {

namespace {

bool is_z_string(const PauliString &p) { return p.x.none() && !p.z.none() && p.phase == 0; }

double total_shots(const std::vector<BitstringCounts> &counts) {
    double m = 0;
    for (const auto &c : counts) m += c.shots;
    return m;
}

// Generator+time key for overlap matching.
std::string triple_key(const PauliString &p, int t) { return to_string(p) + "@" + std::to_string(t); }

Eigen::VectorXd solve_normal(Eigen::MatrixXd g, const Eigen::VectorXd &rhs, bool allow_ridge) {
    if (allow_ridge) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        double lmax = es.eigenvalues().maxCoeff();
        double lmin = es.eigenvalues().minCoeff();
        if (lmin <= 0 || lmax / lmin > 1e12) {
            double lambda = 1e-10 * g.trace() / double(g.rows());
            g.diagonal().array() += lambda;
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("normal system factorization failed");
    Eigen::VectorXd v = ldlt.solve(rhs);
    if (!v.allFinite()) throw std::runtime_error("normal system solve produced non-finite values");
    return v;
}

}  // namespace

const SignalEstimate *EstimateReport::find(int id) const {
    for (const auto &e : estimates)
        if (e.id == id) return &e;
    return nullptr;
}

SignalEstimate *EstimateReport::find(int id) {
    for (auto &e : estimates)
        if (e.id == id) return &e;
    return nullptr;
}

std::vector<long long> split_shots(long long m, int n_c) {
    if (n_c < 1) throw std::invalid_argument("need at least one circuit");
    std::vector<long long> out(n_c, m / n_c);
    for (long long r = 0; r < m % n_c; ++r) ++out[r];
    return out;
}

EstimateReport estimate_quadratic(const BitstringCounts &counts, const SignalSet &signals, double gamma_r) {
    double m = counts.shots;
    if (m <= 0) throw std::invalid_argument("empty counts");
    int n = signals.n;

    auto frequency = [&](const Bitstring &a) {
        if (gamma_r == 0) {
            auto it = counts.counts.find(a);
            return it == counts.counts.end() ? 0.0 : it->second / m;
        }
        double f = 0;
        for (const auto &[j, w] : counts.counts) f += confusion_inverse_weight(a, j, gamma_r, n) * w;
        return f / m;
    };

    EstimateReport report;
    report.a_hat = frequency(Bitstring::from_u64(n, 0));
    if (report.a_hat <= 0) throw std::runtime_error("signal-fidelity estimate non-positive after readout correction");

    for (const SignalSpec &sig : signals.signals) {
        SignalEstimate e;
        e.id = sig.id;
        e.kind = sig.kind;
        if (sig.kind != SignalKind::coherent) {
            e.estimable = false;
            report.estimates.push_back(e);
            continue;
        }
        if (!is_z_string(sig.generator)) throw std::invalid_argument("quadratic estimator requires Z-string signals");
        double theta2 = frequency(Bitstring(n, sig.generator.z)) / report.a_hat;
        e.raw_v = theta2;
        e.estimate = std::sqrt(std::max(theta2, 0.0));
        e.predicted_std = std::sqrt(1.0 / (4.0 * report.a_hat * m));
        report.estimates.push_back(e);
    }
    return report;
}

EstimateReport estimate_tilted(const BitstringCounts &counts, const SignalSet &signals, double phi, double gamma_r) {
    double m = counts.shots;
    if (m <= 0) throw std::invalid_argument("empty counts");

    EstimateReport report;
    report.a_hat = 1.0;  // not identified by the tilted protocol
    for (const SignalSpec &sig : signals.signals) {
        SignalEstimate e;
        e.id = sig.id;
        e.kind = sig.kind;
        if (sig.kind != SignalKind::coherent) {
            e.estimable = false;
            report.estimates.push_back(e);
            continue;
        }
        if (!is_z_string(sig.generator)) throw std::invalid_argument("tilted estimator requires Z-string signals");
        int s_a = sig.generator.z.popcount();
        double sine = std::sin(s_a * phi);
        if (std::abs(sine) < 1e-12) {
            e.estimable = false;
            report.estimates.push_back(e);
            continue;
        }
        Bitstring mask(signals.n, sig.generator.z);
        double acc = 0;
        for (const auto &[z, w] : counts.counts) acc += (overlap_parity(z, mask) ? -w : w);
        // the parity character is an eigenvector of the bit-flip channel
        // with eigenvalue (1-2 gamma_r)^{s_a}; undo it exactly
        double scale = gamma_r > 0 ? std::pow(1.0 - 2.0 * gamma_r, -s_a) : 1.0;
        e.estimate = scale * acc / (2.0 * sine * m);
        e.raw_v = e.estimate;
        e.predicted_std = scale / (2.0 * std::abs(sine) * std::sqrt(m));
        report.estimates.push_back(e);
    }
    return report;
}

EstimateReport estimate_clifford_incoherent(const std::vector<BitstringCounts> &counts,
                                            const std::vector<std::vector<PerturbationPattern>> &patterns,
                                            const SignalSet &signals) {
    int n_c = int(counts.size());
    if (n_c < 1 || patterns.size() != counts.size()) throw std::invalid_argument("counts/patterns mismatch");
    std::vector<const SignalSpec *> cand;
    for (const SignalSpec &sig : signals.signals)
        if (sig.kind == SignalKind::incoherent) cand.push_back(&sig);
    int k = int(cand.size());
    for (const auto &row : patterns)
        if (int(row.size()) != k) throw std::invalid_argument("pattern row size mismatch");

    // codewords[c][l]: l = 0 is the zero string, l >= 1 the signal bitstrings
    std::vector<std::vector<Bitstring>> codewords(n_c);
    for (int c = 0; c < n_c; ++c) {
        codewords[c].push_back(Bitstring::from_u64(signals.n, 0));
        for (int l = 0; l < k; ++l) codewords[c].push_back(patterns[c][l].z_prime);
    }

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    for (int c = 0; c < n_c; ++c) {
        for (int l = 0; l <= k; ++l)
            for (int l2 = l; l2 <= k; ++l2)
                if (codewords[c][l] == codewords[c][l2]) {
                    g(l, l2) += 1;
                    if (l != l2) g(l2, l) += 1;
                }
        double shots = counts[c].shots;
        if (shots <= 0) throw std::invalid_argument("circuit with no shots");
        for (int l = 0; l <= k; ++l) {
            auto it = counts[c].counts.find(codewords[c][l]);
            if (it != counts[c].counts.end()) rhs(l) += it->second / shots;
        }
    }
    // full collision: two columns identical in every circuit
    for (int l = 0; l <= k; ++l)
        for (int l2 = l + 1; l2 <= k; ++l2)
            if (g(l, l2) == double(n_c))
                throw std::runtime_error("codeword collision between signals " +
                                         std::to_string(l == 0 ? -1 : cand[l - 1]->id) + " and " +
                                         std::to_string(cand[l2 - 1]->id) + " in every circuit");

    Eigen::VectorXd v = solve_normal(g, rhs, false);
    EstimateReport report;
    report.a_hat = v(0);
    double m = total_shots(counts);
    for (int l = 0; l < k; ++l) {
        SignalEstimate e;
        e.id = cand[l]->id;
        e.kind = SignalKind::incoherent;
        e.raw_v = v(l + 1);
        double denom = v(l + 1) + v(0);
        e.estimate = denom > 0 ? v(l + 1) / denom : 0.0;
        double a = std::max(report.a_hat, 1e-12);
        e.predicted_std = std::sqrt(std::max(e.estimate, 0.0) / (a * m));
        report.estimates.push_back(e);
    }
    return report;
}

EstimateReport estimate_clifford_coherent(const std::vector<BitstringCounts> &counts,
                                          const std::vector<std::vector<PerturbationPattern>> &patterns,
                                          const SignalSet &signals, double a_hat) {
    int n_c = int(counts.size());
    if (n_c < 1 || patterns.size() != counts.size()) throw std::invalid_argument("counts/patterns mismatch");
    if (a_hat <= 0) throw std::invalid_argument("need a positive signal-fidelity estimate");
    std::vector<const SignalSpec *> cand;
    for (const SignalSpec &sig : signals.signals)
        if (sig.kind == SignalKind::coherent) cand.push_back(&sig);
    int k = int(cand.size());
    for (const auto &row : patterns)
        if (int(row.size()) != k) throw std::invalid_argument("pattern row size mismatch");

    std::vector<int> active;  // candidate indices with sigma != 0 somewhere
    for (int l = 0; l < k; ++l) {
        bool any = false;
        for (int c = 0; c < n_c; ++c) any = any || patterns[c][l].sigma != 0;
        if (any) active.push_back(l);
    }

    int ka = int(active.size());
    int n = signals.n;
    double pow2n = std::pow(2.0, n);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(ka + 1, ka + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ka + 1);
    g(0, 0) = double(n_c) / pow2n;
    rhs(0) = double(n_c) / pow2n;  // frequencies sum to 1 per circuit
    for (int c = 0; c < n_c; ++c) {
        double shots = counts[c].shots;
        if (shots <= 0) throw std::invalid_argument("circuit with no shots");
        for (int i = 0; i < ka; ++i) {
            const PerturbationPattern &pi = patterns[c][active[i]];
            if (pi.sigma == 0) continue;
            for (int j = i; j < ka; ++j) {
                const PerturbationPattern &pj = patterns[c][active[j]];
                if (pj.sigma == 0 || !(pi.mask == pj.mask)) continue;
                double entry = double(pi.sigma * pj.sigma) * 4.0 / pow2n;  // 1/2^{n-2}
                g(i + 1, j + 1) += entry;
                if (i != j) g(j + 1, i + 1) += entry;
            }
            double acc = 0;
            for (const auto &[z, w] : counts[c].counts) acc += pi.value(z) * w;
            rhs(i + 1) += acc / shots;
        }
    }
    for (int i = 0; i < ka; ++i)
        for (int j = i + 1; j < ka; ++j)
            if (std::abs(g(i + 1, j + 1)) >= g(i + 1, i + 1) - 1e-9 && g(i + 1, i + 1) > 0 &&
                g(i + 1, i + 1) == g(j + 1, j + 1)) {
                // identical (mask, sigma) columns in every sensitive circuit
                bool same = true;
                for (int c = 0; c < n_c && same; ++c)
                    same = patterns[c][active[i]].sigma == patterns[c][active[j]].sigma &&
                           (patterns[c][active[i]].sigma == 0 ||
                            patterns[c][active[i]].mask == patterns[c][active[j]].mask);
                if (same)
                    throw std::runtime_error("pattern collision between signals " +
                                             std::to_string(cand[active[i]]->id) + " and " +
                                             std::to_string(cand[active[j]]->id));
            }

    Eigen::VectorXd v = solve_normal(g, rhs, false);
    EstimateReport report;
    report.a_hat = a_hat;
    double m = total_shots(counts);
    std::map<int, double> solved;
    for (int i = 0; i < ka; ++i) solved[active[i]] = v(i + 1);
    for (int l = 0; l < k; ++l) {
        SignalEstimate e;
        e.id = cand[l]->id;
        e.kind = SignalKind::coherent;
        auto it = solved.find(l);
        if (it == solved.end()) {
            e.estimable = false;  // sigma = 0 in every circuit
        } else {
            e.raw_v = it->second;
            e.estimate = it->second / a_hat;
            e.predicted_std = 1.0 / (a_hat * std::sqrt(2.0 * m));
        }
        report.estimates.push_back(e);
    }
    return report;
}

EstimateReport estimate_dense(const std::vector<BitstringCounts> &counts,
                              const std::vector<DensePatternSet> &patterns, const SignalSet &signals) {
    int n_c = int(counts.size());
    if (n_c < 1 || patterns.size() != counts.size()) throw std::invalid_argument("counts/patterns mismatch");
    int k = int(signals.signals.size());
    std::size_t d = patterns[0].p0.size();

    auto column = [&](int c, int l) -> const std::vector<double> & {
        if (l == 0) return patterns[c].p0;
        const SignalSpec &sig = signals.signals[l - 1];
        return sig.kind == SignalKind::coherent ? patterns[c].dp.at(sig.id) : patterns[c].k.at(sig.id);
    };

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k + 1, k + 1);  // covariance kernel
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    for (int c = 0; c < n_c; ++c) {
        double shots = counts[c].shots;
        if (shots <= 0) throw std::invalid_argument("circuit with no shots");
        for (int l = 0; l <= k; ++l) {
            const std::vector<double> &cl = column(c, l);
            for (int l2 = l; l2 <= k; ++l2) {
                const std::vector<double> &cl2 = column(c, l2);
                double dot = 0, wdot = 0;
                for (std::size_t z = 0; z < d; ++z) {
                    dot += cl[z] * cl2[z];
                    wdot += cl[z] * cl2[z] * patterns[c].p0[z];
                }
                g(l, l2) += dot;
                h(l, l2) += wdot / shots;
                if (l != l2) {
                    g(l2, l) += dot;
                    h(l2, l) += wdot / shots;
                }
            }
            double acc = 0;
            for (const auto &[z, w] : counts[c].counts) acc += cl[std::size_t(z.lo())] * w;
            rhs(l) += acc / shots;
        }
    }

    Eigen::VectorXd v = solve_normal(g, rhs, true);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    Eigen::MatrixXd cov = ldlt.solve(h).transpose();
    cov = ldlt.solve(cov);  // G^{-1} H G^{-1}

    EstimateReport report;
    report.a_hat = v(0);
    double v0 = v(0);
    for (int l = 0; l < k; ++l) {
        const SignalSpec &sig = signals.signals[l];
        SignalEstimate e;
        e.id = sig.id;
        e.kind = sig.kind;
        e.raw_v = v(l + 1);
        if (sig.kind == SignalKind::coherent) {
            e.estimate = v0 != 0 ? v(l + 1) / v0 : 0.0;
        } else {
            double denom = v0 + v(l + 1);
            e.estimate = denom > 0 ? v(l + 1) / denom : 0.0;
        }
        double var = std::max(cov(l + 1, l + 1), 0.0);
        e.predicted_std = std::sqrt(var) / std::max(std::abs(v0), 1e-12);
        report.estimates.push_back(e);
    }
    return report;
}

EstimateReport hard_threshold(const EstimateReport &report, double theta_min, double gamma_min) {
    EstimateReport out = report;
    for (SignalKind kind : {SignalKind::coherent, SignalKind::incoherent}) {
        double floor = kind == SignalKind::coherent ? theta_min : gamma_min;
        double var_sum = 0;
        int nvar = 0;
        for (const auto &e : out.estimates)
            if (e.kind == kind && e.estimable) {
                var_sum += e.predicted_std * e.predicted_std;
                ++nvar;
            }
        if (nvar == 0) continue;
        double noise = 2.0 * std::sqrt(var_sum / nvar);
        double threshold = floor > 0 ? std::max(0.0, floor - noise) : noise;
        for (auto &e : out.estimates)
            if (e.kind == kind && e.estimable && std::abs(e.estimate) < threshold) {
                e.estimate = 0.0;
                e.thresholded = true;
            }
    }
    return out;
}

EstimateReport second_order_correct(const EstimateReport &report, const SignalSet &signals,
                                    RamseyProtocol protocol, double phi, const EstimateReport *reference) {
    const EstimateReport &ref = reference ? *reference : report;
    EstimateReport out = report;
    struct Entry {
        BitMask mask;
        int s = 0;
        double est = 0;   // base value being corrected (from `report`)
        double raw = 0;
        double ref_est = 0;  // values feeding the subtracted products
        double ref_raw = 0;
        SignalEstimate *slot = nullptr;
    };
    std::vector<Entry> cand;
    for (const SignalSpec &sig : signals.signals) {
        if (sig.kind != SignalKind::coherent) continue;
        SignalEstimate *slot = out.find(sig.id);
        const SignalEstimate *orig = report.find(sig.id);
        const SignalEstimate *re = ref.find(sig.id);
        if (!slot || !orig || !re || !orig->estimable) continue;
        cand.push_back({sig.generator.z, sig.generator.z.popcount(), orig->estimate, orig->raw_v, re->estimate,
                        re->raw_v, slot});
    }
    for (auto &c : cand) {
        double delta = 0;
        for (std::size_t a = 0; a < cand.size(); ++a)
            for (std::size_t b = a + 1; b < cand.size(); ++b) {
                if (cand[a].slot == c.slot || cand[b].slot == c.slot) continue;
                if (!((cand[a].mask ^ cand[b].mask) == c.mask)) continue;
                if (protocol == RamseyProtocol::quadratic) {
                    delta += cand[a].ref_raw * cand[b].ref_raw;  // products of theta^2 estimates
                } else {
                    double coeff = (std::cos((cand[a].s - cand[b].s) * phi) - std::cos(c.s * phi)) /
                                   std::sin(c.s * phi);
                    delta += cand[a].ref_est * cand[b].ref_est * coeff;
                }
            }
        if (delta == 0) continue;
        if (protocol == RamseyProtocol::quadratic) {
            double theta2 = c.raw - delta;
            c.slot->raw_v = theta2;
            c.slot->estimate = std::sqrt(std::max(theta2, 0.0));
        } else {
            c.slot->estimate = c.est - delta;
            c.slot->raw_v = c.slot->estimate;
        }
        c.slot->corrected = true;
    }
    return out;
}

EstimateReport overlap_correct(const EstimateReport &incoherent, const EstimateReport &coherent,
                               const SignalSet &signals) {
    std::map<std::string, const SignalSpec *> coherent_by_key;
    for (const SignalSpec &sig : signals.signals)
        if (sig.kind == SignalKind::coherent) coherent_by_key[triple_key(sig.generator, sig.t)] = &sig;

    EstimateReport out = incoherent;
    double v0 = incoherent.a_hat;
    for (const SignalSpec &sig : signals.signals) {
        if (sig.kind != SignalKind::incoherent) continue;
        SignalEstimate *slot = out.find(sig.id);
        if (!slot || !slot->estimable) continue;
        auto it = coherent_by_key.find(triple_key(sig.generator, sig.t));
        if (it == coherent_by_key.end()) continue;
        const SignalEstimate *th = coherent.find(it->second->id);
        if (!th || !th->estimable) continue;
        double corrected = slot->raw_v - incoherent.a_hat * th->estimate * th->estimate;
        corrected = std::max(corrected, 0.0);
        slot->estimate = corrected + v0 > 0 ? corrected / (corrected + v0) : 0.0;
        slot->corrected = true;
    }
    return out;
}

}  // namespace scrsense
