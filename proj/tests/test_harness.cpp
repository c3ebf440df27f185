#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "scramble_sense/dense_sim.hpp"
#include "scramble_sense/harness.hpp"
#include "scramble_sense/readout.hpp"
#include "scramble_sense/theory.hpp"

using namespace scrsense;

namespace {

SignalSpec spec(int id, SignalKind kind, const PauliString &p, int t, double amp) {
    SignalSpec s;
    s.id = id;
    s.kind = kind;
    s.generator = p;
    s.t = t;
    s.amplitude = amp;
    return s;
}

}  // namespace

TEST_CASE("median_of_means") {
    SUBCASE("single group is the mean") {
        CHECK(median_of_means({1.0, 2.0, 6.0}, 1) == doctest::Approx(3.0));
    }
    SUBCASE("outlier robustness") {
        // one wild value contaminates only one of five group means
        std::vector<double> v(25, 1.0);
        v[7] = 1e6;
        CHECK(median_of_means(v, 5) == doctest::Approx(1.0));
    }
    SUBCASE("group count clamped to the sample size") {
        CHECK(median_of_means({4.0}, 5) == doctest::Approx(4.0));
    }
    SUBCASE("empty input throws") { CHECK_THROWS_AS(median_of_means({}, 3), std::invalid_argument); }
}

TEST_CASE("log_log_slope") {
    SUBCASE("exact power law") {
        std::vector<double> x = {10, 100, 1000, 12345};
        std::vector<double> y;
        for (double v : x) y.push_back(3.7 * std::pow(v, -0.5));
        CHECK(log_log_slope(x, y) == doctest::Approx(-0.5).epsilon(1e-12));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(log_log_slope({1.0}, {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(log_log_slope({1.0, 2.0}, {1.0, 0.0}), std::invalid_argument);
    }
}

TEST_CASE("sample_codeword_shots") {
    SUBCASE("zero gammas and gamma_r: point mass at zero") {
        std::vector<Bitstring> cw = {Bitstring::from_u64(5, 19)};
        BitstringCounts c = sample_codeword_shots(5, cw, {0.0}, 500, 0.0, Rng(7));
        CHECK(c.counts.at(Bitstring::from_u64(5, 0)) == 500);
    }
    SUBCASE("deterministic for a fixed substream") {
        std::vector<Bitstring> cw = {Bitstring::from_u64(8, 0x3c), Bitstring::from_u64(8, 0xa1)};
        std::vector<double> g = {0.1, 0.08};
        BitstringCounts a = sample_codeword_shots(8, cw, g, 2000, 0.03, Rng(11));
        BitstringCounts b = sample_codeword_shots(8, cw, g, 2000, 0.03, Rng(11));
        REQUIRE(a.counts.size() == b.counts.size());
        for (const auto &[z, w] : a.counts) CHECK(b.counts.at(z) == w);
    }
    SUBCASE("matches the dense clifford-z distribution within 5 sigma") {
        int n = 6;
        Rng rng(23);
        CircuitFamily fam = sample_circuit_family(FamilyKind::global_uniform, n, 1, rng);
        SignalSet sigs;
        sigs.n = n;
        sigs.t_steps = 1;
        sigs.signals = {spec(0, SignalKind::incoherent, make_pauli("XYZIIX"), 1, 0.1),
                        spec(1, SignalKind::incoherent, make_pauli("IZXXYI"), 1, 0.07)};
        ProtocolRandomness r;
        r.family = &fam;
        Circuit circ = build_protocol_circuit(Protocol::clifford_z, sigs, r);
        std::vector<double> p = exact_distribution(circ);

        std::vector<Bitstring> cw;
        std::vector<double> g;
        for (const auto &s : sigs.signals) {
            cw.push_back(clifford_incoherent_pattern(fam.prefixes[0], s.generator).z_prime);
            g.push_back(s.amplitude);
        }
        long long m = 40000;
        BitstringCounts counts = sample_codeword_shots(n, cw, g, m, 0.0, Rng(31));
        for (std::size_t z = 0; z < p.size(); ++z) {
            auto it = counts.counts.find(Bitstring::from_u64(n, z));
            double freq = it == counts.counts.end() ? 0.0 : it->second / m;
            double sigma = std::sqrt(std::max(p[z] * (1 - p[z]), 1.0 / m) / m);
            CHECK(std::abs(freq - p[z]) <= 5 * sigma);
        }
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(sample_codeword_shots(4, {Bitstring::from_u64(4, 1)}, {}, 10, 0.0, Rng(1)),
                        std::invalid_argument);
        CHECK_THROWS_AS(sample_codeword_shots(4, {}, {}, 10, 0.5, Rng(1)), std::invalid_argument);
        CHECK_THROWS_AS(sample_codeword_shots(4, {}, {}, 0, 0.0, Rng(1)), std::invalid_argument);
    }
}

TEST_CASE("run_trial basics") {
    SUBCASE("zero-signal clifford-z with gamma_r = 0: RMS exactly 0") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::clifford_global;
        cfg.n = 6;
        cfg.t_steps = 1;
        cfg.n_circuits = 2;
        cfg.signals.n = 6;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::incoherent, make_pauli("XXIIZY"), 1, 0.0),
                               spec(1, SignalKind::incoherent, make_pauli("ZIYIXI"), 1, 0.0)};
        TrialResult t = run_trial(cfg, 2000);
        CHECK(t.metrics.rms_incoherent == 0.0);
        CHECK(t.metrics.max_abs_error == 0.0);
        CHECK(t.report.a_hat == doctest::Approx(1.0));
    }
    SUBCASE("seed-repeat determinism") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::tilted;
        cfg.n = 4;
        cfg.signals.n = 4;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("ZZII"), 1, 0.1),
                               spec(1, SignalKind::coherent, make_pauli("IIZZ"), 1, -0.08)};
        cfg.seed = 99;
        TrialResult a = run_trial(cfg, 5000, 2);
        TrialResult b = run_trial(cfg, 5000, 2);
        REQUIRE(a.report.estimates.size() == b.report.estimates.size());
        for (std::size_t i = 0; i < a.report.estimates.size(); ++i)
            CHECK(a.report.estimates[i].estimate == b.report.estimates[i].estimate);
        TrialResult c = run_trial(cfg, 5000, 3);  // different rep, different draw
        CHECK(a.report.estimates[0].estimate != c.report.estimates[0].estimate);
    }
    SUBCASE("quadratic single signal recovered within 5 predicted sigma") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::quadratic;
        cfg.n = 4;
        cfg.signals.n = 4;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("ZIZI"), 1, -0.12)};
        TrialResult t = run_trial(cfg, 200000);
        const SignalEstimate *e = t.report.find(0);
        REQUIRE(e);
        // theta-hat^2 has std ~ 1/(2 sqrt(AM)); propagate to theta at theta = 0.12
        double sigma_theta = e->predicted_std / (2 * 0.12);
        CHECK(std::abs(e->estimate - 0.12) <= 5 * sigma_theta);
    }
    SUBCASE("tilted recovers sign") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::tilted;
        cfg.n = 4;
        cfg.signals.n = 4;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("ZIII"), 1, -0.1)};
        TrialResult t = run_trial(cfg, 100000);
        const SignalEstimate *e = t.report.find(0);
        REQUIRE(e);
        CHECK(std::abs(e->estimate - (-0.1)) <= 5 * e->predicted_std);
    }
    SUBCASE("clifford end-to-end: both kinds within 5 predicted sigma") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::clifford_global;
        cfg.n = 6;
        cfg.t_steps = 1;
        cfg.n_circuits = 8;
        cfg.signals.n = 6;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("XYIIZI"), 1, 0.12),
                               spec(1, SignalKind::coherent, make_pauli("IIZXIY"), 1, 0.0),
                               spec(2, SignalKind::incoherent, make_pauli("YIXZII"), 1, 0.09),
                               spec(3, SignalKind::incoherent, make_pauli("IXIYZX"), 1, 0.0)};
        cfg.seed = 5;
        TrialResult t = run_trial(cfg, 400000);
        for (const SignalSpec &s : cfg.signals.signals) {
            const SignalEstimate *e = t.report.find(s.id);
            REQUIRE(e);
            if (!e->estimable) continue;
            CHECK(std::abs(e->estimate - s.amplitude) <= 5 * std::max(e->predicted_std, 1e-3));
        }
        CHECK(t.metrics.shots_coherent == 200000);
        CHECK(t.metrics.shots_incoherent == 200000);
    }
    SUBCASE("metrics invariant under signal-id relabeling") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::clifford_global;
        cfg.n = 6;
        cfg.n_circuits = 3;
        cfg.signals.n = 6;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::incoherent, make_pauli("XXIIZY"), 1, 0.1),
                               spec(1, SignalKind::incoherent, make_pauli("ZIYIXI"), 1, 0.05)};
        TrialResult a = run_trial(cfg, 20000);
        for (auto &s : cfg.signals.signals) s.id = 10 * s.id + 3;
        TrialResult b = run_trial(cfg, 20000);
        CHECK(a.metrics.rms_incoherent == b.metrics.rms_incoherent);
        CHECK(a.metrics.max_abs_error == b.metrics.max_abs_error);
    }
}

TEST_CASE("decode-enabled fast path tracks the noiseless run") {
    // strong robustness, desk scale: N = 16, incoherent-only, decode on
    int n = 16;
    Rng rng(202);
    std::vector<PauliString> pool = random_pauli_pool(n, 8, n, rng);
    ExperimentConfig cfg;
    cfg.protocol = ProtocolFamily::clifford_global;
    cfg.n = n;
    cfg.t_steps = 1;
    cfg.n_circuits = 1;
    cfg.signals.n = n;
    cfg.signals.t_steps = 1;
    for (int i = 0; i < 8; ++i)
        cfg.signals.signals.push_back(spec(i, SignalKind::incoherent, pool[i], 1, 0.07 + 0.004 * i));
    cfg.seed = 17;
    cfg.repetitions = 1;

    TrialResult clean = run_trial(cfg, 40000);
    // this instance has d_min = 3: stay below d_min/2N - 1/N = 0.03125
    cfg.gamma_r = 0.03;
    cfg.corrections.decode = true;
    TrialResult noisy = run_trial(cfg, 40000);
    CHECK(noisy.metrics.rms_incoherent <= 1.3 * std::max(clean.metrics.rms_incoherent, 1e-3));
}

TEST_CASE("check_config") {
    ExperimentConfig cfg;
    cfg.protocol = ProtocolFamily::clifford_global;
    cfg.n = 6;
    cfg.n_circuits = 1;
    cfg.signals.n = 6;
    cfg.signals.t_steps = 1;
    for (int i = 0; i < 40; ++i)
        cfg.signals.signals.push_back(spec(i, i % 2 ? SignalKind::coherent : SignalKind::incoherent,
                                           single_site_pauli(6, i % 6, i % 2 ? 'X' : 'Y'), 1, 0.0));
    std::vector<std::string> w = check_config(cfg);
    CHECK(w.size() == 2);  // both collision and insensitivity advisories
    cfg.n_circuits = 32;
    CHECK(check_config(cfg).empty());
    ExperimentConfig ramsey;
    ramsey.protocol = ProtocolFamily::tilted;
    ramsey.n_circuits = 2;
    CHECK(check_config(ramsey).size() == 1);
}

TEST_CASE("scaling_sweep") {
    ExperimentConfig cfg;
    cfg.protocol = ProtocolFamily::tilted;
    cfg.n = 4;
    cfg.signals.n = 4;
    cfg.signals.t_steps = 1;
    cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("ZZII"), 1, 0.1),
                           spec(1, SignalKind::coherent, make_pauli("IZIZ"), 1, -0.12)};
    cfg.repetitions = 6;
    cfg.seed = 3;
    std::vector<long long> ms = {1000, 10000, 100000};
    std::vector<ScalingRecord> recs = scaling_sweep(cfg, ms);
    REQUIRE(recs.size() == 3);
    SUBCASE("theory overlay equals sqrt(mean predicted variance)") {
        PredictionInput in;
        in.protocol = PredictionProtocol::tilted;
        in.phi = cfg.phi;
        in.m = 1000;
        in.s_a = 2;
        double var = predict_variance(in);
        CHECK(recs[0].theory_coherent == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
    }
    SUBCASE("SQL slope and agreement with theory") {
        CHECK(recs[2].slope_coherent == doctest::Approx(-0.5).epsilon(0.4));
        for (const ScalingRecord &r : recs) {
            CHECK(r.rms_coherent <= 2.0 * r.theory_coherent);
            CHECK(r.rms_coherent >= r.theory_coherent / 2.0);
        }
    }
    SUBCASE("needs at least 3 shot counts") {
        CHECK_THROWS_AS(scaling_sweep(cfg, {1000, 2000}), std::invalid_argument);
    }
}

TEST_CASE("sample_complexity_beta on a small clifford instance") {
    ExperimentConfig cfg;
    cfg.protocol = ProtocolFamily::clifford_global;
    cfg.n = 6;
    cfg.t_steps = 1;
    cfg.n_circuits = 12;
    cfg.signals.n = 6;
    cfg.signals.t_steps = 1;
    cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("XYIIZI"), 1, 0.1),
                           spec(1, SignalKind::coherent, make_pauli("IZXIIY"), 1, 0.0),
                           spec(2, SignalKind::incoherent, make_pauli("YIXZII"), 1, 0.08),
                           spec(3, SignalKind::incoherent, make_pauli("IXIYZX"), 1, 0.09)};
    cfg.repetitions = 6;
    cfg.seed = 8;
    SampleComplexity beta = sample_complexity_beta(cfg, {40000});
    // coherent target 0.5; generous factor at this small N (the Gram
    // matrix fluctuations scale as 2^{-N/2})
    CHECK(beta.beta_coherent >= 0.2);
    CHECK(beta.beta_coherent <= 1.3);
    double mean_gamma = (0.08 + 0.09) / 2;
    CHECK(beta.beta_incoherent >= mean_gamma / 2);
    CHECK(beta.beta_incoherent <= mean_gamma * 2);
}

TEST_CASE("bias_infinite_m") {
    SUBCASE("zero signals: bias exactly 0") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::tilted;
        cfg.n = 4;
        cfg.signals.n = 4;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("ZZII"), 1, 0.0),
                               spec(1, SignalKind::coherent, make_pauli("ZIZI"), 1, 0.0)};
        BiasReport b = bias_infinite_m(cfg);
        CHECK(b.worst_case_squared == 0.0);
    }
    SUBCASE("single tilted signal theta = 0.05: |bias| <= theta^3") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::tilted;
        cfg.n = 4;
        cfg.signals.n = 4;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("ZIII"), 1, 0.05)};
        BiasReport b = bias_infinite_m(cfg);
        CHECK(std::abs(b.biases[0].bias) <= 0.05 * 0.05 * 0.05);
    }
    SUBCASE("readout noise convolved exactly and corrected: tilted bias stays third order") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::tilted;
        cfg.n = 4;
        cfg.gamma_r = 0.06;
        cfg.corrections.confusion_inverse = true;
        cfg.signals.n = 4;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("ZIII"), 1, 0.05)};
        BiasReport b = bias_infinite_m(cfg);
        CHECK(std::abs(b.biases[0].bias) <= 0.05 * 0.05 * 0.05);
    }
    SUBCASE("clifford mean squared bias decreases from N = 8 to N = 10 over seeds") {
        double ms8 = 0, ms10 = 0;
        int seeds = 30;
        for (int n : {8, 10}) {
            double &acc = n == 8 ? ms8 : ms10;
            for (int s = 0; s < seeds; ++s) {
                Rng rng(1000 + s);
                std::vector<PauliString> pool = random_pauli_pool(n, 3, n, rng);
                ExperimentConfig cfg;
                cfg.protocol = ProtocolFamily::clifford_global;
                cfg.n = n;
                cfg.t_steps = 1;
                cfg.n_circuits = 2;
                cfg.signals.n = n;
                cfg.signals.t_steps = 1;
                for (int i = 0; i < 3; ++i)
                    cfg.signals.signals.push_back(spec(i, SignalKind::incoherent, pool[i], 1, 0.08));
                cfg.seed = 5000 + s;
                acc += bias_infinite_m(cfg).mean_squared;
            }
            acc /= seeds;
        }
        CHECK(ms10 < ms8);
    }
}

TEST_CASE("collision_empirical") {
    Rng rng(77);
    SUBCASE("k = 1 gives 0") { CHECK(collision_empirical(6, 1, 1, 100, rng) == 0.0); }
    SUBCASE("small instance below the union bound") {
        int draws = 2000;
        double freq = collision_empirical(4, 3, 1, draws, rng);
        double bound = collision_bound(3, 4, 1);
        double sigma = std::sqrt(std::max(freq * (1 - freq), 1.0 / draws) / draws);
        CHECK(freq <= bound + 5 * sigma);
        CHECK(freq > 0);  // at N = 4 collisions do happen
    }
    SUBCASE("n_c = 2 markedly smaller than n_c = 1") {
        double f1 = collision_empirical(4, 4, 1, 1500, rng);
        double f2 = collision_empirical(4, 4, 2, 1500, rng);
        CHECK(f2 <= f1);
        CHECK(f2 <= collision_bound(4, 4, 2) + 5 * std::sqrt(1.0 / 1500.0));
    }
}

TEST_CASE("run_trial on dense protocols") {
    SUBCASE("ruc: sparse instance recovered at large M") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::ruc;
        cfg.n = 6;
        cfg.t_steps = 2;
        cfg.n_circuits = 2;
        cfg.signals.n = 6;
        cfg.signals.t_steps = 2;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("XIIIII"), 1, 0.12),
                               spec(1, SignalKind::coherent, make_pauli("IIYIII"), 2, 0.0),
                               spec(2, SignalKind::incoherent, make_pauli("IIIIZX"), 1, 0.08)};
        cfg.seed = 21;
        TrialResult t = run_trial(cfg, 400000);
        for (const SignalSpec &s : cfg.signals.signals) {
            const SignalEstimate *e = t.report.find(s.id);
            REQUIRE(e);
            CHECK(std::abs(e->estimate - s.amplitude) <= std::max(5 * e->predicted_std, 0.02));
        }
    }
    SUBCASE("hamiltonian: infinite-M bias small for a weak signal") {
        ExperimentConfig cfg;
        cfg.protocol = ProtocolFamily::hamiltonian;
        cfg.n = 6;
        cfg.t_steps = 1;
        cfg.n_circuits = 1;
        cfg.signals.n = 6;
        cfg.signals.t_steps = 1;
        cfg.signals.signals = {spec(0, SignalKind::coherent, make_pauli("IZIIII"), 1, 0.06),
                               spec(1, SignalKind::incoherent, make_pauli("IIIXII"), 1, 0.05)};
        BiasReport b = bias_infinite_m(cfg);
        CHECK(std::abs(b.biases[0].bias) <= 0.01);
        CHECK(std::abs(b.biases[1].bias) <= 0.01);
    }
}
