#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "scramble_sense/cli_config.hpp"
#include "scramble_sense/readout.hpp"
#include "scramble_sense/tableau.hpp"
#include "scramble_sense/theory.hpp"

using nlohmann::json;
using namespace scrsense;

namespace {

// Worker cap honored by the (currently serial, deterministic) pipeline;
// validated here so misconfigured environments fail loudly.
int thread_cap() {
    const char *env = std::getenv("SCRAMBLE_SENSE_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    if (v < 1) throw ConfigError("SCRAMBLE_SENSE_THREADS must be a positive integer");
    return v;
}

int run_files_command(const std::string &config_path, bool scaling) {
    ParsedConfig config = load_config_file(config_path);
    for (const std::string &w : check_config(config.experiment)) std::cerr << "warning: " << w << "\n";
    std::vector<std::string> files = scaling ? cmd_scaling(config) : cmd_run(config);
    for (const std::string &f : files) std::cout << f << "\n";
    return 0;
}

struct TheoryFlags {
    std::string protocol, required_kind;
    double m = -1, a = 1, gamma = 0, phi = kPhiGolden, delta = -1, gamma_r = -1, theta = 0, beta = 1;
    int s = 1, n = -1, k = -1, n_c = -1, l_u = -1, l_v = -1, q = 2;
    bool collision = false, m_star = false, weingarten = false;
};

int theory_command(const TheoryFlags &f) {
    json out;
    bool any = false;
    if (!f.protocol.empty()) {
        if (f.m <= 0) throw ConfigError("--protocol needs --M");
        PredictionInput in;
        in.m = f.m;
        in.a = f.a;
        in.gamma = f.gamma;
        in.phi = f.phi;
        in.s_a = f.s;
        in.beta = f.beta;
        if (f.protocol == "quadratic")
            in.protocol = PredictionProtocol::quadratic;
        else if (f.protocol == "tilted")
            in.protocol = PredictionProtocol::tilted;
        else if (f.protocol == "clifford_incoherent")
            in.protocol = PredictionProtocol::clifford_incoherent;
        else if (f.protocol == "clifford_coherent")
            in.protocol = PredictionProtocol::clifford_coherent;
        else if (f.protocol == "ruc")
            in.protocol = PredictionProtocol::ruc;
        else
            throw ConfigError("unknown prediction protocol \"" + f.protocol + "\"");
        out["variance"] = predict_variance(in);
        any = true;
    }
    if (!f.required_kind.empty()) {
        if (f.k < 0 || f.delta < 0) throw ConfigError("--required-circuits needs --K and --delta");
        CircuitKind kind;
        if (f.required_kind == "incoherent") {
            if (f.n < 0) throw ConfigError("--required-circuits incoherent needs --N");
            kind = CircuitKind::incoherent;
        } else if (f.required_kind == "coherent") {
            kind = CircuitKind::coherent;
        } else {
            throw ConfigError("--required-circuits takes incoherent or coherent");
        }
        out["required_circuits"] = required_circuits(kind, f.k, std::max(f.n, 0), f.delta);
        any = true;
    }
    if (f.collision) {
        if (f.k < 0 || f.n < 0 || f.n_c < 0) throw ConfigError("--collision-bound needs --K, --N and --n-c");
        out["collision_bound"] = collision_bound(f.k, f.n, f.n_c);
        any = true;
    }
    if (f.m_star) {
        if (f.gamma_r < 0 || f.n < 0 || f.theta == 0) throw ConfigError("--m-star needs --gamma-r, --N and --theta");
        out["m_star"] = readout_transition_m_star(f.gamma_r, f.n, f.theta);
        any = true;
    }
    if (f.weingarten) {
        if (f.l_u < 0 || f.l_v < 0) throw ConfigError("--weingarten needs --lu and --lv");
        out["weingarten_d"] = weingarten_d(f.l_u, f.l_v, f.q);
        any = true;
    }
    if (!any) throw ConfigError("theory: nothing requested (see --help)");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int decode_demo_command(int n, int k, std::uint64_t seed, double gamma_r, int draws) {
    if (n < 1 || n > 64 || k < 1) throw ConfigError("decode-demo needs 1 <= N <= 64 and K >= 1");
    if (gamma_r < 0 || gamma_r >= 0.5) throw ConfigError("gamma-r must be in [0, 0.5)");
    Rng rng(seed);
    std::vector<PauliString> paulis = random_pauli_pool(n, k, n, rng);
    CliffordTableau inv = inverse(sample_uniform_clifford(n, rng));
    std::vector<Bitstring> words;
    for (const PauliString &p : paulis) words.push_back(x_support(conjugate(inv, p)));
    CodewordSet set = make_codeword_set(n, words);  // duplicate -> collision, exit 3
    CorrectabilityReport report = correctability_check(set, gamma_r);

    int in_radius = 0, recovered = 0;
    int radius = (set.d_min - 1) / 2;
    for (int it = 0; it < draws; ++it) {
        const Bitstring &c = set.codewords[rng.uniform_int(set.codewords.size())];
        BitMask bits = c.bits;
        int flips = 0;
        for (int b = 0; b < n; ++b)
            if (rng.bernoulli(gamma_r)) {
                bits.set(b, !bits.test(b));
                ++flips;
            }
        if (flips <= radius) ++in_radius;
        if (decode_nearest(Bitstring(n, bits), set).codeword == c) ++recovered;
    }

    json out;
    out["n"] = n;
    out["codewords"] = k + 1;  // including the all-zero string
    out["d_min"] = set.d_min;
    out["threshold"] = report.threshold;
    out["gamma_r"] = gamma_r;
    out["pass"] = report.pass;
    out["d_min_bound"] = report.bound;
    out["d_min_bound_exp"] = report.bound_exp;
    out["draws"] = draws;
    out["in_radius_fraction"] = draws ? double(in_radius) / draws : 0.0;
    out["recovered_fraction"] = draws ? double(recovered) / draws : 0.0;
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Scrambling-based multiparameter sensing toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App *run = app.add_subcommand("run", "run one experiment and write estimates.csv + summary.json");
    run->add_option("config", config_path, "JSON config file")->required();
    CLI::App *scaling = app.add_subcommand("scaling", "sweep shot counts and write scaling.csv");
    scaling->add_option("config", config_path, "JSON config file")->required();

    TheoryFlags tf;
    CLI::App *theory = app.add_subcommand("theory", "closed-form predictions as JSON on stdout");
    theory->add_option("--protocol", tf.protocol,
                       "variance prediction: quadratic|tilted|clifford_incoherent|clifford_coherent|ruc");
    theory->add_option("--M", tf.m, "total shots");
    theory->add_option("--A", tf.a, "signal fidelity");
    theory->add_option("--gamma", tf.gamma, "incoherent amplitude");
    theory->add_option("--phi", tf.phi, "tilt angle");
    theory->add_option("--s", tf.s, "Z-string weight");
    theory->add_option("--beta", tf.beta, "RUC calibration constant");
    theory->add_option("--required-circuits", tf.required_kind, "incoherent|coherent");
    theory->add_option("--K", tf.k, "number of candidate signals");
    theory->add_option("--N", tf.n, "number of qubits");
    theory->add_option("--delta", tf.delta, "failure probability budget");
    theory->add_flag("--collision-bound", tf.collision, "pairwise collision union bound");
    theory->add_option("--n-c", tf.n_c, "number of circuits");
    theory->add_flag("--m-star", tf.m_star, "readout transition shot count");
    theory->add_option("--gamma-r", tf.gamma_r, "readout error rate");
    theory->add_option("--theta", tf.theta, "signal angle");
    theory->add_flag("--weingarten", tf.weingarten, "lightcone Weingarten factor");
    theory->add_option("--lu", tf.l_u, "lightcone coordinate l_u");
    theory->add_option("--lv", tf.l_v, "lightcone coordinate l_v");
    theory->add_option("--q", tf.q, "local dimension");

    int dd_n = 12, dd_k = 8, dd_draws = 10000;
    std::uint64_t dd_seed = 1;
    double dd_gamma_r = 0.05;
    CLI::App *demo = app.add_subcommand("decode-demo", "codeword statistics for a random instance");
    demo->add_option("--N", dd_n, "number of qubits (<= 64)");
    demo->add_option("--K", dd_k, "number of incoherent signals");
    demo->add_option("--seed", dd_seed, "random seed");
    demo->add_option("--gamma-r", dd_gamma_r, "readout error rate");
    demo->add_option("--draws", dd_draws, "Monte Carlo draws");

    std::string preset_name, preset_out;
    CLI::App *preset = app.add_subcommand("preset", "emit a bundled config (fig2, fig3, ruc, hamiltonian)");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--out", preset_out, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
        (void)thread_cap();
        if (*run) return run_files_command(config_path, false);
        if (*scaling) return run_files_command(config_path, true);
        if (*theory) return theory_command(tf);
        if (*demo) return decode_demo_command(dd_n, dd_k, dd_seed, dd_gamma_r, dd_draws);
        if (*preset) {
            std::string text = preset_config(preset_name);
            (void)parse_config_text(text);  // presets must stay schema-valid
            if (preset_out.empty()) {
                std::cout << text;
            } else {
                std::FILE *f = std::fopen(preset_out.c_str(), "wb");
                if (!f) throw std::runtime_error("cannot open " + preset_out);
                std::fwrite(text.data(), 1, text.size(), f);
                std::fclose(f);
            }
            return 0;
        }
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
