#include "scramble_sense/cli_config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "scramble_sense/signal.hpp"

namespace scrsense {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (const auto &[key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown key \"" + key + "\" in " + where);
}

ProtocolFamily parse_protocol(const std::string &name) {
    if (name == "quadratic") return ProtocolFamily::quadratic;
    if (name == "tilted") return ProtocolFamily::tilted;
    if (name == "clifford_global") return ProtocolFamily::clifford_global;
    if (name == "clifford_local") return ProtocolFamily::clifford_local;
    if (name == "ruc") return ProtocolFamily::ruc;
    if (name == "hamiltonian") return ProtocolFamily::hamiltonian;
    throw ConfigError("unknown protocol \"" + name + "\"");
}

SignalKind parse_kind(const std::string &name) {
    if (name == "coherent") return SignalKind::coherent;
    if (name == "incoherent") return SignalKind::incoherent;
    throw ConfigError("unknown signal kind \"" + name + "\"");
}

SignalSet parse_signals(const json &list, int n, int t_steps) {
    SignalSet out;
    out.n = n;
    out.t_steps = t_steps;
    int next_id = 0;
    for (const json &item : list) {
        if (!item.is_object()) throw ConfigError("signals entries must be objects");
        reject_unknown_keys(item, {"kind", "pauli", "t", "amplitude"}, "signals entry");
        SignalSpec sig;
        sig.id = next_id++;
        sig.kind = parse_kind(item.at("kind").get<std::string>());
        try {
            sig.generator = make_pauli(item.at("pauli").get<std::string>());
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("bad pauli label: ") + e.what());
        }
        if (sig.generator.n != n) throw ConfigError("pauli label length must equal n");
        if (sig.generator.is_identity()) throw ConfigError("signal generator must not be the identity");
        sig.t = item.value("t", 1);
        if (sig.t < 1 || sig.t > t_steps) throw ConfigError("signal t out of range");
        sig.amplitude = item.value("amplitude", 0.0);
        out.signals.push_back(sig);
    }
    if (!out.unique_triples()) throw ConfigError("duplicate (kind, pauli, t) in signals");
    return out;
}

SignalSet realize_recipe(const json &recipe, int n, int t_steps, std::uint64_t seed) {
    reject_unknown_keys(recipe,
                        {"pool", "max_body", "count", "max_weight", "sparsity", "ranges"},
                        "recipe");
    Rng rng = Rng(seed).stream("recipe");
    std::string pool_name = recipe.at("pool").get<std::string>();
    std::vector<PauliString> pool;
    if (pool_name == "z_strings") {
        pool = z_string_pool(n, recipe.value("max_body", 2));
    } else if (pool_name == "random_pauli") {
        pool = random_pauli_pool(n, recipe.value("count", 64), recipe.value("max_weight", 3), rng);
    } else {
        throw ConfigError("unknown pool \"" + pool_name + "\"");
    }
    Sparsity sparsity;
    if (recipe.contains("sparsity")) {
        const json &s = recipe.at("sparsity");
        reject_unknown_keys(s, {"coherent", "incoherent"}, "recipe.sparsity");
        sparsity.coherent_nonzero = s.value("coherent", 0);
        sparsity.incoherent_nonzero = s.value("incoherent", 0);
    }
    AmplitudeRanges ranges;
    if (recipe.contains("ranges")) {
        const json &r = recipe.at("ranges");
        reject_unknown_keys(r, {"theta_min", "theta_max", "gamma_min", "gamma_max"}, "recipe.ranges");
        ranges.theta_min = r.value("theta_min", ranges.theta_min);
        ranges.theta_max = r.value("theta_max", ranges.theta_max);
        ranges.gamma_min = r.value("gamma_min", ranges.gamma_min);
        ranges.gamma_max = r.value("gamma_max", ranges.gamma_max);
    }
    return random_sparse_instance(pool, t_steps, sparsity, ranges, rng);
}

std::string kind_name(SignalKind k) { return k == SignalKind::coherent ? "coherent" : "incoherent"; }

// Bare "IXYZ..." label (generators are Hermitian with a + sign).
std::string pauli_label(const PauliString &p) {
    std::string s = to_string(p);
    return s.empty() || s[0] != '+' ? s : s.substr(1);
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string artifact_header(const ParsedConfig &config, const char *schema) {
    return std::string("# schema=") + schema + " version=" + kArtifactVersion +
           " seed=" + std::to_string(config.experiment.seed) + " config=" + hex64(config.config_hash) + "\n";
}

}  // namespace

std::uint64_t fnv1a64(const std::string &text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

ParsedConfig parse_config_text(const std::string &json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(doc,
                        {"protocol", "n", "t_steps", "signals", "recipe", "n_circuits", "phi", "gamma_readout",
                         "shots", "seed", "repetitions", "corrections", "output_dir", "hamiltonian_tau",
                         "ruc_beta_coherent", "ruc_beta_incoherent"},
                        "config");

    ParsedConfig out;
    ExperimentConfig &e = out.experiment;
    e.protocol = parse_protocol(doc.at("protocol").get<std::string>());
    e.n = doc.at("n").get<int>();
    if (e.n < 1 || e.n > kMaxQubits) throw ConfigError("n out of range");
    e.t_steps = doc.value("t_steps", 1);
    if (e.t_steps < 1) throw ConfigError("t_steps must be positive");
    e.n_circuits = doc.value("n_circuits", 1);
    if (e.n_circuits < 1) throw ConfigError("n_circuits must be positive");
    if (doc.contains("phi")) e.phi = doc.at("phi").get<double>();
    e.gamma_r = doc.value("gamma_readout", 0.0);
    if (e.gamma_r < 0 || e.gamma_r >= 0.5) throw ConfigError("gamma_readout must be in [0, 0.5)");
    e.seed = doc.value("seed", std::uint64_t(1));
    e.repetitions = doc.value("repetitions", 1);
    if (e.repetitions < 1) throw ConfigError("repetitions must be positive");
    e.hamiltonian_tau = doc.value("hamiltonian_tau", 5.0);
    e.ruc_beta_coherent = doc.value("ruc_beta_coherent", 1.0);
    e.ruc_beta_incoherent = doc.value("ruc_beta_incoherent", 1.0);
    out.output_dir = doc.value("output_dir", ".");

    if (doc.contains("signals") == doc.contains("recipe"))
        throw ConfigError("config needs exactly one of \"signals\" and \"recipe\"");
    if (doc.contains("signals"))
        e.signals = parse_signals(doc.at("signals"), e.n, e.t_steps);
    else
        e.signals = realize_recipe(doc.at("recipe"), e.n, e.t_steps, e.seed);

    const json &shots = doc.at("shots");
    if (shots.is_number_integer()) {
        out.shots.push_back(shots.get<long long>());
    } else if (shots.is_array()) {
        for (const json &m : shots) out.shots.push_back(m.get<long long>());
    } else {
        throw ConfigError("shots must be an integer or a list of integers");
    }
    for (long long m : out.shots)
        if (m < 1) throw ConfigError("shots must be positive");

    if (doc.contains("corrections")) {
        const json &fix = doc.at("corrections");
        reject_unknown_keys(fix, {"confusion", "decode", "threshold", "second_order", "overlap"}, "corrections");
        e.corrections.confusion_inverse = fix.value("confusion", false);
        e.corrections.decode = fix.value("decode", false);
        e.corrections.second_order = fix.value("second_order", false);
        e.corrections.overlap = fix.value("overlap", false);
        if (fix.contains("threshold")) {
            const json &th = fix.at("threshold");
            reject_unknown_keys(th, {"theta_min", "gamma_min"}, "corrections.threshold");
            e.corrections.threshold = true;
            e.corrections.theta_min = th.value("theta_min", 0.0);
            e.corrections.gamma_min = th.value("gamma_min", 0.0);
        }
    }

    out.config_hash = fnv1a64(doc.dump());
    return out;
}

ParsedConfig load_config_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "ruc", "hamiltonian"}; }

std::string preset_config(const std::string &name) {
    if (name == "fig2")
        return R"({
  "protocol": "tilted",
  "n": 10,
  "t_steps": 1,
  "recipe": {"pool": "z_strings", "max_body": 2,
             "sparsity": {"coherent": 4, "incoherent": 0},
             "ranges": {"theta_min": 0.1, "theta_max": 0.15}},
  "n_circuits": 1,
  "gamma_readout": 0.05,
  "shots": [1000, 3162, 10000, 31623, 100000],
  "seed": 20240201,
  "repetitions": 20,
  "corrections": {"confusion": true, "second_order": true}
}
)";
    if (name == "fig3")
        return R"({
  "protocol": "clifford_global",
  "n": 12,
  "t_steps": 1,
  "recipe": {"pool": "random_pauli", "count": 580, "max_weight": 3,
             "sparsity": {"coherent": 8, "incoherent": 7},
             "ranges": {"theta_min": 0.1, "theta_max": 0.15,
                        "gamma_min": 0.07, "gamma_max": 0.1}},
  "n_circuits": 15,
  "shots": 10000,
  "seed": 20240203,
  "repetitions": 1,
  "corrections": {"threshold": {"theta_min": 0.1, "gamma_min": 0.07}, "overlap": true}
}
)";
    if (name == "ruc")
        return R"({
  "protocol": "ruc",
  "n": 8,
  "t_steps": 2,
  "recipe": {"pool": "random_pauli", "count": 12, "max_weight": 2,
             "sparsity": {"coherent": 2, "incoherent": 2}},
  "n_circuits": 4,
  "shots": [1000, 10000, 100000],
  "seed": 20240204,
  "repetitions": 10,
  "ruc_beta_coherent": 2.3,
  "ruc_beta_incoherent": 0.57
}
)";
    if (name == "hamiltonian")
        return R"({
  "protocol": "hamiltonian",
  "n": 8,
  "t_steps": 1,
  "hamiltonian_tau": 5.0,
  "recipe": {"pool": "random_pauli", "count": 10, "max_weight": 2,
             "sparsity": {"coherent": 2, "incoherent": 1}},
  "n_circuits": 1,
  "shots": [1000, 10000, 100000],
  "seed": 20240205,
  "repetitions": 10
}
)";
    throw ConfigError("unknown preset \"" + name + "\"; available: fig2, fig3, ruc, hamiltonian");
}

std::vector<std::string> cmd_run(const ParsedConfig &config) {
    if (config.shots.size() != 1) throw ConfigError("`run` needs a single shots value (use `scaling` for sweeps)");
    const ExperimentConfig &e = config.experiment;
    TrialResult trial = run_trial(e, config.shots[0]);

    std::string csv = artifact_header(config, "estimates-v1");
    csv += "id,kind,t,pauli,true,estimate,predicted_std,thresholded,corrected\n";
    for (const SignalSpec &sig : e.signals.signals) {
        const SignalEstimate *est = trial.report.find(sig.id);
        csv += std::to_string(sig.id) + "," + kind_name(sig.kind) + "," + std::to_string(sig.t) + "," +
               pauli_label(sig.generator) + "," + format_double(sig.amplitude) + "," +
               format_double(est ? est->estimate : 0.0) + "," + format_double(est ? est->predicted_std : 0.0) +
               "," + (est && est->thresholded ? "1" : "0") + "," + (est && est->corrected ? "1" : "0") + "\n";
    }

    json summary;
    summary["version"] = kArtifactVersion;
    summary["seed"] = e.seed;
    summary["config"] = hex64(config.config_hash);
    summary["A"] = signal_fidelity_A(e.signals);
    summary["A_hat"] = trial.report.a_hat;
    summary["rms_coherent"] = trial.metrics.rms_coherent;
    summary["rms_incoherent"] = trial.metrics.rms_incoherent;
    summary["max_abs_error"] = trial.metrics.max_abs_error;
    summary["shots"] = config.shots[0];
    summary["warnings"] = check_config(e);

    std::string estimates_path = config.output_dir + "/estimates.csv";
    std::string summary_path = config.output_dir + "/summary.json";
    write_text_file(estimates_path, csv);
    write_text_file(summary_path, summary.dump(2) + "\n");
    return {estimates_path, summary_path};
}

std::vector<std::string> cmd_scaling(const ParsedConfig &config) {
    if (config.shots.size() < 3) throw ConfigError("`scaling` needs a sweep list of at least 3 shots values");
    std::vector<ScalingRecord> records = scaling_sweep(config.experiment, config.shots);

    bool coherent_slope =
        std::any_of(config.experiment.signals.signals.begin(), config.experiment.signals.signals.end(),
                    [](const SignalSpec &s) { return s.kind == SignalKind::coherent; });
    std::string csv = artifact_header(config, "scaling-v1");
    csv += "M,rms_coherent,rms_incoherent,theory_coherent,theory_incoherent,slope_running\n";
    for (const ScalingRecord &r : records) {
        double slope = coherent_slope ? r.slope_coherent : r.slope_incoherent;
        csv += std::to_string(r.m) + "," + format_double(r.rms_coherent) + "," + format_double(r.rms_incoherent) +
               "," + format_double(r.theory_coherent) + "," + format_double(r.theory_incoherent) + "," +
               (slope == slope ? format_double(slope) : std::string("nan")) + "\n";
    }
    std::string path = config.output_dir + "/scaling.csv";
    write_text_file(path, csv);
    return {path};
}

}  // namespace scrsense
