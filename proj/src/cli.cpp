#include "rxnpack/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rxnpack/io.hpp"
#include "rxnpack/modeldsl.hpp"
#include "rxnpack/models.hpp"
#include "rxnpack/reproduce.hpp"
#include "rxnpack/validate.hpp"

namespace rxn {

namespace {

constexpr const char* kVersion = "0.1.0";

std::string default_out_dir() {
    if (const char* env = std::getenv("RXNPACK_OUT")) return env;
    return "out";
}

struct LoadedModel {
    ReactionNetwork network;
    std::vector<TemplateExpansion> expansions;
    ModelDocument document;
    bool from_file = false;
    std::string source;
};

// A model argument is a .rxn path or a built-in name.
LoadedModel load_model(const std::string& spec) {
    LoadedModel m;
    m.source = spec;
    if (std::filesystem::exists(spec)) {
        m.from_file = true;
        m.document = parse_model(read_file(spec));
        BuildResult built = apply_directives(m.document);
        m.network = std::move(built.network);
        m.expansions = std::move(built.expansions);
        return m;
    }
    for (const auto& name : builtin_model_names()) {
        if (name == spec) {
            m.document = builtin_document(name);
            m.network = build_builtin(name);
            return m;
        }
    }
    throw Error(ErrorKind::Io, "no such model file or built-in: '" + spec + "'");
}

nlohmann::json base_metadata(const std::string& command, const ReactionNetwork& net) {
    nlohmann::json j;
    j["tool"] = "rxnpack";
    j["version"] = kVersion;
    j["command"] = command;
    j["rng"] = Xoshiro256pp::kName;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(network_fingerprint(net)));
    j["model_fingerprint"] = buf;
    j["model"] = net.name;
    return j;
}

void require_valid(const ReactionNetwork& net) {
    ValidationReport report = validate_network(net);
    if (!report.ok())
        throw Error(ErrorKind::Parse, "model does not validate:\n" + report.to_string());
}

int cmd_simulate(const std::string& model, std::size_t runs, double t_end, double dt,
                 std::uint64_t seed, std::size_t threads, bool per_replicate,
                 const std::string& out_dir) {
    LoadedModel m = load_model(model);
    require_valid(m.network);

    SsaConfig cfg;
    cfg.t_end = t_end;
    cfg.dt = dt;
    cfg.seed = seed;

    nlohmann::json meta = base_metadata("simulate", m.network);
    meta["seed"] = seed;
    meta["runs"] = runs;
    meta["t_end"] = t_end;
    meta["dt"] = dt;
    meta["source"] = m.source;

    namespace fs = std::filesystem;
    if (runs <= 1) {
        Trajectory traj = simulate_ssa(m.network, cfg);
        atomic_write_file((fs::path(out_dir) / "trajectory.csv").string(), trajectory_csv(traj));
        meta["terminated"] = terminated_reason_name(traj.terminated_reason);
        meta["events"] = traj.events;
    } else {
        Ensemble ens = run_ensemble(m.network, cfg, runs, threads);
        EnsembleStats stats = ensemble_stats(ens);
        atomic_write_file((fs::path(out_dir) / "summary.csv").string(),
                          ensemble_summary_csv(stats));
        if (per_replicate) {
            for (std::size_t i = 0; i < ens.replicates.size(); ++i) {
                char name[48];
                std::snprintf(name, sizeof name, "replicate_%04zu.csv", i);
                atomic_write_file((fs::path(out_dir) / name).string(),
                                  trajectory_csv(ens.replicates[i]));
            }
        }
    }
    atomic_write_file((fs::path(out_dir) / "metadata.json").string(), meta.dump(2) + "\n");
    std::cout << "wrote " << out_dir << "\n";
    return 0;
}

int cmd_ode(const std::string& model, double t_end, double dt, double rel_tol, double abs_tol,
            const std::string& out_dir) {
    LoadedModel m = load_model(model);
    require_valid(m.network);

    OdeConfig cfg;
    cfg.t_end = t_end;
    cfg.dt_record = dt;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    Trajectory traj = simulate_ode(m.network, cfg);

    namespace fs = std::filesystem;
    atomic_write_file((fs::path(out_dir) / "ode.csv").string(), trajectory_csv(traj));
    nlohmann::json meta = base_metadata("ode", m.network);
    meta["t_end"] = t_end;
    meta["dt"] = dt;
    meta["rel_tol"] = rel_tol;
    meta["abs_tol"] = abs_tol;
    meta["source"] = m.source;
    atomic_write_file((fs::path(out_dir) / "metadata.json").string(), meta.dump(2) + "\n");
    std::cout << "wrote " << out_dir << "\n";
    return 0;
}

int cmd_unpack(const std::string& model, const std::vector<std::string>& mm_flags,
               const std::vector<std::string>& hill_flags, const std::string& out_file) {
    LoadedModel m = load_model(model);

    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : s) {
            if (c == ':') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        parts.push_back(cur);
        return parts;
    };

    for (const auto& flag : mm_flags) {
        auto parts = split(flag);
        if (parts.size() < 2 || parts.size() > 3)
            throw Error(ErrorKind::Io, "--mm expects rid:Etot[:rho]");
        MmUnpackOptions opt;
        if (parts.size() == 3) opt.rho = std::stod(parts[2]);
        auto [next, exp] = unpack_mm(m.network, parts[0], static_cast<Count>(std::stoll(parts[1])), opt);
        m.network = std::move(next);
        m.expansions.push_back(std::move(exp));
    }
    for (const auto& flag : hill_flags) {
        auto parts = split(flag);
        if (parts.size() != 4) throw Error(ErrorKind::Io, "--hill expects rid:K1:s1:s2");
        const Reaction* target = m.network.find_reaction(parts[0]);
        if (!target) throw Error(ErrorKind::Io, "no reaction '" + parts[0] + "'");
        HillDerivation der = derive_hill_params(target->rate_law.J, std::stod(parts[1]),
                                                std::stod(parts[2]), std::stod(parts[3]));
        auto [next, exp] = unpack_hill(m.network, parts[0], der);
        m.network = std::move(next);
        m.expansions.push_back(std::move(exp));
    }

    if (m.expansions.empty())
        throw Error(ErrorKind::Io,
                    "nothing to unpack: the model has no unpack directives and no --mm/--hill flags");

    std::optional<double> alpha;
    if (auto it = m.network.parameters.find("alpha"); it != m.network.parameters.end())
        alpha = it->second;
    ModelDocument flat = network_to_document(m.network, alpha);
    flat.name = m.document.name + "_unpacked";
    atomic_write_file(out_file, serialize_model(flat));

    nlohmann::json report = nlohmann::json::array();
    for (const auto& exp : m.expansions) report.push_back(nlohmann::json::parse(exp.to_json()));
    atomic_write_file(out_file + ".report.json", report.dump(2) + "\n");

    for (const auto& exp : m.expansions)
        for (const auto& chk : exp.assumption_report)
            std::cout << exp.replaced_reaction << " " << (chk.passed ? "[ok]  " : "[warn]") << " "
                      << chk.name << ": " << chk.detail << "\n";
    std::cout << "wrote " << out_file << "\n";
    return 0;
}

Trajectory parse_trajectory_csv(const std::string& text) {
    Trajectory traj;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Io, "empty CSV");
    std::stringstream header(line);
    std::string cell;
    bool first = true;
    while (std::getline(header, cell, ',')) {
        if (first) {
            first = false;
            continue;
        }
        traj.species.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() != traj.species.size() + 1)
            throw Error(ErrorKind::Io, "ragged CSV row");
        traj.times.push_back(values[0]);
        traj.rows.emplace_back(values.begin() + 1, values.end());
    }
    return traj;
}

int cmd_analyze_period(const std::string& csv_path, const std::string& species, double window) {
    Trajectory traj = parse_trajectory_csv(read_file(csv_path));
    PeriodResult pr = detect_period(traj, species, window);
    nlohmann::json j;
    j["oscillating"] = pr.oscillating;
    j["period_min"] = pr.period;
    j["amplitude"] = pr.amplitude;
    j["n_peaks"] = pr.n_peaks;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_analyze_rate(const std::string& csv_path, const std::string& product,
                     const std::string& substrate, double cap) {
    Trajectory traj = parse_trajectory_csv(read_file(csv_path));
    std::optional<std::string> sub;
    if (!substrate.empty()) sub = substrate;
    RateEstimate est = initial_rate(traj, product, sub, cap);
    nlohmann::json j;
    j["rate"] = est.rate;
    j["se"] = est.se;
    j["samples"] = est.n_samples;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_analyze_hillfit(const std::string& csv_path) {
    std::istringstream in(read_file(csv_path));
    std::string line;
    std::vector<BindingCurvePoint> points;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::stringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
            throw Error(ErrorKind::Io, "expected TF_total,bound_fraction rows");
        points.push_back({std::stod(a), std::stod(b)});
    }
    HillFit fit = fit_hill(points);
    nlohmann::json j;
    j["n_prime"] = fit.n_prime;
    j["J_prime"] = fit.J_prime;
    j["rmse"] = fit.rmse;
    try {
        double R = response_coefficient(points);
        j["R"] = R;
        j["n_from_R"] = hill_coeff_from_R(R);
    } catch (const Error&) {
        j["R"] = nullptr;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_reproduce(const std::string& target, const ReproduceOptions& options,
                  const std::string& out_dir) {
    ReproduceArtifact art = reproduce(target, options);

    namespace fs = std::filesystem;
    atomic_write_file((fs::path(out_dir) / (art.target + ".csv")).string(), art.csv);
    atomic_write_file((fs::path(out_dir) / (art.target + ".report.json")).string(),
                      art.report_json() + "\n");

    nlohmann::json meta;
    meta["tool"] = "rxnpack";
    meta["version"] = kVersion;
    meta["command"] = "reproduce";
    meta["target"] = target;
    meta["seed"] = options.seed;
    meta["runs"] = options.runs;
    meta["rng"] = Xoshiro256pp::kName;
    atomic_write_file((fs::path(out_dir) / "metadata.json").string(), meta.dump(2) + "\n");

    for (const auto& c : art.checks)
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.detail << ")\n";
    std::cout << "wrote " << out_dir << "\n";
    return art.all_passed() ? 0 : 2;
}

int cmd_validate(const std::string& model) {
    LoadedModel m = load_model(model);
    ValidationReport report = validate_network(m.network);
    std::cout << (report.ok() ? "ok" : "invalid") << ": " << report.error_count() << " errors, "
              << report.warning_count() << " warnings\n";
    if (!report.issues.empty()) std::cout << report.to_string();
    return report.ok() ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"rxnpack: stochastic reaction networks with rate-law unpacking"};
    app.require_subcommand(1);

    std::string model, out_dir = default_out_dir(), out_file;
    std::size_t runs = 1, threads = 0;
    double t_end = 100.0, dt = 1.0, rel_tol = 1e-8, abs_tol = 1e-10, window = 120.0, cap = 0.1;
    std::uint64_t seed = 0;
    bool per_replicate = false;
    std::vector<std::string> mm_flags, hill_flags;
    std::string species = "CP", product = "P", substrate, target, csv_path;
    std::string sets_csv;

    auto* sim = app.add_subcommand("simulate", "Gillespie simulation of a model or ensemble");
    sim->add_option("model", model, "path to a .rxn file or a built-in name")->required();
    sim->add_option("--runs", runs, "number of replicates");
    sim->add_option("--t-end", t_end, "simulated minutes");
    sim->add_option("--dt", dt, "recording grid spacing (minutes)");
    sim->add_option("--seed", seed, "base RNG seed");
    sim->add_option("--threads", threads, "worker threads (0 = hardware)");
    sim->add_option("--out", out_dir, "output directory");
    sim->add_flag("--per-replicate", per_replicate, "also write every replicate CSV");

    auto* ode = app.add_subcommand("ode", "deterministic reference integration");
    ode->add_option("model", model)->required();
    ode->add_option("--t-end", t_end);
    ode->add_option("--dt", dt, "recording grid spacing");
    ode->add_option("--rel-tol", rel_tol);
    ode->add_option("--abs-tol", abs_tol);
    ode->add_option("--out", out_dir);

    auto* unpack = app.add_subcommand("unpack", "expand compound rate laws into elementary steps");
    unpack->add_option("model", model)->required();
    unpack->add_option("--out", out_file, "output .rxn path")->required();
    unpack->add_option("--mm", mm_flags, "extra expansion rid:Etot[:rho]");
    unpack->add_option("--hill", hill_flags, "extra expansion rid:K1:s1:s2");

    auto* analyze = app.add_subcommand("analyze", "extract derived quantities from CSV output");
    auto* period = analyze->add_subcommand("period", "oscillation period of a trajectory CSV");
    period->add_option("csv", csv_path)->required();
    period->add_option("--species", species);
    period->add_option("--window", window, "smoothing window (minutes)");
    auto* rate = analyze->add_subcommand("rate", "initial product-formation rate");
    rate->add_option("csv", csv_path)->required();
    rate->add_option("--product", product);
    rate->add_option("--substrate", substrate);
    rate->add_option("--cap", cap, "depletion cap");
    auto* hillfit = analyze->add_subcommand("hillfit", "fit a binding curve CSV");
    hillfit->add_option("csv", csv_path)->required();
    analyze->require_subcommand(1);

    auto* repro = app.add_subcommand("reproduce", "run a packaged comparison study");
    repro->add_option("target", target, "table3|table5|fig3|fig4|fig9-noise")->required();
    repro->add_option("--runs", runs, "replicates per condition (0 = default)");
    repro->add_option("--seed", seed);
    repro->add_option("--threads", threads);
    repro->add_option("--sets", sets_csv, "comma-separated table5 subset, e.g. 2,3");
    repro->add_option("--out", out_dir);

    auto* validate = app.add_subcommand("validate", "structural validation report");
    validate->add_option("model", model)->required();

    std::vector<const char*> argv;
    argv.push_back("rxnpack");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(model, runs == 0 ? 1 : runs, t_end, dt, seed, threads,
                                per_replicate, out_dir);
        if (ode->parsed()) return cmd_ode(model, t_end, dt, rel_tol, abs_tol, out_dir);
        if (unpack->parsed()) return cmd_unpack(model, mm_flags, hill_flags, out_file);
        if (analyze->parsed()) {
            if (period->parsed()) return cmd_analyze_period(csv_path, species, window);
            if (rate->parsed()) return cmd_analyze_rate(csv_path, product, substrate, cap);
            if (hillfit->parsed()) return cmd_analyze_hillfit(csv_path);
        }
        if (repro->parsed()) {
            ReproduceOptions options;
            options.seed = seed;
            options.runs = runs == 1 ? 0 : runs;
            options.threads = threads;
            if (!sets_csv.empty()) {
                std::stringstream ss(sets_csv);
                std::string tok;
                while (std::getline(ss, tok, ',')) options.sets.push_back(std::stoi(tok));
            }
            return cmd_reproduce(target, options, out_dir);
        }
        if (validate->parsed()) return cmd_validate(model);
    } catch (const Error& e) {
        std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::Parse:
        case ErrorKind::Io:
            return 1;
        default:
            return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace rxn
