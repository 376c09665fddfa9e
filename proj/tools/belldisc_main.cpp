// Command-line front end: probability tables, confidence sweeps, the
// closed-form discrimination unitary, and the network optimizer, all with
// reproducible file-based inputs and outputs.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "belldisc/detection.hpp"
#include "belldisc/discrimination.hpp"
#include "belldisc/io.hpp"
#include "belldisc/optics.hpp"
#include "belldisc/optimizer.hpp"
#include "belldisc/states.hpp"

namespace {

using namespace belldisc;
using io::fmt_g15;
using io::Json;

constexpr double kPi = 3.14159265358979323846;

// values below this print as 0 to suppress roundoff noise; stored values
// are untruncated
constexpr double kPrintFloor = 1e-14;

double printable(double v) { return std::abs(v) < kPrintFloor ? 0.0 : v; }

struct CommonOpts {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double phi = 0.0;
    double eta1 = 1.0 / std::sqrt(2.0);
    double epsilon = 1e-9;
    std::string priors_csv = "0.25,0.25,0.25,0.25";
    std::string out_path;
    std::string unitary_file;
    std::string state_file;
    std::string grid_file;
    std::string family_file;
    bool degrees = false;
    bool use_optimal = false;
    std::uint64_t seed = 1;
    int restarts = 64;
    int c2_steps = 51;
    int phi_steps = 51;
};

std::array<double, 4> parse_priors(const std::string& csv) {
    std::array<double, 4> p{};
    std::stringstream ss(csv);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= 4) throw std::invalid_argument("priors: expected exactly 4 values");
        p[i++] = std::stod(item);
    }
    if (i != 4) throw std::invalid_argument("priors: expected exactly 4 values");
    double s = 0.0;
    for (double v : p) s += v;
    if (std::abs(s - 1.0) > kNormTol)
        throw std::invalid_argument("priors: values must sum to 1");
    return p;
}

double to_radians(double v, bool degrees) { return degrees ? v * kPi / 180.0 : v; }

BellLikeFamily family_from_opts(const CommonOpts& o) {
    if (!o.family_file.empty()) return io::family_from_json(io::load_json_file(o.family_file));
    return BellLikeFamily::from_angles(to_radians(o.theta1, o.degrees),
                                       to_radians(o.theta2, o.degrees));
}

// builtin "optimal" | file path | splitter parameters; exactly one source
ModeUnitary unitary_from_opts(const CommonOpts& o, bool phi_given, bool eta_given) {
    const int sources = (o.unitary_file.empty() ? 0 : 1) + (o.use_optimal ? 1 : 0) +
                        ((phi_given || eta_given) ? 1 : 0);
    if (sources != 1)
        throw std::invalid_argument(
            "exactly one unitary source required: --unitary-file, --optimal, or "
            "splitter parameters (--phi/--eta1)");
    if (!o.unitary_file.empty()) return io::unitary_from_json(io::load_json_file(o.unitary_file));
    if (o.use_optimal) return optimal_discrimination_unitary(family_from_opts(o));
    return two_splitter_network(o.eta1, to_radians(o.phi, o.degrees));
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty())
        std::cout << text;
    else
        io::write_text_file(o.out_path, text);
}

int cmd_probs(const CommonOpts& o, bool phi_given, bool eta_given) {
    if (o.state_file.empty()) throw std::invalid_argument("probs: --state is required");
    const TwoPhotonState state = io::state_from_json(io::load_json_file(o.state_file));
    const ModeUnitary u = unitary_from_opts(o, phi_given, eta_given);
    const OutcomeDistribution dist = outcome_distribution(state, u);
    std::string text = "m,n,probability\n";
    for (const auto& [ev, p] : dist.sorted_events())
        text += std::to_string(ev.m) + "," + std::to_string(ev.n) + "," +
                fmt_g15(printable(p)) + "\n";
    emit(o, text);
    return 0;
}

int cmd_table(const CommonOpts& o, bool phi_given, bool eta_given) {
    const BellLikeFamily family = family_from_opts(o);
    const bool splitter_default = !phi_given && !eta_given && o.unitary_file.empty() &&
                                  !o.use_optimal;
    const ModeUnitary u = splitter_default
                              ? two_splitter_network(o.eta1, to_radians(o.phi, o.degrees))
                              : unitary_from_opts(o, phi_given, eta_given);
    if (u.dim() != 4) throw std::invalid_argument("table: requires a 4-mode unitary");
    const ProbabilityTable table = probability_table(family, u, parse_priors(o.priors_csv));
    std::string text =
        "state,ev_11,ev_22,ev_33,ev_44,ev_12,ev_13,ev_14,ev_23,ev_24,ev_34\n";
    const std::array<DetectionEvent, 10> order = {
        DetectionEvent(1, 1), DetectionEvent(2, 2), DetectionEvent(3, 3),
        DetectionEvent(4, 4), DetectionEvent(1, 2), DetectionEvent(1, 3),
        DetectionEvent(1, 4), DetectionEvent(2, 3), DetectionEvent(2, 4),
        DetectionEvent(3, 4)};
    for (int s = 1; s <= 4; ++s) {
        text += std::to_string(s);
        for (const auto& ev : order)
            text += "," + fmt_g15(printable(table.row(s).prob(ev)));
        text += "\n";
    }
    emit(o, text);
    return 0;
}

int cmd_confidence_sweep(const CommonOpts& o) {
    if (o.c2_steps < 2 || o.phi_steps < 2)
        throw std::invalid_argument("confidence-sweep: grid steps must be >= 2");
    const double theta1 = to_radians(o.theta1, o.degrees);
    const double c1 = std::sin(2.0 * theta1);
    std::string text = "c2,phi,D1,D2,D3\n";
    for (int i = 0; i < o.c2_steps; ++i) {
        const double c2 = static_cast<double>(i) / (o.c2_steps - 1);
        for (int k = 0; k < o.phi_steps; ++k) {
            const double phi = (kPi / 2.0) * static_cast<double>(k) / (o.phi_steps - 1);
            const auto d = closed_form_confidences(c1, c2, phi);
            text += fmt_g15(c2) + "," + fmt_g15(phi) + "," + fmt_g15(d.d1) + "," +
                    fmt_g15(d.d2) + "," + fmt_g15(d.d3) + "\n";
        }
    }
    emit(o, text);
    return 0;
}

int cmd_optimal_unitary(const CommonOpts& o) {
    const ModeUnitary u = optimal_discrimination_unitary(family_from_opts(o));
    emit(o, io::unitary_to_json(u).dump(2) + "\n");
    return 0;
}

int cmd_optimize(const CommonOpts& o) {
    const BellLikeFamily family = family_from_opts(o);
    const OptimizationResult res =
        maximize_success(family, o.restarts, o.seed, o.epsilon);
    emit(o, io::optimization_result_to_json(res).dump(2) + "\n");
    return 0;
}

int cmd_sweep(const CommonOpts& o) {
    if (o.grid_file.empty()) throw std::invalid_argument("sweep: --grid-file is required");
    const Json grid_json = io::load_json_file(o.grid_file);
    if (!grid_json.is_array() || grid_json.empty())
        throw std::invalid_argument("sweep: grid file must be a nonempty array of "
                                    "[theta1, theta2] pairs");
    std::vector<std::pair<double, double>> grid;
    for (const auto& row : grid_json) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument("sweep: each grid row must be [theta1, theta2]");
        grid.emplace_back(to_radians(row[0].get<double>(), o.degrees),
                          to_radians(row[1].get<double>(), o.degrees));
    }
    const auto points = sweep_families(grid, o.restarts, o.seed, o.epsilon);
    std::string text = "theta1,theta2,c2,best_success\n";
    for (const auto& p : points)
        text += fmt_g15(p.theta1) + "," + fmt_g15(p.theta2) + "," + fmt_g15(p.c2) + "," +
                fmt_g15(p.best_success) + "\n";
    emit(o, text);
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    const double theta1 = to_radians(o.theta1, o.degrees);
    const double theta2 = to_radians(o.theta2, o.degrees);
    const BellLikeFamily family = BellLikeFamily::from_angles(theta1, theta2);
    bool all_pass = true;
    std::string text;
    auto line = [&](const std::string& name, double value, bool pass, int decimals) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
        text += name + "=" + buf + (pass ? " PASS" : " FAIL") + "\n";
        all_pass = all_pass && pass;
    };

    // headline success probability of the state-dependent optimal network
    const ModeUnitary u = optimal_discrimination_unitary(family);
    const double success = success_probability(probability_table(family, u), o.epsilon);
    const double near0_1 = std::min(theta1, kPi / 2.0 - theta1);
    const double near0_2 = std::min(theta2, kPi / 2.0 - theta2);
    double expected = 0.25;
    if (near0_1 < 1e-9 && near0_2 < 1e-9)
        expected = 1.0;
    else if (std::abs(theta2 - kPi / 4.0) < 1e-9 || near0_2 < 1e-9)
        expected = 0.5;
    line("success", success, std::abs(success - expected) <= 1e-9, 6);

    // matrix formulas against the symbolic expansion oracle
    std::mt19937_64 eng(o.seed);
    auto uniform = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    double max_diff = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        std::array<Complex, 4> c{};
        double norm = 0.0;
        for (auto& z : c) {
            z = Complex(uniform() - 0.5, uniform() - 0.5);
            norm += std::norm(z);
        }
        for (auto& z : c) z /= std::sqrt(norm);
        const TwoPhotonState state(c);
        NetworkParams params;
        for (auto& a : params.angles) a = uniform() * kPi / 2.0;
        for (auto& p : params.phases) p = (uniform() - 0.5) * 2.0 * kPi;
        const ModeUnitary net = mesh_unitary(params);
        const auto fast = outcome_distribution(state, net);
        const auto oracle = brute_force_distribution(state, net);
        for (const auto& [ev, p] : fast.sorted_events())
            max_diff = std::max(max_diff, std::abs(p - oracle.prob(ev)));
    }
    line("oracle_max_diff", max_diff, max_diff < 1e-12, 16);

    // closed-form equivalence of the emitted unitary for real families
    const ModeUnitary two_bs = two_splitter_network(1.0 / std::sqrt(2.0), theta2);
    const double u_diff = (u.matrix() - two_bs.matrix()).cwiseAbs().maxCoeff();
    line("eq_two_splitter_dev", u_diff, u_diff < 1e-12, 16);

    emit(o, text);
    return all_pass ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--theta1", o.theta1, "family angle theta1 (radians)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--theta2", o.theta2, "family angle theta2 (radians)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--epsilon", o.epsilon, "unambiguity threshold (0, 0.1]")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--priors", o.priors_csv, "comma-separated priors a,b,c,d")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--out", o.out_path, "output file (default stdout)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--family-file", o.family_file, "family JSON file")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_flag("--degrees", o.degrees, "interpret input angles as degrees");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unambiguous linear-optical discrimination of Bell-like states"};
    app.require_subcommand(1);

    CommonOpts o;

    // a flat JSON config file may supply any long option; command-line
    // flags take precedence (TakeLast + config args injected first)
    std::string config_path;
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
    }
    if (!config_path.empty()) {
        try {
            const Json cfg = io::load_json_file(config_path);
            if (!cfg.is_object()) throw std::invalid_argument("config must be a flat JSON object");
            std::vector<std::string> injected;
            for (const auto& [key, value] : cfg.items()) {
                if (value.is_boolean()) {
                    if (value.get<bool>()) injected.push_back("--" + key);
                } else if (value.is_number()) {
                    injected.push_back("--" + key);
                    injected.push_back(fmt_g15(value.get<double>()));
                } else if (value.is_string()) {
                    injected.push_back("--" + key);
                    injected.push_back(value.get<std::string>());
                } else if (value.is_array() && key == "priors") {
                    std::string csv;
                    for (const auto& v : value)
                        csv += (csv.empty() ? "" : ",") + fmt_g15(v.get<double>());
                    injected.push_back("--priors");
                    injected.push_back(csv);
                } else {
                    throw std::invalid_argument("config: unsupported value for key " + key);
                }
            }
            // keep the subcommand name first, then config, then user flags
            if (!args.empty() && !args.front().starts_with("-")) {
                injected.insert(injected.begin(), args.front());
                args.erase(args.begin());
            }
            injected.insert(injected.end(), args.begin(), args.end());
            args = std::move(injected);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }

    auto* probs = app.add_subcommand("probs", "detection-outcome distribution CSV");
    add_common(probs, o);
    probs->add_option("--state", o.state_file, "two-photon state JSON file")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    probs->add_option("--unitary-file", o.unitary_file, "mode-unitary JSON file")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    probs->add_flag("--optimal", o.use_optimal, "use the state-dependent optimal unitary");
    auto* probs_phi = probs->add_option("--phi", o.phi, "second-splitter angle (eta2 = cos phi)")
                          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    auto* probs_eta = probs->add_option("--eta1", o.eta1, "first-splitter transmissivity")
                          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* table = app.add_subcommand("table", "4-state by 10-event probability table CSV");
    add_common(table, o);
    auto* table_phi = table->add_option("--phi", o.phi, "second-splitter angle (eta2 = cos phi)")
                          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    auto* table_eta = table->add_option("--eta1", o.eta1, "first-splitter transmissivity")
                          ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    table->add_option("--unitary-file", o.unitary_file, "mode-unitary JSON file")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    table->add_flag("--optimal", o.use_optimal, "use the state-dependent optimal unitary");

    auto* csweep = app.add_subcommand("confidence-sweep",
                                      "closed-form D1,D2,D3 over a (C2, phi) grid");
    add_common(csweep, o);
    csweep->add_option("--c2-steps", o.c2_steps, "grid points along C2 in [0,1]")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    csweep->add_option("--phi-steps", o.phi_steps, "grid points along phi in [0,pi/2]")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* optu = app.add_subcommand("optimal-unitary",
                                    "state-dependent discrimination unitary as JSON");
    add_common(optu, o);

    auto* opt = app.add_subcommand("optimize", "maximize success over 4-mode networks");
    add_common(opt, o);
    opt->add_option("--restarts", o.restarts, "multi-start restarts")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    opt->add_option("--seed", o.seed, "deterministic RNG seed")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* sweep = app.add_subcommand("sweep", "optimize over a grid of families");
    add_common(sweep, o);
    sweep->add_option("--grid-file", o.grid_file, "JSON array of [theta1, theta2] pairs")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sweep->add_option("--restarts", o.restarts, "multi-start restarts")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sweep->add_option("--seed", o.seed, "deterministic RNG seed")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* verify = app.add_subcommand("verify", "deterministic end-to-end checks");
    add_common(verify, o);
    verify->add_option("--seed", o.seed, "seed for the randomized oracle check")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // verify defaults to the pi/6 Bell-like family
    o.theta1 = kPi / 6.0;
    o.theta2 = kPi / 6.0;
    std::vector<const char*> cargs;
    cargs.reserve(args.size() + 1);
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (probs->parsed())
            return cmd_probs(o, probs_phi->count() > 0, probs_eta->count() > 0);
        if (table->parsed())
            return cmd_table(o, table_phi->count() > 0, table_eta->count() > 0);
        if (csweep->parsed()) return cmd_confidence_sweep(o);
        if (optu->parsed()) return cmd_optimal_unitary(o);
        if (opt->parsed()) return cmd_optimize(o);
        if (sweep->parsed()) return cmd_sweep(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
