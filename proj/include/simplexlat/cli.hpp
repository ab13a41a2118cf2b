#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfrft.hpp"
#include "epsweep.hpp"
#include "io.hpp"
#include "lattice.hpp"
#include "moments.hpp"
#include "reduction.hpp"

namespace simplexlat::cli {

enum class Command { spectrum, reduce, lattice, hamiltonian, sweep, dfrft };

/// Bad flags, missing files, unreadable inputs. Exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// "re", "re,im" or "re+imi" / "re-imi" / "imi".
inline Complex parse_complex(const std::string& text) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw UsageError("not a complex number: '" + text + "'");
        }
        if (used != s.size() || !std::isfinite(v)) throw UsageError("not a complex number: '" + text + "'");
        return v;
    };
    if (text.empty()) throw UsageError("empty complex value");
    if (auto comma = text.find(','); comma != std::string::npos) {
        return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
    }
    if (text.back() != 'i') return {number(text), 0.0};
    const std::string body = text.substr(0, text.size() - 1);
    // split at the last sign that is not a leading sign or an exponent sign
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            const std::string im = body.substr(k);
            return {number(body.substr(0, k)), im.size() == 1 ? (im == "-" ? -1.0 : 1.0) : number(im)};
        }
    }
    if (body.empty() || body == "+") return {0.0, 1.0};
    if (body == "-") return {0.0, -1.0};
    return {0.0, number(body)};
}

struct RunConfig {
    Command command = Command::spectrum;

    // system source: exactly one of m1_path / preset (lattice also takes input_path)
    std::string m1_path;
    std::string preset;
    std::string input_path;         ///< reduced-system JSON (lattice) or signal JSON (dfrft)
    std::string perturbation_path;  ///< sweep

    std::string out_path;  ///< empty: stdout
    std::string dot_path;
    std::string json_path;

    std::size_t order = 0;
    bool reduced = false;
    ReductionMode mode = ReductionMode::average;

    double delta = 1.0;
    double g = 1.0;
    Complex alpha{1.0};
    Complex beta{1.0};
    Complex gamma{1.0};
    std::array<Complex, 3> deltas{};

    double eps_min = 1e-6;
    double eps_max = 1e-2;
    std::size_t points = 50;

    std::size_t n = 0;  ///< dfrft ladder size n (signal length n + 1)
    double a = 1.0;     ///< dfrft fractional order
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void require_file(const std::string& path, const char* flag) {
    if (!std::filesystem::is_regular_file(path)) {
        throw UsageError(std::string(flag) + ": no such file '" + path + "'");
    }
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
    if (!f) throw UsageError("write failed for '" + path + "'");
}

inline ModeSystem load_system(const RunConfig& cfg) {
    if (!cfg.m1_path.empty()) return parse_m1_json(read_file(cfg.m1_path));
    if (cfg.preset == "subharmonic") return subharmonic_m1({cfg.delta, cfg.g});
    if (cfg.preset == "symmetric-trimer") return trimer_m1(cfg.deltas, cfg.alpha, cfg.beta, cfg.gamma);
    throw UsageError("unknown preset '" + cfg.preset + "'");
}

}  // namespace detail

/// Checks the invariants a config must satisfy before dispatch.
inline void validate(const RunConfig& cfg) {
    const bool needs_system = cfg.command == Command::spectrum || cfg.command == Command::reduce ||
                              cfg.command == Command::sweep ||
                              (cfg.command == Command::lattice && cfg.input_path.empty());
    const int sources = !cfg.m1_path.empty() + !cfg.preset.empty() +
                        (cfg.command == Command::lattice && !cfg.input_path.empty());
    if (needs_system || cfg.command == Command::lattice) {
        if (sources != 1) {
            throw UsageError(cfg.command == Command::lattice
                                 ? "give exactly one of --m1, --preset, --input"
                                 : "give exactly one of --m1, --preset");
        }
    }
    if (!cfg.m1_path.empty()) detail::require_file(cfg.m1_path, "--m1");
    if (!cfg.preset.empty() && cfg.preset != "subharmonic" && cfg.preset != "symmetric-trimer") {
        throw UsageError("unknown preset '" + cfg.preset + "'");
    }
    if (!cfg.input_path.empty()) detail::require_file(cfg.input_path, "--input");
    if (!cfg.perturbation_path.empty()) detail::require_file(cfg.perturbation_path, "--perturbation");
    const bool needs_order = needs_system || cfg.command == Command::hamiltonian;
    if (needs_order && cfg.order == 0) throw UsageError("--order must be >= 1");
    switch (cfg.command) {
        case Command::sweep:
            if (!(cfg.eps_min > 0.0) || !(cfg.eps_max > cfg.eps_min)) {
                throw UsageError("need 0 < --eps-min < --eps-max");
            }
            if (cfg.points < 2) throw UsageError("--points must be >= 2");
            break;
        case Command::dfrft:
            if (cfg.n == 0) throw UsageError("--n must be >= 1");
            if (cfg.input_path.empty()) throw UsageError("dfrft needs --input signal.json");
            break;
        default:
            break;
    }
}

/// Runs one command. Domain errors from the library return 1, usage errors 2.
inline int dispatch(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        validate(cfg);
        switch (cfg.command) {
            case Command::spectrum: {
                const ModeSystem sys = detail::load_system(cfg);
                const std::string csv = cfg.reduced
                                            ? export_spectrum_csv(reduce(sys, cfg.order, cfg.mode))
                                            : export_tensor_spectrum_csv(tensor_eigensystem(sys, cfg.order));
                detail::emit(cfg.out_path, csv, out);
                break;
            }
            case Command::reduce: {
                const ModeSystem sys = detail::load_system(cfg);
                detail::emit(cfg.out_path, reduced_to_json(reduce(sys, cfg.order, cfg.mode), sys.labels()), out);
                break;
            }
            case Command::lattice: {
                const LatticeGraph g =
                    cfg.input_path.empty()
                        ? build_lattice(reduce(detail::load_system(cfg), cfg.order, cfg.mode))
                        : build_lattice(reduced_from_json(detail::read_file(cfg.input_path)));
                if (cfg.dot_path.empty() && cfg.json_path.empty()) {
                    detail::emit(cfg.out_path, export_json(g), out);
                }
                if (!cfg.dot_path.empty()) detail::emit(cfg.dot_path, export_dot(g), out);
                if (!cfg.json_path.empty()) detail::emit(cfg.json_path, export_json(g), out);
                break;
            }
            case Command::hamiltonian: {
                const CMatrix h = trimer_hamiltonian(cfg.order, cfg.deltas, cfg.alpha, cfg.beta, cfg.gamma);
                detail::emit(cfg.out_path, matrix_document(h, trimer_sites(cfg.order)), out);
                break;
            }
            case Command::sweep: {
                const ModeSystem sys = detail::load_system(cfg);
                const CMatrix mm = build_mm(sys, cfg.order);
                CMatrix p;
                if (!cfg.perturbation_path.empty()) {
                    const json doc = simplexlat::detail::parse_text(detail::read_file(cfg.perturbation_path));
                    p = doc.is_object() ? matrix_from_json(simplexlat::detail::require(doc, "matrix", ""), "matrix")
                                        : matrix_from_json(doc, "");
                } else if (mm.rows() == 8) {
                    p = ddep_perturbation();
                } else {
                    throw UsageError("sweep needs --perturbation unless M_m is 8x8");
                }
                const auto grid = log_grid(cfg.eps_min, cfg.eps_max, cfg.points);
                const SweepResult r = perturb_sweep(mm, p, grid);
                detail::emit(cfg.out_path, export_sweep_csv(r), out);
                for (std::size_t t = 0; t < r.matched_tracks.size(); ++t) {
                    try {
                        const auto fit = fit_splitting_exponent(r, t);
                        err << "track " << t << ": exponent " << fit.exponent << " (r2 " << fit.r_squared << ")\n";
                    } catch (const FitError& e) {
                        err << "track " << t << ": " << e.what() << "\n";
                    }
                }
                break;
            }
            case Command::dfrft: {
                const Signal sig = signal_from_json(detail::read_file(cfg.input_path));
                const FrftResult r = frft(sig, cfg.a, JxSpec{cfg.n, cfg.alpha});
                if (r.non_unitary) err << "warning: complex alpha, transform is not unitary\n";
                detail::emit(cfg.out_path, signal_to_json(r.signal, r.non_unitary), out);
                break;
            }
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitDomain;
    }
}

/// Parses argv into a config and dispatches it.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"simplex lattices in the field-moments space of quadratic bosonic systems", "simplexlat"};
    app.require_subcommand(1, 1);
    RunConfig cfg;
    std::string mode = "average";
    std::string alpha = "1", beta = "1", gamma = "1";
    std::array<std::string, 3> ds{"0", "0", "0"};

    auto system_flags = [&](CLI::App* sub) {
        sub->add_option("--m1", cfg.m1_path, "first-order matrix JSON");
        sub->add_option("--preset", cfg.preset, "built-in system")
            ->check(CLI::IsMember({"subharmonic", "symmetric-trimer"}));
        sub->add_option("--delta", cfg.delta, "subharmonic detuning");
        sub->add_option("--g", cfg.g, "subharmonic pump coupling");
    };
    auto trimer_flags = [&](CLI::App* sub) {
        sub->add_option("--alpha", alpha, "coupling alpha (re or re,im)");
        sub->add_option("--beta", beta, "coupling beta");
        sub->add_option("--gamma", gamma, "coupling gamma");
        sub->add_option("--d1", ds[0], "on-site term of mode 1");
        sub->add_option("--d2", ds[1], "on-site term of mode 2");
        sub->add_option("--d3", ds[2], "on-site term of mode 3");
    };
    auto mode_flag = [&](CLI::App* sub) {
        sub->add_option("--mode", mode, "reduction weighting")->check(CLI::IsMember({"average", "normalized"}));
    };

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue CSV of M_m (full or per class)");
    system_flags(spectrum);
    trimer_flags(spectrum);
    mode_flag(spectrum);
    spectrum->add_option("--order", cfg.order, "moment order m")->required();
    spectrum->add_flag("--reduced", cfg.reduced, "one row per permutation class");
    spectrum->add_option("--out", cfg.out_path, "output CSV");

    auto* reduce_cmd = app.add_subcommand("reduce", "reduced system JSON");
    system_flags(reduce_cmd);
    trimer_flags(reduce_cmd);
    mode_flag(reduce_cmd);
    reduce_cmd->add_option("--order", cfg.order, "moment order m")->required();
    reduce_cmd->add_option("--out", cfg.out_path, "output JSON");

    auto* lattice = app.add_subcommand("lattice", "simplex lattice as DOT and/or JSON");
    system_flags(lattice);
    trimer_flags(lattice);
    mode_flag(lattice);
    lattice->add_option("--order", cfg.order, "moment order m");
    lattice->add_option("--input", cfg.input_path, "reduced system JSON from `reduce`");
    lattice->add_option("--dot", cfg.dot_path, "DOT output");
    lattice->add_option("--json", cfg.json_path, "JSON output");
    lattice->add_option("--out", cfg.out_path, "JSON output when neither --dot nor --json is given");

    auto* hamiltonian = app.add_subcommand("hamiltonian", "explicit trimer lattice Hamiltonian JSON");
    trimer_flags(hamiltonian);
    hamiltonian->add_option("--order", cfg.order, "total excitation N")->required();
    hamiltonian->add_option("--out", cfg.out_path, "output JSON");

    auto* sweep = app.add_subcommand("sweep", "eigenvalue tracks of M_m + eps P on a log grid");
    system_flags(sweep);
    trimer_flags(sweep);
    sweep->add_option("--order", cfg.order, "moment order m")->required();
    sweep->add_option("--perturbation", cfg.perturbation_path, "matrix JSON for P");
    sweep->add_option("--eps-min", cfg.eps_min, "smallest eps");
    sweep->add_option("--eps-max", cfg.eps_max, "largest eps");
    sweep->add_option("--points", cfg.points, "grid size");
    sweep->add_option("--out", cfg.out_path, "output CSV");

    auto* dfrft_cmd = app.add_subcommand("dfrft", "fractional Fourier transform of a signal");
    dfrft_cmd->add_option("--n", cfg.n, "ladder size n (signal length n + 1)")->required();
    dfrft_cmd->add_option("--alpha", alpha, "coupling alpha (re or re,im)");
    dfrft_cmd->add_option("--a", cfg.a, "fractional order")->required();
    dfrft_cmd->add_option("--input", cfg.input_path, "signal JSON")->required();
    dfrft_cmd->add_option("--out", cfg.out_path, "output JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        cfg.mode = parse_reduction_mode(mode);
        cfg.alpha = parse_complex(alpha);
        cfg.beta = parse_complex(beta);
        cfg.gamma = parse_complex(gamma);
        for (std::size_t k = 0; k < 3; ++k) cfg.deltas[k] = parse_complex(ds[k]);
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (spectrum->parsed()) cfg.command = Command::spectrum;
    else if (reduce_cmd->parsed()) cfg.command = Command::reduce;
    else if (lattice->parsed()) cfg.command = Command::lattice;
    else if (hamiltonian->parsed()) cfg.command = Command::hamiltonian;
    else if (sweep->parsed()) cfg.command = Command::sweep;
    else cfg.command = Command::dfrft;
    return dispatch(cfg, out, err);
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    std::vector<const char*> argv{"simplexlat"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace simplexlat::cli
