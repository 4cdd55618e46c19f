#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "common.hpp"
#include "decoupler/gadd.hpp"
#include "decoupler/io.hpp"
#include "decoupler/qft.hpp"
#include "decoupler/simulator.hpp"

namespace cli {

using namespace decoupler;

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

struct NamedMode {
    std::string label;
    DdMode mode;
};

std::vector<NamedMode> collect_modes(const std::vector<std::string>& dd, const std::vector<std::string>& counterfactual,
                                     MotifLookup lookup, std::uint64_t scramble_seed, Manifest& manifest) {
    std::vector<NamedMode> modes;
    for (const auto& spec : split_list(dd)) {
        auto choice = parse_dd(spec, lookup, 0, 0);
        if (choice.strategy_file.empty()) {
            modes.push_back({choice.label, choice.mode});
            continue;
        }
        manifest.input("strategies", choice.strategy_file);
        modes.push_back({"gadd", choice.mode});
        for (const auto& cf : split_list(counterfactual)) {
            DdMode m = choice.mode;
            if (cf == "unaware") {
                if (!m.pad.unaware_source) {
                    throw UsageError(choice.strategy_file + " does not record a best motif for --counterfactual unaware");
                }
                m.pad.mode = PadMode::Unaware;
            } else if (cf == "scrambled") {
                m.pad.mode = PadMode::Scrambled;
                m.pad.scramble_seed = scramble_seed;
            } else {
                throw UsageError("unknown counterfactual '" + cf + "' (expected unaware or scrambled)");
            }
            modes.push_back({cf, m});
        }
    }
    return modes;
}

int verify_theorem(const std::vector<int>& ns, const std::string& out, Manifest& manifest) {
    const double bound = 2.0 / (std::numbers::pi * std::numbers::pi);
    std::ostringstream csv;
    csv << "n,m,measured,closed_form,abs_error,margin\n";
    bool ok = true;
    std::cout << std::setw(3) << "n" << std::setw(4) << "m" << std::setw(20) << "measured" << std::setw(20)
              << "closed_form" << std::setw(14) << "abs_error" << std::setw(14) << "margin" << "\n";
    for (int n : ns) {
        if (n < 1 || n > 20) throw UsageError("--n must lie in [1, 20] for verify-theorem");
        for (int m = 0; m < n; ++m) {
            const GhzSpec spec{n, m};
            const auto p = exact_distribution(build_schedule(build_ghz_qft_circuit(spec), DeviceTiming{}));
            const auto key = to_bitstring(std::uint64_t{1} << (n - 1 - m), n);
            const auto it = p.find(key);
            const double measured = it == p.end() ? 0.0 : it->second;
            const double closed = peak_amplitude_closed_form(m);
            const double err = std::abs(measured - closed);
            const double margin = measured - bound;
            if (!(err < 1e-10) || !(margin > 0.0)) ok = false;
            csv << n << "," << m << "," << fmt(measured) << "," << fmt(closed) << "," << fmt(err) << "," << fmt(margin)
                << "\n";
            std::cout << std::setw(3) << n << std::setw(4) << m << std::setw(20) << fmt(measured) << std::setw(20)
                      << fmt(closed) << std::setw(14) << std::setprecision(3) << err << std::setw(14) << margin
                      << (err < 1e-10 && margin > 0.0 ? "" : "  MISMATCH") << "\n";
        }
    }
    if (!out.empty()) {
        fs::create_directories(out);
        write_output(out, "theorem.csv", csv.str(), manifest);
        manifest.write(out);
    }
    return ok ? 0 : 1;
}

ProbabilityMap ideal_ghz(int n, int m) {
    return exact_distribution(build_schedule(build_ghz_qft_circuit({n, m}), DeviceTiming{}));
}

void snr_row(std::ostringstream& csv, const std::string& label, const SnrReport& r, double f_1norm) {
    csv << r.m << "," << label << "," << fmt(r.p_peak) << "," << fmt(r.p_mirror) << "," << fmt(r.noise) << ","
        << fmt(r.snr) << "," << (r.zero_variance ? 1 : 0) << "," << fmt(f_1norm) << "\n";
}

}  // namespace

int cmd_qft(const Argv& args) {
    CLI::App app{"QFT+M experiments", "decoupler qft"};
    CommonOptions common;
    std::string mode_name, device_path, n_list, m_list, counterfactual_unused, from_distribution;
    std::string lookup = "window";
    std::vector<std::string> dd{"none"}, counterfactual;
    int samples = 16;
    std::uint64_t shots = 10000;
    std::optional<std::uint64_t> scramble_seed;
    bool noiseless = false, ideal = false;
    add_common(app, common, false);
    app.add_option("--mode", mode_name, "fidelity, ghz-snr or verify-theorem")
        ->required()
        ->check(CLI::IsMember({"fidelity", "ghz-snr", "verify-theorem"}));
    app.add_option("--device", device_path, "Device JSON");
    app.add_option("--n", n_list, "Qubit counts (list or lo:hi[:step])");
    app.add_option("--m", m_list, "GHZ phase-flip positions (default: all)");
    app.add_option("--dd", dd, "DD modes: none, xpxm, mdd, ffdd, gadd:<strategies.json>");
    app.add_option("--counterfactual", counterfactual, "Extra modes for each gadd file: unaware, scrambled");
    app.add_option("--scramble-seed", scramble_seed, "Seed of the scrambled motif assignment (default: --seed)");
    app.add_option("--lookup", lookup, "Learned strategy lookup: window or measured");
    app.add_option("--samples", samples, "Random basis states per fidelity estimate")->check(CLI::PositiveNumber);
    app.add_option("--shots", shots, "Shots per circuit");
    app.add_flag("--noiseless", noiseless, "Ignore every noise term of the device");
    app.add_flag("--ideal", ideal, "ghz-snr: add exact noiseless rows");
    app.add_option("--from-distribution", from_distribution, "ghz-snr: score a stored outcome distribution");
    try {
        app.parse(Argv(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    Manifest manifest("qft", args, common);
    manifest.extra()["mode"] = mode_name;

    if (mode_name == "verify-theorem") return verify_theorem(parse_int_list(n_list.empty() ? "10" : n_list), common.out, manifest);
    if (common.out.empty()) throw UsageError("--out is required for --mode " + mode_name);
    const fs::path out(common.out);

    QftExperimentOptions opts;
    opts.shots = shots;
    opts.threads = resolve_threads(common.threads);
    opts.noiseless = noiseless;
    const auto motif_lookup = parse_lookup(lookup);

    if (mode_name == "fidelity") {
        if (device_path.empty()) throw UsageError("--device is required for --mode fidelity");
        const DeviceModel device = load_device(device_path);
        manifest.input("device", device_path);
        const auto modes = collect_modes(dd, counterfactual, motif_lookup, scramble_seed.value_or(common.seed), manifest);
        std::ostringstream csv;
        csv << "n,dd_mode,samples,shots,f_proc,stderr\n";
        nlohmann::json detail = nlohmann::json::array();
        for (int n : parse_int_list(n_list.empty() ? "4" : n_list)) {
            for (const auto& [label, mode] : modes) {
                const auto rep = compute_proc_fidelity(n, samples, mode, device, common.seed, opts);
                csv << n << "," << label << "," << samples << "," << shots << "," << fmt(rep.f_proc) << ","
                    << fmt(rep.stderr_shots) << "\n";
                detail.push_back({{"n", n}, {"dd_mode", label}, {"s", rep.s_values}, {"p_s", rep.p_s}});
                std::cout << "n=" << n << " " << label << ": F_proc " << rep.f_proc << " +- " << rep.stderr_shots << "\n";
            }
        }
        fs::create_directories(out);
        write_output(out, "fidelity.csv", csv.str(), manifest);
        write_output(out, "fidelity_samples.json", detail.dump(2) + "\n", manifest);
        manifest.write(out);
        return 0;
    }

    // ghz-snr
    std::ostringstream csv;
    csv << "m,dd_mode,p_peak,p_mirror,noise,snr,zero_variance,f_1norm\n";
    // mean 1-norm similarity to the noiseless distribution, per mode
    std::vector<std::pair<std::string, std::vector<double>>> similarity;
    const auto record = [&](const std::string& label, double f) {
        if (similarity.empty() || similarity.back().first != label) similarity.push_back({label, {}});
        similarity.back().second.push_back(f);
    };
    const auto write_similarity = [&] {
        std::ostringstream sim;
        sim << "dd_mode,n_m,mean_f_1norm\n";
        for (const auto& [label, fs] : similarity) {
            double mean = 0.0;
            for (double f : fs) mean += f;
            sim << label << "," << fs.size() << "," << fmt(mean / static_cast<double>(fs.size())) << "\n";
        }
        write_output(out, "similarity.csv", sim.str(), manifest);
    };
    fs::create_directories(out);
    if (!from_distribution.empty()) {
        const auto d = distribution_from_json(read_text_file(from_distribution));
        manifest.input("distribution", from_distribution);
        const int n = d.n_bits;
        const auto ms = m_list.empty() ? parse_int_list("0:" + std::to_string(n - 1)) : parse_int_list(m_list);
        for (int m : ms) {
            const auto r = compute_snr(d, n, m);
            const double f = evaluate_utility(d, ideal_ghz(n, m), UtilityKind::OneNorm);
            snr_row(csv, "file", r, f);
            record("file", f);
            std::cout << "m=" << m << " SNR " << r.snr << (r.zero_variance ? " (zero variance)" : "") << "\n";
        }
        write_output(out, "snr.csv", csv.str(), manifest);
        write_similarity();
        manifest.write(out);
        return 0;
    }
    const int n = n_list.empty() ? 10 : parse_int_list(n_list).at(0);
    const auto ms = m_list.empty() ? parse_int_list("0:" + std::to_string(n - 1)) : parse_int_list(m_list);
    for (int m : ms) {
        if (m < 0 || m >= n) throw UsageError("--m values must lie in [0, n)");
    }
    if (ideal) {
        for (int m : ms) {
            snr_row(csv, "ideal", compute_snr(ideal_ghz(n, m), n, m), 1.0);
            record("ideal", 1.0);
        }
    }
    if (!device_path.empty()) {
        const DeviceModel device = load_device(device_path);
        manifest.input("device", device_path);
        const auto modes = collect_modes(dd, counterfactual, motif_lookup, scramble_seed.value_or(common.seed), manifest);
        for (const auto& [label, mode] : modes) {
            for (int m : ms) {
                const auto d = run_ghz_qft({n, m}, mode, device, derive_seed(common.seed, "cli.ghz", {std::uint64_t(m)}), opts);
                const auto r = compute_snr(d, n, m);
                const double f = evaluate_utility(d, ideal_ghz(n, m), UtilityKind::OneNorm);
                snr_row(csv, label, r, f);
                record(label, f);
                write_output(out, "distributions/" + label + "_m" + std::to_string(m) + ".json",
                             distribution_to_json(d) + "\n", manifest);
                std::cout << "m=" << m << " " << label << ": SNR " << r.snr << "\n";
            }
        }
    } else if (!ideal) {
        throw UsageError("--device is required for --mode ghz-snr unless --ideal or --from-distribution is given");
    }
    write_output(out, "snr.csv", csv.str(), manifest);
    write_similarity();
    manifest.write(out);
    return 0;
}

}  // namespace cli
