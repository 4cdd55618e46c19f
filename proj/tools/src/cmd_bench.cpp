#include <iostream>

#include "common.hpp"
#include "decoupler/io.hpp"
#include "decoupler/rb.hpp"

namespace cli {

using namespace decoupler;

int cmd_bench(const Argv& args) {
    CLI::App app{"Randomized benchmarking of dynamic-circuit idle errors under DD modes", "decoupler bench"};
    CommonOptions common;
    std::string kind_name, device_path, measured = "0", unitaries = "1", lengths, lookup = "measured";
    std::vector<std::string> dd{"none"};
    std::optional<int> randomizations, bootstrap, bootstrap_size;
    std::optional<std::uint64_t> shots;
    int expect_L = 8, expect_k = 2;
    bool noiseless = false;
    add_common(app, common);
    app.add_option("--kind", kind_name, "mcm-rb, dc-rb-z or dc-rb-i")->required();
    app.add_option("--device", device_path, "Device JSON")->required();
    app.add_option("--dd", dd, "DD modes: none, xpxm, mdd, ffdd, gadd:<strategies.json> (repeat or comma-separate)");
    app.add_option("--measured", measured, "Measured qubits, e.g. 0,5");
    app.add_option("--unitaries", unitaries, "Unitary qubits, e.g. 1,2,3");
    app.add_option("--lengths", lengths, "Sequence lengths, list or lo:hi:step");
    app.add_option("--randomizations", randomizations, "Random circuits per length");
    app.add_option("--shots", shots, "Shots per circuit");
    app.add_option("--bootstrap", bootstrap, "Bootstrap resamples");
    app.add_option("--bootstrap-size", bootstrap_size, "Circuits per length in each resample (0: all)");
    app.add_option("--lookup", lookup, "Learned strategy lookup: measured or window");
    app.add_option("--L", expect_L, "Required sequence length of gadd strategy files");
    app.add_option("--k", expect_k, "Required color count of gadd strategy files");
    app.add_flag("--noiseless", noiseless, "Ignore every noise term of the device");
    try {
        app.parse(Argv(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    const auto kind = parse_rb_kind(kind_name);
    if (!kind) throw UsageError("unknown --kind '" + kind_name + "' (expected mcm-rb, dc-rb-z or dc-rb-i)");

    Manifest manifest("bench", args, common);
    const DeviceModel device = load_device(device_path);
    manifest.input("device", device_path);
    const auto motif_lookup = parse_lookup(lookup);
    std::vector<DdMode> modes;
    for (const auto& spec : split_list(dd)) {
        auto choice = parse_dd(spec, motif_lookup, expect_L, expect_k);
        if (!choice.strategy_file.empty()) manifest.input("strategies", choice.strategy_file);
        modes.push_back(std::move(choice.mode));
    }

    RbSpec spec = *kind == RbKind::McmRb ? RbSpec::mcm_rb_defaults() : RbSpec::dc_rb_defaults(*kind);
    for (int q : parse_int_list(measured)) spec.measured.push_back(q);
    for (int q : parse_int_list(unitaries)) spec.unitaries.push_back(q);
    if (!lengths.empty()) spec.lengths = parse_int_list(lengths);
    if (randomizations) spec.n_randomizations = *randomizations;
    if (shots) spec.shots = *shots;
    if (bootstrap) spec.bootstrap_resamples = *bootstrap;
    if (bootstrap_size) spec.bootstrap_size = *bootstrap_size;
    validate(spec);

    RbRunOptions opts;
    opts.threads = resolve_threads(common.threads);
    opts.noiseless = noiseless;
    const auto results = run_rb(spec, device, modes, common.seed, opts);

    const fs::path out(common.out);
    fs::create_directories(out);
    write_output(out, "rb.csv", rb_results_csv(spec, results), manifest);
    write_output(out, "fits.json", rb_fits_json(results) + "\n", manifest);
    manifest.extra()["rb"] = {{"kind", to_string(*kind)},
                              {"lengths", spec.lengths},
                              {"randomizations", spec.n_randomizations},
                              {"shots", spec.shots}};
    manifest.write(out);
    for (const auto& r : results) {
        std::cout << to_string(*kind) << " " << r.mode << ": mean unitary EPL " << r.mean_unitary_epl() << "\n";
    }
    return 0;
}

}  // namespace cli
