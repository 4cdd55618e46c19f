#include <iostream>

#include "common.hpp"
#include "decoupler/error.hpp"
#include "decoupler/gadd.hpp"
#include "decoupler/io.hpp"
#include "decoupler/qft.hpp"

namespace cli {

using namespace decoupler;

namespace {

std::pair<int, int> parse_partitions(const std::string& text) {
    const auto x = text.find_first_of("xX");
    try {
        if (x != std::string::npos) {
            const int a = std::stoi(text.substr(0, x));
            const int b = std::stoi(text.substr(x + 1));
            if (a >= 1 && b >= 1) return {a, b};
        }
    } catch (const std::logic_error&) {
    }
    throw UsageError("--partitions expects AxB with positive integers, got '" + text + "'");
}

TrainingFactory make_factory(const std::string& kind, int n_qubits, std::uint64_t seed) {
    if (kind == "qft") return [n_qubits](const Motif& m) { return qft_training(m, n_qubits); };
    if (kind == "dc-rb-z" || kind == "dc-rb-i") {
        const bool z = kind == "dc-rb-z";
        return [n_qubits, z, seed](const Motif& m) { return dc_rb_training(m, n_qubits, z, 3, seed); };
    }
    return [](const Motif& m) { return subcircuit_training(m); };
}

}  // namespace

int cmd_train(const Argv& args) {
    CLI::App app{"Learn DD strategies for the motifs of a dynamic circuit", "decoupler train"};
    CommonOptions common;
    std::string device_path, circuit_path, config_path, partitions = "1x1", training = "qft";
    int qft_n = 0;
    std::optional<int> iterations, population, shots;
    bool resume = false;
    add_common(app, common);
    app.add_option("--device", device_path, "Device JSON")->required();
    auto* circ = app.add_option("--circuit", circuit_path, "Target circuit JSON");
    auto* qft = app.add_option("--qft", qft_n, "Use QFT+M on qubits 0..N-1 as the target")->check(CLI::Range(1, 64));
    circ->excludes(qft);
    app.add_option("--partitions", partitions, "A intervals x B contiguous registers, e.g. 6x6");
    app.add_option("--training", training, "Motif training circuits")
        ->check(CLI::IsMember({"qft", "dc-rb-z", "dc-rb-i", "subcircuit"}));
    app.add_option("--config", config_path, "GADD config JSON");
    app.add_option("--iterations", iterations, "Override GA iterations");
    app.add_option("--population", population, "Override population size N");
    app.add_option("--shots", shots, "Override shots per training circuit");
    app.add_flag("--resume", resume, "Continue from OUT/checkpoint.json");
    try {
        app.parse(Argv(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (circuit_path.empty() && qft_n == 0) throw UsageError("one of --circuit or --qft is required");

    Manifest manifest("train", args, common);
    const DeviceModel device = load_device(device_path);
    manifest.input("device", device_path);
    DynamicCircuit circuit;
    if (!circuit_path.empty()) {
        circuit = load_circuit(circuit_path);
        manifest.input("circuit", circuit_path);
    } else {
        circuit = build_qft_m(qft_n);
    }
    GaddConfig cfg;
    if (!config_path.empty()) {
        cfg = config_from_json(read_text_file(config_path));
        manifest.input("config", config_path);
    }
    cfg.seed = common.seed;
    if (iterations) cfg.n_iterations = *iterations;
    if (population) cfg.N = *population;
    if (shots) cfg.shots = static_cast<std::uint64_t>(*shots);
    cfg.threads = resolve_threads(common.threads);
    validate(cfg);

    const auto [n_intervals, n_registers] = parse_partitions(partitions);
    const int size = (circuit.n_qubits + n_registers - 1) / n_registers;
    const auto registers = contiguous_registers(circuit.n_qubits, size);
    const auto target = build_schedule(circuit, device.timing);

    const fs::path out(common.out);
    fs::create_directories(out);
    const fs::path checkpoint_path = out / "checkpoint.json";
    const std::string config_text = config_to_json(cfg);
    std::optional<TrainingCheckpoint> checkpoint;
    TrainingHooks hooks;
    if (resume) {
        if (!fs::exists(checkpoint_path)) throw UsageError("no checkpoint to resume at " + checkpoint_path.string());
        const auto text = read_text_file(checkpoint_path);
        const auto stored = nlohmann::json::parse(text)["config"];
        if (config_to_json(config_from_json(stored.dump())) != config_text) {
            throw UsageError("checkpoint " + checkpoint_path.string() + " was written with a different config");
        }
        checkpoint = checkpoint_from_json(text);
        hooks.resume = &*checkpoint;
        manifest.input("checkpoint", checkpoint_path.string());
    }
    hooks.on_checkpoint = [&](const TrainingCheckpoint& cp) {
        const auto tmp = out / "checkpoint.json.tmp";
        write_text_file(tmp, checkpoint_to_json(cp, cfg) + "\n");
        fs::rename(tmp, checkpoint_path);
    };

    const auto result = run_training(target, cfg, device, n_intervals, registers,
                                     make_factory(training, device.n_qubits, cfg.seed), hooks);

    write_output(out, "config.json", config_text + "\n", manifest);
    write_output(out, "strategies.json",
                 strategy_set_to_json(result.strategies, result.partition, 2,
                                      result.record.motifs.empty() ? std::nullopt
                                                                   : std::optional<MotifId>(best_motif(result))),
                 manifest);
    write_output(out, "utilities.json", utilities_to_json(result.record) + "\n", manifest);
    manifest.output("checkpoint.json");
    const auto& rec = result.record;
    manifest.extra()["timing"] = {{"M", rec.M},
                                  {"p", rec.p},
                                  {"N_it", rec.N_it},
                                  {"T_seconds", rec.T},
                                  {"total_seconds", rec.total_seconds},
                                  {"groups", rec.groups.size()},
                                  {"resumed", resume}};
    manifest.write(out);
    std::cout << "trained " << rec.M << " motifs in " << rec.groups.size() << " parallel groups, " << rec.N_it
              << " iterations -> " << (out / "strategies.json").string() << "\n";
    return 0;
}

}  // namespace cli
