#include <iostream>

#include "common.hpp"
#include "decoupler/device.hpp"
#include "decoupler/io.hpp"

namespace cli {

using namespace decoupler;

int cmd_synth(const Argv& args) {
    CLI::App app{"Write a synthetic, collision-free device description", "decoupler synth-device"};
    int n = 30;
    std::string topology = "chain";
    CommonOptions common;
    app.add_option("--n", n, "Qubit count")->check(CLI::Range(2, 1000));
    app.add_option("--topology", topology, "chain or heavy-hex")->check(CLI::IsMember({"chain", "heavy-hex"}));
    add_common(app, common, true);
    app.get_option("--out")->description("Device JSON path");
    try {
        app.parse(Argv(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    const auto device = synthesize_device(n, topology == "chain" ? Topology::Chain : Topology::HeavyHexPatch, common.seed);
    save_device(device, common.out);
    std::cout << "wrote " << common.out << " (" << device.n_qubits << " qubits, " << device.edges.size() << " edges)\n";
    return 0;
}

}  // namespace cli
