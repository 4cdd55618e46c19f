#include <iostream>
#include <map>

#include "common.hpp"
#include "decoupler/error.hpp"
#include "decoupler/io.hpp"

namespace {

using cli::Argv;

int replay(const Argv& args);

const std::map<std::string, int (*)(const Argv&)>& commands() {
    static const std::map<std::string, int (*)(const Argv&)> table{
        {"train", cli::cmd_train},
        {"bench", cli::cmd_bench},
        {"qft", cli::cmd_qft},
        {"synth-device", cli::cmd_synth},
        {"replay", replay},
    };
    return table;
}

void usage(std::ostream& os) {
    os << "usage: decoupler <command> [options]\n\n"
          "commands:\n"
          "  train         learn DD strategies for a dynamic circuit\n"
          "  bench         MCM-RB / DC-RB under DD modes\n"
          "  qft           QFT+M process fidelity, GHZ SNR, theorem check\n"
          "  synth-device  write a synthetic device description\n"
          "  replay        rerun the command recorded in a manifest\n\n"
          "run 'decoupler <command> --help' for options\n";
}

int dispatch(const std::string& name, const Argv& args) {
    const auto it = commands().find(name);
    if (it == commands().end()) {
        std::cerr << "decoupler: unknown command '" << name << "'\n";
        usage(std::cerr);
        return 2;
    }
    return it->second(args);
}

// decoupler replay <manifest.json> [--out DIR]
int replay(const Argv& args) {
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        std::cout << "usage: decoupler replay <manifest.json> [--out DIR]\n";
        return args.empty() ? 2 : 0;
    }
    const auto manifest = nlohmann::json::parse(decoupler::read_text_file(args[0]), nullptr, false);
    if (manifest.is_discarded() || !manifest.contains("command") || !manifest.contains("argv")) {
        throw cli::UsageError("'" + args[0] + "' is not a decoupler manifest");
    }
    auto argv = manifest["argv"].get<Argv>();
    if (args.size() == 3 && args[1] == "--out") {
        bool replaced = false;
        for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
            if (argv[i] == "--out") {
                argv[i + 1] = args[2];
                replaced = true;
            }
        }
        if (!replaced) {
            argv.push_back("--out");
            argv.push_back(args[2]);
        }
    } else if (args.size() != 1) {
        throw cli::UsageError("usage: decoupler replay <manifest.json> [--out DIR]");
    }
    return dispatch(manifest["command"].get<std::string>(), argv);
}

bool is_config_error(decoupler::Errc code) {
    using decoupler::Errc;
    switch (code) {
        case Errc::ParseError:
        case Errc::InvalidArgument:
        case Errc::Io:
        case Errc::MissingStrategy:
        case Errc::OverlappingRegisters:
        case Errc::QubitCountMismatch:
        case Errc::UnknownGateDuration:
        case Errc::ShotCountZero:
            return true;
        default:
            return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return 2;
    }
    const std::string name = argv[1];
    if (name == "--help" || name == "-h" || name == "help") {
        usage(std::cout);
        return 0;
    }
    if (name == "--version") {
        std::cout << "decoupler " << DECOUPLER_VERSION << "\n";
        return 0;
    }
    const Argv args(argv + 2, argv + argc);
    try {
        return dispatch(name, args);
    } catch (const cli::UsageError& e) {
        std::cerr << "decoupler " << name << ": " << e.what() << "\n";
        return 2;
    } catch (const decoupler::Error& e) {
        std::cerr << "decoupler " << name << ": " << e.what() << "\n";
        return is_config_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "decoupler " << name << ": " << e.what() << "\n";
        return 1;
    }
}
