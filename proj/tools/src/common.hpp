#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "decoupler/dd.hpp"

namespace cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

/// Bad flags, unreadable inputs or invalid configuration: exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
};

void add_common(CLI::App& cmd, CommonOptions& opt, bool out_required = true);
int resolve_threads(int flag);

std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> split_list(const std::vector<std::string>& items);

/// none | xpxm | mdd | ffdd | gadd:<strategies.json>
struct DdChoice {
    std::string label;
    decoupler::DdMode mode;
    std::string strategy_file;
};
DdChoice parse_dd(const std::string& spec, decoupler::MotifLookup lookup, int expect_L, int expect_k);
decoupler::MotifLookup parse_lookup(const std::string& name);

/// Records how an output directory was produced. Result files never contain
/// timing or host data; that lives here.
class Manifest {
public:
    Manifest(std::string command, const std::vector<std::string>& argv, const CommonOptions& opt);
    void input(const std::string& role, const std::string& path);
    void output(const std::string& name);
    json& extra() { return extra_; }
    void write(const fs::path& dir);

private:
    std::string command_;
    std::vector<std::string> argv_;
    std::uint64_t seed_;
    int threads_;
    std::string out_;
    json inputs_ = json::array();
    json outputs_ = json::array();
    json extra_ = json::object();
    std::string started_;
};

std::string utc_now();
void write_output(const fs::path& dir, const std::string& name, const std::string& text, Manifest& manifest);

using Argv = std::vector<std::string>;
int cmd_train(const Argv& args);
int cmd_bench(const Argv& args);
int cmd_qft(const Argv& args);
int cmd_synth(const Argv& args);

}  // namespace cli
