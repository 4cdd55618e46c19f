#include "common.hpp"

#include <ctime>
#include <iomanip>
#include <sstream>

#include "decoupler/error.hpp"
#include "decoupler/gadd.hpp"
#include "decoupler/io.hpp"
#include "decoupler/parallel.hpp"

namespace cli {

using namespace decoupler;

void add_common(CLI::App& cmd, CommonOptions& opt, bool out_required) {
    cmd.add_option("--seed", opt.seed, "Master seed");
    cmd.add_option("--threads", opt.threads, "Worker threads (default: DECOUPLER_THREADS or all cores)");
    auto* out = cmd.add_option("--out", opt.out, "Output directory");
    if (out_required) out->required();
}

int resolve_threads(int flag) { return flag > 0 ? flag : default_thread_count(); }

std::vector<int> parse_int_list(const std::string& text) {
    // "2,4,6" or "2:12:2" (inclusive range with step)
    std::vector<int> out;
    try {
        if (text.find(':') != std::string::npos) {
            std::vector<int> p;
            std::stringstream ss(text);
            for (std::string tok; std::getline(ss, tok, ':');) p.push_back(std::stoi(tok));
            if (p.size() < 2 || p.size() > 3) throw UsageError("bad range '" + text + "'");
            const int step = p.size() == 3 ? p[2] : 1;
            if (step <= 0) throw UsageError("bad range step in '" + text + "'");
            for (int v = p[0]; v <= p[1]; v += step) out.push_back(v);
            return out;
        }
        std::stringstream ss(text);
        for (std::string tok; std::getline(ss, tok, ',');) {
            if (!tok.empty()) out.push_back(std::stoi(tok));
        }
    } catch (const std::logic_error&) {
        throw UsageError("cannot parse integer list '" + text + "'");
    }
    return out;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::size_t start = 0;
        // A gadd:<path> entry keeps its path intact even with commas in it.
        if (item.rfind("gadd:", 0) == 0) {
            out.push_back(item);
            continue;
        }
        while (start <= item.size()) {
            const auto comma = item.find(',', start);
            const auto tok = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!tok.empty()) out.push_back(tok);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return out;
}

MotifLookup parse_lookup(const std::string& name) {
    if (name == "window") return MotifLookup::WindowRegister;
    if (name == "measured") return MotifLookup::MeasuredRegister;
    throw UsageError("unknown motif lookup '" + name + "' (expected window or measured)");
}

DdChoice parse_dd(const std::string& spec, MotifLookup lookup, int expect_L, int expect_k) {
    DdChoice c;
    if (auto b = parse_baseline(spec)) {
        c.label = spec;
        c.mode = DdMode::of(*b);
        return c;
    }
    if (spec.rfind("gadd:", 0) == 0) {
        c.strategy_file = spec.substr(5);
        if (c.strategy_file.empty()) throw UsageError("--dd gadd: needs a strategy file");
        c.label = "gadd";
        const auto set = strategy_set_read(read_text_file(c.strategy_file), expect_L, expect_k);
        c.mode = learned_mode(set, lookup);
        if (set.best) c.mode.pad.unaware_source = set.best;
        return c;
    }
    throw UsageError("unknown dd mode '" + spec + "' (expected none, xpxm, mdd, ffdd or gadd:<file>)");
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Manifest::Manifest(std::string command, const std::vector<std::string>& argv, const CommonOptions& opt)
    : command_(std::move(command)), argv_(argv), seed_(opt.seed), threads_(resolve_threads(opt.threads)),
      out_(opt.out), started_(utc_now()) {}

void Manifest::input(const std::string& role, const std::string& path) {
    inputs_.push_back({{"role", role}, {"path", path}});
}

void Manifest::output(const std::string& name) { outputs_.push_back(name); }

void Manifest::write(const fs::path& dir) {
    json j = {{"format", 1},
              {"tool", "decoupler"},
              {"version", DECOUPLER_VERSION},
              {"command", command_},
              {"argv", argv_},
              {"seed", seed_},
              {"threads", threads_},
              {"out", out_},
              {"inputs", inputs_},
              {"outputs", outputs_},
              {"started", started_},
              {"finished", utc_now()}};
    for (const auto& [k, v] : extra_.items()) j[k] = v;
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

void write_output(const fs::path& dir, const std::string& name, const std::string& text, Manifest& manifest) {
    const fs::path path = dir / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_text_file(path, text);
    manifest.output(name);
}

}  // namespace cli
