#include "decoupler/gadd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "decoupler/error.hpp"
#include "decoupler/parallel.hpp"
#include "decoupler/qft.hpp"
#include "decoupler/rb.hpp"
#include "decoupler/simulator.hpp"
#include "json_util.hpp"

namespace decoupler {

void validate(const GaddConfig& cfg) {
    if (cfg.N < 2) throw Error(Errc::InvalidArgument, "population size N must be at least 2");
    if (cfg.L < 1) throw Error(Errc::InvalidArgument, "sequence length L must be at least 1");
    if (cfg.k < 1) throw Error(Errc::InvalidArgument, "number of colors k must be at least 1");
    if (cfg.group.empty()) throw Error(Errc::InvalidArgument, "pulse group is empty");
    if (cfg.shots == 0) throw Error(Errc::ShotCountZero, "training needs at least one shot per circuit");
    if (cfg.n_iterations < 0) throw Error(Errc::InvalidArgument, "negative iteration count");
    if (!(cfg.mutation >= 0.0 && cfg.mutation <= 1.0)) throw Error(Errc::InvalidArgument, "mutation rate outside [0, 1]");
}

namespace {

using detail::json;

const char* to_string(Selection s) { return s == Selection::Rank ? "rank" : "fitness"; }
const char* to_string(FinalSlot s) { return s == FinalSlot::AtBoundary ? "boundary" : "after_ff"; }

}  // namespace

std::string config_to_json(const GaddConfig& cfg, int indent) {
    json group = json::array();
    for (auto g : cfg.group) group.push_back(to_string(g));
    json j = {{"L", cfg.L},
              {"k", cfg.k},
              {"N", cfg.N},
              {"group", group},
              {"n_iterations", cfg.n_iterations},
              {"shots", cfg.shots},
              {"mutation", cfg.mutation},
              {"selection", to_string(cfg.selection)},
              {"seed", cfg.seed},
              {"d_corr", cfg.d_corr},
              {"final_slot", to_string(cfg.schedule.final_slot)},
              {"frame_correction", cfg.schedule.frame_correction},
              {"collision_aware", cfg.collision_aware},
              {"thresholds",
               {{"stark_shift_mhz", cfg.thresholds.stark_shift_mhz},
                {"type1_mhz", cfg.thresholds.type1_mhz},
                {"type3_mhz", cfg.thresholds.type3_mhz},
                {"max_distance", cfg.thresholds.max_distance}}}};
    return j.dump(indent);
}

GaddConfig config_from_json(const std::string& text) {
    const json j = detail::parse_json(text);
    if (!j.is_object()) throw Error(Errc::ParseError, "GADD config must be an object");
    GaddConfig cfg;
    auto opt = [&](const char* key, auto& dst) {
        if (auto it = j.find(key); it != j.end()) dst = detail::get_as<std::decay_t<decltype(dst)>>(*it, key);
    };
    opt("L", cfg.L);
    opt("k", cfg.k);
    opt("N", cfg.N);
    opt("n_iterations", cfg.n_iterations);
    opt("shots", cfg.shots);
    opt("mutation", cfg.mutation);
    opt("seed", cfg.seed);
    opt("d_corr", cfg.d_corr);
    opt("collision_aware", cfg.collision_aware);
    opt("frame_correction", cfg.schedule.frame_correction);
    if (auto it = j.find("group"); it != j.end()) {
        cfg.group.clear();
        for (const auto& g : *it) {
            const auto label = parse_pulse_label(detail::get_as<std::string>(g, "group"));
            if (!label) throw Error(Errc::ParseError, "unknown pulse label in group: " + g.dump());
            cfg.group.push_back(*label);
        }
    }
    if (auto it = j.find("selection"); it != j.end()) {
        const auto s = detail::get_as<std::string>(*it, "selection");
        if (s == "rank") cfg.selection = Selection::Rank;
        else if (s == "fitness") cfg.selection = Selection::FitnessProportional;
        else throw Error(Errc::ParseError, "unknown selection '" + s + "'");
    }
    if (auto it = j.find("final_slot"); it != j.end()) {
        const auto s = detail::get_as<std::string>(*it, "final_slot");
        if (s == "boundary") cfg.schedule.final_slot = FinalSlot::AtBoundary;
        else if (s == "after_ff") cfg.schedule.final_slot = FinalSlot::AfterFeedforward;
        else throw Error(Errc::ParseError, "unknown final_slot '" + s + "'");
    }
    if (auto it = j.find("thresholds"); it != j.end()) {
        auto& t = cfg.thresholds;
        if (auto v = it->find("stark_shift_mhz"); v != it->end()) t.stark_shift_mhz = detail::get_as<double>(*v, "stark_shift_mhz");
        if (auto v = it->find("type1_mhz"); v != it->end()) t.type1_mhz = detail::get_as<double>(*v, "type1_mhz");
        if (auto v = it->find("type3_mhz"); v != it->end()) t.type3_mhz = detail::get_as<double>(*v, "type3_mhz");
        if (auto v = it->find("max_distance"); v != it->end()) t.max_distance = detail::get_as<int>(*v, "max_distance");
    }
    validate(cfg);
    return cfg;
}

Population init_population(const GaddConfig& cfg, Rng& rng) {
    validate(cfg);
    Population pop;
    const auto N = static_cast<std::size_t>(cfg.N);
    pop.strategies.assign(N, DdStrategy{});
    for (auto& s : pop.strategies) {
        s.sequences.assign(static_cast<std::size_t>(cfg.k), DdSequence{});
        for (auto& seq : s.sequences) seq.pulses.resize(static_cast<std::size_t>(cfg.L));
    }
    const std::size_t G = cfg.group.size();
    for (int c = 0; c < cfg.k; ++c) {
        for (int i = 0; i < cfg.L; ++i) {
            std::vector<PulseLabel> column;
            for (std::size_t rep = 0; rep < N / G; ++rep) column.insert(column.end(), cfg.group.begin(), cfg.group.end());
            auto extra = cfg.group;
            rng.shuffle(extra.begin(), extra.end());
            column.insert(column.end(), extra.begin(), extra.begin() + static_cast<std::ptrdiff_t>(N % G));
            rng.shuffle(column.begin(), column.end());
            for (std::size_t n = 0; n < N; ++n) {
                pop.strategies[n].sequences[static_cast<std::size_t>(c)].pulses[static_cast<std::size_t>(i)] = column[n];
            }
        }
    }
    pop.utilities.assign(N, std::numeric_limits<double>::quiet_NaN());
    return pop;
}

double evaluate_utility(const OutcomeDistribution& observed, const ProbabilityMap& target, UtilityKind kind,
                        const std::vector<int>& survival_bits) {
    if (observed.shots == 0) throw Error(Errc::ShotCountZero, "utility of an empty distribution");
    if (kind == UtilityKind::UnitarySurvival) {
        if (survival_bits.empty()) throw Error(Errc::InvalidArgument, "survival utility needs clbits");
        double s = 0.0;
        for (int b : survival_bits) s += observed.prob_zero(b);
        return s / static_cast<double>(survival_bits.size());
    }
    const auto p_hat = observed.probabilities();
    double f = 1.0 - tv_distance(target, p_hat);
    return std::clamp(f, 0.0, 1.0);
}

std::vector<std::pair<std::size_t, std::size_t>> select_parents(const std::vector<double>& utilities, int n_pairs,
                                                                 Rng& rng, Selection selection) {
    const std::size_t n = utilities.size();
    if (n == 0) throw Error(Errc::InvalidArgument, "cannot select from an empty population");
    std::vector<double> weight(n);
    if (selection == Selection::Rank) {
        // Best individual gets weight n, worst 1.
        const auto order = top_n(utilities, static_cast<int>(n));
        for (std::size_t r = 0; r < n; ++r) weight[order[r]] = static_cast<double>(n - r);
    } else {
        for (std::size_t i = 0; i < n; ++i) weight[i] = std::isfinite(utilities[i]) ? std::max(0.0, utilities[i]) : 0.0;
    }
    const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    auto draw = [&]() -> std::size_t {
        if (total <= 0.0) return static_cast<std::size_t>(rng.below(n));
        const double u = rng.uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += weight[i];
            if (u < acc && weight[i] > 0.0) return i;
        }
        for (std::size_t i = n; i-- > 0;) {
            if (weight[i] > 0.0) return i;
        }
        return n - 1;
    };
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(static_cast<std::size_t>(n_pairs));
    for (int p = 0; p < n_pairs; ++p) {
        const auto a = draw();
        const auto b = draw();
        pairs.emplace_back(a, b);
    }
    return pairs;
}

std::vector<DdStrategy> reproduce(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  const std::vector<DdStrategy>& parents, const GaddConfig& cfg, Rng& rng) {
    std::vector<DdStrategy> children;
    children.reserve(pairs.size() * 2);
    for (const auto& [ia, ib] : pairs) {
        const auto& a = parents.at(ia);
        const auto& b = parents.at(ib);
        DdStrategy c1 = a;
        DdStrategy c2 = b;
        for (std::size_t color = 0; color < a.sequences.size(); ++color) {
            const int L = a.sequences[color].length();
            if (L < 2) continue;
            const auto cut = static_cast<std::size_t>(1 + rng.below(static_cast<std::uint64_t>(L - 1)));
            for (std::size_t i = cut; i < static_cast<std::size_t>(L); ++i) {
                c1.sequences[color].pulses[i] = b.sequences[color].pulses[i];
                c2.sequences[color].pulses[i] = a.sequences[color].pulses[i];
            }
        }
        for (DdStrategy* child : {&c1, &c2}) {
            for (auto& seq : child->sequences) {
                for (auto& p : seq.pulses) {
                    if (rng.uniform() < cfg.mutation) p = cfg.group[rng.below(cfg.group.size())];
                }
            }
        }
        children.push_back(std::move(c1));
        children.push_back(std::move(c2));
    }
    return children;
}

std::vector<std::size_t> top_n(const std::vector<double>& utilities, int n) {
    std::vector<std::size_t> idx(utilities.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::isfinite(utilities[i]) ? utilities[i] : -1.0; };
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
    idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(std::max(0, n))));
    return idx;
}

MotifTraining qft_training(const Motif& motif, int n_qubits) {
    MotifTraining t;
    const auto& q = motif.qubits;
    t.circuit = DynamicCircuit(n_qubits, static_cast<int>(q.size()));
    append_qft_dagger_basis(t.circuit, q, 0);
    t.circuit.barrier(q);
    std::vector<Clbit> bits(q.size());
    std::iota(bits.begin(), bits.end(), 0);
    append_qft_m(t.circuit, q, bits);
    t.target[std::string(q.size(), '0')] = 1.0;
    t.kind = UtilityKind::OneNorm;
    return t;
}

MotifTraining dc_rb_training(const Motif& motif, int n_qubits, bool z_block, int l, std::uint64_t seed) {
    std::optional<Qubit> measured;
    for (const auto& inst : motif.subcircuit.instructions) {
        if (const auto* m = std::get_if<Measure>(&inst)) {
            measured = m->qubit;
            break;
        }
    }
    if (!measured) throw Error(Errc::InvalidArgument, "DC-RB training needs a measured qubit in the motif");
    std::vector<Qubit> unitaries;
    for (Qubit q : motif.qubits) {
        if (q != *measured) unitaries.push_back(q);
    }
    Rng rng = substream(seed, "gadd.dcrb", {static_cast<std::uint64_t>(motif.id.interval),
                                            static_cast<std::uint64_t>(motif.id.reg)});
    const auto rb = build_dc_rb(n_qubits, z_block ? RbKind::DcRbZ : RbKind::DcRbI, *measured, unitaries, l, rng);
    MotifTraining t;
    t.circuit = rb.circuit;
    t.kind = UtilityKind::UnitarySurvival;
    for (Qubit u : unitaries) t.survival_bits.push_back(rb.readout.at(u));
    t.target = exact_distribution(build_schedule(t.circuit, {}));
    return t;
}

MotifTraining subcircuit_training(const Motif& motif) {
    MotifTraining t;
    t.circuit = motif.subcircuit;
    t.target = exact_distribution(build_schedule(t.circuit, {}));
    t.kind = UtilityKind::OneNorm;
    return t;
}

namespace {

void append_shifted(DynamicCircuit& dst, const DynamicCircuit& src, int clbit_offset) {
    for (auto inst : src.instructions) {
        if (auto* m = std::get_if<Measure>(&inst)) m->clbit += clbit_offset;
        if (auto* c = std::get_if<Conditional>(&inst)) c->clbit += clbit_offset;
        dst.append(inst);
    }
}

// One parallel group's combined training circuit.
class GroupEvaluator {
public:
    GroupEvaluator(const std::vector<const Motif*>& motifs, const std::vector<MotifTraining>& trainings,
                   const DeviceModel& device, const GaddConfig& cfg, const std::vector<CollisionFlag>& collisions)
        : trainings_(trainings), device_(device), cfg_(cfg), collisions_(collisions) {
        int clbits = 0;
        for (const auto& t : trainings) clbits += t.circuit.n_clbits;
        DynamicCircuit combined(device.n_qubits, clbits);
        int offset = 0;
        for (std::size_t j = 0; j < trainings.size(); ++j) {
            if (trainings[j].circuit.n_qubits > device.n_qubits) {
                throw Error(Errc::QubitCountMismatch, "training circuit wider than the device");
            }
            append_shifted(combined, trainings[j].circuit, offset);
            std::vector<int> bits(static_cast<std::size_t>(trainings[j].circuit.n_clbits));
            std::iota(bits.begin(), bits.end(), offset);
            bits_.push_back(std::move(bits));
            offset += trainings[j].circuit.n_clbits;
        }
        sched_ = build_schedule(combined, device.timing);
        partition_.boundaries = {0, std::max<Nanos>(sched_.total_duration, 1)};
        for (const auto* m : motifs) partition_.registers.push_back(m->qubits);
        coloring_ = color_windows(sched_, device, cfg.k);
    }

    // Utilities of each motif when motif j runs strategies[j].
    std::vector<double> evaluate(const std::vector<const DdStrategy*>& strategies, std::uint64_t seed) const {
        StrategyMap map;
        for (std::size_t j = 0; j < strategies.size(); ++j) map[{0, static_cast<int>(j)}] = *strategies[j];
        PadOptions pad;
        pad.schedule = cfg_.schedule;
        const auto pulses = pad_strategy(sched_, coloring_, partition_, map, device_, collisions_, pad);
        const auto dist = run_shots(sched_, pulses, device_, cfg_.shots, seed);
        std::vector<double> f(trainings_.size());
        for (std::size_t j = 0; j < trainings_.size(); ++j) {
            const auto& t = trainings_[j];
            if (t.kind == UtilityKind::UnitarySurvival) {
                std::vector<int> bits;
                for (int b : t.survival_bits) bits.push_back(bits_[j][static_cast<std::size_t>(b)]);
                f[j] = evaluate_utility(dist, t.target, t.kind, bits);
            } else {
                f[j] = evaluate_utility(dist.marginal(bits_[j]), t.target, t.kind);
            }
        }
        return f;
    }

private:
    const std::vector<MotifTraining>& trainings_;
    const DeviceModel& device_;
    const GaddConfig& cfg_;
    const std::vector<CollisionFlag>& collisions_;
    ScheduledCircuit sched_;
    Partition partition_;
    Coloring coloring_;
    std::vector<std::vector<int>> bits_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TrainingResult run_training(const ScheduledCircuit& target, const GaddConfig& cfg, const DeviceModel& device,
                            int n_intervals, const std::vector<std::vector<Qubit>>& registers,
                            const TrainingFactory& factory, const TrainingHooks& hooks) {
    validate(cfg);
    const auto t_start = std::chrono::steady_clock::now();
    TrainingResult result;
    result.partition = make_partition(target, n_intervals, registers);
    const auto motifs = partition_motifs(target, result.partition);
    const auto groups = parallel_groups(motifs, device, cfg.d_corr);
    std::vector<CollisionFlag> collisions;
    if (cfg.collision_aware) collisions = detect_all_collisions(device, cfg.thresholds);

    auto& rec = result.record;
    rec.M = static_cast<int>(motifs.size());
    rec.p = groups.empty() ? 0.0 : static_cast<double>(motifs.size()) / static_cast<double>(groups.size());
    rec.N_it = cfg.n_iterations;
    rec.groups = groups;
    for (const auto& m : motifs) rec.motifs.push_back({m.id, m.qubits, {}, {}});

    std::size_t first_group = 0;
    int first_iteration = 0;
    if (hooks.resume) {
        const auto& partial = hooks.resume->partial;
        if (partial.record.motifs.size() != motifs.size()) {
            throw Error(Errc::InvalidArgument, "checkpoint does not match the training target");
        }
        for (std::size_t i = 0; i < motifs.size(); ++i) {
            if (partial.record.motifs[i].id != motifs[i].id) {
                throw Error(Errc::InvalidArgument, "checkpoint motifs differ from the training target");
            }
            rec.motifs[i].utilities = partial.record.motifs[i].utilities;
            rec.motifs[i].best = partial.record.motifs[i].best;
        }
        result.populations = partial.populations;
        result.strategies = partial.strategies;
        first_group = hooks.resume->group;
        first_iteration = hooks.resume->iteration + 1;
        if (first_iteration > cfg.n_iterations) {
            ++first_group;
            first_iteration = 0;
        }
    }

    double iteration_seconds = 0.0;
    int iterations_timed = 0;
    const std::size_t N = static_cast<std::size_t>(cfg.N);
    for (std::size_t g = first_group; g < groups.size(); ++g) {
        std::vector<const Motif*> members;
        std::vector<MotifTraining> trainings;
        for (std::size_t mi : groups[g]) {
            members.push_back(&motifs[mi]);
            trainings.push_back(factory(motifs[mi]));
        }
        const GroupEvaluator evaluator(members, trainings, device, cfg, collisions);

        // Evaluates individuals [begin, end) of every member's candidate list.
        auto evaluate_all = [&](const std::vector<std::vector<DdStrategy>>& candidates, int iteration) {
            const std::size_t count = candidates.front().size();
            std::vector<std::vector<double>> f(members.size(), std::vector<double>(count));
            parallel_for(count, cfg.threads, [&](std::size_t idx) {
                std::vector<const DdStrategy*> picks;
                for (const auto& c : candidates) picks.push_back(&c[idx]);
                const auto u = evaluator.evaluate(
                    picks, derive_seed(cfg.seed, "gadd.eval",
                                       {static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(iteration),
                                        static_cast<std::uint64_t>(idx)}));
                for (std::size_t j = 0; j < members.size(); ++j) f[j][idx] = u[j];
            });
            return f;
        };

        auto checkpoint = [&](int iteration) {
            for (std::size_t j = 0; j < members.size(); ++j) {
                const auto& pop = result.populations.at(members[j]->id);
                result.strategies[members[j]->id] = pop.strategies.front();
            }
            if (hooks.on_checkpoint) hooks.on_checkpoint({g, iteration, result});
        };

        int it0 = 1;
        if (g == first_group && first_iteration > 0) {
            it0 = first_iteration;
        } else {
            std::vector<std::vector<DdStrategy>> initial;
            for (const auto* m : members) {
                Rng rng = substream(cfg.seed, "gadd.init", {static_cast<std::uint64_t>(m->id.interval),
                                                            static_cast<std::uint64_t>(m->id.reg)});
                initial.push_back(init_population(cfg, rng).strategies);
            }
            const auto f = evaluate_all(initial, 0);
            for (std::size_t j = 0; j < members.size(); ++j) {
                const auto order = top_n(f[j], cfg.N);
                Population pop;
                for (auto i : order) {
                    pop.strategies.push_back(initial[j][i]);
                    pop.utilities.push_back(f[j][i]);
                }
                auto& hist = rec.motifs[groups[g][j]];
                hist.utilities.clear();
                hist.best = {pop.utilities.front()};
                result.populations[members[j]->id] = std::move(pop);
            }
            checkpoint(0);
        }

        for (int it = it0; it <= cfg.n_iterations; ++it) {
            const auto t_it = std::chrono::steady_clock::now();
            std::vector<std::vector<DdStrategy>> children;
            for (const auto* m : members) {
                const auto& pop = result.populations.at(m->id);
                Rng rng = substream(cfg.seed, "gadd.ga",
                                    {static_cast<std::uint64_t>(m->id.interval), static_cast<std::uint64_t>(m->id.reg),
                                     static_cast<std::uint64_t>(it)});
                const auto pairs = select_parents(pop.utilities, cfg.N, rng, cfg.selection);
                children.push_back(reproduce(pairs, pop.strategies, cfg, rng));
            }
            const auto f = evaluate_all(children, it);
            for (std::size_t j = 0; j < members.size(); ++j) {
                auto& pop = result.populations.at(members[j]->id);
                std::vector<DdStrategy> pool = pop.strategies;
                std::vector<double> utilities = pop.utilities;
                pool.insert(pool.end(), children[j].begin(), children[j].end());
                utilities.insert(utilities.end(), f[j].begin(), f[j].end());
                auto& hist = rec.motifs[groups[g][j]];
                hist.utilities.push_back(utilities);
                Population next;
                for (auto i : top_n(utilities, cfg.N)) {
                    next.strategies.push_back(pool[i]);
                    next.utilities.push_back(utilities[i]);
                }
                hist.best.push_back(next.utilities.front());
                pop = std::move(next);
            }
            iteration_seconds += seconds_since(t_it);
            ++iterations_timed;
            checkpoint(it);
        }
        (void)N;
    }
    rec.T = iterations_timed ? iteration_seconds / iterations_timed : 0.0;
    rec.total_seconds = seconds_since(t_start);
    return result;
}

DdMode learned_mode(const TrainingResult& result, MotifLookup lookup, PadMode pad, std::uint64_t scramble_seed) {
    return learned_mode(strategy_set(result), lookup, pad, scramble_seed);
}

DdMode learned_mode(const StrategySet& set, MotifLookup lookup, PadMode pad, std::uint64_t scramble_seed) {
    DdMode mode;
    mode.kind = DdMode::Kind::Learned;
    mode.strategies = set.strategies;
    mode.n_intervals = set.n_intervals;
    mode.registers = set.registers;
    mode.pad.lookup = lookup;
    mode.pad.mode = pad;
    mode.pad.scramble_seed = scramble_seed;
    if (pad == PadMode::Unaware) {
        if (!set.best) throw Error(Errc::MissingStrategy, "unaware padding needs the best motif of the strategy set");
        mode.pad.unaware_source = set.best;
    }
    return mode;
}

StrategySet strategy_set(const TrainingResult& result) {
    StrategySet set;
    set.strategies = result.strategies;
    set.n_intervals = result.partition.n_intervals();
    set.registers = result.partition.registers;
    if (!result.record.motifs.empty()) set.best = best_motif(result);
    return set;
}

MotifId best_motif(const TrainingResult& result) {
    if (result.record.motifs.empty()) throw Error(Errc::MissingStrategy, "training produced no motifs");
    const MotifHistory* best = &result.record.motifs.front();
    for (const auto& m : result.record.motifs) {
        if (!m.best.empty() && (best->best.empty() || m.best.back() > best->best.back())) best = &m;
    }
    return best->id;
}

std::string utilities_to_json(const TrainingRunRecord& record, int indent) {
    json motifs = json::array();
    for (const auto& m : record.motifs) {
        motifs.push_back({{"interval", m.id.interval},
                          {"register", m.id.reg},
                          {"qubits", m.qubits},
                          {"utilities", m.utilities},
                          {"best", m.best}});
    }
    json groups = json::array();
    for (const auto& g : record.groups) groups.push_back(g);
    return json{{"M", record.M}, {"p", record.p}, {"N_it", record.N_it}, {"groups", groups}, {"motifs", motifs}}.dump(indent);
}

namespace {

json strategy_json(const DdStrategy& s) { return detail::parse_json(strategy_to_json(s, -1)); }

}  // namespace

std::string checkpoint_to_json(const TrainingCheckpoint& cp, const GaddConfig& cfg, int indent) {
    json pops = json::array();
    for (const auto& [id, pop] : cp.partial.populations) {
        json strategies = json::array();
        for (const auto& s : pop.strategies) strategies.push_back(strategy_json(s));
        pops.push_back({{"interval", id.interval}, {"register", id.reg}, {"strategies", strategies}, {"utilities", pop.utilities}});
    }
    json j = {{"group", cp.group},
              {"iteration", cp.iteration},
              {"config", detail::parse_json(config_to_json(cfg, -1))},
              {"record", detail::parse_json(utilities_to_json(cp.partial.record, -1))},
              {"populations", pops}};
    return j.dump(indent);
}

TrainingCheckpoint checkpoint_from_json(const std::string& text) {
    const json j = detail::parse_json(text);
    const std::string where = "checkpoint";
    TrainingCheckpoint cp;
    cp.group = detail::field_as<std::size_t>(j, "group", where);
    cp.iteration = detail::field_as<int>(j, "iteration", where);
    const auto& rec = detail::field(j, "record", where);
    for (const auto& m : detail::field(rec, "motifs", "checkpoint record")) {
        MotifHistory h;
        h.id = {detail::field_as<int>(m, "interval", "motif"), detail::field_as<int>(m, "register", "motif")};
        h.qubits = detail::field_as<std::vector<Qubit>>(m, "qubits", "motif");
        h.utilities = detail::field_as<std::vector<std::vector<double>>>(m, "utilities", "motif");
        h.best = detail::field_as<std::vector<double>>(m, "best", "motif");
        cp.partial.record.motifs.push_back(std::move(h));
    }
    for (const auto& p : detail::field(j, "populations", where)) {
        const MotifId id{detail::field_as<int>(p, "interval", "population"), detail::field_as<int>(p, "register", "population")};
        Population pop;
        for (const auto& s : detail::field(p, "strategies", "population")) pop.strategies.push_back(strategy_from_json(s.dump()));
        pop.utilities = detail::field_as<std::vector<double>>(p, "utilities", "population");
        if (pop.strategies.empty() || pop.strategies.size() != pop.utilities.size()) {
            throw Error(Errc::ParseError, "checkpoint population for " + to_string(id) + " is malformed");
        }
        cp.partial.strategies[id] = pop.strategies.front();
        cp.partial.populations[id] = std::move(pop);
    }
    return cp;
}

}  // namespace decoupler
