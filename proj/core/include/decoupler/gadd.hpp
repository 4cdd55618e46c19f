#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "decoupler/dd.hpp"
#include "decoupler/device.hpp"
#include "decoupler/distribution.hpp"
#include "decoupler/rng.hpp"

namespace decoupler {

enum class UtilityKind { OneNorm, UnitarySurvival };
enum class Selection { FitnessProportional, Rank };

struct GaddConfig {
    int L = 8;
    int k = 2;
    int N = 16;
    std::vector<PulseLabel> group{kAllPulseLabels.begin(), kAllPulseLabels.end()};
    int n_iterations = 9;
    std::uint64_t shots = 250;
    double mutation = 0.05;
    Selection selection = Selection::FitnessProportional;
    std::uint64_t seed = 0;
    /// Motifs whose registers are farther apart than 2*d_corr train together.
    int d_corr = 4;
    int threads = 1;
    ScheduleOptions schedule;
    CollisionThresholds thresholds;
    bool collision_aware = true;
};

/// Throws InvalidArgument on N < 2, L < 1, k < 1, an empty group, zero shots
/// or a mutation rate outside [0, 1].
void validate(const GaddConfig& cfg);

std::string config_to_json(const GaddConfig& cfg, int indent = 2);
/// Missing keys keep their defaults.
GaddConfig config_from_json(const std::string& text);

struct Population {
    std::vector<DdStrategy> strategies;
    /// Same size as strategies; NaN until evaluated.
    std::vector<double> utilities;
};

/// For every (color, position) column each label of the group appears
/// floor(N/|G|) times, the remainder drawn without repetition, shuffled.
Population init_population(const GaddConfig& cfg, Rng& rng);

/// OneNorm: 1 - (1/2) sum |p - p_hat|. UnitarySurvival: mean probability that
/// each listed clbit reads 0. Throws ShotCountZero for an empty distribution.
double evaluate_utility(const OutcomeDistribution& observed, const ProbabilityMap& target, UtilityKind kind,
                        const std::vector<int>& survival_bits = {});

/// N parent pairs drawn with replacement. Fitness-proportional falls back to
/// uniform sampling when every utility is zero.
std::vector<std::pair<std::size_t, std::size_t>> select_parents(const std::vector<double>& utilities, int n_pairs,
                                                                 Rng& rng, Selection selection = Selection::FitnessProportional);

/// Two children per pair: per color a single-point crossover at a uniform cut
/// in [1, L-1], then each pulse is replaced by a uniform group element with
/// probability cfg.mutation.
std::vector<DdStrategy> reproduce(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  const std::vector<DdStrategy>& parents, const GaddConfig& cfg, Rng& rng);

/// Indices of the n best utilities, ties broken by lower index.
std::vector<std::size_t> top_n(const std::vector<double>& utilities, int n);

/// A motif's training circuit on device qubits and how to score it.
struct MotifTraining {
    DynamicCircuit circuit;
    /// Ideal distribution over the circuit's clbits.
    ProbabilityMap target;
    UtilityKind kind = UtilityKind::OneNorm;
    std::vector<int> survival_bits;
};

using TrainingFactory = std::function<MotifTraining(const Motif&)>;

/// QFT+M on the register prepared in QFT^dagger|0...0>; the target is a delta
/// on all-zero.
MotifTraining qft_training(const Motif& motif, int n_qubits);
/// DC-RB of length l on the register with its first measured qubit as the
/// measured role; the utility is unitary survival.
MotifTraining dc_rb_training(const Motif& motif, int n_qubits, bool z_block, int l, std::uint64_t seed);
/// The motif subcircuit itself, scored against its noiseless distribution.
MotifTraining subcircuit_training(const Motif& motif);

struct MotifHistory {
    MotifId id;
    std::vector<Qubit> qubits;
    /// [iteration][individual]: the N parents then the 2N children.
    std::vector<std::vector<double>> utilities;
    std::vector<double> best;
};

struct TrainingRunRecord {
    int M = 0;
    /// Motifs per parallel group (M / number of groups).
    double p = 0.0;
    int N_it = 0;
    /// Mean wall time per iteration, seconds.
    double T = 0.0;
    double total_seconds = 0.0;
    std::vector<std::vector<std::size_t>> groups;
    std::vector<MotifHistory> motifs;
};

struct TrainingResult {
    StrategyMap strategies;
    Partition partition;
    TrainingRunRecord record;
    /// Populations after the last iteration, keyed like strategies.
    std::map<MotifId, Population> populations;
};

/// Checkpoint written after every iteration; resuming continues with the next
/// iteration and reproduces an uninterrupted run exactly.
struct TrainingCheckpoint {
    std::size_t group = 0;
    int iteration = 0;  // iterations completed in `group`
    TrainingResult partial;
};

struct TrainingHooks {
    std::function<void(const TrainingCheckpoint&)> on_checkpoint;
    const TrainingCheckpoint* resume = nullptr;
};

/// Full motif training: partition, parallel grouping, GA per group. Returns
/// the best final individual per motif.
TrainingResult run_training(const ScheduledCircuit& target, const GaddConfig& cfg, const DeviceModel& device,
                            int n_intervals, const std::vector<std::vector<Qubit>>& registers,
                            const TrainingFactory& factory, const TrainingHooks& hooks = {});

/// Learned DD mode from a training result.
DdMode learned_mode(const TrainingResult& result, MotifLookup lookup = MotifLookup::WindowRegister,
                    PadMode pad = PadMode::Matched, std::uint64_t scramble_seed = 0);
/// The motif with the highest final utility (Unaware source).
MotifId best_motif(const TrainingResult& result);
StrategySet strategy_set(const TrainingResult& result);
/// Unaware needs set.best.
DdMode learned_mode(const StrategySet& set, MotifLookup lookup = MotifLookup::WindowRegister,
                    PadMode pad = PadMode::Matched, std::uint64_t scramble_seed = 0);

/// {"motifs": [{"interval", "register", "qubits", "utilities": [[...]], "best": [...]}]}
std::string utilities_to_json(const TrainingRunRecord& record, int indent = 2);
std::string checkpoint_to_json(const TrainingCheckpoint& cp, const GaddConfig& cfg, int indent = 2);
TrainingCheckpoint checkpoint_from_json(const std::string& text);

}  // namespace decoupler
