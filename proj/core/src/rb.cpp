#include "decoupler/rb.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "decoupler/clifford.hpp"
#include "decoupler/error.hpp"
#include "decoupler/parallel.hpp"
#include "decoupler/simulator.hpp"
#include "json_util.hpp"

namespace decoupler {

const char* to_string(RbKind kind) noexcept {
    switch (kind) {
        case RbKind::McmRb: return "mcm-rb";
        case RbKind::DcRbZ: return "dc-rb-z";
        case RbKind::DcRbI: return "dc-rb-i";
    }
    return "?";
}

std::optional<RbKind> parse_rb_kind(const std::string& name) {
    for (RbKind k : {RbKind::McmRb, RbKind::DcRbZ, RbKind::DcRbI}) {
        if (name == to_string(k)) return k;
    }
    return std::nullopt;
}

namespace {

std::vector<Qubit> concat(const std::vector<Qubit>& a, const std::vector<Qubit>& b) {
    auto out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

void check_roles(int n_qubits, const std::vector<Qubit>& measured, const std::vector<Qubit>& unitaries) {
    std::vector<bool> used(static_cast<std::size_t>(n_qubits), false);
    for (Qubit q : concat(measured, unitaries)) {
        if (q < 0 || q >= n_qubits) throw Error(Errc::InvalidArgument, "RB qubit " + std::to_string(q) + " out of range");
        if (used[static_cast<std::size_t>(q)]) {
            throw Error(Errc::InvalidArgument, "RB qubit " + std::to_string(q) + " has two roles");
        }
        used[static_cast<std::size_t>(q)] = true;
    }
}

}  // namespace

RbCircuit build_mcm_rb(int n_qubits, const std::vector<Qubit>& measured, const std::vector<Qubit>& unitaries, int l,
                       Rng& rng, Nanos tau_ff) {
    if (unitaries.empty()) throw Error(Errc::InvalidArgument, "MCM-RB needs a unitary qubit");
    if (l < 0) throw Error(Errc::InvalidArgument, "negative RB length");
    check_roles(n_qubits, measured, unitaries);
    const auto& group = CliffordGroup::get();
    const auto all = concat(unitaries, measured);
    const int n_mcm = l > 0 ? (l - 1) * static_cast<int>(measured.size()) : 0;

    RbCircuit rb;
    rb.circuit = DynamicCircuit(n_qubits, static_cast<int>(all.size()) + n_mcm);
    auto& c = rb.circuit;
    std::vector<int> product(unitaries.size(), 0);
    Clbit next = static_cast<Clbit>(all.size());
    for (int layer = 0; layer < l; ++layer) {
        for (std::size_t i = 0; i < unitaries.size(); ++i) {
            const int g = group.uniform(rng);
            group.append(c, unitaries[i], g);
            product[i] = group.compose(product[i], g);
        }
        if (layer + 1 == l) break;
        c.barrier(all);
        for (Qubit m : measured) {
            c.measure(m, next++);
            if (tau_ff > 0) c.delay(m, tau_ff);
        }
        c.barrier(all);
    }
    for (std::size_t i = 0; i < unitaries.size(); ++i) group.append(c, unitaries[i], group.inverse(product[i]));
    c.barrier(all);
    for (std::size_t i = 0; i < all.size(); ++i) {
        c.measure(all[i], static_cast<Clbit>(i));
        rb.readout[all[i]] = static_cast<Clbit>(i);
    }
    return rb;
}

void append_dc_rb_block(DynamicCircuit& c, RbKind kind, Qubit measured, const std::vector<Qubit>& unitaries, Clbit clbit) {
    if (kind == RbKind::McmRb) throw Error(Errc::InvalidArgument, "DC-RB block needs Z_c1 or I_c1");
    c.x(measured);
    c.measure(measured, clbit);
    for (Qubit u : unitaries) {
        c.c_if(kind == RbKind::DcRbZ ? make_gate(GateKind::Z, u) : make_rz(u, 0.0), clbit);
    }
    c.x(measured);
}

RbCircuit build_dc_rb(int n_qubits, RbKind kind, Qubit measured, const std::vector<Qubit>& unitaries, int l, Rng& rng) {
    if (unitaries.empty()) throw Error(Errc::InvalidArgument, "DC-RB needs a unitary qubit");
    if (l < 0) throw Error(Errc::InvalidArgument, "negative RB length");
    check_roles(n_qubits, {measured}, unitaries);
    const auto& group = CliffordGroup::get();
    const int z = group.find(gate_matrix(make_gate(GateKind::Z, 0)));
    const auto all = concat(unitaries, {measured});

    RbCircuit rb;
    rb.circuit = DynamicCircuit(n_qubits, static_cast<int>(unitaries.size()) + l);
    auto& c = rb.circuit;
    std::vector<int> product(unitaries.size(), 0);
    for (int layer = 0; layer < l; ++layer) {
        for (std::size_t i = 0; i < unitaries.size(); ++i) {
            const int g = group.uniform(rng);
            group.append(c, unitaries[i], g);
            product[i] = group.compose(product[i], g);
            if (kind == RbKind::DcRbZ) product[i] = group.compose(product[i], z);
        }
        c.barrier(all);
        append_dc_rb_block(c, kind, measured, unitaries, static_cast<Clbit>(unitaries.size()) + layer);
        c.barrier(all);
    }
    for (std::size_t i = 0; i < unitaries.size(); ++i) group.append(c, unitaries[i], group.inverse(product[i]));
    c.barrier(unitaries);
    for (std::size_t i = 0; i < unitaries.size(); ++i) {
        c.measure(unitaries[i], static_cast<Clbit>(i));
        rb.readout[unitaries[i]] = static_cast<Clbit>(i);
    }
    return rb;
}

RbSpec RbSpec::mcm_rb_defaults() {
    RbSpec s;
    s.kind = RbKind::McmRb;
    s.lengths = {2, 4, 6, 8, 10, 12};
    s.n_randomizations = 60;
    s.shots = 300;
    s.bootstrap_size = 30;
    return s;
}

RbSpec RbSpec::dc_rb_defaults(RbKind kind) {
    RbSpec s;
    s.kind = kind;
    s.lengths = {0, 1, 2, 3, 4, 5, 10, 15, 20, 35};
    s.n_randomizations = 7;
    s.shots = 300;
    return s;
}

void validate(const RbSpec& spec) {
    if (spec.lengths.size() < 2) throw Error(Errc::InvalidArgument, "RB needs at least two lengths");
    for (std::size_t i = 1; i < spec.lengths.size(); ++i) {
        if (spec.lengths[i] <= spec.lengths[i - 1]) throw Error(Errc::InvalidArgument, "RB lengths must increase");
    }
    if (spec.lengths.front() < 0) throw Error(Errc::InvalidArgument, "negative RB length");
    if (spec.n_randomizations < 1) throw Error(Errc::InvalidArgument, "need at least one randomization");
    if (spec.shots == 0) throw Error(Errc::ShotCountZero, "RB needs at least one shot");
    if (spec.unitaries.empty()) throw Error(Errc::InvalidArgument, "RB needs unitary qubits");
    if (spec.kind != RbKind::McmRb && spec.measured.size() != 1) {
        throw Error(Errc::InvalidArgument, "DC-RB needs exactly one measured qubit");
    }
}

const RbQubitResult& RbModeResult::qubit(Qubit q) const {
    for (const auto& r : qubits) {
        if (r.qubit == q) return r;
    }
    throw Error(Errc::InvalidArgument, "no RB result for qubit " + std::to_string(q));
}

double RbModeResult::mean_unitary_epl() const {
    double s = 0.0;
    int n = 0;
    for (const auto& r : qubits) {
        if (r.unitary && r.fit) {
            s += r.fit->epl;
            ++n;
        }
    }
    return n ? s / n : std::nan("");
}

std::vector<RbModeResult> run_rb(const RbSpec& spec, const DeviceModel& device, const std::vector<DdMode>& modes,
                                 std::uint64_t seed, const RbRunOptions& options) {
    validate(spec);
    const int n = device.n_qubits;
    struct Job {
        int l;
        int r;
        ScheduledCircuit sched;
        std::map<Qubit, Clbit> readout;
    };
    std::vector<Job> jobs;
    for (int l : spec.lengths) {
        for (int r = 0; r < spec.n_randomizations; ++r) {
            Rng rng = substream(seed, "rb.circuit", {static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(r)});
            const RbCircuit rb = spec.kind == RbKind::McmRb
                                     ? build_mcm_rb(n, spec.measured, spec.unitaries, l, rng, device.timing.tau_ff)
                                     : build_dc_rb(n, spec.kind, spec.measured.front(), spec.unitaries, l, rng);
            jobs.push_back({l, r, build_schedule(rb.circuit, device.timing), rb.readout});
        }
    }

    std::vector<Qubit> tracked = spec.unitaries;
    if (spec.kind == RbKind::McmRb) tracked.insert(tracked.end(), spec.measured.begin(), spec.measured.end());

    // survival[mode][job][tracked index]
    std::vector<std::vector<std::vector<double>>> survival(
        modes.size(), std::vector<std::vector<double>>(jobs.size(), std::vector<double>(tracked.size())));
    SimOptions sim;
    sim.noiseless = options.noiseless;
    parallel_for(modes.size() * jobs.size(), options.threads, [&](std::size_t idx) {
        const std::size_t mi = idx / jobs.size();
        const std::size_t ji = idx % jobs.size();
        const auto& job = jobs[ji];
        const auto pulses = options.noiseless ? std::vector<PulseEvent>{} : dd_pulses(job.sched, device, modes[mi]);
        const auto dist = run_shots(job.sched, pulses, device, spec.shots,
                                    derive_seed(seed, "rb.shots", {static_cast<std::uint64_t>(job.l),
                                                                   static_cast<std::uint64_t>(job.r)}),
                                    sim);
        for (std::size_t t = 0; t < tracked.size(); ++t) survival[mi][ji][t] = dist.prob_zero(job.readout.at(tracked[t]));
    });

    std::vector<RbModeResult> out;
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        RbModeResult res;
        res.mode = modes[mi].name();
        for (std::size_t t = 0; t < tracked.size(); ++t) {
            RbQubitResult q;
            q.qubit = tracked[t];
            q.unitary = t < spec.unitaries.size();
            for (std::size_t ji = 0; ji < jobs.size(); ++ji) q.raw[jobs[ji].l].push_back(survival[mi][ji][t]);
            for (const auto& [l, values] : q.raw) {
                const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
                double var = 0.0;
                for (double v : values) var += (v - mean) * (v - mean);
                const double sd = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
                q.table.push_back({l, mean, sd / std::sqrt(static_cast<double>(values.size()))});
            }
            if (options.fit && q.unitary && spec.lengths.size() >= 3) {
                try {
                    q.fit = fit_rb_means(q.raw);
                    q.bootstrap = bootstrap_epl(q.raw, spec.bootstrap_resamples, spec.bootstrap_size,
                                                derive_seed(seed, "rb.bootstrap", {static_cast<std::uint64_t>(q.qubit)}));
                } catch (const Error& e) {
                    if (e.code() != Errc::FitDiverged) throw;
                }
            }
            res.qubits.push_back(std::move(q));
        }
        out.push_back(std::move(res));
    }
    return out;
}

std::string rb_results_csv(const RbSpec& spec, const std::vector<RbModeResult>& results) {
    std::ostringstream os;
    os.precision(10);
    os << "experiment,qubit,dd_mode,l,randomizations,mean_p0,stderr\n";
    for (const auto& res : results) {
        for (const auto& q : res.qubits) {
            for (const auto& row : q.table) {
                const auto it = q.raw.find(row.l);
                const std::size_t n = it == q.raw.end() ? 0 : it->second.size();
                os << to_string(spec.kind) << ',' << q.qubit << ',' << res.mode << ',' << row.l << ',' << n << ','
                   << row.mean_p0 << ',' << row.std_error << '\n';
            }
        }
    }
    return os.str();
}

std::string rb_fits_json(const std::vector<RbModeResult>& results, int indent) {
    detail::json j = detail::json::object();
    for (const auto& res : results) {
        detail::json modes = detail::json::object();
        for (const auto& q : res.qubits) {
            if (!q.fit) continue;
            modes[std::to_string(q.qubit)] = {{"A", q.fit->A},
                                              {"alpha", q.fit->alpha},
                                              {"B", q.fit->B},
                                              {"epl", q.fit->epl},
                                              {"epl_sigma", q.bootstrap ? q.bootstrap->epl_sigma : 0.0},
                                              {"alpha_at_bound", q.fit->alpha_at_bound}};
        }
        j[res.mode] = modes;
    }
    return j.dump(indent);
}

}  // namespace decoupler
