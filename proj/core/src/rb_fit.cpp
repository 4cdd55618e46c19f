#include "decoupler/rb_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "decoupler/error.hpp"
#include "decoupler/rng.hpp"

namespace decoupler {

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

bool solve3(Mat3 a, Vec3 b, Vec3& x) {
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) < 1e-300) return false;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (int r = c + 1; r < 3; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return true;
}

struct Problem {
    const std::vector<double>& l;
    const std::vector<double>& p;

    double cost(const Vec3& q) const {
        double c = 0.0;
        for (std::size_t i = 0; i < l.size(); ++i) {
            const double r = q[0] * std::pow(q[1], l[i]) + q[2] - p[i];
            c += r * r;
        }
        return c;
    }

    void normal(const Vec3& q, Mat3& jtj, Vec3& jtr) const {
        jtj = {};
        jtr = {};
        for (std::size_t i = 0; i < l.size(); ++i) {
            const double pw = std::pow(q[1], l[i]);
            const double d_alpha = l[i] == 0.0 ? 0.0 : q[0] * l[i] * std::pow(q[1], l[i] - 1.0);
            const Vec3 j{pw, d_alpha, 1.0};
            const double r = q[0] * pw + q[2] - p[i];
            for (int a = 0; a < 3; ++a) {
                jtr[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
    }
};

}  // namespace

RbFit fit_rb_decay(const std::vector<double>& lengths, const std::vector<double>& survival, const FitOptions& opt) {
    if (lengths.size() != survival.size()) throw Error(Errc::InvalidArgument, "length and survival sizes differ");
    if (std::set<double>(lengths.begin(), lengths.end()).size() < 3) {
        throw Error(Errc::InvalidArgument, "RB fit needs at least three distinct lengths");
    }
    const auto lo = static_cast<std::size_t>(std::min_element(lengths.begin(), lengths.end()) - lengths.begin());
    const auto hi = static_cast<std::size_t>(std::max_element(lengths.begin(), lengths.end()) - lengths.begin());
    const Vec3 lower{0.0, opt.alpha_min, 0.0};
    const Vec3 upper{1.0, 1.0, 1.0};
    auto clamp = [&](Vec3 q) {
        for (int i = 0; i < 3; ++i) q[i] = std::clamp(q[i], lower[i], upper[i]);
        return q;
    };

    Vec3 q{survival[lo] - survival[hi], 0.9, survival[hi]};
    {
        // Two-point log slope between the two shortest lengths.
        std::vector<std::size_t> order(lengths.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return lengths[a] < lengths[b]; });
        std::size_t second = order.back();
        for (std::size_t i : order) {
            if (lengths[i] > lengths[lo]) {
                second = i;
                break;
            }
        }
        const double a = survival[lo] - q[2];
        const double b = survival[second] - q[2];
        if (a > 0.0 && b > 0.0 && lengths[second] > lengths[lo]) q[1] = std::pow(b / a, 1.0 / (lengths[second] - lengths[lo]));
    }
    q = clamp(q);

    const Problem prob{lengths, survival};
    double cost = prob.cost(q);
    double lambda = 1e-3;
    RbFit fit;
    for (int it = 0; it < opt.max_iterations; ++it) {
        fit.iterations = it + 1;
        Mat3 jtj;
        Vec3 jtr;
        prob.normal(q, jtj, jtr);
        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            Mat3 a = jtj;
            for (int d = 0; d < 3; ++d) a[d][d] += lambda * std::max(jtj[d][d], 1e-12);
            Vec3 step{};
            if (!solve3(a, {-jtr[0], -jtr[1], -jtr[2]}, step)) {
                lambda *= 10.0;
                continue;
            }
            const Vec3 cand = clamp({q[0] + step[0], q[1] + step[1], q[2] + step[2]});
            const double c = prob.cost(cand);
            if (c < cost) {
                const double change = cost - c;
                q = cand;
                cost = c;
                lambda = std::max(lambda / 10.0, 1e-12);
                improved = true;
                if (change < opt.tolerance * std::max(cost, 1e-30) || change < 1e-30) it = opt.max_iterations;
            } else {
                lambda *= 10.0;
            }
        }
        if (!improved) break;
    }
    for (double v : q) {
        if (!std::isfinite(v)) throw Error(Errc::FitDiverged, "RB fit produced non-finite parameters");
    }
    if (!std::isfinite(cost)) throw Error(Errc::FitDiverged, "RB fit residual is not finite");

    fit.A = q[0];
    fit.alpha = q[1];
    fit.B = q[2];
    fit.residual = std::sqrt(cost / static_cast<double>(lengths.size()));
    fit.alpha_at_bound = q[1] >= 1.0 - 1e-12 || q[1] <= opt.alpha_min * (1.0 + 1e-9) || q[0] < 1e-9;
    if (q[0] < 1e-9) fit.alpha = 1.0;
    fit.epl = (1.0 - fit.alpha) / 2.0;

    Mat3 jtj;
    Vec3 jtr;
    prob.normal(q, jtj, jtr);
    const double dof = std::max<double>(1.0, static_cast<double>(lengths.size()) - 3.0);
    const double s2 = cost / dof;
    for (int d = 0; d < 3; ++d) {
        Vec3 e{};
        e[d] = 1.0;
        Vec3 col{};
        fit.covariance[d] = solve3(jtj, e, col) ? s2 * col[d] : std::numeric_limits<double>::infinity();
    }
    return fit;
}

RbFit fit_rb_means(const RbRawData& raw) {
    std::vector<double> l, p;
    for (const auto& [len, values] : raw) {
        if (values.empty()) continue;
        double s = 0.0;
        for (double v : values) s += v;
        l.push_back(len);
        p.push_back(s / static_cast<double>(values.size()));
    }
    return fit_rb_decay(l, p);
}

BootstrapResult bootstrap_epl(const RbRawData& raw, int n_resamples, int resample_size, std::uint64_t seed) {
    if (n_resamples < 1) throw Error(Errc::InvalidArgument, "bootstrap needs at least one resample");
    BootstrapResult out;
    Rng rng = substream(seed, "rb.bootstrap");
    for (int r = 0; r < n_resamples; ++r) {
        RbRawData sample;
        for (const auto& [len, values] : raw) {
            if (values.empty()) continue;
            const std::size_t k = resample_size > 0 ? static_cast<std::size_t>(resample_size) : values.size();
            auto& dst = sample[len];
            for (std::size_t i = 0; i < k; ++i) dst.push_back(values[rng.below(values.size())]);
        }
        out.samples.push_back(fit_rb_means(sample).epl);
    }
    double mean = 0.0;
    for (double e : out.samples) mean += e;
    mean /= static_cast<double>(out.samples.size());
    double var = 0.0;
    for (double e : out.samples) var += (e - mean) * (e - mean);
    out.epl_mean = mean;
    out.epl_sigma = out.samples.size() > 1 ? std::sqrt(var / static_cast<double>(out.samples.size() - 1)) : 0.0;
    return out;
}

}  // namespace decoupler
