/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "zrp/dynamics.hpp"

/* Continuous-time Monte Carlo sampler for the ring process generated by
 * H = a H_+ + b H_-. Event channels are the triples (site, leaving multiset,
 * direction); channel rates depend only on the local occupancy and are
 * cached per occupancy. Accumulates the time-weighted per-site occupancy law
 * with batch-means standard errors, optionally the joint state law and the
 * second-class site means conditioned on a frozen first-class layout.
 * Deterministic for a fixed seed. */

namespace zrp::gillespie {

using dynamics::Occ;
using dynamics::RingState;

struct Channel {
    Occ gamma;
    double rate_plus;   /* w_+(gamma|occ), before the mixture weight a */
    double rate_minus;  /* w_-(gamma|occ), before the mixture weight b */
};

struct SiteLaw {
    std::vector<double> prob;     /* occupancy law, flattened per-class */
    std::vector<double> stderr_;
};

struct Options {
    std::uint64_t max_events = 1000000;
    std::uint64_t seed = 1;
    int batches = 20;
    bool track_joint = false;
    /* when set (length L, first-class occupancy per site): also average the
     * second-class occupation over the stretches matching this layout */
    std::optional<std::vector<int>> condition_first_class;
};

struct SimResult {
    int L = 0;
    Occ caps;                       /* per-class maxima = sector totals */
    std::vector<SiteLaw> site;      /* per-site occupancy law */
    double total_time = 0.0;
    std::uint64_t events = 0;

    std::map<RingState, double> joint;  /* time per state (track_joint) */

    double cond_time = 0.0;                 /* time in the conditioned slice */
    std::vector<double> cond_mean;          /* per-site second-class mean */
    std::vector<double> cond_mean_stderr;

    int flat(const Occ& occ) const {
        int idx = 0;
        for (size_t a = 0; a < occ.size(); ++a) idx = idx * (caps[a] + 1) + occ[a];
        return idx;
    }
};

namespace detail {

/* uniform in (0,1), identical across platforms for a fixed seed */
inline double uniform01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

struct RateCache {
    double q, mu;
    std::map<Occ, std::vector<Channel>> channels;

    const std::vector<Channel>& get(const Occ& occ) {
        auto it = channels.find(occ);
        if (it != channels.end()) return it->second;
        std::vector<Channel> list;
        for (const Occ& g : dynamics::leaving_multisets(occ)) {
            double wp = dynamics::w_plus(g, occ, q, mu);
            double wm = dynamics::w_minus(g, occ, q, mu);
            if (wp > 1e-15 || wm > 1e-15) list.push_back({g, wp, wm});
        }
        return channels.emplace(occ, std::move(list)).first->second;
    }
};

}  // namespace detail

inline SimResult simulate(int L, const Occ& totals, double q, double mu, double a, double b,
                          const Options& opt) {
    if (L < 1) throw std::invalid_argument("simulate: L must be >= 1");
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("simulate: mixture weights must be >= 0");
    if (a == 0.0 && b == 0.0) throw std::invalid_argument("simulate: no dynamics selected");
    size_t n = totals.size();
    int batches = opt.batches;
    if (batches < 2) throw std::invalid_argument("simulate: need at least two batches");
    if (opt.condition_first_class && static_cast<int>(opt.condition_first_class->size()) != L)
        throw std::invalid_argument("simulate: conditional layout must have one entry per site");

    SimResult res;
    res.L = L;
    res.caps = totals;
    int cells = 1;
    for (int t : totals) cells *= t + 1;

    RingState state(static_cast<size_t>(L), Occ(n, 0));
    state[0] = totals;

    detail::RateCache cache{q, mu, {}};
    std::mt19937_64 rng(opt.seed);

    std::vector<std::vector<std::vector<double>>> hist(
        static_cast<size_t>(batches),
        std::vector<std::vector<double>>(static_cast<size_t>(L),
                                         std::vector<double>(static_cast<size_t>(cells), 0.0)));
    std::vector<double> batch_time(static_cast<size_t>(batches), 0.0);
    std::vector<double> cond_batch_time(static_cast<size_t>(batches), 0.0);
    std::vector<std::vector<double>> cond_occ(
        static_cast<size_t>(batches), std::vector<double>(static_cast<size_t>(L), 0.0));

    std::vector<double> site_rate(static_cast<size_t>(L), 0.0);
    auto recompute_site = [&](int i) {
        double r = 0.0;
        for (const Channel& ch : cache.get(state[static_cast<size_t>(i)]))
            r += a * ch.rate_plus + b * ch.rate_minus;
        site_rate[static_cast<size_t>(i)] = r;
    };
    for (int i = 0; i < L; ++i) recompute_site(i);

    auto matches_condition = [&]() {
        if (!opt.condition_first_class) return false;
        for (int i = 0; i < L; ++i)
            if (state[static_cast<size_t>(i)][0] != (*opt.condition_first_class)[static_cast<size_t>(i)])
                return false;
        return true;
    };

    std::uint64_t ev = 0;
    std::uint64_t per_batch = opt.max_events / static_cast<std::uint64_t>(batches) + 1;
    while (ev < opt.max_events) {
        double rtot = 0.0;
        for (double r : site_rate) rtot += r;
        if (rtot <= 0.0) throw std::runtime_error("simulate: absorbing state reached");

        double dt = -std::log(detail::uniform01(rng)) / rtot;
        int bidx = static_cast<int>(ev / per_batch);
        if (bidx >= batches) bidx = batches - 1;
        batch_time[static_cast<size_t>(bidx)] += dt;
        for (int i = 0; i < L; ++i)
            hist[static_cast<size_t>(bidx)][static_cast<size_t>(i)]
                [static_cast<size_t>(res.flat(state[static_cast<size_t>(i)]))] += dt;
        if (opt.track_joint) res.joint[state] += dt;
        if (matches_condition()) {
            cond_batch_time[static_cast<size_t>(bidx)] += dt;
            for (int i = 0; i < L; ++i)
                cond_occ[static_cast<size_t>(bidx)][static_cast<size_t>(i)] +=
                    dt * state[static_cast<size_t>(i)].back();
        }

        /* pick the event */
        double target = detail::uniform01(rng) * rtot;
        int site = 0;
        while (site < L - 1 && target >= site_rate[static_cast<size_t>(site)]) {
            target -= site_rate[static_cast<size_t>(site)];
            ++site;
        }
        const std::vector<Channel>& list = cache.get(state[static_cast<size_t>(site)]);
        const Channel* chosen = nullptr;
        bool right = true;
        for (const Channel& ch : list) {
            double rp = a * ch.rate_plus;
            if (target < rp) {
                chosen = &ch;
                right = true;
                break;
            }
            target -= rp;
            double rm = b * ch.rate_minus;
            if (target < rm) {
                chosen = &ch;
                right = false;
                break;
            }
            target -= rm;
        }
        if (!chosen) {  /* roundoff spill: take the last channel */
            chosen = &list.back();
            right = b == 0.0;
        }
        int dest = right ? (site + 1) % L : (site + L - 1) % L;
        for (size_t c = 0; c < n; ++c) {
            state[static_cast<size_t>(site)][c] -= chosen->gamma[c];
            state[static_cast<size_t>(dest)][c] += chosen->gamma[c];
        }
        recompute_site(site);
        recompute_site(dest);
        ++ev;
    }
    res.events = ev;

    /* combine batches */
    auto batch_stats = [&](auto value_of, double& mean_out, double& err_out) {
        double mean = 0.0;
        std::vector<double> est(static_cast<size_t>(batches));
        for (int bi = 0; bi < batches; ++bi) {
            est[static_cast<size_t>(bi)] = value_of(bi);
            mean += est[static_cast<size_t>(bi)];
        }
        mean /= batches;
        double var = 0.0;
        for (int bi = 0; bi < batches; ++bi) {
            double d = est[static_cast<size_t>(bi)] - mean;
            var += d * d;
        }
        var /= (batches - 1);
        mean_out = mean;
        err_out = std::sqrt(var / batches);
    };

    res.site.assign(static_cast<size_t>(L),
                    SiteLaw{std::vector<double>(static_cast<size_t>(cells), 0.0),
                            std::vector<double>(static_cast<size_t>(cells), 0.0)});
    for (double t : batch_time) res.total_time += t;
    for (int i = 0; i < L; ++i)
        for (int c = 0; c < cells; ++c)
            batch_stats(
                [&](int bi) {
                    return hist[static_cast<size_t>(bi)][static_cast<size_t>(i)][static_cast<size_t>(c)] /
                           batch_time[static_cast<size_t>(bi)];
                },
                res.site[static_cast<size_t>(i)].prob[static_cast<size_t>(c)],
                res.site[static_cast<size_t>(i)].stderr_[static_cast<size_t>(c)]);

    if (opt.condition_first_class) {
        for (double t : cond_batch_time) res.cond_time += t;
        res.cond_mean.assign(static_cast<size_t>(L), 0.0);
        res.cond_mean_stderr.assign(static_cast<size_t>(L), 0.0);
        for (int i = 0; i < L; ++i)
            batch_stats(
                [&](int bi) {
                    double t = cond_batch_time[static_cast<size_t>(bi)];
                    return t > 0.0 ? cond_occ[static_cast<size_t>(bi)][static_cast<size_t>(i)] / t : 0.0;
                },
                res.cond_mean[static_cast<size_t>(i)], res.cond_mean_stderr[static_cast<size_t>(i)]);
    }
    return res;
}

inline SimResult simulate(int L, const Occ& totals, double q, double mu, double a, double b,
                          std::uint64_t max_events, std::uint64_t seed, int batches = 20) {
    Options opt;
    opt.max_events = max_events;
    opt.seed = seed;
    opt.batches = batches;
    return simulate(L, totals, q, mu, a, b, opt);
}

}  // namespace zrp::gillespie
