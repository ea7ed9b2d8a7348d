#include "coopstab/simulator.hpp"

#include "coopstab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coopstab {

namespace {

constexpr int P = static_cast<int>(QueueId::p);
constexpr int S = static_cast<int>(QueueId::s);
constexpr int PS = static_cast<int>(QueueId::ps);
constexpr int SD = static_cast<int>(QueueId::sd);
constexpr std::uint64_t kDriftBatches = 100;

void require_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

struct Fit {
    double slope = 0.0;
    double se = 0.0;
};

// Least-squares slope of y against x with its standard error.
Fit ols(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 3) return {};
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return {};
    Fit f;
    f.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - my - f.slope * (x[i] - mx);
        rss += r * r;
    }
    f.se = std::sqrt(rss / (n - 2.0) / sxx);
    return f;
}

RateEstimate summarize(const std::vector<double>& values) {
    RateEstimate e;
    if (values.empty()) return e;
    e.defined = true;
    const auto n = static_cast<double>(values.size());
    double m = 0.0;
    for (double v : values) m += v;
    m /= n;
    e.mean = m;
    if (values.size() < 2) {
        e.se = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    e.se = std::sqrt(ss / (n - 1.0) / n);
    return e;
}

Verdict queue_verdict(const ReplicaQueueStats& q, std::uint64_t horizon, const DriftSettings& d) {
    const double cap = std::max(100.0, d.cap_fraction * static_cast<double>(horizon));
    const bool significant = q.slope > d.sigmas * q.slope_se;
    const bool material = q.slope > d.floor_per_slot;
    if (static_cast<double>(q.max_length) >= cap || (significant && material)) {
        return Verdict::unstable;
    }
    if (!significant && !material) return Verdict::stable;
    return Verdict::indeterminate;
}

Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::unstable || b == Verdict::unstable) return Verdict::unstable;
    if (a == Verdict::stable && b == Verdict::stable) return Verdict::stable;
    return Verdict::indeterminate;
}

} // namespace

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

void SimConfig::validate() const {
    require_unit(lambda_p, "lambda_p");
    require_unit(lambda_s, "lambda_s");
    if (horizon <= warmup) throw ConfigError("horizon must exceed warmup");
    if (replicas < 1) throw ConfigError("replicas must be at least 1");
    const bool tdma = std::holds_alternative<TdmaPolicy>(policy);
    switch (variant) {
    case Variant::tdma:
        if (!tdma) throw ConfigError("variant tdma needs omega/alpha parameters");
        std::get<TdmaPolicy>(policy).validate();
        return;
    case Variant::ra:
    case Variant::dominant1:
    case Variant::dominant2:
    case Variant::strong_mpr:
    case Variant::priority:
    case Variant::nonpriority: {
        if (tdma) {
            throw ConfigError("variant " + std::string(to_string(variant)) +
                              " does not take omega/alpha parameters");
        }
        const RaPolicy& p = std::get<RaPolicy>(policy);
        p.validate();
        if ((variant == Variant::priority || variant == Variant::nonpriority) &&
            (p.admission.f_sd != 0.0 || p.alpha_sd != 0.0)) {
            throw ConfigError("variant " + std::string(to_string(variant)) +
                              " requires f_sd = 0 and alpha_sd = 0");
        }
        return;
    }
    case Variant::no_coop: break;
    }
    throw ConfigError("variant " + std::string(to_string(variant)) + " cannot be simulated");
}

Network::Network(const SimConfig& config, std::uint64_t stream) : config_(config) {
    config_.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    rng_.seed(seq);
}

SlotOutcome Network::step() {
    const LinkProbabilities& L = config_.link;
    SlotOutcome o;

    // Fixed draw count per slot keeps streams aligned across variants.
    const double u_arr_p = uniform();
    const double u_arr_s = uniform();
    const double u_pr = uniform();
    const double u_st = uniform();
    const double u_sr = uniform();
    const double u_fs = uniform();
    const double u_fsd = uniform();
    const double u_st_choice = uniform();
    const double u_sr_choice = uniform();
    const double u_ssd = uniform();
    const double u_spd = uniform();
    const double u_sdpd = uniform();

    auto& q = lengths_;
    o.primary_busy = q[P] > 0;

    // Primary transmission, or what it would have been.
    const Admission& adm = std::holds_alternative<TdmaPolicy>(config_.policy)
                               ? std::get<TdmaPolicy>(config_.policy).admission
                               : std::get<RaPolicy>(config_.policy).admission;
    o.pr_decodes_primary = u_pr < L.success(Link::p_pd);
    o.st_decodes_primary = u_st < L.success(Link::p_s);
    o.sr_decodes_primary = u_sr < L.success(Link::p_sd);
    const bool st_admits = !o.pr_decodes_primary && o.st_decodes_primary && u_fs < adm.f_s;
    const bool sr_admits = !o.pr_decodes_primary && o.sr_decodes_primary && u_fsd < adm.f_sd;
    bool to_ps = st_admits;
    bool to_sd = sr_admits;
    if (st_admits && sr_admits) {
        to_ps = adm.keep == KeepPriority::transmitter;
        to_sd = !to_ps;
    }
    o.opportunity[P] = 1;
    o.potential[P] = o.pr_decodes_primary || to_ps || to_sd;
    if (o.primary_busy) {
        o.departures[P] = o.potential[P];
        o.arrivals[PS] = to_ps;
        o.arrivals[SD] = to_sd;
    } else {
        const double s_sd = L.success(Link::s_sd);
        const double s_pd = L.success(Link::s_pd);
        const double sd_pd = L.success(Link::sd_pd);
        const bool strong = config_.variant == Variant::strong_mpr;
        const double s_pd_i =
            strong ? s_pd : L.interfered_success(InterferedLink::s_pd_under_sd);
        const double sd_pd_i =
            strong ? sd_pd : L.interfered_success(InterferedLink::sd_pd_under_s);

        bool pick_s = false, pick_ps = false, pick_sd = false;
        bool dummy_s = false, dummy_ps = false, dummy_sd = false;
        switch (config_.variant) {
        case Variant::tdma: {
            const TdmaPolicy& t = std::get<TdmaPolicy>(config_.policy);
            const bool st_slot = u_sr_choice < t.omega;
            pick_s = st_slot && u_st_choice < t.alpha;
            pick_ps = st_slot && !pick_s;
            pick_sd = !st_slot;
            break;
        }
        case Variant::priority:
            pick_ps = true;
            pick_s = q[PS] == 0;
            break;
        default: {
            const RaPolicy& p = std::get<RaPolicy>(config_.policy);
            pick_s = u_st_choice < p.alpha_s;
            pick_ps = !pick_s && u_st_choice < p.alpha_s + p.alpha_sp;
            pick_sd = u_sr_choice < p.alpha_sd;
            dummy_s = config_.variant == Variant::dominant1 || config_.variant == Variant::dominant2;
            dummy_sd = config_.variant == Variant::dominant1;
            dummy_ps = config_.variant == Variant::dominant2;
            break;
        }
        }

        const bool ps_real = pick_ps && q[PS] > 0;
        o.st_sends_relay = ps_real || (pick_ps && dummy_ps);
        // In the prioritized system Q_s only goes when Q_ps is empty.
        o.st_sends_own = !o.st_sends_relay && pick_s && (q[S] > 0 || dummy_s);
        o.sr_sends = pick_sd && (q[SD] > 0 || dummy_sd);
        const bool st_on = o.st_sends_own || o.st_sends_relay;

        o.opportunity[S] = pick_s;
        o.opportunity[PS] = pick_ps;
        o.opportunity[SD] = pick_sd;
        o.potential[S] = pick_s && !o.sr_sends && u_ssd < s_sd;
        o.potential[PS] = pick_ps && u_spd < (o.sr_sends ? s_pd_i : s_pd);
        o.potential[SD] = pick_sd && u_sdpd < (st_on ? sd_pd_i : sd_pd);

        o.departures[S] = o.st_sends_own && q[S] > 0 && o.potential[S];
        o.departures[PS] = ps_real && o.potential[PS];
        o.departures[SD] = o.sr_sends && q[SD] > 0 && o.potential[SD];
    }

    o.arrivals[P] = u_arr_p < config_.lambda_p;
    o.arrivals[S] = u_arr_s < config_.lambda_s;
    for (int i = 0; i < 4; ++i) {
        q[i] = evolve(QueueState{q[i]}, o.departures[i], o.arrivals[i]).length;
    }
    return o;
}

ReplicaStats run_replica(const SimConfig& config, int index) {
    Network net(config, static_cast<std::uint64_t>(index));
    ReplicaStats st;
    st.horizon = config.horizon;

    const std::uint64_t window_start = config.horizon / 5;
    const std::uint64_t batch =
        std::max<std::uint64_t>(1, (config.horizon - window_start) / kDriftBatches);
    std::vector<double> xs;
    std::array<std::vector<double>, 4> ys;
    std::array<double, 4> acc{};
    std::uint64_t in_batch = 0;
    double batch_x = 0.0;

    for (std::uint64_t t = 0; t < config.horizon; ++t) {
        std::array<std::uint64_t, 4> before{};
        for (int i = 0; i < 4; ++i) before[i] = net.length(static_cast<QueueId>(i));
        const SlotOutcome o = net.step();
        if (t >= config.warmup) {
            ++st.measured_slots;
            for (int i = 0; i < 4; ++i) {
                ReplicaQueueStats& s = st.queues[i];
                s.arrivals += o.arrivals[i];
                s.departures += o.departures[i];
                s.potential += o.potential[i];
                s.opportunities += o.opportunity[i];
                s.hol_slots += before[i] > 0;
            }
        }
        for (int i = 0; i < 4; ++i) {
            const std::uint64_t len = net.length(static_cast<QueueId>(i));
            st.queues[i].max_length = std::max(st.queues[i].max_length, len);
        }
        if (t >= window_start) {
            for (int i = 0; i < 4; ++i) acc[i] += static_cast<double>(net.length(static_cast<QueueId>(i)));
            batch_x += static_cast<double>(t);
            if (++in_batch == batch) {
                xs.push_back(batch_x / static_cast<double>(batch));
                for (int i = 0; i < 4; ++i) ys[i].push_back(acc[i] / static_cast<double>(batch));
                acc = {};
                batch_x = 0.0;
                in_batch = 0;
            }
        }
    }
    for (int i = 0; i < 4; ++i) {
        ReplicaQueueStats& s = st.queues[i];
        s.final_length = net.length(static_cast<QueueId>(i));
        const Fit f = ols(xs, ys[i]);
        s.slope = f.slope;
        s.slope_se = f.se;
    }
    return st;
}

SimReport estimate_rates(std::span<const ReplicaStats> replicas, const DriftSettings& drift) {
    if (replicas.empty()) throw InvalidParameter("no replicas to summarize");
    SimReport r;
    r.replicas = static_cast<int>(replicas.size());
    r.horizon = replicas.front().horizon;
    r.verdict = Verdict::stable;
    for (int i = 0; i < 4; ++i) {
        std::vector<double> arr, svc, hol, dr;
        double final_sum = 0.0;
        Verdict v = Verdict::stable;
        bool service_defined = true;
        for (const ReplicaStats& rep : replicas) {
            const ReplicaQueueStats& q = rep.queues[i];
            const double n = static_cast<double>(rep.measured_slots);
            arr.push_back(static_cast<double>(q.arrivals) / n);
            if (q.opportunities == 0) service_defined = false;
            svc.push_back(static_cast<double>(q.potential) / n);
            if (q.hol_slots > 0) {
                hol.push_back(static_cast<double>(q.departures) / static_cast<double>(q.hol_slots));
            }
            dr.push_back(q.slope * 1e4);
            final_sum += static_cast<double>(q.final_length);
            v = combine(v, queue_verdict(q, rep.horizon, drift));
        }
        QueueReport& out = r.queues[i];
        out.arrival = summarize(arr);
        out.service = service_defined ? summarize(svc) : RateEstimate{};
        out.hol_service = hol.size() == replicas.size() ? summarize(hol) : RateEstimate{};
        out.drift = summarize(dr);
        out.final_length = final_sum / static_cast<double>(replicas.size());
        out.verdict = v;
        r.verdict = combine(r.verdict, v);
    }
    return r;
}

SimReport run(const SimConfig& config, const DriftSettings& drift) {
    config.validate();
    std::vector<ReplicaStats> reps;
    reps.reserve(static_cast<std::size_t>(config.replicas));
    for (int k = 0; k < config.replicas; ++k) reps.push_back(run_replica(config, k));
    SimReport r = estimate_rates(reps, drift);
    r.variant = config.variant;
    r.warmup = config.warmup;
    return r;
}

ProbeResult stability_probe(const LinkProbabilities& link, Variant variant, double lambda_p,
                            double lambda_s, const PolicyVariant& policy,
                            const ProbeSettings& settings) {
    SimConfig cfg{variant, link, lambda_p, lambda_s, policy, settings.horizon, settings.warmup,
                  settings.replicas, settings.seed};
    ProbeResult out;
    out.report = run(cfg, settings.drift);
    out.verdict = out.report.verdict;
    return out;
}

} // namespace coopstab
