#include "doctest.h"

#include "fixtures.hpp"

#include "coopstab/error.hpp"
#include "coopstab/ra_analysis.hpp"
#include "coopstab/simulator.hpp"

#include <cmath>

using namespace coopstab;

namespace {
SimConfig base() {
    SimConfig c{Variant::dominant1, fixtures::weak_table()};
    c.lambda_p = 0.3;
    c.lambda_s = 0.1;
    c.policy = RaPolicy{0.5, 0.3, 0.5, Admission{1, 1, KeepPriority::receiver}};
    c.horizon = 200'000;
    c.warmup = 20'000;
    c.replicas = 2;
    return c;
}
} // namespace

TEST_CASE("configuration checks") {
    SimConfig c = base();
    c.variant = Variant::tdma;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = base();
    c.variant = Variant::priority;
    CHECK_THROWS_AS(c.validate(), ConfigError); // f_sd must be 0
    c = base();
    c.variant = Variant::no_coop;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_NOTHROW(base().validate());
}

TEST_CASE("slot-level bookkeeping") {
    Network n(base(), 0);
    std::array<std::uint64_t, 4> len{};
    for (int t = 0; t < 20'000; ++t) {
        const SlotOutcome o = n.step();
        for (int q = 0; q < 4; ++q) {
            CHECK(o.departures[q] <= 1);
            if (o.departures[q]) CHECK(len[q] > 0);
            if (o.departures[q]) CHECK(o.potential[q] == 1);
            len[q] = len[q] - o.departures[q] + o.arrivals[q];
        }
        // Relays only store what they decoded, and only one keeps it.
        CHECK(o.arrivals[2] + o.arrivals[3] <= 1);
        if (o.arrivals[2]) CHECK(o.st_decodes_primary);
        if (o.arrivals[3]) CHECK(o.sr_decodes_primary);
        if (o.arrivals[2] || o.arrivals[3]) CHECK_FALSE(o.pr_decodes_primary);
        if (o.primary_busy) CHECK_FALSE((o.st_sends_own || o.st_sends_relay || o.sr_sends));
    }
    for (QueueId q : kAllQueues) CHECK(n.length(q) == len[static_cast<int>(q)]);
}

TEST_CASE("replicas are reproducible") {
    const ReplicaStats a = run_replica(base(), 1);
    const ReplicaStats b = run_replica(base(), 1);
    const ReplicaStats c = run_replica(base(), 2);
    for (int q = 0; q < 4; ++q) {
        CHECK(a.queues[q].arrivals == b.queues[q].arrivals);
        CHECK(a.queues[q].departures == b.queues[q].departures);
    }
    CHECK(a.queues[0].arrivals != c.queues[0].arrivals);
}

TEST_CASE("primary service rate with full admission") {
    SimConfig c = base();
    c.horizon = 1'000'000;
    c.warmup = 100'000;
    c.replicas = 4;
    const SimReport r = run(c);
    const RateEstimate& mu = r[QueueId::p].service;
    CHECK(std::abs(mu.mean - 0.91) <= 3 * mu.se);
    const RateEstimate& lam = r[QueueId::p].arrival;
    CHECK(std::abs(lam.mean - 0.3) <= 3 * lam.se);
}

TEST_CASE("stability probe") {
    const LinkProbabilities l = fixtures::mixed_table();
    const PolicyVariant prio = RaPolicy{0, 0, 0, Admission{0, 0, KeepPriority::receiver}};
    // No-relay boundary at lambda_p = 0.2 is 0.6*0.85 = 0.51.
    CHECK(stability_probe(l, Variant::priority, 0.2, 0.3, prio).verdict == Verdict::stable);
    CHECK(stability_probe(l, Variant::priority, 0.2, 0.7, prio).verdict == Verdict::unstable);
    CHECK(stability_probe(l, Variant::priority, 0.6, 0.1, prio).verdict == Verdict::unstable);
}

TEST_CASE("standard error needs two replicas") {
    SimConfig c = base();
    c.replicas = 1;
    const SimReport r = run(c);
    CHECK(std::isnan(r[QueueId::p].service.se));
    CHECK(r[QueueId::p].service.defined);
}
