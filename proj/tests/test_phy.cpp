#include "doctest.h"

#include "coopstab/error.hpp"
#include "coopstab/phy.hpp"

#include <cmath>
#include <random>

using namespace coopstab;

TEST_CASE("decoding threshold") {
    CHECK(decoding_threshold(1.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(decoding_threshold(0.0, 0.9, 2.0) == 0.0);
    CHECK(decoding_threshold(2.0 * 0.9 * 3.0, 0.9, 3.0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(decoding_threshold(1.0, 0.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(decoding_threshold(1.0, 1.0, -1.0), InvalidParameter);
}

TEST_CASE("transmission time") {
    CHECK(tx_time(Node::p, 1.0, 0.1) == 1.0);
    CHECK(tx_time(Node::s, 1.0, 0.1) == doctest::Approx(0.9));
    CHECK(tx_time(Node::sd, 1.0, 0.1) == doctest::Approx(0.9));
    CHECK(tx_time(Node::s, 1.0, 0.0) == 1.0);
    CHECK_THROWS_AS(tx_time(Node::s, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(tx_time(Node::pd, 1.0, 0.1), InvalidParameter);
}

TEST_CASE("outage probability") {
    CHECK(outage_prob(1.0, 1.0, 1.0, 0.0) == 0.0);
    CHECK(outage_prob(1.0, 1.0, 1.0, std::log(2.0)) == doctest::Approx(0.5));
    CHECK(outage_prob(2.0, 1.0, 0.5, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK_THROWS_AS(outage_prob(0.0, 1.0, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(outage_prob(1.0, 1.0, -1.0, 1.0), InvalidParameter);

    // Exponential power gains thresholded at gamma N / P.
    std::mt19937_64 rng(7);
    const double variance = 1.0, threshold = 1.0;
    std::exponential_distribution<double> gain(1.0 / variance);
    const int n = 1'000'000;
    int fails = 0;
    for (int i = 0; i < n; ++i) fails += gain(rng) < threshold;
    const double p = 1.0 - std::exp(-1.0);
    CHECK(std::abs(fails / double(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("interfered success") {
    CHECK(interfered_success_prob(1.0, 1.0, 3.0, 5.0, 1.0, 0.0) == doctest::Approx(1.0));
    const double direct = 1.0 - outage_prob(1.0, 1.0, 2.0, 1.0);
    CHECK(interfered_success_prob(1.0, 1.0, 2.0, 2.0, 1.0, 1.0) == doctest::Approx(direct / 2));

    // Two Rayleigh draws, decode when SINR >= gamma. Mean SNR products 10
    // with secondary slots of 0.9 at spectral rate 2.
    const double gamma = std::exp2(2.0 / 0.9) - 1.0;
    const double pj = 1.0, pl = 1.0, vjk = 10.0, vlk = 10.0, noise = 1.0;
    const double closed = interfered_success_prob(pj, pl, vjk, vlk, noise, gamma);
    std::mt19937_64 rng(11);
    std::exponential_distribution<double> hj(1.0 / vjk), hl(1.0 / vlk);
    const int n = 1'000'000;
    int ok = 0;
    for (int i = 0; i < n; ++i) {
        const double sinr = pj * hj(rng) / (noise + pl * hl(rng));
        ok += sinr >= gamma;
    }
    CHECK(std::abs(ok / double(n) - closed) < 4.0 * std::sqrt(closed * (1 - closed) / n));
    CHECK(closed <= 1.0 - outage_prob(pj, noise, vjk, gamma));
}

TEST_CASE("explicit outage table") {
    OutageTable t;
    t[Link::p_pd] = 1.0;
    t[Link::s_sd] = 0.1;
    t[Link::p_s] = 0.3;
    t[Link::s_pd] = 0.2;
    t[Link::sd_pd] = 0.2;
    t[Link::p_sd] = 0.3;
    t[InterferedLink::s_pd_under_sd] = 0.68;
    t[InterferedLink::sd_pd_under_s] = 0.68;
    const LinkProbabilities l = build_link_probabilities(t);
    CHECK(l.success(Link::p_pd) == 0.0);
    CHECK(l.success(Link::s_sd) == doctest::Approx(0.9));
    CHECK(l.success(Link::p_s) == doctest::Approx(0.7));
    CHECK(l.success(Link::s_pd) == doctest::Approx(0.8));
    CHECK(l.success(Link::sd_pd) == doctest::Approx(0.8));
    CHECK(l.success(Link::p_sd) == doctest::Approx(0.7));
    CHECK(l.interfered_success(InterferedLink::s_pd_under_sd) == doctest::Approx(0.32));
    CHECK(l.interfered_success(InterferedLink::sd_pd_under_s) == doctest::Approx(0.32));
    CHECK_FALSE(l.is_strong_mpr());
    CHECK(l.max_primary_service() == doctest::Approx(0.91));

    OutageTable strong = t;
    strong[InterferedLink::s_pd_under_sd] = 0.2;
    strong[InterferedLink::sd_pd_under_s] = 0.2;
    const LinkProbabilities s = build_link_probabilities(strong);
    CHECK(s.is_strong_mpr());
    CHECK(s == l.as_strong_mpr());

    OutageTable bad = t;
    bad[InterferedLink::s_pd_under_sd] = 0.1; // interfered success 0.9 > direct 0.8
    CHECK_THROWS_AS(build_link_probabilities(bad), ConsistencyError);

    OutageTable missing = t;
    missing[Link::p_sd].reset();
    CHECK_THROWS_AS(build_link_probabilities(missing), ConfigError);
}

TEST_CASE("phy parameters to link table") {
    const std::map<Link, double> snr = {{Link::sd_pd, 10}, {Link::s_pd, 10}, {Link::p_pd, 2},
                                        {Link::p_s, 10},   {Link::p_sd, 10}, {Link::s_sd, 8}};
    const PhyParams phy = PhyParams::from_snr_products(snr, 1.0, 1.0, 0.1, 1.0);
    const LinkProbabilities l = build_link_probabilities(phy);
    CHECK(l.success(Link::p_pd) == doctest::Approx(std::exp(-1.0 / 2)));
    CHECK(l.success(Link::s_sd) == doctest::Approx(std::exp(-(std::exp2(1 / 0.9) - 1) / 8)));
    CHECK(phy.with_spectral_rate(3.0).packet_bits == doctest::Approx(3.0));

    PhyParams broken = phy;
    broken.sensing_time = 1.0;
    CHECK_THROWS_AS(build_link_probabilities(broken), InvalidParameter);
    broken = phy;
    broken.channel_variance.erase({Node::s, Node::sd});
    CHECK_THROWS_AS(build_link_probabilities(broken), ConfigError);
}
