#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "spikerate/errors.hpp"
#include "spikerate/estimator.hpp"
#include "spikerate/generators.hpp"
#include "spikerate/numerics.hpp"
#include "spikerate/oracles.hpp"
#include "spikerate/rng.hpp"
#include "spikerate/spike_train.hpp"
#include "spikerate/validation.hpp"

using namespace spikerate;

namespace {

est::IntensityPath constant_path(const core::SpikeTrain& train, double level) {
    return est::make_sampled_path(train, 0.01,
                                  [level](double, double, double) { return level; });
}

std::vector<std::pair<double, double>> iid_pairs(std::uint64_t stream, std::uint64_t seed,
                                                 std::size_t m) {
    auto g = rng::derive_stream(stream, seed);
    std::vector<std::pair<double, double>> pairs(m);
    for (auto& p : pairs) p = {g.uniform_open01(), g.uniform_open01()};
    return pairs;
}

} // namespace

TEST_CASE("rescaling a constant intensity multiplies the ISIs") {
    const core::SpikeTrain train({1.0, 2.5, 3.0}, 4.0);
    const auto path = constant_path(train, 2.0);
    const auto rescaled = val::rescale(train, path);
    REQUIRE(rescaled.values.size() == 2);
    CHECK(rescaled.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rescaled.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < rescaled.values.size(); ++i)
        CHECK(rescaled.values[i] == path.segment_integral(i));
}

TEST_CASE("rescale rejects a path that does not cover the train") {
    const core::SpikeTrain train({1.0, 2.5, 3.0}, 4.0);
    const core::SpikeTrain other({1.0, 2.4, 3.0}, 4.0);
    const core::SpikeTrain shorter({1.0, 2.5}, 4.0);
    const auto path = constant_path(other, 1.0);
    CHECK_THROWS_AS((void)val::rescale(train, path), RejectedInput);
    CHECK_THROWS_AS((void)val::rescale(train, constant_path(shorter, 1.0)),
                    RejectedInput);
    const core::SpikeTrain lone({1.0}, 4.0);
    CHECK_THROWS_AS((void)val::rescale(lone, path), InsufficientData);
}

TEST_CASE("uniformize applies 1 - exp(-t) elementwise") {
    const val::RescaledIsis t{{std::log(2.0), 0.0, 50.0}};
    const auto z = val::uniformize(t);
    REQUIRE(z.values.size() == 3);
    CHECK(z.values[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(z.values[1] == 0.0);
    CHECK(z.values[2] == doctest::Approx(1.0).epsilon(1e-15));

    // unit-rate exponentials uniformize to mean 1/2
    const auto isi = gen::gen_poisson(10000, 1.0, 2);
    const auto u = val::uniformize(val::RescaledIsis{isi.isis()});
    double mean = 0.0;
    for (double v : u.values) mean += v;
    mean /= double(u.values.size());
    CHECK(std::abs(mean - 0.5) < 3.0 / std::sqrt(12.0 * 10000.0));
}

TEST_CASE("KS statistic and uniformity test") {
    std::vector<double> nine;
    for (int i = 1; i <= 9; ++i) nine.push_back(0.1 * i);
    CHECK(val::ks_statistic(nine) == doctest::Approx(0.1).epsilon(1e-14));

    val::UniformizedIsis ten;
    for (int i = 0; i < 10; ++i) ten.values.push_back(0.05 + 0.1 * i);
    const auto mid = val::ks_uniformity_test(ten);
    CHECK(mid.statistic == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(mid.p_value > 0.99);

    const val::UniformizedIsis degenerate{std::vector<double>(100, 0.5)};
    const auto res = val::ks_uniformity_test(degenerate);
    CHECK(res.statistic == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(res.p_value < 1e-20);

    val::UniformizedIsis few{nine};
    CHECK_THROWS_AS((void)val::ks_uniformity_test(few), InsufficientData);
}

TEST_CASE("Kendall tau-b matches reference values") {
    std::vector<double> seq;
    for (int i = 1; i <= 10; ++i) seq.push_back(i);

    SUBCASE("perfect concordance") {
        const auto r = val::kendall_tau_test(seq, seq);
        CHECK(r.tau == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.p_value == doctest::Approx(5.699411623331837e-05).epsilon(1e-12));
    }
    SUBCASE("ties in one margin") {
        const std::vector<double> x = {1, 1, 2, 2, 3, 3, 4, 4, 5, 5};
        const auto r = val::kendall_tau_test(x, seq);
        CHECK(r.tau == doctest::Approx(0.9428090415820632).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(0.0001478023103344541).epsilon(1e-12));
    }
    SUBCASE("ties in both margins") {
        const std::vector<double> x = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3};
        const std::vector<double> y = {2, 7, 1, 8, 2, 8, 1, 8, 2, 8};
        const auto r = val::kendall_tau_test(x, y);
        CHECK(r.tau == doctest::Approx(0.13041013273932525).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(0.5996592032056576).epsilon(1e-12));
    }
    SUBCASE("degenerate margin carries no evidence") {
        const std::vector<double> flat(10, 1.0);
        const auto r = val::kendall_tau_test(flat, seq);
        CHECK(r.tau == 0.0);
        CHECK(r.p_value == 1.0);
    }
    SUBCASE("gates") {
        const std::vector<double> nine(seq.begin(), seq.begin() + 9);
        CHECK_THROWS_AS((void)val::kendall_tau_test(nine, nine), InsufficientData);
        CHECK_THROWS_AS((void)val::kendall_tau_test(seq, nine), RejectedInput);
        CHECK_THROWS_AS((void)val::kendall_adjacent(seq), InsufficientData); // 9 pairs
    }
    SUBCASE("adjacent pairs of a monotone series are concordant") {
        std::vector<double> mono;
        for (int i = 0; i <= 11; ++i) mono.push_back(std::exp(0.3 * i));
        CHECK(val::kendall_adjacent(mono).tau == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("pseudo-observations are scaled average ranks") {
    const std::vector<std::pair<double, double>> pairs = {{3.0, 10.0}, {1.0, 20.0},
                                                          {2.0, 30.0}};
    const auto ps = val::pseudo_observations(pairs);
    REQUIRE(ps.size() == 3);
    CHECK(ps[0].first == 3.0 / 4.0);
    CHECK(ps[1].first == 1.0 / 4.0);
    CHECK(ps[2].first == 2.0 / 4.0);
    CHECK(ps[0].second == 1.0 / 4.0);
    CHECK(ps[2].second == 3.0 / 4.0);

    const std::vector<std::pair<double, double>> tied = {{1.0, 5.0}, {1.0, 7.0}};
    const auto pt = val::pseudo_observations(tied);
    CHECK(pt[0].first == 0.5); // shared average rank 1.5 over m + 1 = 3
    CHECK(pt[1].first == 0.5);
}

TEST_CASE("empirical copula approaches the independence copula") {
    const auto pairs = iid_pairs(780, 1, 10000);
    CHECK(val::empirical_copula(pairs, 1.0, 1.0) == 1.0);
    CHECK(val::empirical_copula(pairs, 0.7, 0.0) == 0.0);
    double sup = 0.0;
    for (int i = 1; i <= 20; ++i)
        for (int j = 1; j <= 20; ++j) {
            const double u = i / 20.0, v = j / 20.0;
            sup = std::max(sup, std::abs(val::empirical_copula(pairs, u, v) - u * v));
        }
    CHECK(sup < 0.03);
    const std::vector<std::pair<double, double>> none;
    CHECK_THROWS_AS((void)val::empirical_copula(none, 0.5, 0.5), InsufficientData);
}

TEST_CASE("CvM statistic matches its brute-force definition") {
    auto brute = [](const std::vector<std::pair<double, double>>& pseudo) {
        double stat = 0.0;
        for (const auto& [u, v] : pseudo) {
            std::size_t count = 0;
            for (const auto& [pu, pv] : pseudo)
                if (pu <= u && pv <= v) ++count;
            const double d = double(count) / double(pseudo.size()) - u * v;
            stat += d * d;
        }
        return stat;
    };

    SUBCASE("continuous pairs") {
        const auto ps = val::pseudo_observations(iid_pairs(781, 1, 200));
        CHECK(val::copula_cvm_statistic(ps) == doctest::Approx(brute(ps)).epsilon(1e-12));
    }
    SUBCASE("heavily tied pairs") {
        auto pairs = iid_pairs(781, 2, 200);
        for (auto& [u, v] : pairs) { // quantize to force tie handling
            u = std::floor(u * 5.0);
            v = std::floor(v * 5.0);
        }
        const auto ps = val::pseudo_observations(pairs);
        CHECK(val::copula_cvm_statistic(ps) == doctest::Approx(brute(ps)).epsilon(1e-12));
    }
}

TEST_CASE("copula GoF rejects exact dependence and validates gates") {
    std::vector<std::pair<double, double>> diag;
    auto g = rng::derive_stream(782, 1);
    for (int i = 0; i < 200; ++i) {
        const double u = g.uniform_open01();
        diag.emplace_back(u, u);
    }
    const auto r = val::copula_gof_independence(diag, 200, 9, val::PairStructure::iid_pairs,
                                                Exec::serial);
    CHECK(r.p_value < 0.01);

    const auto ok = iid_pairs(783, 1, 40);
    CHECK_THROWS_AS((void)val::copula_gof_independence(ok, 99, 1,
                                                       val::PairStructure::iid_pairs,
                                                       Exec::serial),
                    InsufficientData);
    const auto few = iid_pairs(783, 2, 29);
    CHECK_THROWS_AS((void)val::copula_gof_independence(few, 200, 1,
                                                       val::PairStructure::iid_pairs,
                                                       Exec::serial),
                    InsufficientData);
}

TEST_CASE("copula GoF bootstrap is deterministic across executors") {
    const auto pairs = iid_pairs(784, 3, 120);
    const auto a = val::copula_gof_independence(pairs, 150, 42,
                                                val::PairStructure::adjacent_chain,
                                                Exec::serial);
    const auto b = val::copula_gof_independence(pairs, 150, 42,
                                                val::PairStructure::adjacent_chain,
                                                Exec::parallel);
    CHECK(a.statistic == b.statistic);
    CHECK(a.p_value == b.p_value);
}

TEST_CASE("KS test holds its nominal size") {
    int rej = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        auto g = rng::derive_stream(777, seed);
        val::UniformizedIsis z;
        z.values.resize(999);
        for (auto& x : z.values) x = g.uniform_open01();
        if (val::ks_uniformity_test(z).p_value <= 0.05) ++rej;
    }
    CHECK(rej / 1000.0 > 0.03);
    CHECK(rej / 1000.0 < 0.07);
}

TEST_CASE("Kendall test holds its nominal size on adjacent pairs") {
    int rej = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        auto g = rng::derive_stream(778, seed);
        std::vector<double> z(1000);
        for (auto& x : z) x = g.uniform_open01();
        if (val::kendall_adjacent(z).p_value <= 0.05) ++rej;
    }
    CHECK(rej / 1000.0 > 0.03);
    CHECK(rej / 1000.0 < 0.07);
}

TEST_CASE("copula GoF holds its nominal size") {
    int rej = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        const auto pairs = iid_pairs(779, seed, 300);
        const auto r = val::copula_gof_independence(pairs, 250, seed * 31 + 7,
                                                    val::PairStructure::iid_pairs,
                                                    Exec::serial);
        if (r.p_value <= 0.05) ++rej;
    }
    CHECK(rej / 1000.0 > 0.03);
    CHECK(rej / 1000.0 < 0.07);
}

TEST_CASE("the oracle intensity passes validation almost always") {
    const oracle::ExpRefractoryModel m(1.0, 0.5, 1.0);
    int all_pass = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        gen::FgmExpParams p;
        p.rate = 1.0;
        p.refractory = 0.5;
        p.alpha = 1.0;
        p.seed = seed;
        const auto isi = gen::gen_fgm_exponential(1000, p);
        const auto train = core::to_spike_train(isi);
        const auto path = est::make_sampled_path(
            train, 0.01,
            [&](double x, double tau, double) { return m.conditional_hazard(x, tau); });
        val::ValidationConfig vc;
        vc.seed = seed * 13 + 1;
        vc.n_bootstrap = 500;
        vc.exec = Exec::serial;
        const auto rep = val::validate_with_path(train, path, vc);
        CHECK(rep.rescaled_mean > 0.9);
        CHECK(rep.rescaled_mean < 1.1);
        if (rep.uniformity_pass && rep.kendall_pass && rep.copula_pass) ++all_pass;
    }
    CHECK(all_pass >= 33);
}

TEST_CASE("a true constant rate is rejected at the nominal level only") {
    int rej = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto isi = gen::gen_poisson(1000, 2.0, seed);
        const auto train = core::to_spike_train(isi);
        const auto z = val::uniformize(val::rescale(train, constant_path(train, 2.0)));
        if (val::ks_uniformity_test(z).p_value <= 0.05) ++rej;
    }
    CHECK(rej / 200.0 > 0.02);
    CHECK(rej / 200.0 < 0.08);
}

TEST_CASE("uniformization preserves adjacent ranks exactly") {
    const auto isi = gen::gen_poisson(500, 1.0, 9);
    const val::RescaledIsis t{isi.isis()};
    const auto z = val::uniformize(t);
    const auto kt = val::kendall_adjacent(t.values);
    const auto kz = val::kendall_adjacent(z.values);
    CHECK(kt.tau == kz.tau);
    CHECK(kt.p_value == kz.p_value);
}

TEST_CASE("validate wires the full pipeline coherently") {
    gen::FgmExpParams p;
    p.rate = 1.0;
    p.refractory = 0.5;
    p.alpha = 0.0;
    p.seed = 6;
    const auto isi = gen::gen_fgm_exponential(500, p);
    const auto train = core::to_spike_train(isi);
    const auto fit = est::FittedEstimator::fit(isi, est::EstimatorConfig{});

    val::ValidationConfig vc;
    vc.n_bootstrap = 200;
    vc.seed = 5;
    vc.exec = Exec::serial;
    const auto rep = val::validate(train, fit, vc);

    CHECK(rep.n_rescaled == train.size() - 1);
    CHECK(rep.rescaled.size() == rep.n_rescaled);
    CHECK(rep.uniformized.size() == rep.n_rescaled);
    CHECK(rep.level == 0.05);
    CHECK(rep.n_bootstrap == 200);
    CHECK(rep.seed == 5);
    CHECK(rep.uniformity_pass == (rep.uniformity.p_value > rep.level));
    CHECK(rep.kendall_pass == (rep.kendall.p_value > rep.level));
    CHECK(rep.copula_pass == (rep.copula.p_value > rep.level));
    double mean = 0.0;
    for (double t : rep.rescaled) mean += t;
    CHECK(rep.rescaled_mean == doctest::Approx(mean / double(rep.n_rescaled)));
    for (double z : rep.uniformized) {
        CHECK(z >= 0.0);
        CHECK(z < 1.0);
    }

    SUBCASE("executors produce identical reports") {
        val::ValidationConfig pc = vc;
        pc.exec = Exec::parallel;
        const auto rp = val::validate(train, fit, pc);
        CHECK(rp.uniformity.statistic == rep.uniformity.statistic);
        CHECK(rp.uniformity.p_value == rep.uniformity.p_value);
        CHECK(rp.kendall.tau == rep.kendall.tau);
        CHECK(rp.copula.statistic == rep.copula.statistic);
        CHECK(rp.copula.p_value == rep.copula.p_value);
        CHECK(rp.rescaled == rep.rescaled);
    }
    SUBCASE("bootstrap budget gate propagates") {
        val::ValidationConfig bad = vc;
        bad.n_bootstrap = 50;
        CHECK_THROWS_AS((void)val::validate(train, fit, bad), InsufficientData);
    }
    SUBCASE("grid step gate propagates") {
        val::ValidationConfig bad = vc;
        bad.grid_step = 0.0;
        CHECK_THROWS_AS((void)val::validate(train, fit, bad), RejectedInput);
    }
}
