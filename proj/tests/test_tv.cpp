#include "rnncover/tv.hpp"

#include "doctest.h"

#include <cmath>
#include <stdexcept>

using namespace rnncover;

namespace {

double normal_density(double x, double m, double s) {
    const double z = (x - m) / s;
    return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * 3.14159265358979323846));
}

} // namespace

TEST_CASE("closed-form Gaussian TV against the frozen constant") {
    // TV(N(0, 1/4), N(1, 1/4)) = erf(1 / (2 sqrt(2) * 0.5))
    CHECK(tv_gaussian_pair({0.0}, {1.0}, 0.5).value ==
          doctest::Approx(0.68268949213708589717).epsilon(1e-14));
    // Only the mean distance matters: ||(0.3,-0.4)|| = 0.5 at sigma 0.7
    CHECK(tv_gaussian_pair({0.0, 0.0}, {0.3, -0.4}, 0.7).value ==
          doctest::Approx(0.2790151380983292517).epsilon(1e-14));
    CHECK(tv_gaussian_pair({0.4, 0.1}, {0.4, 0.1}, 0.5).value == 0.0);
}

TEST_CASE("sigma zero degenerates to a 0/1 dichotomy") {
    CHECK(tv_gaussian_pair({0.2}, {0.2}, 0.0).value == 0.0);
    CHECK(tv_gaussian_pair({0.2}, {0.2000001}, 0.0).value == 1.0);
}

TEST_CASE("1-D quadrature agrees with the closed form") {
    RngStream rng(21, 1);
    for (int trial = 0; trial < 20; ++trial) {
        const double m1 = 2.0 * rng.next_unit() - 1.0;
        const double m2 = 2.0 * rng.next_unit() - 1.0;
        const double s = 0.3 + 0.7 * rng.next_unit();
        const double lo = std::min(m1, m2) - 9.0 * s;
        const double hi = std::max(m1, m2) + 9.0 * s;
        const TVEstimate quad = tv_numeric_1d(
            [&](double x) { return normal_density(x, m1, s); },
            [&](double x) { return normal_density(x, m2, s); }, lo, hi);
        const TVEstimate closed = tv_gaussian_pair({m1}, {m2}, s);
        CHECK(quad.value == doctest::Approx(closed.value).epsilon(1e-9));
        CHECK(quad.stderr_ == 0.0);
    }
}

TEST_CASE("quadrature rejects windows that truncate mass") {
    CHECK_THROWS_AS((void)tv_numeric_1d(
                        [](double x) { return normal_density(x, 0.0, 1.0); },
                        [](double x) { return normal_density(x, 0.0, 1.0); },
                        -0.5, 0.5),
                    std::domain_error);
}

TEST_CASE("2-D quadrature on product Gaussians") {
    const double s = 0.5;
    const Density2D f = [&](double x, double y) {
        return normal_density(x, 0.0, s) * normal_density(y, 0.2, s);
    };
    const Density2D g = [&](double x, double y) {
        return normal_density(x, 0.6, s) * normal_density(y, -0.2, s);
    };
    // ||mu1 - mu2|| = sqrt(0.36 + 0.16)
    const TVEstimate closed =
        tv_gaussian_pair({0.0, 0.2}, {0.6, -0.2}, s);
    const TVEstimate quad = tv_numeric_2d(f, g, -5.0, 5.6, -4.8, 5.2, 256);
    CHECK(quad.value == doctest::Approx(closed.value).epsilon(1e-5));
}

TEST_CASE("discrete TV on a shared support") {
    CHECK(tv_discrete_shared({0.5, 0.5}, {0.5, 0.5}) == 0.0);
    CHECK(tv_discrete_shared({1.0, 0.0}, {0.0, 1.0}) == 1.0);
    CHECK(tv_discrete_shared({0.7, 0.3}, {0.4, 0.6}) ==
          doctest::Approx(0.3).epsilon(1e-15));
    CHECK_THROWS_AS((void)tv_discrete_shared({0.5, 0.5}, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)tv_discrete_shared({-0.1, 1.1}, {0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("mixture MC estimator is unbiased against the closed form") {
    // single-component mixtures make the truth available exactly
    RngStream rng(21, 2);
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
        RngStream st = rng.substream(trial);
        const double m1 = 2.0 * st.next_unit() - 1.0;
        const double m2 = 2.0 * st.next_unit() - 1.0;
        const double s = 0.4 + 0.5 * st.next_unit();
        const GaussianMixture a = make_mixture(1, s, {{m1}});
        const GaussianMixture b = make_mixture(1, s, {{m2}});
        const TVEstimate est =
            tv_mixture_mc(a.handle(), b.handle(), 40000, st.substream(9));
        const double truth = tv_gaussian_pair({m1}, {m2}, s).value;
        if (std::fabs(est.value - truth) <= 3.0 * est.stderr_) ++hits;
        CHECK(est.stderr_ > 0.0);
        CHECK(est.stderr_ < 0.02);
    }
    CHECK(hits >= 19); // one 3-sigma miss tolerated
}

TEST_CASE("mixture MC is schedule independent") {
    const GaussianMixture a = make_mixture(2, 0.5, {{0.0, 0.0}, {0.4, -0.2}});
    const GaussianMixture b = make_mixture(2, 0.5, {{0.3, 0.1}});
    const RngStream rng(33, 7);
    const TVEstimate e1 = tv_mixture_mc(a.handle(), b.handle(), 5000, rng);
    const TVEstimate e2 = tv_mixture_mc(a.handle(), b.handle(), 5000, rng);
    CHECK(e1.value == e2.value);
    CHECK(e1.stderr_ == e2.stderr_);
}

TEST_CASE("mixture construction validates inputs") {
    CHECK_THROWS_AS((void)make_mixture(1, 0.0, {{0.0}}), std::domain_error);
    CHECK_THROWS_AS((void)make_mixture(1, 0.5, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)make_mixture(2, 0.5, {{0.0}}), std::invalid_argument);
    CHECK_THROWS_AS((void)make_mixture(1, 0.5, {{0.0}}, {0.7, 0.3}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)make_mixture(1, 0.5, {{0.0}, {1.0}}, {0.8, 0.8}),
                    std::invalid_argument);
}

TEST_CASE("mixture density integrates to one and sampling matches moments") {
    const GaussianMixture mix =
        make_mixture(1, 0.4, {{-0.5}, {0.7}}, {0.25, 0.75});
    const TVEstimate self = tv_numeric_1d(
        [&](double x) { return mix.density({x}); },
        [&](double x) { return mix.density({x}); }, -6.0, 6.0);
    CHECK(self.value == doctest::Approx(0.0));

    RngStream rng(4, 4);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        RngStream st = rng.substream(i);
        sum += mix.sample(st)[0];
    }
    const double mean_truth = 0.25 * -0.5 + 0.75 * 0.7;
    CHECK(sum / n == doctest::Approx(mean_truth).epsilon(0.02));
}

TEST_CASE("marginals of a mixture are mixtures of marginals") {
    const GaussianMixture joint =
        make_mixture(3, 0.5, {{0.1, 0.2, 0.3}, {-0.4, 0.0, 0.9}}, {0.6, 0.4});
    const GaussianMixture first = marginal_first(joint);
    const GaussianMixture last = marginal_last(joint);
    CHECK(first.dim == 2);
    CHECK(last.dim == 1);
    CHECK(first.centers[1][1] == 0.0);
    CHECK(last.centers[0][0] == 0.3);
    CHECK(last.weights == joint.weights);
    CHECK(first.density({0.1, 0.2}) > 0.0);
}

TEST_CASE("appending a shared component preserves chosen structure") {
    const GaussianMixture base = make_mixture(1, 0.5, {{0.0}, {1.0}});
    const GaussianMixture plus = append_gaussian(base, 0.25);
    CHECK(plus.dim == 2);
    CHECK(plus.centers[0].size() == 2);
    CHECK(plus.centers[0][1] == 0.25);

    const DistributionHandle dirac = append_dirac(base, 0.125);
    CHECK(dirac.dim == 2);
    CHECK(dirac.density({0.2, 0.125}) ==
          doctest::Approx(base.density({0.2})).epsilon(1e-14));
    CHECK_THROWS_AS((void)dirac.density({0.2, 0.120}), std::logic_error);
}

TEST_CASE("sigmoid pushforward density is a proper density") {
    const double m = 0.3, s = 0.8;
    const TVEstimate self = tv_numeric_1d(
        [&](double y) { return sigmoid_pushforward_density(y, m, s); },
        [&](double y) { return sigmoid_pushforward_density(y, m, s); },
        -0.5 + 1e-9, 0.5 - 1e-9, 8192);
    CHECK(self.value == doctest::Approx(0.0));
}

TEST_CASE("maximal coupling of isotropic Gaussians") {
    const RealVec mu1{0.0, 0.3}, mu2{0.6, -0.1};
    const double s = 0.5;
    const auto coupled = maximal_coupling_gaussian_pair(mu1, mu2, s);
    RngStream rng(9, 9);
    int agree = 0;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        RngStream st = rng.substream(i);
        const auto [x, y] = coupled(st);
        bool same = true;
        for (std::size_t d = 0; d < x.size(); ++d)
            if (x[d] != y[d]) same = false; // agreement must be bitwise
        if (same) ++agree;
    }
    const double truth = tv_gaussian_pair(mu1, mu2, s).value;
    const double freq = 1.0 - static_cast<double>(agree) / n;
    const double se = std::sqrt(truth * (1.0 - truth) / n);
    CHECK(std::fabs(freq - truth) <= 5.0 * se + 0.005);

    const TVEstimate est = coupling_disagreement(coupled, 20000, RngStream(9, 10));
    CHECK(est.value == doctest::Approx(truth).epsilon(0.15));
    CHECK(est.value + 3.0 * est.stderr_ + 0.01 >= truth);
}

TEST_CASE("extended metric aggregates per-probe values") {
    const RealVec vals{0.1, 0.7, 0.3};
    CHECK(extended_metric(vals, ExtendedMode::max_component) == 0.7);
    CHECK(extended_metric(vals, ExtendedMode::l2_mean) ==
          doctest::Approx(std::sqrt((0.01 + 0.49 + 0.09) / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS((void)extended_metric({}, ExtendedMode::max_component),
                    std::invalid_argument);
}

TEST_CASE("certification batteries pass at desk scale") {
    TvCheckOptions opts;
    opts.mc_samples = 20000;
    opts.threads = 2;
    const CertReport dpi = check_dpi(25, opts, RngStream(77, 101));
    CHECK(dpi.rows.size() == 25);
    CHECK(dpi.all_pass());
    const CertReport fl =
        check_first_last_contraction(16, opts, RngStream(77, 102));
    CHECK(fl.all_pass());
    const CertReport cc =
        check_concat_preservation(15, opts, RngStream(77, 103));
    CHECK(cc.all_pass());
}

TEST_CASE("cert report CSV format") {
    CertReport rep;
    rep.check = "demo";
    rep.rows.push_back(CertRow{3, 0.5, 0.25, 0.125, 0.0, false});
    const std::string csv = cert_report_csv(rep, 0xabcdef0123456789ull, 7);
    CHECK(csv ==
          "# config_hash=abcdef0123456789 seed=7\n"
          "trial_id,lhs,rhs,lhs_stderr,rhs_stderr,pass\n"
          "3,0.5,0.25,0.125,0,0\n");
    CHECK_FALSE(rep.all_pass());
}
