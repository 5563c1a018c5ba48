#include <catch2/catch_amalgamated.hpp>

#include "hopset/schedule.hpp"

using namespace hopset;

TEST_CASE("phase count for kappa=4 rho=1/4") {
    // kappa*rho = 1: exponential stage ends at phase 0, five ceil terms
    auto s = compute_schedule_raw(16, 0.5, 4, 0.25, 16.0);
    CHECK(s.i0 == 0);
    CHECK(s.ell == 4);
}

TEST_CASE("hop budget recursion at eps=1/2") {
    auto s = compute_schedule_raw(16, 0.5, 4, 0.25, 16.0);
    REQUIRE(s.h.size() == 5);
    CHECK(s.h[0] == 1.0);
    CHECK(s.h[1] == 11.0);
    CHECK(s.h[2] == 53.0);
    CHECK(s.h[3] == 223.0);
    CHECK(s.h[4] == 905.0);
    // growth bound: h_i stays within twice (1/eps+5)^i (the factor two is
    // needed; h_1 = 2/eps+7 already exceeds the bare power)
    for (int i = 0; i <= 4; ++i)
        CHECK(s.h[static_cast<size_t>(i)] <= 2.0 * std::pow(1.0 / 0.5 + 5.0, i));
    CHECK(s.beta == 905.0);
    CHECK(s.k0 == 9);  // floor(log2 905)
}

TEST_CASE("radius recursion base step") {
    auto s = compute_schedule_raw(16, 0.5, 4, 0.25, 16.0);
    auto sp = s.scale(3);
    CHECK(sp.radius_bound[0] == 0.0);
    CHECK(sp.radius_bound[1] ==
          Catch::Approx(2.0 * sp.delta_hat[0] * s.log_n));  // R1 = 2*dhat0*log n
}

TEST_CASE("degree schedule: exponential then fixed stage") {
    auto s = compute_schedule_raw(256, 0.25, 2, 0.49, 64.0);
    // kappa*rho = 0.98 < 1: exponential stage is empty
    CHECK(s.i0 == -1);
    for (long long d : s.deg) CHECK(d == static_cast<long long>(std::ceil(std::pow(256.0, 0.49))));

    auto s2 = compute_schedule_raw(256, 0.25, 2, 0.26, 64.0);
    // kappa*rho = 0.52... still < 1
    CHECK(s2.i0 == -1);

    auto s3 = compute_schedule_raw(256, 0.25, 4, 0.49, 64.0);
    // kappa*rho = 1.96: i0 = 0, deg_0 = n^(1/4)
    CHECK(s3.i0 == 0);
    CHECK(s3.deg[0] == 4);
    for (size_t i = 1; i < s3.deg.size(); ++i)
        CHECK(s3.deg[i] == static_cast<long long>(std::ceil(std::pow(256.0, 0.49))));
}

TEST_CASE("delta ladder tops out at the scale window") {
    auto s = compute_schedule_raw(64, 0.5, 4, 0.25, 1024.0);
    auto sp = s.scale(7);
    CHECK(sp.delta[static_cast<size_t>(s.ell)] == std::ldexp(1.0, 8));  // 2^(k+1) exactly
    for (int i = 0; i + 1 <= s.ell; ++i)
        CHECK(sp.delta[static_cast<size_t>(i) + 1] ==
              Catch::Approx(sp.delta[static_cast<size_t>(i)] / 0.5));
    CHECK(sp.alpha == Catch::Approx(sp.delta[0]));
}

TEST_CASE("rescaled schedule meets the small-epsilon assumption") {
    for (double eps : {0.1, 0.5, 1.0 - 1e-9}) {
        auto s = compute_schedule(128, eps, 4, 0.25, 1.0e6);
        CHECK(s.rescaled);
        CHECK(s.eps_assumption_ok);
        CHECK(s.eps_user == eps);
        // rescaling round-trips: eps'' recomputed forward matches the target
        CHECK(s.eps_dprime == Catch::Approx(eps).epsilon(1e-9));
        // cumulative slack stays within the user budget
        CHECK(std::pow(1.0 + s.eps_prime, std::max(s.lambda, 1)) <= 1.0 + eps + 1e-9);
        // per-scale slack is monotone and anchored at zero below k0
        CHECK(s.eps_after(s.k0 - 1) == 0.0);
        if (s.k0 <= s.lambda) {
            CHECK(s.eps_after(s.k0) == Catch::Approx(s.eps_prime));
            CHECK(s.eps_after(s.lambda) <= eps + 1e-9);
            // accumulated slack after scale k stays within (1+eps')^k
            for (int k = s.k0; k <= s.lambda; ++k)
                CHECK(1.0 + s.eps_after(k) <=
                      std::pow(1.0 + s.eps_prime, k) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("lambda and k0 bracket the built scales") {
    auto s = compute_schedule(16, 1.0 - 1e-12, 3, 0.49, 1.0e9);
    CHECK(s.lambda == 29);
    CHECK(s.k0 <= s.lambda);  // at least one real scale at this aspect ratio
    CHECK(!s.vacuous);

    auto tiny = compute_schedule(16, 0.5, 3, 0.49, 16.0);
    CHECK(tiny.vacuous);  // hop budget dwarfs the aspect ratio
    CHECK(tiny.beta_exceeds_n);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(compute_schedule(16, 0.0, 4, 0.25, 4.0), std::invalid_argument);
    CHECK_NOTHROW(compute_schedule(16, 1.0, 4, 0.25, 4.0));  // boundary target allowed
    CHECK_THROWS_AS(compute_schedule(16, 1.5, 4, 0.25, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_schedule(16, 0.5, 1, 0.25, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_schedule(16, 0.5, 4, 0.6, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_schedule(16, 0.5, 4, 0.25, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(compute_schedule(0, 0.5, 4, 0.25, 4.0), std::invalid_argument);
}

TEST_CASE("sigma recursion is monotone and caps memory paths") {
    auto s = compute_schedule_raw(64, 0.5, 4, 0.25, 256.0);
    CHECK(s.sigma[0] == 0.0);
    for (size_t i = 1; i < s.sigma.size(); ++i) {
        CHECK(s.sigma[i] > s.sigma[i - 1]);
        CHECK(s.sigma[i] ==
              Catch::Approx((4.0 * s.log_n + 1.0) * s.sigma[i - 1] +
                            2.0 * (2.0 * s.beta + 1.0) * s.log_n));
    }
    CHECK(s.sigma_cap == 2.0 * s.sigma.back() + 2.0 * s.beta + 1.0);
}

TEST_CASE("log n uses the padded power of two") {
    auto s = compute_schedule_raw(100, 0.4, 4, 0.25, 64.0);
    CHECK(s.padded_n == 128);
    CHECK(s.log_n == 7);
    auto s1 = compute_schedule_raw(1, 0.4, 4, 0.25, 1.0);
    CHECK(s1.log_n == 0);
    CHECK(s1.lambda == -1);
}
