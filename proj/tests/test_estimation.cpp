#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dragonnet/errors.hpp"
#include "dragonnet/estimation.hpp"

using namespace dragonnet;

namespace {

ModelOutputs random_outputs(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    ModelOutputs out;
    out.q0.resize(n);
    out.q1.resize(n);
    out.g.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.q0[i] = normal(rng);
        out.q1[i] = normal(rng);
        out.g[i] = unif(rng);
    }
    return out;
}

}  // namespace

TEST_CASE("estimate_effect: no fluctuation is the exact plug-in mean") {
    std::mt19937_64 rng(1);
    const ModelOutputs out = random_outputs(rng, 20);

    const EffectEstimate plugin = estimate_effect(out, 0.7, false);
    CHECK(plugin.psi_hat == (out.q1 - out.q0).mean());

    const EffectEstimate eps0 = estimate_effect(out, 0.0, true);
    CHECK(eps0.psi_hat == plugin.psi_hat);
    CHECK((eps0.per_sample_ite - plugin.per_sample_ite).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("estimate_effect: constant heads give the constant difference") {
    ModelOutputs out;
    out.q0 = Vector::Constant(7, 1.25);
    out.q1 = Vector::Constant(7, 3.0);
    out.g = Vector::Constant(7, 0.42);
    const EffectEstimate est = estimate_effect(out, 0.0, true);
    CHECK(est.psi_hat == doctest::Approx(1.75).epsilon(1e-15));
}

TEST_CASE("estimate_effect: fluctuation at g = 0.5 adds eps * 4") {
    std::mt19937_64 rng(2);
    ModelOutputs out = random_outputs(rng, 10);
    out.g = Vector::Constant(10, 0.5);
    const EffectEstimate est = estimate_effect(out, 0.1, true);
    // q1 + eps/0.5 and q0 - eps/0.5 -> ite shifted by 0.1*(2+2)
    CHECK(est.psi_hat ==
          doctest::Approx((out.q1 - out.q0).mean() + 0.4).epsilon(1e-13));
}

TEST_CASE("estimate_effect: psi_hat equals mean of per-sample ITE") {
    std::mt19937_64 rng(3);
    const ModelOutputs out = random_outputs(rng, 33);
    const EffectEstimate est = estimate_effect(out, 0.3, true);
    CHECK(est.psi_hat == doctest::Approx(est.per_sample_ite.mean()).epsilon(1e-12));
}

TEST_CASE("eps_ate: perfect estimator scores 0") {
    Vector mu0 = Vector::Random(15);
    Vector mu1 = Vector::Random(15);
    EffectEstimate est;
    est.psi_hat = (mu1 - mu0).mean();
    CHECK(eps_ate(est, mu0, mu1) == 0.0);
}

TEST_CASE("eps_ate: constant shift") {
    Vector mu0 = Vector::Zero(9);
    Vector mu1 = Vector::Constant(9, 4.0);
    EffectEstimate est;
    est.psi_hat = 3.5;
    CHECK(eps_ate(est, mu0, mu1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("eps_ate: matches an independent recomputation on random data") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    Vector mu0(20), mu1(20);
    for (int i = 0; i < 20; ++i) {
        mu0[i] = normal(rng);
        mu1[i] = normal(rng);
    }
    EffectEstimate est;
    est.psi_hat = normal(rng);
    double mean_ite = 0.0;
    for (int i = 0; i < 20; ++i) mean_ite += (mu1[i] - mu0[i]) / 20.0;
    CHECK(eps_ate(est, mu0, mu1) ==
          doctest::Approx(std::abs(mean_ite - est.psi_hat)).epsilon(1e-12));
}

TEST_CASE("eps_pehe: perfect ITE prediction scores 0") {
    Vector mu0 = Vector::Random(12);
    Vector mu1 = Vector::Random(12);
    CHECK(eps_pehe(mu0, mu1, mu0, mu1) == 0.0);
}

TEST_CASE("eps_pehe: unit offset gives exactly 1") {
    const Eigen::Index n = 23;
    Vector mu0 = Vector::Zero(n), mu1 = Vector::Ones(n);
    Vector q0 = Vector::Zero(n), q1 = Vector::Zero(n);
    CHECK(eps_pehe(q0, q1, mu0, mu1) == 1.0);
}

TEST_CASE("eps_pehe: matches brute-force recomputation on random data") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    Vector mu0(20), mu1(20), q0(20), q1(20);
    for (int i = 0; i < 20; ++i) {
        mu0[i] = normal(rng);
        mu1[i] = normal(rng);
        q0[i] = normal(rng);
        q1[i] = normal(rng);
    }
    double want = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double diff = (mu1[i] - mu0[i]) - (q1[i] - q0[i]);
        want += diff * diff;
    }
    want /= 20.0;
    CHECK(eps_pehe(q0, q1, mu0, mu1) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("property: plug-in estimate ignores the propensity values") {
    std::mt19937_64 rng(6);
    ModelOutputs a = random_outputs(rng, 14);
    ModelOutputs b = a;
    b.g = Vector::Constant(14, 0.123);
    CHECK(estimate_effect(a, 0.0, false).psi_hat ==
          estimate_effect(b, 0.0, false).psi_hat);
}

TEST_CASE("property: metrics invariant under common permutation") {
    std::mt19937_64 rng(7);
    const Eigen::Index n = 17;
    Vector mu0 = Vector::Random(n), mu1 = Vector::Random(n);
    Vector q0 = Vector::Random(n), q1 = Vector::Random(n);
    std::vector<Eigen::Index> perm(n);
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Vector pm0(n), pm1(n), pq0(n), pq1(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        pm0[i] = mu0[perm[i]];
        pm1[i] = mu1[perm[i]];
        pq0[i] = q0[perm[i]];
        pq1[i] = q1[perm[i]];
    }
    CHECK(eps_pehe(q0, q1, mu0, mu1) ==
          doctest::Approx(eps_pehe(pq0, pq1, pm0, pm1)).epsilon(1e-12));
}

TEST_CASE("property: translation consistency in mu1 and q1") {
    std::mt19937_64 rng(8);
    const Eigen::Index n = 11;
    Vector mu0 = Vector::Random(n), mu1 = Vector::Random(n);
    Vector q0 = Vector::Random(n), q1 = Vector::Random(n);
    const double c = 2.75;
    EffectEstimate est;
    est.per_sample_ite = q1 - q0;
    est.psi_hat = est.per_sample_ite.mean();
    EffectEstimate est_shift;
    est_shift.per_sample_ite = (q1.array() + c).matrix() - q0;
    est_shift.psi_hat = est_shift.per_sample_ite.mean();
    CHECK(eps_ate(est_shift, mu0, (mu1.array() + c).matrix()) ==
          doctest::Approx(eps_ate(est, mu0, mu1)).epsilon(1e-12));
    CHECK(eps_pehe(q0, (q1.array() + c).matrix(), mu0, (mu1.array() + c).matrix()) ==
          doctest::Approx(eps_pehe(q0, q1, mu0, mu1)).epsilon(1e-12));
}

TEST_CASE("pointwise-correct ITE implies correct ATE") {
    Vector mu0 = Vector::Random(10), mu1 = Vector::Random(10);
    const Vector ite = mu1 - mu0;
    CHECK(eps_pehe(mu0, mu1, mu0, mu1) == 0.0);
    EffectEstimate est;
    est.psi_hat = ite.mean();
    CHECK(eps_ate(est, mu0, mu1) == 0.0);
}
