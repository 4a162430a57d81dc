#include "moldmpc/plant/thermal_plant.hpp"
#include "moldmpc/sysid/arx.hpp"
#include "moldmpc/sysid/excitation.hpp"
#include "moldmpc/sysid/model_file.hpp"
#include "moldmpc/sysid/state_space.hpp"
#include "oracles/arx_oracle.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace moldmpc;

TEST_CASE("scalar first-order system is recovered exactly")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01(0.0, 1.0);
    IoDataset data;
    const int T = 200;
    data.control_outputs = 1;
    data.U.resize(T, 1);
    data.Y.resize(T, 1);
    data.time = Vector::LinSpaced(T, 0, T - 1);
    data.sample_period = 1.0;
    double y = 0.0;
    for (int t = 0; t < T; ++t)
    {
        data.U(t, 0) = n01(rng);
        data.Y(t, 0) = y;
        y = 0.9 * y + 0.1 * data.U(t, 0);
    }
    const ArxModel model = fit_arx(data, {1, 0});
    CHECK(std::abs(model.a[0](0, 0) - 0.9) < 1e-10);
    CHECK(std::abs(model.b[0](0, 0) - 0.1) < 1e-10);
    CHECK(model.residual_max < 1e-10);
}

TEST_CASE("constant output with zero input is flagged rank deficient in the inputs")
{
    const int T = 100;
    IoDataset data;
    data.control_outputs = 1;
    data.U = Matrix::Zero(T, 2);
    data.Y = Matrix::Constant(T, 1, 5.0);
    data.time = Vector::LinSpaced(T, 0, T - 1);
    try
    {
        (void)fit_arx(data, {1, 0});
        FAIL("expected an identification error");
    }
    catch (const IdentificationError& e)
    {
        const std::string msg = e.what();
        CHECK(msg.find("u1[t]") != std::string::npos);
        CHECK(msg.find("u2[t]") != std::string::npos);
        CHECK(msg.find("y1") == std::string::npos);
    }

    // Persistence is recovered once the inputs are removed from the regression.
    IoDataset no_inputs = data;
    no_inputs.U = Matrix::Zero(T, 0);
    const ArxModel model = fit_arx(no_inputs, {1, 0});
    CHECK(model.a[0](0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("too few rows is an input error")
{
    std::mt19937_64 rng(2);
    const ArxModel truth = oracle::random_arx(rng, 2, 4, 2, 1);
    const IoDataset data = oracle::generate_dataset(truth, rng, minimum_rows({2, 1}, 2, 4) - 1);
    CHECK_THROWS_AS(fit_arx(data, {2, 1}), InputError);
    const IoDataset enough = oracle::generate_dataset(truth, rng, minimum_rows({2, 1}, 2, 4));
    CHECK_NOTHROW(fit_arx(enough, {2, 1}));
}

TEST_CASE("multivariable generate-and-recover")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial)
    {
        const ArxModel truth = oracle::random_arx(rng, 2, 4, 2, 1);
        const IoDataset data = oracle::generate_dataset(truth, rng, 400);
        const ArxModel fit = fit_arx(data, {2, 1});
        for (int i = 0; i < 2; ++i)
            CHECK((fit.a[i] - truth.a[i]).cwiseAbs().maxCoeff() < 1e-8);
        for (int i = 0; i < 2; ++i)
            CHECK((fit.b[i] - truth.b[i]).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(fit.spectral_radius() < 1.0);
    }
}

TEST_CASE("least-squares optimality under coefficient perturbation")
{
    std::mt19937_64 rng(4);
    const ArxModel truth = oracle::random_arx(rng, 2, 3, 2, 1);
    const IoDataset data = oracle::generate_dataset(truth, rng, 300, 0.05);
    const ArxModel fit = fit_arx(data, {2, 1});
    const double base = one_step_sse(fit, data);
    const auto probe = [&](Matrix& coeff) {
        for (Eigen::Index i = 0; i < coeff.size(); ++i)
            for (double delta : {-1e-3, 1e-3})
            {
                const double saved = coeff(i);
                coeff(i) = saved + delta;
                // the fit is the unique minimizer; any move increases the sum
                // (allowing for summation roundoff)
                REQUIRE(one_step_sse(fit, data) >= base * (1.0 - 1e-12));
                coeff(i) = saved;
            }
    };
    ArxModel& mutable_fit = const_cast<ArxModel&>(fit);
    for (auto& a : mutable_fit.a)
        probe(a);
    for (auto& b : mutable_fit.b)
        probe(b);
}

TEST_CASE("held-out one-step error on the constant-h plant")
{
    auto cfg = default_plant_config();
    cfg.convection.constant_h = 15.0;
    ThermalPlant plant(cfg);
    const double duration = 200.0 * 1400;
    const auto schedule = excitation_schedule(plant.max_powers(), ExcitationSpec{}, duration);
    const IoDataset data = plant.run_open_loop(schedule, 200.0, duration, false);
    const Eigen::Index split = 1000;
    const IoDataset train = data.slice(0, split);
    const IoDataset test = data.slice(split, data.rows());

    const double ambient_c = to_celsius(cfg.ambient);
    const ArxBaseline baseline{Vector::Constant(6, ambient_c), Vector::Zero(20)};
    const ArxModel model = fit_arx(train, {2, 1}, baseline);
    CHECK(model.spectral_radius() < 1.0);

    const double range = data.Y.maxCoeff() - data.Y.minCoeff();
    const double rms = std::sqrt(one_step_sse(model, test) / static_cast<double>((test.rows() - 2) * 6));
    CHECK(rms < 0.01 * range);
}

TEST_CASE("state-space realization of the scalar model")
{
    ArxModel model;
    model.m = 1;
    model.nu = 1;
    model.r = 1;
    model.s = 0;
    model.a = {Matrix::Constant(1, 1, 0.9)};
    model.b = {Matrix::Constant(1, 1, 0.1)};
    model.baseline = {Vector::Zero(1), Vector::Zero(1)};
    const StateSpaceModel ss = arx_to_statespace(model);
    CHECK(ss.A.rows() == 1);
    CHECK(ss.A(0, 0) == 0.9);
    CHECK(ss.B(0, 0) == 0.1);
    CHECK(ss.C(0, 0) == 1.0);
}

TEST_CASE("state-space rollout equals the ARX recursion (r=2, s=1, m=6)")
{
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n01(0.0, 1.0);
    const ArxModel model = oracle::random_arx(rng, 6, 20, 2, 1);
    const StateSpaceModel ss = arx_to_statespace(model);
    REQUIRE(ss.state_size() == 32);

    const int T = 50;
    Matrix u(T, 20);
    for (int t = 0; t < T; ++t)
        for (int q = 0; q < 20; ++q)
            u(t, q) = n01(rng);
    Matrix y_init(2, 6);
    for (int i = 0; i < 2; ++i)
        for (int p = 0; p < 6; ++p)
            y_init(i, p) = n01(rng);
    u.row(0).setZero(); // the recursion oracle treats u_{-1} as zero
    const Matrix expected = oracle::arx_recursion(model, y_init, u);

    // X_1 = [y_1; y_0; u_0]
    Vector x(32);
    x.segment(0, 6) = y_init.row(1).transpose();
    x.segment(6, 6) = y_init.row(0).transpose();
    x.segment(12, 20) = u.row(0).transpose();
    double worst = 0.0;
    for (int t = 1; t < T; ++t)
    {
        worst = std::max(worst, (ss.C * x - expected.row(t).transpose()).cwiseAbs().maxCoeff());
        if (t + 1 < T)
            x = ss.A * x + ss.B * u.row(t).transpose();
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("spectral radius of A equals the autoregressive companion radius")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial)
    {
        const ArxModel model = oracle::random_arx(rng, 3, 5, 2, 2, 0.7);
        const StateSpaceModel ss = arx_to_statespace(model);
        const double radius = Eigen::EigenSolver<Matrix>(ss.A, false).eigenvalues().cwiseAbs().maxCoeff();
        CHECK(radius == doctest::Approx(model.spectral_radius()).epsilon(1e-9));
    }
}

TEST_CASE("perturbation augmentation block structure")
{
    std::mt19937_64 rng(8);
    const StateSpaceModel ss = arx_to_statespace(oracle::random_arx(rng, 6, 20, 2, 1));
    const AugmentedModel aug = augment_with_perturbations(ss, 6);
    REQUIRE(aug.state_size() == 38);
    CHECK(aug.A.topLeftCorner(32, 32) == ss.A);
    CHECK(aug.A.topRightCorner(32, 6) == aug.Bp);
    CHECK(aug.A.bottomLeftCorner(6, 32).isZero(0.0));
    CHECK(aug.A.bottomRightCorner(6, 6) == Matrix::Identity(6, 6));
    CHECK(aug.B.topRows(32) == ss.B);
    CHECK(aug.B.bottomRows(6).isZero(0.0));
    CHECK(aug.C.leftCols(32) == ss.C);
    CHECK(aug.C.rightCols(6).isZero(0.0));
    // each perturbation drives exactly its own y_t slot
    CHECK(aug.Bp.topRows(6) == Matrix::Identity(6, 6));
    CHECK(aug.Bp.bottomRows(26).isZero(0.0));
}

TEST_CASE("augmentation is conservative with zero perturbations")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01(0.0, 1.0);
    const StateSpaceModel ss = arx_to_statespace(oracle::random_arx(rng, 3, 4, 2, 1));
    const AugmentedModel aug = augment_with_perturbations(ss, 3);
    Vector x = Vector::Zero(ss.state_size());
    Vector xm = Vector::Zero(aug.state_size());
    for (int t = 0; t < 100; ++t)
    {
        Vector u(4);
        for (int q = 0; q < 4; ++q)
            u(q) = n01(rng);
        x = ss.A * x + ss.B * u;
        xm = aug.A * xm + aug.B * u;
        REQUIRE((ss.C * x - aug.C * xm).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("constant perturbation gives the linear steady-state offset")
{
    std::mt19937_64 rng(10);
    const StateSpaceModel ss = arx_to_statespace(oracle::random_arx(rng, 3, 4, 2, 1, 0.6));
    const AugmentedModel aug = augment_with_perturbations(ss, 3);
    const Vector p_star = (Vector(3) << 0.5, -1.0, 2.0).finished();

    Vector xm = Vector::Zero(aug.state_size());
    xm.tail(3) = p_star;
    for (int t = 0; t < 400; ++t)
        xm = aug.A * xm; // zero input; the base model's output stays at zero
    const Eigen::Index n = ss.state_size();
    const Vector expected =
        ss.C * (Matrix::Identity(n, n) - ss.A).partialPivLu().solve(aug.Bp * p_star);
    CHECK((aug.C * xm - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("model file round trip")
{
    std::mt19937_64 rng(11);
    ArxModel model = oracle::random_arx(rng, 3, 5, 2, 1);
    model.baseline.y = Vector::Constant(3, 23.0);
    model.sample_period = 200.0;
    model.residual_rms = Vector::Constant(3, 0.01);
    const ArxModel back = deserialize_model(serialize_model(model));
    CHECK(back.r == 2);
    CHECK(back.s == 1);
    for (int i = 0; i < 2; ++i)
        CHECK(back.a[i] == model.a[i]);
    for (int i = 0; i < 2; ++i)
        CHECK(back.b[i] == model.b[i]);
    CHECK(back.baseline.y == model.baseline.y);
    CHECK(back.sample_period == 200.0);

    std::string text = serialize_model(model);
    const auto pos = text.find("\"version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "\"version\": 9");
    CHECK_THROWS_AS(deserialize_model(text), InputError);
    CHECK_THROWS_AS(deserialize_model("{}"), InputError);
}
