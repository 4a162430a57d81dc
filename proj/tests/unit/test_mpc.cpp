#include "moldmpc/mpc/controller.hpp"
#include "moldmpc/plant/plant_config.hpp"
#include "oracles/arx_oracle.hpp"
#include "oracles/qp_oracle.hpp"

#include <doctest.h>

#include <random>

using namespace moldmpc;

namespace
{

AugmentedModel scalar_model(double a, double b)
{
    AugmentedModel m;
    m.A = Matrix::Constant(1, 1, a);
    m.B = Matrix::Constant(1, 1, b);
    m.C = Matrix::Ones(1, 1);
    m.base_states = 1;
    m.base.baseline.y = Vector::Zero(1);
    m.base.baseline.u = Vector::Zero(1);
    return m;
}

AugmentedModel random_augmented(std::mt19937_64& rng, int m, int nu, double radius = 0.8)
{
    return augment_with_perturbations(arx_to_statespace(oracle::random_arx(rng, m, nu, 2, 1, radius)), m);
}

Vector random_vector(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> n01(0.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = n01(rng);
    return v;
}

MpcConfig open_bounds(int inputs, int horizon, double r = 0.01)
{
    MpcConfig cfg;
    cfg.horizon = horizon;
    cfg.r = r;
    cfg.u_min = Vector::Constant(inputs, -1e9);
    cfg.u_max = Vector::Constant(inputs, 1e9);
    return cfg;
}

} // namespace

TEST_CASE("extended model blocks for the scalar case")
{
    const ExtendedSS e = build_extended_ss(scalar_model(0.9, 0.1));
    Matrix a(2, 2);
    a << 0.9, 0.0, 0.9, 1.0;
    CHECK((e.A - a).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(e.B(0, 0) == doctest::Approx(0.1));
    CHECK(e.B(1, 0) == doctest::Approx(0.1)); // C_m B_m
    CHECK(e.C(0, 0) == 0.0);
    CHECK(e.C(0, 1) == 1.0);

    const ExtendedSS z = build_extended_ss(scalar_model(0.9, 0.0));
    CHECK(z.B.isZero(0.0));
}

TEST_CASE("extended model rollout reproduces the augmented model outputs")
{
    std::mt19937_64 rng(31);
    const AugmentedModel model = random_augmented(rng, 3, 4);
    const ExtendedSS e = build_extended_ss(model);

    const Vector x_prev = random_vector(rng, model.state_size());
    Vector u_prev = random_vector(rng, 4);
    Vector x = model.A * x_prev + model.B * u_prev;
    Vector xe = extended_state(model, x, x_prev);
    for (int t = 0; t < 50; ++t)
    {
        const Vector u = random_vector(rng, 4);
        x = model.A * x + model.B * u;
        xe = e.A * xe + e.B * (u - u_prev);
        u_prev = u;
        REQUIRE((e.C * xe - model.C * x).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("prediction matrices")
{
    std::mt19937_64 rng(32);
    const ExtendedSS e = build_extended_ss(random_augmented(rng, 2, 3));

    SUBCASE("single step")
    {
        const PredictionMatrices p = build_prediction(e, 1);
        CHECK(p.F == e.C * e.A);
        CHECK(p.G == e.C * e.B);
    }
    SUBCASE("columns of G are impulse responses")
    {
        const int np = 5, m = 2, nu = 3;
        const PredictionMatrices p = build_prediction(e, np);
        double worst = 0.0;
        for (int col = 0; col < np * nu; ++col)
        {
            Vector xe = Vector::Zero(e.state_size());
            Vector stacked(np * m);
            for (int i = 0; i < np; ++i)
            {
                Vector du = Vector::Zero(nu);
                if (i == col / nu)
                    du(col % nu) = 1.0;
                xe = e.A * xe + e.B * du;
                stacked.segment(i * m, m) = e.C * xe;
            }
            worst = std::max(worst, (p.G.col(col) - stacked).cwiseAbs().maxCoeff());
        }
        CHECK(worst < 1e-10);
    }
    SUBCASE("free response rows")
    {
        const PredictionMatrices p = build_prediction(e, 4);
        const Vector x0 = random_vector(rng, e.state_size());
        Vector xe = x0;
        for (int i = 0; i < 4; ++i)
        {
            xe = e.A * xe;
            CHECK((p.F.middleRows(i * 2, 2) * x0 - e.C * xe).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    CHECK_THROWS_AS(build_prediction(e, 0), ConfigError);
}

TEST_CASE("prediction shape for the mold dimensions")
{
    std::mt19937_64 rng(33);
    const PredictionMatrices p = build_prediction(build_extended_ss(random_augmented(rng, 6, 20)), 6);
    CHECK(p.F.rows() == 36);
    CHECK(p.G.rows() == 36);
    CHECK(p.G.cols() == 120);
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            CHECK(p.G.block(i * 6, j * 20, 6, 20).isZero(0.0));
}

TEST_CASE("tracking cost")
{
    const Vector one = Vector::Ones(1);
    CHECK(tracking_cost(Vector::Constant(3, 5.0), Vector::Constant(3, 5.0), Vector::Zero(4), Vector::Ones(3), 0.01) == 0.0);
    CHECK(tracking_cost(Vector::Constant(1, 2.0), Vector::Zero(1), Vector::Constant(1, 3.0), one, 0.01) ==
          doctest::Approx(4.09).epsilon(1e-14));

    // virtual rows sitting on the reference add nothing
    const Vector ref = (Vector(2) << 10.0, 12.0).finished();
    const Vector y = (Vector(2) << 9.0, 11.0).finished();
    const Vector du = Vector::Constant(2, 0.5);
    Vector ref_ext(4), y_ext(4);
    ref_ext << ref, 20.0, 20.0;
    y_ext << y, 20.0, 20.0;
    CHECK(tracking_cost(ref_ext, y_ext, du, Vector::Ones(4), 0.01) ==
          tracking_cost(ref, y, du, Vector::Ones(2), 0.01));
}

TEST_CASE("unconstrained solution")
{
    PredictionMatrices p;
    p.F = Matrix::Zero(1, 1);
    p.G = Matrix::Ones(1, 1);
    p.horizon = p.outputs = p.inputs = 1;
    const Vector q = Vector::Ones(1);
    const Vector du = unconstrained_solution(p, Vector::Ones(1), Vector::Zero(1), q, 0.01);
    CHECK(du(0) == doctest::Approx(1.0 / 1.01).epsilon(1e-14));

    std::mt19937_64 rng(34);
    const PredictionMatrices pr = build_prediction(build_extended_ss(random_augmented(rng, 2, 3)), 4);
    const Vector x = random_vector(rng, pr.F.cols());
    const Vector qw = Vector::Constant(pr.F.rows(), 1.5);
    CHECK(unconstrained_solution(pr, pr.F * x, x, qw, 0.01).cwiseAbs().maxCoeff() < 1e-12);

    // central differences of J at the minimizer
    const Vector ref = random_vector(rng, pr.F.rows());
    const Vector sol = unconstrained_solution(pr, ref, x, qw, 0.01);
    const auto j = [&](const Vector& d) { return tracking_cost(ref, pr.F * x + pr.G * d, d, qw, 0.01); };
    const double scale = std::max(1.0, std::abs(j(sol)));
    for (Eigen::Index i = 0; i < sol.size(); ++i)
    {
        const double h = 1e-5;
        Vector plus = sol, minus = sol;
        plus(i) += h;
        minus(i) -= h;
        CHECK(std::abs((j(plus) - j(minus)) / (2 * h)) / scale < 1e-6);
    }
}

TEST_CASE("Hildreth on hand problems")
{
    SUBCASE("clipped scalar")
    {
        const QpResult r = hildreth_solve({Matrix::Constant(1, 1, 2.0), Vector::Constant(1, -4.0),
                                           Matrix::Ones(1, 1), Vector::Ones(1)});
        CHECK(r.status == QpStatus::Converged);
        CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.active_constraints == 1);
    }
    SUBCASE("interior optimum")
    {
        std::mt19937_64 rng(35);
        oracle::BoxQp qp = oracle::random_box_qp(rng, 6);
        qp.lo.setConstant(-1e6);
        qp.hi.setConstant(1e6);
        Matrix m;
        Vector gamma;
        oracle::box_to_inequalities(qp, m, gamma);
        const QpResult r = hildreth_solve({qp.H, qp.f, m, gamma});
        const Vector direct = qp.H.llt().solve(-qp.f);
        CHECK(r.iterations == 0);
        CHECK((r.x - direct).norm() < 1e-9);
    }
    SUBCASE("infeasible set")
    {
        Matrix m(2, 1);
        m << 1.0, -1.0;
        const Vector gamma = (Vector(2) << 1.0, -2.0).finished();
        const QpResult r = hildreth_solve({Matrix::Ones(1, 1), Vector::Zero(1), m, gamma});
        CHECK(r.status == QpStatus::Infeasible);
    }
    CHECK_THROWS_AS(hildreth_solve({Matrix::Constant(1, 1, -1.0), Vector::Zero(1), Matrix::Ones(1, 1), Vector::Ones(1)}),
                    NumericalError);
}

TEST_CASE("Hildreth agrees with the active-set oracle and satisfies KKT")
{
    std::mt19937_64 rng(36);
    std::uniform_int_distribution<int> size(1, 30);
    HildrethOptions opts;
    opts.record_dual = true;
    for (int trial = 0; trial < 60; ++trial)
    {
        const int n = trial < 20 ? 1 + trial % 8 : size(rng);
        const oracle::BoxQp qp = oracle::random_box_qp(rng, n);
        Matrix m;
        Vector gamma;
        oracle::box_to_inequalities(qp, m, gamma);
        const QpResult r = hildreth_solve({qp.H, qp.f, m, gamma}, opts);
        const Vector ref = oracle::solve_box_qp(qp);
        INFO("trial " << trial << " n=" << n);
        CHECK(r.status == QpStatus::Converged);
        CHECK((r.x - ref).norm() < 1e-6);
        CHECK((m * r.x - gamma).maxCoeff() <= 1e-6);
        CHECK(oracle::projected_gradient_norm(qp, r.x) <= 1e-5);
        for (size_t k = 1; k < r.dual_history.size(); ++k)
            REQUIRE(r.dual_history[k] <= r.dual_history[k - 1] + 1e-12 * (1.0 + std::abs(r.dual_history[k - 1])));
    }
}

TEST_CASE("oracles agree with each other on small problems")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 30; ++trial)
    {
        const oracle::BoxQp qp = oracle::random_box_qp(rng, 1 + trial % 8);
        CHECK((oracle::enumerate_box_qp(qp) - oracle::active_set_box_qp(qp)).norm() < 1e-9);
    }
}

TEST_CASE("symmetry map")
{
    SymmetryPairs pairs;
    for (const auto& [i, j] : default_symmetry_pairs())
        pairs.emplace_back(i - 1, j - 1);
    const SymmetryMap map(20, pairs);
    CHECK(map.free_variables() == 10);
    const Matrix& e = map.expansion();
    CHECK(e.rows() == 20);
    CHECK(e.cols() == 10);
    for (Eigen::Index c = 0; c < 10; ++c)
        CHECK(e.col(c).sum() == 2.0);
    CHECK(e(0, 0) == 1.0);
    CHECK(e(7, 0) == 1.0);
    CHECK(map.horizon_expansion(6).rows() == 120);
    CHECK(map.horizon_expansion(6).cols() == 60);

    const Vector u = map.expand(Vector::LinSpaced(10, 1.0, 10.0));
    for (const auto& [i, j] : pairs)
        CHECK(u(i) == u(j));
    CHECK(map.reduce(u) == Vector::LinSpaced(10, 1.0, 10.0));

    const SymmetryMap none(5, {});
    CHECK(none.expansion() == Matrix::Identity(5, 5));

    CHECK_THROWS_AS(SymmetryMap(20, {{0, 7}, {7, 1}}), ConfigError);
    CHECK_THROWS_AS(SymmetryMap(20, {{3, 3}}), ConfigError);
    CHECK_THROWS_AS(SymmetryMap(20, {{0, 20}}), ConfigError);
}

TEST_CASE("reduced solve matches the full solve on a symmetric instance")
{
    // two outputs and two heaters that are mirror images of each other
    ArxModel arx;
    arx.m = 2;
    arx.nu = 2;
    arx.r = 2;
    arx.s = 1;
    arx.a = {(Matrix(2, 2) << 0.6, 0.1, 0.1, 0.6).finished(), (Matrix(2, 2) << 0.1, 0.02, 0.02, 0.1).finished()};
    arx.b = {(Matrix(2, 2) << 0.03, 0.01, 0.01, 0.03).finished(), (Matrix(2, 2) << 0.01, 0.0, 0.0, 0.01).finished()};
    arx.baseline = {Vector::Constant(2, 20.0), Vector::Zero(2)};
    const AugmentedModel model = augment_with_perturbations(arx_to_statespace(arx), 2);

    MpcConfig cfg;
    cfg.horizon = 4;
    cfg.u_min = Vector::Zero(2);
    cfg.u_max = Vector::Constant(2, 500.0);
    MpcConfig sym = cfg;
    sym.symmetry_pairs = {{0, 1}};

    Vector x = Vector::Zero(model.state_size());
    x.head(2).setConstant(3.0);
    x.head(4).tail(2).setConstant(2.5);
    for (double target : {25.0, 21.0, 80.0})
    {
        MpcController full(model, cfg, Vector::Constant(2, 40.0));
        MpcController reduced(model, sym, Vector::Constant(2, 40.0));
        const Vector ref = stack_reference(Vector::Constant(4, target), 2);
        const ControlCommand a = full.compute_command(x, x, ref);
        const ControlCommand b = reduced.compute_command(x, x, ref);
        CHECK(b.u(0) == b.u(1));
        CHECK((a.u - b.u).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("controller at equilibrium holds the steady-state power")
{
    std::mt19937_64 rng(38);
    const AugmentedModel model = random_augmented(rng, 3, 4, 0.7);
    const Vector u_ss = (Vector(4) << 100.0, 200.0, 50.0, 300.0).finished();
    const Eigen::Index n = model.state_size();
    // perturbation states are integrators, keep them at zero
    Vector x_ss = Vector::Zero(n);
    const Eigen::Index nb = model.base_states;
    x_ss.head(nb) = (Matrix::Identity(nb, nb) - model.A.topLeftCorner(nb, nb)).partialPivLu().solve(
        model.B.topRows(nb) * u_ss);

    MpcConfig cfg;
    cfg.horizon = 6;
    cfg.u_min = Vector::Zero(4);
    cfg.u_max = Vector::Constant(4, 1000.0);
    MpcController ctl(model, cfg, u_ss);
    const ControlCommand cmd = ctl.compute_command(x_ss, x_ss, (model.C * x_ss).replicate(6, 1));
    CHECK(cmd.delta_u_horizon.cwiseAbs().maxCoeff() < 1e-8);
    CHECK((cmd.u - u_ss).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(cmd.cost_value < 1e-12);
}

TEST_CASE("controller saturates and never commands negative power")
{
    std::mt19937_64 rng(39);
    AugmentedModel model = random_augmented(rng, 2, 3, 0.7);
    // make every heater warm every output
    model.B.topRows(2) = model.B.topRows(2).cwiseAbs();
    model.A.topRows(model.base_states).setZero();
    model.A.topLeftCorner(2, 2) = 0.9 * Matrix::Identity(2, 2);
    model.A.topRightCorner(2, 2).setIdentity();
    MpcConfig cfg;
    cfg.horizon = 6;
    cfg.u_min = Vector::Zero(3);
    cfg.u_max = (Vector(3) << 500.0, 750.0, 550.0).finished();
    cfg.r = 10.0; // keeps the QP as well conditioned as the mold problem in watts
    const Vector x = Vector::Zero(model.state_size());

    MpcController hot(model, cfg, Vector::Zero(3));
    const ControlCommand up = hot.compute_command(x, x, Vector::Constant(12, 1e4));
    CHECK(up.status == QpStatus::Converged);
    CHECK((up.u - cfg.u_max).cwiseAbs().maxCoeff() < 1e-4);
    CHECK((cfg.u_max - up.u).minCoeff() >= 0.0);

    MpcController cold(model, cfg, Vector::Constant(3, 100.0));
    const ControlCommand down = cold.compute_command(x, x, Vector::Constant(12, -1e4));
    CHECK(down.u.minCoeff() >= 0.0);
    CHECK(down.u.maxCoeff() < 1e-4);
    CHECK(down.status != QpStatus::Infeasible);
}

TEST_CASE("receding-horizon shift of the unconstrained solution")
{
    // With a horizon far longer than the closed-loop settling time the
    // finite-horizon plan is time consistent to within round-off.
    const AugmentedModel model = scalar_model(0.5, 1.0);
    const int np = 80;
    const Vector x0 = Vector::Constant(1, 0.2), x_prev = Vector::Constant(1, 0.1);
    // the input that took x_prev to x0
    MpcController ctl(model, open_bounds(1, np), Vector::Constant(1, 0.15));
    const ExtendedSS e = build_extended_ss(model);
    const Vector ref = Vector::Constant(np, 1.0);

    const ControlCommand first = ctl.compute_command(x0, x_prev, ref);
    const Vector xe1 = e.A * extended_state(model, x0, x_prev) + e.B * first.delta_u_horizon.head(1);
    const Vector x1 = model.A * x0 + model.B * first.u;
    // consistency of the extended and model states
    CHECK(std::abs(xe1(0) - (x1(0) - x0(0))) < 1e-12);
    const ControlCommand second = ctl.compute_command(x1, x0, ref);
    CHECK(std::abs(second.delta_u_horizon(0) - first.delta_u_horizon(1)) < 1e-6);
}

TEST_CASE("extended-domain weights")
{
    MpcConfig cfg;
    cfg.measured_outputs = 2;
    CHECK(cfg.step_weights(4) == (Vector(4) << 1, 1, 0, 0).finished());
    cfg.extended_domain = true;
    CHECK(cfg.step_weights(4) == Vector::Ones(4));
    cfg.virtual_weight = 0.5;
    CHECK(cfg.step_weights(4) == (Vector(4) << 1, 1, 0.5, 0.5).finished());
}

TEST_CASE("controller configuration errors")
{
    const AugmentedModel model = scalar_model(0.5, 1.0);
    MpcConfig cfg = open_bounds(1, 3);
    cfg.r = 0.0;
    CHECK_THROWS_AS(MpcController(model, cfg, Vector::Zero(1)), ConfigError);
    cfg = open_bounds(1, 0);
    CHECK_THROWS_AS(MpcController(model, cfg, Vector::Zero(1)), ConfigError);
    cfg = open_bounds(1, 3);
    cfg.u_min(0) = 2e9;
    CHECK_THROWS_AS(MpcController(model, cfg, Vector::Zero(1)), ConfigError);
    cfg = open_bounds(2, 3);
    CHECK_THROWS_AS(MpcController(model, cfg, Vector::Zero(1)), ConfigError);
}
