#include "pareto/conditions.hpp"

#include "oracles.hpp"
#include "pareto/dominance.hpp"
#include "pareto/levelset.hpp"

#include <doctest.h>

#include <random>

using namespace pareto;

namespace {

Vector pt(std::initializer_list<Scalar> coords) {
    Vector v(static_cast<int>(coords.size()));
    int i = 0;
    for (Scalar c : coords) v(i++) = c;
    return v;
}

ScoreFunction linear_score() {
    ScoreFunction f;
    f.dim = 2;
    f.value = [](const Vector& y) { return y(0) + y(1) - 1.0; };
    f.gradient = [](const Vector& y) { return Vector(Vector::Ones(y.size())); };
    return f;
}

ScoreFunction circle_score() {
    ScoreFunction f;
    f.dim = 2;
    f.value = [](const Vector& y) { return y.squaredNorm() - 1.0; };
    f.gradient = [](const Vector& y) { return Vector(2.0 * y); };
    return f;
}

}  // namespace

TEST_CASE("generalized gradient on monomials x^k") {
    for (int k = 1; k <= 5; ++k) {
        const auto r = generalized_gradient([k](Scalar x) { return std::pow(x, k); });
        REQUIRE(r.kind == GeneralizedGradientResult::Kind::defined);
        CHECK(r.order == k);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(r.even_order_flag == (k % 2 == 0));
    }
}

TEST_CASE("generalized gradient: constants, shifts, and errors") {
    const auto c = generalized_gradient([](Scalar) { return 3.25; });
    CHECK(c.kind == GeneralizedGradientResult::Kind::constant);
    CHECK(c.value == 0.0);

    // value offset does not matter, only derivatives at 0
    const auto r = generalized_gradient([](Scalar x) { return 7.0 + x * x * x; });
    CHECK(r.order == 3);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-3));

    // scaled cubic: Delta = coefficient
    const auto s = generalized_gradient([](Scalar x) { return -2.5 * x * x * x; });
    CHECK(s.order == 3);
    CHECK(s.value == doctest::Approx(-2.5).epsilon(1e-3));

    // smooth function whose derivatives all vanish at 0 up to max_order
    const auto u = generalized_gradient([](Scalar x) { return std::pow(x, 8); }, 6);
    CHECK(u.kind == GeneralizedGradientResult::Kind::undefined);

    CHECK_THROWS_AS(
        (void)generalized_gradient([](Scalar x) { return std::sqrt(x); }),  // NaN for x < 0
        std::runtime_error);
    CHECK_THROWS_AS((void)generalized_gradient([](Scalar x) { return x; }, 9),
                    std::invalid_argument);
}

TEST_CASE("check_score_function accepts a strictly increasing linear function") {
    PointSet samples(3, 2);
    samples << 0.2, 0.8, 0.5, 0.5, 0.9, 0.1;  // on the line y1 + y2 = 1
    const auto rep = check_score_function(linear_score(), samples);
    CHECK(rep.verdict == Verdict::valid);
    CHECK(rep.max_violation == 0.0);
    CHECK(rep.rejected_samples == 0);
    for (const auto& row : rep.samples) CHECK(row.pass);
}

TEST_CASE("check_score_function flags the circle on the third-quadrant arc") {
    // points on the full unit circle: the arc with both coordinates negative
    // has f(y + delta u) < 0 for small steps outward along (1,1)
    PointSet samples(16, 2);
    for (int i = 0; i < 16; ++i) {
        const Scalar a = 2.0 * M_PI * i / 16;
        samples.row(i) = pt({std::cos(a), std::sin(a)}).transpose();
    }
    const auto rep = check_score_function(circle_score(), samples);
    CHECK(rep.verdict == Verdict::violated);
    CHECK(rep.max_violation > 0.0);
    CHECK(rep.failures() > 0);
}

TEST_CASE("check_score_function: staircase of {(0,1),(1,0)} audits valid") {
    PointSet s(2, 2);
    s << 0, 1, 1, 0;
    const StaircaseFrontier stair(s);
    AuditConfig cfg;
    cfg.deltas = {1e-3};
    const auto rep = check_score_function(stair.score_function(), s, cfg);
    CHECK(rep.verdict == Verdict::valid);
}

TEST_CASE("check_score_function rejects samples off the zero set") {
    PointSet samples(2, 2);
    samples << 0.5, 0.5, 0.9, 0.9;  // second point has f = 0.8
    const auto rep = check_score_function(linear_score(), samples);
    CHECK(rep.rejected_samples == 1);
    CHECK(rep.verdict == Verdict::valid);  // remaining sample passes

    PointSet off(1, 2);
    off << 2.0, 2.0;
    CHECK(check_score_function(linear_score(), off).verdict == Verdict::inconclusive);
}

TEST_CASE("check_differentiable: linear passes, cubic slice passes, square slice fails") {
    PointSet samples(1, 2);
    samples << 0.5, 0.5;
    const auto lin = check_differentiable(linear_score(), samples);
    CHECK(lin.verdict == Verdict::valid);
    for (const auto& row : lin.samples)
        CHECK(row.f_plus == doctest::Approx(row.direction.sum()));

    // f(y) = (y1 + y2 - 1)^3: gradient vanishes on the frontier, odd k* saves it
    ScoreFunction cubic;
    cubic.dim = 2;
    cubic.value = [](const Vector& y) { return std::pow(y(0) + y(1) - 1.0, 3); };
    const auto cub = check_differentiable(cubic, samples);
    CHECK(cub.verdict == Verdict::valid);

    // f(y) = (y1 + y2 - 1)^2: even k* cannot separate the two sides
    ScoreFunction square;
    square.dim = 2;
    square.value = [](const Vector& y) { return std::pow(y(0) + y(1) - 1.0, 2); };
    const auto sq = check_differentiable(square, samples);
    CHECK(sq.verdict == Verdict::violated);
}

TEST_CASE("check_differentiable and check_score_function agree on smooth functions") {
    PointSet line_samples(3, 2);
    line_samples << 0.1, 0.9, 0.5, 0.5, 0.8, 0.2;
    PointSet circle_samples(8, 2);
    for (int i = 0; i < 8; ++i) {
        const Scalar a = 2.0 * M_PI * i / 8;
        circle_samples.row(i) = pt({std::cos(a), std::sin(a)}).transpose();
    }
    CHECK(check_score_function(linear_score(), line_samples).verdict ==
          check_differentiable(linear_score(), line_samples).verdict);
    CHECK(check_score_function(circle_score(), circle_samples).verdict ==
          check_differentiable(circle_score(), circle_samples).verdict);
}

TEST_CASE("audit soundness on random coordinatewise increasing functions") {
    // f(y) = sum_i a_i g_i(y_i) with a_i > 0 and g_i strictly increasing is
    // always a valid score function; reversing one coordinate must fail.
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<Scalar> coef(0.5, 2.0);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int rep = 0; rep < 60; ++rep) {
        const int m = rep % 2 == 0 ? 2 : 3;
        std::vector<Scalar> a(static_cast<size_t>(m));
        std::vector<int> kind(static_cast<size_t>(m));
        for (int d = 0; d < m; ++d) {
            a[static_cast<size_t>(d)] = coef(rng);
            kind[static_cast<size_t>(d)] = pick(rng);
        }
        const auto g = [](int k, Scalar x) {
            switch (k) {
                case 0: return x;
                case 1: return x * x * x + 0.3 * x;
                default: return std::atan(x);
            }
        };
        const int flip = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
        for (int mode = 0; mode < 2; ++mode) {
            ScoreFunction f;
            f.dim = m;
            f.value = [&, mode](const Vector& y) {
                Scalar v = 0;
                for (int d = 0; d < y.size(); ++d) {
                    const Scalar sign = mode == 1 && d == flip ? -1.0 : 1.0;
                    v += a[static_cast<size_t>(d)] * g(kind[static_cast<size_t>(d)], sign * y(d));
                }
                return v;
            };
            // find a frontier sample by bisecting f along the diagonal
            Vector lo = Vector::Constant(m, -6.0), hi = Vector::Constant(m, 6.0);
            if (f.value(lo) > 0 || f.value(hi) < 0) std::swap(lo, hi);
            for (int it = 0; it < 80; ++it) {
                const Vector mid = 0.5 * (lo + hi);
                (f.value(mid) <= 0 ? lo : hi) = mid;
            }
            PointSet samples(1, m);
            samples.row(0) = (0.5 * (lo + hi)).transpose();
            AuditConfig cfg;
            cfg.seed = rep;
            const auto rep_out = check_score_function(f, samples, cfg);
            if (mode == 0)
                CHECK(rep_out.verdict == Verdict::valid);
            else
                CHECK(rep_out.verdict == Verdict::violated);
        }
    }
}

TEST_CASE("check_coordinatewise_increasing: linear true, wiggly false with witness") {
    Box unit{pt({0, 0}), pt({1, 1})};
    ScoreFunction sum;
    sum.dim = 2;
    sum.value = [](const Vector& y) { return y(0) + y(1); };
    CHECK(check_coordinatewise_increasing(sum, unit, 20).increasing);

    Box big{pt({0, 0}), pt({2, 2})};
    ScoreFunction wiggle;
    wiggle.dim = 2;
    wiggle.value = [](const Vector& y) { return std::sin(3.0 * y(0)) + y(1); };
    const auto r = check_coordinatewise_increasing(wiggle, big, 25);
    CHECK_FALSE(r.increasing);
    // the witness pair really is a counterexample on a grid line
    CHECK(wiggle.value(r.witness_a) >= wiggle.value(r.witness_b));
    CHECK(std::cos(3.0 * r.witness_a(0)) < 0.5);  // in the decreasing part
}

TEST_CASE("check_sign_partition: line frontier, flip failure, witness pair") {
    Box box{pt({-0.5, -0.5}), pt({1.5, 1.5})};
    const auto frontier = extract_zero_set(linear_score(), box, 64, 64);
    REQUIRE(!frontier.empty());

    PointSet probes(100, 2);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            probes.row(i * 10 + j) =
                pt({-0.5 + 2.0 * i / 9.0, -0.5 + 2.0 * j / 9.0}).transpose();

    const auto ok = check_sign_partition(linear_score(), frontier, probes);
    CHECK(ok.ok);
    CHECK(ok.mismatches == 0);
    CHECK(ok.witness_found);
    CHECK(ok.checked > 0);

    ScoreFunction neg;
    neg.dim = 2;
    neg.value = [](const Vector& y) { return -(y(0) + y(1) - 1.0); };
    const auto flipped = check_sign_partition(neg, frontier, probes);
    CHECK_FALSE(flipped.ok);
    CHECK(flipped.mismatches == flipped.checked);  // wrong on every classified probe
}

TEST_CASE("connectivity feeds the verdict when a frontier estimate is supplied") {
    PointSet samples(1, 2);
    samples << 0.5, 0.5;
    FrontierEstimate two_parts;
    two_parts.polylines = {{pt({0, 1}), pt({0.4, 0.6})}, {pt({0.6, 0.4}), pt({1, 0})}};
    two_parts.component_count = 2;
    const auto rep = check_score_function(linear_score(), samples, {}, &two_parts);
    CHECK(rep.connectivity == ConnectivityStatus::failed);
    CHECK(rep.verdict == Verdict::violated);
    CHECK_FALSE(rep.connectivity_ok());
}

TEST_CASE("audit verdicts are deterministic given the seed") {
    PointSet samples(2, 2);
    samples << 0.3, 0.7, 0.7, 0.3;
    AuditConfig cfg;
    cfg.seed = 42;
    const auto a = check_score_function(linear_score(), samples, cfg);
    const auto b = check_score_function(linear_score(), samples, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].direction == b.samples[i].direction);
        CHECK(a.samples[i].f_plus == b.samples[i].f_plus);
    }
}
