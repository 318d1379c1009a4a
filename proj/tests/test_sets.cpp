#include "projsub/problems.hpp"
#include "projsub/sets.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace projsub;

namespace {

void check_close(const Vector &a, const Vector &b, double tol = 1e-12) {
    INFO(to_string(a), " vs ", to_string(b));
    CHECK(distance_between(a, b) <= tol);
}

} // namespace

TEST_SUITE("sets") {

TEST_CASE("project examples") {
    check_close(project(Halfspace(Vector{3, 4}, 10), Vector{6, 8}), Vector{1.2, 1.6});
    check_close(project(Ball(Vector{1, 1}, 2), Vector{1, 5}), Vector{1, 3});
    check_close(project(Box(Vector{0, 0}, Vector{1, 1}), Vector{2, -1}), Vector{1, 0});
    check_close(project(Simplex(3), Vector{2, 0, 0}), Vector{1, 0, 0});
    check_close(project(Hyperplane(Vector{1, 1}, 2), Vector{0, 0}), Vector{1, 1});
}

TEST_CASE("distance examples") {
    CHECK(distance(ConvexSet(Ball(Vector{0, 0}, 1)), Vector{3, 4}) == doctest::Approx(4.0));
    CHECK(distance(ConvexSet(Box(Vector{0, 0}, Vector{1, 1})), Vector{0.5, 0.5}) == 0.0);
    CHECK(distance(ConvexSet(Halfspace(Vector{1, 0}, 0)), Vector{2, 3}) == doctest::Approx(2.0));
}

TEST_CASE("contains examples") {
    CHECK(contains(ConvexSet(Ball(Vector{0, 0}, 1)), Vector{0.6, 0.8}));
    CHECK(contains(ConvexSet(Box(Vector{0, 0}, Vector{1, 1})), Vector{1 + 1e-12, 0.5}, Tolerance(1e-9, 0)));
    CHECK_FALSE(contains(ConvexSet(Halfspace(Vector{1, 0}, 0)), Vector{0.1, 0}));
    CHECK(contains(ConvexSet(Simplex(2)), Vector{0.5, 0.5}));
    CHECK_FALSE(contains(ConvexSet(Simplex(2)), Vector{0.5, 0.6}));
    CHECK_FALSE(contains(ConvexSet(Hyperplane(Vector{1, 0}, 1)), Vector{0.9, 0}));
    const ConvexSet s = SublevelSet{QuadraticBallConstraint{Vector{0, 0}, 1}};
    CHECK(contains(s, Vector{0.6, 0.8}));
    CHECK_FALSE(contains(s, Vector{1.0, 0.1}));
}

TEST_CASE("constructors validate") {
    CHECK_THROWS_AS(Halfspace(Vector{0, 0}, 1), Error);
    CHECK_THROWS_AS(Hyperplane(Vector{0}, 1), Error);
    CHECK_THROWS_AS(Ball(Vector{0}, -1), Error);
    CHECK_THROWS_AS(Box(Vector{1, 0}, Vector{0, 1}), Error);
    CHECK_THROWS_AS(Box(Vector{0}, Vector{0, 1}), DimensionMismatch);
    CHECK_THROWS_AS(Simplex(0), Error);
    CHECK_THROWS_AS(ConstraintFunction(MaxAffineConstraint{{Vector{1, 0}}, {0, 1}}), Error);
}

TEST_CASE("sublevel sets refuse exact projection") {
    const ConvexSet s = SublevelSet{QuadraticBallConstraint{Vector{0, 0}, 1}};
    CHECK_FALSE(s.has_exact_projection());
    CHECK_THROWS_AS(project(s, Vector{2, 0}), NoExactProjection);
    CHECK_THROWS_AS(distance(s, Vector{2, 0}), NoExactProjection);
    CHECK(residual(s, Vector{2, 0}) == doctest::Approx(3.0));
}

TEST_CASE("dimension mismatch") {
    CHECK_THROWS_AS(project(ConvexSet(Ball(Vector{0, 0}, 1)), Vector{1, 2, 3}), DimensionMismatch);
    CHECK_THROWS_AS(project(ConvexSet(Simplex(3)), Vector{1, 2}), DimensionMismatch);
    CHECK_THROWS_AS(project(ConvexSet(Box(Vector{0, 0}, Vector{1, 1})), Vector{1}), DimensionMismatch);
}

TEST_CASE("cutter examples") {
    const SublevelSet ball{QuadraticBallConstraint{Vector{0, 0}, 1}};
    const Cutter c = cutter_halfspace(ball, Vector{2, 0});
    REQUIRE(c);
    check_close(c->a, Vector{4, 0});
    CHECK(c->b == doctest::Approx(5.0));
    check_close(project(c, Vector{2, 0}), Vector{1.25, 0});

    const SublevelSet affine{AffineConstraint{Vector{1, 0}, -1}};
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const Cutter ca = cutter_halfspace(affine, rng.uniform_vector(2, -5, 5));
        REQUIRE(ca);
        CHECK(ca->a == Vector{1, 0});
        CHECK(ca->b == 1.0);
    }

    // feasible anchor satisfies its own cut
    for (int i = 0; i < 100; ++i) {
        const Vector xk = rng.in_ball(Vector{0, 0}, 1);
        CHECK(contains(cutter_halfspace(ball, xk), xk));
    }
}

TEST_CASE("degenerate cutter") {
    const SublevelSet ball{QuadraticBallConstraint{Vector{0, 0}, 1}};
    const Cutter c = cutter_halfspace(ball, Vector{0, 0});
    CHECK_FALSE(c);
    CHECK(project(c, Vector{3, 3}) == Vector{3, 3});
    CHECK(distance(c, Vector{3, 3}) == 0.0);

    const SublevelSet empty{QuadraticBallConstraint{Vector{1, 1}, 0}};
    CHECK_NOTHROW(cutter_halfspace(empty, Vector{1, 1}));  // c = 0: whole space
    const SublevelSet never{AffineConstraint{Vector{0, 0}, 1}};
    CHECK_THROWS_AS(cutter_halfspace(never, Vector{0, 0}), InfeasibleCut);
}

TEST_CASE("cutter contains the set") {
    Rng rng(21);
    for (const char *kind : {"quadratic-ball", "affine", "max-affine"}) {
        for (int t = 0; t < 50; ++t) {
            const auto sc = fixtures::random_sublevel(kind, 2 + rng.index(2), rng);
            const std::size_t n = sc.set.constraint.dimension();
            const Vector xk = rng.uniform_vector(n, -3, 3);
            const Cutter c = cutter_halfspace(sc.set, xk);
            for (int p = 0; p < 40; ++p) {
                const Vector z = rng.uniform_vector(n, -3, 3);
                if (sc.set.constraint.value(z) <= 0) CHECK(contains(c, z));
            }
        }
    }
}

TEST_CASE("constraint subgradient inequality") {
    Rng rng(22);
    for (const char *kind : {"quadratic-ball", "affine", "max-affine"}) {
        const auto sc = fixtures::random_sublevel(kind, 3, rng);
        const auto &c = sc.set.constraint;
        for (int i = 0; i < 1000; ++i) {
            const Vector x = rng.uniform_vector(3, -3, 3);
            const Vector y = rng.uniform_vector(3, -3, 3);
            CHECK(c.value(y) >= c.value(x) + dot(c.subgradient(x), y - x) - 1e-9);
        }
    }
}

TEST_CASE("projection axioms") {
    Rng rng(31);
    for (const auto &kind : fixtures::exact_kinds()) {
        INFO(kind);
        for (int t = 0; t < 40; ++t) {
            const std::size_t n = 1 + rng.index(4);
            const auto sc = fixtures::random_set(kind, n, rng);
            for (int i = 0; i < 25; ++i) {
                const Vector x = rng.uniform_vector(n, -4, 4);
                const Vector x2 = rng.uniform_vector(n, -4, 4);
                const Vector y = sc.sample_inside(rng);
                REQUIRE(contains(sc.set, y));
                const Vector px = project(sc.set, x);
                CHECK(contains(sc.set, px));
                CHECK(dot(x - px, y - px) <= 1e-9);
                CHECK(distance_between(px, project(sc.set, x2)) <= distance_between(x, x2) + 1e-9);
                CHECK(squared_distance(px, y) <= squared_distance(x, y) - squared_distance(px, x) + 1e-9);
                CHECK(distance_between(project(sc.set, px), px) <= 1e-9);
                CHECK(distance_between(project(sc.set, y), y) <= 1e-9);
                CHECK(std::abs(distance(sc.set, x) - distance(sc.set, x2)) <= distance_between(x, x2) + 1e-12);
            }
        }
    }
}

TEST_CASE("simplex matches bisection oracle") {
    Rng rng(41);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + rng.index(8);
        const Vector x = rng.uniform_vector(n, -2, 2);
        check_close(project(Simplex(n), x), oracle::simplex_projection(x), 1e-9);
    }
    // ties in the threshold
    check_close(project(Simplex(4), Vector{1, 1, 1, 1}), Vector{0.25, 0.25, 0.25, 0.25});
    check_close(project(Simplex(3), Vector{0.5, 0.5, -7}), Vector{0.5, 0.5, 0});
}

TEST_CASE("ball intersect halfspace matches sweep oracle") {
    Rng rng(42);
    for (int t = 0; t < 60; ++t) {
        const Ball ball(rng.uniform_vector(2, -0.5, 0.5), rng.uniform(0.5, 1.5));
        Vector a = rng.uniform_vector(2, -1, 1);
        while (norm(a) < 0.2) a = rng.uniform_vector(2, -1, 1);
        const double b = dot(a, ball.center) + rng.uniform(-0.8, 0.8) * ball.radius * norm(a);
        const Halfspace h(a, b);
        const Vector x = rng.uniform_vector(2, -4, 4);
        const Vector p = project_ball_halfspace(ball, h, x);
        const Vector q = oracle::ball_halfspace_projection_2d(ball.center, ball.radius, a, b, x);
        INFO("x=", to_string(x));
        CHECK(distance_between(p, q) <= 1e-6);
    }
    // both constraints active
    const Vector p = project_ball_halfspace(Ball(Vector{0, 0}, 1), Halfspace(Vector{1, 1}, 1), Vector{3, 1});
    check_close(p, Vector{1, 0}, 1e-12);
}

TEST_CASE("as_sublevel") {
    const ConvexSet b = as_sublevel(Ball(Vector{1, 0}, 2));
    REQUIRE(b.as_sublevel());
    CHECK(b.as_sublevel()->constraint.value(Vector{3, 0}) == doctest::Approx(0.0));
    const ConvexSet h = as_sublevel(Halfspace(Vector{1, 2}, 3));
    REQUIRE(h.as_sublevel());
    const Cutter c = cutter_halfspace(*h.as_sublevel(), Vector{7, 7});
    REQUIRE(c);
    CHECK(c->a == Vector{1, 2});
    CHECK(c->b == 3.0);
    CHECK(as_sublevel(Box(Vector{0}, Vector{1})).kind() == "box");
}

}
