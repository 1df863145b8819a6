#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "eulab/simplex.hpp"

using namespace eulab;

namespace {

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Exact feasibility replay: A x == b and x >= 0.
void check_feasible(const LinearProgram& lp, const LpResult& res) {
    REQUIRE(res.status == LpStatus::optimal);
    REQUIRE(res.x.size() == lp.c.size());
    for (const Rat& v : res.x) CHECK(v >= 0);
    for (std::size_t i = 0; i < lp.A.size(); ++i) CHECK(dot(lp.A[i], res.x) == lp.b[i]);
    CHECK(dot(lp.c, res.x) == res.value);
}

} // namespace

TEST_CASE("single equality") {
    LinearProgram lp;
    lp.A = {{Rat(1), Rat(-1)}};
    lp.b = {Rat(3)};
    lp.c = {Rat(1), Rat(2)};
    const auto res = solve_lp(lp);
    check_feasible(lp, res);
    CHECK(res.value == 3);
    CHECK(res.x == std::vector<Rat>{Rat(3), Rat(0)});
}

TEST_CASE("transport-style program with a fractional optimum") {
    // min x1 + 2 x2 + 3 x3  s.t.  x1 + x2 + x3 = 1,  x1 - x2 = 1/3
    LinearProgram lp;
    lp.A = {{Rat(1), Rat(1), Rat(1)}, {Rat(1), Rat(-1), Rat(0)}};
    lp.b = {Rat(1), Rat(1) / 3};
    lp.c = {Rat(1), Rat(2), Rat(3)};
    const auto res = solve_lp(lp);
    check_feasible(lp, res);
    CHECK(res.value == Rat(4) / 3); // x = (2/3, 1/3, 0)
}

TEST_CASE("negative right-hand sides are normalized") {
    LinearProgram lp;
    lp.A = {{Rat(-1), Rat(0)}, {Rat(0), Rat(1)}};
    lp.b = {Rat(-2), Rat(1)};
    lp.c = {Rat(1), Rat(1)};
    const auto res = solve_lp(lp);
    check_feasible(lp, res);
    CHECK(res.value == 3); // forced point (2, 1)
}

TEST_CASE("infeasibility is detected") {
    LinearProgram lp;
    lp.A = {{Rat(1), Rat(1)}};
    lp.b = {Rat(-1)};
    lp.c = {Rat(0), Rat(0)};
    CHECK(solve_lp(lp).status == LpStatus::infeasible);

    LinearProgram clash; // x1 = 1 and x1 = 2
    clash.A = {{Rat(1)}, {Rat(1)}};
    clash.b = {Rat(1), Rat(2)};
    clash.c = {Rat(0)};
    CHECK(solve_lp(clash).status == LpStatus::infeasible);
}

TEST_CASE("unboundedness is detected") {
    LinearProgram lp; // min -x1 with x1 - x2 = 0: slide both up forever
    lp.A = {{Rat(1), Rat(-1)}};
    lp.b = {Rat(0)};
    lp.c = {Rat(-1), Rat(0)};
    CHECK(solve_lp(lp).status == LpStatus::unbounded);
}

TEST_CASE("redundant rows retire instead of wedging the basis") {
    LinearProgram lp; // the same constraint three times
    lp.A = {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}, {Rat(2), Rat(2)}};
    lp.b = {Rat(1), Rat(1), Rat(2)};
    lp.c = {Rat(3), Rat(1)};
    const auto res = solve_lp(lp);
    check_feasible(lp, res);
    CHECK(res.value == 1); // all mass on the cheap coordinate
}

TEST_CASE("classic cycling instance terminates at the right value") {
    // A standard degenerate program that loops forever under naive pivoting;
    // the anti-cycling rule must drive it to -1/20.
    LinearProgram lp;
    lp.A = {{Rat(1) / 4, Rat(-60), Rat(-1) / 25, Rat(9), Rat(1), Rat(0), Rat(0)},
            {Rat(1) / 2, Rat(-90), Rat(-1) / 50, Rat(3), Rat(0), Rat(1), Rat(0)},
            {Rat(0), Rat(0), Rat(1), Rat(0), Rat(0), Rat(0), Rat(1)}};
    lp.b = {Rat(0), Rat(0), Rat(1)};
    lp.c = {Rat(-3) / 4, Rat(150), Rat(-1) / 50, Rat(6), Rat(0), Rat(0), Rat(0)};
    const auto res = solve_lp(lp);
    check_feasible(lp, res);
    CHECK(res.value == Rat(-1) / 20);
}

TEST_CASE("inequality wrapper") {
    // max x1 + x2 over the triangle x1 + 2 x2 <= 4, x1 <= 2 (as a min of the negation)
    LinearProgram lp;
    lp.A = {{Rat(1), Rat(2)}, {Rat(1), Rat(0)}};
    lp.b = {Rat(4), Rat(2)};
    lp.c = {Rat(-1), Rat(-1)};
    const auto res = solve_lp_leq(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.value == -3); // x = (2, 1)
    CHECK(res.x == std::vector<Rat>{Rat(2), Rat(1)});
    for (std::size_t i = 0; i < lp.A.size(); ++i) CHECK(dot(lp.A[i], res.x) <= lp.b[i]);
}

TEST_CASE("no constraints") {
    LinearProgram lp;
    lp.c = {Rat(1), Rat(0)};
    const auto res = solve_lp(lp);
    CHECK(res.status == LpStatus::optimal);
    CHECK(res.value == 0);
    LinearProgram down;
    down.c = {Rat(-1)};
    CHECK(solve_lp(down).status == LpStatus::unbounded);
}

TEST_CASE("ragged input is rejected") {
    LinearProgram lp;
    lp.A = {{Rat(1)}};
    lp.b = {Rat(1), Rat(2)};
    lp.c = {Rat(1)};
    CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
}
