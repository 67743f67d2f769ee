#include "gaa/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gaa;

namespace {

LatticeSpec half_frequency(double lambda, double a) {
    LatticeSpec s;
    s.L = 4;
    s.lambda = lambda;
    s.a = a;
    s.b = Frequency::irrational(0.5);
    return s;
}

}  // namespace

TEST_CASE("potential at the cos = +-1 points") {
    CHECK(potential(half_frequency(1.0, 0.0), Site{2}) == doctest::Approx(2.0));
    CHECK(potential(half_frequency(1.0, 0.5), Site{2}) == doctest::Approx(4.0));
    CHECK(potential(half_frequency(1.0, 0.5), Site{1}) == doctest::Approx(-4.0 / 3.0));
}

TEST_CASE("potential rejects sites outside 1..L") {
    const auto s = half_frequency(1.0, 0.0);
    CHECK_THROWS_AS(potential(s, Site{0}), std::out_of_range);
    CHECK_THROWS_AS(potential(s, Site{5}), std::out_of_range);
}

TEST_CASE("spec validation") {
    LatticeSpec s;
    s.L = 10;
    s.a = 1.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.a = -1.2;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.a = 0.3;
    s.t = 0.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.t = 1.0;
    s.L = 1;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);

    s.L = 233;
    s.boundary = Boundary::periodic;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);  // irrational b
    s.b = Frequency::rational(144, 232);
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s.b = Frequency::rational(144, 233);
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("hamiltonian of small chains") {
    LatticeSpec dimer;
    dimer.L = 2;
    const auto h = build_hamiltonian(dimer);
    CHECK(h(0, 0) == 0.0);
    CHECK(h(1, 1) == 0.0);
    CHECK(h(0, 1) == -1.0);
    CHECK(h(1, 0) == -1.0);

    LatticeSpec ring;
    ring.L = 3;
    ring.b = Frequency::rational(1, 3);
    ring.boundary = Boundary::periodic;
    const auto hr = build_hamiltonian(ring);
    for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {0, 2}}) {
        CHECK(hr(i, j) == -1.0);
        CHECK(hr(j, i) == -1.0);
    }
    CHECK(hr.diagonal().isZero());

    LatticeSpec open = ring;
    open.boundary = Boundary::open;
    CHECK(build_hamiltonian(open)(0, 2) == 0.0);
}

TEST_CASE("hamiltonian structure and potential invariants") {
    for (double a : {-0.7, 0.0, 0.3, 0.9}) {
        for (double lambda : {-1.3, 0.0, 0.5, 2.0}) {
            LatticeSpec s;
            s.L = 57;
            s.a = a;
            s.lambda = lambda;
            s.phi = 0.37;
            const auto h = build_hamiltonian(s);
            CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
            const double bound = 2.0 * std::abs(lambda) / (1.0 - std::abs(a));
            for (int i = 1; i <= s.L; ++i) {
                const double mu = potential(s, Site{i});
                CHECK(h(i - 1, i - 1) == mu);
                CHECK(std::abs(mu) <= bound * (1.0 + 1e-14));
                if (a == 0.0) {
                    const double aa = 2.0 * lambda * std::cos(2.0 * std::numbers::pi * s.b.value * i + s.phi);
                    CHECK(mu == aa);
                }
            }
            for (int i = 0; i < s.L; ++i)
                for (int j = 0; j < s.L; ++j)
                    if (std::abs(i - j) == 1) CHECK(h(i, j) == -1.0);
                    else if (i != j) CHECK(h(i, j) == 0.0);
        }
    }
}

TEST_CASE("rational frequency makes the potential q-periodic") {
    LatticeSpec s;
    s.L = 233 * 2;
    s.lambda = 1.1;
    s.a = 0.3;
    s.b = Frequency::rational(144, 233);
    for (int i = 1; i <= 233; ++i) CHECK(potential(s, Site{i}) == potential(s, Site{i + 233}));
}

TEST_CASE("zero lambda with nonzero a gives a flat potential") {
    LatticeSpec s;
    s.L = 20;
    s.a = 0.5;
    CHECK(potential_profile(s).isZero());
}
