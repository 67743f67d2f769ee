#include "gaa/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace gaa;

namespace {

LatticeSpec gaa_chain(int L, double a, double lambda) {
    LatticeSpec s;
    s.L = L;
    s.a = a;
    s.lambda = lambda;
    return s;
}

double median(std::vector<double> v) {
    std::ranges::sort(v);
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("dimer eigenpairs") {
    Eigen::MatrixXd h(2, 2);
    h << 0, -1, -1, 0;
    const auto eig = diagonalize(h);
    CHECK(eig.energies[0] == doctest::Approx(-1.0));
    CHECK(eig.energies[1] == doctest::Approx(1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(eig.vectors(0, 0)) == doctest::Approx(r));
    CHECK(eig.vectors(0, 0) * eig.vectors(1, 0) == doctest::Approx(0.5));   // (1, 1)
    CHECK(eig.vectors(0, 1) * eig.vectors(1, 1) == doctest::Approx(-0.5));  // (1, -1)
}

TEST_CASE("diagonal matrix eigenpairs") {
    Eigen::MatrixXd h = Eigen::Vector3d(2.0, -1.0, 0.5).asDiagonal();
    const auto eig = diagonalize(h);
    CHECK(eig.energies[0] == -1.0);
    CHECK(eig.energies[1] == 0.5);
    CHECK(eig.energies[2] == 2.0);
    CHECK(std::abs(eig.vectors(1, 0)) == 1.0);
    CHECK(std::abs(eig.vectors(2, 1)) == 1.0);
    CHECK(std::abs(eig.vectors(0, 2)) == 1.0);
}

TEST_CASE("diagonalize rejects non-symmetric input") {
    Eigen::MatrixXd h(2, 2);
    h << 0, 1, 0.5, 0;
    CHECK_THROWS_AS(diagonalize(h), std::invalid_argument);
}

TEST_CASE("GAA spectrum residuals, ordering and orthonormality") {
    const auto h = build_hamiltonian(gaa_chain(200, 0.3, 1.0));
    const auto eig = diagonalize(h);
    const double norm = h.norm();
    for (Eigen::Index n = 0; n < eig.energies.size(); ++n) {
        const double res = (h * eig.vectors.col(n) - eig.energies[n] * eig.vectors.col(n)).norm();
        CHECK(res <= 1e-8 * norm);
        if (n + 1 < eig.energies.size()) CHECK(eig.energies[n] <= eig.energies[n + 1]);
    }
    const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(200, 200)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("ipr of reference vectors") {
    const int L = 16;
    CHECK(ipr(Eigen::VectorXd::Constant(L, 1.0 / std::sqrt(L))) == doctest::Approx(1.0 / L));
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(L);
    delta[3] = 1.0;
    CHECK(ipr(delta) == doctest::Approx(1.0));
    Eigen::VectorXd pair = Eigen::VectorXd::Zero(L);
    pair[1] = pair[9] = 1.0;  // unnormalized on purpose
    CHECK(ipr(pair) == doctest::Approx(0.5));
    CHECK_THROWS_AS(ipr(Eigen::VectorXd::Zero(L)), std::invalid_argument);
}

TEST_CASE("mobility edge formula") {
    CHECK(*mobility_edge(gaa_chain(10, 0.3, 0.5)) == doctest::Approx(10.0 / 3.0));
    CHECK(*mobility_edge(gaa_chain(10, 0.3, 1.0)) == doctest::Approx(0.0));
    CHECK(*mobility_edge(gaa_chain(10, 0.3, 1.3)) == doctest::Approx(-2.0));
    CHECK_FALSE(mobility_edge(gaa_chain(10, 0.0, 0.5)).has_value());
    CHECK_FALSE(mobility_edge(gaa_chain(10, 0.3, 0.0)).has_value());
}

TEST_CASE("classification at the edges of the phase diagram") {
    SUBCASE("weak potential: edge above the band") {
        const auto s = gaa_chain(200, 0.3, 0.05);
        const auto data = analyze_spectrum(s);
        CHECK(data.energies.maxCoeff() < *data.mobility_edge);
        CHECK(data.n_e == 1.0);
        CHECK(phase_region(s, data.energies) == PhaseRegion::extended);
    }
    SUBCASE("strong potential: edge below the band") {
        const auto s = gaa_chain(200, 0.3, 2.0);
        const auto data = analyze_spectrum(s);
        CHECK(data.energies.minCoeff() > *data.mobility_edge);
        CHECK(data.n_l == 1.0);
        CHECK(phase_region(s, data.energies) == PhaseRegion::localized);
    }
    SUBCASE("AA criterion without an edge") {
        const auto s = gaa_chain(100, 0.0, 0.5);
        const auto data = analyze_spectrum(s);
        CHECK(data.n_e == 1.0);
        CHECK(phase_region(s, data.energies) == PhaseRegion::extended);
        const auto loc = gaa_chain(100, 0.0, 1.5);
        CHECK(analyze_spectrum(loc).n_l == 1.0);
        const auto crit = gaa_chain(100, 0.0, 1.0);
        const auto cd = analyze_spectrum(crit);
        CHECK(std::ranges::all_of(cd.labels, [](StateLabel l) { return l == StateLabel::undefined; }));
        CHECK(phase_region(crit, cd.energies) == PhaseRegion::critical);
    }
    SUBCASE("potential-free chain is extended") {
        const auto data = analyze_spectrum(gaa_chain(50, 0.4, 0.0));
        CHECK(data.n_e == 1.0);
    }
    SUBCASE("mobility-edge phase") {
        const auto s = gaa_chain(200, 0.3, 1.0);
        const auto data = analyze_spectrum(s);
        CHECK(phase_region(s, data.energies) == PhaseRegion::intermediate);
        CHECK(data.n_e > 0.0);
        CHECK(data.n_l > 0.0);
    }
}

TEST_CASE("exact tie with the edge falls back to the IPR threshold") {
    const auto s = gaa_chain(4, 0.3, 1.0);  // E_c = 0
    Eigen::VectorXd e(4), iprs(4);
    e << -1.0, 0.0, 0.0, 1.0;
    iprs << 0.3, 0.2, 1.0, 0.3;
    const auto cls = classify(s, e, iprs);
    CHECK(cls.labels[0] == StateLabel::extended);
    CHECK(cls.labels[1] == StateLabel::extended);  // 0.2 < 2/sqrt(4)
    CHECK(cls.labels[2] == StateLabel::localized);  // not below 2/sqrt(4)
    CHECK(cls.labels[3] == StateLabel::localized);
    CHECK(cls.n_e + cls.n_l == doctest::Approx(1.0));
}

TEST_CASE("fractions sum to one and n_e decreases along a lambda sweep") {
    double previous = 2.0;
    for (int k = 0; k <= 20; ++k) {
        const double lambda = 0.1 * k;
        const auto data = analyze_spectrum(gaa_chain(200, 0.3, lambda));
        CHECK(data.n_e + data.n_l == doctest::Approx(1.0));
        CHECK(data.n_e <= previous);
        previous = data.n_e;
        for (Eigen::Index n = 0; n < data.ipr.size(); ++n) {
            CHECK(data.ipr[n] >= 1.0 / 200 - 1e-12);
            CHECK(data.ipr[n] <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("IPR separates the two sides of the mobility edge") {
    const auto data = analyze_spectrum(gaa_chain(200, 0.3, 1.0));
    std::vector<double> ext, loc;
    for (std::size_t n = 0; n < data.labels.size(); ++n)
        (data.labels[n] == StateLabel::extended ? ext : loc).push_back(data.ipr[static_cast<Eigen::Index>(n)]);
    REQUIRE_FALSE(ext.empty());
    REQUIRE_FALSE(loc.empty());
    CHECK(median(loc) >= 10.0 * median(ext));
}

TEST_CASE("AA model IPR scaling on either side of the transition") {
    for (int L : {100, 200}) {
        const double ext = analyze_spectrum(gaa_chain(L, 0.0, 0.5)).ipr.mean();
        const double loc = analyze_spectrum(gaa_chain(L, 0.0, 1.5)).ipr.mean();
        CHECK(ext < 5.0 / L);
        CHECK(loc > 0.1);
    }
    const double loc100 = analyze_spectrum(gaa_chain(100, 0.0, 1.5)).ipr.mean();
    const double loc200 = analyze_spectrum(gaa_chain(200, 0.0, 1.5)).ipr.mean();
    CHECK(std::abs(loc100 - loc200) < 0.1 * loc200);
}
