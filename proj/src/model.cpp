#include "gaa/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gaa {

Frequency Frequency::golden() { return {(std::sqrt(5.0) - 1.0) / 2.0, std::nullopt}; }

Frequency Frequency::rational(std::int64_t p, std::int64_t q) {
    if (q <= 0) throw std::invalid_argument("rational frequency needs a positive denominator");
    return {static_cast<double>(p) / static_cast<double>(q), Rational{p, q}};
}

void validate(const LatticeSpec& spec) {
    if (spec.L < 2) throw std::invalid_argument("L must be at least 2, got " + std::to_string(spec.L));
    if (spec.t == 0.0) throw std::invalid_argument("hopping t must be nonzero");
    if (!(std::abs(spec.a) < 1.0)) throw std::invalid_argument("deformation a must satisfy |a| < 1");
    if (!std::isfinite(spec.lambda) || !std::isfinite(spec.phi) || !std::isfinite(spec.b.value))
        throw std::invalid_argument("lattice parameters must be finite");
    if (spec.boundary == Boundary::periodic) {
        if (!spec.b.exact || spec.b.exact->den != spec.L)
            throw std::invalid_argument("periodic boundary requires b = p/q with q = L");
    }
}

namespace {

double phase(const LatticeSpec& spec, int i) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (spec.b.exact) {
        const auto& r = *spec.b.exact;
        // b*i mod 1 computed exactly on integers.
        auto m = (r.num * static_cast<std::int64_t>(i)) % r.den;
        if (m < 0) m += r.den;
        return two_pi * static_cast<double>(m) / static_cast<double>(r.den) + spec.phi;
    }
    return two_pi * spec.b.value * static_cast<double>(i) + spec.phi;
}

}  // namespace

double potential(const LatticeSpec& spec, Site i) {
    if (i.value < 1 || i.value > spec.L)
        throw std::out_of_range("site " + std::to_string(i.value) + " outside 1.." + std::to_string(spec.L));
    const double c = std::cos(phase(spec, i.value));
    return 2.0 * spec.lambda * c / (1.0 - spec.a * c);
}

Eigen::VectorXd potential_profile(const LatticeSpec& spec) {
    validate(spec);
    Eigen::VectorXd mu(spec.L);
    for (int i = 1; i <= spec.L; ++i) mu[i - 1] = potential(spec, Site{i});
    return mu;
}

Eigen::MatrixXd build_hamiltonian(const LatticeSpec& spec) {
    validate(spec);
    const int L = spec.L;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(L, L);
    h.diagonal() = potential_profile(spec);
    for (int i = 0; i + 1 < L; ++i) {
        h(i, i + 1) = -spec.t;
        h(i + 1, i) = -spec.t;
    }
    if (spec.boundary == Boundary::periodic && L > 2) {
        h(0, L - 1) = -spec.t;
        h(L - 1, 0) = -spec.t;
    }
    return h;
}

}  // namespace gaa
