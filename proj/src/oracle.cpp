#include "gaa/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace gaa::oracle {

namespace {

void guard(int modes) {
    if (modes < 1 || modes > kMaxModes)
        throw std::invalid_argument("oracle supports 1.." + std::to_string(kMaxModes) + " modes, got " +
                                    std::to_string(modes));
}

/// (-1)^(occupied modes below p)
int jw_sign(std::uint32_t pattern, int p) {
    const std::uint32_t below = pattern & ((std::uint32_t{1} << p) - 1u);
    return (std::popcount(below) & 1) ? -1 : 1;
}

using SparseState = std::map<std::uint32_t, std::complex<double>>;

SparseState create(const SparseState& in, int mode) {
    SparseState out;
    const std::uint32_t bit = std::uint32_t{1} << mode;
    for (const auto& [pattern, amp] : in) {
        if (pattern & bit) continue;
        out[pattern | bit] += static_cast<double>(jw_sign(pattern, mode)) * amp;
    }
    return out;
}

}  // namespace

FockBasis::FockBasis(int modes, std::vector<std::uint32_t> patterns)
    : modes_(modes), patterns_(std::move(patterns)), lookup_(std::size_t{1} << modes, -1) {
    for (std::size_t k = 0; k < patterns_.size(); ++k) lookup_[patterns_[k]] = static_cast<Eigen::Index>(k);
}

FockBasis FockBasis::full(int modes) {
    guard(modes);
    std::vector<std::uint32_t> patterns(std::size_t{1} << modes);
    for (std::uint32_t s = 0; s < patterns.size(); ++s) patterns[s] = s;
    return {modes, std::move(patterns)};
}

FockBasis FockBasis::fixed(int modes, int particles) {
    guard(modes);
    if (particles < 0 || particles > modes) throw std::invalid_argument("particle number outside 0..M");
    std::vector<std::uint32_t> patterns;
    for (std::uint32_t s = 0; s < (std::uint32_t{1} << modes); ++s)
        if (std::popcount(s) == particles) patterns.push_back(s);
    return {modes, std::move(patterns)};
}

Eigen::Index FockBasis::index(std::uint32_t pattern) const {
    if (pattern >= lookup_.size()) return -1;
    return lookup_[pattern];
}

Eigen::MatrixXd many_body_hamiltonian(const Eigen::MatrixXd& h, const FockBasis& basis) {
    const int m = basis.modes();
    if (h.rows() != m || h.cols() != m) throw std::invalid_argument("single-particle matrix does not match basis");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        const std::uint32_t s = basis.pattern(k);
        for (int j = 0; j < m; ++j) {
            if (!(s & (1u << j))) continue;
            const std::uint32_t s1 = s ^ (1u << j);
            const int sign1 = jw_sign(s, j);
            for (int i = 0; i < m; ++i) {
                if (h(i, j) == 0.0 || (s1 & (1u << i))) continue;
                const std::uint32_t s2 = s1 | (1u << i);
                const Eigen::Index row = basis.index(s2);
                if (row < 0) throw std::logic_error("hopping left the basis");
                out(row, k) += h(i, j) * static_cast<double>(sign1 * jw_sign(s1, i));
            }
        }
    }
    return out;
}

Eigen::VectorXcd initial_state(const QuenchSetup& setup, const FockBasis& basis) {
    validate(setup);
    const int L = setup.spec.L;
    const int modes = setup.reference_site ? L + 1 : L;
    if (basis.modes() != modes) throw std::invalid_argument("basis does not match the quench setup");
    const auto occ = occupation_pattern(setup.initial, L);

    SparseState psi{{0u, 1.0}};
    for (int i = L - 1; i >= 0; --i) {
        if (setup.reference_site && i == setup.reference_site->index()) continue;
        if (occ[static_cast<std::size_t>(i)]) psi = create(psi, i);
    }
    if (setup.reference_site) {
        auto left = create(psi, setup.reference_site->index());
        const auto right = create(psi, L);
        for (const auto& [pattern, amp] : right) left[pattern] += amp;
        psi = std::move(left);
        for (auto& [pattern, amp] : psi) amp /= std::sqrt(2.0);
    }

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis.size());
    for (const auto& [pattern, amp] : psi) {
        if (amp == 0.0) continue;
        const auto k = basis.index(pattern);
        if (k < 0) throw std::invalid_argument("initial state lies outside the basis");
        out[k] = amp;
    }
    return out;
}

ExactPropagator::ExactPropagator(const Eigen::MatrixXd& hamiltonian) {
    if (hamiltonian.rows() > (Eigen::Index{1} << kMaxModes)) throw std::invalid_argument("oracle size guard exceeded");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) throw std::runtime_error("oracle: eigensolver did not converge");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

Eigen::VectorXcd ExactPropagator::evolve(const Eigen::VectorXcd& state, double time) const {
    if (state.size() != energies_.size()) throw std::invalid_argument("oracle: state dimension mismatch");
    Eigen::VectorXcd coeff = vectors_.transpose().cast<std::complex<double>>() * state;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff[k] *= std::polar(1.0, -time * energies_[k]);
    return vectors_.cast<std::complex<double>>() * coeff;
}

Eigen::VectorXcd exact_evolve(const Eigen::VectorXcd& state, const Eigen::MatrixXd& hamiltonian, double time) {
    return ExactPropagator(hamiltonian).evolve(state, time);
}

Eigen::MatrixXcd reduced_density_matrix(const FockBasis& basis, const Eigen::VectorXcd& state,
                                        std::span<const ModeIndex> subset) {
    const int m = basis.modes();
    std::uint32_t mask = 0;
    for (auto p : subset) {
        if (p < 0 || p >= m) throw std::out_of_range("oracle: mode outside basis");
        if (mask & (1u << p)) throw std::invalid_argument("oracle: repeated mode in subset");
        mask |= 1u << p;
    }
    const auto na = static_cast<int>(subset.size());
    const int nb = m - na;
    std::vector<int> rest;
    for (int p = 0; p < m; ++p)
        if (!(mask & (1u << p))) rest.push_back(p);

    // Psi[a][b] with the subset modes moved in front of the rest.
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(Eigen::Index{1} << na, Eigen::Index{1} << nb);
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        const auto amp = state[k];
        if (amp == 0.0) continue;
        const std::uint32_t s = basis.pattern(k);
        std::uint32_t a = 0, b = 0;
        for (int q = 0; q < na; ++q)
            if (s & (1u << subset[static_cast<std::size_t>(q)])) a |= 1u << q;
        for (int q = 0; q < nb; ++q)
            if (s & (1u << rest[static_cast<std::size_t>(q)])) b |= 1u << q;
        // Reorder the ascending creation string into (subset in listed order, rest).
        std::vector<int> order;
        for (auto p : subset)
            if (s & (1u << p)) order.push_back(static_cast<int>(p));
        for (int p : rest)
            if (s & (1u << p)) order.push_back(p);
        int inversions = 0;
        for (std::size_t x = 0; x < order.size(); ++x)
            for (std::size_t y = x + 1; y < order.size(); ++y)
                if (order[x] > order[y]) ++inversions;
        psi(a, b) += (inversions & 1) ? -amp : amp;
    }
    return psi * psi.adjoint();
}

double exact_entropy(const FockBasis& basis, const Eigen::VectorXcd& state, std::span<const ModeIndex> subset,
                     LogBase base) {
    if (subset.empty()) return 0.0;
    const Eigen::MatrixXcd rho = reduced_density_matrix(basis, state, subset);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double p = solver.eigenvalues()[k];
        if (p > 1e-15) s -= p * std::log(p);
    }
    return base == LogBase::two ? s / std::log(2.0) : s;
}

Eigen::MatrixXcd correlation_matrix(const FockBasis& basis, const Eigen::VectorXcd& state) {
    const int m = basis.modes();
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        if (state[k] == 0.0) continue;
        const std::uint32_t s = basis.pattern(k);
        for (int j = 0; j < m; ++j) {
            if (!(s & (1u << j))) continue;
            const std::uint32_t s1 = s ^ (1u << j);
            for (int i = 0; i < m; ++i) {
                if (s1 & (1u << i)) continue;
                const Eigen::Index row = basis.index(s1 | (1u << i));
                if (row < 0) continue;
                const double sign = static_cast<double>(jw_sign(s, j) * jw_sign(s1, i));
                c(i, j) += std::conj(state[row]) * sign * state[k];
            }
        }
    }
    return c;
}

double half_chain_entropy_deviation(const QuenchSetup& setup, std::span<const double> times) {
    if (setup.reference_site) throw std::invalid_argument("half-chain check expects no reference mode");
    const int L = setup.spec.L;
    const auto h = build_hamiltonian(setup.spec);
    const auto basis = FockBasis::fixed(L, L / 2);
    const ExactPropagator exact(many_body_hamiltonian(h, basis));
    const auto psi0 = initial_state(setup, basis);
    const auto c0 = initial_correlation(setup);
    const Propagator gaussian(h);
    const auto half = left_half(L);

    double worst = 0.0;
    for (double t : times) {
        const double s_exact = exact_entropy(basis, exact.evolve(psi0, t), half, LogBase::natural);
        const double s_gauss = subsystem_entropy(gaussian.evolve(c0, t), half, LogBase::natural);
        worst = std::max(worst, std::abs(s_exact - s_gauss));
    }
    return worst;
}

double mutual_information_deviation(const QuenchSetup& setup, std::span<const double> times,
                                    std::span<const ModeSet> regions) {
    if (!setup.reference_site) throw std::invalid_argument("mutual information check needs a reference site");
    const int L = setup.spec.L;
    const auto h = build_hamiltonian(setup.spec);
    const auto c0 = initial_correlation(setup);
    const Eigen::MatrixXd hm = embed_hamiltonian(h, c0);
    const auto basis = FockBasis::full(L + 1);
    const ExactPropagator exact(many_body_hamiltonian(hm, basis));
    const auto psi0 = initial_state(setup, basis);
    const Propagator gaussian(hm);
    const ModeIndex r = L;
    const ModeIndex ref[] = {r};

    double worst = 0.0;
    for (double t : times) {
        const auto psi = exact.evolve(psi0, t);
        const auto c = gaussian.evolve(c0, t);
        const double s_r = exact_entropy(basis, psi, ref, LogBase::two);
        for (const auto& region : regions) {
            ModeSet joint = region;
            joint.push_back(r);
            const double i_exact =
                exact_entropy(basis, psi, region, LogBase::two) + s_r - exact_entropy(basis, psi, joint, LogBase::two);
            worst = std::max(worst, std::abs(i_exact - mutual_information(c, region)));
        }
    }
    return worst;
}

}  // namespace gaa::oracle
