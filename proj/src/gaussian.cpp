#include "gaa/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace gaa {

namespace {

constexpr double kClamp = 1e-12;
constexpr double kProjectorTol = 1e-9;

void check_modes(std::span<const ModeIndex> modes, ModeIndex dim) {
    for (auto m : modes)
        if (m < 0 || m >= dim)
            throw std::out_of_range("mode index " + std::to_string(m) + " outside 0.." + std::to_string(dim - 1));
}

}  // namespace

std::vector<int> occupation_pattern(const InitialState& initial, int L) {
    std::vector<int> occ(static_cast<std::size_t>(L), 0);
    switch (initial.kind) {
        case InitialKind::neel:
            for (int i = 0; i < L; i += 2) occ[static_cast<std::size_t>(i)] = 1;
            break;
        case InitialKind::domain_wall:
            std::fill_n(occ.begin(), L / 2, 1);
            break;
        case InitialKind::random_product: {
            std::vector<int> sites(static_cast<std::size_t>(L));
            std::iota(sites.begin(), sites.end(), 0);
            std::mt19937_64 rng(initial.seed);
            std::shuffle(sites.begin(), sites.end(), rng);
            for (int k = 0; k < L / 2; ++k) occ[static_cast<std::size_t>(sites[static_cast<std::size_t>(k)])] = 1;
            break;
        }
        case InitialKind::custom:
            if (static_cast<int>(initial.occupations.size()) != L)
                throw std::invalid_argument("custom occupation vector has length " +
                                            std::to_string(initial.occupations.size()) + ", expected " +
                                            std::to_string(L));
            for (int v : initial.occupations)
                if (v != 0 && v != 1) throw std::invalid_argument("custom occupations must be 0 or 1");
            occ = initial.occupations;
            break;
    }
    return occ;
}

void validate(const QuenchSetup& setup) {
    validate(setup.spec);
    const int L = setup.spec.L;
    if (setup.reference_site) {
        if (setup.reference_site->value < 1 || setup.reference_site->value > L)
            throw std::out_of_range("reference site " + std::to_string(setup.reference_site->value) +
                                    " outside 1.." + std::to_string(L));
        return;
    }
    if (L % 2 != 0) throw std::invalid_argument("half filling needs an even L, got " + std::to_string(L));
    if (setup.initial.kind == InitialKind::custom) {
        const auto pattern = occupation_pattern(setup.initial, L);
        if (std::accumulate(pattern.begin(), pattern.end(), 0) != L / 2)
            throw std::invalid_argument("custom occupation must hold exactly L/2 particles");
    }
}

CorrelationMatrix initial_correlation(const QuenchSetup& setup) {
    validate(setup);
    const int L = setup.spec.L;
    const auto occ = occupation_pattern(setup.initial, L);
    CorrelationMatrix c;
    const ModeIndex dim = setup.reference_site ? L + 1 : L;
    c.entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < L; ++i) c.entries(i, i) = static_cast<double>(occ[static_cast<std::size_t>(i)]);
    if (setup.reference_site) {
        const ModeIndex e = setup.reference_site->index();
        const ModeIndex r = L;
        c.entries(e, e) = 0.5;
        c.entries(r, r) = 0.5;
        c.entries(e, r) = 0.5;
        c.entries(r, e) = 0.5;
        c.reference = r;
    }
    return c;
}

Eigen::MatrixXd embed_hamiltonian(const Eigen::MatrixXd& h, const CorrelationMatrix& c) {
    if (!c.reference) {
        if (h.rows() != c.dim()) throw std::invalid_argument("hamiltonian and correlation matrix differ in size");
        return h;
    }
    if (h.rows() + 1 != c.dim() || *c.reference != h.rows())
        throw std::invalid_argument("reference mode must follow the chain modes");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(c.dim(), c.dim());
    out.topLeftCorner(h.rows(), h.cols()) = h;
    return out;
}

Propagator::Propagator(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("propagator: hamiltonian is not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("propagator: eigensolver did not converge");
    energies_ = solver.eigenvalues();
    modes_ = solver.eigenvectors();
}

Eigen::MatrixXcd Propagator::unitary(double time) const {
    Eigen::VectorXcd phases(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) phases[k] = std::polar(1.0, -time * energies_[k]);
    return modes_.cast<std::complex<double>>() * phases.asDiagonal() * modes_.transpose();
}

CorrelationMatrix Propagator::evolve(const CorrelationMatrix& c0, double time) const {
    if (c0.dim() != dim()) throw std::invalid_argument("evolve: dimension mismatch");
    const Eigen::MatrixXcd w = unitary(time);
    CorrelationMatrix out;
    out.entries = w.adjoint() * c0.entries * w;
    out.reference = c0.reference;
    return out;
}

CorrelationMatrix evolve(const CorrelationMatrix& c0, const Eigen::MatrixXd& h, double time) {
    if (time == 0.0) {
        (void)embed_hamiltonian(h, c0);
        return c0;
    }
    return Propagator(embed_hamiltonian(h, c0)).evolve(c0, time);
}

double entropy_from_occupations(const Eigen::VectorXd& nu, LogBase base) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < nu.size(); ++k) {
        const double p = std::clamp(nu[k], kClamp, 1.0 - kClamp);
        s -= p * std::log(p) + (1.0 - p) * std::log1p(-p);
    }
    return base == LogBase::two ? s / std::log(2.0) : s;
}

double block_entropy(const Eigen::MatrixXcd& block, LogBase base) {
    if (block.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("block_entropy: eigensolver did not converge");
    return entropy_from_occupations(solver.eigenvalues(), base);
}

Eigen::MatrixXcd principal_submatrix(const Eigen::MatrixXcd& m, std::span<const ModeIndex> modes) {
    check_modes(modes, m.rows());
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXcd sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) sub(i, j) = m(modes[static_cast<std::size_t>(i)], modes[static_cast<std::size_t>(j)]);
    return sub;
}

double subsystem_entropy(const CorrelationMatrix& c, std::span<const ModeIndex> modes, LogBase base) {
    return block_entropy(principal_submatrix(c.entries, modes), base);
}

double mutual_information(const CorrelationMatrix& c, std::span<const ModeIndex> region) {
    if (!c.reference) throw std::invalid_argument("mutual_information: no reference mode attached");
    const ModeIndex r = *c.reference;
    if (std::ranges::find(region, r) != region.end())
        throw std::invalid_argument("mutual_information: region contains the reference mode");
    ModeSet joint(region.begin(), region.end());
    joint.push_back(r);
    const ModeIndex ref[] = {r};
    return subsystem_entropy(c, region, LogBase::two) + subsystem_entropy(c, ref, LogBase::two) -
           subsystem_entropy(c, joint, LogBase::two);
}

QuenchEvolution::QuenchEvolution(const CorrelationMatrix& c0, const Eigen::MatrixXd& h) : reference_(c0.reference) {
    const Eigen::MatrixXd hm = embed_hamiltonian(h, c0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hsolver(hm);
    if (hsolver.info() != Eigen::Success) throw std::runtime_error("quench: eigensolver did not converge");
    energies_ = hsolver.eigenvalues();
    modes_ = hsolver.eigenvectors();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> csolver(c0.entries);
    if (csolver.info() != Eigen::Success) throw std::runtime_error("quench: eigensolver did not converge");
    const Eigen::VectorXd& nu = csolver.eigenvalues();
    std::vector<Eigen::Index> occupied;
    for (Eigen::Index k = 0; k < nu.size(); ++k) {
        if (std::abs(nu[k] - 1.0) < kProjectorTol) occupied.push_back(k);
        else if (std::abs(nu[k]) >= kProjectorTol)
            throw std::invalid_argument("quench: initial correlation matrix is not a pure Gaussian state");
    }
    Eigen::MatrixXcd phi(c0.dim(), static_cast<Eigen::Index>(occupied.size()));
    for (std::size_t k = 0; k < occupied.size(); ++k)
        phi.col(static_cast<Eigen::Index>(k)) = csolver.eigenvectors().col(occupied[k]).conjugate();
    weights_ = modes_.transpose() * phi;
}

Eigen::MatrixXcd QuenchEvolution::orbitals(double time, std::span<const ModeIndex> modes) const {
    check_modes(modes, dim());
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXd rows(n, dim());
    for (Eigen::Index i = 0; i < n; ++i) rows.row(i) = modes_.row(modes[static_cast<std::size_t>(i)]);

    Eigen::VectorXcd phases(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) phases[k] = std::polar(1.0, -time * energies_[k]);
    const Eigen::MatrixXcd rotated = phases.asDiagonal() * weights_;
    // Real times complex as two real products.
    Eigen::MatrixXcd out(n, particles());
    out.real() = rows * rotated.real();
    out.imag() = rows * rotated.imag();
    return out;
}

Eigen::MatrixXcd QuenchEvolution::orbitals(double time) const {
    ModeSet all(static_cast<std::size_t>(dim()));
    std::iota(all.begin(), all.end(), ModeIndex{0});
    return orbitals(time, all);
}

Eigen::MatrixXcd QuenchEvolution::block(const Eigen::MatrixXcd& orbitals, std::span<const ModeIndex> modes) {
    check_modes(modes, orbitals.rows());
    const auto n = static_cast<Eigen::Index>(modes.size());
    Eigen::MatrixXcd rows(n, orbitals.cols());
    for (Eigen::Index i = 0; i < n; ++i) rows.row(i) = orbitals.row(modes[static_cast<std::size_t>(i)]);
    return rows.conjugate() * rows.transpose();
}

double QuenchEvolution::entropy(double time, std::span<const ModeIndex> modes, LogBase base) const {
    const Eigen::MatrixXcd rows = orbitals(time, modes);
    return block_entropy(rows.conjugate() * rows.transpose(), base);
}

ModeSet left_half(int L) {
    ModeSet modes(static_cast<std::size_t>(L / 2));
    std::iota(modes.begin(), modes.end(), ModeIndex{0});
    return modes;
}

}  // namespace gaa
