#pragma once

#include "gaa/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gaa {

using ModeIndex = Eigen::Index;
using ModeSet = std::vector<ModeIndex>;

enum class LogBase { natural, two };

/// Two-point function C_ij = <c_i^dagger c_j> of a particle-conserving
/// Gaussian state. When a reference mode is attached it sits at the last index.
struct CorrelationMatrix {
    Eigen::MatrixXcd entries;
    std::optional<ModeIndex> reference;

    [[nodiscard]] ModeIndex dim() const { return entries.rows(); }
    [[nodiscard]] double particle_number() const { return entries.trace().real(); }
};

enum class InitialKind { neel, domain_wall, random_product, custom };

struct InitialState {
    InitialKind kind = InitialKind::neel;
    std::uint64_t seed = 0;        // random_product only
    std::vector<int> occupations;  // custom only, one 0/1 entry per site

    static InitialState neel() { return {}; }
    static InitialState domain_wall() { return {InitialKind::domain_wall, 0, {}}; }
    static InitialState random_product(std::uint64_t seed) { return {InitialKind::random_product, seed, {}}; }
    static InitialState custom(std::vector<int> occ) { return {InitialKind::custom, 0, std::move(occ)}; }
};

struct QuenchSetup {
    LatticeSpec spec;
    InitialState initial;
    std::optional<Site> reference_site;
};

/// Site occupations (0/1) of the product pattern, before any reference coupling.
/// Neel fills odd sites (1-based), the domain wall fills the left half and a
/// random product state places floor(L/2) fermions from the seeded RNG.
std::vector<int> occupation_pattern(const InitialState& initial, int L);

void validate(const QuenchSetup& setup);

/// Product state as a diagonal correlation matrix. With a reference at site E
/// an extra mode R is appended and the {E, R} block becomes the Bell pair
/// (c_E^dagger + c_R^dagger)/sqrt(2)|vac>, i.e. [[1/2, 1/2], [1/2, 1/2]].
CorrelationMatrix initial_correlation(const QuenchSetup& setup);

/// Pads h with a zero row and column for the reference mode when c has one.
Eigen::MatrixXd embed_hamiltonian(const Eigen::MatrixXd& h, const CorrelationMatrix& c);

/// Cached eigendecomposition h = V E V^T for repeated propagation.
class Propagator {
public:
    explicit Propagator(const Eigen::MatrixXd& h);

    [[nodiscard]] ModeIndex dim() const { return energies_.size(); }
    [[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
    [[nodiscard]] const Eigen::MatrixXd& modes() const { return modes_; }

    /// e^{-i h t}.
    [[nodiscard]] Eigen::MatrixXcd unitary(double time) const;

    /// C(t) = e^{+iht} C0 e^{-iht}.
    [[nodiscard]] CorrelationMatrix evolve(const CorrelationMatrix& c0, double time) const;

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXd modes_;
};

/// One-shot evolution; h is the chain Hamiltonian and is embedded automatically
/// when c0 carries a reference mode.
CorrelationMatrix evolve(const CorrelationMatrix& c0, const Eigen::MatrixXd& h, double time);

/// -sum [nu log nu + (1-nu) log(1-nu)] with nu clamped to [1e-12, 1 - 1e-12].
double entropy_from_occupations(const Eigen::VectorXd& nu, LogBase base);

/// Entropy of a Hermitian correlation block.
double block_entropy(const Eigen::MatrixXcd& block, LogBase base);

Eigen::MatrixXcd principal_submatrix(const Eigen::MatrixXcd& m, std::span<const ModeIndex> modes);

double subsystem_entropy(const CorrelationMatrix& c, std::span<const ModeIndex> modes, LogBase base);

/// I(A:R) = S(A) + S(R) - S(AR) in bits. Requires a reference mode not in A.
double mutual_information(const CorrelationMatrix& c, std::span<const ModeIndex> region);

/// Evolution of a pure Gaussian state through its occupied orbitals. For a
/// projector C0 = conj(Phi) Phi^T the evolved orbitals are e^{-iht} Phi, and a
/// subsystem block only needs the matching rows, which keeps long sampled
/// protocols at O(|A| M N) per time instead of O(M^3).
class QuenchEvolution {
public:
    /// h is the chain Hamiltonian; it is embedded when c0 has a reference.
    QuenchEvolution(const CorrelationMatrix& c0, const Eigen::MatrixXd& h);

    [[nodiscard]] ModeIndex dim() const { return modes_.rows(); }
    [[nodiscard]] ModeIndex particles() const { return weights_.cols(); }
    [[nodiscard]] std::optional<ModeIndex> reference() const { return reference_; }

    /// Rows of e^{-iht} Phi for the given modes.
    [[nodiscard]] Eigen::MatrixXcd orbitals(double time, std::span<const ModeIndex> modes) const;
    /// All rows of e^{-iht} Phi.
    [[nodiscard]] Eigen::MatrixXcd orbitals(double time) const;

    /// Correlation block of the given rows of an orbital matrix.
    [[nodiscard]] static Eigen::MatrixXcd block(const Eigen::MatrixXcd& orbitals, std::span<const ModeIndex> modes);

    [[nodiscard]] double entropy(double time, std::span<const ModeIndex> modes, LogBase base) const;

private:
    Eigen::MatrixXd modes_;     // eigenvectors of the (embedded) Hamiltonian
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd weights_;  // V^T Phi
    std::optional<ModeIndex> reference_;
};

/// Half-chain modes 0..L/2-1.
ModeSet left_half(int L);

}  // namespace gaa
