#pragma once

// Brute-force many-body reference for small chains. Jordan-Wigner order:
// mode p is bit p, chain sites ascending, reference mode last.

#include "gaa/gaussian.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace gaa::oracle {

inline constexpr int kMaxModes = 12;

class FockBasis {
public:
    /// All 2^M occupation patterns.
    static FockBasis full(int modes);
    /// Patterns with exactly `particles` fermions, C(M, N) of them.
    static FockBasis fixed(int modes, int particles);

    [[nodiscard]] int modes() const { return modes_; }
    [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(patterns_.size()); }
    [[nodiscard]] std::uint32_t pattern(Eigen::Index k) const { return patterns_[static_cast<std::size_t>(k)]; }
    /// -1 when the pattern is outside the basis.
    [[nodiscard]] Eigen::Index index(std::uint32_t pattern) const;

private:
    FockBasis(int modes, std::vector<std::uint32_t> patterns);
    int modes_;
    std::vector<std::uint32_t> patterns_;
    std::vector<Eigen::Index> lookup_;
};

/// Matrix of sum_ij h_ij c_i^dagger c_j in the given basis.
Eigen::MatrixXd many_body_hamiltonian(const Eigen::MatrixXd& h, const FockBasis& basis);

/// The many-body state matching initial_correlation(setup): occupied chain
/// sites created in ascending order, then (c_E^dagger + c_R^dagger)/sqrt(2)
/// when a reference is attached.
Eigen::VectorXcd initial_state(const QuenchSetup& setup, const FockBasis& basis);

class ExactPropagator {
public:
    explicit ExactPropagator(const Eigen::MatrixXd& hamiltonian);
    [[nodiscard]] Eigen::VectorXcd evolve(const Eigen::VectorXcd& state, double time) const;

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
};

Eigen::VectorXcd exact_evolve(const Eigen::VectorXcd& state, const Eigen::MatrixXd& hamiltonian, double time);

/// Reduced density matrix over a mode subset, fermionic signs included. Rows
/// are indexed by the subset occupation bits in the subset's listed order.
Eigen::MatrixXcd reduced_density_matrix(const FockBasis& basis, const Eigen::VectorXcd& state,
                                        std::span<const ModeIndex> subset);

double exact_entropy(const FockBasis& basis, const Eigen::VectorXcd& state, std::span<const ModeIndex> subset,
                     LogBase base);

/// <c_i^dagger c_j> of a many-body state.
Eigen::MatrixXcd correlation_matrix(const FockBasis& basis, const Eigen::VectorXcd& state);

/// Largest |S_gaussian - S_exact| of the half-chain entropy over the times.
double half_chain_entropy_deviation(const QuenchSetup& setup, std::span<const double> times);

/// Largest |I_gaussian - I_exact| of I(A:R) over the times and regions.
double mutual_information_deviation(const QuenchSetup& setup, std::span<const double> times,
                                    std::span<const ModeSet> regions);

}  // namespace gaa::oracle
