#pragma once

#include "gaa/model.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <vector>

namespace gaa {

enum class StateLabel { extended, localized, undefined };
enum class PhaseRegion { extended, intermediate, localized, critical };

std::string_view to_string(StateLabel label);
std::string_view to_string(PhaseRegion region);

struct Eigensystem {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXd vectors;   // column n pairs with energies[n]
};

struct Classification {
    std::vector<StateLabel> labels;
    double n_e = 0.0;
    double n_l = 0.0;
};

struct SpectrumData {
    Eigen::VectorXd energies;
    Eigen::MatrixXd eigenvectors;
    Eigen::VectorXd ipr;
    std::optional<double> mobility_edge;
    std::vector<StateLabel> labels;
    double n_e = 0.0;
    double n_l = 0.0;
};

/// Dense symmetric eigensolve, sorted ascending. Rejects non-symmetric input.
Eigensystem diagonalize(const Eigen::MatrixXd& h);

/// sum |psi_i|^4 / (sum |psi_i|^2)^2; the input need not be normalized.
double ipr(const Eigen::Ref<const Eigen::VectorXd>& psi);

/// a E_c = 2 sgn(lambda) (|t| - |lambda|). Empty when a == 0 or lambda == 0.
std::optional<double> mobility_edge(const LatticeSpec& spec);

/// Diagnostic extended/localized IPR threshold 2/sqrt(L).
double ipr_threshold(int L);

/// Labels states by their side of the mobility edge. Exact ties fall back to
/// the IPR threshold; without an edge the AA criterion |lambda| vs |t| applies.
Classification classify(const LatticeSpec& spec, const Eigen::VectorXd& energies, const Eigen::VectorXd& iprs);

PhaseRegion phase_region(const LatticeSpec& spec, const Eigen::VectorXd& energies);

SpectrumData analyze_spectrum(const LatticeSpec& spec);

}  // namespace gaa
