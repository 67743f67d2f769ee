#include "gaa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gaa {

std::string_view to_string(StateLabel label) {
    switch (label) {
        case StateLabel::extended: return "extended";
        case StateLabel::localized: return "localized";
        case StateLabel::undefined: return "undefined";
    }
    return "undefined";
}

std::string_view to_string(PhaseRegion region) {
    switch (region) {
        case PhaseRegion::extended: return "extended";
        case PhaseRegion::intermediate: return "intermediate";
        case PhaseRegion::localized: return "localized";
        case PhaseRegion::critical: return "critical";
    }
    return "critical";
}

Eigensystem diagonalize(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: matrix is not square");
    if (h.size() == 0) return {};
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("diagonalize: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("diagonalize: eigensolver did not converge");
    // Eigen already returns ascending eigenvalues.
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double ipr(const Eigen::Ref<const Eigen::VectorXd>& psi) {
    const double norm2 = psi.squaredNorm();
    if (!(norm2 > 0.0)) throw std::invalid_argument("ipr: zero vector");
    return psi.array().square().square().sum() / (norm2 * norm2);
}

std::optional<double> mobility_edge(const LatticeSpec& spec) {
    if (spec.a == 0.0 || spec.lambda == 0.0) return std::nullopt;
    const double sgn = spec.lambda > 0.0 ? 1.0 : -1.0;
    return 2.0 * sgn * (std::abs(spec.t) - std::abs(spec.lambda)) / spec.a;
}

double ipr_threshold(int L) { return 2.0 / std::sqrt(static_cast<double>(L)); }

Classification classify(const LatticeSpec& spec, const Eigen::VectorXd& energies, const Eigen::VectorXd& iprs) {
    const auto n = static_cast<std::size_t>(energies.size());
    if (iprs.size() != energies.size()) throw std::invalid_argument("classify: energies and iprs differ in length");
    Classification out;
    out.labels.assign(n, StateLabel::undefined);
    if (n == 0) return out;

    if (const auto edge = mobility_edge(spec)) {
        const double threshold = ipr_threshold(static_cast<int>(n));
        for (std::size_t k = 0; k < n; ++k) {
            const double e = energies[static_cast<Eigen::Index>(k)];
            if (e < *edge) out.labels[k] = StateLabel::extended;
            else if (e > *edge) out.labels[k] = StateLabel::localized;
            else out.labels[k] = iprs[static_cast<Eigen::Index>(k)] < threshold ? StateLabel::extended : StateLabel::localized;
        }
    } else if (spec.lambda == 0.0) {
        out.labels.assign(n, StateLabel::extended);
    } else {
        const double lam = std::abs(spec.lambda), hop = std::abs(spec.t);
        if (lam < hop) out.labels.assign(n, StateLabel::extended);
        else if (lam > hop) out.labels.assign(n, StateLabel::localized);
    }

    const auto count = [&](StateLabel l) { return static_cast<double>(std::ranges::count(out.labels, l)); };
    out.n_e = count(StateLabel::extended) / static_cast<double>(n);
    out.n_l = count(StateLabel::localized) / static_cast<double>(n);
    return out;
}

PhaseRegion phase_region(const LatticeSpec& spec, const Eigen::VectorXd& energies) {
    if (energies.size() == 0) throw std::invalid_argument("phase_region: empty spectrum");
    const double lo = energies.minCoeff(), hi = energies.maxCoeff();
    if (const auto edge = mobility_edge(spec)) {
        if (lo < *edge && *edge < hi) return PhaseRegion::intermediate;
        return *edge >= hi ? PhaseRegion::extended : PhaseRegion::localized;
    }
    if (spec.lambda == 0.0 || std::abs(spec.lambda) < std::abs(spec.t)) return PhaseRegion::extended;
    if (std::abs(spec.lambda) > std::abs(spec.t)) return PhaseRegion::localized;
    return PhaseRegion::critical;
}

SpectrumData analyze_spectrum(const LatticeSpec& spec) {
    auto eig = diagonalize(build_hamiltonian(spec));
    SpectrumData out;
    out.ipr.resize(eig.energies.size());
    for (Eigen::Index k = 0; k < eig.energies.size(); ++k) out.ipr[k] = ipr(eig.vectors.col(k));
    out.mobility_edge = mobility_edge(spec);
    auto cls = classify(spec, eig.energies, out.ipr);
    out.labels = std::move(cls.labels);
    out.n_e = cls.n_e;
    out.n_l = cls.n_l;
    out.energies = std::move(eig.energies);
    out.eigenvectors = std::move(eig.vectors);
    return out;
}

}  // namespace gaa
