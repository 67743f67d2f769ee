#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

namespace gaa {

enum class Boundary { open, periodic };

/// 1-based lattice site label, as used by the on-site potential and the
/// reference coupling. Mode indices elsewhere are 0-based.
struct Site {
    int value = 1;
    [[nodiscard]] int index() const { return value - 1; }
    friend bool operator==(Site, Site) = default;
};

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Modulation frequency b. Kept as an exact fraction when rational so that
/// the phase 2*pi*b*i can be reduced modulo one before hitting cos().
struct Frequency {
    double value = 0.0;
    std::optional<Rational> exact;

    static Frequency golden();
    static Frequency irrational(double b) { return {b, std::nullopt}; }
    static Frequency rational(std::int64_t p, std::int64_t q);

    friend bool operator==(const Frequency&, const Frequency&) = default;
};

struct LatticeSpec {
    int L = 2;
    double t = 1.0;
    double lambda = 0.0;
    double a = 0.0;
    Frequency b = Frequency::golden();
    double phi = 0.0;
    Boundary boundary = Boundary::open;

    friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

/// Throws std::invalid_argument when the spec breaks an invariant
/// (L >= 2, t != 0, |a| < 1, periodic chains need b = p/L).
void validate(const LatticeSpec& spec);

/// mu_i = 2 lambda cos(2 pi b i + phi) / (1 - a cos(2 pi b i + phi)).
double potential(const LatticeSpec& spec, Site i);

Eigen::VectorXd potential_profile(const LatticeSpec& spec);

/// Single-particle tight-binding matrix, -t on the bonds and mu_i on the diagonal.
Eigen::MatrixXd build_hamiltonian(const LatticeSpec& spec);

}  // namespace gaa
