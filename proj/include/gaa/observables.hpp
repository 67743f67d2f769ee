#pragma once

#include "gaa/gaussian.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace gaa {

/// Numeric extraction parameters for the growth velocity and the late-time
/// averages. Defaults: fit window [0, 20] sampled every 0.5, burn-in 10000,
/// 1000 samples with spacings drawn from Uniform[5, 15].
struct SamplingProtocol {
    double fit_start = 0.0;
    double fit_end = 20.0;
    double fit_dt = 0.5;
    double burn_in = 10000.0;
    int n_samples = 1000;
    double mean_interval = 10.0;
    double jitter = 5.0;
    std::uint64_t seed = 0;

    friend bool operator==(const SamplingProtocol&, const SamplingProtocol&) = default;
};

void validate(const SamplingProtocol& protocol);

/// fit_start, fit_start + fit_dt, ... up to fit_end inclusive.
std::vector<double> fit_times(const SamplingProtocol& protocol);

/// burn_in, then increments from Uniform[mean - jitter, mean + jitter].
std::vector<double> saturation_times(const SamplingProtocol& protocol);

struct EETimeSeries {
    std::vector<double> times;
    std::vector<double> entropies;  // nats
};

/// Thrown when a log-log scaling fit meets a non-positive saturation value.
class UnfittableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept. Needs two distinct x values;
/// the slope error needs at least three points and is 0 otherwise.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

double pearson(std::span<const double> x, std::span<const double> y);

/// Half-chain entanglement entropy (sites 1..L/2, nats) at each time.
EETimeSeries ee_timeseries(const QuenchSetup& setup, std::span<const double> times);

/// Least-squares slope of S(t) over the protocol's fit window.
double early_velocity(const EETimeSeries& series, const SamplingProtocol& protocol);

/// Convenience: evaluates the series on fit_times() and fits it.
double early_velocity(const QuenchSetup& setup, const SamplingProtocol& protocol);

double saturation_value(const QuenchSetup& setup, const SamplingProtocol& protocol);

/// Same, for an explicit single-particle Hamiltonian (used for frozen-dynamics checks).
double saturation_value(const QuenchSetup& setup, const Eigen::MatrixXd& h, const SamplingProtocol& protocol);

struct ScalingFit {
    double alpha = 0.0;
    double standard_error = 0.0;
    std::vector<int> sizes;
    std::vector<double> s_sat;
};

/// Fit of ln S_sat against ln L.
ScalingFit fit_scaling(std::span<const int> sizes, std::span<const double> s_sat);

/// Runs saturation_value for each size, replacing the family's L.
ScalingFit scaling_exponent(const QuenchSetup& family, std::span<const int> sizes, const SamplingProtocol& protocol);

enum class Coupling { center, edge };

std::string_view to_string(Coupling coupling);

/// Reference site for the coupling: L/2 for center, 1 for edge.
Site reference_site(Coupling coupling, int L);

/// Contiguous window of `size` sites (0-based modes). Center windows sit on
/// `centre` with the extra site on the left for even sizes and are shifted
/// back inside the chain when they would cross an end; edge windows are [1..size].
ModeSet subsystem_window(int L, Site centre, int size, Coupling coupling);

struct SicProfile {
    Coupling coupling = Coupling::center;
    Boundary boundary = Boundary::open;
    std::vector<int> sizes;
    std::vector<double> mi;  // bits
};

/// Late-time mean of I(A:R) over the protocol's sample times. The setup's
/// reference_site is used when set, otherwise the coupling's default.
SicProfile sic_profile(const QuenchSetup& setup, std::span<const int> sizes, Coupling coupling,
                       const SamplingProtocol& protocol);

inline constexpr int kSicJumpSize = 5;

double sic_jump(const SicProfile& profile, int size = kSicJumpSize);

}  // namespace gaa
