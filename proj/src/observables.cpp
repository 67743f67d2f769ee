#include "gaa/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace gaa {

void validate(const SamplingProtocol& p) {
    if (p.fit_start < 0.0) throw std::invalid_argument("fit window must start at t >= 0");
    if (!(p.fit_end > p.fit_start)) throw std::invalid_argument("fit window is empty");
    if (!(p.fit_dt > 0.0)) throw std::invalid_argument("fit_dt must be positive");
    if (p.burn_in < 0.0) throw std::invalid_argument("burn_in must be non-negative");
    if (p.n_samples < 2) throw std::invalid_argument("n_samples must be at least 2");
    if (!(p.jitter >= 0.0 && p.mean_interval > p.jitter))
        throw std::invalid_argument("need mean_interval > jitter >= 0");
}

std::vector<double> fit_times(const SamplingProtocol& p) {
    validate(p);
    std::vector<double> times;
    const auto steps = static_cast<long>(std::floor((p.fit_end - p.fit_start) / p.fit_dt + 1e-9));
    for (long k = 0; k <= steps; ++k) times.push_back(p.fit_start + static_cast<double>(k) * p.fit_dt);
    return times;
}

std::vector<double> saturation_times(const SamplingProtocol& p) {
    validate(p);
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> spacing(p.mean_interval - p.jitter, p.mean_interval + p.jitter);
    std::vector<double> times(static_cast<std::size_t>(p.n_samples));
    double t = p.burn_in;
    for (auto& s : times) {
        s = t;
        t += spacing(rng);
    }
    return times;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("linear_fit: length mismatch");
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) throw std::invalid_argument("linear_fit: need at least two points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] - (fit.slope * x[k] + fit.intercept);
        ssr += r * r;
    }
    if (x.size() > 2) fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson: need at least three points");
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw std::invalid_argument("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

void require_half_chain(const QuenchSetup& setup) {
    if (setup.reference_site) throw std::invalid_argument("half-chain entropy expects no reference mode");
    validate(setup);
}

}  // namespace

EETimeSeries ee_timeseries(const QuenchSetup& setup, std::span<const double> times) {
    require_half_chain(setup);
    const QuenchEvolution quench(initial_correlation(setup), build_hamiltonian(setup.spec));
    const auto half = left_half(setup.spec.L);
    EETimeSeries out;
    out.times.assign(times.begin(), times.end());
    out.entropies.reserve(times.size());
    for (double t : times) out.entropies.push_back(quench.entropy(t, half, LogBase::natural));
    return out;
}

double early_velocity(const EETimeSeries& series, const SamplingProtocol& protocol) {
    if (series.times.size() != series.entropies.size()) throw std::invalid_argument("malformed time series");
    std::vector<double> x, y;
    constexpr double slack = 1e-9;
    for (std::size_t k = 0; k < series.times.size(); ++k) {
        const double t = series.times[k];
        if (t >= protocol.fit_start - slack && t <= protocol.fit_end + slack) {
            x.push_back(t);
            y.push_back(series.entropies[k]);
        }
    }
    if (x.size() < 2) throw std::invalid_argument("fewer than two points inside the fit window");
    return linear_fit(x, y).slope;
}

double early_velocity(const QuenchSetup& setup, const SamplingProtocol& protocol) {
    return early_velocity(ee_timeseries(setup, fit_times(protocol)), protocol);
}

double saturation_value(const QuenchSetup& setup, const Eigen::MatrixXd& h, const SamplingProtocol& protocol) {
    require_half_chain(setup);
    const auto times = saturation_times(protocol);
    const QuenchEvolution quench(initial_correlation(setup), h);
    const auto half = left_half(setup.spec.L);
    double sum = 0.0;
    for (double t : times) sum += quench.entropy(t, half, LogBase::natural);
    return sum / static_cast<double>(times.size());
}

double saturation_value(const QuenchSetup& setup, const SamplingProtocol& protocol) {
    return saturation_value(setup, build_hamiltonian(setup.spec), protocol);
}

ScalingFit fit_scaling(std::span<const int> sizes, std::span<const double> s_sat) {
    if (sizes.size() != s_sat.size()) throw std::invalid_argument("fit_scaling: length mismatch");
    if (sizes.size() < 3) throw std::invalid_argument("fit_scaling: need at least three sizes");
    std::vector<double> x, y;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (!(s_sat[k] > 0.0))
            throw UnfittableError("saturation entropy " + std::to_string(s_sat[k]) + " at L = " +
                                  std::to_string(sizes[k]) + " is not positive");
        x.push_back(std::log(static_cast<double>(sizes[k])));
        y.push_back(std::log(s_sat[k]));
    }
    const auto fit = linear_fit(x, y);
    return {fit.slope, fit.slope_stderr, {sizes.begin(), sizes.end()}, {s_sat.begin(), s_sat.end()}};
}

ScalingFit scaling_exponent(const QuenchSetup& family, std::span<const int> sizes, const SamplingProtocol& protocol) {
    std::vector<double> values;
    for (int L : sizes) {
        QuenchSetup setup = family;
        setup.spec.L = L;
        values.push_back(saturation_value(setup, protocol));
    }
    return fit_scaling(sizes, values);
}

std::string_view to_string(Coupling coupling) { return coupling == Coupling::center ? "center" : "edge"; }

Site reference_site(Coupling coupling, int L) { return coupling == Coupling::center ? Site{L / 2} : Site{1}; }

ModeSet subsystem_window(int L, Site centre, int size, Coupling coupling) {
    if (size < 0 || size > L)
        throw std::invalid_argument("subsystem size " + std::to_string(size) + " outside 0.." + std::to_string(L));
    if (size == 0) return {};
    int first = 1;
    if (coupling == Coupling::center) {
        first = centre.value - size / 2;  // ceil((size - 1) / 2) == size / 2
        first = std::clamp(first, 1, L - size + 1);
    }
    ModeSet modes(static_cast<std::size_t>(size));
    std::iota(modes.begin(), modes.end(), ModeIndex{first - 1});
    return modes;
}

SicProfile sic_profile(const QuenchSetup& setup, std::span<const int> sizes, Coupling coupling,
                       const SamplingProtocol& protocol) {
    const int L = setup.spec.L;
    QuenchSetup coupled = setup;
    if (!coupled.reference_site) coupled.reference_site = reference_site(coupling, L);
    validate(coupled);
    for (int s : sizes)
        if (s < 0 || s > L) throw std::invalid_argument("subsystem size " + std::to_string(s) + " exceeds L");

    const auto c0 = initial_correlation(coupled);
    const QuenchEvolution quench(c0, build_hamiltonian(coupled.spec));
    const ModeIndex r = *c0.reference;

    std::vector<ModeSet> regions, joints;
    for (int s : sizes) {
        regions.push_back(subsystem_window(L, *coupled.reference_site, s, coupling));
        joints.push_back(regions.back());
        joints.back().push_back(r);
    }
    const ModeIndex ref[] = {r};

    SicProfile out;
    out.coupling = coupling;
    out.boundary = coupled.spec.boundary;
    out.sizes.assign(sizes.begin(), sizes.end());
    out.mi.assign(sizes.size(), 0.0);
    const auto times = saturation_times(protocol);
    for (double t : times) {
        const Eigen::MatrixXcd orb = quench.orbitals(t);
        const double s_r = block_entropy(QuenchEvolution::block(orb, ref), LogBase::two);
        for (std::size_t k = 0; k < regions.size(); ++k) {
            const double s_a = block_entropy(QuenchEvolution::block(orb, regions[k]), LogBase::two);
            const double s_ar = block_entropy(QuenchEvolution::block(orb, joints[k]), LogBase::two);
            out.mi[k] += s_a + s_r - s_ar;
        }
    }
    for (auto& v : out.mi) v /= static_cast<double>(times.size());
    return out;
}

double sic_jump(const SicProfile& profile, int size) {
    const auto it = std::ranges::find(profile.sizes, size);
    if (it == profile.sizes.end())
        throw std::invalid_argument("profile has no entry for |A| = " + std::to_string(size));
    return profile.mi[static_cast<std::size_t>(it - profile.sizes.begin())];
}

}  // namespace gaa
