// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with
// the measured quantity, its threshold and the wall time spent on it.

#include "gaa/observables.hpp"
#include "gaa/oracle.hpp"
#include "gaa/runner.hpp"
#include "gaa/spectral.hpp"

#include <fmt/format.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

using namespace gaa;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = budget_seconds <= 0.0 || elapsed < budget_seconds;
    const bool ok = out.passed && in_time;
    if (!ok) ++failures;
    const std::string budget = budget_seconds > 0.0 ? fmt::format(" (budget {:.0f} s)", budget_seconds) : "";
    fmt::print("AC{:<2} [{}] {}: {} [{:.1f} s{}]\n", id, ok ? "PASS" : "FAIL", name, out.detail, elapsed, budget);
    std::fflush(stdout);
}

QuenchSetup chain(int L, double a, double lambda, std::optional<Site> ref = std::nullopt) {
    QuenchSetup s;
    s.spec.L = L;
    s.spec.a = a;
    s.spec.lambda = lambda;
    s.reference_site = ref;
    return s;
}

std::vector<double> lambda_grid(double step) {
    std::vector<double> out;
    const int n = static_cast<int>(std::lround(2.0 / step));
    for (int k = 0; k <= n; ++k) out.push_back(std::round(k * step * 1e12) / 1e12);
    return out;
}

std::vector<int> all_sizes(int L) {
    std::vector<int> s(static_cast<std::size_t>(L + 1));
    std::iota(s.begin(), s.end(), 0);
    return s;
}

const SamplingProtocol kProtocol{};  // fit window [0, 20], burn-in 10000, 1000 samples, dt ~ U[5, 15]

std::vector<SicProfile> computed_profiles;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

int main() {
    criterion(1, "oracle equivalence, half-chain EE (L=8, a=0.3, lambda=1)", 10.0, [] {
        const double times[] = {0.5, 1.0, 2.0, 5.0, 10.0};
        const double dev = oracle::half_chain_entropy_deviation(chain(8, 0.3, 1.0), times);
        return Outcome{dev <= 1e-8, fmt::format("max |dS| = {:.2e} <= 1e-8", dev)};
    });

    criterion(2, "oracle equivalence, SIC (L=6, E=3, a=0, lambda=0.5)", 30.0, [] {
        const double times[] = {1.0, 3.0, 7.0};
        std::vector<ModeSet> regions;
        for (int n = 0; n <= 6; ++n) regions.push_back(subsystem_window(6, Site{3}, n, Coupling::center));
        const double dev = oracle::mutual_information_deviation(chain(6, 0.0, 0.5, Site{3}), times, regions);
        return Outcome{dev <= 1e-8, fmt::format("max |dI| = {:.2e} <= 1e-8", dev)};
    });

    criterion(3, "AA sharp drop vs GAA crossover in S_sat (L=200)", 300.0, [] {
        const double aa = saturation_value(chain(200, 0.0, 1.5), kProtocol) / saturation_value(chain(200, 0.0, 0.5), kProtocol);
        const double gaa = saturation_value(chain(200, 0.3, 1.5), kProtocol) / saturation_value(chain(200, 0.3, 0.5), kProtocol);
        return Outcome{aa < 0.1 && gaa >= 3.0 * aa,
                       fmt::format("AA ratio {:.4f} < 0.1, GAA ratio {:.4f}, GAA/AA = {:.2f} >= 3", aa, gaa, gaa / aa)};
    });

    criterion(4, "scaling exponents over L in {80..240}", 1200.0, [] {
        const std::vector<int> sizes{80, 120, 160, 200, 240};
        const auto ext = scaling_exponent(chain(0, 0.0, 0.5), sizes, kProtocol);
        const auto loc = scaling_exponent(chain(0, 0.0, 1.5), sizes, kProtocol);
        const auto me = scaling_exponent(chain(0, 0.3, 1.0), sizes, kProtocol);
        const bool ok = ext.alpha >= 0.8 && ext.alpha <= 1.1 && loc.alpha < 0.2 && me.alpha >= 0.8 && me.alpha <= 1.1;
        return Outcome{ok, fmt::format("alpha(a=0,l=0.5) = {:.3f}+-{:.3f} in [0.8,1.1], alpha(a=0,l=1.5) = {:.3f}+-{:.3f} < 0.2, "
                                       "alpha(a=0.3,l=1.0) = {:.3f}+-{:.3f} in [0.8,1.1]",
                                       ext.alpha, ext.standard_error, loc.alpha, loc.standard_error, me.alpha,
                                       me.standard_error)};
    });

    criterion(5, "S_sat tracks n_e (a=0.3, L=200)", 600.0, [] {
        std::vector<double> s, ne;
        for (double lambda : lambda_grid(0.1)) {
            const auto setup = chain(200, 0.3, lambda);
            s.push_back(saturation_value(setup, kProtocol));
            ne.push_back(analyze_spectrum(setup.spec).n_e);
        }
        const double r = pearson(s, ne);
        return Outcome{r > 0.95, fmt::format("pearson r = {:.4f} > 0.95", r)};
    });

    criterion(7, "SIC ramp vs step (a=0, L=100, center coupling)", 600.0, [] {
        const auto ramp = sic_profile(chain(100, 0.0, 0.5), all_sizes(100), Coupling::center, kProtocol);
        const auto step = sic_profile(chain(100, 0.0, 1.5), all_sizes(100), Coupling::center, kProtocol);
        computed_profiles.push_back(ramp);
        computed_profiles.push_back(step);
        std::vector<double> x, y;
        for (int n = 10; n <= 90; ++n) {
            x.push_back(n);
            y.push_back(ramp.mi[static_cast<std::size_t>(n)]);
        }
        const double r2 = linear_fit(x, y).r_squared;
        const double jump_ramp = sic_jump(ramp), jump_step = sic_jump(step);
        return Outcome{jump_ramp < 0.3 && r2 > 0.95 && jump_step > 1.5,
                       fmt::format("lambda=0.5: I(5) = {:.4f} < 0.3, R^2[10,90] = {:.4f} > 0.95; lambda=1.5: I(5) = {:.4f} > 1.5",
                                   jump_ramp, r2, jump_step)};
    });

    criterion(8, "SIC_jump tracks n_l (a=0.3, L=100)", 900.0, [] {
        std::vector<double> jump, nl;
        const std::vector<int> sizes{0, kSicJumpSize, 100};
        for (double lambda : lambda_grid(0.1)) {
            const auto setup = chain(100, 0.3, lambda);
            const auto profile = sic_profile(setup, sizes, Coupling::center, kProtocol);
            computed_profiles.push_back(profile);
            jump.push_back(sic_jump(profile));
            nl.push_back(analyze_spectrum(setup.spec).n_l);
        }
        const double r = pearson(jump, nl);
        return Outcome{r > 0.9, fmt::format("pearson r = {:.4f} > 0.9", r)};
    });

    criterion(6, "SIC endpoints and monotonicity of every computed profile", 0.0, [] {
        // Add an edge-coupled profile in the mobility-edge phase to the set.
        computed_profiles.push_back(sic_profile(chain(100, 0.3, 1.0), all_sizes(100), Coupling::edge, kProtocol));
        double worst_full = 0.0, worst_empty = 0.0, worst_drop = 0.0;
        for (const auto& p : computed_profiles) {
            for (std::size_t k = 0; k < p.sizes.size(); ++k) {
                if (p.sizes[k] == 0) worst_empty = std::max(worst_empty, std::abs(p.mi[k]));
                if (p.sizes[k] == 100) worst_full = std::max(worst_full, std::abs(p.mi[k] - 2.0));
                if (k > 0) worst_drop = std::max(worst_drop, p.mi[k - 1] - p.mi[k]);
            }
        }
        return Outcome{worst_full <= 1e-6 && worst_empty <= 1e-12 && worst_drop <= 1e-3,
                       fmt::format("{} profiles: max |I(L)-2| = {:.1e} <= 1e-6, max |I(0)| = {:.1e}, largest drop {:.1e} <= 1e-3",
                                   computed_profiles.size(), worst_full, worst_empty, worst_drop)};
    });

    criterion(9, "v_S decreases monotonically with lambda (L=200)", 0.0, [] {
        std::string detail;
        bool ok = true;
        for (double a : {0.0, 0.3}) {
            std::vector<double> v;
            for (double lambda : lambda_grid(0.2)) v.push_back(early_velocity(chain(200, a, lambda), kProtocol));
            double worst = 0.0;  // largest v_{k+1} / v_k - 1
            bool max_at_zero = true;
            for (std::size_t k = 1; k < v.size(); ++k) {
                worst = std::max(worst, v[k] / v[k - 1] - 1.0);
                max_at_zero = max_at_zero && v[k] <= v[0];
            }
            ok = ok && worst <= 0.02 && max_at_zero;
            detail += fmt::format("a={}: v_S(0) = {:.4f} is max: {}, largest relative rise {:.2e} <= 0.02; ", a, v[0],
                                  max_at_zero ? "yes" : "no", worst);
        }
        return Outcome{ok, detail};
    });

    criterion(10, "byte-identical reruns, workers 1 vs 4", 0.0, [] {
        const std::string base = R"({"experiment": "saturation", "L": [40, 60], "a": [0, 0.3], "lambda": [0.5, 1.0, 1.5],
            "initial": "random", "realizations": 3, "seed": 2024, "protocol": {"n_samples": 100}, "output": ")";
        std::vector<std::string> bodies;
        for (int workers : {1, 1, 4}) {
            const auto dir = std::filesystem::temp_directory_path() / fmt::format("gaa_acceptance_{}", bodies.size());
            std::filesystem::remove_all(dir);
            auto config = parse_config(base + dir.string() + "\"}");
            config.workers = workers;
            run(config);
            bodies.push_back(slurp(dir / "saturation.csv") + slurp(dir / "correlation.csv"));
        }
        const bool ok = !bodies[0].empty() && bodies[0] == bodies[1] && bodies[0] == bodies[2];
        return Outcome{ok, fmt::format("rerun identical: {}, workers 4 identical: {}", bodies[0] == bodies[1],
                                       bodies[0] == bodies[2])};
    });

    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
