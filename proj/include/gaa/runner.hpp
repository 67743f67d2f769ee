#pragma once

#include "gaa/observables.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaa {

enum class ExperimentKind { spectrum, ee, velocity, saturation, scaling, sic_profile, sic_jump, fractions, verify };

std::string_view to_string(ExperimentKind kind);
/// Accepts both "sic_profile" and "sic-profile" spellings.
std::optional<ExperimentKind> parse_kind(std::string_view name);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::spectrum;

    // Sweep axes; single-valued axes are one-element vectors.
    std::vector<int> L{200};
    std::vector<double> a{0.0};
    std::vector<double> lambda{0.0};

    double t = 1.0;
    Frequency b = Frequency::golden();
    double phi = 0.0;
    Boundary boundary = Boundary::open;

    InitialKind initial = InitialKind::neel;
    std::vector<int> occupations;  // custom initial state
    int realizations = 20;         // random product averaging

    SamplingProtocol protocol;
    std::vector<double> times;           // ee / verify; defaults depend on kind
    std::vector<int> sizes{80, 120, 160, 200, 240};  // scaling
    std::vector<int> subsystem_sizes;    // sic_profile; empty means 0..L
    Coupling coupling = Coupling::center;

    std::uint64_t seed = 0;
    int workers = 1;
    std::string output_dir = "out";

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

/// Parses a JSON run description. Unknown keys are rejected, defaults are
/// filled in and every sweep point is validated. When `kind` is given it must
/// agree with any "experiment" key in the document.
ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> kind = std::nullopt);

/// Fully-resolved JSON document; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

LatticeSpec lattice_at(const ExperimentConfig& config, int L, double a, double lambda);

struct PointFailure {
    std::string point;
    std::string error;
};

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<PointFailure> failures;
    bool verification_passed = true;
    std::string summary;
};

/// Executes the experiment and writes its CSV files plus manifest.json into
/// config.output_dir. Output is independent of the worker count.
RunResult run(const ExperimentConfig& config);

/// Runs tasks on up to `workers` threads; results keep the task order.
/// A task that throws leaves its slot empty and records the message.
template <typename T>
struct TaskOutcome {
    std::optional<T> value;
    std::string error;
};

std::vector<TaskOutcome<std::vector<double>>> run_tasks(const std::vector<std::function<std::vector<double>()>>& tasks,
                                                        int workers);

/// Deterministic per-task seed derived from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Formats with 12 significant digits.
std::string format_number(double value);

}  // namespace gaa
