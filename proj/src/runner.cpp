#include "gaa/runner.hpp"

#include "gaa/oracle.hpp"
#include "gaa/spectral.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#ifndef GAA_VERSION
#define GAA_VERSION "unknown"
#endif

namespace gaa {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::spectrum, "spectrum"},     {ExperimentKind::ee, "ee"},
    {ExperimentKind::velocity, "velocity"},     {ExperimentKind::saturation, "saturation"},
    {ExperimentKind::scaling, "scaling"},       {ExperimentKind::sic_profile, "sic_profile"},
    {ExperimentKind::sic_jump, "sic_jump"},     {ExperimentKind::fractions, "fractions"},
    {ExperimentKind::verify, "verify"},
};

const std::set<std::string> kTopKeys = {"experiment", "L",        "a",     "lambda",  "t",
                                        "b",          "phi",      "boundary", "initial", "occupations",
                                        "realizations", "protocol", "times", "sizes",   "subsystem_sizes",
                                        "coupling",   "seed",     "workers", "output"};
const std::set<std::string> kProtocolKeys = {"fit_start", "fit_end",       "fit_dt", "burn_in",
                                             "n_samples", "mean_interval", "jitter"};

constexpr double kVerifyTolerance = 1e-8;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key, "expected a number, got " + v.dump());
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    fail(key, "expected an integer, got " + v.dump());
}

double snap(double v) { return std::round(v * 1e12) / 1e12; }

/// number | [numbers] | {"start", "stop", "step"} (inclusive)
std::vector<double> as_axis(const json& v, const std::string& key) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& x : v) out.push_back(as_number(x, key));
    } else if (v.is_object()) {
        for (const auto& [k, _] : v.items())
            if (k != "start" && k != "stop" && k != "step") fail(key, "unknown range field '" + k + "'");
        if (!v.contains("start") || !v.contains("stop") || !v.contains("step"))
            fail(key, "range needs start, stop and step");
        const double start = as_number(v["start"], key), stop = as_number(v["stop"], key),
                     step = as_number(v["step"], key);
        if (!(step > 0.0) || stop < start) fail(key, "invalid range");
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long k = 0; k <= n; ++k) out.push_back(snap(start + static_cast<double>(k) * step));
    } else {
        fail(key, "expected a number, list or range");
    }
    if (out.empty()) fail(key, "sweep range is empty");
    for (double x : out)
        if (!std::isfinite(x)) fail(key, "values must be finite");
    return out;
}

std::vector<int> as_int_axis(const json& v, const std::string& key) {
    std::vector<int> out;
    for (double x : as_axis(v, key)) {
        if (std::floor(x) != x) fail(key, "expected integers");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

template <typename T>
std::vector<T> canonical(std::vector<T> v) {
    std::ranges::sort(v);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Frequency parse_frequency(const json& v) {
    if (v.is_number()) return Frequency::irrational(v.get<double>());
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        const auto slash = s.find('/');
        std::int64_t p = 0, q = 0;
        if (slash != std::string::npos) {
            const char* begin = s.data();
            const auto r1 = std::from_chars(begin, begin + slash, p);
            const auto r2 = std::from_chars(begin + slash + 1, begin + s.size(), q);
            if (r1.ec == std::errc{} && r1.ptr == begin + slash && r2.ec == std::errc{} &&
                r2.ptr == begin + s.size() && q > 0)
                return Frequency::rational(p, q);
        }
        fail("b", "expected a number or a fraction \"p/q\", got \"" + s + "\"");
    }
    fail("b", "expected a number or a fraction string");
}

std::string initial_name(InitialKind kind) {
    switch (kind) {
        case InitialKind::neel: return "neel";
        case InitialKind::domain_wall: return "domain_wall";
        case InitialKind::random_product: return "random";
        case InitialKind::custom: return "custom";
    }
    return "neel";
}

bool half_chain_kind(ExperimentKind k) {
    return k == ExperimentKind::ee || k == ExperimentKind::velocity || k == ExperimentKind::saturation ||
           k == ExperimentKind::scaling;
}

bool sic_kind(ExperimentKind k) { return k == ExperimentKind::sic_profile || k == ExperimentKind::sic_jump; }

void check_config(const ExperimentConfig& c) {
    const auto single = [&](std::size_t n, const char* key) {
        if (n != 1) fail(key, std::string("experiment '") + std::string(to_string(c.kind)) + "' takes a single value");
    };
    switch (c.kind) {
        case ExperimentKind::spectrum:
        case ExperimentKind::ee:
        case ExperimentKind::verify:
            single(c.L.size(), "L");
            single(c.a.size(), "a");
            single(c.lambda.size(), "lambda");
            break;
        case ExperimentKind::velocity:
        case ExperimentKind::fractions:
        case ExperimentKind::sic_profile:
        case ExperimentKind::sic_jump:
            single(c.L.size(), "L");
            break;
        case ExperimentKind::scaling:
            single(c.L.size(), "L");  // unused; sizes drive the fit
            break;
        case ExperimentKind::saturation: break;
    }

    const std::vector<int> lattice_sizes = c.kind == ExperimentKind::scaling ? c.sizes : c.L;
    for (int L : lattice_sizes) {
        for (double a : c.a)
            for (double lam : c.lambda) {
                try {
                    validate(lattice_at(c, L, a, lam));
                } catch (const std::exception& e) {
                    fail(c.kind == ExperimentKind::scaling ? "sizes" : "L", e.what());
                }
            }
        if (half_chain_kind(c.kind) && L % 2 != 0)
            fail(c.kind == ExperimentKind::scaling ? "sizes" : "L", "half filling needs even L, got " + std::to_string(L));
    }
    if (c.kind == ExperimentKind::scaling && c.sizes.size() < 3) fail("sizes", "scaling needs at least three sizes");
    if (c.kind == ExperimentKind::verify) {
        const int L = c.L.front();
        if (L % 2 != 0 || L + 1 > oracle::kMaxModes)
            fail("L", "verify needs an even L with L + 1 <= " + std::to_string(oracle::kMaxModes));
    }
    if (c.initial == InitialKind::custom) {
        if (c.L.size() != 1 || static_cast<int>(c.occupations.size()) != c.L.front())
            fail("occupations", "custom initial state needs one occupation per site of a single L");
        for (int v : c.occupations)
            if (v != 0 && v != 1) fail("occupations", "entries must be 0 or 1");
        if (!sic_kind(c.kind) &&
            std::accumulate(c.occupations.begin(), c.occupations.end(), 0) != c.L.front() / 2)
            fail("occupations", "custom initial state must hold exactly L/2 particles");
    }
    if (c.realizations < 1) fail("realizations", "must be positive");
    if (c.workers < 1) fail("workers", "must be positive");
    if ((c.kind == ExperimentKind::ee || c.kind == ExperimentKind::verify) && c.times.empty())
        fail("times", "at least one time is required");
    for (double t : c.times)
        if (t < 0.0) fail("times", "times must be non-negative");
    for (int s : c.subsystem_sizes)
        if (s < 0 || s > c.L.front()) fail("subsystem_sizes", "size " + std::to_string(s) + " outside 0..L");
    try {
        validate(c.protocol);
    } catch (const std::exception& e) {
        fail("protocol", e.what());
    }
}

}  // namespace

bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

std::string_view to_string(ExperimentKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
    std::string normalized(name);
    std::ranges::replace(normalized, '-', '_');
    for (const auto& [k, n] : kKindNames)
        if (n == normalized) return k;
    return std::nullopt;
}

LatticeSpec lattice_at(const ExperimentConfig& config, int L, double a, double lambda) {
    LatticeSpec spec;
    spec.L = L;
    spec.t = config.t;
    spec.lambda = lambda;
    spec.a = a;
    spec.b = config.b;
    spec.phi = config.phi;
    spec.boundary = config.boundary;
    return spec;
}

ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> kind) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : doc.items())
        if (!kTopKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");

    ExperimentConfig c;
    if (doc.contains("experiment")) {
        const auto& v = doc["experiment"];
        if (!v.is_string()) fail("experiment", "expected a string");
        const auto k = parse_kind(v.get<std::string>());
        if (!k) fail("experiment", "unknown experiment '" + v.get<std::string>() + "'");
        if (kind && *kind != *k)
            fail("experiment", "config names '" + std::string(to_string(*k)) + "' but '" +
                                   std::string(to_string(*kind)) + "' was requested");
        c.kind = *k;
    } else if (kind) {
        c.kind = *kind;
    } else {
        fail("experiment", "missing");
    }

    if (c.kind == ExperimentKind::verify) {
        c.L = {8};
        c.a = {0.3};
        c.lambda = {1.0};
        c.times = {0.5, 1.0, 2.0, 5.0, 10.0};
    } else if (c.kind == ExperimentKind::ee) {
        c.times = as_axis(json{{"start", 0.0}, {"stop", 50.0}, {"step", 0.5}}, "times");
    }

    if (doc.contains("L")) c.L = canonical(as_int_axis(doc["L"], "L"));
    if (doc.contains("a")) c.a = canonical(as_axis(doc["a"], "a"));
    if (doc.contains("lambda")) c.lambda = canonical(as_axis(doc["lambda"], "lambda"));
    if (doc.contains("t")) c.t = as_number(doc["t"], "t");
    if (doc.contains("b")) c.b = parse_frequency(doc["b"]);
    if (doc.contains("phi")) c.phi = as_number(doc["phi"], "phi");
    if (doc.contains("boundary")) {
        const auto& v = doc["boundary"];
        if (v == "open") c.boundary = Boundary::open;
        else if (v == "periodic") c.boundary = Boundary::periodic;
        else fail("boundary", "expected \"open\" or \"periodic\"");
    }
    if (doc.contains("initial")) {
        const auto& v = doc["initial"];
        if (!v.is_string()) fail("initial", "expected a string");
        const auto s = v.get<std::string>();
        if (s == "neel") c.initial = InitialKind::neel;
        else if (s == "domain_wall") c.initial = InitialKind::domain_wall;
        else if (s == "random") c.initial = InitialKind::random_product;
        else if (s == "custom") c.initial = InitialKind::custom;
        else if (!s.empty() && s.find_first_not_of("01") == std::string::npos) {
            c.initial = InitialKind::custom;
            for (char ch : s) c.occupations.push_back(ch == '1' ? 1 : 0);
        } else fail("initial", "expected neel, domain_wall, random, custom or a 0/1 string");
    }
    if (doc.contains("occupations")) {
        const auto& v = doc["occupations"];
        if (!v.is_array()) fail("occupations", "expected a list of 0/1");
        c.occupations.clear();
        for (const auto& x : v) c.occupations.push_back(as_int(x, "occupations"));
        if (c.initial != InitialKind::custom) fail("occupations", "only valid with initial = custom");
    }
    if (doc.contains("realizations")) c.realizations = as_int(doc["realizations"], "realizations");
    if (doc.contains("protocol")) {
        const auto& p = doc["protocol"];
        if (!p.is_object()) fail("protocol", "expected an object");
        for (const auto& [key, _] : p.items())
            if (!kProtocolKeys.contains(key)) throw ConfigError("unknown config key 'protocol." + key + "'");
        auto& pr = c.protocol;
        if (p.contains("fit_start")) pr.fit_start = as_number(p["fit_start"], "protocol.fit_start");
        if (p.contains("fit_end")) pr.fit_end = as_number(p["fit_end"], "protocol.fit_end");
        if (p.contains("fit_dt")) pr.fit_dt = as_number(p["fit_dt"], "protocol.fit_dt");
        if (p.contains("burn_in")) pr.burn_in = as_number(p["burn_in"], "protocol.burn_in");
        if (p.contains("n_samples")) pr.n_samples = as_int(p["n_samples"], "protocol.n_samples");
        if (p.contains("mean_interval")) pr.mean_interval = as_number(p["mean_interval"], "protocol.mean_interval");
        if (p.contains("jitter")) pr.jitter = as_number(p["jitter"], "protocol.jitter");
    }
    if (doc.contains("times")) c.times = canonical(as_axis(doc["times"], "times"));
    if (doc.contains("sizes")) c.sizes = canonical(as_int_axis(doc["sizes"], "sizes"));
    if (doc.contains("subsystem_sizes")) c.subsystem_sizes = canonical(as_int_axis(doc["subsystem_sizes"], "subsystem_sizes"));
    if (doc.contains("coupling")) {
        const auto& v = doc["coupling"];
        if (v == "center") c.coupling = Coupling::center;
        else if (v == "edge") c.coupling = Coupling::edge;
        else fail("coupling", "expected \"center\" or \"edge\"");
    }
    if (doc.contains("seed")) {
        const auto& v = doc["seed"];
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            fail("seed", "expected a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    if (doc.contains("workers")) c.workers = as_int(doc["workers"], "workers");
    if (doc.contains("output")) {
        if (!doc["output"].is_string()) fail("output", "expected a path string");
        c.output_dir = doc["output"].get<std::string>();
    }
    c.protocol.seed = c.seed;
    check_config(c);
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    json doc;
    doc["experiment"] = std::string(to_string(c.kind));
    doc["L"] = c.L;
    doc["a"] = c.a;
    doc["lambda"] = c.lambda;
    doc["t"] = c.t;
    if (c.b.exact) doc["b"] = std::to_string(c.b.exact->num) + "/" + std::to_string(c.b.exact->den);
    else doc["b"] = c.b.value;
    doc["phi"] = c.phi;
    doc["boundary"] = c.boundary == Boundary::open ? "open" : "periodic";
    doc["initial"] = initial_name(c.initial);
    if (c.initial == InitialKind::custom) doc["occupations"] = c.occupations;
    doc["realizations"] = c.realizations;
    doc["protocol"] = {{"fit_start", c.protocol.fit_start},         {"fit_end", c.protocol.fit_end},
                       {"fit_dt", c.protocol.fit_dt},               {"burn_in", c.protocol.burn_in},
                       {"n_samples", c.protocol.n_samples},         {"mean_interval", c.protocol.mean_interval},
                       {"jitter", c.protocol.jitter}};
    if (!c.times.empty()) doc["times"] = c.times;
    doc["sizes"] = c.sizes;
    if (!c.subsystem_sizes.empty()) doc["subsystem_sizes"] = c.subsystem_sizes;
    doc["coupling"] = std::string(to_string(c.coupling));
    doc["seed"] = c.seed;
    doc["workers"] = c.workers;
    doc["output"] = c.output_dir;
    return doc.dump(2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 finaliser over a combined key.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::string format_number(double value) { return fmt::format("{:.12g}", value); }

std::vector<TaskOutcome<std::vector<double>>> run_tasks(const std::vector<std::function<std::vector<double>()>>& tasks,
                                                        int workers) {
    std::vector<TaskOutcome<std::vector<double>>> out(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            try {
                out[k].value = tasks[k]();
            } catch (const std::exception& e) {
                out[k].error = e.what();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::max(1, workers));
    if (n == 1 || tasks.size() < 2) {
        work();
        return out;
    }
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < std::min(n, tasks.size()); ++k) pool.emplace_back(work);
    pool.clear();
    return out;
}

namespace {

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : path_(path), file_(path, std::ios::binary | std::ios::trunc) {
        if (!file_) throw std::runtime_error("cannot open " + path.string() + " for writing");
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) file_ << ',';
            file_ << cells[k];
        }
        file_ << '\n';
        if (!file_) throw std::runtime_error("write failed on " + path_.string());
    }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream file_;
};

std::string num(double v) { return format_number(v); }

struct Point {
    double a;
    double lambda;
    int L;
};

std::string describe(const Point& p) { return fmt::format("a={} lambda={} L={}", num(p.a), num(p.lambda), p.L); }

class Experiment {
public:
    explicit Experiment(const ExperimentConfig& config) : c_(config), dir_(config.output_dir) {
        std::filesystem::create_directories(dir_);
    }

    RunResult run() {
        switch (c_.kind) {
            case ExperimentKind::spectrum: spectrum(); break;
            case ExperimentKind::ee: ee(); break;
            case ExperimentKind::velocity: velocity(); break;
            case ExperimentKind::saturation: saturation(); break;
            case ExperimentKind::scaling: scaling(); break;
            case ExperimentKind::sic_profile: sic_profile_run(); break;
            case ExperimentKind::sic_jump: sic_jump_run(); break;
            case ExperimentKind::fractions: fractions(); break;
            case ExperimentKind::verify: verify(); break;
        }
        return std::move(result_);
    }

private:
    CsvWriter open(const std::string& name, const std::vector<std::string>& header) {
        result_.files.push_back(dir_ / name);
        return {dir_ / name, header};
    }

    std::vector<Point> grid(const std::vector<int>& sizes) const {
        std::vector<Point> pts;
        for (double a : c_.a)
            for (double lam : c_.lambda)
                for (int L : sizes) pts.push_back({a, lam, L});
        return pts;
    }

    /// One setup per initial-state realization (random product states only get more than one).
    std::vector<QuenchSetup> setups(const Point& p, std::optional<Site> reference = std::nullopt) const {
        QuenchSetup base{lattice_at(c_, p.L, p.a, p.lambda), {}, reference};
        switch (c_.initial) {
            case InitialKind::neel: base.initial = InitialState::neel(); break;
            case InitialKind::domain_wall: base.initial = InitialState::domain_wall(); break;
            case InitialKind::custom: base.initial = InitialState::custom(c_.occupations); break;
            case InitialKind::random_product: {
                std::vector<QuenchSetup> out;
                for (int k = 0; k < c_.realizations; ++k) {
                    base.initial = InitialState::random_product(derive_seed(c_.seed, static_cast<std::uint64_t>(k)));
                    out.push_back(base);
                }
                return out;
            }
        }
        return {base};
    }

    /// Averages a per-setup vector observable over realizations.
    template <typename F>
    std::vector<double> averaged(const std::vector<QuenchSetup>& list, F&& f) const {
        std::vector<double> acc;
        for (const auto& s : list) {
            const std::vector<double> v = f(s);
            if (acc.empty()) acc.assign(v.size(), 0.0);
            for (std::size_t k = 0; k < v.size(); ++k) acc[k] += v[k];
        }
        for (auto& x : acc) x /= static_cast<double>(list.size());
        return acc;
    }

    std::vector<TaskOutcome<std::vector<double>>> execute(const std::vector<Point>& pts,
                                                         const std::function<std::vector<double>(const Point&)>& f) {
        std::vector<std::function<std::vector<double>()>> tasks;
        for (const auto& p : pts) tasks.emplace_back([&f, p] { return f(p); });
        auto out = run_tasks(tasks, c_.workers);
        for (std::size_t k = 0; k < out.size(); ++k)
            if (!out[k].value) result_.failures.push_back({describe(pts[k]), out[k].error});
        return out;
    }

    void spectrum() {
        const auto spec = lattice_at(c_, c_.L.front(), c_.a.front(), c_.lambda.front());
        const auto data = analyze_spectrum(spec);
        auto csv = open("spectrum.csv", {"index", "energy", "ipr", "label"});
        for (Eigen::Index k = 0; k < data.energies.size(); ++k)
            csv.row({std::to_string(k), num(data.energies[k]), num(data.ipr[k]),
                     std::string(to_string(data.labels[static_cast<std::size_t>(k)]))});
        result_.summary = fmt::format("{} states, n_e = {}, n_l = {}, phase {}", data.energies.size(), num(data.n_e),
                                      num(data.n_l), to_string(phase_region(spec, data.energies)));
    }

    void ee() {
        const Point p{c_.a.front(), c_.lambda.front(), c_.L.front()};
        auto out = execute({p}, [this](const Point& pt) {
            return averaged(setups(pt), [this](const QuenchSetup& s) { return ee_timeseries(s, c_.times).entropies; });
        });
        auto csv = open("ee_timeseries.csv", {"time", "entropy_nats"});
        if (!out[0].value) return;
        for (std::size_t k = 0; k < c_.times.size(); ++k) csv.row({num(c_.times[k]), num((*out[0].value)[k])});
    }

    void velocity() {
        const auto pts = grid(c_.L);
        auto out = execute(pts, [this](const Point& pt) {
            return averaged(setups(pt), [this](const QuenchSetup& s) {
                return std::vector<double>{early_velocity(s, c_.protocol)};
            });
        });
        auto csv = open("velocity.csv", {"a", "lambda", "v_s"});
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (out[k].value) csv.row({num(pts[k].a), num(pts[k].lambda), num((*out[k].value)[0])});
    }

    void saturation() {
        const auto pts = grid(c_.L);
        auto out = execute(pts, [this](const Point& pt) {
            auto v = averaged(setups(pt), [this](const QuenchSetup& s) {
                return std::vector<double>{saturation_value(s, c_.protocol)};
            });
            v.push_back(analyze_spectrum(lattice_at(c_, pt.L, pt.a, pt.lambda)).n_e);
            return v;
        });
        auto csv = open("saturation.csv", {"a", "lambda", "L", "s_sat"});
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (out[k].value) csv.row({num(pts[k].a), num(pts[k].lambda), std::to_string(pts[k].L), num((*out[k].value)[0])});

        // S_sat against n_e along each lambda sweep.
        if (c_.lambda.size() < 3) return;
        auto corr = open("correlation.csv", {"figure", "pearson_r"});
        for (double a : c_.a)
            for (int L : c_.L) {
                std::vector<double> s, ne;
                for (std::size_t k = 0; k < pts.size(); ++k)
                    if (pts[k].a == a && pts[k].L == L && out[k].value) {
                        s.push_back((*out[k].value)[0]);
                        ne.push_back((*out[k].value)[1]);
                    }
                const auto label = fmt::format("s_sat_vs_n_e[a={};L={}]", num(a), L);
                try {
                    corr.row({label, num(pearson(s, ne))});
                } catch (const std::exception& e) {
                    result_.failures.push_back({label, e.what()});
                }
            }
    }

    void scaling() {
        const auto pts = grid(c_.sizes);
        auto out = execute(pts, [this](const Point& pt) {
            return averaged(setups(pt), [this](const QuenchSetup& s) {
                return std::vector<double>{saturation_value(s, c_.protocol)};
            });
        });
        auto csv = open("scaling.csv", {"a", "lambda", "alpha", "stderr"});
        for (double a : c_.a)
            for (double lam : c_.lambda) {
                std::vector<int> sizes;
                std::vector<double> values;
                bool complete = true;
                for (std::size_t k = 0; k < pts.size(); ++k)
                    if (pts[k].a == a && pts[k].lambda == lam) {
                        if (!out[k].value) complete = false;
                        else {
                            sizes.push_back(pts[k].L);
                            values.push_back((*out[k].value)[0]);
                        }
                    }
                if (!complete) continue;
                try {
                    const auto fit = fit_scaling(sizes, values);
                    csv.row({num(a), num(lam), num(fit.alpha), num(fit.standard_error)});
                } catch (const std::exception& e) {
                    result_.failures.push_back({fmt::format("a={} lambda={}", num(a), num(lam)), e.what()});
                }
            }
    }

    std::vector<int> profile_sizes() const {
        if (!c_.subsystem_sizes.empty()) return c_.subsystem_sizes;
        std::vector<int> sizes(static_cast<std::size_t>(c_.L.front() + 1));
        std::iota(sizes.begin(), sizes.end(), 0);
        return sizes;
    }

    std::vector<double> profile_at(const Point& pt, const std::vector<int>& sizes) const {
        const auto ref = reference_site(c_.coupling, pt.L);
        return averaged(setups(pt, ref), [&](const QuenchSetup& s) {
            return sic_profile(s, sizes, c_.coupling, c_.protocol).mi;
        });
    }

    void sic_profile_run() {
        const auto pts = grid(c_.L);
        const auto sizes = profile_sizes();
        auto out = execute(pts, [&](const Point& pt) { return profile_at(pt, sizes); });
        auto csv = open("sic_profile.csv", {"coupling", "boundary", "a", "lambda", "size_A", "mi_bits"});
        const std::string coupling(to_string(c_.coupling));
        const std::string boundary = c_.boundary == Boundary::open ? "open" : "periodic";
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (!out[k].value) continue;
            for (std::size_t j = 0; j < sizes.size(); ++j)
                csv.row({coupling, boundary, num(pts[k].a), num(pts[k].lambda), std::to_string(sizes[j]),
                         num((*out[k].value)[j])});
        }
    }

    void sic_jump_run() {
        const auto pts = grid(c_.L);
        const std::vector<int> sizes{kSicJumpSize};
        auto out = execute(pts, [&](const Point& pt) {
            auto v = profile_at(pt, sizes);
            v.push_back(analyze_spectrum(lattice_at(c_, pt.L, pt.a, pt.lambda)).n_l);
            return v;
        });
        auto csv = open("sic_jump.csv", {"a", "lambda", "L", "sic_jump", "n_l"});
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (out[k].value)
                csv.row({num(pts[k].a), num(pts[k].lambda), std::to_string(pts[k].L), num((*out[k].value)[0]),
                         num((*out[k].value)[1])});

        if (c_.lambda.size() < 3) return;
        auto corr = open("correlation.csv", {"figure", "pearson_r"});
        for (double a : c_.a) {
            std::vector<double> jump, nl;
            for (std::size_t k = 0; k < pts.size(); ++k)
                if (pts[k].a == a && out[k].value) {
                    jump.push_back((*out[k].value)[0]);
                    nl.push_back((*out[k].value)[1]);
                }
            const auto label = fmt::format("sic_jump_vs_n_l[a={};L={}]", num(a), c_.L.front());
            try {
                corr.row({label, num(pearson(jump, nl))});
            } catch (const std::exception& e) {
                result_.failures.push_back({label, e.what()});
            }
        }
    }

    void fractions() {
        const auto pts = grid(c_.L);
        auto out = execute(pts, [this](const Point& pt) {
            const auto data = analyze_spectrum(lattice_at(c_, pt.L, pt.a, pt.lambda));
            return std::vector<double>{data.n_e, data.n_l};
        });
        auto csv = open("fractions.csv", {"a", "lambda", "n_e", "n_l"});
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (out[k].value) csv.row({num(pts[k].a), num(pts[k].lambda), num((*out[k].value)[0]), num((*out[k].value)[1])});
    }

    void verify() {
        const Point p{c_.a.front(), c_.lambda.front(), c_.L.front()};
        auto csv = open("verify.csv", {"check", "max_abs_diff", "tolerance", "passed"});
        std::string summary;
        const auto record = [&](const std::string& name, double diff) {
            const bool ok = diff <= kVerifyTolerance;
            result_.verification_passed = result_.verification_passed && ok;
            csv.row({name, num(diff), num(kVerifyTolerance), ok ? "true" : "false"});
            summary += fmt::format("{}: max |diff| = {:.3e} ({})\n", name, diff, ok ? "ok" : "FAILED");
        };

        double ee_diff = 0.0;
        for (const auto& s : setups(p)) ee_diff = std::max(ee_diff, oracle::half_chain_entropy_deviation(s, c_.times));
        record("half_chain_entropy", ee_diff);

        const auto ref = reference_site(Coupling::center, p.L);
        std::vector<ModeSet> regions;
        for (int n = 0; n <= p.L; ++n) regions.push_back(subsystem_window(p.L, ref, n, Coupling::center));
        double mi_diff = 0.0;
        for (const auto& s : setups(p, ref))
            mi_diff = std::max(mi_diff, oracle::mutual_information_deviation(s, c_.times, regions));
        record("mutual_information", mi_diff);
        result_.summary = summary;
    }

    const ExperimentConfig& c_;
    std::filesystem::path dir_;
    RunResult result_;
};

}  // namespace

RunResult run(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunResult result = Experiment(config).run();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest;
    manifest["config"] = json::parse(serialize_config(config));
    manifest["seed"] = config.seed;
    manifest["code_version"] = GAA_VERSION;
    manifest["workers"] = config.workers;
    manifest["wall_time_seconds"] = wall;
    manifest["outputs"] = json::array();
    for (const auto& f : result.files) manifest["outputs"].push_back(f.filename().string());
    manifest["failures"] = json::array();
    for (const auto& f : result.failures) manifest["failures"].push_back({{"point", f.point}, {"error", f.error}});
    if (config.kind == ExperimentKind::verify) manifest["verification_passed"] = result.verification_passed;

    const auto path = std::filesystem::path(config.output_dir) / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << manifest.dump(2) << '\n';
    result.files.push_back(path);
    return result;
}

}  // namespace gaa
