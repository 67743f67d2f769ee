#include "gaa/observables.hpp"
#include "gaa/oracle.hpp"
#include "gaa/runner.hpp"
#include "gaa/spectral.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace gaa;

namespace {

InitialState make_initial(const std::string& kind, std::uint64_t seed, const std::optional<std::vector<int>>& occupations) {
    if (occupations) return InitialState::custom(*occupations);
    if (kind == "neel") return InitialState::neel();
    if (kind == "domain_wall") return InitialState::domain_wall();
    if (kind == "random") return InitialState::random_product(seed);
    throw py::value_error("initial must be one of neel, domain_wall, random");
}

std::string initial_name(InitialKind kind) {
    switch (kind) {
        case InitialKind::neel: return "neel";
        case InitialKind::domain_wall: return "domain_wall";
        case InitialKind::random_product: return "random";
        case InitialKind::custom: return "custom";
    }
    return "custom";
}

Coupling parse_coupling(const std::string& name) {
    if (name == "center") return Coupling::center;
    if (name == "edge") return Coupling::edge;
    throw py::value_error("coupling must be 'center' or 'edge'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quench dynamics of the generalized Aubry-Andre chain";
    m.attr("__version__") = GAA_VERSION;

    py::enum_<Boundary>(m, "Boundary").value("open", Boundary::open).value("periodic", Boundary::periodic);

    py::class_<LatticeSpec>(m, "LatticeSpec")
        .def(py::init([](int L, double t, double lam, double a, std::optional<double> b,
                         std::optional<std::pair<std::int64_t, std::int64_t>> b_rational, double phi, Boundary boundary) {
                 LatticeSpec s{L, t, lam, a, Frequency::golden(), phi, boundary};
                 if (b && b_rational) throw py::value_error("give either b or b_rational");
                 if (b) s.b = Frequency::irrational(*b);
                 if (b_rational) s.b = Frequency::rational(b_rational->first, b_rational->second);
                 validate(s);
                 return s;
             }),
             py::arg("L"), py::arg("t") = 1.0, py::arg("lam") = 0.0, py::arg("a") = 0.0, py::arg("b") = py::none(),
             py::arg("b_rational") = py::none(), py::arg("phi") = 0.0, py::arg("boundary") = Boundary::open)
        .def_readonly("L", &LatticeSpec::L)
        .def_readonly("t", &LatticeSpec::t)
        .def_readonly("lam", &LatticeSpec::lambda)
        .def_readonly("a", &LatticeSpec::a)
        .def_readonly("phi", &LatticeSpec::phi)
        .def_readonly("boundary", &LatticeSpec::boundary)
        .def_property_readonly("b", [](const LatticeSpec& s) { return s.b.value; })
        .def("__eq__", [](const LatticeSpec& x, const LatticeSpec& y) { return x == y; })
        .def("__repr__", [](const LatticeSpec& s) {
            return "LatticeSpec(L=" + std::to_string(s.L) + ", lam=" + std::to_string(s.lambda) +
                   ", a=" + std::to_string(s.a) + ")";
        });

    m.def("potential_profile", &potential_profile, py::arg("spec"));
    m.def("build_hamiltonian", &build_hamiltonian, py::arg("spec"));
    m.def("mobility_edge", &mobility_edge, py::arg("spec"));
    m.def("ipr", [](const Eigen::VectorXd& psi) { return ipr(psi); }, py::arg("psi"));

    m.def(
        "analyze_spectrum",
        [](const LatticeSpec& spec) {
            const auto data = analyze_spectrum(spec);
            std::vector<std::string> labels;
            for (auto l : data.labels) labels.emplace_back(to_string(l));
            py::dict out;
            out["energies"] = data.energies;
            out["eigenvectors"] = data.eigenvectors;
            out["ipr"] = data.ipr;
            out["mobility_edge"] = data.mobility_edge;
            out["labels"] = labels;
            out["n_e"] = data.n_e;
            out["n_l"] = data.n_l;
            out["phase"] = std::string(to_string(phase_region(spec, data.energies)));
            return out;
        },
        py::arg("spec"));

    py::class_<QuenchSetup>(m, "QuenchSetup")
        .def(py::init([](const LatticeSpec& spec, const std::string& initial, std::uint64_t seed,
                         std::optional<std::vector<int>> occupations, std::optional<int> reference_site) {
                 QuenchSetup s{spec, make_initial(initial, seed, occupations), std::nullopt};
                 if (reference_site) s.reference_site = Site{*reference_site};
                 validate(s);
                 return s;
             }),
             py::arg("spec"), py::arg("initial") = "neel", py::arg("seed") = 0, py::arg("occupations") = py::none(),
             py::arg("reference_site") = py::none())
        .def_readonly("spec", &QuenchSetup::spec)
        .def_property_readonly("initial", [](const QuenchSetup& s) { return initial_name(s.initial.kind); })
        .def_property_readonly("reference_site", [](const QuenchSetup& s) -> std::optional<int> {
            if (s.reference_site) return s.reference_site->value;
            return std::nullopt;
        });

    m.def("occupations", [](const QuenchSetup& s) { return occupation_pattern(s.initial, s.spec.L); }, py::arg("setup"));
    m.def("initial_correlation", [](const QuenchSetup& s) { return initial_correlation(s).entries; }, py::arg("setup"));
    m.def(
        "evolve_correlation",
        [](const QuenchSetup& s, double time) {
            const auto c0 = initial_correlation(s);
            return evolve(c0, embed_hamiltonian(build_hamiltonian(s.spec), c0), time).entries;
        },
        py::arg("setup"), py::arg("time"));
    m.def(
        "block_entropy",
        [](const Eigen::MatrixXcd& block, bool bits) { return block_entropy(block, bits ? LogBase::two : LogBase::natural); },
        py::arg("block"), py::arg("bits") = false);

    py::class_<SamplingProtocol>(m, "SamplingProtocol")
        .def(py::init([](double fit_start, double fit_end, double fit_dt, double burn_in, int n_samples,
                         double mean_interval, double jitter, std::uint64_t seed) {
                 SamplingProtocol p{fit_start, fit_end, fit_dt, burn_in, n_samples, mean_interval, jitter, seed};
                 validate(p);
                 return p;
             }),
             py::arg("fit_start") = 0.0, py::arg("fit_end") = 20.0, py::arg("fit_dt") = 0.5, py::arg("burn_in") = 10000.0,
             py::arg("n_samples") = 1000, py::arg("mean_interval") = 10.0, py::arg("jitter") = 5.0, py::arg("seed") = 0)
        .def_readonly("fit_start", &SamplingProtocol::fit_start)
        .def_readonly("fit_end", &SamplingProtocol::fit_end)
        .def_readonly("fit_dt", &SamplingProtocol::fit_dt)
        .def_readonly("burn_in", &SamplingProtocol::burn_in)
        .def_readonly("n_samples", &SamplingProtocol::n_samples)
        .def_readonly("mean_interval", &SamplingProtocol::mean_interval)
        .def_readonly("jitter", &SamplingProtocol::jitter)
        .def_readonly("seed", &SamplingProtocol::seed);

    m.def("fit_times", &fit_times, py::arg("protocol"));
    m.def("saturation_times", &saturation_times, py::arg("protocol"));
    m.def(
        "ee_timeseries",
        [](const QuenchSetup& s, const std::vector<double>& times) { return ee_timeseries(s, times).entropies; },
        py::arg("setup"), py::arg("times"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "early_velocity", [](const QuenchSetup& s, const SamplingProtocol& p) { return early_velocity(s, p); },
        py::arg("setup"), py::arg("protocol") = SamplingProtocol{}, py::call_guard<py::gil_scoped_release>());
    m.def(
        "saturation_value", [](const QuenchSetup& s, const SamplingProtocol& p) { return saturation_value(s, p); },
        py::arg("setup"), py::arg("protocol") = SamplingProtocol{}, py::call_guard<py::gil_scoped_release>());
    m.def(
        "scaling_exponent",
        [](const QuenchSetup& family, const std::vector<int>& sizes, const SamplingProtocol& p) {
            const auto fit = scaling_exponent(family, sizes, p);
            return py::make_tuple(fit.alpha, fit.standard_error, fit.s_sat);
        },
        py::arg("family"), py::arg("sizes"), py::arg("protocol") = SamplingProtocol{});
    m.def(
        "sic_profile",
        [](const QuenchSetup& s, const std::vector<int>& sizes, const std::string& coupling, const SamplingProtocol& p) {
            py::gil_scoped_release release;
            return sic_profile(s, sizes, parse_coupling(coupling), p).mi;
        },
        py::arg("setup"), py::arg("sizes"), py::arg("coupling") = "center", py::arg("protocol") = SamplingProtocol{});
    m.def(
        "linear_fit",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            const auto f = linear_fit(x, y);
            return py::make_tuple(f.slope, f.intercept, f.slope_stderr, f.r_squared);
        },
        py::arg("x"), py::arg("y"));
    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
          py::arg("x"), py::arg("y"));

    m.def(
        "oracle_ee_deviation",
        [](const QuenchSetup& s, const std::vector<double>& times) { return oracle::half_chain_entropy_deviation(s, times); },
        py::arg("setup"), py::arg("times"));
    m.def(
        "oracle_sic_deviation",
        [](const QuenchSetup& s, const std::vector<double>& times, const std::vector<std::vector<ModeIndex>>& regions) {
            return oracle::mutual_information_deviation(s, times, regions);
        },
        py::arg("setup"), py::arg("times"), py::arg("regions"));

    m.def(
        "run_config",
        [](const std::string& text, std::optional<std::string> out, std::optional<int> workers) {
            auto config = parse_config(text);
            if (out) config.output_dir = *out;
            if (workers) config.workers = *workers;
            RunResult result;
            {
                py::gil_scoped_release release;
                result = run(config);
            }
            py::dict d;
            std::vector<std::string> files;
            for (const auto& f : result.files) files.push_back(f.string());
            d["files"] = files;
            d["failures"] = result.failures.size();
            d["verification_passed"] = result.verification_passed;
            d["summary"] = result.summary;
            return d;
        },
        py::arg("config"), py::arg("out") = py::none(), py::arg("workers") = py::none());

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
