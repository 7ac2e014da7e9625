#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "mftd/config.hpp"
#include "mftd/errors.hpp"
#include "mftd/experiment.hpp"
#include "mftd/forward.hpp"
#include "mftd/imaging.hpp"
#include "mftd/postprocess.hpp"
#include "mftd/specialfn.hpp"

namespace py = pybind11;
using namespace mftd;

namespace {

// Lattice values scattered back onto the full n x n grid, NaN outside the disk.
py::array_t<double> to_array(const ImageGrid& g) {
    const int n = g.lattice->n;
    py::array_t<double> out({n, n});
    auto a = out.mutable_unchecked<2>();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < g.size(); ++i) a(g.lattice->row[i], g.lattice->col[i]) = g.values[i];
    return out;
}

std::vector<ThinInclusion> builtins(const std::vector<std::string>& labels) {
    std::vector<ThinInclusion> out;
    for (const auto& l : labels) out.push_back(ThinInclusion{builtin_curve(l)});
    return out;
}

}  // namespace

PYBIND11_MODULE(_mftd, m) {
    m.doc() = "Multi-frequency topological-derivative imaging of thin inclusions";

    static py::exception<Error> base(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = py::reinterpret_borrow<py::object>(base.ptr())(e.what());
            err.attr("category") = e.category();
            PyErr_SetObject(base.ptr(), err.ptr());
        }
    });

    m.def("bessel_j", &bessel_j, py::arg("n"), py::arg("x"));
    m.def("struve_h", [](int n, double x) { return struve_h(n, x); }, py::arg("n"), py::arg("x"));
    m.def("lambda_fn", [](double t, double w) { return lambda_fn(t, w); }, py::arg("t"), py::arg("omega"));
    m.def(
        "find_resonance",
        [](double w, double tol) -> py::object {
            const auto hit = find_resonance(w, tol);
            if (!hit) return py::none();
            return py::make_tuple(hit->order, hit->omega, hit->derivative);
        },
        py::arg("omega"), py::arg("tol") = 1e-8);
    m.def("neumann", [](double w, std::pair<double, double> x, std::pair<double, double> y) {
        return NeumannFunction(w).value({x.first, x.second}, {y.first, y.second});
    });

    m.def("omegas", [](int L, int K, double lmin, double lmax) { return make_incident_set(L, K, lmin, lmax).omegas; },
          py::arg("L"), py::arg("K"), py::arg("lambda_min") = 0.2, py::arg("lambda_max") = 0.5);

    m.def(
        "etd_multi_map",
        [](const std::vector<std::string>& curves, int L, int K, std::optional<double> snr_db, std::uint64_t seed,
           int lattice) {
            const auto inc = make_incident_set(L, K, 0.2, 0.5);
            auto data = synthesize(builtins(curves), inc, boundary_grid(128), 200);
            if (snr_db) data = add_awgn(data, *snr_db, seed);
            return to_array(etd_multi(Lattice::make(lattice), data, all_frequencies(data)));
        },
        py::arg("curves"), py::arg("L") = 4, py::arg("K") = 16, py::arg("snr_db") = py::none(),
        py::arg("seed") = 1, py::arg("lattice") = 128,
        "Normalized multi-frequency map of builtin curves as an n x n array (NaN outside the disk).");

    m.def(
        "localization_metric",
        [](const std::vector<std::string>& curves, int L, int K, std::optional<double> snr_db, std::uint64_t seed) {
            const auto truth = builtins(curves);
            const auto inc = make_incident_set(L, K, 0.2, 0.5);
            auto data = synthesize(truth, inc, boundary_grid(128), 200);
            if (snr_db) data = add_awgn(data, *snr_db, seed);
            std::vector<CurveDiscretization> discs;
            for (const auto& t : truth) discs.push_back(discretize(t.curve, 400));
            return localization_metric(etd_multi(Lattice::make(), data, all_frequencies(data)), discs);
        },
        py::arg("curves"), py::arg("L") = 4, py::arg("K") = 16, py::arg("snr_db") = py::none(),
        py::arg("seed") = 1);

    m.def(
        "chebyshev_fit",
        [](const std::vector<std::pair<double, double>>& pts, int q) {
            std::vector<Vec2> v;
            for (auto [x, y] : pts) v.push_back({x, y});
            const auto f = chebyshev_fit(v, q);
            return py::make_tuple(f.a, f.b, f.coeffs);
        },
        py::arg("points"), py::arg("q") = 5);

    m.def(
        "validate_config",
        [](const std::string& text) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& d : validate_text(text))
                out.emplace_back(d.level == Diagnostic::Level::error ? "error" : "warning", d.message);
            return out;
        },
        py::arg("text"));
    m.def("canonical_config", [](const std::string& text) { return to_text(parse_config_text(text)); });
    m.def(
        "run",
        [](const std::string& text, const std::string& out_dir, std::optional<std::uint64_t> seed) {
            RunOptions opts;
            opts.seed = seed;
            ArtifactBundle b;
            {
                py::gil_scoped_release release;
                b = run_experiment(parse_config_text(text), out_dir, opts);
            }
            return py::make_tuple(b.files, b.manifest);
        },
        py::arg("config_text"), py::arg("out_dir"), py::arg("seed") = py::none());
    m.def("presets", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& p : presets()) out.emplace_back(p.name, p.text);
        return out;
    });
    m.def("git_blob_sha1", [](const py::bytes& b) { return git_blob_sha1(std::string(b)); });
}
