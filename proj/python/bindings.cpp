#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "molmom/dispersion.hpp"
#include "molmom/encoding.hpp"
#include "molmom/error.hpp"
#include "molmom/hahn.hpp"
#include "molmom/moments.hpp"
#include "molmom/pipeline.hpp"
#include "molmom/voxel.hpp"

namespace py = pybind11;
using namespace molmom;

namespace {

py::array_t<double> grid_to_array(const VoxelGrid& g) {
    const auto n = static_cast<py::ssize_t>(g.n());
    py::array_t<double> out({n, n, n});
    std::copy(g.values().begin(), g.values().end(), out.mutable_data());
    return out;
}

VoxelGrid array_to_grid(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 3 || a.shape(0) != a.shape(1) || a.shape(1) != a.shape(2))
        throw DomainError("expected a cubic (n, n, n) array");
    const auto n = static_cast<std::size_t>(a.shape(0));
    return VoxelGrid(n, std::vector<double>(a.data(), a.data() + a.size()));
}

py::int_ to_pyint(uint128 v) { return py::int_(py::str(to_decimal(v))); }

uint128 from_pyint(const py::int_& v) { return parse_uint128(std::string(py::str(v))); }

py::dict moment_dict(const MomentSet& m) {
    py::dict d;
    d["family"] = std::string(family_name(m.family));
    d["max_order"] = m.max_order;
    py::list names;
    for (const auto& idx : m.indices) names.append(feature_name(m.family, idx));
    d["names"] = names;
    d["indices"] = [&] {
        py::list l;
        for (const auto& idx : m.indices) l.append(py::make_tuple(idx.i, idx.j, idx.k));
        return l;
    }();
    d["values"] = m.values;
    d["outside_mass_fraction"] = m.outside_mass_fraction;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "3D moment descriptors for voxelized molecules";

    // translators run most-recent first, so the base class goes in first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.attr("FEATURE_ORDER") = kFeatureOrder;
    m.attr("FEATURE_COUNT") = kFeatureCount;
    m.attr("FAMILIES") = [] {
        py::list l;
        for (Family f : kAllFamilies) l.append(std::string(family_name(f)));
        return l;
    }();

    m.def(
        "voxelize_xyz",
        [](const std::string& text, std::size_t n, const std::string& mode, double margin) {
            VoxelizeOptions o;
            o.n = n;
            o.mode = mode == "point" ? VoxelMode::point : VoxelMode::sphere;
            o.margin = margin;
            return grid_to_array(voxelize(parse_xyz(text), o));
        },
        py::arg("text"), py::arg("n") = 64, py::arg("mode") = "sphere", py::arg("margin") = 0.05,
        "Parse XYZ text and voxelize it into an (n, n, n) occupancy array.");

    m.def("read_binvox", [](const std::string& path) { return grid_to_array(load_binvox(path)); },
          py::arg("path"));
    m.def("write_binvox",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> a, const std::string& path) {
              save_binvox(array_to_grid(a), path);
          },
          py::arg("grid"), py::arg("path"));

    m.def(
        "moments",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a, const std::string& family,
           int max_order, double hahn_mu, double hahn_nu, bool precise) {
            const auto grid = array_to_grid(a);
            switch (parse_family(family)) {
                case Family::geometric:
                    return moment_dict(geometric_moments(
                        grid, max_order, precise ? GeometricVariant::precise : GeometricVariant::zero_order));
                case Family::complex: return moment_dict(complex_moments_3d(grid, max_order));
                case Family::legendre: return moment_dict(legendre_moments_3d(grid, max_order));
                case Family::zernike: return moment_dict(zernike_moments_3d(grid, max_order));
                case Family::hahn:
                    return moment_dict(
                        hahn_moments_3d(grid, max_order, HahnParams{hahn_mu, hahn_nu, static_cast<int>(grid.n())}));
            }
            throw Error("unknown family");
        },
        py::arg("grid"), py::arg("family"), py::arg("max_order") = kFeatureOrder, py::arg("hahn_mu") = 0.0,
        py::arg("hahn_nu") = 0.0, py::arg("precise") = false,
        "Moments of a cubic grid as a dict with names, indices and complex values.");

    m.def(
        "reconstruct_hahn",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a, double mu, double nu) {
            const auto grid = array_to_grid(a);
            const auto res = run_reconstruct(grid, {mu, nu, static_cast<int>(grid.n())});
            return py::make_tuple(grid_to_array(res.reconstructed), res.max_abs_error);
        },
        py::arg("grid"), py::arg("hahn_mu") = 0.0, py::arg("hahn_nu") = 0.0,
        "Complete forward and inverse Hahn transform; returns (grid, max_abs_error).");

    m.def("hahn_normalized", &hahn_normalized, py::arg("s"), py::arg("a"), py::arg("params"));
    py::class_<HahnParams>(m, "HahnParams")
        .def(py::init([](double mu, double nu, int n) { return HahnParams{mu, nu, n}; }), py::arg("mu") = 0.0,
             py::arg("nu") = 0.0, py::arg("n") = 64)
        .def_readwrite("mu", &HahnParams::mu)
        .def_readwrite("nu", &HahnParams::nu)
        .def_readwrite("n", &HahnParams::n);

    m.def("interleave", [](Complex c) { return to_pyint(interleave(c).value); }, py::arg("value"),
          "Bit-interleave a complex value into a 128-bit integer.");
    m.def(
        "deinterleave",
        [](const py::int_& v) {
            const auto d = deinterleave({from_pyint(v)});
            return py::make_tuple(d.value, d.finite);
        },
        py::arg("encoded"), "Inverse of interleave; returns (value, finite).");

    m.def("median", [](std::vector<double> xs) { return median(xs); });
    m.def("mad", [](std::vector<double> xs) { return mad(xs); });
    m.def("nmad", &nmad, py::arg("mad"), py::arg("reference"));
    m.def("quartiles", [](std::vector<double> xs) { return quartiles(xs); });
    m.def("qcd", [](std::vector<double> xs) { return qcd(xs); });

    m.def(
        "class_dispersion",
        [](const std::vector<std::string>& names, const std::vector<std::vector<double>>& rows,
           const std::vector<std::string>& labels, const std::string& mode) {
            LabeledDataset d{names, rows, labels, {}};
            const auto r =
                class_dispersion(d, mode == "leave_one_out" ? NmadMode::leave_one_out : NmadMode::class_pooled);
            py::list features;
            for (const auto& f : r.features) {
                py::dict e;
                e["name"] = f.name;
                e["intra_qcd"] = f.intra_qcd;
                e["inter_qcd"] = f.inter_qcd;
                e["degenerate"] = f.degenerate != Degeneracy::none;
                features.append(e);
            }
            py::dict out;
            out["features"] = features;
            out["usable"] = r.usable;
            out["intra_lower"] = r.intra_lower;
            out["ratio"] = r.intra_class_variance_ratio;
            return out;
        },
        py::arg("names"), py::arg("rows"), py::arg("labels"), py::arg("mode") = "class_pooled");
}
