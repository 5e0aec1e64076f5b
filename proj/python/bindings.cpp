#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pslab/conformal.hpp"
#include "pslab/fixtures.hpp"
#include "pslab/io.hpp"
#include "pslab/typea.hpp"

namespace py = pybind11;
using namespace pslab;

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace {

CartanVector cartan(const Vec& v) { return CartanVector(v); }

py::dict estimate_dict(const ExponentEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["ci_low"] = e.ci_low;
  d["ci_high"] = e.ci_high;
  d["points"] = e.points;
  d["polynomial"] = e.polynomial;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cartan projections, critical exponents, shadows and Patterson measures for subgroups of SL(d, R)";

  static py::exception<Error> error(m, "PslabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object inst = exc(e.what());
      inst.attr("kind") = kind_name(e.kind());
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  py::class_<ThetaSet>(m, "ThetaSet")
      .def(py::init<int, std::vector<int>>(), py::arg("d"), py::arg("indices"))
      .def_static("full", &ThetaSet::full)
      .def_property_readonly("d", &ThetaSet::d)
      .def_property_readonly("indices", &ThetaSet::indices)
      .def("iota", &ThetaSet::iota)
      .def("__repr__", [](const ThetaSet& t) { return "ThetaSet(" + t.str() + ")"; });

  py::class_<LinearForm>(m, "LinearForm")
      .def(py::init<ThetaSet, Vec>(), py::arg("theta"), py::arg("coefficients"))
      .def_static("simple_root", &LinearForm::simple_root)
      .def_property_readonly("theta", &LinearForm::theta)
      .def_property_readonly("coefficients", &LinearForm::coefficients)
      .def_property_readonly("dual", &LinearForm::dual)
      .def("__call__", [](const LinearForm& f, const Vec& v) { return f(cartan(v)); })
      .def("scaled", &LinearForm::scaled);

  m.def("p_theta", [](const Vec& v, const ThetaSet& th) { return p_theta(cartan(v), th).entries(); });
  m.def("opposition_involution", [](const Vec& v) { return opposition_involution(cartan(v)).entries(); });
  m.def("cartan_projection", [](const Mat& g) { return cartan_projection(GroupElement(g)).entries(); },
        "log singular values of g, rescaled to determinant one");
  m.def("quint_alpha_bound", &quint_alpha_bound);
  m.def("hitchin_bound", &hitchin_bound);

  py::class_<PartialFlag>(m, "PartialFlag")
      .def(py::init<ThetaSet, Mat>())
      .def_static("random", [](const ThetaSet& th, std::uint64_t seed) {
        Rng rng(seed);
        return PartialFlag::random(th, rng);
      })
      .def_property_readonly("frame", &PartialFlag::frame)
      .def_property_readonly("theta", &PartialFlag::theta)
      .def("distance", &PartialFlag::distance);

  py::class_<Fixture>(m, "Fixture")
      .def_readonly("name", &Fixture::name)
      .def_readonly("theta", &Fixture::theta)
      .def_readonly("psi", &Fixture::psi)
      .def_property_readonly("d", [](const Fixture& f) { return f.gens.d(); })
      .def_property_readonly("generators", [](const Fixture& f) {
        std::vector<Mat> out;
        for (int k = 0; k < f.gens.rank(); ++k) out.push_back(f.gens.gen(k).matrix());
        return out;
      });
  m.def("builtin_fixture_names", &builtin_fixture_names);
  m.def("load_fixture", &load_fixture);

  py::class_<OrbitBall>(m, "OrbitBall")
      .def("__len__", &OrbitBall::size)
      .def_property_readonly("d", &OrbitBall::d)
      .def_property_readonly("max_length", &OrbitBall::max_length)
      .def("length", &OrbitBall::length)
      .def("word", &OrbitBall::word_string)
      .def("matrix", [](const OrbitBall& b, std::size_t i) { return Mat(b.matrix(i)); })
      .def("mu", [](const OrbitBall& b, std::size_t i) { return b.mu_vector(i).entries(); });
  m.def("enumerate_ball", [](const Fixture& f, int L) { return enumerate_ball(f.gens, L); }, py::arg("fixture"),
        py::arg("L"));

  m.def("critical_exponent", [](const OrbitBall& b, const LinearForm& psi, std::uint64_t seed) {
        ExponentOptions o;
        o.seed = seed;
        return estimate_dict(critical_exponent(b, psi, o));
      }, py::arg("ball"), py::arg("psi"), py::arg("seed") = 0x5eed);
  m.def("poincare_partial_sum", &poincare_partial_sum);

  m.def("shadow_contains", [](const PartialFlag& xi, const Mat& target, double r) {
        ShadowSpec spec(GroupElement::identity(xi.d()), GroupElement(target), r, xi.theta());
        ShadowResult res = shadow_contains(xi, spec);
        return py::make_tuple(res.member, res.d_min);
      }, py::arg("xi"), py::arg("target"), py::arg("radius"),
      "membership of xi in the shadow of the target seen from the base point; returns (member, distance)");

  py::enum_<AtomPlacement>(m, "AtomPlacement")
      .value("attractor", AtomPlacement::attractor)
      .value("base_orbit", AtomPlacement::base_orbit);

  py::class_<AtomicMeasure>(m, "AtomicMeasure")
      .def("__len__", &AtomicMeasure::size)
      .def_property_readonly("s", &AtomicMeasure::s)
      .def("weight", &AtomicMeasure::weight)
      .def("frame", [](const AtomicMeasure& nu, std::size_t k) { return Mat(nu.frame(k)); })
      .def_property_readonly("total_mass", &AtomicMeasure::total_mass)
      .def("to_json", [](const AtomicMeasure& nu) { return io::measure_json(nu).dump(); });
  m.def("patterson_measure", [](const OrbitBall& b, const LinearForm& psi, double s, AtomPlacement placement) {
        PattersonOptions po;
        po.placement = placement;
        return patterson_measure(b, psi, s, po);
      }, py::arg("ball"), py::arg("psi"), py::arg("s"), py::arg("placement") = AtomPlacement::base_orbit);

  m.def("shadow_lemma_check", [](const AtomicMeasure& nu, const OrbitBall& b, double r) {
    ShadowLemmaReport rep = shadow_lemma_check(nu, b, r);
    py::dict d;
    d["tier"] = rep.tier;
    d["min_ratio"] = rep.min_ratio;
    d["max_ratio"] = rep.max_ratio;
    d["band"] = rep.band;
    d["pass"] = rep.pass;
    return d;
  });

  m.def("bms_exponent", &bms_exponent);

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
