#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <pjb/equivalence.hpp>
#include <pjb/errors.hpp>
#include <pjb/scenario.hpp>

namespace py = pybind11;
using namespace pjb;

namespace {

py::dict factor_dict(const CoordinateFactor& cf) {
  py::dict d;
  d["frame"] = cf.w.frame();
  d["eta"] = cf.factorization.left;
  d["phi"] = cf.factorization.right;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pjb, m) {
  m.doc() = "Model spaces of finite Blaschke products, Jordan blocks and their submodules";

  py::register_exception<error>(m, "PjbError", PyExc_RuntimeError);

  py::class_<BlaschkeProduct>(m, "BlaschkeProduct")
      .def(py::init<>())
      .def(py::init<cplx, std::vector<cplx>, double>(), py::arg("constant"), py::arg("zeros"),
           py::arg("guard") = default_zero_guard)
      .def(py::init([](std::vector<cplx> zeros) { return BlaschkeProduct(1.0, std::move(zeros)); }), py::arg("zeros"))
      .def_static("monomial", &BlaschkeProduct::monomial)
      .def_static("factor", &BlaschkeProduct::factor, py::arg("a"), py::arg("guard") = default_zero_guard)
      .def_property_readonly("constant", &BlaschkeProduct::constant)
      .def_property_readonly("zeros", &BlaschkeProduct::zeros)
      .def_property_readonly("degree", &BlaschkeProduct::degree)
      .def("__call__", &BlaschkeProduct::operator())
      .def("__mul__", [](const BlaschkeProduct& a, const BlaschkeProduct& b) { return a * b; })
      .def("taylor", &BlaschkeProduct::taylor)
      .def("__str__", &BlaschkeProduct::to_string)
      .def("__repr__", [](const BlaschkeProduct& b) { return "BlaschkeProduct(" + b.to_string() + ")"; });

  m.def("factorizations", [](const BlaschkeProduct& b) {
    std::vector<std::pair<BlaschkeProduct, BlaschkeProduct>> out;
    for (const auto& f : factorizations(b)) out.emplace_back(f.left, f.right);
    return out;
  });
  m.def("equal_up_to_unimodular", &equal_up_to_unimodular, py::arg("b1"), py::arg("b2"),
        py::arg("tol") = zero_match_tolerance);

  py::class_<ModelSpace>(m, "ModelSpace")
      .def(py::init([](const BlaschkeProduct& theta) { return ModelSpace(theta); }))
      .def_property_readonly("dim", &ModelSpace::dim)
      .def_property_readonly("theta", &ModelSpace::theta)
      .def("basis_at", &ModelSpace::basis_at)
      .def("evaluate", [](const ModelSpace& ms, const Vec& coords, cplx z) { return ms.evaluate(coords, z)(0); });

  m.def("compressed_shift", &compressed_shift);
  m.def("backward_shift_theta", [](const ModelSpace& ms, int k) { return backward_shift_theta(ms, k).coords; });
  m.def("project_one", [](const ModelSpace& ms) { return project_one(ms).coords; });
  m.def("defect_identities", [](const ModelSpace& ms) {
    const DefectResiduals r = defect_identities(ms);
    return py::make_tuple(r.residual_ss, r.residual_s_s);
  });
  m.def("parseval_frame_residual", [](const ModelSpace& ms, std::optional<int> tail) {
    return parseval_frame_residual(ms, tail ? *tail : parseval_minimal_tail(ms));
  }, py::arg("ms"), py::arg("tail") = py::none());
  m.def("star_cyclicity_check", &star_cyclicity_check);

  py::class_<Subspace>(m, "Subspace")
      .def_static("span", [](const Mat& v) { return Subspace::span(v); })
      .def_static("full", &Subspace::full)
      .def_property_readonly("dim", &Subspace::dim)
      .def_property_readonly("ambient_dim", &Subspace::ambient_dim)
      .def_property_readonly("frame", &Subspace::frame)
      .def("distance", &Subspace::distance);

  m.def("build_submodule", [](const ModelSpace& ms, const BlaschkeProduct& eta, const BlaschkeProduct& phi) {
    return build_submodule(ms, {eta, phi});
  });
  m.def("classify_submodule", [](const ModelSpace& ms, const Subspace& w) {
    const Factorization f = classify_submodule(ms, w);
    return py::make_tuple(f.left, f.right);
  });
  m.def("orthogonality_impossibility", &orthogonality_impossibility);
  m.def("star_closure_full", &star_closure_full);

  py::class_<JordanBlockProduct>(m, "JordanBlockProduct")
      .def(py::init([](const std::vector<BlaschkeProduct>& thetas, int aux_dim) {
             std::vector<ModelSpace> spaces;
             for (const auto& t : thetas) spaces.emplace_back(t);
             return JordanBlockProduct(std::move(spaces), aux_dim);
           }),
           py::arg("thetas"), py::arg("aux_dim") = 0)
      .def_property_readonly("total_dim", &JordanBlockProduct::total_dim)
      .def_property_readonly("ambient_dim", &JordanBlockProduct::ambient_dim)
      .def_property_readonly("aux_dim", &JordanBlockProduct::aux_dim)
      .def("dense_op", &JordanBlockProduct::dense_op);

  auto pairs_to_factorizations = [](const std::vector<std::pair<BlaschkeProduct, BlaschkeProduct>>& fs) {
    std::vector<Factorization> out;
    for (const auto& [eta, phi] : fs) out.push_back({eta, phi});
    return out;
  };

  m.def("tensor_submodule", [=](const JordanBlockProduct& jb, const std::vector<std::pair<BlaschkeProduct, BlaschkeProduct>>& fs) {
    return tensor_submodule(jb, pairs_to_factorizations(fs));
  });
  m.def("is_submodule", [](const JordanBlockProduct& jb, const Subspace& s) { return is_submodule(jb, s).residual; });
  m.def("is_doubly_commuting", [](const JordanBlockProduct& jb, const Subspace& s) {
    const ResidualReport r = is_doubly_commuting(jb, s);
    return py::make_tuple(r.pass, r.residual);
  });
  m.def("reducing_split", &reducing_split);
  m.def("decompose_doubly_commuting", [](const JordanBlockProduct& jb, const Subspace& s) {
    py::list out;
    for (const auto& cf : decompose_doubly_commuting(jb, s)) out.append(factor_dict(cf));
    return out;
  });

  py::class_<MixedSpace>(m, "MixedSpace")
      .def(py::init([](int num_vars, int degree_cap, const std::vector<BlaschkeProduct>& thetas) {
             std::vector<ModelSpace> spaces;
             for (const auto& t : thetas) spaces.emplace_back(t);
             return MixedSpace(TruncatedHardy(num_vars, degree_cap), JordanBlockProduct(std::move(spaces)));
           }),
           py::arg("num_vars"), py::arg("degree_cap"), py::arg("thetas"))
      .def_property_readonly("ambient_dim", &MixedSpace::ambient_dim);

  m.def("mixed_submodule", [=](const MixedSpace& msp, const std::vector<BlaschkeProduct>& generator,
                               const std::vector<std::pair<BlaschkeProduct, BlaschkeProduct>>& fs) {
    return mixed_submodule(msp, InnerGenerator{generator}, pairs_to_factorizations(fs));
  });
  m.def("decompose_mixed", [](const MixedSpace& msp, const Subspace& s) {
    const MixedDecomposition d = decompose_mixed(msp, s);
    py::dict out;
    out["generator"] = d.hardy.generator.per_var;
    out["generator_name"] = d.hardy.generator.to_string();
    py::list factors;
    for (const auto& cf : d.factors) factors.append(factor_dict(cf));
    out["factors"] = factors;
    out["reconstruction_residual"] = d.reconstruction_residual;
    out["fingerprint"] = fingerprint(Decomposition::from_mixed(msp, d)).to_string();
    return out;
  });

  m.def("fingerprint", [=](const JordanBlockProduct& jb, const std::vector<std::pair<BlaschkeProduct, BlaschkeProduct>>& fs) {
    return fingerprint(Decomposition::from_factorizations(jb, pairs_to_factorizations(fs))).to_string();
  });
  m.def("intertwiner_oracle", &intertwiner_oracle);

  m.def("run_scenario", [](const std::string& text, std::optional<std::uint64_t> seed,
                           std::map<std::string, double> tolerances, int jobs) {
    RunResult r;
    {
      py::gil_scoped_release release;
      r = run_scenario(text, {.seed = seed, .tolerances = std::move(tolerances), .jobs = jobs});
    }
    return py::make_tuple(r.report, r.exit_code);
  }, py::arg("text"), py::arg("seed") = py::none(), py::arg("tolerances") = std::map<std::string, double>{},
        py::arg("jobs") = 1);
}
