#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "doilab/checks.hpp"
#include "doilab/cli.hpp"
#include "doilab/doi.hpp"
#include "doilab/error.hpp"
#include "doilab/experiments.hpp"
#include "doilab/spectral.hpp"
#include "doilab/symbols.hpp"
#include "doilab/transference.hpp"

namespace py = pybind11;
using namespace doilab;

namespace {

NormOrder order(double p) { return std::isinf(p) ? NormOrder::infinity() : NormOrder(p); }

SpectralTuple tuple_from(const ComplexMatrix& basis, const RowMajorMatrix& eigs) {
  return SpectralTuple(basis, eigs);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Double operator integrals, Fourier multiplier symbols and transference";
  m.attr("__version__") = version();

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<NonCommuting>(m, "NonCommuting", PyExc_ValueError);
  py::register_exception<NotOffDiagonal>(m, "NotOffDiagonal", PyExc_ValueError);

  m.def(
      "schatten_norm", [](const ComplexMatrix& x, double p) { return schatten_norm(x, order(p)); }, py::arg("x"),
      py::arg("p"), "Schatten p-norm; p may be float('inf').");
  m.def("singular_values", &singular_values, py::arg("x"));
  m.def(
      "rearrangement_norms",
      [](const ComplexMatrix& x) {
        const auto r = rearrangement_norms(x);
        return py::dict(py::arg("weak_l1") = r.weak, py::arg("m1inf") = r.m1inf);
      },
      py::arg("x"), "Weak-L1 and M_{1,inf} norms of the singular value sequence.");

  m.def(
      "joint_diagonalize",
      [](const std::vector<ComplexMatrix>& ops, std::uint64_t seed) {
        std::vector<HermitianMatrix> tuple;
        for (const auto& a : ops) tuple.emplace_back(a);
        const SpectralTuple s = joint_diagonalize(tuple, seed);
        return py::make_tuple(s.basis(), RealMatrix(s.joint_eigenvalues()));
      },
      py::arg("operators"), py::arg("seed") = 0, "Returns (U, joint eigenvalues), rows sorted lexicographically.");

  m.def(
      "commutator_ratio",
      [](const std::string& function, const ComplexMatrix& basis, const RowMajorMatrix& eigs, const ComplexMatrix& x,
         double p) {
        const SpectralTuple s = tuple_from(basis, eigs);
        const auto r = commutator_ratio(functions::by_name(function, s.arity()), s, x, order(p));
        return py::dict(py::arg("ratio") = r.ratio, py::arg("numerator") = r.numerator,
                        py::arg("denominator") = r.denominator, py::arg("path_error") = r.path_error);
      },
      py::arg("function"), py::arg("basis"), py::arg("eigenvalues"), py::arg("x"), py::arg("p"));
  m.def(
      "lipschitz_ratio",
      [](const std::string& function, const ComplexMatrix& x, const ComplexMatrix& y, double p) {
        return lipschitz_ratio(functions::by_name(function, 1), HermitianMatrix(x), HermitianMatrix(y), order(p));
      },
      py::arg("function"), py::arg("x"), py::arg("y"), py::arg("p"));

  m.def(
      "eval_K", [](const std::vector<double>& xi, double mu) { return eval_K(xi, mu); }, py::arg("xi"), py::arg("mu"));
  m.def(
      "eval_R", [](const std::vector<double>& xi, double mu) { return eval_R(xi, mu); }, py::arg("xi"), py::arg("mu"));
  m.def(
      "eval_m1j", [](int j, const std::vector<double>& xi, double mu) { return eval_m1j(j, xi, mu); }, py::arg("j"),
      py::arg("xi"), py::arg("mu"), "j is 0-based.");
  m.def(
      "eval_mj", [](int j, const std::vector<double>& xi, double mu) { return eval_mj(j, xi, mu); }, py::arg("j"),
      py::arg("xi"), py::arg("mu"), "j is 0-based.");
  m.def(
      "eval_mj_quadrature",
      [](int j, const std::vector<double>& xi, double mu, double tol) {
        return eval_mj_quadrature(j, xi, mu, standard_bump(), tol);
      },
      py::arg("j"), py::arg("xi"), py::arg("mu"), py::arg("tol") = 1e-9);

  m.def(
      "transference_instance",
      [](std::uint64_t seed, int index, int n, int max_dim) {
        const auto inst = checks::transfer_instance(seed, index, n, max_dim);
        py::list errors;
        for (int j = 0; j < inst.s.arity(); ++j) errors.append(check_transference(inst.s, inst.g, inst.y, j).max_error);
        const TrigPolynomial h = build_hy(inst.s, inst.g, inst.y);
        return py::dict(py::arg("n") = inst.s.arity(), py::arg("d") = inst.s.dim(), py::arg("m") = inst.g.m(),
                        py::arg("N") = inst.g.N(), py::arg("y") = inst.y, py::arg("max_errors") = errors,
                        py::arg("support") = h.support_size(),
                        py::arg("torus_norm_2") = torus_lp_norm(h, NormOrder(2.0), 3),
                        py::arg("y_norm_2") = schatten_norm(inst.y, 2.0));
      },
      py::arg("seed"), py::arg("index") = 0, py::arg("n") = 0, py::arg("max_dim") = 16,
      "Random transference check: coefficient errors per direction and the norm transport pair.");

  m.def(
      "extremal_chain",
      [](const std::vector<int>& dims, double p, int iterations) {
        py::list out;
        for (const auto& pt : extremal_chain(dims, p, iterations)) {
          out.append(py::dict(py::arg("d") = pt.d, py::arg("p") = pt.p, py::arg("family_ratio") = pt.family_ratio,
                              py::arg("ratio") = pt.ratio));
        }
        return out;
      },
      py::arg("dims"), py::arg("p"), py::arg("iterations") = 40);

  m.def(
      "constant_sweep",
      [](std::vector<double> p_grid, std::vector<int> dims, std::vector<std::uint64_t> seeds,
         std::vector<std::string> ensembles, int n, std::string function, int iterations) {
        SweepConfig c;
        c.p_grid = std::move(p_grid);
        c.dims = std::move(dims);
        c.seeds = std::move(seeds);
        c.ensembles = std::move(ensembles);
        c.n = n;
        c.function = std::move(function);
        c.extremal_iterations = iterations;
        std::vector<std::string> out;
        for (const auto& r : constant_sweep(c)) out.push_back(r.to_json().dump());
        return out;
      },
      py::arg("p_grid"), py::arg("dims"), py::arg("seeds"), py::arg("ensembles"), py::arg("n"), py::arg("function"),
      py::arg("extremal_iterations"));

  m.def(
      "cli", [](const std::vector<std::string>& args) { return cli::run(args); }, py::arg("args"),
      "Runs the command-line front end and returns its exit code.");
}
