#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "gsirs/equilibria.hpp"
#include "gsirs/errors.hpp"
#include "gsirs/incidence.hpp"
#include "gsirs/model.hpp"
#include "gsirs/simulate.hpp"
#include "gsirs/stability.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace pybind11::literals;
using release_gil = py::call_guard<py::gil_scoped_release>;

namespace {

// Python callables may be invoked from worker threads with the GIL released.
gsirs::ScalarField wrap_callable(py::function fn) {
  std::shared_ptr<py::function> holder(new py::function(std::move(fn)), [](py::function* p) {
    py::gil_scoped_acquire gil;
    delete p;
  });
  return [holder](double S, double I) {
    py::gil_scoped_acquire gil;
    return (*holder)(S, I).cast<double>();
  };
}

std::string repr_state(const gsirs::State& x) {
  std::ostringstream os;
  os.precision(17);
  os << "State(S=" << x.S << ", I=" << x.I << ", R=" << x.R << ")";
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = R"pbdoc(
    Generalized SIRS model with nonlinear incidence: R0, equilibria,
    global-stability certificates and trajectory simulation.
  )pbdoc";

  auto base = py::register_exception<gsirs::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<gsirs::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<gsirs::DomainError>(m, "DomainError", base.ptr());

  py::enum_<gsirs::Family>(m, "Family")
      .value("bilinear", gsirs::Family::bilinear)
      .value("power", gsirs::Family::power)
      .value("saturated_in_I", gsirs::Family::saturated_in_I)
      .value("psi_ratio", gsirs::Family::psi_ratio)
      .value("ruan", gsirs::Family::ruan);

  py::enum_<gsirs::Method>(m, "Method")
      .value("rk4_fixed", gsirs::Method::rk4_fixed)
      .value("rk45_adaptive", gsirs::Method::rk45_adaptive);

  py::class_<gsirs::ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double, double, double, double>(), "Lambda"_a, "mu"_a,
           "gamma1"_a, "gamma2"_a, "alpha"_a, "delta"_a)
      .def_property_readonly("Lambda", &gsirs::ModelParams::Lambda)
      .def_property_readonly("mu", &gsirs::ModelParams::mu)
      .def_property_readonly("gamma1", &gsirs::ModelParams::gamma1)
      .def_property_readonly("gamma2", &gsirs::ModelParams::gamma2)
      .def_property_readonly("alpha", &gsirs::ModelParams::alpha)
      .def_property_readonly("delta", &gsirs::ModelParams::delta)
      .def_property_readonly("S0", &gsirs::ModelParams::S0)
      .def("__repr__", [](const gsirs::ModelParams& p) { return "ModelParams(" + p.describe() + ")"; });

  py::class_<gsirs::State>(m, "State")
      .def(py::init<>())
      .def(py::init([](double S, double I, double R) { return gsirs::State{S, I, R}; }), "S"_a,
           "I"_a, "R"_a)
      .def_readwrite("S", &gsirs::State::S)
      .def_readwrite("I", &gsirs::State::I)
      .def_readwrite("R", &gsirs::State::R)
      .def("total", &gsirs::State::total)
      .def("as_tuple", [](const gsirs::State& x) { return py::make_tuple(x.S, x.I, x.R); })
      .def("__eq__", [](const gsirs::State& a, const gsirs::State& b) { return a == b; })
      .def("__repr__", &repr_state);

  py::class_<gsirs::IncidenceFunction>(m, "IncidenceFunction")
      .def_static(
          "custom",
          [](std::string label, py::function f, std::optional<py::function> f1,
             std::optional<py::function> df1_dS, std::optional<py::function> df1_dI) {
            std::optional<gsirs::ScalarField> f1_field;
            if (f1) f1_field = wrap_callable(*f1);
            std::optional<gsirs::Partials> partials;
            if (df1_dS && df1_dI) partials = gsirs::Partials{wrap_callable(*df1_dS), wrap_callable(*df1_dI)};
            return gsirs::IncidenceFunction::custom(std::move(label), wrap_callable(std::move(f)),
                                                    std::move(f1_field), std::move(partials));
          },
          "label"_a, "f"_a, "f1"_a = py::none(), "df1_dS"_a = py::none(), "df1_dI"_a = py::none())
      .def("f", &gsirs::IncidenceFunction::f, "S"_a, "I"_a)
      .def("f1", &gsirs::IncidenceFunction::f1, "S"_a, "I"_a)
      .def("df1_dS", &gsirs::IncidenceFunction::df1_dS, "S"_a, "I"_a)
      .def("df1_dI", &gsirs::IncidenceFunction::df1_dI, "S"_a, "I"_a)
      .def_property_readonly("label", &gsirs::IncidenceFunction::label)
      .def_property_readonly("has_analytic_partials",
                             &gsirs::IncidenceFunction::has_analytic_partials)
      .def("__repr__", [](const gsirs::IncidenceFunction& f) {
        return "IncidenceFunction(" + f.label() + ")";
      });

  m.def("make_builtin",
        py::overload_cast<std::string_view, const gsirs::Coefficients&>(&gsirs::make_builtin),
        "family"_a, "coefficients"_a);

  py::class_<gsirs::Violation>(m, "Violation")
      .def_readonly("hypothesis", &gsirs::Violation::hypothesis)
      .def_readonly("S", &gsirs::Violation::S)
      .def_readonly("I", &gsirs::Violation::I)
      .def_readonly("observed", &gsirs::Violation::observed);

  py::class_<gsirs::HypothesisReport>(m, "HypothesisReport")
      .def_readonly("h1_pass", &gsirs::HypothesisReport::h1_pass)
      .def_readonly("h2_pass", &gsirs::HypothesisReport::h2_pass)
      .def_readonly("h3_pass", &gsirs::HypothesisReport::h3_pass)
      .def_readonly("h3_limit_at", &gsirs::HypothesisReport::h3_limit_at)
      .def_readonly("violations", &gsirs::HypothesisReport::violations)
      .def_readonly("h2_boundary_degenerate", &gsirs::HypothesisReport::h2_boundary_degenerate)
      .def_property_readonly("all_pass", &gsirs::HypothesisReport::all_pass);

  m.def("check_hypotheses", &gsirs::check_hypotheses, "f"_a, "S_max"_a, "grid_n"_a = 41,
        "eps"_a = 1e-4, release_gil());
  m.def("compute_beta", &gsirs::compute_beta, "f"_a, "Lambda"_a, "mu"_a, "eps"_a = 1e-4);

  py::class_<gsirs::BoundCheck>(m, "BoundCheck")
      .def_readonly("passed", &gsirs::BoundCheck::pass)
      .def_readonly("min_slack", &gsirs::BoundCheck::min_slack)
      .def_readonly("S_at", &gsirs::BoundCheck::S_at)
      .def_readonly("I_at", &gsirs::BoundCheck::I_at);
  m.def("check_lemma1_bound", &gsirs::check_lemma1_bound, "f"_a, "Lambda"_a, "mu"_a,
        "grid_n"_a = 101, release_gil());

  m.def("vector_field", [](const gsirs::ModelParams& p, const gsirs::IncidenceFunction& f,
                           const gsirs::State& x) {
    const auto d = gsirs::vector_field(p, f, x);
    return py::make_tuple(d.dS, d.dI, d.dR);
  }, "p"_a, "f"_a, "x"_a);
  m.def("dfe", &gsirs::dfe, "p"_a);
  m.def("r0", &gsirs::r0, "p"_a, "f"_a, "eps"_a = 1e-4);
  m.def("in_omega", &gsirs::in_omega, "p"_a, "x"_a, "tol"_a = 1e-9);
  m.def("line_q1", &gsirs::line_q1, "p"_a, "I"_a);

  py::class_<gsirs::EndemicPoint>(m, "EndemicPoint")
      .def_readonly("state", &gsirs::EndemicPoint::state)
      .def_readonly("residual", &gsirs::EndemicPoint::residual);
  py::class_<gsirs::EquilibriumReport>(m, "EquilibriumReport")
      .def_readonly("dfe", &gsirs::EquilibriumReport::dfe)
      .def_readonly("endemic", &gsirs::EquilibriumReport::endemic)
      .def_readonly("r0", &gsirs::EquilibriumReport::r0)
      .def_readonly("beta", &gsirs::EquilibriumReport::beta)
      .def_readonly("I0", &gsirs::EquilibriumReport::I0)
      .def_readonly("S_star_curve", &gsirs::EquilibriumReport::S_star_curve);
  m.def("find_endemic", &gsirs::find_endemic, "p"_a, "f"_a, "tol"_a = 1e-10,
        "n_brackets"_a = 256, release_gil());
  m.def("verify_equilibrium", &gsirs::verify_equilibrium, "p"_a, "f"_a, "x"_a);

  py::class_<gsirs::A1Check>(m, "A1Check")
      .def_readonly("passed", &gsirs::A1Check::pass)
      .def_readonly("lhs", &gsirs::A1Check::lhs)
      .def_readonly("rhs", &gsirs::A1Check::rhs)
      .def_readonly("margin", &gsirs::A1Check::margin)
      .def_readonly("remark_value", &gsirs::A1Check::remark_value);
  m.def("check_a1", &gsirs::check_a1, "p"_a);
  m.def("big_g", &gsirs::big_g, "f"_a, "eq"_a, "u"_a, "v"_a);

  py::class_<gsirs::A2Check>(m, "A2Check")
      .def_readonly("sup_h", &gsirs::A2Check::sup_h)
      .def_readonly("u_at", &gsirs::A2Check::u_at)
      .def_readonly("v_at", &gsirs::A2Check::v_at)
      .def_readonly("bound", &gsirs::A2Check::bound)
      .def_readonly("divergence_flag", &gsirs::A2Check::divergence_flag)
      .def_readonly("passed", &gsirs::A2Check::pass);
  m.def("check_a2", &gsirs::check_a2, "p"_a, "f"_a, "eq"_a, "k1"_a, "grid_n"_a = 201,
        "exclusion"_a = 0.0, release_gil());
  m.def("find_k1", &gsirs::find_k1, "p"_a, "f"_a, "eq"_a, "grid_n"_a = 201, release_gil());
  m.def("lyapunov_v", &gsirs::lyapunov_v, "eq"_a, "k1"_a, "k2"_a, "x"_a);

  py::class_<gsirs::DvdtScan>(m, "DvdtScan")
      .def_readonly("max_dvdt", &gsirs::DvdtScan::max_dvdt)
      .def_readonly("at", &gsirs::DvdtScan::at)
      .def_readonly("samples", &gsirs::DvdtScan::samples)
      .def_readonly("k2", &gsirs::DvdtScan::k2);
  m.def("dvdt_scan", &gsirs::dvdt_scan, "p"_a, "f"_a, "eq"_a, "k1"_a, "k2"_a = py::none(),
        "grid_n"_a = 41, "ball"_a = 0.05, release_gil());

  py::class_<gsirs::PQMatrices>(m, "PQMatrices")
      .def_property_readonly("P", [](const gsirs::PQMatrices& m) {
        return std::array<std::array<double, 2>, 2>{{{m.P.a11, m.P.a12}, {m.P.a12, m.P.a22}}};
      })
      .def_property_readonly("Q", [](const gsirs::PQMatrices& m) {
        return std::array<std::array<double, 2>, 2>{{{m.Q.a11, m.Q.a12}, {m.Q.a12, m.Q.a22}}};
      })
      .def_readonly("p_minors", &gsirs::PQMatrices::p_minors)
      .def_readonly("q_minors", &gsirs::PQMatrices::q_minors);
  m.def("pq_matrices", &gsirs::pq_matrices, "p"_a, "f"_a, "eq"_a, "k1"_a, "k2"_a, "S"_a, "I"_a);

  py::class_<gsirs::DfeBound>(m, "DfeBound")
      .def_readonly("holds", &gsirs::DfeBound::holds)
      .def_readonly("worst_slack", &gsirs::DfeBound::worst_slack)
      .def_readonly("max_didt", &gsirs::DfeBound::max_didt);
  m.def("dfe_lyapunov_bound", &gsirs::dfe_lyapunov_bound, "p"_a, "f"_a, "grid_n"_a = 101,
        release_gil());

  py::class_<gsirs::CertificateReport>(m, "CertificateReport")
      .def_readonly("a1", &gsirs::CertificateReport::a1)
      .def_readonly("k1", &gsirs::CertificateReport::k1)
      .def_readonly("k1_candidate", &gsirs::CertificateReport::k1_candidate)
      .def_readonly("k2", &gsirs::CertificateReport::k2)
      .def_readonly("a2", &gsirs::CertificateReport::a2)
      .def_readonly("h_bound", &gsirs::CertificateReport::h_bound)
      .def_readonly("dvdt", &gsirs::CertificateReport::dvdt)
      .def_readonly("granted", &gsirs::CertificateReport::granted)
      .def_readonly("notes", &gsirs::CertificateReport::notes);
  m.def(
      "certify",
      [](const gsirs::ModelParams& p, const gsirs::IncidenceFunction& f, const gsirs::State& eq,
         std::optional<double> k1, std::optional<double> k2, int grid_n, int dvdt_grid_n) {
        gsirs::CertificateOptions opt;
        opt.k1 = k1;
        opt.k2 = k2;
        opt.grid_n = grid_n;
        opt.dvdt_grid_n = dvdt_grid_n;
        return gsirs::certify(p, f, eq, opt);
      },
      "p"_a, "f"_a, "eq"_a, "k1"_a = py::none(), "k2"_a = py::none(), "grid_n"_a = 201,
      "dvdt_grid_n"_a = 41, release_gil());

  py::class_<gsirs::StepStats>(m, "StepStats")
      .def_readonly("steps", &gsirs::StepStats::steps)
      .def_readonly("rejected", &gsirs::StepStats::rejected)
      .def_readonly("max_error", &gsirs::StepStats::max_error);

  py::class_<gsirs::Trajectory>(m, "Trajectory")
      .def_readonly("times", &gsirs::Trajectory::times)
      .def_readonly("states", &gsirs::Trajectory::states)
      .def_readonly("params_id", &gsirs::Trajectory::params_id)
      .def_readonly("step_stats", &gsirs::Trajectory::step_stats)
      .def("final_state", &gsirs::Trajectory::final_state)
      .def("as_array", [](const gsirs::Trajectory& t) {
        py::array_t<double> out({static_cast<py::ssize_t>(t.times.size()), py::ssize_t{4}});
        auto a = out.mutable_unchecked<2>();
        for (std::size_t k = 0; k < t.times.size(); ++k) {
          const auto i = static_cast<py::ssize_t>(k);
          a(i, 0) = t.times[k];
          a(i, 1) = t.states[k].S;
          a(i, 2) = t.states[k].I;
          a(i, 3) = t.states[k].R;
        }
        return out;
      }, "Columns t, S, I, R.");

  m.def("integrate", &gsirs::integrate, "p"_a, "f"_a, "x0"_a, "t_end"_a,
        "method"_a = gsirs::Method::rk45_adaptive, "step_or_tol"_a = 1e-8,
        "max_points"_a = gsirs::kDefaultMaxPoints, release_gil());

  py::class_<gsirs::SweepRun>(m, "SweepRun")
      .def_readonly("initial", &gsirs::SweepRun::initial)
      .def_readonly("final_state", &gsirs::SweepRun::final_state)
      .def_readonly("distance", &gsirs::SweepRun::distance)
      .def_readonly("error", &gsirs::SweepRun::error);
  py::class_<gsirs::SweepReport>(m, "SweepReport")
      .def_readonly("target", &gsirs::SweepReport::target)
      .def_readonly("target_is_endemic", &gsirs::SweepReport::target_is_endemic)
      .def_readonly("runs", &gsirs::SweepReport::runs)
      .def_readonly("converged_fraction", &gsirs::SweepReport::converged_fraction);
  m.def("sweep", &gsirs::sweep, "p"_a, "f"_a, "initials"_a, "t_end"_a = 500.0,
        "conv_tol"_a = 1e-2, "keep_points"_a = 0, release_gil());
  m.def("omega_lattice", &gsirs::omega_lattice, "p"_a, "n"_a);
  m.def("conservation_check", &gsirs::conservation_check, "traj"_a, "p"_a, "f"_a);

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
