#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "superint/charts.hpp"
#include "superint/runner.hpp"

namespace py = pybind11;

using superint::models::AngularProfile;
using superint::phase::HamiltonianSystem;
using superint::phase::Observable;
using superint::phase::PhaseState;

namespace {

PhaseState state_from(const std::vector<double>& q, const std::vector<double>& p) {
  if (q.size() != p.size() || (q.size() != 2 && q.size() != 3))
    throw py::value_error("q and p must both have length 2 or 3");
  PhaseState z;
  z.n = static_cast<int>(q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    z.q[i] = q[i];
    z.p[i] = p[i];
  }
  return z;
}

superint::num::Vec3 vec3_from(const std::vector<double>& x) {
  if (x.size() != 3) throw py::value_error("expected a 3-vector");
  return {x[0], x[1], x[2]};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hamiltonian systems, first integrals and verification suites for "
            "the three-body inverse-square model and its axial family";

  py::register_exception<superint::num::SingularityError>(m, "SingularityError");
  py::register_exception<superint::runner::ConfigError>(m, "ConfigError");

  py::class_<AngularProfile>(m, "AngularProfile")
      .def(py::init<>())
      .def_static("constant", &AngularProfile::constant)
      .def("add_inverse_square", &AngularProfile::add_inverse_square, py::arg("c"),
           py::arg("alpha"), py::arg("beta"))
      .def("add_fourier", &AngularProfile::add_fourier, py::arg("m"), py::arg("a"), py::arg("b"))
      .def("add_constant", &AngularProfile::add_constant)
      .def("__call__", [](const AngularProfile& k, double phi) { return k(phi); });

  py::class_<Observable>(m, "Observable")
      .def_property_readonly("label", &Observable::label)
      .def_property_readonly("dim", &Observable::dim)
      .def("__call__",
           [](const Observable& f, const std::vector<double>& q, const std::vector<double>& p) {
             return f(state_from(q, p));
           })
      .def("gradient",
           [](const Observable& f, const std::vector<double>& q, const std::vector<double>& p) {
             return f.gradient(state_from(q, p));
           });

  py::class_<HamiltonianSystem>(m, "HamiltonianSystem")
      .def_property_readonly("label", &HamiltonianSystem::label)
      .def_property_readonly("dim", &HamiltonianSystem::dim)
      .def_property_readonly("kinetic_factor", &HamiltonianSystem::kinetic_factor)
      .def("potential", &HamiltonianSystem::potential)
      .def("hamiltonian", &HamiltonianSystem::hamiltonian)
      .def("vector_field",
           [](const HamiltonianSystem& s, const std::vector<double>& q,
              const std::vector<double>& p) { return s.vector_field(state_from(q, p)); });

  py::class_<superint::integrals::IntegralSet>(m, "IntegralSet")
      .def_property_readonly("label", &superint::integrals::IntegralSet::label)
      .def_property_readonly("expected_rank", &superint::integrals::IntegralSet::expected_rank)
      .def("labels",
           [](const superint::integrals::IntegralSet& s) {
             std::vector<std::string> out;
             for (const auto& o : s.members()) out.push_back(o.label());
             return out;
           })
      .def("member", [](const superint::integrals::IntegralSet& s, int i) {
        return s.members().at(static_cast<size_t>(i));
      });

  m.def("calogero_three_body", &superint::models::calogero_three_body, py::arg("omega"),
        py::arg("g1"), py::arg("g2"), py::arg("g3"));
  m.def("calogero_reduced_2d", &superint::models::calogero_reduced_2d, py::arg("omega"),
        py::arg("g1"), py::arg("g2"), py::arg("g3"));
  m.def("rotational_family", &superint::models::rotational_family);
  m.def("calogero_profile", &superint::models::calogero_profile, py::arg("g1"), py::arg("g2"),
        py::arg("g3"));
  m.def("catalog_rotational", &superint::integrals::catalog_rotational);
  m.def("catalog_coordinate_planes",
        [](double c1, double c2, double c3) {
          return superint::integrals::catalog_coordinate_planes(c1, c2, c3, {{1.0, 2}});
        },
        py::arg("c1"), py::arg("c2"), py::arg("c3"));

  m.def("poisson_bracket",
        [](const Observable& a, const Observable& b, const std::vector<double>& q,
           const std::vector<double>& p) { return superint::phase::poisson_bracket(a, b, state_from(q, p)); });

  m.def("numerical_rank",
        [](const std::vector<std::vector<double>>& rows, double rel_tol) {
          if (rows.empty()) return 0;
          superint::num::Mat a(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
          for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size()) throw py::value_error("ragged matrix");
            for (size_t j = 0; j < rows[i].size(); ++j)
              a(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
          }
          return superint::num::numerical_rank(a, rel_tol);
        },
        py::arg("rows"), py::arg("rel_tol") = 1e-8);

  m.def("linear_connection_residual",
        [](const std::vector<double>& q, const std::vector<double>& p, const AngularProfile& k) {
          const auto r = superint::integrals::linear_connection_residual(state_from(q, p), k);
          return py::make_tuple(r.residual, r.term_scale);
        });

  m.def("rotation_tr",
        [](const std::vector<double>& xt) {
          const auto x = superint::charts::rotation_tr(vec3_from(xt));
          return std::vector<double>(x.begin(), x.end());
        });
  m.def("jacobi_transform", [](const std::vector<double>& x) {
    const auto j = superint::charts::jacobi_transform(vec3_from(x));
    return py::make_tuple(j.R, j.rho, j.lambda);
  });
  m.def("chart_map",
        [](const std::string& name, double focal, const std::vector<double>& u) {
          const auto kind = superint::charts::chart_from_name(name);
          if (!kind) throw py::value_error("unknown chart " + name);
          const auto x = superint::charts::Chart(*kind, focal).forward(vec3_from(u));
          return std::vector<double>(x.begin(), x.end());
        },
        py::arg("name"), py::arg("focal"), py::arg("u"));
  m.def("chart_inverse",
        [](const std::string& name, double focal, const std::vector<double>& x) {
          const auto kind = superint::charts::chart_from_name(name);
          if (!kind) throw py::value_error("unknown chart " + name);
          const auto u = superint::charts::Chart(*kind, focal).inverse(vec3_from(x));
          return std::vector<double>(u.begin(), u.end());
        },
        py::arg("name"), py::arg("focal"), py::arg("x"));

  m.def("conservation_report",
        [](const superint::integrals::IntegralSet& set, int samples, uint64_t seed) {
          superint::verify::SampleOptions opt;
          opt.n_samples = samples;
          opt.seed = seed;
          return superint::verify::conservation_suite(set, opt).to_json().dump();
        },
        py::arg("set"), py::arg("samples") = 100, py::arg("seed") = 0x5EED);

  m.def("integrate",
        [](const HamiltonianSystem& sys, const std::vector<double>& q,
           const std::vector<double>& p, double dt, double duration, const std::string& method) {
          const auto tr = superint::dynamics::integrate(
              sys, state_from(q, p), dt, duration,
              superint::dynamics::integrator_from_name(method));
          py::dict out;
          out["times"] = tr.times;
          std::vector<std::vector<double>> qs, ps;
          for (const auto& z : tr.states) {
            qs.emplace_back(z.q.begin(), z.q.begin() + z.n);
            ps.emplace_back(z.p.begin(), z.p.begin() + z.n);
          }
          out["q"] = qs;
          out["p"] = ps;
          out["status"] = tr.status == superint::dynamics::RunStatus::completed ? "completed"
                          : tr.status == superint::dynamics::RunStatus::truncated_singularity
                              ? "truncated-singularity"
                              : "escaping";
          return out;
        },
        py::arg("system"), py::arg("q"), py::arg("p"), py::arg("dt"), py::arg("duration"),
        py::arg("method") = "yoshida-4");

  m.def("closure_probe",
        [](const HamiltonianSystem& sys, const std::vector<double>& q,
           const std::vector<double>& p, double t_max, double eps, double dt) {
          const auto r =
              superint::dynamics::closure_probe(sys, state_from(q, p), t_max, eps, dt);
          py::dict out;
          out["closed"] = r.closed;
          out["closed_at"] = r.closed_at;
          out["min_distance"] = r.min_distance;
          return out;
        },
        py::arg("system"), py::arg("q"), py::arg("p"), py::arg("t_max"), py::arg("eps") = 1e-3,
        py::arg("dt") = 1e-3);

  m.def("run_preset",
        [](const std::string& name, const std::string& out_dir, int samples, uint64_t seed) {
          auto cfg = superint::runner::parse_config(superint::runner::preset(name));
          cfg.samples = samples;
          cfg.seed = seed;
          const auto outcome = superint::runner::run(cfg, out_dir);
          return py::make_tuple(outcome.exit_code, outcome.report.dump());
        },
        py::arg("name"), py::arg("out_dir") = ".", py::arg("samples") = 50,
        py::arg("seed") = 0x5EED);

  m.def("preset_names", &superint::runner::preset_names);

  m.attr("__version__") = "0.1.0";
}
