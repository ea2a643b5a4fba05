#include "superint/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <thread>

#include "superint/charts.hpp"

namespace superint::verify {

namespace {

using num::sq;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;

int thread_count(const SampleOptions& opt, size_t work) {
  int n = opt.threads;
  if (n <= 0) {
    if (const char* env = std::getenv("SUPERINT_THREADS")) n = std::atoi(env);
    if (n <= 0) n = std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
  }
  return std::max(1, std::min<int>(n, static_cast<int>(work)));
}

/// Order-independent max reduction over precomputed samples.
double max_over(const std::vector<PhaseState>& zs, int threads,
                const std::function<double(const PhaseState&)>& f) {
  if (threads <= 1 || zs.size() < 8) {
    double m = 0.0;
    for (const auto& z : zs) m = std::max(m, f(z));
    return m;
  }
  std::vector<double> partial(static_cast<size_t>(threads), 0.0);
  std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        double m = 0.0;
        for (size_t i = static_cast<size_t>(t); i < zs.size(); i += static_cast<size_t>(threads))
          m = std::max(m, f(zs[i]));
        partial[static_cast<size_t>(t)] = m;
      } catch (...) {
        errors[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  double m = 0.0;
  for (double v : partial) m = std::max(m, v);
  return m;
}

json case_json(const CaseResult& c) {
  json j;
  j["label"] = c.label;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["negative_control"] = c.negative_control;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

CaseResult make_case(std::string label, double residual, double tol, const SampleOptions& opt,
                     bool negative = false, std::string note = {}) {
  CaseResult c;
  c.label = std::move(label);
  c.residual = residual;
  c.tolerance = tol;
  c.pass = residual <= tol;
  c.samples = opt.n_samples;
  c.seed = opt.seed;
  c.negative_control = negative;
  c.note = std::move(note);
  return c;
}

}  // namespace

json VerificationReport::to_json() const {
  json j;
  j["suite"] = suite;
  j["cases"] = json::array();
  for (const auto& c : cases) j["cases"].push_back(case_json(c));
  j["discrepancies"] = json::array();
  for (const auto& d : discrepancies) {
    json e;
    e["equation"] = d.equation;
    e["term"] = d.term;
    e["measured"] = d.measured;
    e["printed"] = d.printed;
    e["ratio"] = d.ratio;
    if (!d.note.empty()) e["note"] = d.note;
    j["discrepancies"].push_back(e);
  }
  j["ok"] = all_ok();
  if (!extra.is_null()) j["detail"] = extra;
  return j;
}

std::vector<PhaseState> draw_states(const IntegralSet& set, const SampleOptions& opt) {
  num::Rng rng(opt.seed);
  const int n = set.system().dim();
  std::vector<PhaseState> out;
  out.reserve(static_cast<size_t>(opt.n_samples));
  long attempts = 0, rejected = 0;
  const long cap = std::max(2000L, 100L * opt.n_samples);
  while (static_cast<int>(out.size()) < opt.n_samples) {
    if (attempts >= cap || (attempts >= 200 && rejected > 0.9 * attempts))
      throw num::SamplingError("draw_states: more than 90% of samples rejected");
    ++attempts;
    PhaseState z;
    z.n = n;
    for (int i = 0; i < n; ++i) {
      z.q[static_cast<size_t>(i)] = rng.uniform(opt.q_lo, opt.q_hi);
      z.p[static_cast<size_t>(i)] = rng.uniform(opt.p_lo, opt.p_hi);
    }
    if (set.margin(z) < opt.reject_margin) {
      ++rejected;
      continue;
    }
    out.push_back(z);
  }
  return out;
}

VerificationReport conservation_suite(const IntegralSet& set, const SampleOptions& opt, double tol,
                                      bool with_negative_control) {
  VerificationReport rep;
  rep.suite = "conservation";
  const auto zs = draw_states(set, opt);
  const int threads = thread_count(opt, zs.size());
  const auto& h = set.members().front();
  for (size_t m = 1; m < set.members().size(); ++m) {
    const auto& f = set.members()[m];
    const double worst = max_over(zs, threads, [&](const PhaseState& z) {
      return phase::poisson_bracket_normalized(h, f, z).normalized();
    });
    rep.cases.push_back(
        make_case("eq:" + set.equation_tag() + " {H," + f.label() + "}", worst, tol, opt));
  }
  if (with_negative_control) {
    const auto q1 = phase::coordinate_observable(0, set.system().dim());
    const double worst = max_over(zs, threads, [&](const PhaseState& z) {
      return phase::poisson_bracket_normalized(h, q1, z).normalized();
    });
    rep.cases.push_back(make_case("negative-control {H,q1}", worst, tol, opt, true,
                                  "coordinate must not be conserved"));
  }
  return rep;
}

VerificationReport independence_suite(const IntegralSet& set, const SampleOptions& opt,
                                      double rank_tol, bool with_dependence_check) {
  VerificationReport rep;
  rep.suite = "independence";
  const auto zs = draw_states(set, opt);
  const int n = set.system().dim();

  auto modal_rank = [&](const std::vector<phase::Observable>& obs, std::string label,
                        int expected) {
    std::map<int, int> histogram;
    int rmin = 1 << 20, rmax = 0;
    for (const auto& z : zs) {
      num::Mat jac(static_cast<int>(obs.size()), 2 * n);
      for (size_t i = 0; i < obs.size(); ++i) {
        const auto g = obs[i].gradient(z);
        for (int c = 0; c < 2 * n; ++c) jac(static_cast<int>(i), c) = g[static_cast<size_t>(c)];
      }
      const int r = num::numerical_rank(jac, rank_tol);
      histogram[r] += 1;
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    int modal = 0, best = -1;
    for (auto [r, cnt] : histogram)
      if (cnt > best) {
        best = cnt;
        modal = r;
      }
    CaseResult c = make_case(std::move(label), std::abs(modal - expected), 0.0, opt);
    c.note = "modal=" + std::to_string(modal) + " min=" + std::to_string(rmin) +
             " max=" + std::to_string(rmax) + " expected=" + std::to_string(expected);
    rep.cases.push_back(c);
    return modal;
  };

  const int modal = modal_rank(set.members(), "eq:" + set.equation_tag() + " rank(members)",
                               set.expected_rank());
  if (set.printed_rank() && *set.printed_rank() != modal) {
    Discrepancy d;
    d.equation = set.equation_tag();
    d.term = "generic Jacobian rank";
    d.measured = modal;
    d.printed = *set.printed_rank();
    d.ratio = static_cast<double>(modal) / *set.printed_rank();
    d.note = set.printed_rank_note();
    rep.discrepancies.push_back(d);
  }

  if (with_dependence_check && set.members().size() >= 2) {
    const auto& h = set.members()[0];
    const auto& f = set.members()[std::min<size_t>(2, set.members().size() - 1)];
    std::vector<phase::Observable> dep = {h, f, (f * f).renamed(f.label() + "^2")};
    modal_rank(dep,
               "dependence-detection rank(H," + f.label() + "," + f.label() + "^2)", 2);
  }
  return rep;
}

VerificationReport involution_suite(const IntegralSet& set, const SampleOptions& opt, double tol) {
  if (set.involutive_pairs().empty())
    throw std::invalid_argument("involution_suite: no declared pairs");
  VerificationReport rep;
  rep.suite = "involution";
  const auto zs = draw_states(set, opt);
  const int threads = thread_count(opt, zs.size());
  const auto& m = set.members();

  auto pair_residual = [&](int i, int j) {
    return max_over(zs, threads, [&](const PhaseState& z) {
      return phase::poisson_bracket_normalized(m[static_cast<size_t>(i)], m[static_cast<size_t>(j)], z)
          .normalized();
    });
  };

  for (const auto& pr : set.involutive_pairs()) {
    rep.cases.push_back(make_case("eq:" + set.equation_tag() + " {" +
                                      m[static_cast<size_t>(pr.i)].label() + "," +
                                      m[static_cast<size_t>(pr.j)].label() + "} " + pr.chart,
                                  pair_residual(pr.i, pr.j), tol, opt));
  }
  if (auto w = set.noninvolutive_witness()) {
    rep.cases.push_back(make_case("negative-control {" + m[static_cast<size_t>(w->first)].label() +
                                      "," + m[static_cast<size_t>(w->second)].label() + "}",
                                  pair_residual(w->first, w->second), tol, opt, true,
                                  "pair is not in involution"));
  }
  json table = json::array();
  for (size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < m.size(); ++j)
      row.push_back(j <= i ? 0.0 : pair_residual(static_cast<int>(i), static_cast<int>(j)));
    table.push_back(row);
  }
  json labels = json::array();
  for (const auto& o : m) labels.push_back(o.label());
  rep.extra["bracket_table"] = table;
  rep.extra["members"] = labels;
  return rep;
}

VerificationReport linear_connection_suite(const AngularProfile& k, const SampleOptions& opt,
                                           double tol) {
  VerificationReport rep;
  rep.suite = "linear-connection";
  const auto set = integrals::catalog_rotational(k);
  const auto zs = draw_states(set, opt);
  const int threads = thread_count(opt, zs.size());
  const double worst = max_over(zs, threads, [&](const PhaseState& z) {
    const auto r = integrals::linear_connection_residual(set, z);
    return std::abs(r.residual) / std::max(r.term_scale, 1e-300);
  });
  rep.cases.push_back(make_case("eq:2.14 linear-connection residual", worst, tol, opt,
                                false, "relative to the largest term"));
  {  // perturbing one coefficient must break the identity
    const double perturbed = max_over(zs, threads, [&](const PhaseState& z) {
      const auto& m = set.members();
      const double r2 = sq(z.q[0]) + sq(z.q[1]) + sq(z.q[2]);
      const std::array<double, 5> f = {2.0 * sq(z.q[2]), 1.0, -1.0, -2.0 * r2, 1.01 * z.q[2]};
      double sum = 0.0, scale = 0.0;
      for (int i = 0; i < 5; ++i) {
        const double term = f[static_cast<size_t>(i)] * m[static_cast<size_t>(i)](z);
        sum += term;
        scale = std::max(scale, std::abs(term));
      }
      return std::abs(sum) / std::max(scale, 1e-300);
    });
    rep.cases.push_back(make_case("negative-control perturbed coefficient", perturbed, tol, opt,
                                  true, "f4 scaled by 1.01"));
  }
  return rep;
}

VerificationReport equivalence_suite(double g1, double g2, double g3, const SampleOptions& opt) {
  VerificationReport rep;
  rep.suite = "equivalence";
  const num::Mat3 m = charts::rotation_matrix();

  {  // orthogonality and unit determinant
    const num::Mat3 defect = m.transposed() * m - num::Mat3::identity();
    CaseResult c = make_case("eq:2.8 rotation orthogonality", defect.max_abs(), 1e-15, opt);
    c.note = "det=" + std::to_string(m.det());
    rep.cases.push_back(c);
  }

  const auto chain = models::calogero_three_body(0.0, g1, g2, g3);
  const auto profile = models::calogero_profile(g1, g2, g3);
  auto v_of_xt = [&](const num::Vec3& xt) {
    PhaseState z;
    z.n = 3;
    z.q = m.apply(xt);
    return chain.potential()(z);
  };

  num::Rng rng(opt.seed);
  {  // radius and x3t independence of (x1t^2+x2t^2) V(M xt)
    double worst_r = 0.0, worst_z = 0.0;
    int done = 0;
    while (done < 64) {
      const double phi = rng.uniform(0.0, 2.0 * kPi);
      // stay off the collision rays, mirroring the state sampler's margin
      if (profile.ray_margin(std::cos(phi), std::sin(phi)) < 1e-2) continue;
      const double z1 = rng.uniform(-2.0, 2.0), z2 = rng.uniform(-2.0, 2.0);
      const double r1 = rng.uniform(0.5, 1.5), r2 = rng.uniform(1.6, 3.0);
      const num::Vec3 a{r1 * std::cos(phi), r1 * std::sin(phi), z1};
      const num::Vec3 b{r2 * std::cos(phi), r2 * std::sin(phi), z1};
      const num::Vec3 c{r1 * std::cos(phi), r1 * std::sin(phi), z2};
      const double ka = v_of_xt(a) * (r1 * r1);
      const double kb = v_of_xt(b) * (r2 * r2);
      const double kc = v_of_xt(c) * (r1 * r1);
      const double scale = std::max({std::abs(ka), std::abs(kb), 1.0});
      worst_r = std::max(worst_r, std::abs(ka - kb) / scale);
      worst_z = std::max(worst_z, std::abs(ka - kc) / scale);
      ++done;
    }
    rep.cases.push_back(make_case("eq:2.16 radius-independence", worst_r, 1e-12, opt));
    rep.cases.push_back(make_case("eq:2.16 axial-independence", worst_z, 1e-12, opt));
  }

  {  // extracted profile matches the constructed one at 32 angles
    double worst = 0.0;
    double spread = 0.0;  // the profile itself must vary with the angle
    double prev = 0.0;
    bool have_prev = false;
    for (int j = 0; j < 32; ++j) {
      const double phi = 2.0 * kPi * (j + 0.37) / 32.0;
      const num::Vec3 xt{std::cos(phi), std::sin(phi), 0.7};
      double extracted;
      try {
        extracted = v_of_xt(xt);
      } catch (const num::SingularityError&) {
        continue;
      }
      const double built = profile(phi);
      worst = std::max(worst, std::abs(extracted - built) / std::max(1.0, std::abs(built)));
      if (have_prev) spread = std::max(spread, std::abs(extracted - prev));
      prev = extracted;
      have_prev = true;
    }
    rep.cases.push_back(make_case("eq:2.12 profile-match 32 angles", worst, 1e-12, opt));
    if (!profile.inverse_square_terms().empty() || !profile.fourier_terms().empty())
      rep.cases.push_back(make_case("negative-control angle-dependence", spread, 1e-12, opt, true,
                                    "the angular strength is not a constant"));
  }

  // ---- measured-vs-printed coefficient table ----------------------------
  auto add = [&rep](std::string eq, std::string term, double measured, double printed,
                    std::string note = {}) {
    Discrepancy d;
    d.equation = std::move(eq);
    d.term = std::move(term);
    d.measured = measured;
    d.printed = printed;
    d.ratio = printed != 0.0 ? measured / printed : std::numeric_limits<double>::quiet_NaN();
    d.note = std::move(note);
    rep.discrepancies.push_back(d);
  };

  {  // relative-coordinate pair as printed is not orthonormal
    const double dot = (1.0 / std::sqrt(2.0)) * (1.0 / std::sqrt(6.0)) * (1.0 + 1.0);
    add("1.2", "rho.lambda_printed orthogonality defect", dot, 0.0,
        "printed lambda uses x1-x2-2x3; implementation uses x1+x2-2x3");
  }

  const double s3 = std::sqrt(3.0);
  {  // reduced-coordinates potential, term by term, from the chain oracle
    const double rho = 0.71, lam = 0.43, R = 0.29;
    auto chain_at = [&](double gg1, double gg2, double gg3, double om) {
      const auto sys = models::calogero_three_body(om, gg1, gg2, gg3);
      PhaseState z;
      z.n = 3;
      z.q = charts::jacobi_inverse({R, rho, lam});
      return sys.potential()(z);
    };
    add("1.3", "g1/(sqrt3*lambda-rho)^2", chain_at(1, 0, 0, 0) * sq(s3 * lam - rho), 0.5);
    add("1.3", "g2/(sqrt3*lambda+rho)^2", chain_at(0, 1, 0, 0) * sq(s3 * lam + rho), 0.5);
    add("1.3", "g3/rho^2", chain_at(0, 0, 1, 0) * sq(rho), 0.5);
    add("1.3", "omega^2(rho^2+lambda^2)", chain_at(0, 0, 0, 1) / (sq(rho) + sq(lam)), 3.0 / 8.0);
  }

  {  // rotated-frame potential, term by term
    const num::Vec3 xt{0.67, 0.41, 0.53};
    auto rotated_at = [&](double gg1, double gg2, double gg3) {
      const auto sys = models::calogero_three_body(0.0, gg1, gg2, gg3);
      PhaseState z;
      z.n = 3;
      z.q = m.apply(xt);
      return sys.potential()(z);
    };
    add("2.9", "1/x2t^2", rotated_at(1, 0, 0) * sq(xt[1]), 2.0);
    add("2.9", "1/(sqrt3*x1t+x2t)^2", rotated_at(0, 1, 0) * sq(s3 * xt[0] + xt[1]), 2.0);
    add("2.9", "1/(sqrt3*x1t-x2t)^2", rotated_at(0, 0, 1) * sq(s3 * xt[0] - xt[1]), 2.0);

    const double phi = 1.1, r = 1.3, theta = 0.9;
    const num::Vec3 sph{r * std::sin(theta) * std::cos(phi), r * std::sin(theta) * std::sin(phi),
                        r * std::cos(theta)};
    auto rotated_sph = [&](double gg1, double gg2, double gg3) {
      const auto sys = models::calogero_three_body(0.0, gg1, gg2, gg3);
      PhaseState z;
      z.n = 3;
      z.q = m.apply(sph);
      return sys.potential()(z) * sq(r * std::sin(theta));
    };
    add("2.10", "1/sin^2(phi)", rotated_sph(1, 0, 0) * sq(std::sin(phi)), 2.0);
    add("2.10", "1/(sqrt3*cos+sin)^2", rotated_sph(0, 1, 0) * sq(s3 * std::cos(phi) + std::sin(phi)),
        2.0);
    add("2.10", "1/(sqrt3*cos-sin)^2", rotated_sph(0, 0, 1) * sq(s3 * std::cos(phi) - std::sin(phi)),
        2.0);
  }

  {  // profile over t = tan(phi) for unit couplings vs the printed closed form
    auto measured_k = [&](double t) {
      const double phi = std::atan(t);
      const num::Vec3 xt{std::cos(phi), std::sin(phi), 0.0};
      const auto sys = models::calogero_three_body(0.0, 1.0, 1.0, 1.0);
      PhaseState z;
      z.n = 3;
      z.q = m.apply(xt);
      return sys.potential()(z);
    };
    auto printed_k = [](double t) { return 2.0 * (1.0 + t * t) * ((3.0 + t * t) / sq(3.0 - t * t) + 1.0); };
    add("2.19", "k(t) at t=1", measured_k(1.0), printed_k(1.0), "phi = pi/4");
    // fit the printed bracket form c1 (3+t^2)/(3-t^2)^2 + c2 at t = 1, 2
    const double y1 = measured_k(1.0) / (2.0 * (1.0 + 1.0));
    const double y2 = measured_k(2.0) / (2.0 * (1.0 + 4.0));
    const double b1 = (3.0 + 1.0) / sq(3.0 - 1.0);
    const double b2 = (3.0 + 4.0) / sq(3.0 - 4.0);
    const double c1f = (y2 - y1) / (b2 - b1);
    const double c2f = y1 - c1f * b1;
    add("2.19", "(3+t^2)/(3-t^2)^2 coefficient", c1f, 1.0, "fit at t=1,2");
    add("2.19", "constant bracket term", c2f, 1.0,
        "fit at t=1,2; measured term is angle-dependent");
  }

  {  // planar second integral: required angular strengths vs printed ones
    const double rho = 0.77, lam = 0.36;
    const double s2 = sq(rho) + sq(lam);
    auto w_required = [&](double gg1, double gg2, double gg3) {
      const auto sys = models::calogero_reduced_2d(0.0, gg1, gg2, gg3);
      PhaseState z;
      z.n = 2;
      z.q = {rho, lam, 0.0};
      return sys.potential()(z) * s2;
    };
    add("2.24", "g1/(sqrt3*sin-cos)^2", w_required(1, 0, 0) * sq(s3 * lam - rho) / s2, -1.0);
    add("2.24", "g2/(sqrt3*sin+cos)^2", w_required(0, 1, 0) * sq(s3 * lam + rho) / s2, -1.0);
    add("2.24", "g3/cos^2", w_required(0, 0, 1) * sq(rho) / s2, -1.0);
    const auto pi = integrals::reduced_polar_integral(g1, g2, g3);
    add("2.24", "overall sign", pi.sign, -1.0, "resolved by the bracket probe");
  }

  return rep;
}

VerificationReport killing_suite(const AngularProfile& k, const SampleOptions& opt,
                                 std::vector<double> translations) {
  VerificationReport rep;
  rep.suite = "killing";
  const auto set = integrals::catalog_rotational(k);

  std::vector<killing::KillingTensor> tensors;
  for (const auto& f : set.members())
    tensors.push_back(integrals::quadratic_part(f).tensor);

  {  // Killing property of every extracted tensor
    double worst = 0.0;
    for (const auto& t : tensors)
      worst = std::max(worst, killing::killing_property_residual(
                                  t, std::min(50, opt.n_samples), opt.seed));
    rep.cases.push_back(make_case("eq:2.13 Killing property of quadratic parts", worst, 1e-10, opt));
  }

  {  // axial symmetry of the tensors
    num::Rng rng(opt.seed);
    double worst = 0.0;
    for (const auto& t : tensors) {
      const auto lie = killing::lie_derivative_rotation(t);
      const double scale = std::max(1.0, t.max_abs_coeff());
      for (int s = 0; s < 50; ++s) {
        const num::Vec3 x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        worst = std::max(worst, lie.eval(x).max_abs() / scale);
      }
    }
    rep.cases.push_back(make_case("eq:2.15 rotational symmetry of tensors", worst, 1e-10, opt));
  }

  {  // translation invariance of the span (metric + the five quadratic parts)
    std::vector<killing::KillingTensor> basis = tensors;
    basis.insert(basis.begin(), killing::metric_tensor());
    double worst = 0.0;
    for (double t : translations)
      worst = std::max(worst, killing::translation_span_residual(basis, t, opt.seed));
    rep.cases.push_back(make_case("x3-translation span residual", worst, 1e-10, opt));
  }

  {  // pencil members against quadratic parts: a1 g + c2 K(F1-F2) + c3 K(F2)
    num::Rng rng(opt.seed ^ 0x9E37);
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const double a1 = rng.uniform(-1.0, 1.0);
      const double c2 = rng.uniform(-1.0, 1.0);
      const double c3 = rng.uniform(-1.0, 1.0);
      const auto pencil = killing::spherical_pencil(a1, c2, c3);
      killing::KillingTensor combo =
          a1 * killing::metric_tensor() + c2 * (tensors[1] - tensors[2]) + c3 * tensors[2];
      const num::Vec3 x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const double scale = std::max(1.0, pencil.eval(x).max_abs());
      worst = std::max(worst, (pencil.eval(x) - combo.eval(x)).max_abs() / scale);
    }
    rep.cases.push_back(make_case("eq:2.2 pencil vs quadratic parts", worst, 1e-12, opt));
  }

  {  // non-vacuity: an axially asymmetric tensor has a nonzero Lie derivative
    killing::KillingTensor p1sq("p1^2");
    p1sq.component(0, 0)[0] = 1.0;
    const double witness =
        killing::lie_derivative_rotation(p1sq).eval({1.0, 1.0, 0.0}).max_abs();
    rep.cases.push_back(make_case("negative-control Lie derivative of K(p1^2)", witness, 1e-10,
                                  opt, true, "axially asymmetric tensor"));
  }

  return rep;
}

VerificationReport charts_suite(const SampleOptions& opt) {
  VerificationReport rep;
  rep.suite = "charts";
  num::Rng rng(opt.seed);

  std::vector<charts::Chart> cs;
  cs.emplace_back(charts::ChartKind::spherical);
  cs.emplace_back(charts::ChartKind::circular_cylindrical);
  cs.emplace_back(charts::ChartKind::rotational_parabolic);
  cs.emplace_back(charts::ChartKind::prolate_spheroidal, 0.8);
  cs.emplace_back(charts::ChartKind::oblate_spheroidal, 1.2);

  auto random_u = [&](const charts::Chart& c) -> num::Vec3 {
    switch (c.kind()) {
      case charts::ChartKind::spherical:
        return {rng.uniform(0.3, 2.5), rng.uniform(0.3, kPi - 0.3), rng.uniform(0.0, 2.0 * kPi)};
      case charts::ChartKind::circular_cylindrical:
        return {rng.uniform(0.3, 2.5), rng.uniform(-2.0, 2.0), rng.uniform(0.0, 2.0 * kPi)};
      case charts::ChartKind::rotational_parabolic:
        return {rng.uniform(0.3, 1.8), rng.uniform(0.3, 1.8), rng.uniform(0.0, 2.0 * kPi)};
      default:
        return {rng.uniform(0.3, 1.6), rng.uniform(0.3, kPi - 0.3), rng.uniform(0.0, 2.0 * kPi)};
    }
  };

  for (const auto& c : cs) {
    double worst_rt = 0.0, worst_orth = 0.0;
    for (int s = 0; s < opt.n_samples; ++s) {
      const num::Vec3 u = random_u(c);
      const num::Vec3 x = c.forward(u);
      const num::Vec3 back = c.inverse(x);
      const num::Vec3 x2 = c.forward(back);
      for (int i = 0; i < 3; ++i)
        worst_rt = std::max(worst_rt, std::abs(x[static_cast<size_t>(i)] - x2[static_cast<size_t>(i)]) /
                                          std::max(1.0, num::norm(x)));
      const num::Mat3 j = c.jacobian(u);
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          double dot = 0.0, na = 0.0, nb = 0.0;
          for (int i = 0; i < 3; ++i) {
            dot += j(i, a) * j(i, b);
            na += sq(j(i, a));
            nb += sq(j(i, b));
          }
          worst_orth = std::max(worst_orth, std::abs(dot) / std::sqrt(na * nb));
        }
    }
    rep.cases.push_back(make_case("chart:" + c.name() + " roundtrip", worst_rt, 1e-10, opt));
    rep.cases.push_back(
        make_case("chart:" + c.name() + " coordinate orthogonality", worst_orth, 1e-10, opt));
  }

  {  // the five charts share the azimuth
    double worst = 0.0;
    for (int s = 0; s < opt.n_samples; ++s) {
      num::Vec3 x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      if (sq(x[0]) + sq(x[1]) < 0.05) continue;
      const double phi = charts::azimuth(x);
      for (const auto& c : cs) worst = std::max(worst, std::abs(c.inverse(x)[2] - phi));
    }
    rep.cases.push_back(make_case("charts share the azimuth", worst, 1e-12, opt));
  }

  {  // rotation roundtrip + plane mapping + frame orthogonality
    double worst_rt = 0.0, worst_plane = 0.0;
    for (int s = 0; s < opt.n_samples; ++s) {
      const num::Vec3 xt{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      const num::Vec3 x = charts::rotation_tr(xt);
      const num::Vec3 back = charts::rotation_tr_inverse(x);
      for (int i = 0; i < 3; ++i)
        worst_rt = std::max(worst_rt, std::abs(xt[static_cast<size_t>(i)] - back[static_cast<size_t>(i)]));
      worst_plane =
          std::max(worst_plane, std::abs(x[0] + x[1] + x[2] - std::sqrt(3.0) * xt[2]));
    }
    rep.cases.push_back(make_case("eq:2.8 rotation roundtrip", worst_rt, 1e-14, opt));
    rep.cases.push_back(make_case("eq:2.8 centre-of-mass plane", worst_plane, 1e-14, opt));

    // (rho, lambda, sqrt3 R) -> xt is orthogonal
    num::Mat3 b;
    const num::Mat3 jm = charts::jacobi_matrix();
    for (int j = 0; j < 3; ++j) {
      b(0, j) = jm(1, j);
      b(1, j) = jm(2, j);
      b(2, j) = std::sqrt(3.0) * jm(0, j);
    }
    const num::Mat3 map = charts::rotation_matrix().transposed() * b.transposed();
    const double defect = (map.transposed() * map - num::Mat3::identity()).max_abs();
    rep.cases.push_back(make_case("jacobi/rotation frame orthogonality", defect, 1e-14, opt));

    // the same construction with the sign-flipped relative coordinate is
    // visibly non-orthogonal
    num::Mat3 bad = b;
    const double s6 = std::sqrt(6.0);
    bad(1, 0) = 1.0 / s6;
    bad(1, 1) = -1.0 / s6;
    bad(1, 2) = -2.0 / s6;
    const num::Mat3 bad_map = charts::rotation_matrix().transposed() * bad.transposed();
    const double bad_defect =
        (bad_map.transposed() * bad_map - num::Mat3::identity()).max_abs();
    rep.cases.push_back(make_case("negative-control printed relative pair", bad_defect, 1e-14,
                                  opt, true, "sign-flipped second relative coordinate"));
  }

  return rep;
}

}  // namespace superint::verify
