#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "finiteband/error.hpp"
#include "finiteband/flow.hpp"
#include "finiteband/io.hpp"
#include "finiteband/kdv.hpp"
#include "finiteband/parallel.hpp"
#include "finiteband/weyl.hpp"
#include "finiteband_cli/cli.hpp"

namespace finiteband::cli {

using nlohmann::json;

namespace {

double finite_or_huge(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::max(); }

void matrix_header(std::ostringstream& os, const std::string& prefix, Eigen::Index rows) {
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < rows; ++j) os << ',' << prefix << '_' << i << '_' << j << "_re," << prefix << '_' << i << '_' << j << "_im";
}

void matrix_row(std::ostringstream& os, const CMatrix& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) os << ',' << format_double(a(i, j).real()) << ',' << format_double(a(i, j).imag());
}

std::vector<Complex> probe_points(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> zs;
  while (static_cast<int>(zs.size()) < cfg.z_probes) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) <= 1.0 && std::abs(z.imag()) > 1e-3) zs.push_back(cfg.z_radius * z);
  }
  return zs;
}

// Points inside every band, kept away from the edges.
std::vector<double> band_points(const BandStructure& b, int count) {
  const auto bands = b.bands();
  const int per = std::max(1, count / static_cast<int>(bands.size()));
  std::vector<double> out;
  for (const auto& band : bands) {
    const double hi = std::isfinite(band.hi) ? band.hi : band.lo + 3.0 * b.scale();
    for (int k = 0; k < per; ++k) out.push_back(band.lo + (hi - band.lo) * (0.05 + 0.9 * (k + 0.5) / per));
  }
  return out;
}

// M' + M^2 - (Q - z) with M' differentiated through the pencil closed forms.
double riccati_closed_form(const std::vector<CMatrix>& jet, const BandStructure& b, Complex z, Sign s) {
  const auto m = jet[0].rows();
  const CMatrix I = CMatrix::Identity(m, m);
  const double sg = sign_value(s);
  if (b.n() == 0) {
    const CMatrix M = sg * I_UNIT * sqrt_R(b, z) * I;
    return (M * M - jet[0] + z * I).norm();
  }
  const auto quad = closed_form_pencils_n1(jet[0], jet[1], jet[2], b);
  const CMatrix Finv = checked_inverse(quad.F(z));
  const CMatrix A = sg * I_UNIT * sqrt_R(b, z) * I - quad.G1(z);
  const CMatrix M = A * Finv;
  const CMatrix dM = 0.25 * jet[2] * Finv - A * Finv * (0.5 * jet[1]) * Finv;
  return (dM + M * M - jet[0] + z * I).norm();
}

struct Entry {
  Report& report;
  const RunConfig& cfg;
  void add(const std::string& name, const std::string& identity, const std::string& tol_key, double residual) {
    const double tol = cfg.tolerances.at(tol_key);
    report.entries.push_back({name, identity, residual, tol, std::isfinite(residual) && residual <= tol});
  }
};

}  // namespace

bool Report::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.pass; });
}

std::unique_ptr<Potential> make_potential(const RunConfig& cfg) {
  if (cfg.n() == 0) return std::make_unique<ConstantPotential>(cfg.bands.edges().front(), cfg.m);
  return std::make_unique<HochstadtPotential>(*cfg.spec);
}

void cmd_construct(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto pot = make_potential(cfg);
  const auto xs = cfg.x_grid.values();
  const auto profile = sample_profile(*pot, xs);
  const auto quad = closed_form_pencils(pot->jet(xs.front(), 2), cfg.bands);

  json meta;
  meta["schema"] = "finiteband/1";
  meta["command"] = "construct";
  meta["bands"] = cfg.bands.edges();
  meta["m"] = cfg.m;
  meta["n"] = cfg.n();
  meta["seed"] = cfg.seed;
  meta["x0"] = xs.front();
  meta["x_grid"] = {{"start", cfg.x_grid.start}, {"stop", cfg.x_grid.stop}, {"points", cfg.x_grid.points}};
  meta["tolerances"] = cfg.tolerances;
  meta["c1"] = trace_constant_c1(cfg.bands);
  if (cfg.n() == 1) {
    const auto c = curve_from_bands(cfg.bands);
    meta["curve"] = {{"e1", c.e1}, {"e2", c.e2}, {"e3", c.e3}, {"g2", c.g2}, {"g3", c.g3},
                     {"omega1", c.omega1}, {"omega3_im", c.omega3_im}};
    meta["period"] = c.period();
    meta["spec"] = json::parse(hochstadt_spec_to_json(*cfg.spec));
    meta["U_source"] = cfg.u_source;
  }

  std::filesystem::create_directories(out);
  write_file_atomic(out / "potential.csv", profile_to_csv(profile));
  write_file_atomic(out / "pencils.json", quadruple_to_json(quad) + "\n");
  write_file_atomic(out / "metadata.json", meta.dump(2) + "\n");
}

Report verify_profile(const RunConfig& cfg, const PotentialProfile& p) {
  const BandStructure& b = cfg.bands;
  const int n = b.n();
  const std::size_t N = p.size();
  if (N < 5) throw Error(ErrorCode::ShapeMismatch, "profile needs at least five samples");
  if (p.dim() != cfg.m) throw Error(ErrorCode::ShapeMismatch, "profile dimension differs from m");
  auto jet_at = [&](std::size_t i) { return std::vector<CMatrix>{p.Q[i], p.Qp[i], p.Qpp[i], p.Qppp[i]}; };

  Report rep;
  Entry e{rep, cfg};

  double herm = 0.0;
  for (const auto& q : p.Q) herm = std::max(herm, hermitian_defect(q) / std::max(1.0, q.norm()));
  e.add("hermitian potential", "Q(x)* = Q(x)", "hermitian", herm);

  const auto zs = probe_points(cfg);
  const std::size_t stride = std::max<std::size_t>(1, N / 64);
  double ledger = 0.0;
  for (std::size_t i = 0; i < N; i += stride) {
    const auto quad = closed_form_pencils(jet_at(i), b);
    ledger = std::max(ledger, check_quadruple(quad, zs).max_residual());
  }
  e.add("pencil ledger", "conjugation symmetry, F G1 = G2 F, H G2 = G1 H, F H - G2^2 = H F - G1^2 = R I", "ledger",
        ledger);

  for (Sign s : {Sign::Plus, Sign::Minus}) {
    double r = 0.0;
    for (const Complex z : {Complex(0.0, 1.0), Complex(-1.0, 0.5)})
      for (std::size_t i = 0; i < N; ++i) r = std::max(r, riccati_closed_form(jet_at(i), b, z, s));
    e.add(s == Sign::Plus ? "riccati M+" : "riccati M-", "M' + M^2 = Q - z", "riccati", r);
  }

  double kdv = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    kdv = std::max(kdv, n == 0 ? p.Qp[i].norm() : skdv1_closed_form(p.Q[i], p.Qp[i], p.Qppp[i], b.sum_edges()).norm());
  e.add("stationary kdv", n == 0 ? "Q' = 0" : "(Q''' - 3(Q^2)' + 2(E0+E1+E2)Q')/4 = 0", "skdv", kdv);

  if (n == 1) {
    double a2 = 0.0, a1 = 0.0, a3 = 0.0, comm = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      a2 = std::max(a2, one_gap_second_order(p.Q[i], p.Qpp[i], b).norm());
      a1 = std::max(a1, one_gap_first_integral(p.Q[i], p.Qp[i], p.Qpp[i], b).norm());
      a3 = std::max(a3, one_gap_cubic(p.Q[i], p.Qp[i], b).norm());
      comm = std::max(comm, one_gap_commutators(p.Q[i], p.Qp[i], p.Qpp[i]));
    }
    e.add("one-gap second order", "Q''/4 - 3Q^2/4 - c1 Q + d1 I = 0", "algebraic", a2);
    e.add("one-gap first integral", "(Q''/4 - Q^2/2 - c1 Q)(Q/2 + c1 I) - Q'^2/16 + E0 E1 E2 I = 0", "algebraic", a1);
    e.add("one-gap cubic", "Q'^2 + 16 R(-Q/2 - c1 I) = 0", "algebraic", a3);
    e.add("commuting derivatives", "[Q, Q'] = [Q, Q''] = [Q', Q''] = 0", "commutator", comm);
  }

  const auto quad0 = closed_form_pencils(jet_at(0), b);
  double green = 0.0;
  for (const Complex z : zs) {
    const CMatrix g = green_diag(quad0, z);
    green = std::max(green, (g - green_diag_closed_form(quad0, z)).norm() / std::max(1.0, g.norm()));
  }
  e.add("diagonal green matrix", "(M- - M+)^{-1} = (i/2) R^{-1/2} F", "green", green);

  auto mp = [&](Complex z) { return weyl_m(quad0, z, Sign::Plus); };
  auto mm = [&](Complex z) { return weyl_m(quad0, z, Sign::Minus); };
  auto g = [&](Complex z) { return green_diag(quad0, z); };
  const auto lams = band_points(b, 40);
  double refl = std::numeric_limits<double>::infinity(), xi_band = refl, xi_below = refl;
  try {
    refl = reflectionless_check(mp, mm, b, lams).max_defect;
  } catch (const Error&) {
  }
  e.add("reflectionless", "M+(l + i0) = M-(l + i0)* on the bands", "reflectionless", refl);
  try {
    const CMatrix half = 0.5 * CMatrix::Identity(static_cast<Eigen::Index>(cfg.m), static_cast<Eigen::Index>(cfg.m));
    xi_band = 0.0;
    for (double l : lams) xi_band = std::max(xi_band, (xi_function(g, b, l).xi - half).cwiseAbs().maxCoeff());
    xi_below = 0.0;
    const double e0 = b.edges().front();
    for (double l : {e0 - 2.0, e0 - 1.0, e0 - 0.5, e0 - 0.1})
      xi_below = std::max(xi_below, xi_function(g, b, l).xi.cwiseAbs().maxCoeff());
  } catch (const Error&) {
  }
  e.add("xi on bands", "Xi = I/2 on the bands", "xi", xi_band);
  e.add("xi below spectrum", "Xi = 0 below E0", "xi", xi_below);

  const double period = n == 1 ? curve_from_bands(b).period() : p.xs.back() - p.xs.front();
  if (cfg.m == 1 && p.xs.back() - p.xs.front() >= period * (1.0 - 1e-12)) {
    double err = std::numeric_limits<double>::infinity();
    try {
      const ProfilePotential pot(p);
      FloquetOptions fo;
      fo.x0 = p.xs.front();
      const double period_eff = std::min(period, p.xs.back() - p.xs.front());
      const auto& E = b.edges();
      const auto edges = floquet_band_edges(pot, period_eff, E.front() - 0.5, E.back() + 1.5, fo);
      std::vector<double> simple;
      for (const auto& ed : edges)
        if (!ed.touching) simple.push_back(ed.lambda);
      if (simple.size() == E.size()) {
        err = 0.0;
        for (std::size_t k = 0; k < E.size(); ++k) err = std::max(err, std::abs(simple[k] - E[k]));
      }
    } catch (const Error&) {
    }
    e.add("floquet band edges", "|Delta(E_l)| = 2 exactly at the band edges", "floquet", err);
  }

  double flow = std::numeric_limits<double>::infinity();
  try {
    const std::vector<double> rest(p.xs.begin() + 1, p.xs.end());
    const auto samples = evolve_pencils(quad0, p.xs.front(), rest);
    flow = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) flow = std::max(flow, (samples[i].Q - p.Q[i + 1]).norm());
  } catch (const Error&) {
  }
  e.add("pencil flow", "Q read from the evolved F matches the profile", "flow", flow);
  return rep;
}

std::string report_to_json(const Report& r) {
  json doc;
  doc["schema"] = "finiteband/1";
  doc["pass"] = r.pass();
  doc["entries"] = json::array();
  for (const auto& e : r.entries)
    doc["entries"].push_back({{"name", e.name},
                              {"identity", e.identity},
                              {"max_residual", finite_or_huge(e.max_residual)},
                              {"tol", e.tol},
                              {"pass", e.pass}});
  return doc.dump(2) + "\n";
}

Report cmd_verify(const RunConfig& cfg, const std::filesystem::path& out,
                  const std::optional<std::filesystem::path>& profile_path) {
  PotentialProfile p;
  if (profile_path) {
    p = profile_from_csv(read_text_file(*profile_path));
  } else {
    p = sample_profile(*make_potential(cfg), cfg.x_grid.values());
  }
  const Report rep = verify_profile(cfg, p);
  std::filesystem::create_directories(out);
  write_file_atomic(out / "report.json", report_to_json(rep));
  return rep;
}

void cmd_sample(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto pot = make_potential(cfg);
  const double x0 = cfg.x_grid.start;
  const auto quad = closed_form_pencils(pot->jet(x0, 2), cfg.bands);
  const auto& b = cfg.bands;
  const auto m = static_cast<Eigen::Index>(cfg.m);
  const auto lams = cfg.lambda_grid.values();
  const double margin = 1e-3 * b.scale();

  std::ostringstream green;
  green << "re_z,im_z";
  matrix_header(green, "g", m);
  green << '\n';
  for (double l : lams) {
    const Complex z(l, cfg.eta);
    green << format_double(z.real()) << ',' << format_double(z.imag());
    matrix_row(green, green_diag(quad, z));
    green << '\n';
  }

  std::vector<double> interior;
  for (double l : lams)
    if (b.distance_to_edges(l) > margin) interior.push_back(l);

  std::vector<std::string> dens_rows(interior.size()), xi_rows(interior.size());
  auto M = [&](Complex z) { return full_M(quad, z); };
  auto g = [&](Complex z) { return green_diag(quad, z); };
  parallel_for(interior.size(), [&](std::size_t i) {
    const double l = interior[i];
    std::ostringstream d, x;
    try {
      const CMatrix v = stieltjes_invert(M, b, {l}).front();
      d << format_double(l);
      matrix_row(d, v);
      d << ',' << format_double((v - density_closed_form(quad, l)).norm()) << '\n';
      dens_rows[i] = d.str();
    } catch (const Error&) {
    }
    try {
      const auto r = xi_function(g, b, l);
      x << format_double(l);
      matrix_row(x, r.xi);
      x << ',' << format_double(r.defect) << '\n';
      xi_rows[i] = x.str();
    } catch (const Error&) {
    }
  });
  std::ostringstream dens, xi;
  dens << "lambda";
  matrix_header(dens, "rho", 2 * m);
  dens << ",defect\n";
  xi << "lambda";
  matrix_header(xi, "xi", m);
  xi << ",defect\n";
  for (const auto& r : dens_rows) dens << r;
  for (const auto& r : xi_rows) xi << r;

  std::vector<std::unique_ptr<Potential>> channels;
  double period = cfg.x_grid.stop - cfg.x_grid.start;
  if (cfg.n() == 1) {
    period = curve_from_bands(b).period();
    for (double a : cfg.spec->alphas) channels.push_back(std::make_unique<HochstadtPotential>(HochstadtSpec{b.edges(), {a}, {}}));
  } else {
    channels.push_back(std::make_unique<ConstantPotential>(b.edges().front(), 1));
  }
  std::vector<std::vector<double>> delta(lams.size(), std::vector<double>(channels.size()));
  FloquetOptions fo;
  fo.x0 = x0;
  parallel_for(lams.size(), [&](std::size_t i) {
    for (std::size_t c = 0; c < channels.size(); ++c) delta[i][c] = floquet_discriminant(*channels[c], period, lams[i], fo);
  });
  std::ostringstream disc;
  disc << "lambda";
  for (std::size_t c = 0; c < channels.size(); ++c) disc << ",delta_" << c;
  disc << '\n';
  for (std::size_t i = 0; i < lams.size(); ++i) {
    disc << format_double(lams[i]);
    for (double v : delta[i]) disc << ',' << format_double(v);
    disc << '\n';
  }

  std::filesystem::create_directories(out);
  write_file_atomic(out / "green.csv", green.str());
  write_file_atomic(out / "density.csv", dens.str());
  write_file_atomic(out / "xi.csv", xi.str());
  write_file_atomic(out / "discriminant.csv", disc.str());
}

}  // namespace finiteband::cli
