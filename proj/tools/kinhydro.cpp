#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <map>
#include <spdlog/spdlog.h>

#include "kinhydro/collision_cache.hpp"
#include "kinhydro/config.hpp"
#include "kinhydro/errors.hpp"
#include "kinhydro/fluid_solver.hpp"
#include "kinhydro/harness.hpp"
#include "kinhydro/hydro_limit.hpp"
#include "kinhydro/kinetic_solver.hpp"
#include "kinhydro/output.hpp"
#include "kinhydro/spectral_analyzer.hpp"

using namespace kinhydro;
using nlohmann::json;

namespace {

using Logger = std::shared_ptr<spdlog::logger>;

struct Context
{
  RunConfig config;
  Logger log;
};

json config_json(const RunConfig& c)
{
  json j = json::object();
  for (const auto& [k, v] : parse_key_values(c.canonical()))
    j[k] = v;
  return j;
}

std::string file_for(const RunConfig& c, const std::string& experiment, const std::string& ext = ".csv")
{
  return (c.output_dir / experiment_filename(experiment, c.dim, c.max_degree, c.grid, ext)).string();
}

void write_manifest(const Context& ctx, const std::string& experiment, json results, const json& checks)
{
  json m;
  m["experiment"] = experiment;
  m["fingerprint"] = ctx.config.fingerprint();
  m["config"] = config_json(ctx.config);
  m["results"] = std::move(results);
  m["checks"] = checks;
  write_json(file_for(ctx.config, experiment, ".json"), m);
}

CollisionModel build_model(const Context& ctx)
{
  const RunConfig& c = ctx.config;
  auto basis = build_basis(c.dim, c.max_degree);
  if (c.model == ModelKind::Bgk)
    return assemble_bgk(basis, c.relaxation_rate);
  PhaseTimer timer(ctx.log, "collision tensors");
  const CachedAssembly cached = load_or_assemble(*basis, c.cache_dir);
  if (cached.status == CacheStatus::Corrupted)
    ctx.log->warn("collision cache {} is corrupted; tensors re-assembled", cached.path.string());
  else if (cached.status == CacheStatus::KeyMismatch)
    ctx.log->warn("collision cache {} has a different key; tensors re-assembled", cached.path.string());
  else
    ctx.log->info("collision cache {}: {}", cached.path.string(), to_string(cached.status));
  return hard_sphere_from_tensors(basis, cached.tensors);
}

std::shared_ptr<const FourierGrid> make_grid(const RunConfig& c)
{
  return std::make_shared<const FourierGrid>(c.dim, c.grid, c.box_length);
}

json coefficient_json(const CollisionModel& model, const BranchCoefficients& br, const HydroCoefficients* hc)
{
  json j;
  j["model"] = to_string(model.kind);
  j["d"] = model.dim();
  j["K"] = model.max_degree();
  j["kappa"] = br.kappa;
  j["fit_radius"] = br.fit_radius;
  j["spectral_gap"] = model.spectral_gap;
  for (int i = 0; i < kBranchCount; ++i) {
    j["alpha" + std::to_string(i + 1)] = br.alpha[i];
    j["beta" + std::to_string(i + 1)] = br.beta[i];
  }
  if (hc) {
    j["mu1"] = hc->mu1;
    j["mu2"] = hc->mu2;
    j["residuals"] = {{"phi", hc->residual_phi}, {"psi", hc->residual_psi}};
  }
  return j;
}

int cmd_spectrum(const Context& ctx)
{
  const CollisionModel model = build_model(ctx);
  PhaseTimer timer(ctx.log, "spectrum");
  const BranchCoefficients br = branch_coefficients(model);
  std::vector<double> s;
  for (int i = 1; i <= 40; ++i)
    s.push_back(br.kappa * i / 40.0);
  const auto branches = eigenbranches(model, Eigen::VectorXd::Unit(model.dim(), 0), s);
  CsvTable table({"j", "abs_xi", "re_lambda", "im_lambda"});
  for (const auto& b : branches)
    for (std::size_t i = 0; i < b.s.size(); ++i)
      table.add_row({static_cast<long>(b.label + 1), b.s[i], b.lambda[i].real(), b.lambda[i].imag()});
  table.write(file_for(ctx.config, "spectrum"));
  const json coeffs = coefficient_json(model, br, nullptr);
  write_json(file_for(ctx.config, "spectrum_coefficients", ".json"), coeffs);
  write_manifest(ctx, "spectrum", coeffs, json::object());
  return 0;
}

int cmd_viscosity(const Context& ctx)
{
  const CollisionModel model = build_model(ctx);
  PhaseTimer timer(ctx.log, "viscosity");
  const HydroCoefficients hc = viscosities(model);
  const BranchCoefficients br = branch_coefficients(model);
  json report = coefficient_json(model, br, &hc);
  const double rel1 = std::abs(hc.mu1 - br.beta[3]) / hc.mu1;
  const double rel2 = std::abs(hc.mu2 - br.beta[2]) / hc.mu2;
  report["mu1_beta4_mismatch"] = rel1;
  report["mu2_beta3_mismatch"] = rel2;
  if (rel1 > 0.1 || rel2 > 0.1)
    ctx.log->warn("transport coefficients disagree with branch diffusivities by more than 10%");
  write_json(file_for(ctx.config, "viscosity", ".json"), report);
  ctx.log->info("mu1 = {}, mu2 = {}", format_double(hc.mu1), format_double(hc.mu2));
  write_manifest(ctx, "viscosity", report, json::object());
  return 0;
}

int cmd_simulate_boltzmann(const Context& ctx)
{
  const RunConfig& c = ctx.config;
  const CollisionModel model = build_model(ctx);
  const auto grid = make_grid(c);
  const NormSpec spec = make_norm_spec(*model.basis, c.ell, c.k);
  KineticOptions opt;
  opt.eps = c.eps.front();
  opt.dt = c.dt;
  opt.nonlinear = model.has_gamma;
  PhaseTimer timer(ctx.log, "simulate-boltzmann");
  KineticSolver solver(model, grid, opt);
  KineticState g = lift(well_prepare(smooth_test_data(grid, c.amplitude)), *model.basis);
  std::vector<std::string> header{"t", "l2_norm", "rho0"};
  for (int a = 0; a < c.dim; ++a)
    header.push_back("u" + std::to_string(a + 1) + "_0");
  header.push_back("theta0");
  header.push_back("xellk_norm");
  CsvTable table(header);
  solver.simulate(g, c.T, [&](const KineticState& s) {
    std::vector<CsvCell> row{s.t, s.l2_norm()};
    for (double m : zero_mode_moments(s, *model.basis))
      row.emplace_back(m);
    row.emplace_back(xellk_norm(s, *model.basis, spec));
    table.add_row(std::move(row));
  });
  table.write(file_for(c, "simulate-boltzmann"));
  write_snapshot(file_for(c, "simulate-boltzmann_final", ".bin"), g, c.max_degree);
  json res;
  res["eps"] = opt.eps;
  res["final_l2_norm"] = g.l2_norm();
  res["max_imag_physical"] = solver.diagnostics().max_imag_physical;
  res["positivity_margin"] = positivity_margin(g, *model.basis, spec.nodes);
  if (res["positivity_margin"].get<double>() < 0.0)
    ctx.log->warn("f = M + eps M^(1/2) g is negative at some quadrature node");
  write_manifest(ctx, "simulate-boltzmann", res, json::object());
  return 0;
}

int cmd_simulate_nsf(const Context& ctx)
{
  const RunConfig& c = ctx.config;
  const CollisionModel model = build_model(ctx);
  const HydroCoefficients hc = viscosities(model);
  const auto grid = make_grid(c);
  PhaseTimer timer(ctx.log, "simulate-nsf");
  CsvTable table({"t", "velocity_norm", "theta_norm", "max_divergence"});
  double half_norm = 0.0;
  const NsfResult res = nsf_simulate(smooth_test_data(grid, c.amplitude), c.T, c.dt, hc.mu1, hc.mu2,
                                     [&](const FluidState& s) {
                                       if (s.t == 0.0)
                                         half_norm = s.velocity_half_norm();
                                       table.add_row({s.t, s.velocity_norm(), s.theta.norm(), s.max_divergence()});
                                     });
  table.write(file_for(c, "simulate-nsf"));
  json r;
  r["mu1"] = hc.mu1;
  r["mu2"] = hc.mu2;
  r["velocity_half_norm_initial"] = half_norm;
  r["blew_up"] = res.blew_up;
  if (res.blew_up) {
    r["t_star"] = res.t_star;
    ctx.log->warn("velocity blow-up detector fired at t = {}", format_double(res.t_star));
  }
  write_manifest(ctx, "simulate-nsf", r, json::object());
  return 0;
}

int cmd_converge(const Context& ctx)
{
  const RunConfig& c = ctx.config;
  const CollisionModel model = build_model(ctx);
  const HydroCoefficients hc = viscosities(model);
  const auto grid = make_grid(c);
  const NormSpec spec = make_norm_spec(*model.basis, c.ell, c.k);
  ConvergenceOptions opt;
  opt.T = c.T;
  opt.dt = c.dt;
  PhaseTimer timer(ctx.log, "converge");
  const ConvergenceReport rep = convergence_sweep(model, hc, smooth_test_data(grid, c.amplitude), c.eps, opt, spec);
  CsvTable summary({"eps", "ok", "sup_error", "sup_kinetic_norm"});
  CsvTable series({"eps", "t", "error", "kinetic_norm"});
  json runs = json::array();
  for (const auto& r : rep.runs) {
    summary.add_row({r.eps, static_cast<long>(r.ok), r.sup_error, r.sup_norm});
    for (std::size_t i = 0; i < r.t.size(); ++i)
      series.add_row({r.eps, r.t[i], r.error[i], r.kinetic_norm[i]});
    runs.push_back({{"eps", r.eps}, {"ok", r.ok}, {"failure", r.failure}, {"sup_error", r.sup_error},
                    {"wall_seconds", r.wall_seconds}});
    ctx.log->info("eps = {}: sup error {} ({:.1f} s){}", format_double(r.eps), format_double(r.sup_error),
                  r.wall_seconds, r.ok ? "" : " FAILED: " + r.failure);
  }
  summary.write(file_for(c, "converge"));
  series.write(file_for(c, "converge_series"));
  json res;
  res["runs"] = runs;
  res["slope"] = rep.fit.slope;
  res["slope_stderr"] = rep.fit.stderr_slope;
  res["slope_band"] = {rep.fit.slope - 2.0 * rep.fit.stderr_slope, rep.fit.slope + 2.0 * rep.fit.stderr_slope};
  res["intercept"] = rep.fit.intercept;
  res["dropped_largest"] = rep.fit.dropped_largest;
  json checks;
  checks["strictly_decreasing"] = rep.strictly_decreasing;
  checks["fit_valid"] = rep.fit_valid;
  checks["slope_at_least_0.4"] = rep.fit_valid && rep.fit.slope >= 0.4;
  write_manifest(ctx, "converge", res, checks);
  ctx.log->info("fitted slope {} +- {}", format_double(rep.fit.slope), format_double(rep.fit.stderr_slope));
  return 0;
}

int cmd_decay(const Context& ctx)
{
  const RunConfig& c = ctx.config;
  const CollisionModel model = build_model(ctx);
  const auto grid = make_grid(c);
  PhaseTimer timer(ctx.log, "decay");
  const DecayReport rep = decay_suite(model, *grid, c.eps, c.seed);
  CsvTable rem({"eps", "t", "remainder_norm"});
  for (const auto& r : rep.remainder)
    for (std::size_t i = 0; i < r.t.size(); ++i)
      rem.add_row({r.eps, r.t[i], r.norm[i]});
  rem.write(file_for(c, "decay_remainder"));
  CsvTable w({"eps", "t", "w_norm", "sigma", "envelope"});
  for (const auto& wd : rep.w)
    for (std::size_t i = 0; i < wd.t.size(); ++i)
      w.add_row({wd.eps, wd.t[i], wd.norm[i], wd.sigma, wd.envelope});
  w.write(file_for(c, "decay"));
  json res;
  res["rates"] = json::array();
  for (const auto& r : rep.remainder)
    res["rates"].push_back({{"eps", r.eps}, {"rate", r.rate}, {"prefactor", r.prefactor}});
  res["rate_ratios"] = rep.rate_ratios;
  res["sigma"] = json::array();
  for (const auto& wd : rep.w)
    res["sigma"].push_back({{"eps", wd.eps}, {"sigma", wd.sigma}, {"envelope", wd.envelope}});
  res["sigma_spread"] = rep.sigma_spread;
  res["envelope_spread"] = rep.envelope_spread;
  res["kernel_data_output"] = rep.kernel_data_output;
  json checks;
  checks["rate_ratios_within_10_percent"] = rep.ratios_ok;
  checks["w_envelope"] = rep.w_ok;
  write_manifest(ctx, "decay", res, checks);
  return 0;
}

int cmd_ill_prepared(const Context& ctx)
{
  const RunConfig& c = ctx.config;
  const CollisionModel model = build_model(ctx);
  const HydroCoefficients hc = viscosities(model);
  const auto grid = make_grid(c);
  const NormSpec spec = make_norm_spec(*model.basis, c.ell, c.k);
  IllPreparedOptions opt;
  opt.T = c.T;
  opt.dt = c.dt;
  PhaseTimer timer(ctx.log, "ill-prepared");
  const IllPreparedReport rep = illprepared_experiment(model, hc, grid, c.eps, opt, spec);
  CsvTable summary({"eps", "inverse_eps", "frequency", "expected", "relative_error", "sup_error"});
  CsvTable phase({"eps", "t", "phase"});
  for (const auto& r : rep.runs) {
    summary.add_row({r.eps, 1.0 / r.eps, r.frequency, r.expected, r.relative_error, r.sup_error});
    for (std::size_t i = 0; i < r.t.size(); ++i)
      phase.add_row({r.eps, r.t[i], r.phase[i]});
  }
  summary.write(file_for(c, "ill-prepared"));
  phase.write(file_for(c, "ill-prepared_phase"));
  json res;
  res["well_prepared_acoustic"] = rep.well_prepared_acoustic;
  res["ill_prepared_acoustic"] = rep.ill_prepared_acoustic;
  res["max_frequency_error"] = rep.max_frequency_error;
  json checks;
  checks["well_prepared_acoustic_below_1e-6"] = rep.well_prepared_acoustic <= 1e-6;
  checks["frequency_within_5_percent"] = rep.max_frequency_error <= 0.05;
  write_manifest(ctx, "ill-prepared", res, checks);
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Hermite-Fourier solvers for the incompressible Navier-Stokes-Fourier limit of the Boltzmann equation"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::map<std::string, std::string> flag_values;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file");
    for (const auto& key : config_keys())
      sub->add_option("--" + key, flag_values[key], "override for config key '" + key + "'");
  };

  struct Command
  {
    std::string name;
    std::string help;
    std::function<int(const Context&)> run;
  };
  const std::vector<Command> commands{
      {"spectrum", "eigenvalue branches and fitted speeds and diffusivities", cmd_spectrum},
      {"viscosity", "transport coefficients mu1, mu2 and branch cross-check", cmd_viscosity},
      {"simulate-boltzmann", "kinetic run from lifted well-prepared data", cmd_simulate_boltzmann},
      {"simulate-nsf", "Navier-Stokes-Fourier run", cmd_simulate_nsf},
      {"converge", "eps sweep of the kinetic-to-fluid error and slope fit", cmd_converge},
      {"decay", "remainder and W^eps decay measurements", cmd_decay},
      {"ill-prepared", "acoustic frequency of ill-prepared data", cmd_ill_prepared}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands)
    add_common(subs[c.name] = app.add_subcommand(c.name, c.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (const auto& [key, value] : flag_values) {
      for (const auto& [name, sub] : subs)
        if (sub->parsed() && sub->count("--" + key) > 0)
          overrides[key] = value;
    }
    Context ctx;
    ctx.config = parse_config(config_path, overrides);
    ctx.log = open_run_log(ctx.config.output_dir);
    ctx.log->info("config fingerprint {}", ctx.config.fingerprint());
    for (const auto& c : commands)
      if (subs[c.name]->parsed()) {
        ctx.log->info("running {}", c.name);
        return c.run(ctx);
      }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
