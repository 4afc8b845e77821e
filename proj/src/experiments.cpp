#include "ddrom/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <random>

#include "ddrom/conditioning.hpp"
#include "ddrom/h2.hpp"
#include "ddrom/models.hpp"
#include "ddrom/parallel.hpp"

namespace ddrom
{

namespace
{

using io::Json;

Json random_system(Index n, double radius)
{
  return Json{{"type", "random"}, {"n", n}, {"radius", radius}};
}

Json gaussian_input(Index T) { return Json{{"distribution", "gaussian"}, {"T", T}}; }

Json range_grid(double start, double stop, double step)
{
  return Json{{"start", start}, {"stop", stop}, {"step", step}};
}

Json irka_defaults(Json params)
{
  params["max_iterations"] = 100;
  params["tol"] = 1e-6;
  params["init_radius"] = 1.05;
  params["stabilization"] = true;
  params["recovery"] = Json{{"overflow_policy", "scaled"},
                            {"method", "projection"},
                            {"existence_tolerance", 1e-6},
                            {"rank_tolerance", 0.0},
                            {"min_nhat", 1}};
  return params;
}

// Either an explicit array or {"start", "stop", "step"}, inclusive of stop up to
// half a step of roundoff.
std::vector<double> grid_from(const Json &j)
{
  std::vector<double> out;
  if (j.is_array())
  {
    for (const Json &v : j)
    {
      out.push_back(v.get<double>());
    }
  }
  else if (j.is_object())
  {
    const double start = j.at("start").get<double>();
    const double stop = j.at("stop").get<double>();
    const double step = j.at("step").get<double>();
    if (!(step > 0.0) || stop < start)
    {
      throw Error("grid needs step > 0 and stop >= start");
    }
    const auto count = static_cast<Index>(std::floor((stop - start) / step + 0.5));
    for (Index k = 0; k <= count; k++)
    {
      // Snap to 12 significant digits so 1 + 14 * 0.05 prints as 1.7.
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(k) * step);
      out.push_back(std::strtod(buf, nullptr));
    }
  }
  else
  {
    throw Error("grid must be an array or a {start, stop, step} object");
  }
  if (out.empty())
  {
    throw Error("grid must not be empty");
  }
  return out;
}

std::vector<Index> index_grid(const Json &j)
{
  std::vector<Index> out;
  for (double v : grid_from(j))
  {
    out.push_back(static_cast<Index>(std::llround(v)));
  }
  return out;
}

std::uint64_t base_seed(const Json &params) { return params.value("seed", std::uint64_t{1}); }

std::uint64_t sub_seed(const Json &section, std::uint64_t fallback)
{
  return section.is_object() ? section.value("seed", fallback) : fallback;
}

DiscreteLTI config_system(const Json &params)
{
  return system_from_config(params.at("system"), sub_seed(params.at("system"), base_seed(params)));
}

Vector config_input(const Json &params, const char *key = "input")
{
  return input_from_config(params.at(key), sub_seed(params.at(key), base_seed(params) + 1));
}

// Data from files when "data" is present, otherwise a simulation of the system.
TimeSeriesData config_data(const Json &params)
{
  if (params.contains("data") && !params["data"].is_null())
  {
    const Json &d = params["data"];
    TimeSeriesData data;
    data.U = io::trajectory_from_csv(io::read_file(d.at("u").get<std::string>()), "u");
    data.Y = io::trajectory_from_csv(io::read_file(d.at("y").get<std::string>()), "y");
    data.validate();
    return data;
  }
  return simulate(config_system(params), config_input(params));
}

bool has_system(const Json &params)
{
  return params.contains("system") && !params["system"].is_null();
}

IrkaConfig irka_from_config(const Json &params, Index r)
{
  IrkaConfig cfg;
  cfg.r = r;
  cfg.max_iterations = params.value("max_iterations", Index{100});
  cfg.convergence_tol = params.value("tol", 1e-6);
  cfg.init_radius = params.value("init_radius", 1.05);
  cfg.stabilization = params.value("stabilization", true);
  cfg.nhat = params.value("nhat", Index{0});
  cfg.recovery = recovery_from_config(params);
  cfg.overflow_policy = cfg.recovery.overflow_policy;
  if (params.contains("initial_points"))
  {
    const Json &pts = params["initial_points"];
    cfg.initial_points.resize(static_cast<Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); i++)
    {
      cfg.initial_points(static_cast<Index>(i)) =
        Complex(pts[i].at(0).get<double>(), pts[i].at(1).get<double>());
    }
  }
  return cfg;
}

QuadratureOptions quadrature_from_config(const Json &params)
{
  QuadratureOptions q;
  q.tolerance = params.value("quadrature_tol", 1e-10);
  return q;
}

TransferFunction rom_function(const HermiteLoewnerROM &rom)
{
  auto ev = std::make_shared<const TransferEvaluator>(rom.as_real_system());
  return [ev](Complex z) { return ev->value(z); };
}

TransferFunction fom_function(const DiscreteLTI &sys)
{
  auto ev = std::make_shared<const TransferEvaluator>(sys);
  return [ev](Complex z) { return ev->value(z); };
}

OutputFile json_file(const std::string &name, Json body, const ExperimentConfig &config)
{
  body["config_hash"] = config.hash();
  body["config"] = config.params;
  return {name, body.dump(2) + "\n"};
}

CommandResult run_irka_command(const ExperimentConfig &config, bool data_driven)
{
  const Json &p = config.params;
  const std::string prefix = data_driven ? "tdirka" : "tfirka";
  const IrkaConfig cfg = irka_from_config(p, p.at("r").get<Index>());

  IrkaReport report;
  std::optional<DiscreteLTI> fom;
  if (has_system(p) && !(data_driven && p.contains("data") && !p["data"].is_null()))
  {
    fom = config_system(p);
  }
  if (data_driven)
  {
    report = td_irka(config_data(p), cfg);
  }
  else
  {
    if (!fom)
    {
      throw Error("tfirka needs a system");
    }
    report = tf_irka(make_oracle(*fom), cfg);
  }

  Json body = io::report_to_json(report);
  if (fom)
  {
    body["relative_h2_error"] = relative_h2_error(fom_function(*fom), rom_function(report.rom),
                                                  quadrature_from_config(p));
  }
  CommandResult result;
  result.files.push_back(json_file(prefix + "_report.json", body, config));
  result.files.push_back(
    {prefix + "_summary.csv", io::report_summary_table(report).render(config.hash())});
  result.files.push_back(json_file(prefix + "_rom.json", io::rom_to_json(report.rom), config));
  if (!report.converged)
  {
    result.exit_code = 3;
    result.message = prefix + ": no convergence within " + std::to_string(cfg.max_iterations) +
                     " iterations";
  }
  return result;
}

CommandResult run_recover(const ExperimentConfig &config)
{
  const Json &p = config.params;
  RecoveryOptions opts = recovery_from_config(p);
  opts.enforce_informativity = false;
  const FrequencyRecovery rec(config_data(p), p.at("nhat").get<Index>(), opts);
  std::vector<Complex> sigmas;
  for (const Json &s : p.at("sigma"))
  {
    sigmas.emplace_back(s.at(0).get<double>(), s.at(1).get<double>());
  }
  const bool derivative = p.value("derivative", true);
  std::vector<FrequencySample> samples = rec.recover_batch(sigmas, false);
  if (derivative)
  {
    // Derivatives need an informative value; the rest keep M1 unset.
    for_each_index(static_cast<Index>(samples.size()), Execution::Parallel, [&](Index i) {
      FrequencySample &s = samples[static_cast<std::size_t>(i)];
      if (s.informativity.interpolation())
      {
        s = recover_derivative(rec.workspace(), s, opts);
      }
    });
  }
  CommandResult result;
  result.files.push_back({"recover.csv", io::samples_table(samples).render(config.hash())});
  for (const FrequencySample &s : samples)
  {
    const bool ok = derivative ? s.informativity.hermite_informative()
                               : s.informativity.interpolation();
    if (!ok)
    {
      result.exit_code = 2;
      result.message = "data not informative at one or more points";
    }
  }
  return result;
}

CommandResult run_simulate(const ExperimentConfig &config)
{
  const Json &p = config.params;
  const DiscreteLTI sys = config_system(p);
  const TimeSeriesData data = simulate(sys, config_input(p));
  CommandResult result;
  result.files.push_back({"u.csv", io::trajectory_table("u", data.U).render(config.hash())});
  result.files.push_back({"y.csv", io::trajectory_table("y", data.Y).render(config.hash())});
  result.files.push_back(json_file("system.json", io::system_to_json(sys), config));
  return result;
}

}  // namespace

std::string ExperimentConfig::hash() const
{
  return io::config_hash(
    Json{{"experiment", experiment}, {"full_scale", full_scale}, {"params", params}});
}

const std::vector<std::string> &command_names()
{
  static const std::vector<std::string> names = {
    "cond-vs-radius", "error-vs-nhat", "h2-convergence", "heat-trajectory",
    "recover",        "tdirka",        "tfirka",         "simulate"};
  return names;
}

Json default_params(const std::string &experiment, bool full_scale)
{
  Json p;
  p["seed"] = 1;
  if (experiment == "cond-vs-radius")
  {
    const Index n = full_scale ? 270 : 60;
    p["system"] = random_system(n, 0.95);
    p["input"] = gaussian_input(3 * n);
    p["nhat"] = n;
    p["d"] = range_grid(1.0, 2.0, 0.05);
    p["omega"] = 0.5;
    return p;
  }
  if (experiment == "error-vs-nhat")
  {
    // Lightly damped poles: the unit circle needs a larger working order than |sigma| = d.
    p["system"] = random_system(full_scale ? 270 : 60, 0.999);
    p["system"]["min_fraction"] = 0.95;
    p["input"] = gaussian_input(full_scale ? 10000 : 4000);
    Json grid = Json::array();
    for (Index k = 1; k <= (full_scale ? 11 : 9); k++)
    {
      grid.push_back(Index(1) << k);
    }
    p["nhat"] = grid;
    p["points"] = full_scale ? 1000 : 200;
    p["omega_min"] = 1e-3;
    p["d"] = 2.5;
    p["kappa_omega"] = 1e-3;
    return p;
  }
  if (experiment == "h2-convergence")
  {
    const Index n = full_scale ? 1000 : 200;
    p["system"] = Json{{"type", "advection"},
                       {"n", n},
                       {"velocity", 20.0},
                       {"fs", full_scale ? 1e4 : 2e3}};
    p["input"] = gaussian_input(full_scale ? 10000 : 2000);
    p["nhat"] = 2 * n;
    p["r"] = range_grid(4, full_scale ? 30 : 20, 2);
    p["quadrature_tol"] = 1e-10;
    return irka_defaults(p);
  }
  if (experiment == "heat-trajectory")
  {
    const Index n = full_scale ? 200 : 50;
    p["system"] = Json{{"type", "heat"}, {"n", n}, {"fs", 1e3}};
    p["input"] = gaussian_input(4000);
    p["test"] = Json{{"distribution", "sawtooth"},
                     {"T", 4000},
                     {"frequency", 10.0},
                     {"amplitude", 10.0},
                     {"fs", 1e3}};
    p["nhat"] = 2 * n;
    p["r"] = 4;
    return irka_defaults(p);
  }
  if (experiment == "recover")
  {
    p["system"] = random_system(20, 0.9);
    p["input"] = gaussian_input(200);
    p["nhat"] = 40;
    p["sigma"] = Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 1.0}),
                              Json::array({-1.0, 0.0}), Json::array({0.6, 0.8}),
                              Json::array({1.5, 0.0}), Json::array({0.0, 1.5}),
                              Json::array({2.0, 0.0}), Json::array({1.2, -0.9})});
    p["derivative"] = true;
    p["recovery"] = irka_defaults(Json::object())["recovery"];
    return p;
  }
  if (experiment == "tdirka" || experiment == "tfirka")
  {
    const Index n = full_scale ? 100 : 50;
    p["system"] = random_system(n, 0.95);
    p["input"] = gaussian_input(10 * n);
    p["nhat"] = 2 * n;
    p["r"] = 6;
    p["quadrature_tol"] = 1e-10;
    return irka_defaults(p);
  }
  if (experiment == "simulate")
  {
    p["system"] = random_system(10, 0.9);
    p["input"] = gaussian_input(100);
    return p;
  }
  throw Error("unknown command '" + experiment + "'");
}

ExperimentConfig make_config(const std::string &experiment, bool full_scale, const Json *user,
                             std::optional<std::uint64_t> seed)
{
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.full_scale = full_scale;
  cfg.params = default_params(experiment, full_scale);
  if (user)
  {
    if (!user->is_object())
    {
      throw Error("configuration must be a JSON object");
    }
    cfg.params.merge_patch(*user);
  }
  if (seed)
  {
    cfg.params["seed"] = *seed;
  }
  return cfg;
}

const OutputFile &CommandResult::file(const std::string &name) const
{
  for (const OutputFile &f : files)
  {
    if (f.name == name)
    {
      return f;
    }
  }
  throw Error("no output named '" + name + "'");
}

DiscreteLTI system_from_config(const Json &s, std::uint64_t seed)
{
  if (s.contains("output_scale"))
  {
    Json base = s;
    base.erase("output_scale");
    DiscreteLTI sys = system_from_config(base, seed);
    sys.c *= s["output_scale"].get<double>();
    return sys;
  }
  const std::string type = s.value("type", std::string("random"));
  if (type == "random")
  {
    return random_stable_system(s.value("n", Index{20}), s.value("radius", 0.9), seed,
                                s.value("min_fraction", 0.2));
  }
  if (type == "advection")
  {
    const Index n = s.value("n", Index{200});
    const double a = s.value("velocity", 20.0);
    return advection_fd_model(n, a, s.value("fs", a * static_cast<double>(n) / 2.0));
  }
  if (type == "heat")
  {
    HeatParameters hp;
    hp.heat_capacity = s.value("heat_capacity", hp.heat_capacity);
    hp.density = s.value("density", hp.density);
    hp.conductivity = s.value("conductivity", hp.conductivity);
    hp.output_x = s.value("output_x", hp.output_x);
    return heat_fd_model(s.value("n", Index{50}), hp, s.value("fs", 1e3));
  }
  if (type == "file")
  {
    return io::system_from_json(Json::parse(io::read_file(s.at("path").get<std::string>())));
  }
  throw Error("unknown system type '" + type + "'");
}

Vector sawtooth_input(Index length, double frequency, double amplitude, double fs)
{
  if (length < 1 || !(fs > 0.0))
  {
    throw Error("sawtooth needs a positive length and sampling frequency");
  }
  Vector u(length);
  for (Index k = 0; k < length; k++)
  {
    // Fractional part of frequency * k / fs, exact for integer frequency and fs.
    const double phase = std::fmod(frequency * static_cast<double>(k), fs) / fs;
    u(k) = amplitude * (2.0 * phase - 1.0);
  }
  return u;
}

Vector input_from_config(const Json &in, std::uint64_t seed)
{
  const std::string dist = in.value("distribution", std::string("gaussian"));
  if (dist == "file")
  {
    return io::trajectory_from_csv(io::read_file(in.at("path").get<std::string>()), "u");
  }
  const Index T = in.at("T").get<Index>();
  if (T < 1)
  {
    throw Error("input length T must be positive");
  }
  const double scale = in.value("scale", 1.0);
  Vector u(T + 1);
  if (dist == "gaussian")
  {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (Index k = 0; k <= T; k++)
    {
      u(k) = scale * g(rng);
    }
  }
  else if (dist == "uniform")
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> g(-1.0, 1.0);
    for (Index k = 0; k <= T; k++)
    {
      u(k) = scale * g(rng);
    }
  }
  else if (dist == "zero")
  {
    u.setZero();
  }
  else if (dist == "sawtooth")
  {
    u = sawtooth_input(T + 1, in.value("frequency", 10.0), in.value("amplitude", 10.0),
                       in.value("fs", 1e3));
  }
  else
  {
    throw Error("unknown input distribution '" + dist + "'");
  }
  return u;
}

RecoveryOptions recovery_from_config(const Json &params)
{
  RecoveryOptions o;
  if (!params.contains("recovery"))
  {
    return o;
  }
  const Json &r = params["recovery"];
  const std::string policy = r.value("overflow_policy", std::string("scaled"));
  if (policy == "scaled")
  {
    o.overflow_policy = OverflowPolicy::Scaled;
  }
  else if (policy == "halve-nhat")
  {
    o.overflow_policy = OverflowPolicy::HalveNhat;
  }
  else
  {
    throw Error("overflow_policy must be 'scaled' or 'halve-nhat'");
  }
  const std::string method = r.value("method", std::string("projection"));
  if (method == "projection")
  {
    o.method = SolveMethod::Projection;
  }
  else if (method == "dense-qr")
  {
    o.method = SolveMethod::DenseQR;
  }
  else
  {
    throw Error("method must be 'projection' or 'dense-qr'");
  }
  o.existence_tolerance = r.value("existence_tolerance", o.existence_tolerance);
  o.rank_tolerance = r.value("rank_tolerance", o.rank_tolerance);
  o.min_nhat = r.value("min_nhat", o.min_nhat);
  return o;
}

io::CsvTable cond_vs_radius(const ExperimentConfig &config)
{
  const Json &p = config.params;
  RecoveryOptions opts = recovery_from_config(p);
  opts.enforce_informativity = false;
  opts.overflow_policy = OverflowPolicy::Scaled;
  const InformativityWorkspace ws(config_data(p), p.at("nhat").get<Index>(), opts.rank_tolerance);
  const std::vector<double> ds = grid_from(p.at("d"));
  const double omega = p.at("omega").get<double>();

  std::vector<std::array<double, 2>> kappas(ds.size());
  for_each_index(static_cast<Index>(ds.size()), Execution::Parallel, [&](Index i) {
    const Complex sigma = std::polar(ds[static_cast<std::size_t>(i)], omega);
    const FrequencySample s = recover_value(ws, sigma, opts);
    const double nu = gamma_vectors(sigma, ws.nhat()).gamma_norm.to_double();
    double unscaled = std::numeric_limits<double>::infinity();
    if (s.alpha > 0.0 && std::isfinite(nu))
    {
      unscaled = appended_column_analysis(nu, std::min(s.alpha, 1.0) * nu).kappa;
    }
    kappas[static_cast<std::size_t>(i)] = {unscaled, s.kappa};
  });

  io::CsvTable t({"d", "kappa_unscaled", "kappa_scaled"});
  for (std::size_t i = 0; i < ds.size(); i++)
  {
    t.add_row({ds[i], kappas[i][0], kappas[i][1]});
  }
  return t;
}

io::CsvTable error_vs_nhat(const ExperimentConfig &config)
{
  const Json &p = config.params;
  RecoveryOptions opts = recovery_from_config(p);
  opts.enforce_informativity = false;
  const DiscreteLTI sys = config_system(p);
  auto data = std::make_shared<const TimeSeriesData>(simulate(sys, config_input(p)));
  const TransferEvaluator truth(sys);

  const Index m = p.at("points").get<Index>();
  const double d = p.at("d").get<double>();
  const double lo = std::log(p.at("omega_min").get<double>());
  const double hi = std::log(std::numbers::pi);
  std::vector<Complex> unit(static_cast<std::size_t>(m));
  std::vector<Complex> outer(static_cast<std::size_t>(m));
  // Log-spaced on [omega_min, pi), right end excluded.
  for (Index i = 0; i < m; i++)
  {
    const double w = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m));
    unit[static_cast<std::size_t>(i)] = std::polar(1.0, w);
    outer[static_cast<std::size_t>(i)] = std::polar(d, w);
  }
  std::vector<Complex> exact_unit(unit.size()), exact_outer(outer.size());
  for_each_index(m, Execution::Parallel, [&](Index i) {
    const auto k = static_cast<std::size_t>(i);
    exact_unit[k] = truth.value(unit[k]);
    exact_outer[k] = truth.value(outer[k]);
  });
  const Complex kappa_sigma = std::polar(1.0, p.at("kappa_omega").get<double>());

  const auto max_error = [](const std::vector<FrequencySample> &s,
                            const std::vector<Complex> &exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); i++)
    {
      const double e = std::abs(s[i].M0 - exact[i]) / std::abs(exact[i]);
      worst = std::max(worst, std::isfinite(e) ? e : std::numeric_limits<double>::infinity());
    }
    return worst;
  };

  io::CsvTable t({"nhat", "kappa", "rel_error_modulus1", "rel_error_modulusd"});
  for (Index nhat : index_grid(p.at("nhat")))
  {
    if (nhat > data->final_time())
    {
      continue;
    }
    const InformativityWorkspace ws(data, nhat, opts.rank_tolerance);
    std::vector<FrequencySample> s1(unit.size()), sd(outer.size());
    for_each_index(m, Execution::Parallel, [&](Index i) {
      const auto k = static_cast<std::size_t>(i);
      s1[k] = recover_value(ws, unit[k], opts);
      sd[k] = recover_value(ws, outer[k], opts);
    });
    const double kappa = recover_value(ws, kappa_sigma, opts).kappa;
    t.add_row({static_cast<double>(nhat), kappa, max_error(s1, exact_unit),
               max_error(sd, exact_outer)});
  }
  return t;
}

io::CsvTable h2_convergence(const ExperimentConfig &config)
{
  const Json &p = config.params;
  const DiscreteLTI sys = config_system(p);
  const TransferOracle oracle = make_oracle(sys);
  const TransferFunction fom = fom_function(sys);
  const QuadratureOptions quad = quadrature_from_config(p);
  RecoveryOptions opts = recovery_from_config(p);
  // One trajectory serves every r.
  const FrequencyRecovery recovery(simulate(sys, config_input(p)), p.at("nhat").get<Index>(),
                                   opts);
  const std::vector<Index> rs = index_grid(p.at("r"));

  std::vector<std::array<double, 4>> rows(rs.size());
  for_each_index(static_cast<Index>(rs.size()), Execution::Parallel, [&](Index i) {
    const IrkaConfig cfg = irka_from_config(p, rs[static_cast<std::size_t>(i)]);
    const IrkaReport tf = tf_irka(oracle, cfg);
    const IrkaReport td = td_irka(recovery, cfg);
    rows[static_cast<std::size_t>(i)] = {relative_h2_error(fom, rom_function(tf.rom), quad),
                                         relative_h2_error(fom, rom_function(td.rom), quad),
                                         static_cast<double>(tf.iterations),
                                         static_cast<double>(td.iterations)};
  });

  io::CsvTable t({"r", "err_tf", "err_td", "iters_tf", "iters_td"});
  for (std::size_t i = 0; i < rs.size(); i++)
  {
    t.add_row({static_cast<double>(rs[i]), rows[i][0], rows[i][1], rows[i][2], rows[i][3]});
  }
  return t;
}

io::CsvTable heat_trajectory(const ExperimentConfig &config)
{
  const Json &p = config.params;
  const DiscreteLTI sys = config_system(p);
  const TimeSeriesData train = simulate(sys, config_input(p, "input"));
  const IrkaConfig cfg = irka_from_config(p, p.at("r").get<Index>());
  const IrkaReport report = td_irka(train, cfg);

  const Vector test_u = input_from_config(p.at("test"), sub_seed(p.at("test"), base_seed(p) + 2));
  const TimeSeriesData test = simulate(sys, test_u);
  const TimeSeriesData reduced = simulate(report.rom.as_real_system(), test_u);

  io::CsvTable t({"k", "y_test", "y_td", "abs_error"});
  for (Index k = 0; k < test_u.size(); k++)
  {
    t.add_row({static_cast<double>(k), test.Y(k), reduced.Y(k), std::abs(test.Y(k) - reduced.Y(k))});
  }
  return t;
}

CommandResult run_command(const ExperimentConfig &config)
{
  const std::string &e = config.experiment;
  const std::string hash = config.hash();
  CommandResult result;
  if (e == "cond-vs-radius")
  {
    result.files.push_back({"cond_vs_radius.csv", cond_vs_radius(config).render(hash)});
  }
  else if (e == "error-vs-nhat")
  {
    result.files.push_back({"error_vs_nhat.csv", error_vs_nhat(config).render(hash)});
  }
  else if (e == "h2-convergence")
  {
    result.files.push_back({"h2_convergence.csv", h2_convergence(config).render(hash)});
  }
  else if (e == "heat-trajectory")
  {
    result.files.push_back({"heat_trajectory.csv", heat_trajectory(config).render(hash)});
  }
  else if (e == "recover")
  {
    return run_recover(config);
  }
  else if (e == "tdirka")
  {
    return run_irka_command(config, true);
  }
  else if (e == "tfirka")
  {
    return run_irka_command(config, false);
  }
  else if (e == "simulate")
  {
    return run_simulate(config);
  }
  else
  {
    throw Error("unknown command '" + e + "'");
  }
  return result;
}

}  // namespace ddrom
