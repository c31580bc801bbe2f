// qom-sense: command-line front end for the qom library.
//
//   qom-sense <command> --params <file> [--set key=value]... [--out <dir>]
//             [--format csv|json] [--jobs N] [--seed S]
//
// exit codes: 0 ok, 1 check failure or domain error, 2 usage error, 3 numeric degeneracy

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qom/qom.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2, kDegenerate = 3;

struct Common {
  std::string params_file;
  std::vector<std::string> sets;
  std::string out_dir = ".";
  std::string format = "csv";
  unsigned jobs = 1;
  std::uint64_t seed = 42;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--params", c.params_file, "JSON parameter file")->required()->check(CLI::ExistingFile);
  sub->add_option("--set", c.sets, "override a parameter, key=value (repeatable)");
  sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
}

class Run {
 public:
  Run(std::string command, const Common& c, std::vector<std::string> argv)
      : command_(std::move(command)), common_(c), argv_(std::move(argv)),
        start_(std::chrono::steady_clock::now()) {
    std::vector<qom::ParamOverride> overrides;
    for (const auto& s : c.sets) overrides.push_back(qom::parse_override(s));
    config_ = qom::load_config(c.params_file, overrides);
    params_ = config_.params();
    fs::create_directories(c.out_dir);
  }

  const qom::SystemParams& params() const { return params_; }
  const Common& common() const { return common_; }

  // Run description without timing; embedded in data files.
  json echo() const {
    json j;
    j["tool"] = "qom-sense";
    j["version"] = QOM_VERSION;
    j["command"] = command_;
    j["argv"] = argv_;
    j["params_file"] = config_.source;
    json ov = json::array();
    for (const auto& o : config_.overrides) ov.push_back({{"key", o.key}, {"value", o.value}});
    j["overrides"] = ov;
    j["resolved_params"] = qom::experiment_to_json(config_.experiment);
    j["resolved_si"] = {{"g_rad_s", params_.g},
                        {"omega_m_rad_s", params_.omega_m},
                        {"gamma_m_rad_s", params_.gamma_m},
                        {"gamma_c_rad_s", params_.gamma_c},
                        {"temperature_k", params_.temperature}};
    j["format"] = common_.format;
    j["seed"] = common_.seed;
    j["jobs"] = common_.jobs;
    j["diagnostics"] = qom::diagnostics(params_);
    return j;
  }

  fs::path write_table(const std::string& stem, qom::SweepResult table) {
    table.manifest = echo();
    const fs::path path = fs::path(common_.out_dir) / (stem + "." + common_.format);
    std::ofstream os(path);
    if (common_.format == "json")
      os << table.to_json().dump(2) << '\n';
    else
      table.write_csv(os);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    outputs_.push_back(path.filename().string());
    return path;
  }

  fs::path write_json(const std::string& stem, const json& doc) {
    const fs::path path = fs::path(common_.out_dir) / (stem + ".json");
    std::ofstream os(path);
    os << doc.dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write " + path.string());
    outputs_.push_back(path.filename().string());
    return path;
  }

  void finish(const std::string& stem) {
    json m = echo();
    m["outputs"] = outputs_;
    m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream(fs::path(common_.out_dir) / (stem + ".manifest.json")) << m.dump(2) << '\n';
    for (const auto& o : outputs_) std::cout << (fs::path(common_.out_dir) / o).string() << '\n';
  }

 private:
  std::string command_;
  Common common_;
  std::vector<std::string> argv_;
  std::chrono::steady_clock::time_point start_;
  qom::LoadedConfig config_;
  qom::SystemParams params_;
  std::vector<std::string> outputs_;
};

qom::Branch parse_branch(const std::string& b) {
  return b == "negative" ? qom::Branch::Negative : qom::Branch::Positive;
}

qom::ChiMode parse_mode(const std::string& m) {
  return m == "factored" ? qom::ChiMode::Factored : qom::ChiMode::Exact;
}

double offset_over_gamma_m(const qom::SystemParams& p) {
  try {
    return qom::drive_offset(p) / p.gamma_m;
  } catch (const qom::DomainError&) {
    return std::nan("");
  }
}

int cmd_steady(Run& run, const std::string& branch) {
  const auto& p = run.params();
  const qom::SteadyState s = qom::steady_state(p, parse_branch(branch));
  qom::SweepResult t;
  t.comments = {"mean-field steady state; alpha and Q dimensionless"};
  t.add("omega_drive_rad_s", std::vector{qom::drive_strength(p)})
      .add("omega_drive_offset_over_gamma_m", std::vector{offset_over_gamma_m(p)})
      .add("q_s2", std::vector{s.q_s2})
      .add("q_s", std::vector{s.q_s})
      .add("p_s", std::vector{s.p_s})
      .add("alpha_re", std::vector{s.alpha.real()})
      .add("alpha_im", std::vector{s.alpha.imag()})
      .add("alpha_abs_sq", std::vector{s.intensity()})
      .add("above_threshold", std::vector{s.above_threshold ? 1.0 : 0.0})
      .add("stiffness_rad_s", std::vector{s.stiffness});
  run.write_table("steady", std::move(t));
  run.finish("steady");
  return kOk;
}

int cmd_eigen(Run& run) {
  const auto& p = run.params();
  const qom::SpectralStructure st = qom::spectral_structure(p);
  qom::SweepResult t;
  t.comments = {"eigenfrequencies and exceptional points; rad/s unless noted"};
  t.add("omega_drive_offset_over_gamma_m", std::vector{qom::drive_offset(p) / p.gamma_m})
      .add("re_omega_plus_rad_s", std::vector{st.omega_plus.real()})
      .add("im_omega_plus_rad_s", std::vector{st.omega_plus.imag()})
      .add("re_omega_minus_rad_s", std::vector{st.omega_minus.real()})
      .add("im_omega_minus_rad_s", std::vector{st.omega_minus.imag()})
      .add("omega_c_rad_s", std::vector{st.omega_c_drive})
      .add("omega_ep1_rad_s", std::vector{st.omega_ep1})
      .add("omega_ep2_rad_s", std::vector{st.omega_ep2})
      .add("ep1_offset_over_gamma_m", std::vector{st.offset_ep1 / p.gamma_m})
      .add("ep2_offset_over_gamma_m", std::vector{st.offset_ep2 / p.gamma_m})
      .add("regime", std::vector<std::string>{std::string(qom::regime_name(st.regime))});
  run.write_table("eigen", std::move(t));
  run.finish("eigen");
  return kOk;
}

std::vector<double> frequency_grid(const qom::SystemParams& p, std::optional<double> omega, std::size_t points,
                                   double span) {
  if (omega) return {*omega};
  return qom::default_frequency_grid(p, points, span);
}

int cmd_chi(Run& run, const std::string& mode, std::optional<double> omega, std::size_t points, double span) {
  const auto& p = run.params();
  const qom::SteadyState s = qom::steady_state(p);
  const auto grid = frequency_grid(p, omega, points, span);
  std::vector<double> wn, re, im, a2, l;
  for (double w : grid) {
    const qom::cplx c = qom::susceptibility(p, s, w, parse_mode(mode));
    wn.push_back(w / p.omega_m);
    re.push_back(c.real());
    im.push_back(c.imag());
    a2.push_back(std::isinf(c.real()) ? INFINITY : std::norm(c));
    l.push_back(std::log10(a2.back()));
  }
  qom::SweepResult t;
  t.comments = {"mechanical susceptibility chi(omega), units s; mode " + mode};
  t.add("omega_rad_s", grid)
      .add("omega_over_omega_m", wn)
      .add("re_chi", re)
      .add("im_chi", im)
      .add("abs_chi_sq", a2)
      .add("log10_abs_chi_sq", l);
  run.write_table("chi", std::move(t));
  run.finish("chi");
  if (omega && std::isinf(a2.front())) {
    std::cerr << "qom-sense: susceptibility diverges at the requested point (critical point, omega = 0)\n";
    return kDegenerate;
  }
  return kOk;
}

int cmd_psd(Run& run, const std::string& mode, std::optional<double> omega, std::size_t points, double span) {
  const auto& p = run.params();
  const qom::SteadyState s = qom::steady_state(p);
  const auto grid = frequency_grid(p, omega, points, span);
  std::vector<double> wn, sqq, th, rad;
  for (double w : grid) {
    wn.push_back(w / p.omega_m);
    sqq.push_back(qom::psd(p, s, w, p.temperature, parse_mode(mode)));
    th.push_back(qom::thermal_spectrum(p, w, p.temperature));
    rad.push_back(qom::radiation_spectrum(p, s, w));
  }
  qom::SweepResult t;
  t.comments = {"position PSD S_qq(omega) in s; noise spectra in rad/s; T = " +
                qom::format_double(p.temperature) + " K"};
  t.add("omega_rad_s", grid)
      .add("omega_over_omega_m", wn)
      .add("s_qq_seconds", sqq)
      .add("s_thermal", th)
      .add("s_radiation", rad);
  run.write_table("psd", std::move(t));
  run.finish("psd");
  if (omega && std::isinf(sqq.front())) {
    std::cerr << "qom-sense: PSD diverges at the requested point (critical point, omega = 0)\n";
    return kDegenerate;
  }
  return kOk;
}

int cmd_sensitivity(Run& run, const std::vector<double>& offsets, const std::vector<double>& temps,
                    const std::string& policy) {
  const auto& p = run.params();
  std::vector<qom::Drive> drives;
  for (double o : offsets) drives.push_back(qom::Drive::from_critical(o * p.gamma_m));
  if (drives.empty()) drives.push_back(p.drive);
  std::vector<double> t = temps;
  if (t.empty()) t.push_back(p.temperature);
  const auto pol = policy == "zero" ? qom::OmegaPolicy::AtZero : qom::OmegaPolicy::AtOmegaEff;
  qom::SweepResult r = qom::sensitivity_sweep(p, drives, t, pol, run.common().jobs);
  r.comments = {"temperature sensitivity xi = dS_qq/dT in s/K"};
  const bool single = r.rows() == 1;
  const double closed = r.numeric("xi_closed_s_per_k").front();
  run.write_table("sensitivity", std::move(r));
  run.finish("sensitivity");
  if (single && std::isinf(closed)) {
    std::cerr << "qom-sense: sensitivity diverges at the requested point (critical point)\n";
    return kDegenerate;
  }
  return kOk;
}

int cmd_verify(Run& run, const std::string& level) {
  const auto lvl = level == "full" ? qom::VerifyLevel::Full : qom::VerifyLevel::Fast;
  const json report = qom::verify(run.params(), lvl, run.common().seed, run.common().jobs);
  for (const auto& l : report["lines"]) std::cout << l.get<std::string>() << '\n';
  run.write_json("verify_report", report);
  run.finish("verify");
  if (!report["pass"].get<bool>()) {
    for (const auto& c : report["checks"])
      if (!c["pass"].get<bool>())
        std::cerr << "qom-sense: check failed: " << c["name"].get<std::string>()
                  << (c["detail"].get<std::string>().empty() ? "" : " (" + c["detail"].get<std::string>() + ")")
                  << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int cmd_figure(Run& run, const std::string& id) {
  qom::FigureData fig = qom::reproduce_figure(id, run.params(), run.common().jobs);
  for (auto& f : fig.files) run.write_table(f.stem, std::move(f.table));
  if (!fig.summary.is_null()) run.write_json("fig_" + id + "_summary", fig.summary);
  run.finish("fig_" + id);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic optomechanical temperature-sensing engine"};
  app.set_version_flag("--version", std::string(QOM_VERSION));
  app.require_subcommand(1);

  Common common;
  std::string branch = "positive", mode = "exact", level = "fast", policy = "eff", figure;
  std::optional<double> omega;
  std::size_t points = 4001;
  double span = 1.5;
  std::vector<double> offsets, temps;

  auto* steady = app.add_subcommand("steady", "mean-field steady state");
  add_common(steady, common);
  steady->add_option("--branch", branch, "displacement branch")->check(CLI::IsMember({"positive", "negative"}));

  auto* eigen = app.add_subcommand("eigen", "eigenfrequencies, EPs and regime");
  add_common(eigen, common);

  auto* chi = app.add_subcommand("chi", "mechanical susceptibility over frequency");
  auto* psd = app.add_subcommand("psd", "position power spectral density");
  for (auto* sub : {chi, psd}) {
    add_common(sub, common);
    sub->add_option("--mode", mode, "susceptibility form")->check(CLI::IsMember({"exact", "factored"}));
    sub->add_option("--omega", omega, "single angular frequency (rad/s) instead of a grid");
    sub->add_option("--points", points, "grid size")->check(CLI::Range(16, 10000000));
    sub->add_option("--span", span, "grid half-width in units of omega_m")->check(CLI::PositiveNumber);
  }

  auto* sens = app.add_subcommand("sensitivity", "temperature sensitivity over drive and temperature grids");
  add_common(sens, common);
  sens->add_option("--offsets", offsets, "drive offsets (Omega - Omega_c) in units of gamma_m")->delimiter(',');
  sens->add_option("--temperatures", temps, "temperatures in K")->delimiter(',');
  sens->add_option("--policy", policy, "evaluation frequency off the symmetric window")
      ->check(CLI::IsMember({"zero", "eff"}));

  auto* ver = app.add_subcommand("verify", "closed-form identities and oracle cross-checks");
  add_common(ver, common);
  ver->add_option("--level", level, "fast or full (adds Monte Carlo)")->check(CLI::IsMember({"fast", "full"}));

  auto* fig = app.add_subcommand("reproduce-figure", "write the data behind one figure");
  add_common(fig, common);
  fig->add_option("id", figure, "figure id")->required()->check(CLI::IsMember(qom::figure_ids()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::vector<std::string> args(argv, argv + argc);
  auto* sub = app.get_subcommands().front();
  try {
    Run run(sub->get_name(), common, args);
    if (sub == steady) return cmd_steady(run, branch);
    if (sub == eigen) return cmd_eigen(run);
    if (sub == chi) return cmd_chi(run, mode, omega, points, span);
    if (sub == psd) return cmd_psd(run, mode, omega, points, span);
    if (sub == sens) return cmd_sensitivity(run, offsets, temps, policy);
    if (sub == ver) return cmd_verify(run, level);
    if (sub == fig) return cmd_figure(run, figure);
  } catch (const qom::ValidationError& e) {
    std::cerr << "qom-sense: invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const qom::DegeneracyError& e) {
    std::cerr << "qom-sense: numeric degeneracy: " << e.what() << '\n';
    return kDegenerate;
  } catch (const qom::DomainError& e) {
    std::cerr << "qom-sense: domain error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const qom::RegimeError& e) {
    std::cerr << "qom-sense: regime error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "qom-sense: error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
