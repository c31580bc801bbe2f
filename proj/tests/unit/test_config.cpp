#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qom/config.hpp"

using namespace qom;
using nlohmann::json;

namespace {

std::string field_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "none";
}

json paper_json() {
  return {{"g_hz", -245.0}, {"f_m_hz", 8.7e6}, {"q_m", 1e4}, {"gamma_c_hz", 5e9},
          {"drive_offset_over_gamma_m", 0.01}, {"temperature_k", 300.0}};
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Config, ParsesPaperSet) {
  const ExperimentParams e = experiment_from_json(paper_json());
  EXPECT_EQ(e.g_hz, -245.0);
  EXPECT_EQ(*e.drive_offset_over_gamma_m, 0.01);
  EXPECT_FALSE(e.omega_hz.has_value());
  const SystemParams p = params_from_experiment(e);
  EXPECT_EQ(p.drive.reference(), Drive::Reference::Critical);
  EXPECT_NEAR(drive_offset(p) / p.gamma_m, 0.01, 1e-15);
}

TEST(Config, DriveDefaultsToZero) {
  json j = paper_json();
  j.erase("drive_offset_over_gamma_m");
  EXPECT_EQ(params_from_experiment(experiment_from_json(j)).drive, Drive::absolute(0.0));
}

TEST(Config, RoundTrip) {
  const json j = paper_json();
  EXPECT_EQ(experiment_to_json(experiment_from_json(j)), j);
}

TEST(Config, Rejections) {
  json unknown = paper_json();
  unknown["q_factor"] = 3.0;
  EXPECT_EQ(field_of([&] { experiment_from_json(unknown); }), "q_factor");
  json both = paper_json();
  both["omega_hz"] = 1e9;
  EXPECT_EQ(field_of([&] { experiment_from_json(both); }), "omega_hz");
  json missing = paper_json();
  missing.erase("q_m");
  EXPECT_EQ(field_of([&] { experiment_from_json(missing); }), "q_m");
  json text = paper_json();
  text["g_hz"] = "-245";
  EXPECT_EQ(field_of([&] { experiment_from_json(text); }), "g_hz");
  EXPECT_EQ(field_of([&] { experiment_from_json(json::array()); }), "params");
}

TEST(Config, Overrides) {
  EXPECT_EQ(parse_override("q_m=5e3").value, 5e3);
  EXPECT_EQ(parse_override("g_hz=-1").key, "g_hz");
  EXPECT_EQ(field_of([] { parse_override("q_m"); }), "q_m");
  EXPECT_EQ(field_of([] { parse_override("bogus=1"); }), "bogus");
  EXPECT_EQ(field_of([] { parse_override("q_m=12abc"); }), "q_m");
  EXPECT_EQ(field_of([] { parse_override("q_m="); }), "q_m");

  LoadedConfig c{experiment_from_json(paper_json()), {}, ""};
  c = apply_overrides(c, {parse_override("omega_hz=2e11"), parse_override("temperature_k=4")});
  EXPECT_EQ(*c.experiment.omega_hz, 2e11);
  EXPECT_FALSE(c.experiment.drive_offset_over_gamma_m.has_value());
  EXPECT_EQ(c.experiment.temperature_k, 4.0);
  EXPECT_EQ(c.overrides.size(), 2u);
  EXPECT_EQ(c.params().drive, Drive::absolute(2e11 * two_pi));
}

TEST(Config, LoadsFiles) {
  const auto good = write_temp("qom_config_good.json", paper_json().dump());
  const LoadedConfig c = load_config(good, {parse_override("q_m=2e4")});
  EXPECT_EQ(c.experiment.q_m, 2e4);
  EXPECT_EQ(c.source, good.string());
  const auto bad = write_temp("qom_config_bad.json", "{ \"g_hz\": ");
  EXPECT_EQ(field_of([&] { load_config(bad); }), "params");
  EXPECT_EQ(field_of([] { load_config("/nonexistent/qom.json"); }), "params");
}

TEST(Config, ShippedParameterFiles) {
  const std::filesystem::path dir = std::filesystem::path(QOM_GOLDEN_DIR).parent_path().parent_path() / "params";
  const SystemParams paper = load_config(dir / "paper.json").params();
  const SystemParams builtin = paper_parameters();
  EXPECT_NEAR(paper.omega_m / builtin.omega_m, 1.0, 1e-15);
  EXPECT_NEAR(paper.g / builtin.g, 1.0, 1e-15);
  EXPECT_NEAR(drive_offset(paper) / paper.gamma_m, 0.01, 1e-12);

  const SystemParams desk = load_config(dir / "desk.json").params();
  const SystemParams dref = desk_parameters();
  EXPECT_NEAR(desk.g / dref.g, 1.0, 1e-12);
  EXPECT_NEAR(desk.gamma_c / dref.gamma_c, 1.0, 1e-12);
  EXPECT_NEAR(desk.temperature / dref.temperature, 1.0, 1e-12);
  EXPECT_NEAR(drive_strength(desk) / critical_drive(desk), 0.6, 1e-9);
}
