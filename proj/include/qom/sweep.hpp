#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace qom {

// 17 significant digits; inf/-inf/nan spelled out.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Column-oriented table. Numeric and label columns may be mixed.
struct SweepResult {
  using Column = std::variant<std::vector<double>, std::vector<std::string>>;

  int schema_version = 1;
  std::vector<std::string> names;
  std::vector<Column> columns;
  std::vector<std::string> comments;  // emitted as leading "# " lines in CSV
  nlohmann::json manifest = nlohmann::json::object();

  SweepResult& add(std::string name, Column col) {
    names.push_back(std::move(name));
    columns.push_back(std::move(col));
    return *this;
  }

  std::size_t rows() const {
    if (columns.empty()) return 0;
    return std::visit([](const auto& c) { return c.size(); }, columns.front());
  }

  void check() const {
    const std::size_t n = rows();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const std::size_t m = std::visit([](const auto& c) { return c.size(); }, columns[i]);
      if (m != n) throw std::logic_error("SweepResult: column '" + names[i] + "' length mismatch");
    }
  }

  const std::vector<double>& numeric(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return std::get<std::vector<double>>(columns[i]);
    throw std::out_of_range("SweepResult: no column '" + name + "'");
  }

  const std::vector<std::string>& labels(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return std::get<std::vector<std::string>>(columns[i]);
    throw std::out_of_range("SweepResult: no column '" + name + "'");
  }

  std::string header() const {
    std::string h;
    for (std::size_t i = 0; i < names.size(); ++i) h += (i ? "," : "") + names[i];
    return h;
  }

  void write_csv(std::ostream& os) const {
    check();
    for (const auto& c : comments) os << "# " << c << '\n';
    os << header() << '\n';
    const std::size_t n = rows();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        std::visit(
            [&](const auto& c) {
              if constexpr (std::is_same_v<std::decay_t<decltype(c)>, std::vector<double>>)
                os << format_double(c[r]);
              else
                os << c[r];
            },
            columns[i]);
      }
      os << '\n';
    }
  }

  // Non-finite numbers become strings so the document stays valid JSON.
  nlohmann::json to_json() const {
    check();
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["comments"] = comments;
    j["manifest"] = manifest;
    nlohmann::json cols = nlohmann::json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) {
      nlohmann::json arr = nlohmann::json::array();
      std::visit(
          [&](const auto& c) {
            for (const auto& v : c) {
              if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) {
                if (std::isfinite(v))
                  arr.push_back(v);
                else
                  arr.push_back(format_double(v));
              } else {
                arr.push_back(v);
              }
            }
          },
          columns[i]);
      cols[names[i]] = std::move(arr);
    }
    j["columns"] = std::move(cols);
    j["column_order"] = names;
    return j;
  }
};

}  // namespace qom
