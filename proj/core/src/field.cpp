#include "lpinn/field.hpp"

#include "lpinn/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lpinn {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_row(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw ConfigError("field CSV line " + std::to_string(lineno) +
                        ": bad number '" + cell + "'");
    }
  }
  return out;
}

}  // namespace

Grid make_grid(std::size_t nx, std::size_t nt, const Domain& domain) {
  if (nx < 2 || nt < 2) throw ContractViolation("grid needs nx >= 2 and nt >= 2");
  Grid g;
  g.domain = domain;
  for (std::size_t i = 0; i < nx; ++i) {
    g.x.push_back(static_cast<double>(i) * domain.length / static_cast<double>(nx));
  }
  for (std::size_t j = 0; j < nt; ++j) {
    g.t.push_back(static_cast<double>(j) * domain.t_final /
                  static_cast<double>(nt - 1));
  }
  return g;
}

Field make_field(const Grid& grid) {
  Field f;
  f.x_grid = grid.x;
  f.t_grid = grid.t;
  f.domain = grid.domain;
  f.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.nt()),
                                   static_cast<Eigen::Index>(grid.nx()));
  return f;
}

void write_field_csv(std::ostream& out, const Field& field,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << 't';
  for (double x : field.x_grid) out << ',' << fmt17(x);
  out << '\n';
  for (std::size_t j = 0; j < field.nt(); ++j) {
    out << fmt17(field.t_grid[j]);
    for (std::size_t i = 0; i < field.nx(); ++i) {
      out << ',' << fmt17(field.values(static_cast<Eigen::Index>(j),
                                       static_cast<Eigen::Index>(i)));
    }
    out << '\n';
  }
}

Field read_field_csv(std::istream& in, const Domain& domain) {
  Field f;
  f.domain = domain;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line.rfind("t,", 0) != 0) {
        throw ConfigError("field CSV line " + std::to_string(lineno) +
                          ": expected header starting with 't,'");
      }
      f.x_grid = parse_row(line.substr(2), lineno);
      header = true;
      continue;
    }
    auto row = parse_row(line, lineno);
    if (row.size() != f.x_grid.size() + 1) {
      throw ConfigError("field CSV line " + std::to_string(lineno) + ": expected " +
                        std::to_string(f.x_grid.size() + 1) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (!header) throw ConfigError("field CSV has no header");
  f.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(f.x_grid.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    f.t_grid.push_back(rows[j][0]);
    for (std::size_t i = 0; i < f.x_grid.size(); ++i) {
      f.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          rows[j][i + 1];
    }
  }
  return f;
}

void write_field_binary(std::ostream& out, const Field& field) {
  const std::int64_t nx = static_cast<std::int64_t>(field.nx());
  const std::int64_t nt = static_cast<std::int64_t>(field.nt());
  const double header[3] = {0.0, field.domain.length, field.domain.t_final};
  out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
  out.write(reinterpret_cast<const char*>(&nt), sizeof nt);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (std::int64_t j = 0; j < nt; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      const double v = field.values(j, i);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  }
}

Field read_field_binary(std::istream& in) {
  std::int64_t nx = 0;
  std::int64_t nt = 0;
  double header[3] = {};
  in.read(reinterpret_cast<char*>(&nx), sizeof nx);
  in.read(reinterpret_cast<char*>(&nt), sizeof nt);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || nx < 2 || nt < 2) throw ConfigError("bad binary field header");
  Domain d{header[1] - header[0], header[2]};
  Field f = make_field(make_grid(static_cast<std::size_t>(nx),
                                 static_cast<std::size_t>(nt), d));
  for (std::int64_t j = 0; j < nt; ++j) {
    for (std::int64_t i = 0; i < nx; ++i) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof v);
      f.values(j, i) = v;
    }
  }
  if (!in) throw ConfigError("binary field payload truncated");
  return f;
}

void save_field_csv(const std::filesystem::path& path, const Field& field,
                    const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_field_csv(out, field, comments);
}

void save_field_binary(const std::filesystem::path& path, const Field& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_field_binary(out, field);
}

}  // namespace lpinn
