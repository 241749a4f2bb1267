#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dicke/analysis.hpp"
#include "dicke/errors.hpp"

namespace dicke {

// Comment lines start with '#', fields are comma separated, numbers use '.'
// and "%.17e" so that every double survives a round trip bit-for-bit.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

inline std::string format_cutoffs(const std::vector<int>& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s;
}

inline std::vector<std::string> split_fields(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string sweep_csv_header(std::size_t modes) {
  std::string h = "axis,method,energy,jz";
  for (std::size_t i = 0; i < modes; ++i) h += ",nu" + std::to_string(i + 1);
  h += ",entropy,neighbor_fidelity,quantum_fidelity";
  return h;
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& r, const Metadata& config = {}) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  out << "# dicke_qpt sweep\n";
  for (const auto& [k, v] : config) out << "# config." << k << '=' << v << '\n';
  out << "# axis=" << r.axis.name() << '\n';
  out << "# grid_points=" << r.grid.size() << '\n';
  if (r.basis) {
    out << "# basis.cutoffs=" << format_cutoffs(r.basis->cutoffs()) << '\n';
    out << "# basis.dim=" << r.basis->dim() << '\n';
  }
  for (const auto& t : r.transitions)
    out << "# transition." << method_name(t.method) << '=' << format_number(t.value)
        << " locator=" << locator_name(t.locator) << " half_width=" << format_number(t.half_width) << '\n';
  for (const auto& n : r.notes) out << "# note=" << n << '\n';

  const std::size_t k = r.base.modes();
  out << sweep_csv_header(k) << '\n';
  for (const auto& rec : r.records) {
    out << format_number(rec.x) << ',' << method_name(rec.method) << ',' << opt(rec.energy) << ','
        << opt(rec.jz);
    for (std::size_t i = 0; i < k; ++i) out << ',' << (i < rec.nu.size() ? format_number(rec.nu[i]) : "");
    out << ',' << opt(rec.entropy) << ',' << opt(rec.neighbor_fidelity) << ',' << opt(rec.quantum_fidelity)
        << '\n';
  }
}

inline std::string sweep_csv_string(const SweepResult& r, const Metadata& config = {}) {
  std::ostringstream s;
  write_sweep_csv(s, r, config);
  return s.str();
}

inline void emit_csv(const SweepResult& r, const std::string& path, const Metadata& config = {}) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write_sweep_csv(f, r, config);
  if (!f) throw IoError("failed writing " + path);
}

struct SweepTable {
  std::vector<std::string> metadata;  // comment lines without the leading "# "
  std::string header;
  std::vector<SweepRecord> rows;
};

inline SweepTable parse_sweep_csv(std::istream& in) {
  SweepTable t;
  std::string line;
  std::size_t modes = 0;
  auto number = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw IoError("malformed number '" + s + "'");
    return v;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      t.metadata.push_back(line.size() > 2 ? line.substr(2) : std::string());
      continue;
    }
    if (t.header.empty()) {
      t.header = line;
      const auto cols = split_fields(line);
      if (cols.size() < 7 || cols[0] != "axis") throw IoError("unexpected CSV header: " + line);
      modes = cols.size() - 7;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != modes + 7) throw IoError("row has " + std::to_string(f.size()) + " fields: " + line);
    SweepRecord r;
    r.x = *number(f[0]);
    const auto m = parse_method(f[1]);
    if (!m) throw IoError("unknown method '" + f[1] + "'");
    r.method = *m;
    r.energy = number(f[2]);
    r.jz = number(f[3]);
    bool any_nu = false;
    std::vector<double> nu(modes);
    for (std::size_t i = 0; i < modes; ++i)
      if (auto v = number(f[4 + i])) {
        nu[i] = *v;
        any_nu = true;
      }
    if (any_nu) r.nu = nu;
    r.entropy = number(f[4 + modes]);
    r.neighbor_fidelity = number(f[5 + modes]);
    r.quantum_fidelity = number(f[6 + modes]);
    r.complex_quadrature = false;
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline void write_phase_csv(std::ostream& out, const PhaseDiagram& d, const Metadata& config = {}) {
  out << "# dicke_qpt phase-diagram\n";
  for (const auto& [k, v] : config) out << "# config." << k << '=' << v << '\n';
  out << "# x_axis=" << d.x_axis.name() << '\n';
  out << "# y_axis=" << d.y_axis.name() << '\n';
  out << "# note=superradiant where delta < 1\n";
  for (const auto& [x, y] : d.boundary) out << "# boundary=" << format_number(x) << ',' << format_number(y) << '\n';
  out << "x,y,delta,superradiant\n";
  for (std::size_t iy = 0; iy < d.y_grid.size(); ++iy)
    for (std::size_t ix = 0; ix < d.x_grid.size(); ++ix)
      out << format_number(d.x_grid[ix]) << ',' << format_number(d.y_grid[iy]) << ','
          << format_number(d.delta[iy][ix]) << ',' << (d.superradiant[iy][ix] ? 1 : 0) << '\n';
}

}  // namespace dicke
