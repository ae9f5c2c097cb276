#include "shapemix/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shapemix {

namespace {

[[noreturn]] void parse_fail(const std::string& path, long line,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return in;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vec read_samples(const std::string& path, int column, bool normalize) {
  std::ifstream in = open_in(path);
  Vec out;
  std::string line;
  long ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (blank(line) || line[0] == '#') continue;
    std::string field = line;
    if (column >= 1) {
      std::stringstream ss(line);
      std::string tok;
      int c = 0;
      field.clear();
      while (std::getline(ss, tok, ',')) {
        if (++c == column) {
          field = tok;
          break;
        }
      }
      if (field.empty())
        parse_fail(path, ln, "row has no column " + std::to_string(column));
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(field, &pos);
      while (pos < field.size() && std::isspace((unsigned char)field[pos]))
        ++pos;
      if (pos != field.size()) throw std::invalid_argument("trailing junk");
      out.push_back(v);
    } catch (const std::exception&) {
      parse_fail(path, ln, "cannot parse '" + field + "' as a number");
    }
  }
  if (out.empty()) throw std::runtime_error(path + ": no samples");
  if (normalize) {
    const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
    const double a = *lo, b = *hi;
    if (!(a < b))
      throw std::runtime_error(path + ": cannot normalize a constant column");
    for (double& x : out) x = (x - a) / (b - a);
  }
  return out;
}

void write_samples(const std::string& path, const Vec& samples) {
  std::ofstream out = open_out(path);
  for (double x : samples) out << format_double(x) << '\n';
}

Vec read_weights(const std::string& path) {
  std::ifstream in = open_in(path);
  Vec w;
  std::string line;
  long ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (blank(line) || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      parse_fail(path, ln, "expected 'index,value'");
    long idx = 0;
    double val = 0.0;
    try {
      idx = std::stol(line.substr(0, comma));
      val = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      parse_fail(path, ln, "cannot parse 'index,value' row");
    }
    if (idx != static_cast<long>(w.size()) + 1)
      parse_fail(path, ln,
                 "index " + std::to_string(idx) + " out of order (expected " +
                     std::to_string(w.size() + 1) + ")");
    w.push_back(val);
  }
  if (w.empty()) throw std::runtime_error(path + ": no weights");
  return w;
}

void write_weights(const std::string& path, const Vec& w) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < w.size(); ++i)
    out << (i + 1) << ',' << format_double(w[i]) << '\n';
}

void write_trace(const std::string& path, const SolveTrace& trace) {
  std::ofstream out = open_out(path);
  out << "k,f,L,fw_gap,subiters,step\n";
  for (const TraceRow& r : trace.rows)
    out << r.k << ',' << format_double(r.f) << ',' << format_double(r.L) << ','
        << format_double(r.fw_gap) << ',' << r.subiters << ','
        << step_name(r.step) << '\n';
}

void write_density(const std::string& path, const Vec& grid,
                   const Vec& density) {
  std::ofstream out = open_out(path);
  out << "x,density\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << format_double(grid[i]) << ',' << format_double(density[i]) << '\n';
}

void write_kw_certificate(const std::string& path, const KWCertificate& cert) {
  std::ofstream out = open_out(path);
  const auto [lo, hi] = std::minmax_element(cert.nu.begin(), cert.nu.end());
  out << format_double(*lo) << ' ' << format_double(*hi) << ' '
      << format_double(cert.feasibility_margin) << ' '
      << format_double(cert.gamma) << ' ' << format_double(cert.gap_bound_17)
      << ' ' << format_double(cert.gap_bound_18) << ' '
      << format_double(cert.dual_distance_bound) << '\n';
  for (double v : cert.nu) out << format_double(v) << '\n';
}

}  // namespace shapemix
