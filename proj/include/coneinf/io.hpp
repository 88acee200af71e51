#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "coneinf/core.hpp"
#include "coneinf/reductions.hpp"

namespace coneinf {

enum class FileFormat { Csv, Json };

inline FileFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".json")
    return FileFormat::Json;
  return FileFormat::Csv;
}

namespace detail {

/// Shortest decimal that round-trips the double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view tok, int line, int column) {
  // Tolerate surrounding spaces.
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t'))
    tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' ||
                          tok.back() == '\r'))
    tok.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw SolverError(Errc::ParseError,
                      "line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": not a number: '" +
                          std::string(tok) + "'");
  return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw SolverError(Errc::ParseError, "cannot open " + path);
  return in;
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw SolverError(Errc::ParseError, "cannot open " + path + " for writing");
  return out;
}

}  // namespace detail

/// CSV layout: header `n=<int>,m=<int>`, then one point per line,
/// `p0,pbar_1,...,pbar_{n-1}`, shortest round-trip decimals.
inline void write_instance_csv(const Instance& inst, std::ostream& out) {
  out << "n=" << inst.n << ",m=" << inst.m() << "\n";
  for (const Point& p : inst.points) {
    out << detail::format_double(p.p0);
    for (Eigen::Index j = 0; j < p.pbar.size(); ++j)
      out << "," << detail::format_double(p.pbar[j]);
    out << "\n";
  }
}

inline Instance read_instance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw SolverError(Errc::ParseError, "line 1: missing header");
  Instance inst;
  int m = 0;
  if (std::sscanf(line.c_str(), "n=%d,m=%d", &inst.n, &m) != 2)
    throw SolverError(Errc::ParseError,
                      "line 1: expected header 'n=<int>,m=<int>', got '" +
                          line + "'");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto tokens = detail::split_commas(line);
    if (static_cast<int>(tokens.size()) != inst.n)
      throw SolverError(Errc::ParseError,
                        "line " + std::to_string(lineno) + ": expected " +
                            std::to_string(inst.n) + " fields, got " +
                            std::to_string(tokens.size()));
    Point p(detail::parse_double(tokens[0], lineno, 1), Vec(inst.n - 1));
    for (int j = 1; j < inst.n; ++j)
      p.pbar[j - 1] = detail::parse_double(tokens[j], lineno, j + 1);
    inst.points.push_back(std::move(p));
  }
  if (inst.m() != m)
    throw SolverError(Errc::ParseError,
                      "header says m=" + std::to_string(m) + " but " +
                          std::to_string(inst.m()) + " rows follow");
  validate_instance(inst);
  return inst;
}

/// JSON layout: {"n": int, "points": [[p0, pbar_1, ...], ...]}.
inline nlohmann::ordered_json instance_to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["n"] = inst.n;
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const Point& p : inst.points) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    row.push_back(p.p0);
    for (Eigen::Index k = 0; k < p.pbar.size(); ++k) row.push_back(p.pbar[k]);
    pts.push_back(std::move(row));
  }
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  Instance inst;
  try {
    inst.n = j.at("n").get<int>();
    for (const auto& row : j.at("points")) {
      if (static_cast<int>(row.size()) != inst.n)
        throw SolverError(Errc::ParseError,
                          "a point row has " + std::to_string(row.size()) +
                              " entries, expected " + std::to_string(inst.n));
      Point p(row[0].get<double>(), Vec(inst.n - 1));
      for (int k = 1; k < inst.n; ++k) p.pbar[k - 1] = row[k].get<double>();
      inst.points.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SolverError(Errc::ParseError, std::string("bad instance JSON: ") + e.what());
  }
  validate_instance(inst);
  return inst;
}

inline void write_instance(const Instance& inst, const std::string& path,
                           FileFormat format) {
  auto out = detail::open_for_write(path);
  if (format == FileFormat::Csv) {
    write_instance_csv(inst, out);
  } else {
    out << instance_to_json(inst).dump(2) << "\n";
  }
}

inline Instance read_instance(const std::string& path, FileFormat format) {
  auto in = detail::open_for_read(path);
  if (format == FileFormat::Csv) return read_instance_csv(in);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SolverError(Errc::ParseError,
                      path + ": " + std::string(e.what()));
  }
  return instance_from_json(j);
}

inline Instance read_instance(const std::string& path) {
  return read_instance(path, format_from_path(path));
}

/// Balls CSV: one ball per line, `r,c_1,...,c_d`; dimension inferred from
/// the first row. Lines starting with '#' are comments.
inline std::vector<Ball> read_balls_csv(std::istream& in) {
  std::vector<Ball> balls;
  std::string line;
  int lineno = 0;
  int d = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto tokens = detail::split_commas(line);
    if (d < 0) d = static_cast<int>(tokens.size()) - 1;
    if (static_cast<int>(tokens.size()) != d + 1)
      throw SolverError(Errc::ParseError,
                        "line " + std::to_string(lineno) + ": expected " +
                            std::to_string(d + 1) + " fields");
    Ball b;
    b.radius = detail::parse_double(tokens[0], lineno, 1);
    b.center.resize(d);
    for (int j = 0; j < d; ++j)
      b.center[j] = detail::parse_double(tokens[j + 1], lineno, j + 2);
    balls.push_back(std::move(b));
  }
  if (balls.empty())
    throw SolverError(Errc::ParseError, "no balls in input");
  return balls;
}

inline std::vector<Ball> read_balls(const std::string& path) {
  auto in = detail::open_for_read(path);
  return read_balls_csv(in);
}

}  // namespace coneinf
