#include "glgeo/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace glgeo::io {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed JSON: ") + e.what());
  }
}

SquareMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::parse, "matrix literal must be a non-empty array of rows");
  }
  const std::size_t n = j.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) {
      throw Error(ErrorKind::parse, "matrix literal rows must be arrays of length " +
                                        std::to_string(n));
    }
    for (const auto& v : row) {
      if (!v.is_number()) {
        throw Error(ErrorKind::parse, "matrix literal entries must be numbers");
      }
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        throw Error(ErrorKind::parse, "matrix literal entries must be finite");
      }
      flat.push_back(x);
    }
  }
  return SquareMat(n, std::move(flat));
}

void append_matrix(std::ostringstream& out, const SquareMat& m) {
  out << '[';
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (i > 0) out << ',';
    out << '[';
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j > 0) out << ',';
      out << json_number(m(i, j));
    }
    out << ']';
  }
  out << ']';
}

}  // namespace

SquareMat parse_matrix(std::string_view text) { return matrix_from_json(parse_json(text)); }

DiscreteCurve parse_curve(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("times") || !j.contains("points")) {
    throw Error(ErrorKind::parse, "curve must be an object with \"times\" and \"points\"");
  }
  const json& times_json = j.at("times");
  const json& points_json = j.at("points");
  if (!times_json.is_array() || !points_json.is_array()) {
    throw Error(ErrorKind::parse, "curve \"times\" and \"points\" must be arrays");
  }
  std::vector<double> times;
  for (const auto& t : times_json) {
    if (!t.is_number()) throw Error(ErrorKind::parse, "curve times must be numbers");
    times.push_back(t.get<double>());
  }
  std::vector<SquareMat> points;
  for (const auto& p : points_json) points.push_back(matrix_from_json(p));
  try {
    return DiscreteCurve(std::move(times), std::move(points));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::domain) throw;
    throw Error(ErrorKind::parse, std::string("invalid curve: ") + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return format_double(v);
}

std::string matrix_to_json(const SquareMat& m) {
  std::ostringstream out;
  append_matrix(out, m);
  return out.str();
}

std::string curve_to_json(const DiscreteCurve& c) {
  std::ostringstream out;
  out << "{\"times\":[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out << ',';
    out << json_number(c.times()[i]);
  }
  out << "],\"points\":[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out << ',';
    append_matrix(out, c.points()[i]);
  }
  out << "]}";
  return out.str();
}

std::string distance_to_json(const DistanceResult& r) {
  std::ostringstream out;
  out << "{\"value\":" << json_number(r.value) << ",\"minimizer\":";
  append_matrix(out, r.minimizer);
  out << ",\"residual\":" << json_number(r.residual) << ",\"status\":\"" << to_string(r.status)
      << "\",\"starts_used\":" << r.starts_used << ",\"converged_starts\":" << r.converged_starts
      << '}';
  return out.str();
}

}  // namespace glgeo::io
