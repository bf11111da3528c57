// SPDX-License-Identifier: Apache-2.0
#include "woldkit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace woldkit {

namespace {

double finite_number(const Json& j, const std::string& what) {
  if (!j.is_number()) raise(ErrorKind::ParseError, what + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) raise(ErrorKind::ParseError, what + ": non-finite number");
  return x;
}

long integer(const Json& j, const char* key) {
  if (!j.contains(key)) raise(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
  const Json& v = j.at(key);
  if (!v.is_number_integer()) raise(ErrorKind::ParseError, std::string("\"") + key + "\" must be an integer");
  return v.get<long>();
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object()) raise(ErrorKind::ParseError, "expected a JSON object");
  if (!j.contains(key)) raise(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

std::map<std::string, Mat> generator_map(const Json& j, Index n, const std::string& what) {
  std::map<std::string, Mat> out;
  if (!j.is_object()) raise(ErrorKind::ParseError, "\"" + what + "\" must be an object");
  for (const auto& [label, value] : j.items()) out[label] = matrix_from_json(value, n, n, what + "." + label);
  return out;
}

}  // namespace

Json matrix_to_json(const Mat& A) {
  Json out = Json::array();
  for (Index r = 0; r < A.rows(); ++r)
    for (Index c = 0; c < A.cols(); ++c) out.push_back(Json::array({A(r, c).real(), A(r, c).imag()}));
  return out;
}

Mat matrix_from_json(const Json& j, Index rows, Index cols, const std::string& what) {
  if (!j.is_array()) raise(ErrorKind::ParseError, what + ": expected an array of [re, im] pairs");
  if (static_cast<Index>(j.size()) != rows * cols)
    raise(ErrorKind::ShapeError, what + ": expected " + std::to_string(rows * cols) + " entries, got " +
                                     std::to_string(j.size()));
  Mat A(rows, cols);
  Index k = 0;
  for (const Json& e : j) {
    const std::string at = what + "[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) raise(ErrorKind::ParseError, at + ": expected [re, im]");
    A(k / cols, k % cols) = cplx(finite_number(e[0], at), finite_number(e[1], at));
    ++k;
  }
  return A;
}

Json to_json(const Representation& rep) {
  Json j;
  j["dim_E"] = rep.d;
  j["dim_H"] = rep.m;
  j["V"] = matrix_to_json(rep.V);
  if (!rep.sigma.empty()) {
    Json s = Json::object();
    for (const auto& [k, v] : rep.sigma) s[k] = matrix_to_json(v);
    j["sigma"] = s;
  }
  if (!rep.phi.empty()) {
    Json s = Json::object();
    for (const auto& [k, v] : rep.phi) s[k] = matrix_to_json(v);
    j["phi"] = s;
  }
  if (rep.has_boundary()) {
    j["boundary"] = rep.boundary;
    j["safe_depth"] = rep.safe_depth;
  }
  return j;
}

Json to_json(const UnilateralSpec& spec) {
  Json j;
  j["kind"] = "unilateral";
  j["d"] = spec.d;
  j["L"] = spec.L;
  j["p"] = spec.p;
  Json z = Json::array();
  for (const Mat& Z : spec.Z) z.push_back(matrix_to_json(Z));
  j["Z"] = z;
  return j;
}

Json to_json(const BilateralSpec& spec) {
  Json j;
  j["kind"] = "bilateral";
  j["n"] = spec.n;
  j["M"] = spec.M;
  j["w"] = spec.w;
  return j;
}

Representation representation_from_json(const Json& j) {
  const long d = integer(j, "dim_E"), m = integer(j, "dim_H");
  if (d < 1 || m < 1) raise(ErrorKind::ShapeError, "dim_E and dim_H must be positive");
  Representation rep(d, m, matrix_from_json(member(j, "V"), m, d * m, "V"));
  if (j.contains("sigma")) rep.sigma = generator_map(j.at("sigma"), m, "sigma");
  if (j.contains("phi")) rep.phi = generator_map(j.at("phi"), d, "phi");
  if (j.contains("boundary")) {
    const Json& b = j.at("boundary");
    if (!b.is_array()) raise(ErrorKind::ParseError, "\"boundary\" must be an array");
    for (const Json& e : b) {
      if (!e.is_number_integer()) raise(ErrorKind::ParseError, "boundary entries must be integers");
      const Index c = e.get<Index>();
      if (c < 0 || c >= d * m) raise(ErrorKind::ShapeError, "boundary column out of range");
      rep.boundary.push_back(c);
    }
    rep.safe_depth = j.contains("safe_depth") ? static_cast<int>(integer(j, "safe_depth")) : 0;
  }
  return rep;
}

UnilateralSpec unilateral_from_json(const Json& j) {
  UnilateralSpec s;
  s.d = integer(j, "d");
  s.L = static_cast<int>(integer(j, "L"));
  s.p = j.contains("p") ? integer(j, "p") : 1;
  if (s.d < 1 || s.L < 1 || s.p < 1) raise(ErrorKind::InvalidParams, "d, L, p must be positive");
  const Json& z = member(j, "Z");
  if (!z.is_array()) raise(ErrorKind::ParseError, "\"Z\" must be an array of matrices");
  if (static_cast<int>(z.size()) != s.L)
    raise(ErrorKind::ParseError, "\"Z\" needs " + std::to_string(s.L) + " weight matrices, got " + std::to_string(z.size()));
  for (int k = 1; k <= s.L; ++k) {
    const Index n = ipow(s.d, k);
    s.Z.push_back(matrix_from_json(z[static_cast<std::size_t>(k) - 1], n, n, "Z[" + std::to_string(k - 1) + "]"));
  }
  validate(s);
  return s;
}

BilateralSpec bilateral_from_json(const Json& j) {
  BilateralSpec s;
  s.n = integer(j, "n");
  s.M = static_cast<int>(integer(j, "M"));
  if (s.n < 1 || s.M < 1) raise(ErrorKind::InvalidParams, "n and M must be positive");
  const Json& w = member(j, "w");
  if (!w.is_array() || static_cast<Index>(w.size()) != s.n)
    raise(ErrorKind::ParseError, "\"w\" needs one weight row per i = 1.." + std::to_string(s.n));
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string at = "w[" + std::to_string(i) + "]";
    if (!w[i].is_array() || static_cast<int>(w[i].size()) != 2 * s.M + 1)
      raise(ErrorKind::ParseError, at + " needs " + std::to_string(2 * s.M + 1) + " weights");
    std::vector<double> row;
    for (const Json& x : w[i]) row.push_back(finite_number(x, at));
    s.w.push_back(std::move(row));
  }
  validate(s);
  return s;
}

Json to_json(const Instance& inst) {
  return std::visit([](const auto& x) { return to_json(x); }, inst);
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) raise(ErrorKind::ParseError, "top level must be a JSON object");
  if (!j.contains("kind")) return representation_from_json(j);
  const Json& k = j.at("kind");
  if (!k.is_string()) raise(ErrorKind::ParseError, "\"kind\" must be a string");
  const std::string kind = k.get<std::string>();
  if (kind == "unilateral") return unilateral_from_json(j);
  if (kind == "bilateral") return bilateral_from_json(j);
  if (kind == "representation") return representation_from_json(j);
  raise(ErrorKind::ParseError, "unknown kind \"" + kind + "\"");
}

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    raise(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": invalid JSON");
  }
}

Instance parse_instance(const std::string& text) { return instance_from_json(parse_json_text(text)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace woldkit
