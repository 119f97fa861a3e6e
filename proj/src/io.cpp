// Copyright 2026 The hcvx Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hcvx/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hcvx/error.hpp"
#include "json.hpp"

namespace hcvx {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kParseError, path + ": " + what);
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string sub(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

std::string at(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "number is not finite");
  return x;
}

int integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

const Json& array(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

Vector vector_of(const Json& v, const std::string& path, int expected = -1) {
  array(v, path);
  if (expected >= 0 && static_cast<int>(v.size()) != expected) {
    fail(path, "expected " + std::to_string(expected) + " entries, got " +
                   std::to_string(v.size()));
  }
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out(k) = number(v[k], at(path, k));
  return out;
}

SymMatrix sym_of(const Json& v, const std::string& path, int n) {
  const Vector packed = vector_of(v, path, static_cast<int>(SymMatrix::packed_size(n)));
  return SymMatrix::from_packed(n, std::vector<double>(packed.data(), packed.data() + packed.size()));
}

ExtReal ext_of(const Json& v, const std::string& path, bool lower) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (lower && s == "-inf") return ExtReal::neg_inf();
    if (!lower && s == "+inf") return ExtReal::pos_inf();
    fail(path, std::string("expected a number or \"") + (lower ? "-inf" : "+inf") + "\"");
  }
  return ExtReal::finite(number(v, path));
}

Bound bound_of(const Json& v, const std::string& path) {
  return Bound{ext_of(field(v, path, "lo"), sub(path, "lo"), true),
               ext_of(field(v, path, "hi"), sub(path, "hi"), false)};
}

Json ext_json(const ExtReal& e) {
  if (e.is_neg_inf()) return "-inf";
  if (e.is_pos_inf()) return "+inf";
  return e.value();
}

Json bound_json(const Bound& b) {
  Json out = Json::object();
  out["lo"] = ext_json(b.lower);
  out["hi"] = ext_json(b.upper);
  return out;
}

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Json sym_json(const SymMatrix& m) {
  Json out = Json::array();
  for (double x : m.packed()) out.push_back(x);
  return out;
}

int dimension(const Json& doc) {
  const int n = integer(field(doc, "", "n"), "n");
  if (n < 1) fail("n", "must be positive");
  return n;
}

UqInstance parse_uq(const Json& doc) {
  UqInstance u;
  u.n = dimension(doc);
  u.Q = sym_of(field(doc, "", "Q"), "Q", u.n);
  const Json& obj = field(doc, "", "objective");
  u.b.push_back(vector_of(field(obj, "objective", "b"), "objective.b", u.n));
  u.d.push_back(number(field(obj, "objective", "d"), "objective.d"));
  const Json& rows = array(field(doc, "", "constraints"), "constraints");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string path = at("constraints", k);
    u.b.push_back(vector_of(field(rows[k], path, "b"), sub(path, "b"), u.n));
    u.d.push_back(number(field(rows[k], path, "d"), sub(path, "d")));
    u.bounds.push_back(bound_of(field(rows[k], path, "bounds"), sub(path, "bounds")));
  }
  return u;
}

Json write_uq(const UqInstance& u) {
  Json doc = Json::object();
  doc["kind"] = "uq";
  doc["n"] = u.n;
  doc["Q"] = sym_json(u.Q);
  doc["objective"] = {{"b", vector_json(u.b[0])}, {"d", u.d[0]}};
  Json rows = Json::array();
  for (int i = 1; i <= u.p(); ++i) {
    Json r = Json::object();
    r["b"] = vector_json(u.b[i]);
    r["d"] = u.d[i];
    r["bounds"] = bound_json(u.bounds[i - 1]);
    rows.push_back(r);
  }
  doc["constraints"] = rows;
  return doc;
}

Eigen::VectorXi signs_of(const Json& v, const std::string& path, int m) {
  const Vector s = vector_of(v, path, m);
  Eigen::VectorXi out(m);
  for (int j = 0; j < m; ++j) {
    if (s(j) != -1.0 && s(j) != 0.0 && s(j) != 1.0) fail(at(path, j), "sign must be -1, 0 or 1");
    out(j) = static_cast<int>(s(j));
  }
  return out;
}

Json signs_json(const Eigen::MatrixXi& signs, int row) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < signs.cols(); ++j) out.push_back(signs(row, j));
  return out;
}

QcqpInstance parse_qcqp(const Json& doc) {
  QcqpInstance q;
  q.n = dimension(doc);
  const Json& sense = field(doc, "", "sense");
  if (sense == "min") {
    q.sense = Sense::kMin;
  } else if (sense == "max") {
    q.sense = Sense::kMax;
  } else {
    fail("sense", "expected \"min\" or \"max\"");
  }
  const Json& blocks = array(field(doc, "", "blocks"), "blocks");
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    q.blocks.push_back(sym_of(blocks[k], at("blocks", k), q.n));
  }
  const int m = q.m();
  const Json& obj = field(doc, "", "objective");
  const Json& rows = array(field(doc, "", "constraints"), "constraints");
  q.signs.resize(static_cast<Eigen::Index>(rows.size()) + 1, m);
  q.signs.row(0) = signs_of(field(obj, "objective", "signs"), "objective.signs", m).transpose();
  q.b.push_back(vector_of(field(obj, "objective", "b"), "objective.b", q.n));
  q.c.push_back(number(field(obj, "objective", "c"), "objective.c"));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string path = at("constraints", k);
    q.signs.row(static_cast<Eigen::Index>(k) + 1) =
        signs_of(field(rows[k], path, "signs"), sub(path, "signs"), m).transpose();
    q.b.push_back(vector_of(field(rows[k], path, "b"), sub(path, "b"), q.n));
    q.c.push_back(number(field(rows[k], path, "c"), sub(path, "c")));
    q.bounds.push_back(bound_of(field(rows[k], path, "bounds"), sub(path, "bounds")));
  }
  return q;
}

Json write_qcqp(const QcqpInstance& q) {
  Json doc = Json::object();
  doc["kind"] = "qcqp";
  doc["n"] = q.n;
  doc["sense"] = q.sense == Sense::kMax ? "max" : "min";
  Json blocks = Json::array();
  for (const auto& b : q.blocks) blocks.push_back(sym_json(b));
  doc["blocks"] = blocks;
  Json obj = Json::object();
  obj["signs"] = signs_json(q.signs, 0);
  obj["b"] = vector_json(q.b[0]);
  obj["c"] = q.c[0];
  doc["objective"] = obj;
  Json rows = Json::array();
  for (int i = 1; i <= q.p(); ++i) {
    Json r = Json::object();
    r["signs"] = signs_json(q.signs, i);
    r["b"] = vector_json(q.b[i]);
    r["c"] = q.c[i];
    r["bounds"] = bound_json(q.bounds[i - 1]);
    rows.push_back(r);
  }
  doc["constraints"] = rows;
  return doc;
}

BallIntersection parse_balls(const Json& doc) {
  BallIntersection b;
  b.n = dimension(doc);
  const Json& balls = array(field(doc, "", "balls"), "balls");
  for (std::size_t k = 0; k < balls.size(); ++k) {
    const std::string path = at("balls", k);
    b.centers.push_back(vector_of(field(balls[k], path, "center"), sub(path, "center"), b.n));
    b.radii.push_back(number(field(balls[k], path, "radius"), sub(path, "radius")));
  }
  return b;
}

Json write_balls(const BallIntersection& b) {
  Json doc = Json::object();
  doc["kind"] = "balls";
  doc["n"] = b.n;
  Json balls = Json::array();
  for (int i = 0; i < b.p(); ++i) {
    Json e = Json::object();
    e["center"] = vector_json(b.centers[i]);
    e["radius"] = b.radii[i];
    balls.push_back(e);
  }
  doc["balls"] = balls;
  return doc;
}

IlpInstance parse_ilp(const Json& doc) {
  IlpInstance ilp;
  const int n = dimension(doc);
  ilp.c = vector_of(field(doc, "", "c"), "c", n);
  const Json& rows = array(field(doc, "", "A"), "A");
  ilp.A.resize(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ilp.A.row(static_cast<Eigen::Index>(k)) = vector_of(rows[k], at("A", k), n).transpose();
  }
  ilp.rhs = vector_of(field(doc, "", "rhs"), "rhs", static_cast<int>(rows.size()));
  return ilp;
}

Json write_ilp(const IlpInstance& ilp) {
  Json doc = Json::object();
  doc["kind"] = "ilp";
  doc["n"] = ilp.n();
  doc["c"] = vector_json(ilp.c);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < ilp.A.rows(); ++i) rows.push_back(vector_json(ilp.A.row(i).transpose()));
  doc["A"] = rows;
  doc["rhs"] = vector_json(ilp.rhs);
  return doc;
}

// Line and column of a byte offset, both 1-based.
std::string location(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte; ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string_view instance_kind(const Instance& inst) {
  switch (inst.index()) {
    case 0: return "uq";
    case 1: return "qcqp";
    case 2: return "balls";
    default: return "ilp";
  }
}

Instance parse_instance(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is one past the offending character.
    throw Error(ErrorCode::kParseError,
                location(text, e.byte > 0 ? e.byte - 1 : 0) + ": malformed JSON");
  }
  const Json& kind = field(doc, "", "kind");
  if (!kind.is_string()) fail("kind", "expected a string");
  const std::string k = kind.get<std::string>();
  Instance out;
  if (k == "uq") {
    out = parse_uq(doc);
  } else if (k == "qcqp") {
    out = parse_qcqp(doc);
  } else if (k == "balls") {
    out = parse_balls(doc);
  } else if (k == "ilp") {
    out = parse_ilp(doc);
  } else {
    fail("kind", "unknown kind \"" + k + "\"");
  }
  std::visit([](const auto& v) { v.validate(); }, out);
  return out;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParseError) throw;
    // Strip the "ParseError: " prefix before adding the file name.
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    throw Error(ErrorCode::kParseError,
                path + ": " + (colon == std::string::npos ? msg : msg.substr(colon + 2)));
  }
}

std::string write_instance(const Instance& inst) {
  Json doc = std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        v.validate();
        if constexpr (std::is_same_v<T, UqInstance>) return write_uq(v);
        if constexpr (std::is_same_v<T, QcqpInstance>) return write_qcqp(v);
        if constexpr (std::is_same_v<T, BallIntersection>) return write_balls(v);
        if constexpr (std::is_same_v<T, IlpInstance>) return write_ilp(v);
      },
      inst);
  return doc.dump(2) + "\n";
}

}  // namespace hcvx
