#include "jsr/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace jsr {

using nlohmann::json;

namespace {

std::string line_of(const std::string& text, std::size_t byte) {
  const std::size_t end = std::min(byte, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double entry(const json& e, const std::string& path, Index& rationals) {
  if (e.is_number()) return e.get<double>();
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    const double num = e[0].get<double>(), den = e[1].get<double>();
    if (den == 0.0) throw ParseError(path + ": zero denominator");
    if (!e[0].is_number_integer() || !e[1].is_number_integer())
      throw ParseError(path + ": rational entries need integer numerator and denominator");
    ++rationals;
    return num / den;
  }
  throw ParseError(path + ": expected a number or [numerator, denominator]");
}

}  // namespace

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

FamilyFile parse_family(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("invalid JSON at " + line_of(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("$: expected an object");
  FamilyFile out;
  if (j.contains("name") && j["name"].is_string()) out.name = j["name"].get<std::string>();
  if (j.contains("source") && j["source"].is_string()) out.source = j["source"].get<std::string>();
  if (!j.contains("matrices")) throw ParseError("$.matrices: missing");
  const json& mats = j["matrices"];
  if (!mats.is_array() || mats.empty()) throw ParseError("$.matrices: expected a non-empty array");
  Index dim = -1;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<Index>() <= 0) throw ParseError("$.dim: expected a positive integer");
    dim = j["dim"].get<Index>();
  }
  if (j.contains("count")) {
    if (!j["count"].is_number_integer() || j["count"].get<std::size_t>() != mats.size())
      throw ParseError("$.count: does not match the number of matrices (" + std::to_string(mats.size()) + ")");
  }
  std::vector<Matrix> ms;
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const std::string mp = "$.matrices[" + std::to_string(k) + "]";
    const json& m = mats[k];
    if (!m.is_array() || m.empty()) throw ParseError(mp + ": expected a non-empty array");
    // Nested rows: every element is an array as long as the matrix is tall.
    // A flat list of rationals has elements of length two and a square count,
    // so the two layouts never coincide.
    const bool nested = m.size() >= 2 && std::all_of(m.begin(), m.end(), [&](const json& r) {
      return r.is_array() && r.size() == m.size();
    });
    std::vector<double> flat;
    Index rows = 0;
    if (nested) {
      rows = static_cast<Index>(m.size());
      for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < m[r].size(); ++c)
          flat.push_back(entry(m[r][c], mp + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
                               out.rational_entries));
      }
    } else {
      for (std::size_t i = 0; i < m.size(); ++i)
        flat.push_back(entry(m[i], mp + "[" + std::to_string(i) + "]", out.rational_entries));
      rows = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
      if (rows * rows != static_cast<Index>(flat.size()))
        throw ParseError(mp + ": " + std::to_string(flat.size()) + " entries do not form a square matrix");
    }
    if (dim < 0) dim = rows;
    if (rows != dim)
      throw ParseError(mp + ": expected " + std::to_string(dim * dim) + " entries, found " + std::to_string(rows * rows));
    Matrix a(dim, dim);
    for (Index r = 0; r < dim; ++r)
      for (Index c = 0; c < dim; ++c) a(r, c) = flat[static_cast<std::size_t>(r * dim + c)];
    ms.push_back(a);
  }
  try {
    out.family = MatrixFamily(std::move(ms));
  } catch (const Error& e) {
    throw ParseError(std::string("$.matrices: ") + e.what());
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

FamilyFile read_family(const std::string& path) {
  try {
    return parse_family(read_text(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string family_to_json(const FamilyFile& file) {
  json j;
  if (!file.name.empty()) j["name"] = file.name;
  if (!file.source.empty()) j["source"] = file.source;
  j["dim"] = file.family.dim();
  j["count"] = file.family.size();
  json mats = json::array();
  for (const auto& a : file.family.matrices()) {
    json flat = json::array();
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c) flat.push_back(a(r, c));
    mats.push_back(flat);
  }
  j["matrices"] = mats;
  return j.dump(2);
}

void write_family(const std::string& path, const FamilyFile& file) { write_text(path, family_to_json(file) + "\n"); }

}  // namespace jsr
