#include "twistlab/json_io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "twistlab/error.hpp"

namespace twistlab::io {
namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, path + ": " + what);
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& path, const std::string& key) { return path + "." + key; }

std::size_t size_from(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    schema(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

}  // namespace

Json load_json(const std::string& source) {
  std::string text;
  if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    const auto first = source.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) {
      text = source;
    } else {
      std::ifstream in(source);
      if (!in) throw Error(ErrorKind::SchemaError, "cannot read input '" + source + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("$: malformed JSON: ") + e.what());
  }
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema(dot(path, key), "missing field");
  return *it;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (const Complex& z : values) out.push_back(to_json(z));
  return out;
}

Json to_json(const matpoly::MatrixPolynomial& poly) {
  Json coeffs = Json::array();
  for (const auto& a : poly.coeffs) coeffs.push_back(to_json(a));
  return Json{{"m", poly.m}, {"coeffs", std::move(coeffs)}};
}

Json to_json(const matpoly::FactorTuple& factors) {
  Json fs = Json::array();
  Json ss = Json::array();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    fs.push_back(to_json(factors.factors[i]));
    ss.push_back(to_json(factors.spectra[i]));
  }
  return Json{{"factors", std::move(fs)}, {"spectra", std::move(ss)}};
}

Json to_json(const mtheta::LatticeParams& p) {
  return Json{{"tau", to_json(p.tau)}, {"m", p.m}, {"n", p.n}, {"c", to_json(p.c)}};
}

Json to_json(const mtheta::ThetaElement& e) {
  Json j = to_json(e.params());
  Json coeffs = Json::array();
  for (Eigen::Index k = 0; k < e.coeffs().size(); ++k) coeffs.push_back(to_json(e.coeffs()(k)));
  j["coeffs"] = std::move(coeffs);
  return j;
}

Json to_json(const VerificationReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    Json item{{"sample", f.sample}, {"residual", f.residual}};
    if (!f.note.empty()) item["note"] = f.note;
    failures.push_back(std::move(item));
  }
  return Json{{"check", r.check},
              {"samples", r.samples},
              {"seed", r.seed},
              {"tol", r.tol},
              {"max_residual", r.max_residual},
              {"argmax_sample", r.argmax_sample},
              {"redraws", r.redraws},
              {"passed", r.passed()},
              {"failures", std::move(failures)}};
}

Complex complex_from(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    schema(path, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a non-empty array of rows");
  std::size_t cols = 0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].empty()) schema(at(path, i), "expected a non-empty row");
    if (i == 0) cols = j[i].size();
    else if (j[i].size() != cols)
      schema(at(path, i), "ragged row: " + std::to_string(j[i].size()) + " entries, expected " + std::to_string(cols));
  }
  CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i)
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from(j[i][k], at(at(path, i), k));
  return m;
}

CVector vector_from(const Json& j, const std::string& path) {
  const auto values = complex_list_from(j, path);
  CVector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

std::vector<Complex> complex_list_from(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of complex numbers");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from(j[i], at(path, i)));
  return out;
}

std::vector<std::size_t> index_list_from(const Json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of integers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(size_from(j[i], at(path, i)));
  return out;
}

matpoly::MatrixPolynomial polynomial_from(const Json& j, const std::string& path) {
  matpoly::MatrixPolynomial poly;
  poly.m = size_from(member(j, "m", path), dot(path, "m"));
  const Json& coeffs = member(j, "coeffs", path);
  if (!coeffs.is_array() || coeffs.empty()) schema(dot(path, "coeffs"), "expected a non-empty array of matrices");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    CMatrix a = matrix_from(coeffs[i], at(dot(path, "coeffs"), i));
    if (static_cast<std::size_t>(a.rows()) != poly.m || static_cast<std::size_t>(a.cols()) != poly.m)
      schema(at(dot(path, "coeffs"), i), "expected an m x m matrix");
    poly.coeffs.push_back(std::move(a));
  }
  return poly;
}

matpoly::FactorTuple factors_from(const Json& j, const std::string& path) {
  const Json& fs = member(j, "factors", path);
  if (!fs.is_array() || fs.empty()) schema(dot(path, "factors"), "expected a non-empty array of matrices");
  matpoly::FactorTuple out;
  for (std::size_t i = 0; i < fs.size(); ++i) out.factors.push_back(matrix_from(fs[i], at(dot(path, "factors"), i)));
  if (j.contains("spectra")) {
    const Json& ss = j["spectra"];
    if (!ss.is_array() || ss.size() != fs.size()) schema(dot(path, "spectra"), "expected one spectrum per factor");
    for (std::size_t i = 0; i < ss.size(); ++i) out.spectra.push_back(complex_list_from(ss[i], at(dot(path, "spectra"), i)));
  } else {
    out = matpoly::make_factor_tuple(out.factors);
  }
  return out;
}

mtheta::LatticeParams lattice_from(const Json& j, const std::string& path) {
  mtheta::LatticeParams p;
  p.tau = complex_from(member(j, "tau", path), dot(path, "tau"));
  p.m = size_from(member(j, "m", path), dot(path, "m"));
  p.n = size_from(member(j, "n", path), dot(path, "n"));
  p.c = complex_from(member(j, "c", path), dot(path, "c"));
  return p;
}

mtheta::ThetaElement theta_from(const Json& j, const std::string& path) {
  const mtheta::LatticeParams p = lattice_from(j, path);
  const CVector coeffs = vector_from(member(j, "coeffs", path), dot(path, "coeffs"));
  const mtheta::BasisHandle basis = mtheta::mtheta_basis(p);
  if (static_cast<std::size_t>(coeffs.size()) != basis->dimension())
    schema(dot(path, "coeffs"), "expected " + std::to_string(basis->dimension()) + " coefficients");
  return mtheta::ThetaElement(basis, coeffs);
}

}  // namespace twistlab::io
