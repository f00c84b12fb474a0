#include "opschur/json_io.hpp"

#include <cmath>
#include <fstream>

namespace opschur {

namespace {

double finite_number(const Json& node, const char* what) {
  if (!node.is_number()) {
    throw FormatError(std::string(what) + ": expected a number");
  }
  const double value = node.get<double>();
  if (!std::isfinite(value)) {
    throw FormatError(std::string(what) + ": numbers must be finite");
  }
  return value;
}

Complex entry_from_json(const Json& node, const char* what) {
  if (node.is_number()) {
    return Complex(finite_number(node, what), 0.0);
  }
  if (node.is_array() && node.size() == 2) {
    return Complex(finite_number(node[0], what), finite_number(node[1], what));
  }
  throw FormatError(std::string(what) + ": entries must be numbers or [re, im] pairs");
}

Matrix entries_from_json(const Json& rows, Eigen::Index expectRows,
                         Eigen::Index expectCols) {
  if (!rows.is_array() || rows.empty()) {
    throw FormatError("matrix entries must be a nonempty array of rows");
  }
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  if (!rows[0].is_array()) {
    throw FormatError("matrix rows must be arrays");
  }
  const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
  if ((expectRows >= 0 && r != expectRows) || (expectCols >= 0 && c != expectCols)) {
    throw FormatError("matrix entries do not match the declared shape");
  }
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
      throw FormatError("matrix rows must all have the same length");
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = entry_from_json(row[j], "matrix entry");
    }
  }
  return m;
}

}  // namespace

Matrix matrix_from_json(const Json& doc) {
  if (doc.is_array()) {
    return entries_from_json(doc, -1, -1);
  }
  if (!doc.is_object()) {
    throw FormatError("matrix document must be an object or a nested array");
  }
  if (!doc.contains("entries")) {
    throw FormatError("matrix document is missing \"entries\"");
  }
  Eigen::Index rows = -1;
  Eigen::Index cols = -1;
  if (doc.contains("dim")) {
    const auto dim = doc.at("dim");
    if (!dim.is_number_integer() || dim.get<int>() <= 0) {
      throw FormatError("\"dim\" must be a positive integer");
    }
    rows = cols = dim.get<int>();
  }
  if (doc.contains("rows")) rows = doc.at("rows").get<int>();
  if (doc.contains("cols")) cols = doc.at("cols").get<int>();
  return entries_from_json(doc.at("entries"), rows, cols);
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  Json doc;
  if (m.rows() == m.cols()) {
    doc["dim"] = m.rows();
  } else {
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
  }
  doc["entries"] = std::move(rows);
  return doc;
}

Vector vector_from_json(const Json& doc) {
  if (!doc.is_array()) {
    throw FormatError("vector document must be an array");
  }
  Vector v(static_cast<Eigen::Index>(doc.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = entry_from_json(doc[i], "vector entry");
  }
  return v;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(Json::array({v(i).real(), v(i).imag()}));
  }
  return out;
}

PartialPositiveOperator partial_operator_from_json(const Json& doc,
                                                   const TolerancePolicy& pol) {
  if (!doc.is_object() || !doc.contains("ambientDim") ||
      !doc.contains("domainBasis") || !doc.contains("values")) {
    throw FormatError(
        "partial operator document requires \"ambientDim\", \"domainBasis\" "
        "and \"values\"");
  }
  const int ambient = doc.at("ambientDim").get<int>();
  try {
    return PartialPositiveOperator(ambient,
                                   matrix_from_json(doc.at("domainBasis")),
                                   matrix_from_json(doc.at("values")), pol);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Json partial_operator_to_json(const PartialPositiveOperator& p) {
  Json doc;
  doc["ambientDim"] = p.ambientDim();
  doc["domainBasis"] = matrix_to_json(p.domainBasis());
  doc["values"] = matrix_to_json(p.values());
  return doc;
}

AlgebraPtr algebra_from_json(const Json& doc, const TolerancePolicy& pol) {
  if (!doc.is_object() || !doc.contains("envDim") || !doc.contains("basis")) {
    throw FormatError("algebra document requires \"envDim\" and \"basis\"");
  }
  const int envDim = doc.at("envDim").get<int>();
  const Json& basisDoc = doc.at("basis");
  if (!basisDoc.is_array() || basisDoc.empty()) {
    throw FormatError("\"basis\" must be a nonempty array of matrices");
  }
  std::vector<Matrix> basis;
  basis.reserve(basisDoc.size());
  for (const Json& b : basisDoc) {
    basis.push_back(matrix_from_json(b));
  }
  AlgebraPtr algebra;
  try {
    algebra = std::make_shared<FiniteStarAlgebra>(envDim, std::move(basis), pol);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  if (doc.contains("unital")) {
    const bool declared = doc.at("unital").get<bool>();
    if (declared != algebra->unital()) {
      throw FormatError("\"unital\" flag contradicts the supplied basis");
    }
  }
  return algebra;
}

Functional functional_from_json(const Json& doc, const AlgebraPtr& algebra) {
  if (!doc.is_object() || !doc.contains("values")) {
    throw FormatError("functional document requires \"values\"");
  }
  Vector values = vector_from_json(doc.at("values"));
  try {
    return Functional(algebra, std::move(values));
  } catch (const DimensionMismatch& e) {
    throw FormatError(e.what());
  }
}

Json functional_to_json(const Functional& f) {
  Json doc;
  doc["values"] = vector_to_json(f.values());
  return doc;
}

Json policy_to_json(const TolerancePolicy& pol) {
  Json doc;
  doc["psdTol"] = pol.psdTol;
  doc["rankTol"] = pol.rankTol;
  doc["eqTol"] = pol.eqTol;
  doc["limTol"] = pol.limTol;
  return doc;
}

Json parse_json_text(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw FormatError("invalid JSON document");
  }
  return doc;
}

Json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open input file: " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_json_text(text);
}

}  // namespace opschur
