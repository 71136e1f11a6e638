#include "opnorm/io.hpp"

#include <sstream>

namespace opnorm {

namespace {

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("expected number or [re, im] pair, got " +
                              j.dump());
}

Json complex_to_json(Complex v) {
  if (v.imag() == 0.0) return Json(v.real());
  return Json::array({v.real(), v.imag()});
}

}  // namespace

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw std::invalid_argument("matrix must be an array of rows: " +
                                j.dump());
  Matrix m(j.size(), j[0].size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != j[0].size())
      throw std::invalid_argument("ragged matrix rows");
    for (size_t k = 0; k < j[i].size(); ++k)
      m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

SpacePtr parse_space(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto parse_size = [&](const std::string& prefix) {
      int n = std::stoi(s.substr(prefix.size()));
      if (n < 1) throw std::invalid_argument("space size must be >= 1: " + s);
      return n;
    };
    if (s.rfind("M:", 0) == 0) return matrix_algebra(parse_size("M:"), s);
    if (s.rfind("D:", 0) == 0) return diagonal_algebra(parse_size("D:"), s);
    throw std::invalid_argument("unknown space shorthand: " + s);
  }
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("basis"))
    throw std::invalid_argument("space object needs ambient_dim and basis");
  std::vector<Matrix> basis;
  for (const Json& b : j.at("basis")) basis.push_back(matrix_from_json(b));
  return ConcreteSpace::make(j.at("ambient_dim").get<int>(), std::move(basis),
                             j.value("label", std::string("space")));
}

LinearMapRep map_from_json(const Json& j) {
  SpacePtr dom = parse_space(j.at("domain"));
  SpacePtr cod = parse_space(j.at("codomain"));
  Matrix coeff = matrix_from_json(j.at("coeff"));
  if (coeff.rows() != cod->dim() || coeff.cols() != dom->dim())
    throw std::invalid_argument("map coeff must be dim(codomain) x "
                                "dim(domain)");
  return {dom, cod, std::move(coeff), j.value("conj_linear", false)};
}

LambdaCollection collection_from_json(const Json& j) {
  std::vector<SpacePtr> members;
  for (const Json& m : j.at("members")) members.push_back(parse_space(m));
  return LambdaCollection(std::move(members),
                          j.value("label", std::string("collection")));
}

BilinearMapRep bilinear_from_json(const Json& j) {
  SpacePtr e = parse_space(j.at("e"));
  SpacePtr f = parse_space(j.at("f"));
  SpacePtr g = parse_space(j.at("g"));
  std::vector<Matrix> coeff;
  for (const Json& c : j.at("coeff")) {
    Matrix m = matrix_from_json(c);
    if (m.rows() != e->dim() || m.cols() != f->dim())
      throw std::invalid_argument("bilinear coeff block shape mismatch");
    coeff.push_back(std::move(m));
  }
  if (static_cast<int>(coeff.size()) != g->dim())
    throw std::invalid_argument("bilinear coeff block count mismatch");
  return {e, f, g, std::move(coeff)};
}

MatElement element_from_json(const Json& j) {
  SpacePtr space = parse_space(j.at("space"));
  int level = j.at("level").get<int>();
  const Json& cj = j.at("coords");
  Vector coords(cj.size());
  for (size_t i = 0; i < cj.size(); ++i)
    coords(static_cast<Eigen::Index>(i)) = complex_from_json(cj[i]);
  if (coords.size() != level * level * space->dim())
    throw std::invalid_argument("coords length must be level^2 * dim(space)");
  return MatElement::from_coords(space, level, coords);
}

WeightSequence weight_from_json(const Json& j) {
  std::string kind = j.is_string() ? j.get<std::string>()
                                   : j.at("kind").get<std::string>();
  if (kind == "identity") return WeightSequence::identity();
  if (kind == "transpose") return WeightSequence::transpose();
  if (kind == "unitary_conjugation") {
    std::vector<Matrix> us;
    for (const Json& u : j.at("unitaries")) us.push_back(matrix_from_json(u));
    return WeightSequence::unitary_conjugation(std::move(us));
  }
  if (kind == "custom") {
    std::vector<Matrix> tables;
    for (const Json& t : j.at("tables")) tables.push_back(matrix_from_json(t));
    return WeightSequence::custom(std::move(tables));
  }
  throw std::invalid_argument("unknown weight kind: " + kind);
}

BilinearWeight bilinear_weight_from_json(const Json& j) {
  std::string kind = j.is_string() ? j.get<std::string>()
                                   : j.at("kind").get<std::string>();
  if (kind == "product") return BilinearWeight::product();
  if (kind == "kronecker") return BilinearWeight::kronecker();
  if (kind == "schur") return BilinearWeight::schur();
  if (kind == "custom") {
    std::vector<Matrix> tables;
    std::vector<int> sizes;
    for (const Json& t : j.at("tables")) tables.push_back(matrix_from_json(t));
    for (const Json& k : j.at("k_sizes")) sizes.push_back(k.get<int>());
    return BilinearWeight::custom(std::move(tables), std::move(sizes));
  }
  throw std::invalid_argument("unknown bilinear weight kind: " + kind);
}

std::string format_real(double v) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << v;
  return out.str();
}

namespace {

std::string row_fields(const ReportRow& r, char sep) {
  std::ostringstream out;
  out << r.quantity << sep << format_real(r.lower) << sep
      << format_real(r.upper) << sep << r.level << sep << r.witness_ref << sep
      << (r.converged ? "true" : "false");
  return out.str();
}

}  // namespace

std::string render_csv(const std::vector<ReportRow>& rows) {
  std::string out = "quantity,lower,upper,level,witness_ref,converged\n";
  for (const ReportRow& r : rows) out += row_fields(r, ',') + "\n";
  return out;
}

std::string render_text(const std::vector<ReportRow>& rows,
                        const std::vector<std::string>& notes) {
  std::string out;
  for (const std::string& n : notes) out += "# " + n + "\n";
  for (const ReportRow& r : rows) out += row_fields(r, '\t') + "\n";
  return out;
}

}  // namespace opnorm
