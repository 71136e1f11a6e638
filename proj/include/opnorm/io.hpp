#pragma once

#include "json.hpp"

#include "opnorm/bilinear.hpp"
#include "opnorm/lambda_class.hpp"

namespace opnorm {

using Json = nlohmann::json;

// "M:n" (matrix algebra), "D:d" (diagonal algebra), or a JSON object with
// {label, ambient_dim, basis}.
SpacePtr parse_space(const Json& j);

// Matrices are arrays of rows; entries are numbers or [re, im] pairs.
Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

// {domain, codomain, coeff, conj_linear?}
LinearMapRep map_from_json(const Json& j);
// {label?, members: [space specs]}
LambdaCollection collection_from_json(const Json& j);
// {e, f, g, coeff: [matrix per G basis element]}
BilinearMapRep bilinear_from_json(const Json& j);
// {space, level, coords: [entries]}
MatElement element_from_json(const Json& j);
// {kind: identity|transpose|unitary_conjugation|custom, unitaries?, tables?}
WeightSequence weight_from_json(const Json& j);
BilinearWeight bilinear_weight_from_json(const Json& j);

// 17 significant digits, locale independent.
std::string format_real(double v);

struct ReportRow {
  std::string quantity;
  double lower = 0.0;
  double upper = 0.0;
  int level = 0;
  std::string witness_ref = "-";
  bool converged = true;
};

std::string render_csv(const std::vector<ReportRow>& rows);
// Structured text with a header carrying the seed and certified-range notes.
std::string render_text(const std::vector<ReportRow>& rows,
                        const std::vector<std::string>& notes);

}  // namespace opnorm
