#include "doctest.h"
#include "opnorm/io.hpp"

using namespace opnorm;

TEST_CASE("space shorthands") {
  SpacePtr m = parse_space(Json("M:3"));
  CHECK(m->ambient_dim() == 3);
  CHECK(m->dim() == 9);
  SpacePtr d = parse_space(Json("D:4"));
  CHECK(d->ambient_dim() == 4);
  CHECK(d->dim() == 4);
  CHECK(d->is_commutative());
  CHECK_THROWS_AS(parse_space(Json("Q:2")), std::invalid_argument);
  CHECK_THROWS_AS(parse_space(Json("M:0")), std::invalid_argument);
}

TEST_CASE("explicit space objects") {
  Json j = {{"label", "span"},
            {"ambient_dim", 2},
            {"basis", Json::array({Json::array({Json::array({1, 0}),
                                                Json::array({0, 0})}),
                                   Json::array({Json::array({0, 0}),
                                                Json::array({0, 1})})})}};
  // Two 1x2-row matrices are malformed; a proper 2x2 basis parses.
  Json good = {{"label", "span"},
               {"ambient_dim", 2},
               {"basis",
                Json::array({Json::parse("[[1, 0], [0, 0]]"),
                             Json::parse("[[0, 0], [0, 1]]")})}};
  SpacePtr s = parse_space(good);
  CHECK(s->dim() == 2);
  CHECK(s->label() == "span");
}

TEST_CASE("complex entries parse from pairs") {
  Matrix m = matrix_from_json(Json::parse("[[1, [0, 1]], [[2, -1], 0]]"));
  CHECK(m(0, 1) == Complex(0, 1));
  CHECK(m(1, 0) == Complex(2, -1));
  Matrix back = matrix_from_json(matrix_to_json(m));
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[[1, 2, 3]]]")),
                  std::invalid_argument);
}

TEST_CASE("map descriptions are shape checked") {
  Json good = {{"domain", "M:2"},
               {"codomain", "M:1"},
               {"coeff", Json::parse("[[1, 0, 0, 1]]")}};
  LinearMapRep tr = map_from_json(good);
  CHECK(tr.codomain->dim() == 1);
  Vector in = Vector::Zero(4);
  in(0) = 2.0;
  in(3) = 3.0;
  CHECK(tr.apply_coords(in)(0) == Complex(5.0));

  Json bad = good;
  bad["coeff"] = Json::parse("[[1, 0]]");
  CHECK_THROWS_AS(map_from_json(bad), std::invalid_argument);
}

TEST_CASE("collections and elements") {
  Json cj = {{"label", "mixed"}, {"members", Json::array({"M:2", "D:3"})}};
  LambdaCollection c = collection_from_json(cj);
  CHECK(c.members.size() == 2);

  Json ej = {{"space", "M:2"},
             {"level", 1},
             {"coords", Json::parse("[1, 0, 0, 1]")}};
  MatElement x = element_from_json(ej);
  CHECK(x.min_norm() == doctest::Approx(1.0));
  ej["coords"] = Json::parse("[1, 0]");
  CHECK_THROWS_AS(element_from_json(ej), std::invalid_argument);
}

TEST_CASE("weight kinds parse") {
  CHECK(weight_from_json(Json("identity")).kind() == WeightKind::identity);
  CHECK(weight_from_json(Json("transpose")).kind() == WeightKind::transpose);
  CHECK(bilinear_weight_from_json(Json("schur")).kind() ==
        BilinearKind::schur);
  CHECK_THROWS_AS(weight_from_json(Json("sideways")), std::invalid_argument);
}

TEST_CASE("report rendering is deterministic and full precision") {
  CHECK(format_real(1.0 / 3.0) == "0.33333333333333331");
  std::vector<ReportRow> rows = {{"norm", 1.0 / 3.0, 0.5, 2, "w0", true},
                                 {"cbnorm", 2.0, 3.0, 1, "-", false}};
  std::string csv = render_csv(rows);
  CHECK(csv ==
        "quantity,lower,upper,level,witness_ref,converged\n"
        "norm,0.33333333333333331,0.5,2,w0,true\n"
        "cbnorm,2,3,1,-,false\n");
  CHECK(render_csv(rows) == csv);
  std::string text = render_text(rows, {"seed 42"});
  CHECK(text.rfind("# seed 42\n", 0) == 0);
}
