#include <doctest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "surfcob/errors.hpp"
#include "surfcob/json_io.hpp"

using namespace surfcob;
using nlohmann::json;

namespace {

std::pair<std::string, std::string> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return {e.kind(), e.path()};
  }
  return {"", ""};
}

}  // namespace

TEST_SUITE("json_io") {
  TEST_CASE("integers") {
    CHECK(json_io::parse_integer(json(-7), "") == -7);
    CHECK(json_io::parse_integer(json("123456789012345678901234567890"), "") ==
          Integer("123456789012345678901234567890"));
    CHECK(json_io::integer_to_json(Integer("123456789012345678901234567890")) == "123456789012345678901234567890");
    CHECK(json_io::integer_to_json(Integer(5)) == 5);
    CHECK(error_of([] { json_io::parse_integer(json(1.5), "/x"); }).second == "/x");
    CHECK(error_of([] { json_io::parse_integer(json("12a"), "/x"); }).first == "schema");
  }

  TEST_CASE("dense and sparse matrices") {
    const auto dense = json_io::parse_matrix(json::parse("[[1,2],[3,4]]"), "");
    const auto sparse =
        json_io::parse_matrix(json::parse(R"({"rows":2,"cols":2,"entries":[[0,0,1],[0,1,2],[1,0,3],[1,1,4]]})"), "");
    CHECK(dense == sparse);
    CHECK(json_io::parse_matrix(json_io::matrix_to_json(dense), "") == dense);
    CHECK(error_of([] { json_io::parse_matrix(json::parse("[[1,2],[3]]"), "/m"); }).first == "ragged_matrix");
    CHECK(error_of([] { json_io::parse_matrix(json::parse(R"({"rows":1,"cols":1,"entries":[[1,0,1]]})"), "/m"); })
              .second.rfind("/m", 0) == 0);
  }

  TEST_CASE("groups") {
    const auto g = json_io::parse_group(json::parse(R"({"free_rank":1,"invariant_factors":[2,4]})"), "");
    CHECK(g == AbelianGroup(1, {2, 4}));
    CHECK(json_io::group_to_json(g) == json::parse(R"({"free_rank":1,"invariant_factors":[2,4]})"));
    CHECK(json_io::parse_group(json::parse(R"({"f2_dimension":3})"), "") == AbelianGroup::f2(3));
    CHECK(json_io::group_to_json(AbelianGroup::f2(1), true) ==
          json::parse(R"({"free_rank":0,"invariant_factors":[2],"f2_dimension":1})"));
    CHECK(error_of([] { json_io::parse_group(json::parse(R"({"free_rank":0,"invariant_factors":[4,2]})"), "/g"); })
              .second == "/g");
  }

  TEST_CASE("complexes") {
    const auto c = json_io::parse_complex(json::parse(R"({"ring":"Z","boundary_maps":{"2":[[2]]},"dims":{"0":0}})"), "");
    CHECK(homology_of_complex(c, 1) == AbelianGroup(0, {2}));
    CHECK(error_of([] { json_io::parse_complex(json::parse(R"({"ring":"Q","boundary_maps":{}})"), "/c"); }).second ==
          "/c/ring");
    CHECK(error_of([] {
            json_io::parse_complex(json::parse(R"({"ring":"Z","boundary_maps":{"1":[[1]],"2":[[1]]}})"), "/c");
          }).first == "not_a_complex");
  }

  TEST_CASE("diagram round trip") {
    std::mt19937_64 rng(61);
    for (int k = 0; k < 200; ++k) {
      const auto d = random_diagram(rng);
      const auto back = json_io::parse_diagram(json_io::diagram_to_json(d), "");
      CHECK(back.canonical_text() == d.canonical_text());
      const auto eps = random_signs(rng, d);
      CHECK(json_io::parse_signs(json_io::signs_to_json(d, eps), d, "") == eps);
    }
  }

  TEST_CASE("diagram errors carry paths") {
    const auto bad = json::parse(R"({"mode":"two_column","components":[{"id":"C","column":0,"target":0}],
      "double_points":[{"id":"p1","ends":["C","X"]}]})");
    const auto [kind, path] = error_of([&] { json_io::parse_diagram(bad, "/diagram"); });
    CHECK(kind == "unknown_component");
    CHECK(path.rfind("/diagram", 0) == 0);
    const auto extra = json::parse(R"({"mode":"two_column","components":[],"double_points":[],"colour":1})");
    CHECK(error_of([&] { json_io::parse_diagram(extra, "/diagram"); }) ==
          std::pair<std::string, std::string>{"schema", "/diagram/colour"});
  }

  TEST_CASE("sign tables must be total") {
    const auto d = json_io::parse_diagram(json::parse(R"({"mode":"two_column",
      "components":[{"id":"C","column":0,"target":0},{"id":"D","column":1,"target":0}],
      "double_points":[{"id":"p1","ends":["C","D"]}]})"), "");
    CHECK(error_of([&] { json_io::parse_signs(json::parse(R"({"p1":{"C":1}})"), d, "/signs"); }).first == "sign_table_shape");
    CHECK(error_of([&] { json_io::parse_signs(json::parse(R"({"p1":{"C":1,"D":0}})"), d, "/signs"); }).second ==
          "/signs/p1/D");
  }

  TEST_CASE("traces round trip") {
    std::mt19937_64 rng(62);
    int done = 0;
    while (done < 100) {
      const auto d = random_diagram(rng);
      const auto out = normalize(d);
      const auto* ok = std::get_if<NormalizeSuccess>(&out);
      if (!ok) continue;
      const auto j = json_io::trace_to_json(ok->trace, d, std::nullopt);
      const auto back = json_io::parse_trace(j, d, std::nullopt, "/trace");
      REQUIRE(back.steps.size() == ok->trace.steps.size());
      const auto state = replay(d, std::nullopt, back);
      CHECK(state.diagram == ok->diagram);
      CHECK(state.signs == ok->signs);
      CHECK(json_io::trace_to_json(back, d, std::nullopt) == j);
      ++done;
    }
  }

  TEST_CASE("hashes print as 16 hex digits") {
    CHECK(json_io::hash_to_string(0) == "0000000000000000");
    CHECK(json_io::hash_to_string(0xabcdefULL) == "0000000000abcdef");
  }

  TEST_CASE("queries") {
    const auto q = json_io::parse_query(json::parse(R"({"schema_version":"1","question":"cobordant",
      "ambient":{"orientable":true,"simply_connected":true,"boundary_nonempty":false,"connected":true,
                 "groups":{"H2_rel_F2":{"f2_dimension":1}}},
      "surfaces":[{"id":"P","components":[{"id":"p","orientable":false,"euler_characteristic":1,"euler":2}],
                   "class_mod2":[1]},
                  {"id":"Q","components":[{"id":"q","orientable":false,"euler_characteristic":1,"euler":2}],
                   "class_mod2":[3]}]})"));
    CHECK(q.question == Question::Cobordant);
    REQUIRE(q.surfaces.size() == 2);
    CHECK(classes_equal(*q.surfaces[0].class_mod2, *q.surfaces[1].class_mod2));
    CHECK(answer(q)["answer"] == "yes");

    CHECK(error_of([] { json_io::parse_query(json::parse(R"({"schema_version":"2","question":"cobordant"})")); })
              .first == "schema_version");
    CHECK(error_of([] { json_io::parse_query(json::parse(R"({"question":"cobordant","ambient":{},"surfaces":[],
                                                            "colour":1})")); })
              .second == "/colour");
    const auto [kind, path] = error_of([] {
      json_io::parse_query(json::parse(R"({"question":"cobordant","ambient":{"groups":{"H2_rel_F2":{"f2_dimension":1}}},
        "surfaces":[{"id":"P","components":[{"id":"p","orientable":true,"euler_characteristic":3,"euler":0}]}]})"));
    });
    CHECK(kind == "bad_surface");
    CHECK(path.rfind("/surfaces/0", 0) == 0);
  }

  TEST_CASE("classes from cycles of a supplied complex") {
    const auto q = json_io::parse_query(json::parse(R"({"question":"oriented_cobordant",
      "ambient":{"orientable":true,"simply_connected":true,"boundary_nonempty":false,"connected":true,
        "complexes":{"relative":{"ring":"Z","boundary_maps":{"3":[[2],[0]]}},
                     "absolute":{"ring":"Z","boundary_maps":{"3":[[2],[0]]}}}},
      "surfaces":[{"id":"A","components":[{"id":"a","orientable":true,"euler_characteristic":2,"euler":0}],
                   "class_int":{"cycle":[1,0]},"class_mod2":{"cycle":[1,0]}},
                  {"id":"B","components":[{"id":"b","orientable":true,"euler_characteristic":2,"euler":0}],
                   "class_int":{"cycle":[3,0]},"class_mod2":{"cycle":[1,0]}}]})"));
    CHECK(*q.ambient.h2_rel_z == AbelianGroup(1, {2}));
    CHECK(q.ambient.h2_rel_f2->f2_dimension() == 2);
    CHECK(answer(q)["answer"] == "yes");
  }
}
