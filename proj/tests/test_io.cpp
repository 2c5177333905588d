#include <doctest.h>

#include <cmath>
#include <string>

#include "gibbsbounds/csv.hpp"
#include "gibbsbounds/model_json.hpp"
#include "gibbsbounds/simulate.hpp"

using namespace gibbsbounds;
using nlohmann::json;

TEST_CASE("model json: all interaction types parse") {
  const auto strauss = model_from_json(json::parse(
      R"({"d":2,"beta":50.0,"interaction":{"type":"strauss","params":{"gamma":0.3,"r":0.05}}})"));
  CHECK(strauss.beta() == 50.0);
  CHECK(strauss.interaction().phi(0.04) == 0.3);

  const auto hc = model_from_json(json::parse(
      R"({"d":2,"beta":40.0,"interaction":{"type":"hardcore","params":{"r":0.05}}})"));
  CHECK(hc.interaction().phi(0.04) == 0.0);

  const auto annulus = model_from_json(json::parse(
      R"({"d":2,"beta":3000.0,"interaction":{"type":"hard_annulus","params":{"r":0.05,"R":0.0707}}})"));
  CHECK(annulus.interaction().phi(0.04) == 1.0);
  CHECK(annulus.interaction().phi(0.06) == 0.0);

  const auto step = model_from_json(json::parse(
      R"({"d":3,"beta":10.0,"interaction":{"type":"step","params":{"breakpoints":[0.1,0.2],"values":[0.0,0.5]}}})"));
  CHECK(step.dim() == 3);
  CHECK(step.interaction().phi(0.15) == 0.5);
}

TEST_CASE("model json round trip preserves the interaction") {
  const auto original = model_from_json(json::parse(
      R"({"d":2,"beta":70.0,"interaction":{"type":"hard_annulus","params":{"r":0.025,"R":0.035}}})"));
  const auto restored = model_from_json(model_to_json(original));
  CHECK(restored.dim() == original.dim());
  CHECK(restored.beta() == original.beta());
  CHECK(restored.interaction().breakpoints() == original.interaction().breakpoints());
  CHECK(restored.interaction().values() == original.interaction().values());
}

TEST_CASE("model json rejects unknown types and non-inhibitory values") {
  CHECK_THROWS_AS(model_from_json(json::parse(
                      R"({"d":2,"beta":1.0,"interaction":{"type":"geyer","params":{}}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      model_from_json(json::parse(
          R"({"d":2,"beta":1.0,"interaction":{"type":"step","params":{"breakpoints":[0.1],"values":[1.4]}}})")),
      HypothesisViolation);
  CHECK_THROWS(model_from_json(json::parse(R"({"beta":1.0})")));
}

TEST_CASE("window json round trip") {
  const Window w({-0.05, 0.0}, {1.05, 2.0});
  const Window back = window_from_json(window_to_json(w));
  CHECK(back.lower() == w.lower());
  CHECK(back.upper() == w.upper());
}

TEST_CASE("t grid spec") {
  const TGridSpec spec{0.0, 0.1, 11};
  const auto g = spec.make();
  CHECK(g.size() == 11);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(0.1));
  CHECK_THROWS_AS((TGridSpec{0.0, 0.1, 1}).make(), std::invalid_argument);
  CHECK_THROWS_AS((TGridSpec{0.2, 0.1, 5}).make(), std::invalid_argument);
}

TEST_CASE("pattern csv round trip is exact") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const auto pat = sample_poisson(w, 120.0, {9, 2});
  const std::string csv = pattern_to_csv(pat);
  CHECK(csv.substr(0, 6) == "x1,x2\n");
  const auto back = pattern_from_csv(csv, w);
  REQUIRE(back.size() == pat.size());
  CHECK(back.coords() == pat.coords());
  // serialization is a pure function of the pattern
  CHECK(pattern_to_csv(back) == csv);
}

TEST_CASE("pattern csv rejects malformed rows") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  CHECK_THROWS_AS(pattern_from_csv("x1,x2\n0.5\n", w), std::invalid_argument);
  CHECK_THROWS_AS(pattern_from_csv("x1,x2\n0.5,abc\n", w), std::invalid_argument);
  CHECK_THROWS_AS(pattern_from_csv("x1,x2\n0.5,2.5\n", w), std::invalid_argument);  // outside
  CHECK_THROWS_AS(pattern_from_csv("", w), std::invalid_argument);
}

TEST_CASE("band csv layout") {
  CurveBand band;
  band.abscissae = {0.0, 0.5};
  band.bands = {{0.0, 0.25}, {0.125, 1.0}};
  CHECK(band_to_csv(band) == "t,lower,upper\n0,0,0.25\n0.5,0.125,1\n");

  band.estimate = {0.1, 0.5};
  band.std_err = {0.01, 0.02};
  CHECK(band_to_csv(band) ==
        "t,lower,upper,estimate,std_err\n0,0,0.25,0.1,0.01\n0.5,0.125,1,0.5,0.02\n");

  const std::vector<double> t{0.0, 1.0};
  const std::vector<double> est{0.5, std::nan("")};
  CHECK(curve_to_csv(t, est, {}) == "t,estimate,std_err\n0,0.5,nan\n1,nan,nan\n");
}
