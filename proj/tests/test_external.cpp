#include <doctest.h>

#include <string>

#include "ira/engine.hpp"
#include "ira/error.hpp"
#include "ira/external_model.hpp"
#include "ira/synth.hpp"

using namespace ira;

namespace {

std::string server(const std::string& args) { return std::string(IRA_FAKE_SERVER) + " " + args; }

}  // namespace

TEST_SUITE("external") {
  TEST_CASE("round trip through the predict server") {
    ExternalModel m(server("2 0"), 1);
    CHECK(m.n_features() == 1);
    CHECK_FALSE(m.concurrent());
    const auto out = m.predict(Matrix(1, 1, {3.0}));
    REQUIRE(out.size() == 1);
    CHECK(out[0] == 6.0);
    CHECK(m.predict(Matrix(2, 1, {1.0, -1.5})) == std::vector<double>{2.0, -3.0});
    CHECK(m.shutdown() == 0);
  }

  TEST_CASE("handshake feature count must match") {
    CHECK_THROWS_WITH_AS(ExternalModel(server("1,1,1,1 0"), 9),
                         doctest::Contains("server reports 4 features, expected 9"),
                         ProtocolError);
    CHECK_THROWS_WITH_AS(ExternalModel(server("1 0 --hello 3"), 1),
                         doctest::Contains("handshake mismatch"), ProtocolError);
  }

  TEST_CASE("server that never greets") {
    CHECK_THROWS_WITH_AS(ExternalModel("exit 0", 1), doctest::Contains("before the handshake"),
                         ProtocolError);
  }

  TEST_CASE("malformed response names the offending line") {
    ExternalModel m(server("1 0 --garbage"), 1);
    CHECK_THROWS_WITH_AS(m.predict(Matrix(1, 1, {1.0})), doctest::Contains("not-a-number"),
                         ProtocolError);
  }

  TEST_CASE("server exiting mid-session") {
    ExternalModel m(server("1 0 --die-after 1"), 1);
    CHECK(m.predict(Matrix(1, 1, {4.0}))[0] == 4.0);
    CHECK_THROWS_WITH_AS(m.predict(Matrix(1, 1, {4.0})), doctest::Contains("mid-session"),
                         ProtocolError);
  }

  TEST_CASE("response id must match the request") {
    ExternalModel m(server("1 0 --wrong-id"), 1);
    CHECK_THROWS_AS(m.predict(Matrix(1, 1, {1.0})), ProtocolError);
  }

  TEST_CASE("server-side errors surface as protocol errors") {
    // The server is told one feature but evaluates two coefficients.
    ExternalModel m(server("1,1 0 --hello 1"), 1);
    CHECK_THROWS_WITH_AS(m.predict(Matrix(1, 1, {1.0})), doctest::Contains("bad width"),
                         ProtocolError);
  }

  TEST_CASE("large batches in one session") {
    ExternalModel m(server("1,-1 0.5"), 2);
    Matrix batch(10000, 2);
    for (std::size_t r = 0; r < batch.rows(); ++r) {
      batch(r, 0) = static_cast<double>(r);
      batch(r, 1) = 0.25 * static_cast<double>(r);
    }
    const auto out = m.predict(batch);
    REQUIRE(out.size() == batch.rows());
    for (std::size_t r = 0; r < batch.rows(); ++r) CHECK(out[r] == 0.5 + 0.75 * r);
    CHECK(m.shutdown() == 0);
  }

  TEST_CASE("IRA through the proxy matches the in-process model") {
    const std::vector<double> coefs{2.0, 0.0, -0.5, 0.05, 0.0, 0.1, -1.2, 0.0};
    const LinearModel local(coefs, 0.75);
    ExternalModel remote(server("2,0,-0.5,0.05,0,0.1,-1.2,0 0.75"), 8);
    const auto ds = synth::gen_linear(300, 5);
    IraConfig cfg;
    cfg.points = 25;
    cfg.background = 40;
    cfg.seed = 9;
    cfg.threads = 4;
    const auto a = ira_single(local, ds, cfg);
    const auto b = ira_single(remote, ds, cfg);
    REQUIRE(a.predictors.size() == b.predictors.size());
    for (std::size_t i = 0; i < a.predictors.size(); ++i) {
      CHECK(b.predictors[i].ira == doctest::Approx(a.predictors[i].ira).epsilon(1e-9));
    }
  }

  TEST_CASE("factory returns a working proxy") {
    const auto m = connect_external(server("3 1"), 1);
    CHECK(m->predict_row(std::vector<double>{2.0}) == 7.0);
  }
}
