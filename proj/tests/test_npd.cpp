#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pqcdet/npd.hpp"
#include "pqcdet/oracle.hpp"

using namespace pqcdet;

TEST_CASE("p_one_to_one basics") {
  CHECK(p_one_to_one(1, 1) == 1.0);
  CHECK(p_one_to_one(4, 5) == 0.0);  // pigeonhole
  // m=2, n=2: multisets {20,11,02}, one of three is one-to-one... with
  // uniform multiset weighting p = C(2,2)/C(3,2) = 1/3.
  CHECK(p_one_to_one(2, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Matches the binomial-ratio form.
  for (int m = 1; m <= 12; ++m)
    for (int n = 1; n <= m; ++n)
      CHECK(p_one_to_one(m, n) ==
            doctest::Approx(binomial(m, n) / binomial(m + n - 1, n)).epsilon(1e-14));
}

TEST_CASE("photon detection domain") {
  NpdConfig cfg;
  cfg.m = 3;
  cfg.detector = gesi_300k();
  CHECK_THROWS_AS(photon_detection(cfg, 0), std::domain_error);
  CHECK_THROWS_AS(photon_detection(cfg, 4), std::domain_error);
  cfg.m = 0;
  CHECK_THROWS_AS(photon_detection(cfg, 1), std::invalid_argument);
}

TEST_CASE("single detector single photon reduces to the obvious forms") {
  NpdConfig cfg;
  cfg.m = 1;
  cfg.detector = gesi_300k();
  const auto gp = gate_probabilities(cfg.detector);
  const auto r = photon_detection(cfg, 1);
  CHECK(r.p_oo == 1.0);
  CHECK(r.p_success == doctest::Approx(gp.p_pc).epsilon(1e-15));
  CHECK(r.p_click == doctest::Approx(1.0 - (1.0 - gp.p_pc) * (1.0 - gp.p_dc)).epsilon(1e-15));
  CHECK(r.fidelity_exact == doctest::Approx(r.p_success / r.p_click).epsilon(1e-15));
}

TEST_CASE("probabilities stay in [0,1] and success <= click") {
  NpdConfig cfg;
  cfg.detector = gesi_300k();
  for (int m = 1; m <= 10; ++m) {
    cfg.m = m;
    for (int n = 1; n <= m; ++n) {
      const auto r = photon_detection(cfg, n);
      CHECK(r.p_success >= 0.0);
      CHECK(r.p_click <= 1.0);
      CHECK(r.p_success <= r.p_click);
      CHECK(r.fidelity_exact <= 1.0);
    }
  }
}

TEST_CASE("qubit detection") {
  const auto gp = gate_probabilities(snspd_4k());
  const auto r = qubit_detection(snspd_4k(), 1);
  // One occupied rail clicking, one empty rail silent.
  const double click = (1.0 - (1.0 - gp.p_pc) * (1.0 - gp.p_dc)) * (1.0 - gp.p_dc);
  CHECK(r.p_click == doctest::Approx(click).epsilon(1e-14));
  CHECK(r.p_success == doctest::Approx(gp.p_pc * (1.0 - gp.p_dc)).epsilon(1e-14));
  CHECK_THROWS_AS(qubit_detection(snspd_4k(), 0), std::domain_error);
}

TEST_CASE("fidelity approximation tracks the exact form for weak dark counts") {
  for (int n = 1; n <= 20; ++n) {
    const auto r = qubit_detection(gesi_300k(), n);
    CHECK(std::abs(r.fidelity_exact - r.fidelity_approx) < 1e-5);
  }
}

TEST_CASE("sweep layout and deltas") {
  const std::vector<DetectorParams> dets = {gesi_300k(), snspd_4k()};
  const auto result = sweep(Scheme::Photon, {1, 3}, {1, 3}, dets);
  // Photon pairs with n <= m: (1,1),(2,1),(2,2),(3,1),(3,2),(3,3) per detector.
  CHECK(result.rows.size() == 12);
  CHECK(result.deltas.size() == 6);
  for (const auto& d : result.deltas) {
    CHECK(d.detector_a == "gesi-300k");
    CHECK(d.detector_b == "snspd-4k");
  }

  const auto qubit = sweep(Scheme::Qubit, {1, 1}, {1, 5}, dets);
  CHECK(qubit.rows.size() == 10);
  for (const auto& r : qubit.rows) CHECK(r.m == 1);
}

TEST_CASE("sweep is independent of the parallelism degree") {
  const std::vector<DetectorParams> dets = {gesi_300k(), snspd_4k()};
  const auto serial = sweep(Scheme::Photon, {1, 8}, {1, 8}, dets, 1);
  const auto parallel = sweep(Scheme::Photon, {1, 8}, {1, 8}, dets, 8);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].report.p_click == parallel.rows[i].report.p_click);
    CHECK(serial.rows[i].report.p_success == parallel.rows[i].report.p_success);
  }
}

TEST_CASE("csv headers are stable") {
  CHECK(sweep_rows_csv({}) ==
        "scheme,detector,M,N,p_oo,p_click,p_success,fidelity_exact,fidelity_approx\n");
  CHECK(sweep_deltas_csv({}) ==
        "scheme,detector_a,detector_b,M,N,p_success_delta,fidelity_exact_delta\n");
}
