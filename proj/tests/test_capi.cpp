#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "cvwork/cvwork.h"
#include "doctest.h"

TEST_CASE("version and status names") {
  CHECK(std::string(cvw_version()) == "0.1.0");
  CHECK(std::string(cvw_status_name(CVW_OK)) == "ok");
  CHECK(std::string(cvw_status_name(CVW_ERR_UNPHYSICAL)) == "unphysical state");
}

TEST_CASE("state lifecycle and accessors") {
  cvw_state* s = nullptr;
  REQUIRE(cvw_state_tmsts(1, 2, &s) == CVW_OK);
  CHECK(cvw_state_modes(s) == 2);
  double cov[16];
  CHECK(cvw_state_cov(s, cov, 16) == CVW_OK);
  CHECK(cov[0] == doctest::Approx(2.5 * std::cosh(2.0)));
  CHECK(cov[2] == doctest::Approx(2.5 * std::sinh(2.0)));
  CHECK(cvw_state_cov(s, cov, 15) == CVW_ERR_DIMENSION);

  double nu[2];
  CHECK(cvw_symplectic_eigenvalues(s, nu, 2) == CVW_OK);
  CHECK(nu[0] == doctest::Approx(2.5));
  CHECK(nu[1] == doctest::Approx(2.5));

  double ppt = 0;
  CHECK(cvw_ppt_smallest_eigenvalue(s, &ppt) == CVW_OK);
  CHECK(ppt < 0.5);

  cvw_validation v{};
  CHECK(cvw_validate(s, &v) == CVW_OK);
  CHECK(v.passed == 1);
  CHECK(v.symplectic_margin == doctest::Approx(2.0));
  cvw_state_free(s);
  cvw_state_free(nullptr);
}

TEST_CASE("invalid input maps to status codes") {
  cvw_state* s = nullptr;
  CHECK(cvw_state_tmsts(-1, 0, &s) == CVW_ERR_DOMAIN);
  CHECK(s == nullptr);
  CHECK(std::strlen(cvw_last_error()) > 0);
  CHECK(cvw_state_thermal(0, nullptr) == CVW_ERR_NULL);

  // Handles may hold unphysical CMs so that cvw_validate can explain them;
  // analyses refuse them.
  double out = 0;
  cvw_validation v{};
  const double below_vacuum[4] = {0.2, 0, 0, 0.2};
  REQUIRE(cvw_state_from_cov(below_vacuum, 1, nullptr, &s) == CVW_OK);
  CHECK(cvw_validate(s, &v) == CVW_OK);
  CHECK(v.passed == 0);
  CHECK(v.symplectic_bound == 0);
  CHECK(v.symplectic_margin == doctest::Approx(-0.3));
  CHECK(cvw_entropy(s, &out) == CVW_ERR_UNPHYSICAL);
  cvw_state_free(s);

  const double asymmetric[4] = {1, 0.3, 0, 1};
  REQUIRE(cvw_state_from_cov(asymmetric, 1, nullptr, &s) == CVW_OK);
  CHECK(cvw_validate(s, &v) == CVW_OK);
  CHECK(v.symmetric == 0);
  CHECK(cvw_entropy(s, &out) == CVW_ERR_VALIDATION);
  cvw_state_free(s);

  const double nonfinite[4] = {1, 0, 0, NAN};
  CHECK(cvw_state_from_cov(nonfinite, 1, nullptr, &s) == CVW_ERR_VALIDATION);
  CHECK(cvw_state_from_cov(below_vacuum, 0, nullptr, &s) == CVW_ERR_DIMENSION);

  CHECK(cvw_occupation_from_temperature(2e9, -1, &out) == CVW_ERR_DOMAIN);
  REQUIRE(cvw_state_thermal(1, &s) == CVW_OK);
  CHECK(cvw_ppt_smallest_eigenvalue(s, &out) == CVW_ERR_DIMENSION);
  cvw_work_result w{};
  CHECK(cvw_extracted_work(s, CVW_SIGNAL, CVW_HOMODYNE_X, 0, &w) == CVW_ERR_DIMENSION);
  cvw_state_free(s);
}

TEST_CASE("work, QI and QKD through the C API") {
  cvw_state* source = nullptr;
  cvw_state* returned = nullptr;
  cvw_state* null = nullptr;
  REQUIRE(cvw_state_tmsts(4, 3000, &source) == CVW_OK);
  REQUIRE(cvw_state_apply_channel(source, 0.01, 3000, &returned) == CVW_OK);
  REQUIRE(cvw_state_qi_null(source, 3000, &null) == CVW_OK);

  double x = 0, work = 0;
  CHECK(cvw_work_after_channel(4, 3000, 0.01, 3000, &x, &work) == CVW_OK);
  CHECK(work == doctest::Approx(1.3880175214389206).epsilon(1e-14));

  cvw_work_result w{};
  CHECK(cvw_extracted_work(returned, CVW_SIGNAL, CVW_HOMODYNE_X, 0, &w) == CVW_OK);
  CHECK(w.work_per_kbt == doctest::Approx(work).epsilon(1e-6));
  CHECK(cvw_extracted_work(returned, CVW_SIGNAL, CVW_GENERAL, -2, &w) == CVW_ERR_DOMAIN);

  const double outcome[1] = {1};
  double d[2];
  cvw_state* pure = nullptr;
  REQUIRE(cvw_state_tmsts(1, 0, &pure) == CVW_OK);
  CHECK(cvw_feedback_displacement(pure, CVW_SIGNAL, CVW_HOMODYNE_X, 0, outcome, 1, 0.5, d) == CVW_OK);
  CHECK(d[0] == doctest::Approx(0.48201379003790844).epsilon(1e-14));
  CHECK(cvw_feedback_displacement(pure, CVW_SIGNAL, CVW_HETERODYNE, 0, outcome, 1, 0.5, d) == CVW_ERR_DIMENSION);
  cvw_state_free(pure);

  cvw_snr_result snr{};
  CHECK(cvw_qi_snr(returned, null, &snr) == CVW_OK);
  CHECK(snr.signal_gap == doctest::Approx(2 * 0.1 * 3000.5 * std::sinh(8.0)));

  cvw_correlation c{};
  CHECK(cvw_qkd_rho(returned, &c) == CVW_OK);
  CHECK(c.rho == doctest::Approx(0.968356868259685).epsilon(1e-13));

  cvw_state_free(source);
  cvw_state_free(returned);
  cvw_state_free(null);
}

TEST_CASE("sweep handle") {
  cvw_sweep* sw = nullptr;
  REQUIRE(cvw_sweep_create(&sw) == CVW_OK);
  CHECK(cvw_sweep_set(sw, "sweep", "r:0:1:3:lin") == CVW_OK);
  CHECK(cvw_sweep_set(sw, "no-timestamp", "true") == CVW_OK);
  CHECK(cvw_sweep_set(sw, "colour", "blue") == CVW_ERR_USAGE);
  CHECK(cvw_sweep_load_file(sw, "/nonexistent/file.cfg") == CVW_ERR_IO);

  std::size_t needed = 0;
  CHECK(cvw_sweep_render(sw, CVW_REPORT_SWEEP, nullptr, 0, &needed) == CVW_ERR_DIMENSION);
  REQUIRE(needed > 1);
  std::vector<char> buf(needed);
  CHECK(cvw_sweep_render(sw, CVW_REPORT_SWEEP, buf.data(), buf.size(), &needed) == CVW_OK);
  const std::string csv(buf.data());
  CHECK(csv.size() + 1 == needed);
  CHECK(csv.find("r,n_th,n_ch,eta,ratio,work") != std::string::npos);

  CHECK(cvw_sweep_set(sw, "eta", "2") == CVW_OK);
  CHECK(cvw_sweep_render(sw, CVW_REPORT_SWEEP, buf.data(), buf.size(), &needed) == CVW_ERR_USAGE);
  CHECK(std::string(cvw_last_error()).find("eta") != std::string::npos);
  cvw_sweep_free(sw);
}
