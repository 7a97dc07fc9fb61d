#include "cvwork/cvwork.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <span>
#include <string>
#include <vector>

#include "cvwork/conditioning.hpp"
#include "cvwork/protocols.hpp"
#include "cvwork/sweep.hpp"

struct cvw_state {
  cvwork::GaussianState state;
};

struct cvw_sweep {
  cvwork::sweep::ConfigBuilder builder;
};

namespace {

using namespace cvwork;

thread_local std::string g_last_error;

cvw_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return CVW_ERR_VALIDATION;
    case ErrorKind::unphysical: return CVW_ERR_UNPHYSICAL;
    case ErrorKind::domain: return CVW_ERR_DOMAIN;
    case ErrorKind::dimension: return CVW_ERR_DIMENSION;
    case ErrorKind::numeric: return CVW_ERR_NUMERIC;
    case ErrorKind::usage: return CVW_ERR_USAGE;
    case ErrorKind::io: return CVW_ERR_IO;
  }
  return CVW_ERR_INTERNAL;
}

template <class F>
cvw_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return CVW_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return CVW_ERR_INTERNAL;
}

#define CVW_REQUIRE(p)                                  \
  do {                                                  \
    if ((p) == nullptr) {                               \
      g_last_error = std::string(#p) + " is NULL";      \
      return CVW_ERR_NULL;                              \
    }                                                   \
  } while (0)

MeasurementSpec measurement(cvw_measurement kind, double lambda) {
  switch (kind) {
    case CVW_HOMODYNE_X: return MeasurementSpec::homodyne_x();
    case CVW_HOMODYNE_P: return MeasurementSpec::homodyne_p();
    case CVW_HETERODYNE: return MeasurementSpec::heterodyne();
    case CVW_GENERAL: return MeasurementSpec::general(lambda);
  }
  throw Error(ErrorKind::domain, "unknown measurement kind");
}

Mode mode_of(cvw_mode m) {
  if (m != CVW_IDLER && m != CVW_SIGNAL) throw Error(ErrorKind::domain, "unknown mode");
  return m == CVW_IDLER ? Mode::idler : Mode::signal;
}

TwoModeState two_mode(const cvw_state* s) { return TwoModeState(s->state); }

cvw_state* wrap(GaussianState st) { return new cvw_state{std::move(st)}; }

void copy_matrix(const Matrix& m, double* out, std::size_t len) {
  const std::size_t need = static_cast<std::size_t>(m.size());
  if (len < need) throw Error(ErrorKind::dimension, "output buffer needs " + std::to_string(need) + " entries");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = static_cast<double>(m(i, j));
  }
}

}  // namespace

extern "C" {

const char* cvw_version(void) { return sweep::kVersion; }

const char* cvw_last_error(void) { return g_last_error.c_str(); }

const char* cvw_status_name(cvw_status status) {
  switch (status) {
    case CVW_OK: return "ok";
    case CVW_ERR_NULL: return "null argument";
    case CVW_ERR_VALIDATION: return "validation error";
    case CVW_ERR_UNPHYSICAL: return "unphysical state";
    case CVW_ERR_DOMAIN: return "domain error";
    case CVW_ERR_DIMENSION: return "dimension error";
    case CVW_ERR_NUMERIC: return "numeric error";
    case CVW_ERR_USAGE: return "usage error";
    case CVW_ERR_IO: return "io error";
    case CVW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

cvw_status cvw_state_from_cov(const double* cov, size_t n_modes, const double* mean, cvw_state** out) {
  CVW_REQUIRE(cov);
  CVW_REQUIRE(out);
  return guarded([&] {
    if (n_modes == 0) throw Error(ErrorKind::dimension, "n_modes must be > 0");
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cov[i * dim + j];
    }
    Vector mu = Vector::Zero(dim);
    if (mean != nullptr) {
      for (Eigen::Index i = 0; i < dim; ++i) mu(i) = mean[i];
    }
    *out = wrap(GaussianState(std::move(mu), CovarianceMatrix(std::move(m))));
  });
}

cvw_status cvw_state_thermal(double n, cvw_state** out) {
  CVW_REQUIRE(out);
  return guarded([&] { *out = wrap(make_thermal(n)); });
}

cvw_status cvw_state_tmsts(double r, double n_th, cvw_state** out) {
  CVW_REQUIRE(out);
  return guarded([&] { *out = wrap(make_tmsts({r, n_th}).state()); });
}

cvw_status cvw_state_apply_channel(const cvw_state* s, double eta, double n_ch, cvw_state** out) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] { *out = wrap(apply_channel(two_mode(s), {eta, n_ch}).state()); });
}

cvw_status cvw_state_qi_null(const cvw_state* source, double n_ch, cvw_state** out) {
  CVW_REQUIRE(source);
  CVW_REQUIRE(out);
  return guarded([&] { *out = wrap(qi_null_hypothesis(two_mode(source), n_ch).state()); });
}

void cvw_state_free(cvw_state* s) { delete s; }

size_t cvw_state_modes(const cvw_state* s) { return s ? static_cast<size_t>(s->state.n_modes()) : 0; }

cvw_status cvw_state_cov(const cvw_state* s, double* out, size_t len) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] { copy_matrix(s->state.cov.entries(), out, len); });
}

cvw_status cvw_state_mean(const cvw_state* s, double* out, size_t len) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] { copy_matrix(s->state.mean, out, len); });
}

cvw_status cvw_occupation_from_temperature(double frequency_hz, double temperature_k, double* out) {
  CVW_REQUIRE(out);
  return guarded([&] { *out = static_cast<double>(occupation_from_temperature(frequency_hz, temperature_k)); });
}

cvw_status cvw_symplectic_eigenvalues(const cvw_state* s, double* out, size_t len) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] {
    const SymplecticSpectrum spec = symplectic_eigenvalues(s->state.cov);
    if (len < spec.eigenvalues.size()) throw Error(ErrorKind::dimension, "output buffer too small");
    for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) out[k] = static_cast<double>(spec.eigenvalues[k]);
  });
}

cvw_status cvw_ppt_smallest_eigenvalue(const cvw_state* s, double* out) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] { *out = static_cast<double>(ppt_smallest_eigenvalue(s->state.cov)); });
}

cvw_status cvw_entropy(const cvw_state* s, double* out) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] { *out = static_cast<double>(von_neumann_entropy(s->state.cov)); });
}

cvw_status cvw_validate(const cvw_state* s, cvw_validation* out) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] {
    const ValidationReport r = validate(s->state.cov);
    out->passed = r.passed();
    out->symmetric = r.symmetry.passed;
    out->positive_definite = r.positive_definite.passed;
    out->symplectic_bound = r.symplectic_bound.passed;
    out->symmetry_margin = static_cast<double>(r.symmetry.margin);
    out->min_eigenvalue = static_cast<double>(r.positive_definite.margin);
    out->symplectic_margin = static_cast<double>(r.symplectic_bound.margin);
  });
}

cvw_status cvw_extracted_work(const cvw_state* s, cvw_mode measured, cvw_measurement kind, double lambda,
                              cvw_work_result* out) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] {
    const WorkResult w = extracted_work_general(two_mode(s), mode_of(measured), measurement(kind, lambda));
    out->work_per_kbt = static_cast<double>(w.work_per_kbt);
    out->entropy_before = static_cast<double>(w.entropy_before);
    out->entropy_after = static_cast<double>(w.entropy_after);
    copy_matrix(w.conditional_cov.entries(), out->conditional_cov, 4);
  });
}

cvw_status cvw_feedback_displacement(const cvw_state* s, cvw_mode measured, cvw_measurement kind, double lambda,
                                     const double* outcome, size_t outcome_len, double prefactor, double out[2]) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(outcome);
  CVW_REQUIRE(out);
  return guarded([&] {
    std::vector<Real> values(outcome, outcome + outcome_len);
    const Vector2 d = feedback_displacement(two_mode(s), mode_of(measured), measurement(kind, lambda), values, prefactor);
    out[0] = static_cast<double>(d(0));
    out[1] = static_cast<double>(d(1));
  });
}

cvw_status cvw_work_after_channel(double r, double n_th, double eta, double n_ch, double* x, double* work_per_kbt) {
  CVW_REQUIRE(x);
  CVW_REQUIRE(work_per_kbt);
  return guarded([&] {
    const ChannelWork w = work_after_channel({r, n_th}, {eta, n_ch});
    *x = static_cast<double>(w.x);
    *work_per_kbt = static_cast<double>(w.work_per_kbt);
  });
}

cvw_status cvw_qi_snr(const cvw_state* h1, const cvw_state* h0, cvw_snr_result* out) {
  CVW_REQUIRE(h1);
  CVW_REQUIRE(h0);
  CVW_REQUIRE(out);
  return guarded([&] {
    const SnrResult r = qi_intensity_moments(two_mode(h1), two_mode(h0));
    *out = {static_cast<double>(r.signal_gap), static_cast<double>(r.noise_h1), static_cast<double>(r.noise_h0),
            static_cast<double>(r.snr)};
  });
}

cvw_status cvw_qkd_rho(const cvw_state* s, cvw_correlation* out) {
  CVW_REQUIRE(s);
  CVW_REQUIRE(out);
  return guarded([&] {
    const CorrelationResult c = qkd_rho_from_cm(two_mode(s));
    *out = {static_cast<double>(c.rho), static_cast<double>(c.numerator), static_cast<double>(c.var_i),
            static_cast<double>(c.var_r)};
  });
}

cvw_status cvw_sweep_create(cvw_sweep** out) {
  CVW_REQUIRE(out);
  return guarded([&] { *out = new cvw_sweep{}; });
}

void cvw_sweep_free(cvw_sweep* sw) { delete sw; }

cvw_status cvw_sweep_set(cvw_sweep* sw, const char* key, const char* value) {
  CVW_REQUIRE(sw);
  CVW_REQUIRE(key);
  CVW_REQUIRE(value);
  return guarded([&] { sw->builder.set(key, value); });
}

cvw_status cvw_sweep_load_file(cvw_sweep* sw, const char* path) {
  CVW_REQUIRE(sw);
  CVW_REQUIRE(path);
  return guarded([&] { sw->builder.load_file(path); });
}

cvw_status cvw_sweep_write(const cvw_sweep* sw, cvw_report kind, size_t* n_rows, size_t* n_failed) {
  CVW_REQUIRE(sw);
  return guarded([&] {
    const sweep::SweepConfig cfg = sw->builder.build();
    const auto report = kind == CVW_REPORT_COMPARE ? sweep::Report::compare : sweep::Report::sweep;
    const sweep::Table table = report == sweep::Report::compare ? sweep::compare_report(cfg) : sweep::run_sweep(cfg);
    const std::string csv = sweep::render_csv(table, cfg, report);
    if (cfg.out == "-") {
      std::cout << csv << std::flush;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw Error(ErrorKind::io, "cannot open '" + cfg.out + "' for writing");
      f << csv;
      if (!f) throw Error(ErrorKind::io, "write to '" + cfg.out + "' failed");
    }
    if (n_rows) *n_rows = table.rows.size();
    if (n_failed) *n_failed = table.failed_rows;
  });
}

cvw_status cvw_sweep_render(const cvw_sweep* sw, cvw_report kind, char* buf, size_t len, size_t* needed) {
  CVW_REQUIRE(sw);
  CVW_REQUIRE(needed);
  return guarded([&] {
    const sweep::SweepConfig cfg = sw->builder.build();
    const auto report = kind == CVW_REPORT_COMPARE ? sweep::Report::compare : sweep::Report::sweep;
    const sweep::Table table = report == sweep::Report::compare ? sweep::compare_report(cfg) : sweep::run_sweep(cfg);
    const std::string csv = sweep::render_csv(table, cfg, report);
    *needed = csv.size() + 1;
    if (buf == nullptr || len < *needed) throw Error(ErrorKind::dimension, "buffer too small for CSV output");
    std::memcpy(buf, csv.c_str(), csv.size() + 1);
  });
}

}  // extern "C"
