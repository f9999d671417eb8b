#include "fkm/fkm.h"

#include <cstring>
#include <functional>
#include <json.hpp>
#include <new>
#include <string>

#include "core/commands.hpp"
#include "core/connection.hpp"
#include "core/einstein.hpp"

namespace {

thread_local std::string tlError;

void setError(const std::string& msg) { tlError = msg; }
void clearError() { tlError.clear(); }

fkm_status mapError(const fkm::Error& e) {
  setError(e.what());
  return e.code() == fkm::ErrorCode::Config ? FKM_CONFIG_ERROR
                                            : FKM_DOMAIN_ERROR;
}

char* dupString(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct fkm_session {
  fkm::RunConfig config;
  std::string message;
};

struct fkm_metric {
  fkm::FundamentalFunction F;
};

namespace {

fkm_status pointwise(const fkm_metric* metric, const double* x,
                     const double* y,
                     const std::function<void(const fkm::FundamentalFunction&,
                                              const fkm::PhasePoint&)>& fn) {
  if (!metric || !x || !y) {
    setError("null argument");
    return FKM_MISUSE;
  }
  const int n = metric->F.dimension();
  fkm::PhasePoint p{Eigen::Map<const Eigen::VectorXd>(x, n),
                    Eigen::Map<const Eigen::VectorXd>(y, n)};
  try {
    fn(metric->F, p);
    clearError();
    return FKM_OK;
  } catch (const fkm::Error& e) {
    return mapError(e);
  } catch (const std::exception& e) {
    setError(e.what());
    return FKM_DOMAIN_ERROR;
  }
}

}  // namespace

extern "C" {

const char* fkm_version(void) { return "0.1.0"; }

const char* fkm_status_name(fkm_status status) {
  switch (status) {
    case FKM_OK:
      return "ok";
    case FKM_CHECK_FAILED:
      return "check-failed";
    case FKM_CONFIG_ERROR:
      return "config-error";
    case FKM_DOMAIN_ERROR:
      return "domain-error";
    case FKM_MISUSE:
      return "misuse";
  }
  return "unknown";
}

const char* fkm_last_error(void) { return tlError.c_str(); }

void fkm_string_free(char* s) { delete[] s; }

fkm_status fkm_session_create(const char* config_json, fkm_session** out) {
  if (!config_json || !out) {
    setError("null argument");
    return FKM_MISUSE;
  }
  *out = nullptr;
  try {
    auto session = new fkm_session{fkm::parseConfig(config_json), {}};
    *out = session;
    clearError();
    return FKM_OK;
  } catch (const fkm::Error& e) {
    return mapError(e);
  } catch (const std::exception& e) {
    setError(e.what());
    return FKM_DOMAIN_ERROR;
  }
}

void fkm_session_destroy(fkm_session* session) { delete session; }

fkm_status fkm_session_run(fkm_session* session, fkm_command command,
                           fkm_format format, char** artifact_out) {
  if (!session) {
    setError("null session");
    return FKM_MISUSE;
  }
  if (artifact_out) *artifact_out = nullptr;
  if (command < FKM_CMD_VALIDATE || command > FKM_CMD_EINSTEIN) {
    setError("unknown command");
    return FKM_MISUSE;
  }

  fkm::Command cmd = static_cast<fkm::Command>(command);
  fkm::OutputFormat fmt = format == FKM_FORMAT_CSV    ? fkm::OutputFormat::Csv
                          : format == FKM_FORMAT_JSON ? fkm::OutputFormat::Json
                                                      : fkm::OutputFormat::Default;
  try {
    fkm::CommandResult res = fkm::runCommand(cmd, session->config, fmt);
    session->message = res.message;
    if (artifact_out && !res.artifact.empty())
      *artifact_out = dupString(res.artifact);
    if (res.status == fkm::RunStatus::Ok)
      clearError();
    else
      setError(res.message);
    return static_cast<fkm_status>(res.status);
  } catch (const std::exception& e) {
    session->message = e.what();
    setError(e.what());
    return FKM_DOMAIN_ERROR;
  }
}

const char* fkm_session_message(const fkm_session* session) {
  return session ? session->message.c_str() : "";
}

fkm_status fkm_metric_create(const char* metric_json, fkm_metric** out) {
  if (!metric_json || !out) {
    setError("null argument");
    return FKM_MISUSE;
  }
  *out = nullptr;
  try {
    // Reuse the full config parser on a wrapper document.
    nlohmann::json wrapper;
    wrapper["metric"] = nlohmann::json::parse(metric_json);
    fkm::RunConfig cfg = fkm::parseConfig(wrapper.dump());
    *out = new fkm_metric{fkm::buildMetric(*cfg.metric)};
    clearError();
    return FKM_OK;
  } catch (const fkm::Error& e) {
    return mapError(e);
  } catch (const std::exception& e) {
    setError(std::string("metric JSON invalid: ") + e.what());
    return FKM_CONFIG_ERROR;
  }
}

void fkm_metric_destroy(fkm_metric* metric) { delete metric; }

int fkm_metric_dimension(const fkm_metric* metric) {
  return metric ? metric->F.dimension() : 0;
}

fkm_status fkm_metric_fundamental(const fkm_metric* metric, const double* x,
                                  const double* y, double* f_out) {
  return pointwise(metric, x, y,
                   [f_out](const fkm::FundamentalFunction& F,
                           const fkm::PhasePoint& p) {
                     fkm::checkPhasePoint(p);
                     if (f_out) *f_out = F.norm(p);
                   });
}

fkm_status fkm_metric_tensor(const fkm_metric* metric, const double* x,
                             const double* y, double* g_out) {
  return pointwise(metric, x, y,
                   [g_out](const fkm::FundamentalFunction& F,
                           const fkm::PhasePoint& p) {
                     Eigen::MatrixXd g = fkm::metricTensor(F, p).g;
                     if (g_out)
                       for (int i = 0; i < g.rows(); ++i)
                         for (int j = 0; j < g.cols(); ++j)
                           g_out[i * g.cols() + j] = g(i, j);
                   });
}

fkm_status fkm_metric_energy_density(const fkm_metric* metric, const double* x,
                                     const double* y, double* t_out) {
  return pointwise(metric, x, y,
                   [t_out](const fkm::FundamentalFunction& F,
                           const fkm::PhasePoint& p) {
                     if (t_out) *t_out = fkm::energyDensity(F, p);
                   });
}

fkm_status fkm_metric_spray(const fkm_metric* metric, const double* x,
                            const double* y, double* spray_out) {
  return pointwise(metric, x, y,
                   [spray_out](const fkm::FundamentalFunction& F,
                               const fkm::PhasePoint& p) {
                     Eigen::VectorXd s = fkm::sprayCoefficients(F, p);
                     if (spray_out)
                       for (int i = 0; i < s.size(); ++i) spray_out[i] = s[i];
                   });
}

fkm_status fkm_metric_connection(const fkm_metric* metric, const double* x,
                                 const double* y, double* n_out) {
  return pointwise(metric, x, y,
                   [n_out](const fkm::FundamentalFunction& F,
                           const fkm::PhasePoint& p) {
                     Eigen::MatrixXd N = fkm::nonlinearConnection(F, p);
                     if (n_out)
                       for (int i = 0; i < N.rows(); ++i)
                         for (int j = 0; j < N.cols(); ++j)
                           n_out[i * N.cols() + j] = N(i, j);
                   });
}

fkm_status fkm_einstein_uv(double A, double c, double t, double* u_out,
                           double* v_out, double* defect_out) {
  try {
    fkm::EinsteinParams p{A, c, t};
    double u = fkm::uFunction(p);
    double v = fkm::vFunction(p);
    if (u_out) *u_out = u;
    if (v_out) *v_out = v;
    if (defect_out) *defect_out = fkm::integrabilityDefect(p);
    clearError();
    return FKM_OK;
  } catch (const fkm::Error& e) {
    return mapError(e);
  }
}

}  // extern "C"
