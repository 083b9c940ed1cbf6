#include "wfl/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <json.hpp>

#include "wfl/basis.hpp"
#include "wfl/drive.hpp"
#include "wfl/hfe.hpp"
#include "wfl/lattice.hpp"
#include "wfl/models.hpp"
#include "wfl/solve.hpp"

namespace wfl {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kLibraryVersion = "0.1.0";
const double kNan = std::numeric_limits<double>::quiet_NaN();

KickConvention convention_from(const ExperimentConfig& cfg) {
  const std::string name = cfg.get("convention", "symmetric");
  if (name == "symmetric") return KickConvention::symmetric;
  if (name == "nonsymmetric") return KickConvention::nonsymmetric;
  throw std::invalid_argument("unknown convention: " + name);
}

PeriodicDrive make_drive(const std::string& name, double period, KickConvention conv) {
  if (name == "updown_kick") return up_down_kick(period, conv);
  if (name == "square_wave") return square_wave(period, conv);
  throw std::invalid_argument("unknown drive: " + name);
}

// Axis values for key prefix `name`: explicit "<name>_list" wins; otherwise
// "<name>_count" points up to "<name>_max", half-open (0, max] unless
// "<name>_min" makes it an inclusive linspace.
std::vector<double> axis_values(const ExperimentConfig& cfg, const std::string& name,
                                double fallback_max, int fallback_count) {
  if (cfg.has(name + "_list")) return cfg.number_list(name + "_list");
  const int count = static_cast<int>(cfg.integer(name + "_count", fallback_count));
  const double max = cfg.number(name + "_max", fallback_max);
  if (count < 1) throw std::invalid_argument(name + "_count must be >= 1");
  std::vector<double> values(count);
  if (cfg.has(name + "_min")) {
    const double min = cfg.number(name + "_min");
    for (int k = 0; k < count; ++k)
      values[k] = count == 1 ? min : min + (max - min) * k / (count - 1);
  } else {
    for (int k = 0; k < count; ++k) values[k] = max * (k + 1) / count;
  }
  return values;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

// Computes one string per index on a small thread pool; results land in
// index-addressed slots so the output order never depends on scheduling.
std::vector<std::string> parallel_rows(int count, int workers,
                                       const std::function<std::string(int)>& fn) {
  std::vector<std::string> rows(static_cast<std::size_t>(count));
  if (count == 0) return rows;
  std::atomic<int> next{0};
  std::vector<std::string> errors(static_cast<std::size_t>(count));
  std::atomic<bool> failed{false};
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        rows[static_cast<std::size_t>(i)] = fn(i);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
        failed.store(true);
      }
    }
  };
  const int pool = std::max(1, std::min(workers, count));
  if (pool == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(pool));
    for (int i = 0; i < pool; ++i) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (failed.load()) {
    for (const std::string& e : errors)
      if (!e.empty()) throw std::runtime_error("experiment point failed: " + e);
  }
  return rows;
}

int write_csv(const std::string& path, const std::string& header,
              const std::vector<std::string>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << header << '\n';
  int lines = 0;
  for (const std::string& row : rows) {
    if (row.empty()) continue;
    out << row << '\n';
    lines += 1 + static_cast<int>(std::count(row.begin(), row.end(), '\n'));
  }
  return lines;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::string write_manifest(const std::string& out_dir, const std::string& experiment,
                           const ExperimentConfig& cfg, const std::vector<std::string>& outputs,
                           int rows, int workers, long long wall_ms, const json& summary) {
  json manifest;
  manifest["experiment"] = experiment;
  json config = json::object();
  for (const auto& [key, value] : cfg.entries()) config[key] = value;
  manifest["config"] = config;
  json outs = json::array();
  for (const std::string& path : outputs)
    outs.push_back(std::filesystem::path(path).filename().string());
  manifest["outputs"] = outs;
  manifest["rows"] = rows;
  manifest["workers"] = workers;
  manifest["wall_ms"] = wall_ms;
  manifest["library_version"] = kLibraryVersion;
  manifest["summary"] = summary;
  const std::string path = out_dir + "/" + experiment + "_manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open manifest: " + path);
  out << manifest.dump(2) << '\n';
  return path;
}

// h_z may be given directly ("hz") or as the dimensionless phase ("hz_t").
double resolve_hz(const ExperimentConfig& cfg, double period, double fallback_hz_t) {
  if (cfg.has("hz")) return cfg.number("hz");
  return cfg.number("hz_t", fallback_hz_t) / period;
}

struct BasisSetup {
  Basis basis = Basis::walsh;
  int n_modes = 0;
  bool symmetrize = false;
};

FloquetSolution solve_in_basis(const SpinModel& model, const PeriodicDrive& drive,
                               const BasisSetup& setup, const ExactFloquetResult& exact) {
  ExtendedOperator q = assemble_q(model, drive, setup.basis, setup.n_modes);
  if (setup.symmetrize && setup.basis == Basis::walsh) q = symmetrize_walsh(q);
  return solve(q, &exact);
}

// Total weight of one physical component across all photon blocks.
double component_weight(const FloquetSolution& sol, int eig_index, int component) {
  double w = 0.0;
  for (int m = 0; m < sol.n_modes; ++m)
    w += std::norm(sol.vectors(static_cast<long>(m) * sol.dim_h + component, eig_index));
  return w;
}

int representative_with_max_component(const FloquetSolution& sol, int component) {
  int best = sol.representatives.front();
  double best_w = -1.0;
  for (int rep : sol.representatives) {
    const double w = component_weight(sol, rep, component);
    if (w > best_w) {
      best_w = w;
      best = rep;
    }
  }
  return best;
}

double min_circular_gap(const Eigen::VectorXd& theta) {
  const long n = theta.size();
  if (n < 2) return 2.0 * std::numbers::pi;
  double gap = std::numeric_limits<double>::infinity();
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      gap = std::min(gap, circular_distance(theta(i), theta(j)));
  return gap;
}

// --------------------------------------------------------------------------
// spectrum: exact vs walsh vs fourier phases, one row per (drive point, state)
// --------------------------------------------------------------------------

RunResult run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir, int workers) {
  Timer timer;
  const int sites = static_cast<int>(cfg.integer("sites", 3));
  const double exchange = cfg.number("exchange", 1.0);
  const double period = cfg.number("period", 1.0);
  const double hz = resolve_hz(cfg, period, 1.1 * std::numbers::pi);
  const auto hx_values = axis_values(cfg, "hx", 2.0 * std::numbers::pi, 16);
  const int n_walsh = static_cast<int>(cfg.integer("n_walsh", 32));
  const int n_fourier = static_cast<int>(cfg.integer("n_fourier", n_walsh - 1));
  const bool symmetrize = cfg.flag("walsh_symmetrize", false);
  const KickConvention conv = convention_from(cfg);
  const std::string drive_name = cfg.get("drive", "updown_kick");

  const auto row_fn = [&](int i) {
    const double hx = hx_values[static_cast<std::size_t>(i)];
    const SpinModel model = build_mfim(sites, exchange, hz, hx);
    const PeriodicDrive drive = make_drive(drive_name, period, conv);
    const ExactFloquetResult exact = exact_propagator(model, drive);
    std::vector<double> theta_w(exact.theta.size(), kNan), theta_f(exact.theta.size(), kNan);
    std::vector<double> err_w(exact.theta.size(), kNan), err_f(exact.theta.size(), kNan);
    int status = 0;
    try {
      const FloquetSolution w =
          solve_in_basis(model, drive, {Basis::walsh, n_walsh, symmetrize}, exact);
      const PhaseErrors pe = phase_error(w, exact);
      for (std::size_t r = 0; r < pe.assignment.size(); ++r) {
        const int state = pe.assignment[r];
        theta_w[static_cast<std::size_t>(state)] = w.theta(w.representatives[r]);
        err_w[static_cast<std::size_t>(state)] = pe.per_state(state);
      }
    } catch (const std::exception&) {
      status |= 1;
    }
    try {
      const FloquetSolution f =
          solve_in_basis(model, drive, {Basis::fourier, n_fourier, false}, exact);
      const PhaseErrors pe = phase_error(f, exact);
      for (std::size_t r = 0; r < pe.assignment.size(); ++r) {
        const int state = pe.assignment[r];
        theta_f[static_cast<std::size_t>(state)] = f.theta(f.representatives[r]);
        err_f[static_cast<std::size_t>(state)] = pe.per_state(state);
      }
    } catch (const std::exception&) {
      status |= 2;
    }
    std::string lines;
    for (long s = 0; s < exact.theta.size(); ++s) {
      if (s) lines += '\n';
      lines += join_row({format_number(hx), std::to_string(s),
                         format_number(exact.theta(s)),
                         format_number(theta_w[static_cast<std::size_t>(s)]),
                         format_number(theta_f[static_cast<std::size_t>(s)]),
                         format_number(err_w[static_cast<std::size_t>(s)]),
                         format_number(err_f[static_cast<std::size_t>(s)]),
                         std::to_string(status)});
    }
    return lines;
  };

  const auto rows =
      parallel_rows(static_cast<int>(hx_values.size()), workers, row_fn);
  const std::string csv = out_dir + "/spectrum.csv";
  const int lines = write_csv(
      csv, "hx,state,theta_exact,theta_walsh,theta_fourier,dtheta_walsh,dtheta_fourier,status",
      rows);
  json summary;
  summary["points"] = hx_values.size();
  RunResult result{{csv}, "", lines};
  result.manifest = write_manifest(out_dir, "spectrum", cfg, result.outputs, lines, workers,
                                   timer.ms(), summary);
  return result;
}

// --------------------------------------------------------------------------
// error_map / entropy_map: (h_x, h_z T) grids of phase errors, optionally with
// spin-component photon entropies
// --------------------------------------------------------------------------

RunResult run_map(const ExperimentConfig& cfg, const std::string& out_dir, int workers,
                  bool with_entropy) {
  Timer timer;
  const std::string name = with_entropy ? "entropy_map" : "error_map";
  const int sites = static_cast<int>(cfg.integer("sites", 1));
  const double exchange = cfg.number("exchange", 1.0);
  const double period = cfg.number("period", 1.0);
  const int res = static_cast<int>(cfg.integer("res", 20));
  const auto hx_values = axis_values(cfg, "hx", 2.0 * std::numbers::pi, res);
  const auto hz_t_values = axis_values(cfg, "hz_t", 2.0 * std::numbers::pi, res);
  const int n_walsh = static_cast<int>(cfg.integer("n_walsh", 32));
  const int n_fourier = static_cast<int>(cfg.integer("n_fourier", n_walsh - 1));
  const bool symmetrize = cfg.flag("walsh_symmetrize", false);
  const KickConvention conv = convention_from(cfg);
  const std::string drive_name = cfg.get("drive", "updown_kick");
  const int component = static_cast<int>(cfg.integer("component", 0));

  const int nx = static_cast<int>(hx_values.size());
  const int nz = static_cast<int>(hz_t_values.size());

  const auto row_fn = [&](int cell) {
    const double hx = hx_values[static_cast<std::size_t>(cell % nx)];
    const double hz_t = hz_t_values[static_cast<std::size_t>(cell / nx)];
    const double hz = hz_t / period;
    const SpinModel model = build_mfim(sites, exchange, hz, hx);
    const PeriodicDrive drive = make_drive(drive_name, period, conv);
    const ExactFloquetResult exact = exact_propagator(model, drive);

    double med_w = kNan, med_f = kNan, max_w = kNan, max_f = kNan;
    double s_w = kNan, s_f = kNan;
    int flag_w = 0, flag_f = 0, status = 0;
    try {
      const FloquetSolution w =
          solve_in_basis(model, drive, {Basis::walsh, n_walsh, symmetrize}, exact);
      const PhaseErrors pe = phase_error(w, exact);
      med_w = pe.median_abs;
      max_w = pe.max_abs;
      if (with_entropy) {
        bool flagged = false;
        const int rep = representative_with_max_component(w, component);
        s_w = participation_entropy(w, rep, component, &flagged);
        flag_w = flagged ? 1 : 0;
      }
    } catch (const std::exception&) {
      status |= 1;
    }
    try {
      const FloquetSolution f =
          solve_in_basis(model, drive, {Basis::fourier, n_fourier, false}, exact);
      const PhaseErrors pe = phase_error(f, exact);
      med_f = pe.median_abs;
      max_f = pe.max_abs;
      if (with_entropy) {
        bool flagged = false;
        const int rep = representative_with_max_component(f, component);
        s_f = participation_entropy(f, rep, component, &flagged);
        flag_f = flagged ? 1 : 0;
      }
    } catch (const std::exception&) {
      status |= 2;
    }
    const int singular = (hz == 0.0 || exact.degenerate) ? 1 : 0;
    std::vector<std::string> cells{format_number(hx),
                                   format_number(hz_t),
                                   format_number(med_w),
                                   format_number(med_f),
                                   format_number(max_w),
                                   format_number(max_f),
                                   format_number(min_circular_gap(exact.theta)),
                                   std::to_string(singular),
                                   std::to_string(status)};
    if (with_entropy) {
      cells.insert(cells.begin() + 6, {format_number(s_w), format_number(s_f),
                                       std::to_string(flag_w), std::to_string(flag_f)});
    }
    return join_row(cells);
  };

  const auto rows = parallel_rows(nx * nz, workers, row_fn);
  const std::string csv = out_dir + "/" + name + ".csv";
  const std::string header =
      with_entropy
          ? "hx,hz_t,dtheta_walsh_median,dtheta_fourier_median,dtheta_walsh_max,"
            "dtheta_fourier_max,s_walsh,s_fourier,s_flag_walsh,s_flag_fourier,exact_gap,"
            "singular,status"
          : "hx,hz_t,dtheta_walsh_median,dtheta_fourier_median,dtheta_walsh_max,"
            "dtheta_fourier_max,exact_gap,singular,status";
  const int lines = write_csv(csv, header, rows);
  json summary;
  summary["grid"] = {nx, nz};
  RunResult result{{csv}, "", lines};
  result.manifest =
      write_manifest(out_dir, name, cfg, result.outputs, lines, workers, timer.ms(), summary);
  return result;
}

// --------------------------------------------------------------------------
// mode_profile: photon amplitudes of one physical component of the selected
// Floquet state, plus its reconstructed time trace
// --------------------------------------------------------------------------

RunResult run_mode_profile(const ExperimentConfig& cfg, const std::string& out_dir,
                           int workers) {
  Timer timer;
  const int sites = static_cast<int>(cfg.integer("sites", 1));
  const double exchange = cfg.number("exchange", 1.0);
  const double period = cfg.number("period", 1.0);
  const double hz = resolve_hz(cfg, period, 1.1 * std::numbers::pi);
  const double hx = cfg.number("hx", 0.5 * std::numbers::pi);
  const int n_walsh = static_cast<int>(cfg.integer("n_walsh", 32));
  const int n_fourier = static_cast<int>(cfg.integer("n_fourier", n_walsh - 1));
  const bool symmetrize = cfg.flag("walsh_symmetrize", false);
  const KickConvention conv = convention_from(cfg);
  const std::string drive_name = cfg.get("drive", "updown_kick");
  const int component = static_cast<int>(cfg.integer("component", 0));
  const int trace_points = static_cast<int>(cfg.integer("trace_points", 256));

  const SpinModel model = build_mfim(sites, exchange, hz, hx);
  const PeriodicDrive drive = make_drive(drive_name, period, conv);
  const ExactFloquetResult exact = exact_propagator(model, drive);

  std::vector<std::string> mode_rows;
  std::vector<std::string> trace_rows;
  const WalshBasis wtable = build_walsh_basis(
      static_cast<int>(std::lround(std::log2(static_cast<double>(n_walsh)))), period);

  for (const BasisSetup& setup :
       {BasisSetup{Basis::walsh, n_walsh, symmetrize},
        BasisSetup{Basis::fourier, n_fourier, false}}) {
    const FloquetSolution sol = solve_in_basis(model, drive, setup, exact);
    const int rep = representative_with_max_component(sol, component);
    const std::string tag = basis_name(setup.basis);
    std::vector<cplx> amplitude(static_cast<std::size_t>(sol.n_modes));
    for (int m = 0; m < sol.n_modes; ++m) {
      const cplx u = sol.vectors(static_cast<long>(m) * sol.dim_h + component, rep);
      amplitude[static_cast<std::size_t>(m)] = u;
      const long long label = sol.mode_labels[static_cast<std::size_t>(m)];
      const long long seq =
          setup.basis == Basis::walsh && label >= 0
              ? sequency_of(wtable, static_cast<int>(label))
              : label;
      mode_rows.push_back(join_row({tag, std::to_string(m), std::to_string(label),
                                    std::to_string(seq), format_number(u.real()),
                                    format_number(u.imag()), format_number(std::norm(u))}));
    }
    for (int k = 0; k < trace_points; ++k) {
      const double t = period * k / trace_points;
      cplx value = 0.0;
      for (int m = 0; m < sol.n_modes; ++m) {
        const long long label = sol.mode_labels[static_cast<std::size_t>(m)];
        cplx f;
        if (setup.basis == Basis::walsh) {
          if (label < 0) continue;  // symmetrized-away direction
          const int j = static_cast<int>(static_cast<double>(wtable.size) * t / period);
          f = static_cast<double>(wtable.rows(static_cast<int>(label), j));
        } else {
          f = std::polar(1.0, static_cast<double>(label) * drive.omega() * t);
        }
        value += amplitude[static_cast<std::size_t>(m)] * f;
      }
      trace_rows.push_back(join_row({tag, format_number(t), format_number(value.real()),
                                     format_number(value.imag())}));
    }
  }

  const std::string modes_csv = out_dir + "/mode_profile_modes.csv";
  const std::string trace_csv = out_dir + "/mode_profile_trace.csv";
  const int lines_a =
      write_csv(modes_csv, "basis,slot,label,sequency,re,im,prob", mode_rows);
  const int lines_b = write_csv(trace_csv, "basis,t,re,im", trace_rows);
  json summary;
  summary["component"] = component;
  RunResult result{{modes_csv, trace_csv}, "", lines_a + lines_b};
  result.manifest = write_manifest(out_dir, "mode_profile", cfg, result.outputs, result.rows,
                                   workers, timer.ms(), summary);
  return result;
}

// --------------------------------------------------------------------------
// alias_demo: sampled DFT coefficients vs the folded analytic series
// --------------------------------------------------------------------------

RunResult run_alias_demo(const ExperimentConfig& cfg, const std::string& out_dir, int workers) {
  Timer timer;
  const double period = cfg.number("period", 1.0);
  const KickConvention conv = convention_from(cfg);
  const std::string drive_name = cfg.get("drive", "square_wave");
  const auto n_list = cfg.has("n_list") ? cfg.integer_list("n_list")
                                        : std::vector<long long>{8, 16, 32};
  const int k_max = static_cast<int>(cfg.integer("k_max", 20000));
  const double tolerance = cfg.number("tolerance", 1e-10);

  const auto row_fn = [&](int i) {
    const int n = static_cast<int>(n_list[static_cast<std::size_t>(i)]);
    const PeriodicDrive drive = make_drive(drive_name, period, conv);
    const FourierModeSet modes = build_fourier_modes(n, period);
    const Eigen::VectorXcd samples = sample_points(drive, n);
    const Eigen::VectorXcd sampled = dft_coefficients(samples, modes);
    const AliasFoldResult folded = alias_fold(
        [&](long long m) { return drive.fourier_coefficient(m); }, modes, k_max, tolerance);
    std::string lines;
    for (int m = 0; m < n; ++m) {
      if (m) lines += '\n';
      lines += join_row(
          {std::to_string(n), std::to_string(modes.modes[static_cast<std::size_t>(m)]),
           format_number(sampled(m).real()), format_number(sampled(m).imag()),
           format_number(folded.values(m).real()), format_number(folded.values(m).imag()),
           format_number(std::abs(sampled(m) - folded.values(m))),
           format_number(folded.remainder(m)), std::to_string(folded.converged ? 1 : 0)});
    }
    return lines;
  };

  const auto rows = parallel_rows(static_cast<int>(n_list.size()), workers, row_fn);
  const std::string csv = out_dir + "/alias_demo.csv";
  const int lines = write_csv(
      csv, "n,m,sampled_re,sampled_im,folded_re,folded_im,abs_diff,remainder,converged", rows);
  json summary;
  summary["k_max"] = k_max;
  RunResult result{{csv}, "", lines};
  result.manifest = write_manifest(out_dir, "alias_demo", cfg, result.outputs, lines, workers,
                                   timer.ms(), summary);
  return result;
}

// --------------------------------------------------------------------------
// n_scaling / omega_scaling: phase-error power laws in truncation size and
// drive frequency
// --------------------------------------------------------------------------

struct ScalingPoint {
  double err_med_w = kNan, err_med_f = kNan, err_max_w = kNan, err_max_f = kNan;
  int status = 0;
};

ScalingPoint scaling_point(const SpinModel& model, const PeriodicDrive& drive, int n_walsh,
                           int n_fourier, bool symmetrize) {
  ScalingPoint p;
  const ExactFloquetResult exact = exact_propagator(model, drive);
  try {
    const FloquetSolution w =
        solve_in_basis(model, drive, {Basis::walsh, n_walsh, symmetrize}, exact);
    const PhaseErrors pe = phase_error(w, exact);
    p.err_med_w = pe.median_abs;
    p.err_max_w = pe.max_abs;
  } catch (const std::exception&) {
    p.status |= 1;
  }
  try {
    const FloquetSolution f =
        solve_in_basis(model, drive, {Basis::fourier, n_fourier, false}, exact);
    const PhaseErrors pe = phase_error(f, exact);
    p.err_med_f = pe.median_abs;
    p.err_max_f = pe.max_abs;
  } catch (const std::exception&) {
    p.status |= 2;
  }
  return p;
}

json fit_or_null(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isfinite(y[i]) && y[i] > 0.0 && x[i] > 0.0) {
      fx.push_back(x[i]);
      fy.push_back(y[i]);
    }
  if (fx.size() < 3) return nullptr;
  const PowerLawFit fit = fit_power_law(fx, fy);
  json out;
  out["slope"] = fit.slope;
  out["intercept"] = fit.intercept;
  out["rms_residual"] = fit.rms_residual;
  return out;
}

RunResult run_n_scaling(const ExperimentConfig& cfg, const std::string& out_dir, int workers) {
  Timer timer;
  const int sites = static_cast<int>(cfg.integer("sites", 1));
  const double exchange = cfg.number("exchange", 1.0);
  const double omega = cfg.number("omega", 50.0);
  const double period = 2.0 * std::numbers::pi / omega;
  const double hz = resolve_hz(cfg, period, std::numbers::pi);
  const double hx = cfg.number("hx", 6.0);
  const bool symmetrize = cfg.flag("walsh_symmetrize", false);
  const KickConvention conv = convention_from(cfg);
  const std::string drive_name = cfg.get("drive", "square_wave");
  const auto n_list = cfg.has("n_list") ? cfg.integer_list("n_list")
                                        : std::vector<long long>{8, 16, 32, 64, 128};

  const SpinModel model = build_mfim(sites, exchange, hz, hx);
  std::vector<ScalingPoint> points(n_list.size());
  const auto row_fn = [&](int i) {
    const int n = static_cast<int>(n_list[static_cast<std::size_t>(i)]);
    const PeriodicDrive drive = make_drive(drive_name, period, conv);
    points[static_cast<std::size_t>(i)] = scaling_point(model, drive, n, n - 1, symmetrize);
    const ScalingPoint& p = points[static_cast<std::size_t>(i)];
    return join_row({std::to_string(n), std::to_string(n - 1), format_number(p.err_med_w),
                     format_number(p.err_med_f), format_number(p.err_max_w),
                     format_number(p.err_max_f), std::to_string(p.status)});
  };

  const auto rows = parallel_rows(static_cast<int>(n_list.size()), workers, row_fn);
  const std::string csv = out_dir + "/n_scaling.csv";
  const int lines = write_csv(csv,
                              "n_walsh,n_fourier,dtheta_walsh_median,dtheta_fourier_median,"
                              "dtheta_walsh_max,dtheta_fourier_max,status",
                              rows);
  std::vector<double> nw, nf, ew, ef;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    nw.push_back(static_cast<double>(n_list[i]));
    nf.push_back(static_cast<double>(n_list[i] - 1));
    ew.push_back(points[i].err_med_w);
    ef.push_back(points[i].err_med_f);
  }
  json summary;
  summary["walsh_fit"] = fit_or_null(nw, ew);
  summary["fourier_fit"] = fit_or_null(nf, ef);
  RunResult result{{csv}, "", lines};
  result.manifest = write_manifest(out_dir, "n_scaling", cfg, result.outputs, lines, workers,
                                   timer.ms(), summary);
  return result;
}

RunResult run_omega_scaling(const ExperimentConfig& cfg, const std::string& out_dir,
                            int workers) {
  Timer timer;
  const int sites = static_cast<int>(cfg.integer("sites", 1));
  const double exchange = cfg.number("exchange", 1.0);
  const double hz = cfg.number("hz", 1.0);
  const double hx = cfg.number("hx", 6.0);
  const int n_walsh = static_cast<int>(cfg.integer("n_walsh", 16));
  const int n_fourier = static_cast<int>(cfg.integer("n_fourier", n_walsh - 1));
  const bool symmetrize = cfg.flag("walsh_symmetrize", false);
  const KickConvention conv = convention_from(cfg);
  const std::string drive_name = cfg.get("drive", "square_wave");
  const auto omega_list = cfg.has("omega_list")
                              ? cfg.number_list("omega_list")
                              : std::vector<double>{25, 50, 100, 200, 400, 800};

  const SpinModel model = build_mfim(sites, exchange, hz, hx);
  std::vector<ScalingPoint> points(omega_list.size());
  const auto row_fn = [&](int i) {
    const double omega = omega_list[static_cast<std::size_t>(i)];
    const double period = 2.0 * std::numbers::pi / omega;
    const PeriodicDrive drive = make_drive(drive_name, period, conv);
    points[static_cast<std::size_t>(i)] =
        scaling_point(model, drive, n_walsh, n_fourier, symmetrize);
    const ScalingPoint& p = points[static_cast<std::size_t>(i)];
    return join_row({format_number(omega), format_number(p.err_med_w),
                     format_number(p.err_med_f), format_number(p.err_med_w / period),
                     format_number(p.err_med_f / period), std::to_string(p.status)});
  };

  const auto rows = parallel_rows(static_cast<int>(omega_list.size()), workers, row_fn);
  const std::string csv = out_dir + "/omega_scaling.csv";
  const int lines = write_csv(csv,
                              "omega,dtheta_walsh_median,dtheta_fourier_median,"
                              "deps_walsh_median,deps_fourier_median,status",
                              rows);
  std::vector<double> om, ew, ef, eew, eef;
  for (std::size_t i = 0; i < omega_list.size(); ++i) {
    om.push_back(omega_list[i]);
    ew.push_back(points[i].err_med_w);
    ef.push_back(points[i].err_med_f);
    const double period = 2.0 * std::numbers::pi / omega_list[i];
    eew.push_back(points[i].err_med_w / period);
    eef.push_back(points[i].err_med_f / period);
  }
  json summary;
  summary["walsh_theta_fit"] = fit_or_null(om, ew);
  summary["fourier_theta_fit"] = fit_or_null(om, ef);
  summary["walsh_energy_fit"] = fit_or_null(om, eew);
  summary["fourier_energy_fit"] = fit_or_null(om, eef);
  RunResult result{{csv}, "", lines};
  result.manifest = write_manifest(out_dir, "omega_scaling", cfg, result.outputs, lines,
                                   workers, timer.ms(), summary);
  return result;
}

// --------------------------------------------------------------------------
// hfe_check: two-tone Walsh schedule, remainder of the effective series vs
// the exact Floquet Hamiltonian across frequencies
// --------------------------------------------------------------------------

RunResult run_hfe_check(const ExperimentConfig& cfg, const std::string& out_dir, int workers) {
  Timer timer;
  const double bx = cfg.number("bx", 0.5);
  const double by = cfg.number("by", 0.25);
  const double bz = cfg.number("bz", 1.0);
  const int seq_x = static_cast<int>(cfg.integer("seq_x", 2));
  const int seq_y = static_cast<int>(cfg.integer("seq_y", 13));
  const int n_blocks = static_cast<int>(cfg.integer("n_blocks", 16));
  std::vector<double> omega_list;
  if (cfg.has("omega_list")) {
    omega_list = cfg.number_list("omega_list");
  } else {
    const double lo = cfg.number("omega_min", 1e2);
    const double hi = cfg.number("omega_max", 1e4);
    const int count = static_cast<int>(cfg.integer("omega_count", 9));
    for (int k = 0; k < count; ++k)
      omega_list.push_back(
          lo * std::pow(hi / lo, count == 1 ? 0.0 : static_cast<double>(k) / (count - 1)));
  }

  if ((n_blocks & (n_blocks - 1)) != 0 || n_blocks < 2)
    throw std::invalid_argument("n_blocks must be a power of two >= 2");
  if (seq_x >= n_blocks || seq_y >= n_blocks)
    throw std::invalid_argument("sequency labels must be < n_blocks");
  int log_n = 0;
  while ((1 << log_n) < n_blocks) ++log_n;

  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;

  const WalshBasis table = build_walsh_basis(log_n, 1.0);
  const int nat_x = natural_of(table, seq_x);
  const int nat_y = natural_of(table, seq_y);
  const auto schedule_fn = [&](double) {
    std::vector<Eigen::MatrixXcd> schedule;
    schedule.reserve(static_cast<std::size_t>(n_blocks));
    for (int j = 0; j < n_blocks; ++j)
      schedule.push_back(bz * sz + static_cast<double>(table.rows(nat_x, j)) * bx * sx +
                         static_cast<double>(table.rows(nat_y, j)) * by * sy);
    return schedule;
  };

  const RemainderScaling order0 = remainder_scaling(schedule_fn, omega_list, 0);
  const RemainderScaling order01 = remainder_scaling(schedule_fn, omega_list, 1);

  std::vector<std::string> rows;
  for (std::size_t i = 0; i < omega_list.size(); ++i)
    rows.push_back(join_row({format_number(omega_list[i]),
                             format_number(order0.remainders[i]),
                             format_number(order01.remainders[i])}));
  const std::string csv = out_dir + "/hfe_check.csv";
  const int lines = write_csv(csv, "omega,remainder_order0,remainder_order01", rows);

  // Closed-form cross-term prediction for the first-order correction at the
  // first listed frequency.
  const double period_ref = 2.0 * std::numbers::pi / omega_list.front();
  const EffectiveHamiltonian heff = walsh_heff(schedule_fn(period_ref), period_ref);
  const int hi = std::max(seq_x, seq_y);
  const int lo = std::min(seq_x, seq_y);
  const double f = fab(hi, lo, log_n).value();
  const Eigen::MatrixXcd op_hi = hi == seq_x ? (bx * sx).eval() : (by * sy).eval();
  const Eigen::MatrixXcd op_lo = lo == seq_x ? (bx * sx).eval() : (by * sy).eval();
  const Eigen::MatrixXcd predicted =
      cplx(0, 1) * period_ref * f * (op_hi * op_lo - op_lo * op_hi);
  const double deviation = (heff.order1 - predicted).cwiseAbs().maxCoeff();

  json summary;
  summary["slope_order0"] = order0.slope;
  summary["slope_order01"] = order01.slope;
  summary["order1_max_deviation_from_crossterm"] = deviation;
  summary["fab_value"] = f;
  RunResult result{{csv}, "", lines};
  result.manifest = write_manifest(out_dir, "hfe_check", cfg, result.outputs, lines, workers,
                                   timer.ms(), summary);
  return result;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                         int workers) {
  const std::string name = config.get("experiment");
  std::filesystem::create_directories(out_dir);
  const int pool = resolve_workers(workers);
  if (name == "spectrum") return run_spectrum(config, out_dir, pool);
  if (name == "error_map") return run_map(config, out_dir, pool, false);
  if (name == "entropy_map") return run_map(config, out_dir, pool, true);
  if (name == "mode_profile") return run_mode_profile(config, out_dir, pool);
  if (name == "alias_demo") return run_alias_demo(config, out_dir, pool);
  if (name == "n_scaling") return run_n_scaling(config, out_dir, pool);
  if (name == "omega_scaling") return run_omega_scaling(config, out_dir, pool);
  if (name == "hfe_check") return run_hfe_check(config, out_dir, pool);
  throw std::invalid_argument("unknown experiment: " + name);
}

}  // namespace wfl
