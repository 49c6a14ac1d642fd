#include "spde/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "spde/operators.hpp"

#include <json.hpp>

namespace spde {
namespace {

constexpr double kLog2E = std::numbers::log2e;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Neumaier-compensated ordered sum: the reduction every worker count shares.
double compensated_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double next = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - next) + x : (x - next) + s;
    s = next;
  }
  return s + c;
}

struct MomentSummary {
  double mean, sd;  // sample mean and standard deviation
};

MomentSummary summarize(std::span<const double> xs) {
  int n = static_cast<int>(xs.size());
  double mean = compensated_sum(xs) / n;
  if (n < 2) return {mean, 0.0};
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  return {mean, std::sqrt(compensated_sum(sq) / (n - 1))};
}

// RMS error and its standard error from per-sample squared gaps:
// E = sqrt(mean sq), se(E) = se(mean sq) / (2E) by the delta method.
void fill_error_row(std::span<const double> sq, int samples, double& error, double& se) {
  MomentSummary m = summarize(sq);
  error = std::sqrt(std::max(m.mean, 0.0));
  se = error > 0.0 ? m.sd / std::sqrt(static_cast<double>(samples)) / (2.0 * error) : 0.0;
}

void fill_orders(ErrorTable& table) {
  if (table.error.size() < 2) return;
  for (double e : table.error)
    if (!(e > 0.0)) return;  // degenerate (e.g. zero-noise linear runs)
  table.order = estimate_order(table.error);
  std::vector<double> rel(table.error.size());
  for (std::size_t i = 0; i < table.error.size(); ++i)
    rel[i] = table.error_stderr[i] / table.error[i];
  for (std::size_t i = 0; i + 1 < table.error.size(); ++i)
    table.order_stderr.push_back(kLog2E * std::hypot(rel[i], rel[i + 1]));
  double sum = 0.0;
  for (double o : table.order) sum += o;
  table.mean_order = sum / static_cast<double>(table.order.size());
  table.mean_order_stderr =
      kLog2E * std::hypot(rel.front(), rel.back()) / static_cast<double>(table.order.size());
}

struct RunSetup {
  NoiseSpectrum q;
  InitialDatum datum;
  SchemeConfig scheme;
};

RunSetup make_setup(const ExperimentConfig& cfg) {
  validate_config(cfg);
  SchemeConfig scheme;
  scheme.variant = variant_from_config(cfg.variant);
  scheme.drift = drift_registry(cfg.drift);
  scheme.oversample = cfg.oversample;
  scheme.standard_first_step = cfg.standard_first_step;
  return {spectrum_from_config(cfg.spectrum), InitialDatum::by_name(cfg.datum), scheme};
}

}  // namespace

std::vector<double> estimate_order(std::span<const double> errors) {
  if (errors.size() < 2) throw ValidationError("estimate_order: need at least two errors");
  for (double e : errors)
    if (!(e > 0.0)) throw ValidationError("estimate_order: errors must be strictly positive");
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i)
    orders.push_back(std::log2(errors[i] / errors[i + 1]));
  return orders;
}

void for_each_sample(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(count, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ErrorTable run_spatial_convergence(const ExperimentConfig& cfg) {
  RunSetup setup = make_setup(cfg);
  std::vector<int> M_list = cfg.M_list;
  std::sort(M_list.begin(), M_list.end());

  // Every row solution plus its 2M refinement partner, on one shared mesh.
  std::vector<int> solve_set = M_list;
  for (int M : M_list) solve_set.push_back(2 * M);
  std::sort(solve_set.begin(), solve_set.end());
  solve_set.erase(std::unique(solve_set.begin(), solve_set.end()), solve_set.end());
  int M_top = solve_set.back();

  GradedMesh mesh =
      graded_mesh(cfg.T, steps_from_tau(cfg.reference_tau, cfg.T, cfg.gamma), cfg.gamma);
  std::map<int, StepTables> tables;
  for (int M : solve_set) tables.emplace(M, StepTables(mesh, M));

  int I = cfg.samples;
  std::vector<std::vector<double>> sq(M_list.size(), std::vector<double>(I));
  for_each_sample(I, resolve_workers(cfg), [&](int i) {
    IncrementPack pack =
        sample_increments(mesh, M_top, cfg.master_seed, static_cast<std::uint64_t>(i));
    // One full-width increment per step; each resolution reads its mode prefix.
    std::vector<SpectralField> inc;
    inc.reserve(static_cast<std::size_t>(mesh.steps()));
    for (int n = 1; n <= mesh.steps(); ++n)
      inc.push_back(convolution_increment(pack, setup.q, n, M_top));
    std::map<int, SpectralField> solution;
    for (int M : solve_set) {
      auto supplier = [&inc, M](int n) {
        return project_truncate(inc[static_cast<std::size_t>(n - 1)], M);
      };
      solution.emplace(M, solve_path_driven(initial_state(setup.datum, M), mesh, tables.at(M),
                                            setup.scheme, supplier));
    }
    for (std::size_t r = 0; r < M_list.size(); ++r) {
      double gap = l2_norm(sub(solution.at(M_list[r]), solution.at(2 * M_list[r])));
      sq[r][static_cast<std::size_t>(i)] = gap * gap;
    }
  });

  ErrorTable table;
  table.axis = "M";
  table.samples = I;
  for (std::size_t r = 0; r < M_list.size(); ++r) {
    table.resolution.push_back(static_cast<double>(M_list[r]));
    double e, se;
    fill_error_row(sq[r], I, e, se);
    table.error.push_back(e);
    table.error_stderr.push_back(se);
  }
  fill_orders(table);
  return table;
}

ErrorTable run_temporal_convergence(const ExperimentConfig& cfg) {
  RunSetup setup = make_setup(cfg);
  std::vector<double> tau_list = cfg.tau_list;
  std::sort(tau_list.begin(), tau_list.end(), std::greater<>());

  // Row tau solves with N = steps_from_tau(tau) steps and M = N modes. The
  // rows form one dyadic chain anchored at the coarsest tau so every mesh
  // nests in the finest and a single increment pack can drive them all.
  std::vector<int> N_list;
  int N_0 = steps_from_tau(tau_list.front(), cfg.T, cfg.gamma);
  for (double tau : tau_list) {
    double ratio = tau_list.front() / tau;
    auto r = static_cast<long long>(std::llround(ratio));
    if (r < 1 || std::abs(ratio - static_cast<double>(r)) > 1e-9)
      throw ValidationError("run_temporal_convergence: step sizes must divide the coarsest");
    N_list.push_back(N_0 * static_cast<int>(r));
  }

  std::vector<int> solve_set = N_list;
  for (int N : N_list) solve_set.push_back(2 * N);
  std::sort(solve_set.begin(), solve_set.end());
  solve_set.erase(std::unique(solve_set.begin(), solve_set.end()), solve_set.end());
  int N_fine = solve_set.back();

  GradedMesh fine = graded_mesh(cfg.T, N_fine, cfg.gamma);
  std::map<int, GradedMesh> meshes;
  std::map<int, StepTables> tables;
  for (int N : solve_set) {
    meshes.emplace(N, graded_mesh(cfg.T, N, cfg.gamma));
    tables.emplace(N, StepTables(meshes.at(N), N));  // M tied to N
  }

  int I = cfg.samples;
  std::vector<std::vector<double>> sq(N_list.size(), std::vector<double>(I));
  for_each_sample(I, resolve_workers(cfg), [&](int i) {
    IncrementPack pack =
        sample_increments(fine, N_fine, cfg.master_seed, static_cast<std::uint64_t>(i));
    std::map<int, SpectralField> solution;
    for (int N : solve_set) {
      int span = N_fine / N;
      auto supplier = [&pack, &setup, span, N](int n) {
        return aggregate_increments(pack, setup.q, (n - 1) * span, span, N);
      };
      solution.emplace(N, solve_path_driven(initial_state(setup.datum, N), meshes.at(N),
                                            tables.at(N), setup.scheme, supplier));
    }
    for (std::size_t r = 0; r < N_list.size(); ++r) {
      double gap = l2_norm(sub(solution.at(N_list[r]), solution.at(2 * N_list[r])));
      sq[r][static_cast<std::size_t>(i)] = gap * gap;
    }
  });

  ErrorTable table;
  table.axis = "tau";
  table.samples = I;
  for (std::size_t r = 0; r < tau_list.size(); ++r) {
    table.resolution.push_back(tau_list[r]);
    double e, se;
    fill_error_row(sq[r], I, e, se);
    table.error.push_back(e);
    table.error_stderr.push_back(se);
  }
  fill_orders(table);
  return table;
}

std::string render_table_csv(const ErrorTable& table) {
  std::string out = "resolution,error,stderr,samples\n";
  if (!table.axis.empty()) out += "# axis," + table.axis + "\n";
  for (std::size_t i = 0; i < table.resolution.size(); ++i)
    out += fmt(table.resolution[i]) + "," + fmt(table.error[i]) + "," +
           fmt(table.error_stderr[i]) + "," + std::to_string(table.samples) + "\n";
  for (std::size_t i = 0; i < table.order.size(); ++i)
    out += "# order," + fmt(table.resolution[i]) + "," + fmt(table.order[i]) + "," +
           fmt(table.order_stderr[i]) + "\n";
  if (!table.order.empty())
    out += "# mean_order," + fmt(table.mean_order) + "," + fmt(table.mean_order_stderr) + "\n";
  return out;
}

ErrorTable parse_table_csv(const std::string& text) {
  ErrorTable table;
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != "resolution,error,stderr,samples")
    throw ValidationError("parse_table_csv: bad header");
  auto fields = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream fs(s);
    std::string f;
    while (std::getline(fs, f, ',')) out.push_back(f);
    return out;
  };
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    auto f = fields(line);
    if (f[0] == "# axis") {
      table.axis = f.size() > 1 ? f[1] : "";
    } else if (f[0] == "# order") {
      table.order.push_back(std::stod(f[2]));
      table.order_stderr.push_back(std::stod(f[3]));
    } else if (f[0] == "# mean_order") {
      table.mean_order = std::stod(f[1]);
      table.mean_order_stderr = std::stod(f[2]);
    } else {
      if (f.size() != 4) throw ValidationError("parse_table_csv: bad row '" + line + "'");
      table.resolution.push_back(std::stod(f[0]));
      table.error.push_back(std::stod(f[1]));
      table.error_stderr.push_back(std::stod(f[2]));
      table.samples = std::stoi(f[3]);
    }
  }
  return table;
}

std::string render_sidecar_json(const ErrorTable& table, const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["version"] = kCodeVersion;
  j["axis"] = table.axis;
  j["samples"] = table.samples;
  nlohmann::ordered_json c;
  c["T"] = cfg.T;
  c["gamma"] = cfg.gamma;
  c["spectrum"] = cfg.spectrum;
  c["datum"] = cfg.datum;
  c["variant"] = cfg.variant;
  c["drift"] = cfg.drift;
  c["M_list"] = cfg.M_list;
  c["tau_list"] = cfg.tau_list;
  c["reference_tau"] = cfg.reference_tau;
  c["samples"] = cfg.samples;
  c["master_seed"] = cfg.master_seed;
  c["oversample"] = cfg.oversample;
  c["workers"] = cfg.workers;
  if (std::isfinite(cfg.beta)) c["beta"] = cfg.beta;
  c["standard_first_step"] = cfg.standard_first_step;
  c["allow_gamma_violation"] = cfg.allow_gamma_violation;
  j["config"] = c;
  return j.dump(2) + "\n";
}

void emit_report(const ErrorTable& table, const ExperimentConfig& cfg,
                 const std::string& csv_path) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw ValidationError("emit_report: cannot write '" + csv_path + "'");
  csv << render_table_csv(table);
  std::ofstream meta(csv_path + ".meta.json", std::ios::binary);
  if (!meta) throw ValidationError("emit_report: cannot write sidecar for '" + csv_path + "'");
  meta << render_sidecar_json(table, cfg);
}

}  // namespace spde
