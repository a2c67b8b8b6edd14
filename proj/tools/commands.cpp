#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "shiftk/asymptotics.hpp"
#include "shiftk/bounds.hpp"
#include "shiftk/errors.hpp"
#include "shiftk/kernels.hpp"
#include "shiftk/loss.hpp"
#include "shiftk/verify.hpp"

namespace shiftk::cli {

namespace {

using nlohmann::json;

// Reads fields from one JSON object and remembers which keys were used, so
// leftovers can be reported as unknown.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ValidationError(where_ + ": expected a JSON object");
  }

  template <typename T>
  void read(const char* key, T& target) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      target = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ValidationError(where_ + "." + key + ": " + e.what());
    }
  }

  // Accepts either a scalar or an array.
  template <typename T>
  void read_list(const char* key, std::vector<T>& target) {
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    if (v.is_array()) {
      read(key, target);
    } else {
      T one{};
      read(key, one);
      target = {one};
    }
    if (target.empty()) throw ValidationError(where_ + "." + key + ": empty list");
  }

  const json* child(const char* key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ValidationError(where_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("cannot parse " + path + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

// Runs fn(i) for every sweep index on the OpenMP pool and rethrows the first
// failure in sweep order.
template <typename Fn>
void parallel_sweep(std::size_t n, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct LossPoint {
  int S;
  int K;
  double rho;
  double alpha;
};

}  // namespace

LossConfig parse_loss_config(const json& j) {
  LossConfig c;
  Fields f(j, "loss");
  f.read_list("S", c.S);
  f.read_list("K", c.K);
  f.read_list("rho", c.rho);
  f.read_list("alpha", c.alpha);
  f.read("b", c.b_mode);
  std::string params;
  f.read("params", params);
  if (!params.empty()) c.params = params;
  f.read("nodes", c.nodes);
  f.read("oracle_tol", c.oracle_tol);
  f.read("oracle_max_terms", c.oracle_max_terms);
  f.finish();
  if (c.b_mode != "asymptotic" && c.b_mode != "optimal") {
    throw ValidationError("loss.b must be 'asymptotic' or 'optimal'");
  }
  if (c.nodes != 0 && c.nodes < 64) throw ValidationError("loss.nodes must be 0 (auto) or >= 64");
  if (!(c.oracle_tol > 0.0)) throw ValidationError("loss.oracle_tol must be positive");
  return c;
}

WindowConfig parse_window_config(const json& j) {
  WindowConfig c;
  Fields f(j, "window");
  f.read("S", c.S);
  f.read("K", c.K);
  f.read("alpha", c.alpha);
  f.read("omega_min", c.omega_min);
  f.read("omega_max", c.omega_max);
  f.read("points", c.points);
  f.finish();
  if (c.S < 1 || c.S % 2 == 0) throw ValidationError("window.S must be odd and positive");
  if (c.K < 1) throw ValidationError("window.K must be >= 1");
  if (!(c.alpha > 0.0)) throw ValidationError("window.alpha must be positive");
  if (!(c.omega_max > c.omega_min)) throw ValidationError("window.omega_max must exceed omega_min");
  if (c.points < 1) throw ValidationError("window.points must be >= 1");
  return c;
}

TrainPlan parse_train_plan(const json& j, bool full) {
  TrainPlan plan;
  if (full) {
    plan.data.N = 1500;
    plan.data.t_star = 200;
    plan.data.num_samples = 130000;
    plan.train.S = 127;
    plan.S_random = 128;
    plan.train.epochs = 60;
    plan.train.K_init = 1300;
    plan.K_init = {250, 500, 1000, 2000, 4000, 8000};
  }
  Fields f(j, "train");
  f.read("mode", plan.mode);
  if (full && plan.mode == "robustness") {
    plan.data.N = 2250;
    plan.data.t_star = 250;
    plan.data.num_samples = 150000;
    plan.train.K_init = 2000;
  }
  f.read_list("rho", plan.rho);
  f.read_list("K_init", plan.K_init);
  f.read_list("seeds", plan.seeds);
  f.read("S_random", plan.S_random);
  if (const json* d = f.child("dataset")) {
    Fields g(*d, "train.dataset");
    g.read("N", plan.data.N);
    g.read("t_star", plan.data.t_star);
    g.read("rho", plan.data.rho);
    g.read("num_samples", plan.data.num_samples);
    g.read("burn_in", plan.data.burn_in);
    g.finish();
  }
  if (const json* t = f.child("optimizer")) {
    Fields g(*t, "train.optimizer");
    std::string scheme = init_scheme_name(plan.train.init_scheme);
    g.read("init_scheme", scheme);
    plan.train.init_scheme = parse_init_scheme(scheme);
    g.read("K_init", plan.train.K_init);
    g.read("alpha", plan.train.alpha);
    g.read("S", plan.train.S);
    g.read("learning_rate", plan.train.learning_rate);
    g.read("weight_decay", plan.train.weight_decay);
    g.read("batch_size", plan.train.batch_size);
    g.read("epochs", plan.train.epochs);
    g.finish();
  }
  f.finish();
  if (plan.mode != "compare" && plan.mode != "robustness" && plan.mode != "single") {
    throw ValidationError("train.mode must be 'compare', 'robustness' or 'single'");
  }
  if (plan.S_random < 0) throw ValidationError("train.S_random must be >= 0");
  plan.data.validate();
  plan.train.validate();
  return plan;
}

std::string run_loss(const LossConfig& config) {
  std::optional<FilterParams> loaded;
  if (config.params) {
    std::ifstream in(*config.params);
    if (!in) throw ValidationError("cannot open params file " + config.params->string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("cannot parse params file: ") + e.what());
    }
    loaded = filter_params_from_json(j);
  }

  std::vector<LossPoint> points;
  const std::vector<int> sizes = loaded ? std::vector<int>{static_cast<int>(loaded->size())} : config.S;
  for (int S : sizes)
    for (int K : config.K)
      for (double rho : config.rho)
        for (double alpha : config.alpha) points.push_back({S, K, rho, alpha});
  for (const auto& pt : points) TaskSpec{pt.S, pt.K, pt.rho, pt.alpha}.validate();

  std::vector<std::string> rows(points.size());
  parallel_sweep(points.size(), [&](std::size_t i) {
    const auto& pt = points[i];
    const TaskSpec spec{pt.S, pt.K, pt.rho, pt.alpha};
    FilterParams p = loaded ? *loaded : shiftk_init(spec);
    if (config.b_mode == "optimal") {
      p = p.with_weights(optimal_b(PoleVector(p.a().begin(), p.a().end()), spec.K));
    }
    LossReport r;
    r.time_closed = spec.rho == 0.0 ? loss_white_closed(p, spec.K) : loss_auto_closed(p, spec.K, spec.rho);
    const std::size_t nodes = config.nodes ? config.nodes : adaptive_loss_nodes(p, spec.K, spec.rho);
    r.freq_quadrature = loss_freq_quadrature(p, spec.K, spec.rho, nodes);
    std::size_t cap = config.oracle_max_terms;
    if (cap == 0) cap = spec.rho == 0.0 ? 400000 : 20000;
    const auto horizon = oracle_horizon(p, spec.K, config.oracle_tol, cap);
    const auto oracle = loss_truncated_oracle(p, spec.K, spec.rho, horizon);
    r.oracle_truncated = oracle.value;
    r.oracle_tail_bound = oracle.tail_bound;
    if (spec.rho == 0.0) {
      r.lower_bound = lower_bound_white(spec.S, spec.K);
    } else {
      r.lower_bound = spec.K >= 1 ? lower_bound_auto(spec.S, spec.K, spec.rho) : 0.0;
    }
    if (!loaded && spec.rho == 0.0) {
      const auto up = upper_bound_asymptotic(spec);
      if (!up.out_of_regime) r.upper_asymptotic = up.value;
    }
    rows[i] = loss_csv_row(spec, r);
  });

  std::string out = loss_csv_header() + "\n";
  for (const auto& row : rows) out += row + "\n";
  return out;
}

std::string run_window(const WindowConfig& config) {
  const TaskSpec spec{config.S, config.K, 0.0, config.alpha};
  const FilterParams grid = shiftk_init(spec);
  const FilterParams solved =
      grid.with_weights(optimal_b(PoleVector(grid.a().begin(), grid.a().end()), config.K));
  const int T = (config.S - 1) / 2;
  const double step = (config.omega_max - config.omega_min) / static_cast<double>(config.points);

  std::vector<std::string> rows(config.points);
  parallel_sweep(config.points, [&](std::size_t j) {
    const double Omega = config.omega_min + (static_cast<double>(j) + 0.5) * step;
    const double omega = std::numbers::pi * Omega / config.K;
    cplx limit{std::nan(""), std::nan("")};
    try {
      limit = window_limit(Omega, T, config.alpha);
    } catch (const DomainError&) {
    }
    const cplx opt = transfer_function(solved, omega);
    rows[j] = window_csv_row(Omega, T, config.K, config.alpha, limit, transfer_function(grid, omega)) +
              "," + format_double(opt.real()) + "," + format_double(opt.imag());
  });

  std::string out = window_csv_header() + ",re_transfer_opt,im_transfer_opt\n";
  for (const auto& row : rows) out += row + "\n";
  return out;
}

TrainOutput run_train(const TrainPlan& plan) {
  struct Job {
    TrainConfig config;
    ARDatasetSpec data;
  };
  std::vector<Job> jobs;
  auto grid_config = [&](std::uint64_t seed, int K_init) {
    TrainConfig c = plan.train;
    c.init_scheme = InitScheme::shiftk_grid;
    c.K_init = K_init;
    c.seed = seed;
    return c;
  };
  auto with_seed = [&](double rho, std::uint64_t seed) {
    ARDatasetSpec d = plan.data;
    d.rho = rho;
    d.seed = seed;
    return d;
  };

  if (plan.mode == "compare") {
    for (double rho : plan.rho) {
      for (auto seed : plan.seeds) {
        TrainConfig random = plan.train;
        random.init_scheme = InitScheme::random_phase;
        random.seed = seed;
        if (plan.S_random > 0) random.S = plan.S_random;
        jobs.push_back({grid_config(seed, plan.train.K_init), with_seed(rho, seed)});
        jobs.push_back({random, with_seed(rho, seed)});
      }
    }
  } else if (plan.mode == "robustness") {
    for (int K : plan.K_init) {
      for (auto seed : plan.seeds) jobs.push_back({grid_config(seed, K), with_seed(plan.data.rho, seed)});
    }
  } else {
    TrainConfig c = plan.train;
    c.seed = plan.seeds.front();
    jobs.push_back({c, with_seed(plan.data.rho, plan.seeds.front())});
  }
  for (const auto& job : jobs) job.config.validate();

  TrainOutput out;
  std::vector<std::optional<TrainRun>> finished(jobs.size());
  parallel_sweep(jobs.size(), [&](std::size_t i) { finished[i] = train(jobs[i].config, jobs[i].data); });
  for (auto& run : finished) out.runs.push_back(std::move(*run));

  out.curves_csv = "run,init_scheme,K_init,rho,seed,epoch,mse\n";
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    const auto& run = out.runs[i];
    for (std::size_t e = 0; e < run.loss_curve.size(); ++e) {
      out.curves_csv += std::to_string(i) + "," + init_scheme_name(run.config.init_scheme) + "," +
                        std::to_string(run.config.K_init) + "," + format_double(run.data_spec.rho) +
                        "," + std::to_string(run.data_spec.seed) + "," + std::to_string(e + 1) + "," +
                        format_double(run.loss_curve[e]) + "\n";
    }
  }

  if (plan.mode == "compare") {
    out.summary_csv = "rho,seed,grid_mse,random_mse\n";
    for (std::size_t i = 0; i + 1 < out.runs.size(); i += 2) {
      out.summary_csv += format_double(out.runs[i].data_spec.rho) + "," +
                         std::to_string(out.runs[i].data_spec.seed) + "," +
                         format_double(out.runs[i].final_mse) + "," +
                         format_double(out.runs[i + 1].final_mse) + "\n";
    }
  } else {
    out.summary_csv = "init_scheme,K_init,rho,seed,final_mse\n";
    for (const auto& run : out.runs) {
      out.summary_csv += init_scheme_name(run.config.init_scheme) + "," +
                         std::to_string(run.config.K_init) + "," + format_double(run.data_spec.rho) +
                         "," + std::to_string(run.data_spec.seed) + "," + format_double(run.final_mse) +
                         "\n";
    }
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shift-K filter approximation by diagonal linear recurrences"};
  app.require_subcommand(1);
  CommonOptions common;
  double perturb = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "Output file (train: output directory)");
    sub->add_option("--seed", common.seed, "Seed override");
    sub->add_option("--threads", common.threads, "OpenMP thread count")->envname("SHIFTK_THREADS");
    sub->add_flag("--full", common.full, "Full-scale experiment sizes");
  };
  auto* loss_cmd = app.add_subcommand("loss", "Loss report sweep as CSV");
  auto* window_cmd = app.add_subcommand("window", "Transfer function against its window limit as CSV");
  auto* train_cmd = app.add_subcommand("train", "Copy-task training runs");
  auto* verify_cmd = app.add_subcommand("verify", "Randomized invariant suite");
  for (auto* sub : {loss_cmd, window_cmd, train_cmd, verify_cmd}) add_common(sub);
  verify_cmd->add_option("--perturb-cauchy", perturb, "Offset added to off-diagonal Cauchy entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  auto emit = [&](const std::string& text) {
    if (common.out.empty()) {
      out << text;
    } else {
      write_text(common.out, text);
    }
  };

  try {
    if (common.threads > 0) kernels::set_threads(common.threads);
    const json config = common.config.empty() ? json::object() : load_json_file(common.config);

    if (loss_cmd->parsed()) {
      auto lc = parse_loss_config(config);
      if (lc.params && lc.params->is_relative() && !common.config.empty()) {
        lc.params = std::filesystem::path(common.config).parent_path() / *lc.params;
      }
      emit(run_loss(lc));
    } else if (window_cmd->parsed()) {
      emit(run_window(parse_window_config(config)));
    } else if (train_cmd->parsed()) {
      TrainPlan plan = parse_train_plan(config, common.full);
      if (common.seed) plan.seeds = {*common.seed};
      const auto result = run_train(plan);
      if (common.out.empty()) {
        out << result.summary_csv;
      } else {
        const std::filesystem::path dir(common.out);
        std::filesystem::create_directories(dir);
        write_text(dir / "runs.json", json(result.runs).dump(2) + "\n");
        write_text(dir / "loss_curves.csv", result.curves_csv);
        write_text(dir / "summary.csv", result.summary_csv);
      }
    } else {
      VerifyOptions options;
      if (common.seed) options.seed = *common.seed;
      options.perturb_cauchy = perturb;
      const auto report = run_verification(options);
      emit(json(report).dump(2) + "\n");
      for (const auto& c : report.checks) {
        if (!c.passed) {
          err << "FAIL " << c.name << ": " << format_double(c.value) << " > "
              << format_double(c.threshold) << "\n";
        }
      }
      return report.passed() ? kOk : kVerifyFailed;
    }
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}

}  // namespace shiftk::cli
