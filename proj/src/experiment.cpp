#include "hadfact/experiment.hpp"

#include "hadfact/baselines.hpp"
#include "hadfact/block_solvers.hpp"
#include "hadfact/io.hpp"
#include "hadfact/standard.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

namespace hadfact {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long parse_long(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long out = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw SpecError(line, key + ": expected an integer, got '" + v + "'");
  }
}

double parse_double(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw SpecError(line, key + ": expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw SpecError(line, key + ": expected true or false, got '" + v + "'");
}

Index positive_index(const std::string& v, int line, const std::string& key) {
  const long x = parse_long(v, line, key);
  if (x < 1) throw SpecError(line, key + " must be positive");
  return static_cast<Index>(x);
}

// Data and initializations shared by every run on one (seed, rank) pair.
struct DataItem {
  std::string dataset;
  std::uint64_t seed = 0;
  Index rank = 0;
  MatrixHandle x;
  std::string status = "ok";
  std::vector<std::optional<HadamardFactors>> inits;
  std::vector<double> init_seconds;
  std::vector<std::string> init_status;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolverConfig variant_config(const ExperimentSpec& spec, Variant v) {
  SolverConfig c;
  c.tau = spec.tau;
  c.kw = spec.kw;
  c.kh = spec.kh;
  c.max_iters = spec.max_iters;
  c.time_limit = spec.budget;
  c.tol = spec.tol;
  c.use_extrapolation = v == Variant::extrapolation || v == Variant::both;
  c.use_rescaling = v == Variant::rescaling || v == Variant::both;
  return c;
}

using GroupKey = std::tuple<std::string, std::uint64_t, Index, std::string, std::string>;

GroupKey group_of(const CompressionReport& r) {
  return {r.dataset, r.seed, r.rank, r.algorithm, r.variant};
}

// Marks the inits within kTieThreshold of the best error of each group.
void mark_best(std::vector<CompressionReport>& reports) {
  std::map<GroupKey, double> best;
  for (const auto& r : reports) {
    if (r.status != "ok") continue;
    auto [it, inserted] = best.emplace(group_of(r), r.relative_error);
    if (!inserted) it->second = std::min(it->second, r.relative_error);
  }
  for (auto& r : reports) {
    const auto it = best.find(group_of(r));
    if (it == best.end()) continue;
    r.group_best = it->second;
    r.best_init = r.status == "ok" && r.relative_error <= it->second + kTieThreshold;
  }
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw io::IoError("cannot write " + path);
  return out;
}

} // namespace

std::string to_string(Algorithm algo) {
  switch (algo) {
  case Algorithm::projbcd: return "projbcd";
  case Algorithm::manbcd: return "manbcd";
  case Algorithm::bcd: return "bcd";
  case Algorithm::rgd: return "rgd";
  case Algorithm::scaledgd: return "scaledgd";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::projbcd, Algorithm::manbcd, Algorithm::bcd, Algorithm::rgd,
                      Algorithm::scaledgd}) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + name +
                              "' (projbcd|manbcd|bcd|rgd|scaledgd)");
}

std::vector<Algorithm> default_algorithms() {
  return {Algorithm::projbcd, Algorithm::manbcd, Algorithm::bcd, Algorithm::rgd};
}

RunRecord run_algorithm(Algorithm algo, const MatrixHandle& x, Index r,
                        const HadamardFactors& init, const AlgorithmOptions& options) {
  SolverConfig config = options.config;
  if (algo == Algorithm::bcd) config.extrapolation = ExtrapolationParams::bcd_defaults();
  if (options.beta0) config.extrapolation.beta0 = *options.beta0;
  switch (algo) {
  case Algorithm::projbcd: return projbcd(x, r, init, config);
  case Algorithm::manbcd: return manbcd(x, r, init, config);
  case Algorithm::bcd: return bcd(x, r, init, config);
  case Algorithm::rgd: return rgd_standard(x, r, init, config);
  case Algorithm::scaledgd: return scaled_gd(x, r, init, config, options.gd_eta, options.gd_scaled);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::string to_string(Variant v) {
  switch (v) {
  case Variant::none: return "none";
  case Variant::extrapolation: return "extrapolation";
  case Variant::rescaling: return "rescaling";
  case Variant::both: return "both";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::none, Variant::extrapolation, Variant::rescaling, Variant::both}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown variant '" + name +
                              "' (none|extrapolation|rescaling|both)");
}

SpecError::SpecError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

ExperimentSpec parse_spec(std::istream& in) {
  ExperimentSpec spec;
  std::string raw;
  int line = 0;
  int keys = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw SpecError(line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw SpecError(line, "missing key");
    if (value.empty()) throw SpecError(line, key + ": missing value");
    ++keys;
    try {
      if (key == "name") {
        spec.name = value;
      } else if (key == "source") {
        if (value != "file") parse_synthetic(value);
        spec.source = value;
      } else if (key == "input") {
        spec.input = value;
        if (spec.source != "file") spec.source = "file";
      } else if (key == "rows") {
        spec.rows = positive_index(value, line, key);
      } else if (key == "cols") {
        spec.cols = positive_index(value, line, key);
      } else if (key == "size") {
        spec.rows = spec.cols = positive_index(value, line, key);
      } else if (key == "rank" || key == "ranks") {
        spec.ranks.clear();
        for (const auto& v : split_list(value)) spec.ranks.push_back(positive_index(v, line, key));
      } else if (key == "algorithms" || key == "algos") {
        spec.algorithms.clear();
        for (const auto& v : split_list(value)) {
          if (v == "all") {
            spec.algorithms = default_algorithms();
          } else {
            spec.algorithms.push_back(parse_algorithm(v));
          }
        }
      } else if (key == "inits") {
        spec.inits.clear();
        for (const auto& v : split_list(value)) {
          if (v == "all") {
            spec.inits = all_inits();
          } else {
            spec.inits.push_back(parse_init(v));
          }
        }
      } else if (key == "variants") {
        spec.variants.clear();
        for (const auto& v : split_list(value)) spec.variants.push_back(parse_variant(v));
      } else if (key == "seeds") {
        spec.seeds.clear();
        for (const auto& v : split_list(value)) {
          const long s = parse_long(v, line, key);
          if (s < 0) throw SpecError(line, "seeds must be nonnegative");
          spec.seeds.push_back(static_cast<std::uint64_t>(s));
        }
      } else if (key == "samples") {
        const Index n = positive_index(value, line, key);
        spec.seeds.clear();
        for (Index s = 1; s <= n; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
      } else if (key == "budget" || key == "time_limit") {
        spec.budget = parse_double(value, line, key);
        if (!(spec.budget > 0.0)) throw SpecError(line, key + " must be positive");
      } else if (key == "max_iters") {
        spec.max_iters = parse_long(value, line, key);
        if (spec.max_iters < 0) throw SpecError(line, "max_iters must be nonnegative");
      } else if (key == "tol") {
        spec.tol = parse_double(value, line, key);
      } else if (key == "tau") {
        spec.tau = parse_double(value, line, key);
        if (!(spec.tau > 0.0 && spec.tau < 2.0)) throw SpecError(line, "tau must lie in (0, 2)");
      } else if (key == "kw") {
        spec.kw = static_cast<int>(positive_index(value, line, key));
      } else if (key == "kh") {
        spec.kh = static_cast<int>(positive_index(value, line, key));
      } else if (key == "beta0") {
        spec.beta0 = parse_double(value, line, key);
        if (!(*spec.beta0 >= 0.0 && *spec.beta0 <= 1.0)) {
          throw SpecError(line, "beta0 must lie in [0, 1]");
        }
      } else if (key == "threads") {
        spec.threads = static_cast<int>(parse_long(value, line, key));
      } else if (key == "r_star") {
        spec.compute_r_star = parse_bool(value, line, key);
      } else if (key == "traces") {
        spec.keep_traces = parse_bool(value, line, key);
      } else if (key == "csv") {
        spec.csv = value;
      } else if (key == "summary_csv") {
        spec.summary_csv = value;
      } else if (key == "json") {
        spec.json = value;
      } else {
        throw SpecError(line, "unknown key '" + key + "'");
      }
    } catch (const SpecError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw SpecError(line, e.what());
    }
  }
  if (keys == 0) throw SpecError(line, "empty experiment spec");
  if (spec.source == "file" && spec.input.empty()) {
    throw SpecError(line, "source = file needs an input path");
  }
  if (spec.seeds.empty()) throw SpecError(line, "no seeds given");
  if (spec.ranks.empty()) throw SpecError(line, "no ranks given");
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::IoError("cannot open " + path);
  return parse_spec(in);
}

int effective_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int n = requested < 1 ? hw : std::min(requested, hw);
  if (const char* env = std::getenv("HADFACT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(1, n);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  if (spec.algorithms.empty() || spec.inits.empty() || spec.variants.empty()) return result;

  // Data and initializations first, so the timed runs share them.
  std::vector<DataItem> items;
  const bool from_file = spec.source == "file";
  const std::vector<std::uint64_t> seeds =
      from_file ? std::vector<std::uint64_t>{spec.seeds.front()} : spec.seeds;
  std::optional<MatrixHandle> file_data;
  std::string file_status = "ok";
  if (from_file) {
    try {
      file_data = io::read_matrix(spec.input);
    } catch (const std::exception& e) {
      file_status = std::string("data: ") + e.what();
    }
  }
  for (const auto seed : seeds) {
    for (const Index r : spec.ranks) {
      DataItem item;
      item.dataset = from_file ? std::filesystem::path(spec.input).filename().string() : spec.source;
      item.seed = seed;
      item.rank = r;
      try {
        if (from_file) {
          if (!file_data) throw std::runtime_error(file_status);
          item.x = *file_data;
        } else {
          item.x = gen_synthetic(parse_synthetic(spec.source), spec.rows, spec.cols, r, seed);
        }
      } catch (const std::exception& e) {
        item.status = e.what();
      }
      for (const InitKind k : spec.inits) {
        std::optional<HadamardFactors> f;
        std::string status = item.status;
        double secs = 0.0;
        if (item.status == "ok") {
          const auto t0 = std::chrono::steady_clock::now();
          try {
            f = initialize(k, item.x, r);
          } catch (const std::exception& e) {
            status = std::string("init: ") + e.what();
          }
          secs = seconds_since(t0);
        }
        item.inits.push_back(std::move(f));
        item.init_seconds.push_back(secs);
        item.init_status.push_back(status);
      }
      items.push_back(std::move(item));
    }
  }

  struct Task {
    std::size_t item, init;
    Algorithm algo;
    Variant variant;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < items.size(); ++d) {
    for (const Algorithm a : spec.algorithms) {
      for (const Variant v : spec.variants) {
        for (std::size_t k = 0; k < spec.inits.size(); ++k) tasks.push_back({d, k, a, v});
      }
    }
  }
  result.reports.resize(tasks.size());

  auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    const DataItem& item = items[task.item];
    CompressionReport& rep = result.reports[t];
    rep.dataset = item.dataset;
    rep.seed = item.seed;
    rep.rank = item.rank;
    rep.algorithm = to_string(task.algo);
    rep.init = to_string(spec.inits[task.init]);
    rep.variant = to_string(task.variant);
    rep.init_seconds = item.init_seconds[task.init];
    rep.status = item.init_status[task.init];
    if (rep.status != "ok") return;
    AlgorithmOptions options;
    options.config = variant_config(spec, task.variant);
    options.config.record_trace = true;
    options.beta0 = spec.beta0;
    try {
      RunRecord run = run_algorithm(task.algo, item.x, item.rank, *item.inits[task.init], options);
      rep.relative_error = run.best_error;
      rep.elapsed = run.elapsed;
      rep.iterations = run.iterations;
      rep.accepted = run.accepted;
      rep.stop = to_string(run.stop);
      rep.monotone = run.accepted_errors_nonincreasing();
      if (spec.keep_traces) rep.trace = std::move(run.trace);
    } catch (const std::exception& e) {
      rep.status = std::string("solver: ") + e.what();
    }
  };

  const int nthreads = std::min<int>(effective_threads(spec.threads),
                                     static_cast<int>(std::max<std::size_t>(1, tasks.size())));
  if (nthreads <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  mark_best(result.reports);
  // TSVD reference and r* per group, from the best-of-inits error.
  for (std::size_t d = 0; d < items.size(); ++d) {
    const DataItem& item = items[d];
    if (item.status != "ok") continue;
    const Index p = std::min(item.x.rows(), item.x.cols());
    const Index k = std::min(p, 2 * item.rank);
    double tsvd_2r = 0.0;
    try {
      tsvd_2r = tsvd_errors(item.x, k)(k);
    } catch (const std::exception&) {
      tsvd_2r = std::nan("");
    }
    std::map<GroupKey, RStar> cache;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (tasks[t].item != d) continue;
      CompressionReport& rep = result.reports[t];
      rep.tsvd_2r_error = tsvd_2r;
      if (!spec.compute_r_star || rep.status != "ok") continue;
      const GroupKey g = group_of(rep);
      auto it = cache.find(g);
      if (it == cache.end()) it = cache.emplace(g, r_star(item.x, item.rank, rep.group_best)).first;
      rep.r_star = it->second.r_star;
      rep.q_star = it->second.q_star;
    }
  }
  result.summary = summarize(spec, result.reports);
  return result;
}

std::vector<SummaryRow> summarize(const ExperimentSpec& spec,
                                  std::vector<CompressionReport>& reports) {
  mark_best(reports);
  using SummaryKey = std::tuple<std::string, Index, std::string, std::string>;
  struct Acc {
    std::map<std::uint64_t, const CompressionReport*> groups; // one report per seed
    std::map<std::uint64_t, std::vector<std::string>> winners;
  };
  std::map<SummaryKey, Acc> acc;
  std::vector<SummaryKey> order;
  for (const auto& r : reports) {
    if (r.status != "ok") continue;
    const SummaryKey key{r.dataset, r.rank, r.algorithm, r.variant};
    auto [it, inserted] = acc.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.groups.emplace(r.seed, &r);
    if (r.best_init) it->second.winners[r.seed].push_back(r.init);
  }
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const Acc& a = acc.at(key);
    SummaryRow row;
    std::tie(row.dataset, row.rank, row.algorithm, row.variant) = key;
    row.samples = static_cast<int>(a.groups.size());
    double sum = 0.0, sum_tsvd = 0.0, sum_r = 0.0, sum_q = 0.0;
    for (const auto& [seed, rep] : a.groups) {
      sum += rep->group_best;
      sum_tsvd += rep->tsvd_2r_error;
      sum_r += static_cast<double>(rep->r_star);
      sum_q += rep->q_star;
    }
    const double n = static_cast<double>(row.samples);
    row.mean_error = sum / n;
    row.mean_tsvd_2r = sum_tsvd / n;
    row.mean_r_star = sum_r / n;
    row.mean_q_star = sum_q / n;
    double var = 0.0;
    for (const auto& [seed, rep] : a.groups) {
      var += (rep->group_best - row.mean_error) * (rep->group_best - row.mean_error);
    }
    row.std_error = row.samples > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    row.init_wins.assign(spec.inits.size(), 0);
    for (const auto& [seed, names] : a.winners) {
      for (std::size_t k = 0; k < spec.inits.size(); ++k) {
        if (std::find(names.begin(), names.end(), to_string(spec.inits[k])) != names.end()) {
          ++row.init_wins[k];
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_reports_csv(const std::string& path, const std::vector<CompressionReport>& reports) {
  std::ofstream out = open_output(path);
  out << "dataset,seed,rank,algorithm,init,variant,relative_error,elapsed,init_seconds,"
         "iterations,accepted,stop,monotone,best_init,group_best,tsvd_2r_error,r_star,q_star,"
         "status\n";
  for (const auto& r : reports) {
    out << csv_text(r.dataset) << ',' << r.seed << ',' << r.rank << ',' << r.algorithm << ','
        << r.init << ',' << r.variant << ',' << csv_number(r.relative_error) << ','
        << csv_number(r.elapsed) << ',' << csv_number(r.init_seconds) << ',' << r.iterations
        << ',' << r.accepted << ',' << r.stop << ',' << (r.monotone ? 1 : 0) << ','
        << (r.best_init ? 1 : 0) << ',' << csv_number(r.group_best) << ','
        << csv_number(r.tsvd_2r_error) << ',' << r.r_star << ',' << csv_number(r.q_star) << ','
        << csv_text(r.status) << '\n';
  }
}

void write_summary_csv(const std::string& path, const ExperimentSpec& spec,
                       const std::vector<SummaryRow>& rows) {
  std::ofstream out = open_output(path);
  out << "dataset,rank,algorithm,variant,samples,mean_error,std_error,mean_tsvd_2r,"
         "mean_r_star,mean_q_star";
  for (const InitKind k : spec.inits) out << ",wins_" << to_string(k);
  out << '\n';
  for (const auto& r : rows) {
    out << csv_text(r.dataset) << ',' << r.rank << ',' << r.algorithm << ',' << r.variant << ','
        << r.samples << ',' << csv_number(r.mean_error) << ',' << csv_number(r.std_error) << ','
        << csv_number(r.mean_tsvd_2r) << ',' << csv_number(r.mean_r_star) << ','
        << csv_number(r.mean_q_star);
    for (const int w : r.init_wins) out << ',' << w;
    out << '\n';
  }
}

void write_json(const std::string& path, const ExperimentSpec& spec,
                const ExperimentResult& result) {
  using nlohmann::json;
  json doc;
  doc["name"] = spec.name;
  doc["source"] = spec.source;
  if (!spec.input.empty()) doc["input"] = spec.input;
  doc["budget"] = spec.budget;
  json runs = json::array();
  for (const auto& r : result.reports) {
    json j{{"dataset", r.dataset},
           {"seed", r.seed},
           {"rank", r.rank},
           {"algorithm", r.algorithm},
           {"init", r.init},
           {"variant", r.variant},
           {"relative_error", r.relative_error},
           {"elapsed", r.elapsed},
           {"init_seconds", r.init_seconds},
           {"iterations", r.iterations},
           {"accepted", r.accepted},
           {"stop", r.stop},
           {"monotone", r.monotone},
           {"best_init", r.best_init},
           {"group_best", r.group_best},
           {"tsvd_2r_error", r.tsvd_2r_error},
           {"r_star", r.r_star},
           {"q_star", r.q_star},
           {"status", r.status}};
    json trace = json::array();
    for (const auto& it : r.trace) {
      trace.push_back({it.iteration, it.relative_error, it.elapsed, it.beta, it.accepted});
    }
    j["trace"] = std::move(trace);
    runs.push_back(std::move(j));
  }
  doc["runs"] = std::move(runs);
  json summary = json::array();
  for (const auto& s : result.summary) {
    json wins = json::object();
    for (std::size_t k = 0; k < spec.inits.size() && k < s.init_wins.size(); ++k) {
      wins[to_string(spec.inits[k])] = s.init_wins[k];
    }
    summary.push_back({{"dataset", s.dataset},
                       {"rank", s.rank},
                       {"algorithm", s.algorithm},
                       {"variant", s.variant},
                       {"samples", s.samples},
                       {"mean_error", s.mean_error},
                       {"std_error", s.std_error},
                       {"mean_tsvd_2r", s.mean_tsvd_2r},
                       {"mean_r_star", s.mean_r_star},
                       {"mean_q_star", s.mean_q_star},
                       {"init_wins", wins}});
  }
  doc["summary"] = std::move(summary);
  std::ofstream out = open_output(path);
  out << doc.dump(1) << '\n';
}

void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  if (!spec.csv.empty()) write_reports_csv(spec.csv, result.reports);
  if (!spec.summary_csv.empty()) write_summary_csv(spec.summary_csv, spec, result.summary);
  if (!spec.json.empty()) write_json(spec.json, spec, result);
}

ExperimentSpec table1_spec(Index size, int samples, double budget) {
  ExperimentSpec spec;
  spec.name = "table1";
  spec.source = "generic";
  spec.rows = spec.cols = size;
  spec.ranks = {10};
  spec.algorithms = {Algorithm::manbcd, Algorithm::projbcd};
  spec.variants = {Variant::none, Variant::extrapolation, Variant::rescaling, Variant::both};
  spec.seeds.clear();
  for (int s = 1; s <= samples; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
  spec.budget = budget;
  return spec;
}

std::vector<ExperimentSpec> table2_specs(Index size, int samples, double budget,
                                         const std::vector<Index>& ranks) {
  std::vector<ExperimentSpec> out;
  for (const char* kind : {"generic", "lowrank", "hd"}) {
    ExperimentSpec spec;
    spec.name = std::string("table2-") + kind;
    spec.source = kind;
    spec.rows = spec.cols = size;
    spec.ranks = ranks;
    spec.seeds.clear();
    for (int s = 1; s <= samples; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
    spec.budget = budget;
    out.push_back(std::move(spec));
  }
  return out;
}

} // namespace hadfact
