#include "epos/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "epos/csf.hpp"
#include "epos/dataset.hpp"
#include "epos/error.hpp"
#include "epos/invariants.hpp"
#include "epos/io.hpp"

namespace epos {

MLPConfig StageConfig::mlp(std::size_t input_dim) const {
  MLPConfig m;
  m.input_dim = input_dim;
  m.hidden = hidden;
  m.use_batchnorm = use_batchnorm;
  m.dropout_rate = dropout_rate;
  m.seed = seed;
  return m;
}

RunConfig default_run_config() {
  RunConfig c;
  c.stage1.seed = 1;
  c.stage1.train.loss = LossKind::cross_entropy;
  c.stage1.train.fp_weight = 1.0;
  c.stage1.train.seed = 3;
  c.stage2.seed = 2;
  c.stage2.dropout_rate = 0.2;
  c.stage2.train.loss = LossKind::weighted_bce;
  c.stage2.train.fp_weight = 20.0;
  c.stage2.train.seed = 3;
  return c;
}

void apply_seed(RunConfig& c, std::uint64_t seed) {
  c.stage1.seed = seed;
  c.stage2.seed = seed + 1;
  // Both stages share the split, which is drawn from the train seed.
  c.stage1.train.seed = seed + 2;
  c.stage2.train.seed = seed + 2;
}

namespace {

nlohmann::json stage_json(const StageConfig& s) {
  nlohmann::json t = to_json(s.train);
  return {{"hidden", s.hidden},
          {"use_batchnorm", s.use_batchnorm},
          {"dropout_rate", s.dropout_rate},
          {"seed", s.seed},
          {"train", std::move(t)}};
}

// Strict reader: tracks consumed keys so leftovers can be reported.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError("config: \"" + display() + "\" must be an object");
  }

  template <class T>
  T get(const std::string& key) {
    const nlohmann::json& v = at(key);
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("config: key \"" + name(key) + "\" has the wrong type");
    }
  }

  Reader child(const std::string& key) { return Reader(at(key), name(key)); }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ValidationError("config: unknown key \"" + name(k) + "\"");
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const nlohmann::json& at(const std::string& key) {
    if (!j_.contains(key)) throw ValidationError("config: missing key \"" + name(key) + "\"");
    used_.insert(key);
    return j_.at(key);
  }
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> used_;
};

TrainConfig read_train(Reader r) {
  TrainConfig c;
  c.epochs = r.get<int>("epochs");
  c.batch_size = r.get<std::size_t>("batch_size");
  c.learning_rate = r.get<double>("learning_rate");
  c.beta1 = r.get<double>("beta1");
  c.beta2 = r.get<double>("beta2");
  c.epsilon = r.get<double>("epsilon");
  c.loss = parse_loss_kind(r.get<std::string>("loss"));
  c.fp_weight = r.get<double>("fp_weight");
  c.train_fraction = r.get<double>("train_fraction");
  c.val_fraction = r.get<double>("val_fraction");
  c.test_fraction = r.get<double>("test_fraction");
  c.stratify = r.get<bool>("stratify");
  c.patience = r.get<int>("patience");
  c.seed = r.get<std::uint64_t>("seed");
  r.finish();
  c.validate();
  return c;
}

StageConfig read_stage(Reader r) {
  StageConfig s;
  s.hidden = r.get<std::vector<std::size_t>>("hidden");
  s.use_batchnorm = r.get<bool>("use_batchnorm");
  s.dropout_rate = r.get<double>("dropout_rate");
  s.seed = r.get<std::uint64_t>("seed");
  s.train = read_train(r.child("train"));
  r.finish();
  s.mlp(1).validate();
  return s;
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
  return {{"n", c.n},
          {"n_min", c.n_min},
          {"input_graph6", c.input_graph6},
          {"out_dir", c.out_dir},
          {"feature_schema_version", c.feature_schema_version},
          {"jobs", c.jobs},
          {"stage1", stage_json(c.stage1)},
          {"stage2", stage_json(c.stage2)},
          {"saliency", {{"top_k", c.top_k}, {"split", c.saliency_split}, {"target", to_string(c.saliency_target)}}},
          {"threshold", {{"target_precision", c.target_precision}}},
          {"eda",
           {{"max_clauses", c.eda.max_clauses},
            {"min_support_fraction", c.eda.min_support_fraction},
            {"num_bins", c.eda.num_bins},
            {"max_cuts", c.eda.max_cuts},
            {"top_features", c.eda.top_features},
            {"extra_features", c.eda.extra_features},
            {"claw_contractible_column", c.eda.claw_contractible_column},
            {"pair_cross_check", c.eda.pair_cross_check}}},
          {"certificates", {{"witness_family", to_string(c.witness_family)}}},
          {"verify", {{"conditions", c.verify_conditions}}}};
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  Reader r(j, "");
  RunConfig c;
  c.n = r.get<int>("n");
  c.n_min = r.get<int>("n_min");
  c.input_graph6 = r.get<std::string>("input_graph6");
  c.out_dir = r.get<std::string>("out_dir");
  c.feature_schema_version = r.get<int>("feature_schema_version");
  c.jobs = r.get<int>("jobs");
  c.stage1 = read_stage(r.child("stage1"));
  c.stage2 = read_stage(r.child("stage2"));
  {
    Reader s = r.child("saliency");
    c.top_k = s.get<std::size_t>("top_k");
    c.saliency_split = s.get<std::string>("split");
    c.saliency_target = parse_saliency_target(s.get<std::string>("target"));
    s.finish();
  }
  {
    Reader t = r.child("threshold");
    c.target_precision = t.get<double>("target_precision");
    t.finish();
  }
  {
    Reader e = r.child("eda");
    c.eda.max_clauses = e.get<int>("max_clauses");
    c.eda.min_support_fraction = e.get<double>("min_support_fraction");
    c.eda.num_bins = e.get<int>("num_bins");
    c.eda.max_cuts = e.get<std::size_t>("max_cuts");
    c.eda.top_features = e.get<std::size_t>("top_features");
    c.eda.extra_features = e.get<std::vector<std::string>>("extra_features");
    c.eda.claw_contractible_column = e.get<bool>("claw_contractible_column");
    c.eda.pair_cross_check = e.get<std::size_t>("pair_cross_check");
    e.finish();
  }
  {
    Reader w = r.child("certificates");
    c.witness_family = parse_witness_family(w.get<std::string>("witness_family"));
    w.finish();
  }
  {
    Reader v = r.child("verify");
    c.verify_conditions = v.get<std::vector<std::string>>("conditions");
    v.finish();
  }
  r.finish();

  if (c.input_graph6.empty() && (c.n_min < 1 || c.n_min > c.n || c.n > 9))
    throw ValidationError("config: need 1 <= n_min <= n <= 9");
  if (c.feature_schema_version != kFeatureSchemaVersion)
    throw ValidationError("config: feature_schema_version " + std::to_string(c.feature_schema_version) +
                          " is not supported (expected " + std::to_string(kFeatureSchemaVersion) + ")");
  if (c.jobs < 1) throw ValidationError("config: jobs must be >= 1");
  if (c.top_k < 1 || c.top_k > kFeatureCount) throw ValidationError("config: saliency.top_k must lie in 1..44");
  if (c.saliency_split != "all" && c.saliency_split != "train" && c.saliency_split != "val" && c.saliency_split != "test")
    throw ValidationError("config: saliency.split must be all, train, val or test");
  if (!(c.target_precision >= 0 && c.target_precision <= 1))
    throw ValidationError("config: threshold.target_precision must lie in [0, 1]");
  if (c.eda.max_clauses < 1) throw ValidationError("config: eda.max_clauses must be >= 1");
  if (!(c.eda.min_support_fraction >= 0 && c.eda.min_support_fraction <= 1))
    throw ValidationError("config: eda.min_support_fraction must lie in [0, 1]");
  if (c.eda.num_bins < 1) throw ValidationError("config: eda.num_bins must be >= 1");
  if (c.eda.max_cuts < 2) throw ValidationError("config: eda.max_cuts must be >= 2");
  for (const auto& cond : c.verify_conditions) parse_condition(cond);
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  try {
    return run_config_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw InternalError("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = SIZE_MAX;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct Graph6Line {
  std::string text;
  Graph graph;
};

std::vector<Graph6Line> read_graph6_lines(const fs::path& path) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  std::vector<Graph6Line> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) throw ValidationError(path.string() + ":" + std::to_string(i + 1) + ": empty line");
    try {
      out.push_back({std::string(lines[i]), parse_graph6(lines[i])});
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) { write_file_atomic(path, text); }

void write_json(const fs::path& path, const nlohmann::json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

}  // namespace

std::vector<Graph> read_graph6_file(const fs::path& path) {
  std::vector<Graph> out;
  for (auto& l : read_graph6_lines(path)) out.push_back(std::move(l.graph));
  return out;
}

std::vector<std::string> read_name_list(const fs::path& path) {
  std::vector<std::string> out;
  const std::string text = read_file(path);
  for (auto line : split_lines(text))
    if (!line.empty()) out.emplace_back(line);
  if (out.empty()) throw ValidationError(path.string() + ": no feature names");
  return out;
}

std::size_t cmd_gen(int n, const fs::path& out) { return cmd_gen(n, n, out); }

std::size_t cmd_gen(int n_min, int n_max, const fs::path& out) {
  if (n_min < 1 || n_min > n_max) throw ValidationError("gen: need 1 <= n_min <= n");
  std::string text;
  std::size_t count = 0;
  for (int n = n_min; n <= n_max; ++n) {
    enumerate_connected_graphs(n, [&](const Graph& g) {
      text += encode_graph6(g);
      text += '\n';
      ++count;
    });
  }
  write_text(out, text);
  return count;
}

namespace {

std::string cache_line(const std::string& graph6, const SymFunc& e) {
  std::string line = graph6 + ",";
  for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
    if (i) line += ';';
    line += std::to_string(e.coeffs[i]);
  }
  return line;
}

// Parses the cache, stopping at the first malformed line (an interrupted append).
std::unordered_map<std::string, SymFunc> load_cache(const fs::path& path, std::size_t& valid_bytes) {
  std::unordered_map<std::string, SymFunc> cache;
  valid_bytes = 0;
  if (!fs::exists(path)) return cache;
  const std::string text = read_file(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    const std::string_view line(text.data() + pos, nl - pos);
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) break;
    try {
      const std::string g6(line.substr(0, comma));
      const Graph g = parse_graph6(g6);
      SymFunc e = SymFunc::zero(g.order(), Basis::elementary);
      std::vector<std::string_view> coeffs;
      std::string_view rest = line.substr(comma + 1);
      while (true) {
        const std::size_t semi = rest.find(';');
        coeffs.push_back(rest.substr(0, semi));
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
      }
      if (coeffs.size() != e.coeffs.size()) break;
      bool ok = true;
      for (std::size_t i = 0; i < coeffs.size() && ok; ++i) {
        std::size_t used = 0;
        const std::string s(coeffs[i]);
        e.coeffs[i] = std::stoll(s, &used);
        ok = used == s.size() && !s.empty();
      }
      if (!ok) break;
      cache.emplace(g6, std::move(e));
    } catch (const std::exception&) {
      break;
    }
    pos = nl + 1;
    valid_bytes = pos;
  }
  return cache;
}

}  // namespace

LabelSummary cmd_label(const fs::path& in, const fs::path& out, int jobs) {
  const auto lines = read_graph6_lines(in);
  fs::path cache_path = out;
  cache_path += ".cache";
  std::size_t valid = 0;
  auto cache = load_cache(cache_path, valid);
  if (fs::exists(cache_path) && valid != fs::file_size(cache_path)) {
    // Drop a torn trailing line before appending.
    write_file_atomic(cache_path, read_file(cache_path).substr(0, valid));
  }

  std::vector<std::size_t> missing;
  std::set<std::string> queued;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (!cache.count(lines[i].text) && queued.insert(lines[i].text).second) missing.push_back(i);

  LabelSummary summary;
  summary.total = lines.size();
  summary.computed = missing.size();
  summary.cached = lines.size() - missing.size();
  if (!missing.empty()) {
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream app(cache_path, std::ios::binary | std::ios::app);
    if (!app) throw ValidationError("cannot open label cache " + cache_path.string());
    constexpr std::size_t chunk = 1024;
    for (std::size_t start = 0; start < missing.size(); start += chunk) {
      const std::size_t end = std::min(missing.size(), start + chunk);
      std::vector<SymFunc> results(end - start);
      parallel_for(end - start, jobs, [&](std::size_t k) { results[k] = csf_e(lines[missing[start + k]].graph); });
      std::string block;
      for (std::size_t k = 0; k < results.size(); ++k) {
        block += cache_line(lines[missing[start + k]].text, results[k]) + "\n";
        cache.emplace(lines[missing[start + k]].text, std::move(results[k]));
      }
      app << block;
      app.flush();
      if (!app) throw ValidationError("write failed for label cache " + cache_path.string());
    }
  }

  std::string text = label_header() + "\n";
  for (const auto& l : lines) {
    const LabelRecord rec = label_from_e(l.text, cache.at(l.text));
    summary.positive += rec.e_positive ? 1 : 0;
    text += label_row(rec) + "\n";
  }
  write_text(out, text);
  return summary;
}

std::size_t cmd_featurize(const fs::path& labels, const fs::path& out, int jobs) {
  const auto records = labels_from_csv(read_file(labels), labels.string());
  Dataset ds;
  ds.feature_names = feature_schema().names();
  ds.features = Matrix(records.size(), kFeatureCount);
  std::vector<Graph> graphs(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      graphs[i] = parse_graph6(records[i].graph6);
    } catch (const ValidationError& e) {
      throw ValidationError(labels.string() + ":" + std::to_string(i + 2) + ": " + e.what());
    }
    ds.graph6.push_back(records[i].graph6);
    ds.labels.push_back(records[i].e_positive ? 1 : 0);
  }
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    const FeatureVector f = compute_features(graphs[i]);
    std::copy(f.values.begin(), f.values.end(), ds.features.row(i));
  });
  write_text(out, dataset_to_csv(ds));
  return records.size();
}

namespace {

nlohmann::json metrics_report(const std::string& split, double threshold, const Metrics& m) {
  nlohmann::json j = to_json(m);
  j["split"] = split;
  j["threshold"] = threshold;
  return j;
}

std::vector<int> pick(const std::vector<int>& v, const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(v[i]);
  return out;
}

struct StageData {
  Split split;
  Scaler scaler;
  Matrix train, val, test;
  std::vector<int> y_train, y_val, y_test;
};

StageData prepare(const Dataset& ds, const std::vector<std::string>& names, const TrainConfig& tc) {
  StageData d;
  d.split = split_indices(ds.labels, tc.train_fraction, tc.val_fraction, tc.test_fraction, tc.stratify, tc.seed);
  const Matrix x = ds.columns(names);
  const Matrix xtr = x.select_rows(d.split.train);
  d.scaler = standardize_fit(xtr);
  d.train = standardize_apply(d.scaler, xtr);
  d.val = standardize_apply(d.scaler, x.select_rows(d.split.val));
  d.test = standardize_apply(d.scaler, x.select_rows(d.split.test));
  d.y_train = pick(ds.labels, d.split.train);
  d.y_val = pick(ds.labels, d.split.val);
  d.y_test = pick(ds.labels, d.split.test);
  return d;
}

std::string history_csv(const std::vector<EpochRecord>& h) {
  std::string out = "epoch,train_loss,val_loss,val_accuracy,val_precision,val_recall,val_f1\n";
  for (const auto& e : h) {
    out += std::to_string(e.epoch) + "," + format_double(e.train_loss) + "," + format_double(e.val_loss) + "," +
           format_double(e.val.accuracy) + "," + format_double(e.val.precision) + "," + format_double(e.val.recall) +
           "," + format_double(e.val.f1) + "\n";
  }
  return out;
}

nlohmann::json split_sizes(const Split& s) {
  return {{"train", s.train.size()}, {"val", s.val.size()}, {"test", s.test.size()}};
}

}  // namespace

nlohmann::json cmd_train_stage1(const fs::path& dataset, const RunConfig& cfg, const fs::path& out_dir) {
  const Dataset ds = load_dataset(dataset.string());
  const std::vector<std::string> names = ds.feature_names;
  const TrainConfig& tc = cfg.stage1.train;
  const StageData d = prepare(ds, names, tc);
  const TrainResult r = train(d.train, d.y_train, d.val, d.y_val, cfg.stage1.mlp(names.size()), tc);

  const Metrics test = evaluate(r.model, d.test, d.y_test, 0.5);
  const Metrics val = evaluate(r.model, d.val, d.y_val, 0.5);
  const auto positives = static_cast<double>(std::count(d.y_test.begin(), d.y_test.end(), 1));
  const double rate = positives / static_cast<double>(d.y_test.size());

  save_checkpoint({r.model, d.scaler, tc, names, 0.5}, (out_dir / "model.json").string());
  write_text(out_dir / "history.csv", history_csv(r.history));
  const nlohmann::json report = {{"stage", 1},
                                 {"features", names.size()},
                                 {"split_sizes", split_sizes(d.split)},
                                 {"best_epoch", r.best_epoch},
                                 {"epochs_run", r.history.size()},
                                 {"majority_baseline_accuracy", std::max(rate, 1.0 - rate)},
                                 {"val", metrics_report("val", 0.5, val)},
                                 {"test", metrics_report("test", 0.5, test)}};
  write_json(out_dir / "metrics.json", report);
  return report;
}

nlohmann::json cmd_saliency(const fs::path& checkpoint, const fs::path& dataset, std::size_t k, const std::string& split,
                            SaliencyTarget target, const fs::path& out_dir) {
  const Checkpoint cp = load_checkpoint(checkpoint.string());
  const Dataset ds = load_dataset(dataset.string());
  Matrix x = ds.columns(cp.feature_names);
  if (split != "all") {
    const TrainConfig& tc = cp.train_config;
    const Split s = split_indices(ds.labels, tc.train_fraction, tc.val_fraction, tc.test_fraction, tc.stratify, tc.seed);
    if (split == "train") {
      x = x.select_rows(s.train);
    } else if (split == "val") {
      x = x.select_rows(s.val);
    } else if (split == "test") {
      x = x.select_rows(s.test);
    } else {
      throw ValidationError("saliency split must be all, train, val or test");
    }
  }
  const SaliencyReport rep = saliency(cp.model, standardize_apply(cp.scaler, x), cp.feature_names, target);
  const auto top = top_k(rep, k);
  nlohmann::json j = to_json(rep);
  j["split"] = split;
  write_json(out_dir / "saliency.json", j);
  std::string list;
  for (const auto& name : top) list += name + "\n";
  write_text(out_dir / "top_features.txt", list);
  return {{"dataset_size", rep.dataset_size}, {"top", top}};
}

nlohmann::json cmd_train_stage2(const fs::path& dataset, const fs::path& features_file, const RunConfig& cfg,
                                const fs::path& out_dir) {
  const Dataset ds = load_dataset(dataset.string());
  const std::vector<std::string> names = read_name_list(features_file);
  const TrainConfig& tc = cfg.stage2.train;
  const StageData d = prepare(ds, names, tc);
  const MLPConfig mc = cfg.stage2.mlp(names.size());
  const TrainResult r = train(d.train, d.y_train, d.val, d.y_val, mc, tc);

  const std::vector<double> pv = r.model.predict(d.val);
  const double t = threshold_for_precision(pv, d.y_val, cfg.target_precision);
  const std::vector<double> pt = r.model.predict(d.test);

  TrainConfig control_tc = tc;
  control_tc.fp_weight = 1.0;
  const TrainResult control = train(d.train, d.y_train, d.val, d.y_val, mc, control_tc);
  const Metrics control_half = evaluate(control.model, d.test, d.y_test, 0.5);
  const Metrics main_half = compute_metrics(pt, d.y_test, 0.5);

  save_checkpoint({r.model, d.scaler, tc, names, t}, (out_dir / "model.json").string());
  write_text(out_dir / "history.csv", history_csv(r.history));
  const nlohmann::json report = {
      {"stage", 2},
      {"features", names},
      {"split_sizes", split_sizes(d.split)},
      {"fp_weight", tc.fp_weight},
      {"target_precision", cfg.target_precision},
      {"threshold", t},
      {"best_epoch", r.best_epoch},
      {"epochs_run", r.history.size()},
      {"val", metrics_report("val", t, compute_metrics(pv, d.y_val, t))},
      {"test", metrics_report("test", t, compute_metrics(pt, d.y_test, t))},
      {"test_at_half", metrics_report("test", 0.5, main_half)},
      {"control", {{"fp_weight", 1.0}, {"test_at_half", metrics_report("test", 0.5, control_half)}}}};
  write_json(out_dir / "metrics.json", report);
  return report;
}

namespace {

std::vector<double> claw_contractible_column(const Dataset& ds) {
  std::vector<double> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Graph g = parse_graph6(ds.graph6[i]);
    out[i] = g.order() >= 4 && is_claw_contractible(g) ? 1.0 : 0.0;
  }
  return out;
}

nlohmann::json checked_report(const Dataset& ds, const std::vector<ConjectureBox>& boxes, const ReportMeta& meta,
                              bool negative) {
  for (const ConjectureBox& b : boxes) {
    const BoxCount c = evaluate_box(ds, b.clauses, negative ? 0 : 1);
    if (c.support != b.support || c.positives != c.support)
      throw InternalError("mined box failed its recount");
  }
  return conjecture_report_json(boxes, meta, negative);
}

constexpr std::size_t kReportLines = 10;

// The text report lists the best-supported boxes; the JSON keeps all of them.
std::string short_report(const std::vector<ConjectureBox>& boxes, const ReportMeta& meta, bool negative) {
  if (boxes.size() <= kReportLines) return conjecture_report_text(boxes, meta, negative);
  const std::vector<ConjectureBox> head(boxes.begin(), boxes.begin() + kReportLines);
  return conjecture_report_text(head, meta, negative) + "(" + std::to_string(boxes.size() - kReportLines) +
         " more in conjectures.json)\n";
}

}  // namespace

nlohmann::json cmd_eda(const fs::path& dataset, const std::vector<std::string>& features, const EdaConfig& cfg,
                       const fs::path& out_dir) {
  Dataset ds = load_dataset(dataset.string());
  if (features.empty()) throw ValidationError("eda needs at least one feature");
  const bool wants_cc = std::find(features.begin(), features.end(), "claw_contractible") != features.end();
  if ((cfg.claw_contractible_column || wants_cc) &&
      std::find(ds.feature_names.begin(), ds.feature_names.end(), "claw_contractible") == ds.feature_names.end())
    ds.add_column("claw_contractible", claw_contractible_column(ds));
  for (const auto& f : features) ds.column(f);

  write_text(out_dir / "bins.csv", bin_table_csv(ds, features, cfg.num_bins));

  auto mining = [&](std::size_t size) {
    MiningConfig mc;
    mc.max_clauses = cfg.max_clauses;
    mc.max_cuts = cfg.max_cuts;
    mc.min_support =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(cfg.min_support_fraction * static_cast<double>(size))));
    return mc;
  };

  const std::vector<double> orders = ds.column_values("n_vertices");
  const int n_max = static_cast<int>(*std::max_element(orders.begin(), orders.end()));
  const ReportMeta meta{n_max, ds.size()};
  const auto positive = mine_zero_fp_boxes(ds, features, mining(ds.size()));
  std::string text = short_report(positive, meta, false);
  nlohmann::json j = {{"min_support", mining(ds.size()).min_support},
                      {"positive", checked_report(ds, positive, meta, false)}};

  nlohmann::json negative = nlohmann::json::array();
  for (double n : std::set<double>(orders.begin(), orders.end())) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < ds.size(); ++r)
      if (orders[r] == n) rows.push_back(r);
    const Dataset slice = ds.subset(rows);
    const ReportMeta m{static_cast<int>(n), slice.size()};
    const auto boxes = negative_condition_scan(slice, features, mining(slice.size()));
    text += "\nOrder n = " + format_value(n) + ":\n" + short_report(boxes, m, true);
    nlohmann::json entry = checked_report(slice, boxes, m, true);
    entry["n"] = static_cast<int>(n);
    negative.push_back(std::move(entry));
  }
  j["negative"] = std::move(negative);

  nlohmann::json pairs = nlohmann::json::array();
  const std::size_t np = std::min(cfg.pair_cross_check, features.size());
  if (np >= 2) text += "\nExhaustive two-feature cross-check (best box per pair):\n";
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = a + 1; b < np; ++b) {
      const auto boxes = exhaustive_pair_boxes(ds, features[a], features[b], mining(ds.size()).min_support);
      const std::vector<ConjectureBox> best(boxes.begin(), boxes.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(3, boxes.size())));
      nlohmann::json entry = checked_report(ds, best, meta, false);
      entry["features"] = {features[a], features[b]};
      pairs.push_back(std::move(entry));
      text += "  " + features[a] + " × " + features[b] + ": ";
      text += boxes.empty() ? std::string("none") : "support " + std::to_string(boxes.front().support);
      text += "\n";
    }
  j["pair_cross_check"] = std::move(pairs);
  j["features"] = features;
  write_json(out_dir / "conjectures.json", j);
  write_text(out_dir / "report.txt", text);
  return j;
}

nlohmann::json cmd_verify(const fs::path& in, Condition condition, WitnessFamily family, const fs::path& out, int jobs) {
  const std::string text = read_file(in);
  std::vector<std::string> g6;
  std::vector<int> labels;
  std::vector<Graph> graphs;
  const auto lines = split_lines(text);
  if (!lines.empty() && lines[0] == label_header()) {
    for (const auto& r : labels_from_csv(text, in.string())) {
      g6.push_back(r.graph6);
      labels.push_back(r.e_positive ? 1 : 0);
    }
    for (std::size_t i = 0; i < g6.size(); ++i) {
      try {
        graphs.push_back(parse_graph6(g6[i]));
      } catch (const ValidationError& e) {
        throw ValidationError(in.string() + ":" + std::to_string(i + 2) + ": " + e.what());
      }
    }
  } else {
    for (auto& l : read_graph6_lines(in)) {
      g6.push_back(l.text);
      graphs.push_back(std::move(l.graph));
    }
    labels.resize(graphs.size());
    parallel_for(graphs.size(), jobs, [&](std::size_t i) { labels[i] = is_e_positive(graphs[i]) ? 1 : 0; });
  }
  std::vector<char> holds(graphs.size(), 0);
  std::vector<std::string> reason(graphs.size());
  parallel_for(graphs.size(), jobs, [&](std::size_t i) {
    holds[i] = hypothesis_holds(condition, graphs[i]);
    if (holds[i]) reason[i] = check_condition(condition, graphs[i], labels[i] == 1, family);
  });
  nlohmann::json violations = nlohmann::json::array();
  std::set<int> orders;
  std::size_t n_holds = 0;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    orders.insert(graphs[i].order());
    n_holds += holds[i];
    if (!reason[i].empty()) violations.push_back({{"graph6", g6[i]}, {"reason", reason[i]}});
  }
  const nlohmann::json j = {{"condition", to_string(condition)},
                            {"witness_family", to_string(family)},
                            {"orders", orders},
                            {"graphs", graphs.size()},
                            {"hypothesis_holds", n_holds},
                            {"violation_count", violations.size()},
                            {"violations", violations}};
  write_json(out, j);
  return j;
}

nlohmann::json cmd_run_all(const RunConfig& cfg) {
  const fs::path out = cfg.out_dir;
  fs::create_directories(out);
  write_json(out / "config.json", to_json(cfg));

  const fs::path graphs = out / "graphs.g6";
  if (cfg.input_graph6.empty()) {
    cmd_gen(cfg.n_min, cfg.n, graphs);
  } else {
    read_graph6_lines(cfg.input_graph6);
    write_text(graphs, read_file(cfg.input_graph6));
  }
  cmd_label(graphs, out / "labels.csv", cfg.jobs);
  cmd_featurize(out / "labels.csv", out / "dataset.csv", cfg.jobs);
  const fs::path dataset = out / "dataset.csv";

  cmd_train_stage1(dataset, cfg, out / "stage1");
  cmd_saliency(out / "stage1" / "model.json", dataset, cfg.top_k, cfg.saliency_split, cfg.saliency_target,
               out / "stage1");
  cmd_train_stage2(dataset, out / "stage1" / "top_features.txt", cfg, out / "stage2");
  const std::size_t k2 = std::min(cfg.top_k, read_name_list(out / "stage1" / "top_features.txt").size());
  cmd_saliency(out / "stage2" / "model.json", dataset, k2, cfg.saliency_split, cfg.saliency_target, out / "stage2");

  std::vector<std::string> eda_features;
  auto add = [&](const std::string& f) {
    if (std::find(eda_features.begin(), eda_features.end(), f) == eda_features.end()) eda_features.push_back(f);
  };
  const auto ranked = read_name_list(out / "stage2" / "top_features.txt");
  for (std::size_t i = 0; i < std::min(cfg.eda.top_features, ranked.size()); ++i) add(ranked[i]);
  for (const auto& f : cfg.eda.extra_features) add(f);
  if (cfg.eda.claw_contractible_column) add("claw_contractible");
  cmd_eda(dataset, eda_features, cfg.eda, out / "eda");

  for (const auto& c : cfg.verify_conditions)
    cmd_verify(out / "labels.csv", parse_condition(c), cfg.witness_family, out / "verify" / (c + ".json"), cfg.jobs);

  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), out).generic_string();
    if (rel == "manifest.json" || entry.path().extension() == ".cache" || rel.find(".tmp.") != std::string::npos)
      continue;
    files.emplace_back(rel, entry.path());
  }
  std::sort(files.begin(), files.end());
  nlohmann::json artifacts = nlohmann::json::array();
  for (const auto& [rel, path] : files) {
    const std::string data = read_file(path);
    artifacts.push_back({{"path", rel}, {"sha256", sha256_hex(data)}, {"bytes", data.size()}});
  }
  const nlohmann::json manifest = {
      {"version", 1}, {"config_sha256", sha256_hex(to_json(cfg).dump())}, {"artifacts", std::move(artifacts)}};
  write_json(out / "manifest.json", manifest);
  return manifest;
}

}  // namespace epos
