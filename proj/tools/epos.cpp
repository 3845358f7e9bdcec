#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "epos/error.hpp"
#include "epos/io.hpp"
#include "epos/pipeline.hpp"

using namespace epos;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
};

RunConfig resolve(const Globals& g) {
  RunConfig c = g.config.empty() ? default_run_config() : load_run_config(g.config);
  if (g.seed_set) apply_seed(c, g.seed);
  if (g.jobs > 0) c.jobs = g.jobs;
  return c;
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::string> feature_list(const std::string& arg) {
  if (fs::exists(arg)) return read_name_list(arg);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= arg.size()) {
    const std::size_t comma = arg.find(',', start);
    const std::string name = arg.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!name.empty()) out.push_back(name);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ValidationError("--features names no features");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"e-positivity workbench: enumerate graphs, label them, train classifiers, mine and verify conditions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Run config JSON (defaults when omitted)")->check(CLI::ExistingFile);
  app.add_option_function<std::uint64_t>(
      "--seed", [&](std::uint64_t s) { g.seed = s, g.seed_set = true; }, "Derive all seeds from this value");
  app.add_option("--jobs", g.jobs, "Worker threads for per-graph stages")->check(CLI::PositiveNumber);

  std::function<int()> action;

  auto* init = app.add_subcommand("init", "Write a config with every default filled in");
  std::string init_out = "epos.json";
  int init_n = 0;
  init->add_option("--out", init_out, "Config path");
  init->add_option("--n", init_n, "Largest graph order");
  init->callback([&] {
    action = [&] {
      RunConfig c = resolve(g);
      if (init_n > 0) c.n = c.n_min = init_n;
      write_file_atomic(init_out, to_json(c).dump(2) + "\n");
      std::cout << init_out << "\n";
      return 0;
    };
  });

  auto* gen = app.add_subcommand("gen", "Enumerate connected graphs to a graph6 file");
  int gen_n = 0;
  int gen_from = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Graph order (1..9)")->required();
  gen->add_option("--from", gen_from, "Also include every order from this one up to --n");
  gen->add_option("--out", gen_out, "Output graph6 file")->required();
  gen->callback([&] {
    action = [&] {
      std::cout << cmd_gen(gen_from > 0 ? gen_from : gen_n, gen_n, gen_out) << "\n";
      return 0;
    };
  });

  auto* label = app.add_subcommand("label", "Compute e-positivity labels (resumable)");
  std::string label_in, label_out;
  label->add_option("--in", label_in, "graph6 file")->required();
  label->add_option("--out", label_out, "Label CSV")->required();
  label->callback([&] {
    action = [&] {
      const LabelSummary s = cmd_label(label_in, label_out, resolve(g).jobs);
      print({{"graphs", s.total}, {"e_positive", s.positive}, {"computed", s.computed}, {"cached", s.cached}});
      return 0;
    };
  });

  auto* feat = app.add_subcommand("featurize", "Compute the invariant dataset from a label CSV");
  std::string feat_in, feat_out;
  feat->add_option("--in", feat_in, "Label CSV")->required();
  feat->add_option("--out", feat_out, "Dataset CSV")->required();
  feat->callback([&] {
    action = [&] {
      std::cout << cmd_featurize(feat_in, feat_out, resolve(g).jobs) << "\n";
      return 0;
    };
  });

  auto* s1 = app.add_subcommand("train-stage1", "Train the accuracy model on every feature");
  std::string s1_data, s1_out;
  s1->add_option("--dataset", s1_data, "Dataset CSV")->required();
  s1->add_option("--out-dir", s1_out, "Output directory")->required();
  s1->callback([&] {
    action = [&] {
      print(cmd_train_stage1(s1_data, resolve(g), s1_out));
      return 0;
    };
  });

  auto* sal = app.add_subcommand("saliency", "Rank features by mean absolute input gradient");
  std::string sal_ckpt, sal_data, sal_out, sal_split, sal_target;
  std::size_t sal_k = 0;
  sal->add_option("--checkpoint", sal_ckpt, "Model checkpoint")->required();
  sal->add_option("--dataset", sal_data, "Dataset CSV")->required();
  sal->add_option("--out-dir", sal_out, "Output directory")->required();
  sal->add_option("--k", sal_k, "Number of top features (config default)");
  sal->add_option("--split", sal_split, "all, train, val or test (config default)");
  sal->add_option("--target", sal_target, "probability or logit (config default)");
  sal->callback([&] {
    action = [&] {
      const RunConfig c = resolve(g);
      print(cmd_saliency(sal_ckpt, sal_data, sal_k ? sal_k : c.top_k, sal_split.empty() ? c.saliency_split : sal_split,
                         sal_target.empty() ? c.saliency_target : parse_saliency_target(sal_target), sal_out));
      return 0;
    };
  });

  auto* s2 = app.add_subcommand("train-stage2", "Train the precision model on selected features");
  std::string s2_data, s2_feat, s2_out;
  s2->add_option("--dataset", s2_data, "Dataset CSV")->required();
  s2->add_option("--features", s2_feat, "Feature list file, one name per line")->required();
  s2->add_option("--out-dir", s2_out, "Output directory")->required();
  s2->callback([&] {
    action = [&] {
      print(cmd_train_stage2(s2_data, s2_feat, resolve(g), s2_out));
      return 0;
    };
  });

  auto* eda = app.add_subcommand("eda", "Bin tables and zero-false-positive condition mining");
  std::string eda_data, eda_feat, eda_out;
  eda->add_option("--dataset", eda_data, "Dataset CSV")->required();
  eda->add_option("--features", eda_feat, "Comma-separated names or a file with one per line")->required();
  eda->add_option("--out-dir", eda_out, "Output directory")->required();
  eda->callback([&] {
    action = [&] {
      const auto j = cmd_eda(eda_data, feature_list(eda_feat), resolve(g).eda, eda_out);
      std::cout << read_file(fs::path(eda_out) / "report.txt");
      (void)j;
      return 0;
    };
  });

  auto* ver = app.add_subcommand("verify", "Check a condition exhaustively; exit 3 on violations");
  std::string ver_in, ver_cond, ver_out, ver_family;
  ver->add_option("--in", ver_in, "graph6 file or label CSV")->required();
  ver->add_option("--condition", ver_cond, "co-triangle-free, alpha or clawfree-ccfree")->required();
  ver->add_option("--out", ver_out, "Report JSON")->required();
  ver->add_option("--witness-family", ver_family, "pairs-and-singleton, pairs-and-triple or both (config default)");
  ver->callback([&] {
    action = [&] {
      const RunConfig c = resolve(g);
      const auto j = cmd_verify(ver_in, parse_condition(ver_cond),
                                ver_family.empty() ? c.witness_family : parse_witness_family(ver_family), ver_out, c.jobs);
      print({{"condition", j.at("condition")},
             {"graphs", j.at("graphs")},
             {"hypothesis_holds", j.at("hypothesis_holds")},
             {"violation_count", j.at("violation_count")}});
      return j.at("violation_count").get<std::size_t>() == 0 ? 0 : 3;
    };
  });

  auto* all = app.add_subcommand("run-all", "Run every stage and write a manifest of artifact hashes");
  std::string all_out;
  all->add_option("--out-dir", all_out, "Overrides out_dir from the config");
  all->callback([&] {
    action = [&] {
      RunConfig c = resolve(g);
      if (!all_out.empty()) c.out_dir = all_out;
      const auto m = cmd_run_all(c);
      std::cout << (fs::path(c.out_dir) / "manifest.json").string() << " (" << m.at("artifacts").size()
                << " artifacts)\n";
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return action();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
