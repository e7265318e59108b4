// Batch front end for the pipeline: learn probabilities from a corpus,
// invert them, generate bounded suites, and compare suite distributions.
//
// Exit codes: 0 success, 1 input-data failure, 2 usage or grammar failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "pcfg/analyze.hpp"
#include "pcfg/counting.hpp"
#include "pcfg/earley.hpp"
#include "pcfg/generate.hpp"
#include "pcfg/grammar.hpp"
#include "pcfg/invert.hpp"
#include "pcfg/random.hpp"
#include "pcfg/tree.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageFailure("cannot write " + path.string());
  out << content;
}

pcfg::Grammar load_grammar(const fs::path& path) {
  try {
    return pcfg::parse_grammar(read_file(path));
  } catch (const pcfg::GrammarError& e) {
    throw UsageFailure(path.string() + ": " + e.what());
  }
}

// Inputs in a directory, sorted by filename. A single trailing newline is
// stripped; generated files carry one for editor friendliness.
std::vector<std::pair<fs::path, std::string>> read_input_dir(
    const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw UsageFailure(dir.string() + " is not a directory");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() &&
        entry.path().extension() != ".json")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  std::vector<std::pair<fs::path, std::string>> out;
  for (const auto& p : paths) {
    std::string text = read_file(p);
    if (!text.empty() && text.back() == '\n') text.pop_back();
    out.emplace_back(p, std::move(text));
  }
  return out;
}

std::string indent_tree(const pcfg::DerivationTree& t, int depth = 0) {
  std::string out(static_cast<std::size_t>(depth) * 2, ' ');
  if (t.is_terminal()) {
    out += "\"" + t.name + "\"\n";
    return out;
  }
  out += t.name + " [alt " + std::to_string(t.alt) + "]\n";
  for (const auto& c : t.children) out += indent_tree(c, depth + 1);
  return out;
}

int cmd_parse(const fs::path& grammar_path, const fs::path& input_path,
              bool as_json) {
  pcfg::Grammar g = load_grammar(grammar_path);
  std::string input = read_file(input_path);
  if (!input.empty() && input.back() == '\n') input.pop_back();
  try {
    pcfg::ParseResult res = pcfg::parse_input(g, input);
    if (res.ambiguous)
      std::cerr << "note: input is ambiguous, canonical tree chosen\n";
    if (as_json)
      std::cout << pcfg::tree_to_json(res.tree) << "\n";
    else
      std::cout << indent_tree(res.tree);
    return kExitOk;
  } catch (const pcfg::ParseError& e) {
    std::cerr << input_path.string() << ": " << e.what() << "\n";
    return kExitData;
  }
}

int cmd_learn(const fs::path& grammar_path, const fs::path& corpus_dir,
              const fs::path& out_path, const fs::path& counts_path,
              bool skip_unparsable) {
  pcfg::Grammar g = load_grammar(grammar_path);
  auto inputs = read_input_dir(corpus_dir);

  std::vector<pcfg::DerivationTree> trees;
  std::size_t skipped = 0;
  for (const auto& [path, text] : inputs) {
    try {
      trees.push_back(pcfg::parse_input(g, text).tree);
    } catch (const pcfg::ParseError& e) {
      if (skip_unparsable) {
        std::cerr << "skipping " << path.string() << ": " << e.what() << "\n";
        ++skipped;
      } else {
        std::cerr << path.string() << ": " << e.what() << "\n";
        return kExitData;
      }
    }
  }
  pcfg::CountTable counts = pcfg::count_expansions(trees, g);
  pcfg::Grammar learned = pcfg::annotate_from_counts(g, counts);
  write_file(out_path, pcfg::serialize_grammar(learned));
  if (!counts_path.empty()) write_file(counts_path, counts.to_json() + "\n");
  std::cout << "learned from " << trees.size() << " inputs";
  if (skipped) std::cout << " (skipped " << skipped << ")";
  std::cout << " -> " << out_path.string() << "\n";
  return kExitOk;
}

int cmd_invert(const fs::path& grammar_path, const fs::path& out_path) {
  pcfg::Grammar g = load_grammar(grammar_path);
  pcfg::Grammar inv = pcfg::invert(pcfg::normalize_probabilities(g));
  write_file(out_path, pcfg::serialize_grammar(inv));
  std::cout << "inverted grammar -> " << out_path.string() << "\n";
  return kExitOk;
}

int cmd_generate(const fs::path& grammar_path, const fs::path& out_dir,
                 const pcfg::GeneratorConfig& cfg, bool emit_trees) {
  std::string grammar_text = read_file(grammar_path);
  pcfg::Grammar g;
  try {
    g = pcfg::normalize_probabilities(pcfg::parse_grammar(grammar_text));
  } catch (const std::exception& e) {
    throw UsageFailure(grammar_path.string() + ": " + e.what());
  }
  fs::create_directories(out_dir);
  auto suite = pcfg::generate_suite(g, cfg);

  int width = 4;
  for (std::uint64_t c = cfg.count; c > 10000; c /= 10) ++width;
  char name[32];
  for (std::size_t i = 0; i < suite.size(); ++i) {
    std::snprintf(name, sizeof name, "%0*zu", width, i);
    write_file(out_dir / (std::string(name) + ".txt"), suite[i].text + "\n");
    if (emit_trees)
      write_file(out_dir / (std::string(name) + ".tree.json"),
                 pcfg::tree_to_json(suite[i].tree) + "\n");
  }

  json manifest = {{"grammar_hash",
                    [&] {
                      char buf[20];
                      std::snprintf(buf, sizeof buf, "%016llx",
                                    static_cast<unsigned long long>(
                                        pcfg::fnv1a64(grammar_text)));
                      return std::string(buf);
                    }()},
                   {"seed", cfg.seed},
                   {"max_expansions", cfg.max_expansions},
                   {"count", cfg.count}};
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "generated " << suite.size() << " inputs -> "
            << out_dir.string() << "\n";
  return kExitOk;
}

int cmd_compare(const fs::path& grammar_path, const fs::path& dir_a,
                const fs::path& dir_b, int resamples, std::uint64_t seed,
                const fs::path& report_path, const fs::path& csv_path,
                bool skip_unparsable) {
  pcfg::Grammar g = load_grammar(grammar_path);

  auto load_suite = [&](const fs::path& dir) {
    std::vector<std::string> texts;
    for (auto& [path, text] : read_input_dir(dir)) {
      if (skip_unparsable) {
        try {
          pcfg::parse_input(g, text);
        } catch (const pcfg::ParseError& e) {
          std::cerr << "skipping " << path.string() << ": " << e.what()
                    << "\n";
          continue;
        }
      }
      texts.push_back(std::move(text));
    }
    return texts;
  };

  try {
    pcfg::FrequencyDistribution da = suite_distribution(g, load_suite(dir_a));
    pcfg::FrequencyDistribution db = suite_distribution(g, load_suite(dir_b));
    pcfg::KSReport ks = pcfg::ks_compare(da, db, resamples, seed);
    auto uncovered = pcfg::uncovered_keys(da, db);

    json uncov = json::array();
    for (const auto& [name, alt] : uncovered) uncov.push_back({name, alt});
    json report = {{"statistic", ks.statistic},
                   {"p_value", ks.p_value},
                   {"uncovered", uncov},
                   {"resamples", ks.bootstrap_samples},
                   {"bandwidth", ks.bandwidth}};
    std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!report_path.empty()) write_file(report_path, text);

    if (!csv_path.empty()) {
      std::ostringstream csv;
      csv << "nonterminal,alt,freq_a,freq_b\n";
      for (std::size_t i = 0; i < da.keys.size(); ++i)
        csv << da.keys[i].first << ',' << da.keys[i].second << ','
            << da.values[i] << ',' << db.values[i] << '\n';
      write_file(csv_path, csv.str());
    }
    return kExitOk;
  } catch (const pcfg::ParseError& e) {
    std::cerr << "suite input: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Probabilistic-grammar test input toolkit: learn production "
      "probabilities from a corpus, invert them, generate bounded inputs, "
      "and compare suites statistically."};
  app.require_subcommand(1);

  std::string grammar_path;
  std::string input_path, out_path, counts_path, corpus_dir, out_dir;
  std::string dir_a, dir_b, report_path, csv_path;
  bool as_json = false, skip_unparsable = false, emit_trees = false;
  pcfg::GeneratorConfig cfg;
  int resamples = 1000;
  std::uint64_t compare_seed = 0;

  auto* parse = app.add_subcommand("parse", "Parse one input, print its tree");
  parse->add_option("--grammar", grammar_path, "grammar file")->required();
  parse->add_option("input", input_path, "input file")->required();
  parse->add_flag("--json", as_json, "emit the tree as JSON");

  auto* learn = app.add_subcommand(
      "learn", "Learn production probabilities from a corpus");
  learn->add_option("--grammar", grammar_path)->required();
  learn->add_option("--corpus", corpus_dir, "directory of sample inputs")
      ->required();
  learn->add_option("--out", out_path, "annotated grammar output")->required();
  learn->add_option("--counts", counts_path, "counts report (JSON)");
  learn->add_flag("--skip-unparsable", skip_unparsable,
                  "count only parsable samples");

  auto* invert = app.add_subcommand("invert", "Invert a learned grammar");
  invert->add_option("--grammar", grammar_path)->required();
  invert->add_option("--out", out_path)->required();

  auto* generate =
      app.add_subcommand("generate", "Generate a suite of bounded inputs");
  generate->add_option("--grammar", grammar_path)->required();
  generate->add_option("--out", out_dir, "output directory")->required();
  generate->add_option("--count", cfg.count, "inputs to produce")
      ->default_val(1);
  generate->add_option("--max-expansions", cfg.max_expansions,
                       "expansion threshold per tree")
      ->default_val(200);
  generate->add_option("--seed", cfg.seed)->default_val(0);
  generate->add_flag("--emit-trees", emit_trees,
                     "also write NNNN.tree.json files");

  auto* compare = app.add_subcommand(
      "compare", "Compare two suites' production-usage distributions");
  compare->add_option("--grammar", grammar_path)->required();
  compare->add_option("suite_a", dir_a)->required();
  compare->add_option("suite_b", dir_b)->required();
  compare->add_option("--resamples", resamples)->default_val(1000);
  compare->add_option("--seed", compare_seed)->default_val(0);
  compare->add_option("--out", report_path, "report JSON path");
  compare->add_option("--csv", csv_path, "per-key frequency CSV path");
  compare->add_flag("--skip-unparsable", skip_unparsable);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (parse->parsed()) return cmd_parse(grammar_path, input_path, as_json);
    if (learn->parsed())
      return cmd_learn(grammar_path, corpus_dir, out_path, counts_path,
                       skip_unparsable);
    if (invert->parsed()) return cmd_invert(grammar_path, out_path);
    if (generate->parsed())
      return cmd_generate(grammar_path, out_dir, cfg, emit_trees);
    if (compare->parsed())
      return cmd_compare(grammar_path, dir_a, dir_b, resamples, compare_seed,
                         report_path, csv_path, skip_unparsable);
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
