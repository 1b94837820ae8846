// pictopipe command line: translate, serve, evaluate and validate data.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>

#include "pictopipe/config.h"
#include "pictopipe/error.h"
#include "pictopipe/lexicon.h"
#include "pictopipe/metrics.h"
#include "pictopipe/pipeline.h"
#include "pictopipe/service.h"
#include "pictopipe/tpa.h"

#ifndef PICTOPIPE_DEFAULT_CONFIG
#define PICTOPIPE_DEFAULT_CONFIG ""
#endif

namespace {

using namespace pictopipe;

std::string resolve_config_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (auto env = process_env("PICTOPIPE_CONFIG")) return *env;
  return PICTOPIPE_DEFAULT_CONFIG;
}

PipelineConfig read_config(const std::string& flag) {
  std::string path = resolve_config_path(flag);
  if (path.empty()) throw DataError("no config file given (use --config)");
  return load_config_file(path);
}

int run_translate(const std::string& config_path, const std::string& text) {
  Pipeline pipeline(read_config(config_path));
  SessionContext session = pipeline.new_session();
  TranslationResult result = pipeline.process(text, session);
  std::cout << to_json(result).dump(2) << '\n';
  return 0;
}

int run_serve(const std::string& config_path, const std::string& host, int port) {
  PipelineConfig cfg = read_config(config_path);
  if (!host.empty()) cfg.host = host;
  if (port >= 0) cfg.port = port;
  cfg.validate();
  return serve(cfg);
}

int run_eval_tpa(const std::string& config_path, const std::string& corpus_path,
                 int case_number, bool penalty, double epsilon, bool strict,
                 bool as_json) {
  Pipeline pipeline(read_config(config_path));
  auto corpus = load_tpa_corpus_file(corpus_path);
  if (corpus.empty()) throw DataError("TPA corpus is empty");
  auto mode = strict ? MatchMode::kStrict : MatchMode::kLenient;
  auto cells = pipeline.evaluate_tpa(corpus, epsilon, mode);
  if (case_number != 0) {
    case_config(case_number, penalty, epsilon);  // validates the case number
    std::erase_if(cells, [&](const TpaCell& c) {
      return c.case_number != case_number || c.penalty != penalty;
    });
  }
  if (as_json) {
    std::cout << matrix_to_json(cells).dump(2) << '\n';
  } else {
    std::cout << format_matrix(cells);
  }
  return 0;
}

int run_eval_gec(const std::string& corpus_path, const std::string& metric,
                 int max_n) {
  auto corpus = load_gec_eval_corpus_file(corpus_path);
  if (metric == "bleu" || metric == "both") {
    std::printf("BLEU %.2f\n", bleu(corpus, max_n));
  }
  if (metric == "gleu" || metric == "both") {
    std::printf("GLEU %.2f\n", gleu(corpus, max_n));
  }
  return 0;
}

int run_lexicon_validate(const std::string& path, const std::string& format) {
  Lexicon lex = format.empty()
                    ? load_lexicon_file(path)
                    : load_lexicon_file(path, parse_lexicon_format(format));
  std::cout << path << ": " << lex.size() << " entries, max_ngram "
            << lex.max_ngram() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text-to-pictogram pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // --config may follow the subcommand

  std::string config_path;
  app.add_option("--config", config_path, "Pipeline config file");

  auto* translate = app.add_subcommand("translate", "Translate one utterance");
  std::string text;
  translate->add_option("text", text, "Utterance")->required();

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  std::string host;
  int port = -1;
  serve_cmd->add_option("--host", host, "Bind address (overrides config)");
  serve_cmd->add_option("--port", port, "Port (overrides config)");

  auto* eval = app.add_subcommand("eval", "Evaluate metrics");
  eval->require_subcommand(1);
  auto* eval_tpa = eval->add_subcommand("tpa", "TPA case matrix");
  std::string tpa_corpus;
  int case_number = 0;
  bool penalty = false;
  double epsilon = 1e-9;
  bool strict = false;
  bool as_json = false;
  eval_tpa->add_option("--corpus", tpa_corpus, "Gold JSONL corpus")->required();
  eval_tpa->add_option("--case", case_number, "Single deletion case 1-4")
      ->check(CLI::Range(1, 4));
  eval_tpa->add_flag("--penalty", penalty, "With --case: apply the NER penalty");
  eval_tpa->add_option("--epsilon", epsilon, "Denominator epsilon");
  eval_tpa->add_flag("--strict", strict, "Compare entry ids instead of coverage");
  eval_tpa->add_flag("--json", as_json, "Print JSON instead of a table");

  auto* eval_gec = eval->add_subcommand("gec", "BLEU/GLEU of a GEC system");
  std::string gec_corpus;
  std::string metric = "both";
  int max_n = 4;
  eval_gec->add_option("--corpus", gec_corpus, "TSV: source, hypothesis, reference")
      ->required();
  eval_gec->add_option("--metric", metric, "bleu, gleu or both")
      ->check(CLI::IsMember({"bleu", "gleu", "both"}));
  eval_gec->add_option("--max-n", max_n, "Highest n-gram order")->check(CLI::Range(1, 8));

  auto* lexicon = app.add_subcommand("lexicon", "Lexicon tools");
  lexicon->require_subcommand(1);
  auto* validate = lexicon->add_subcommand("validate", "Load and check a lexicon");
  std::string lexicon_path;
  std::string lexicon_format;
  validate->add_option("file", lexicon_path, "Lexicon file")->required();
  validate->add_option("--format", lexicon_format, "jsonl or tsv")
      ->check(CLI::IsMember({"jsonl", "tsv"}));

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
    if (*translate) return run_translate(config_path, text);
    if (*serve_cmd) return run_serve(config_path, host, port);
    if (*eval_tpa) {
      return run_eval_tpa(config_path, tpa_corpus, case_number, penalty,
                          epsilon, strict, as_json);
    }
    if (*eval_gec) return run_eval_gec(gec_corpus, metric, max_n);
    if (*validate) return run_lexicon_validate(lexicon_path, lexicon_format);
  } catch (const pictopipe::Error& e) {
    std::cerr << "pictopipe: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
