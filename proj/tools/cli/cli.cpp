// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "gtadoc/dag.hpp"
#include "gtadoc/error.hpp"
#include "gtadoc/naive.hpp"
#include "gtadoc/sequitur.hpp"
#include "gtadoc/serialize.hpp"
#include "gtadoc/tasks.hpp"
#include "gtadoc/tokenize.hpp"

namespace gtadoc::cli {
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

unsigned parse_workers(std::string_view text) {
  unsigned v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end || v == 0) {
    throw Error(ErrorCode::kUsage, "worker count must be a positive integer, got '" +
                                       std::string(text) + "'");
  }
  return v;
}

std::vector<CorpusFile> read_corpus_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) paths.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::kIo, "cannot list " + dir.string() + ": " + ec.message());
  if (paths.empty()) throw Error(ErrorCode::kUsage, "no input files in " + dir.string());
  std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  std::vector<CorpusFile> files;
  files.reserve(paths.size());
  for (const fs::path& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::kIo, "cannot read " + p.string());
    files.push_back({p.filename().string(), tokenize(buf.str(), {}, p.string())});
  }
  return files;
}

namespace {

struct Flags {
  std::string task = "wordcount";
  std::uint32_t l = 3;
  std::string strategy = "auto";
  std::optional<unsigned> workers;
  unsigned chunk_factor = 16;
  unsigned file_set_width = 64;
  std::string out;
  unsigned repeat = 3;
};

void add_engine_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--l", f.l, "sequence length for seqcount and ranked")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--strategy", f.strategy, "auto, topdown or bottomup");
  cmd->add_option("--workers", f.workers, "worker threads (default: GTADOC_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--chunk-factor", f.chunk_factor, "split rules longer than this times the average")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--file-set-width", f.file_set_width, "largest corpus kept as file bitsets")
      ->check(CLI::PositiveNumber);
}

unsigned default_workers(const std::optional<std::string>& env) {
  if (env) return parse_workers(*env);
  return std::max(1u, std::thread::hardware_concurrency());
}

TaskOptions task_options(const Flags& f, const std::optional<std::string>& env) {
  TaskOptions o;
  const auto kind = parse_task(f.task);
  if (!kind) throw Error(ErrorCode::kUsage, "unknown task '" + f.task + "'");
  o.kind = *kind;
  o.length = f.l;
  const auto strategy = parse_strategy(f.strategy);
  if (!strategy) throw Error(ErrorCode::kUsage, "unknown strategy '" + f.strategy + "'");
  o.traversal.strategy = *strategy;
  o.traversal.workers = f.workers ? *f.workers : default_workers(env);
  o.traversal.chunk_factor = f.chunk_factor;
  o.traversal.file_set_width = f.file_set_width;
  o.traversal.validate();
  return o;
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void emit_manifest(std::ostream& err, const std::string& command,
                   const std::vector<std::string>& inputs, const TaskOptions* o,
                   const TaskReport* report, double init_ms, double traversal_ms,
                   const std::string& digest) {
  nlohmann::json m;
  m["command"] = command;
  m["inputs"] = inputs;
  if (o) {
    m["task"] = to_string(o->kind);
    m["l"] = o->length;
    m["strategy"] = to_string(report ? report->strategy : o->traversal.strategy);
    m["workers"] = o->traversal.workers;
    m["chunk_factor"] = o->traversal.chunk_factor;
  }
  m["timings"] = {{"initialization_ms", init_ms}, {"traversal_ms", traversal_ms}};
  if (report) {
    m["rounds"] = {{"top_down", report->engine.top_down_rounds},
                   {"bounds", report->engine.bound_rounds},
                   {"bottom_up", report->engine.bottom_up_rounds},
                   {"head_tail", report->head_tail_rounds},
                   {"retry", report->engine.retry_rounds}};
  }
  if (!digest.empty()) m["digest"] = digest;
  err << m.dump() << '\n';
}

Grammar load_input(const fs::path& input) {
  std::error_code ec;
  if (fs::is_directory(input, ec)) return compress_corpus(read_corpus_dir(input));
  return read_grammar_file(input);
}

int cmd_compress(const fs::path& dir, const fs::path& output, std::ostream& out,
                 std::ostream& err) {
  const auto t0 = Clock::now();
  const auto files = read_corpus_dir(dir);
  std::uint64_t input_bytes = 0;
  for (const auto& f : files) {
    for (const auto& t : f.tokens) input_bytes += t.size() + 1;
  }
  const Grammar g = compress_corpus(files);
  const double build_ms = ms_since(t0);
  const auto bytes = serialize_grammar(g);
  {
    std::ofstream os(output, std::ios::binary);
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + output.string());
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + output.string());
  }
  out << "files\t" << files.size() << '\n'
      << "rules\t" << g.num_rules() << '\n'
      << "vocabulary\t" << g.dictionary.num_words() << '\n'
      << "compression_ratio\t" << std::fixed << std::setprecision(3)
      << (bytes.empty() ? 0.0 : static_cast<double>(input_bytes) / bytes.size()) << '\n';
  emit_manifest(err, "compress", {dir.string()}, nullptr, nullptr, build_ms, 0, "");
  return 0;
}

int cmd_analyze(const fs::path& input, const Flags& f, const std::optional<std::string>& env,
                std::ostream& out, std::ostream& err) {
  const TaskOptions o = task_options(f, env);
  const Grammar g = read_grammar_file(input);
  const auto t0 = Clock::now();
  const Dag dag = build_dag(g);
  const double dag_ms = ms_since(t0);
  RoundExecutor exec(o.traversal.workers);
  TaskReport report;
  const TaskOutput result = run_task(dag, o, exec, &report);
  const std::string tsv = to_tsv(result, g.dictionary);
  if (f.out.empty()) {
    out << tsv;
  } else {
    std::ofstream os(f.out, std::ios::binary);
    os << tsv;
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + f.out);
  }
  emit_manifest(err, "analyze", {input.string()}, &o, &report, dag_ms + report.init_ms,
                report.traversal_ms, fnv1a_hex(tsv));
  return 0;
}

// First line where the two outputs differ, as "key expected actual".
std::string first_divergence(const std::string& want, const std::string& got) {
  std::istringstream a(want), b(got);
  std::string la, lb;
  for (std::size_t line = 1;; ++line) {
    const bool ha = static_cast<bool>(std::getline(a, la));
    const bool hb = static_cast<bool>(std::getline(b, lb));
    if (!ha && !hb) return "";
    if (ha && hb && la == lb) continue;
    const std::string& key_src = ha ? la : lb;
    const std::string key = key_src.substr(0, key_src.find('\t'));
    std::ostringstream msg;
    msg << "line " << line << " key '" << key << "': expected '" << (ha ? la : "<end>")
        << "' actual '" << (hb ? lb : "<end>") << "'";
    return msg.str();
  }
}

int cmd_verify(const fs::path& input, const Flags& f, const std::optional<std::string>& env,
               std::ostream& out, std::ostream& err) {
  std::vector<TaskKind> kinds;
  if (f.task == "all") {
    kinds.assign(std::begin(kAllTasks), std::end(kAllTasks));
  } else {
    kinds.push_back(task_options(f, env).kind);
  }
  Flags base = f;
  base.task = "wordcount";
  TaskOptions o = task_options(base, env);

  const Grammar g = load_input(input);
  const Dag dag = build_dag(g);
  const auto files = decompress_files(g);
  RoundExecutor exec(o.traversal.workers);
  int status = 0;
  for (TaskKind kind : kinds) {
    o.kind = kind;
    TaskReport report;
    const std::string got = to_tsv(run_task(dag, o, exec, &report), g.dictionary);
    const std::string want =
        to_tsv(naive_run(files, g.dictionary.num_words(), kind, o.length), g.dictionary);
    const std::string diff = first_divergence(want, got);
    if (diff.empty()) {
      out << to_string(kind) << "\tok\t" << fnv1a_hex(got) << '\n';
    } else {
      out << to_string(kind) << "\tdivergence\t" << diff << '\n';
      status = exit_status(ErrorCode::kDivergence);
    }
    emit_manifest(err, "verify", {input.string()}, &o, &report, report.init_ms,
                  report.traversal_ms, fnv1a_hex(got));
  }
  return status;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

struct Timing {
  std::vector<double> total, init, traversal;
};

int cmd_bench(const fs::path& input, const Flags& f, const std::optional<std::string>& env,
              std::ostream& out, std::ostream& err) {
  const TaskOptions par = task_options(f, env);
  TaskOptions seq = par;
  seq.traversal.workers = 1;
  const Grammar g = load_input(input);

  auto compressed = [&](const TaskOptions& o, Timing& t) {
    RoundExecutor exec(o.traversal.workers);
    const auto t0 = Clock::now();
    const Dag dag = build_dag(g);
    const double dag_ms = ms_since(t0);
    TaskReport report;
    const std::string tsv = to_tsv(run_task(dag, o, exec, &report), g.dictionary);
    t.total.push_back(ms_since(t0));
    t.init.push_back(dag_ms + report.init_ms);
    t.traversal.push_back(report.traversal_ms);
    return tsv;
  };
  Timing tp, ts, tn;
  std::string digest;
  for (unsigned i = 0; i < std::max(1u, f.repeat); ++i) {
    digest = fnv1a_hex(compressed(par, tp));
    compressed(seq, ts);
    const auto t0 = Clock::now();
    const auto files = decompress_files(g);
    const double init = ms_since(t0);
    const std::string tsv =
        to_tsv(naive_run(files, g.dictionary.num_words(), par.kind, par.length), g.dictionary);
    tn.total.push_back(ms_since(t0));
    tn.init.push_back(init);
    tn.traversal.push_back(tn.total.back() - init);
    if (fnv1a_hex(tsv) != digest) {
      out << "divergence\tcompressed and naive outputs differ\n";
      return exit_status(ErrorCode::kDivergence);
    }
  }

  out << "machine\tcores=" << std::thread::hardware_concurrency()
      << "\tworkers=" << par.traversal.workers << "\trepeat=" << std::max(1u, f.repeat) << '\n';
  out << "mode\tmedian_ms\tinit_ms\ttraversal_ms\n" << std::fixed << std::setprecision(3);
  auto row = [&](const char* name, const Timing& t) {
    out << name << '\t' << median(t.total) << '\t' << median(t.init) << '\t'
        << median(t.traversal) << '\n';
  };
  row("compressed_parallel", tp);
  row("compressed_sequential", ts);
  row("decompress_naive", tn);
  const double p = std::max(median(tp.total), 1e-9);
  out << "speedup_vs_sequential\t" << median(ts.total) / p << '\n'
      << "speedup_vs_naive\t" << median(tn.total) / p << '\n';
  emit_manifest(err, "bench", {input.string()}, &par, nullptr, median(tp.init),
                median(tp.traversal), digest);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_workers) {
  CLI::App app{"Text analytics directly on grammar-compressed corpora", "gtadoc"};
  app.require_subcommand(1);
  Flags f;
  std::string input, output;
  std::string verify_task = "all";

  auto* compress = app.add_subcommand("compress", "compress a directory of text files");
  compress->add_option("input", input, "directory of text files")->required();
  compress->add_option("output", output, "GTDC file to write")->required();

  auto* analyze = app.add_subcommand("analyze", "run a task on a GTDC file");
  analyze->add_option("input", input, "GTDC file")->required();
  analyze->add_option("task,--task", f.task,
                      "wordcount, sort, invertedindex, termvector, seqcount, ranked");
  analyze->add_option("--out", f.out, "write TSV here instead of stdout");
  add_engine_flags(analyze, f);

  auto* verify = app.add_subcommand("verify", "compare compressed and naive outputs");
  verify->add_option("input", input, "directory of text files or GTDC file")->required();
  verify->add_option("task,--task", verify_task, "task name or 'all'");
  add_engine_flags(verify, f);

  auto* bench = app.add_subcommand("bench", "time compressed against naive analytics");
  bench->add_option("input", input, "directory of text files or GTDC file")->required();
  bench->add_option("task,--task", f.task, "task name");
  bench->add_option("--repeat", f.repeat, "runs per mode; medians are reported")
      ->check(CLI::PositiveNumber);
  add_engine_flags(bench, f);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "gtadoc: " << e.what() << '\n';
    return exit_status(ErrorCode::kUsage);
  }

  try {
    if (compress->parsed()) return cmd_compress(input, output, out, err);
    if (analyze->parsed()) return cmd_analyze(input, f, env_workers, out, err);
    if (verify->parsed()) {
      f.task = verify_task;
      return cmd_verify(input, f, env_workers, out, err);
    }
    if (bench->parsed()) return cmd_bench(input, f, env_workers, out, err);
  } catch (const Error& e) {
    err << "gtadoc: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::bad_alloc&) {
    err << "gtadoc: out of memory\n";
    return exit_status(ErrorCode::kResource);
  } catch (const std::exception& e) {
    err << "gtadoc: " << e.what() << '\n';
    return exit_status(ErrorCode::kIo);
  }
  return exit_status(ErrorCode::kUsage);
}

}  // namespace gtadoc::cli
