// Copyright 2026 The lbpl-ntm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lbpl/checkpoint.hpp"
#include "lbpl/corpus.hpp"
#include "lbpl/generative.hpp"
#include "lbpl/geweke.hpp"
#include "lbpl/metrics.hpp"
#include "lbpl/sampler.hpp"

namespace lbpl::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Options {
  std::string mode = "infer";
  std::string corpus, labels, truth, vocab, out;
  std::size_t topics = 128;
  std::size_t iters = 3000;
  std::size_t burn_in = 0;
  std::size_t chains = 1;
  std::uint64_t seed = 0;
  double zeta = 1.0;
  double beta = 0.01;
  double a_gamma = 1.0;
  double b_gamma = 0.001;
  double a_alpha = 5.0;
  double b_alpha = 0.1;
  std::size_t audit_every = 0;
  bool average_metrics = false;

  // generate
  PlantedCorpusOptions planted;
  // geweke
  std::size_t docs = 3;
  std::size_t doc_length = 4;
  std::size_t vocab_size = 3;
  std::size_t geweke_topics = 2;
  std::size_t samples = 5000;
  std::size_t thin = 10;
  std::optional<double> gamma, alpha;
  bool inject_fault = false;
};

std::string real(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

HyperParams hypers_from(const Options& o, std::size_t vocab_size) {
  HyperParams h = HyperParams::defaults(vocab_size, o.topics, o.zeta, o.beta);
  h.a_gamma = o.a_gamma;
  h.b_gamma = o.b_gamma;
  h.a_alpha = o.a_alpha;
  h.b_alpha = o.b_alpha;
  h.validate(vocab_size);
  return h;
}

void write_config(const Options& o, const fs::path& path) {
  auto out = open_output(path);
  out << "mode = " << o.mode << '\n';
  if (o.mode == "infer") {
    out << "corpus = " << o.corpus << '\n'
        << "labels = " << o.labels << '\n'
        << "vocab = " << o.vocab << '\n'
        << "truth = " << o.truth << '\n'
        << "topics = " << o.topics << '\n'
        << "zeta = " << real(o.zeta) << '\n'
        << "beta = " << real(o.beta) << '\n'
        << "a_gamma = " << real(o.a_gamma) << '\n'
        << "b_gamma = " << real(o.b_gamma) << '\n'
        << "a_alpha = " << real(o.a_alpha) << '\n'
        << "b_alpha = " << real(o.b_alpha) << '\n'
        << "iters = " << o.iters << '\n'
        << "burn_in = " << o.burn_in << '\n'
        << "chains = " << o.chains << '\n'
        << "seed = " << o.seed << '\n'
        << "audit_every = " << o.audit_every << '\n'
        << "average_metrics = " << (o.average_metrics ? "true" : "false") << '\n';
  } else if (o.mode == "generate") {
    const auto& p = o.planted;
    out << "docs = " << p.num_docs << '\n'
        << "doc_length = " << p.doc_length << '\n'
        << "categories = " << p.categories << '\n'
        << "known = " << p.known << '\n'
        << "label_fraction = " << real(p.label_fraction) << '\n'
        << "vocab_size = " << p.vocab_size << '\n'
        << "gen_topics = " << p.num_topics << '\n'
        << "dominance = " << real(p.dominance) << '\n'
        << "zeta = " << real(p.zeta) << '\n'
        << "beta = " << real(p.beta) << '\n'
        << "gamma = " << real(p.gamma) << '\n'
        << "alpha = " << real(p.alpha) << '\n'
        << "seed = " << o.seed << '\n';
  } else {
    out << "docs = " << o.docs << '\n'
        << "doc_length = " << o.doc_length << '\n'
        << "topics = " << o.topics << '\n'
        << "vocab_size = " << o.vocab_size << '\n'
        << "zeta = " << real(o.zeta) << '\n'
        << "beta = " << real(o.beta) << '\n'
        << "gamma = " << (o.gamma ? real(*o.gamma) : "resampled") << '\n'
        << "alpha = " << (o.alpha ? real(*o.alpha) : "resampled") << '\n'
        << "samples = " << o.samples << '\n'
        << "thin = " << o.thin << '\n'
        << "seed = " << o.seed << '\n'
        << "inject_fault = " << (o.inject_fault ? "true" : "false") << '\n';
  }
}

void write_trace(const ChainTrace& trace, const fs::path& path) {
  auto out = open_output(path);
  out << "iter,K,M,gamma,alpha,log_joint\n";
  for (const auto& r : trace) {
    out << r.iter << ',' << r.num_dishes << ',' << r.num_tables << ',' << real(r.gamma) << ','
        << real(r.alpha) << ',' << real(r.log_joint) << '\n';
  }
}

void write_assignments(const std::vector<CategoryId>& assignment, std::size_t num_known,
                       const fs::path& path) {
  auto out = open_output(path);
  for (std::size_t d = 0; d < assignment.size(); ++d) {
    const bool known = static_cast<std::size_t>(assignment[d]) < num_known;
    out << d << '\t' << assignment[d] << '\t' << (known ? "known" : "new") << '\n';
  }
}

struct ChainOutput {
  ChainTrace trace;
  std::optional<MetricReport> report;
  // Means over post-burn-in sweeps when score averaging is enabled.
  std::size_t averaged_samples = 0;
  double averaged_nmi = 0.0, averaged_ari = 0.0, averaged_f1 = 0.0;
};

Json chain_json(const ChainOutput& output, std::size_t chain) {
  Json doc;
  doc["chain"] = chain;
  if (output.report) {
    const Json report = Json::parse(output.report->to_json());
    for (const auto& [key, value] : report.items()) doc[key] = value;
  }
  if (output.averaged_samples > 0) {
    doc["averaged"] = {{"samples", output.averaged_samples},
                       {"nmi", output.averaged_nmi},
                       {"ari", output.averaged_ari},
                       {"avg_f1", output.averaged_f1}};
  }
  return doc;
}

ChainOutput run_one_chain(const Options& o, const Corpus& corpus, const HyperParams& hypers,
                          const std::optional<std::vector<CategoryId>>& truth, std::size_t c) {
  ChainConfig config;
  config.max_iter = o.iters;
  config.burn_in = o.burn_in;
  config.seed = derive_seed(o.seed, c);
  config.audit_every = o.audit_every;

  ChainOutput output;
  SweepObserver observer;
  if (o.average_metrics && truth) {
    observer = [&](std::size_t iter, const CrfState& state) {
      if (iter <= o.burn_in) return;
      const MetricReport r = evaluate(corpus, assign_documents(state), *truth);
      ++output.averaged_samples;
      output.averaged_nmi += r.nmi;
      output.averaged_ari += r.ari;
      output.averaged_f1 += r.f1.average;
    };
  }
  ChainResult result = run_chain(corpus, hypers, config, observer);
  if (output.averaged_samples > 0) {
    const auto n = static_cast<double>(output.averaged_samples);
    output.averaged_nmi /= n;
    output.averaged_ari /= n;
    output.averaged_f1 /= n;
  }

  const fs::path dir = fs::path(o.out) / ("chain_" + std::to_string(c));
  fs::create_directories(dir);
  const auto assignment = assign_documents(result.state);
  write_trace(result.trace, dir / "trace.csv");
  write_assignments(assignment, corpus.num_known(), dir / "assignments.tsv");
  save_checkpoint(result.state, dir / "final.ckpt");
  if (truth) {
    output.report = evaluate(corpus, assignment, *truth);
    open_output(dir / "metrics.json") << chain_json(output, c).dump(2) << '\n';
  }
  output.trace = std::move(result.trace);
  return output;
}

int run_infer(const Options& o, std::ostream& out) {
  const auto optional_path = [](const std::string& p) {
    return p.empty() ? std::nullopt : std::optional<fs::path>(p);
  };
  const Corpus corpus = load_corpus(o.corpus, optional_path(o.labels), optional_path(o.vocab));
  std::optional<std::vector<CategoryId>> truth;
  if (!o.truth.empty()) truth = ground_truth_partition(corpus, o.truth);
  const HyperParams hypers = hypers_from(o, corpus.vocab_size());
  ChainConfig check;
  check.max_iter = o.iters;
  check.burn_in = o.burn_in;
  check.validate();
  if (o.chains == 0) throw std::invalid_argument("--chains must be >= 1");

  fs::create_directories(o.out);
  write_config(o, fs::path(o.out) / "config.txt");
  out << "corpus: " << corpus.num_documents() << " documents, " << corpus.num_tokens()
      << " tokens, " << corpus.num_known() << " known categories\n";

  // Chains are independent; each writes only its own directory, and results
  // are collected by index so the output does not depend on scheduling.
  std::vector<ChainOutput> outputs(o.chains);
  std::vector<std::exception_ptr> errors(o.chains);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t c = next++; c < o.chains; c = next++) {
      try {
        outputs[c] = run_one_chain(o, corpus, hypers, truth, c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  const std::size_t hardware = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(o.chains, hardware);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Top-level assignments come from chain 0.
  fs::copy_file(fs::path(o.out) / "chain_0" / "assignments.tsv",
                fs::path(o.out) / "assignments.tsv", fs::copy_options::overwrite_existing);

  std::vector<ChainTrace> traces;
  for (auto& output : outputs) traces.push_back(output.trace);
  {
    auto hist = open_output(fs::path(o.out) / "k_histogram.tsv");
    hist << "K\tfrequency\n";
    for (const auto& [k, f] : k_histogram(traces, o.burn_in)) hist << k << '\t' << real(f) << '\n';
  }

  for (std::size_t c = 0; c < outputs.size(); ++c) {
    const auto& last = outputs[c].trace.back();
    out << "chain " << c << ": K=" << last.num_dishes << " M=" << last.num_tables
        << " gamma=" << real(last.gamma) << " alpha=" << real(last.alpha) << '\n';
  }

  if (truth) {
    Json doc;
    doc["chains"] = Json::array();
    double nmi = 0.0, ari = 0.0, f1 = 0.0;
    for (std::size_t c = 0; c < outputs.size(); ++c) {
      doc["chains"].push_back(chain_json(outputs[c], c));
      const auto& o_c = outputs[c];
      const bool averaged = o_c.averaged_samples > 0;
      nmi += averaged ? o_c.averaged_nmi : o_c.report->nmi;
      ari += averaged ? o_c.averaged_ari : o_c.report->ari;
      f1 += averaged ? o_c.averaged_f1 : o_c.report->f1.average;
    }
    const auto n = static_cast<double>(outputs.size());
    doc["mean"] = {{"nmi", nmi / n}, {"ari", ari / n}, {"avg_f1", f1 / n}};
    open_output(fs::path(o.out) / "metrics.json") << doc.dump(2) << '\n';
    out << "NMI=" << real(nmi / n) << " ARI=" << real(ari / n) << " avgF1=" << real(f1 / n)
        << '\n';
  }
  return 0;
}

int run_generate(const Options& o, std::ostream& out) {
  const GenSpec spec = planted_spec(o.planted);
  Rng rng(o.seed, 0, 0);
  const SyntheticCorpus sample = forward_sample(spec, rng);
  write_synthetic(sample, o.out);
  write_config(o, fs::path(o.out) / "config.txt");
  out << "wrote " << sample.corpus.num_documents() << " documents ("
      << sample.corpus.labeled_documents().size() << " labeled) to " << o.out << '\n';
  return 0;
}

int run_geweke(const Options& o, std::ostream& out) {
  HyperParams h = hypers_from(o, o.vocab_size);
  GenSpec spec = GenSpec::uniform(o.docs, o.doc_length, std::move(h));
  spec.fixed_gamma = o.gamma;
  spec.fixed_alpha = o.alpha;
  spec.validate();
  SweepOptions sweep;
  if (o.inject_fault) sweep.fault = InjectedFault::kStaleOccupancy;

  const auto marginal = geweke_marginal_run(spec, o.samples, o.seed);
  const auto successive = geweke_successive_run(spec, o.samples, o.thin, o.seed + 1, sweep);
  const auto comparisons = geweke_compare(marginal, successive);

  fs::create_directories(o.out);
  write_config(o, fs::path(o.out) / "config.txt");
  auto table = open_output(fs::path(o.out) / "geweke.tsv");
  table << "statistic\tks_distance\tn_marginal\tn_effective\tp_value\n";
  for (const auto& c : comparisons) {
    table << c.statistic << '\t' << real(c.ks_distance) << '\t' << real(c.effective_a) << '\t'
          << real(c.effective_b) << '\t' << real(c.p_value) << '\n';
    out << c.statistic << ": D=" << c.ks_distance << " p=" << c.p_value << '\n';
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Label-biased HDP topic model with collapsed Gibbs sampling"};
  app.set_help_all_flag("--help-all");
  app.require_subcommand(0, 1);

  auto add_model = [&](CLI::App* cmd, std::size_t& topics) {
    cmd->add_option("--topics", topics, "Number of topics L")->capture_default_str();
    cmd->add_option("--zeta", o.zeta, "Symmetric Dirichlet on topic mixtures")
        ->capture_default_str();
    cmd->add_option("--beta", o.beta, "Symmetric Dirichlet on topic-word distributions")
        ->capture_default_str();
    cmd->add_option("--a-gamma", o.a_gamma, "Gamma shape of gamma")->capture_default_str();
    cmd->add_option("--b-gamma", o.b_gamma, "Gamma scale of gamma")->capture_default_str();
    cmd->add_option("--a-alpha", o.a_alpha, "Gamma shape of alpha")->capture_default_str();
    cmd->add_option("--b-alpha", o.b_alpha, "Gamma scale of alpha")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Base random seed")->capture_default_str();
  };

  auto* infer = app.add_subcommand("infer", "Run Gibbs chains on a corpus (default)");
  auto* generate = app.add_subcommand("generate", "Write a synthetic planted corpus");
  auto* geweke = app.add_subcommand("geweke", "Joint-distribution sampler check");

  // The infer options also live on the top-level app so the subcommand
  // name can be omitted.
  for (auto* cmd : {static_cast<CLI::App*>(&app), infer}) {
    add_model(cmd, o.topics);
    cmd->add_option("--corpus", o.corpus, "Bag-of-words corpus file");
    cmd->add_option("--labels", o.labels, "Labels file");
    cmd->add_option("--vocab", o.vocab, "Vocabulary file, one term per line");
    cmd->add_option("--truth", o.truth, "Ground-truth categories for evaluation");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--iters", o.iters, "Number of sweeps")->capture_default_str();
    cmd->add_option("--burn-in", o.burn_in, "Sweeps excluded from summaries")
        ->capture_default_str();
    cmd->add_option("--chains", o.chains, "Independent chains")->capture_default_str();
    cmd->add_option("--audit-every", o.audit_every, "Audit the state every N sweeps (0 = off)")
        ->capture_default_str();
    cmd->add_flag("--average-metrics", o.average_metrics,
                  "Average scores over post-burn-in sweeps");
  }

  auto& p = o.planted;
  generate->add_option("--out", o.out, "Output directory")->required();
  generate->add_option("--docs", p.num_docs, "Documents")->capture_default_str();
  generate->add_option("--doc-length", p.doc_length, "Tokens per document")
      ->capture_default_str();
  generate->add_option("--categories", p.categories, "Planted categories")
      ->capture_default_str();
  generate->add_option("--known", p.known, "Categories with labeled documents")
      ->capture_default_str();
  generate->add_option("--label-fraction", p.label_fraction,
                       "Fraction of a known category's documents that are labeled")
      ->capture_default_str();
  generate->add_option("--vocab-size", p.vocab_size, "Vocabulary size")->capture_default_str();
  generate->add_option("--gen-topics", p.num_topics, "Topics used to generate")
      ->capture_default_str();
  generate->add_option("--dominance", p.dominance, "Mass of a category's own topics")
      ->capture_default_str();
  generate->add_option("--zeta", p.zeta, "Dirichlet on topic mixtures")->capture_default_str();
  generate->add_option("--beta", p.beta, "Dirichlet on topic-word distributions")
      ->capture_default_str();
  generate->add_option("--gamma", p.gamma, "Top-level concentration")->capture_default_str();
  generate->add_option("--alpha", p.alpha, "Document concentration")->capture_default_str();
  generate->add_option("--seed", o.seed, "Random seed")->capture_default_str();

  add_model(geweke, o.geweke_topics);
  geweke->add_option("--out", o.out, "Output directory")->required();
  geweke->add_option("--docs", o.docs, "Documents")->capture_default_str();
  geweke->add_option("--doc-length", o.doc_length, "Tokens per document")->capture_default_str();
  geweke->add_option("--vocab-size", o.vocab_size, "Vocabulary size")->capture_default_str();
  geweke->add_option("--samples", o.samples, "Draws per side")->capture_default_str();
  geweke->add_option("--thin", o.thin, "Steps between successive draws")->capture_default_str();
  geweke->add_option("--gamma", o.gamma, "Fix gamma instead of resampling it");
  geweke->add_option("--alpha", o.alpha, "Fix alpha instead of resampling it");
  geweke->add_flag("--inject-fault", o.inject_fault, "Use a deliberately broken seating kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*generate) {
      o.mode = "generate";
      return run_generate(o, out);
    }
    if (*geweke) {
      o.mode = "geweke";
      o.topics = o.geweke_topics;
      return run_geweke(o, out);
    }
    if (o.corpus.empty() || o.out.empty()) {
      err << "error: --corpus and --out are required\n\n" << app.help();
      return 2;
    }
    return run_infer(o, out);
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lbpl::cli
