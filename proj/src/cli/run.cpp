/*
 * Copyright 2026 The toolreason Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "commands.h"
#include "toolreason/errors.h"
#include "toolreason/io.h"

namespace toolreason::cli {
namespace {

// A config file is either a JSON object or a JSONL output whose first line
// is a header record.
Json load_config(const std::string& path) {
  const std::string text = io::read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (!j.is_discarded()) return j;
  const auto nl = text.find('\n');
  j = Json::parse(text.substr(0, nl), nullptr, false);
  if (j.is_discarded()) throw InputError("'" + path + "' is neither a JSON config nor a header line");
  return j;
}

struct Flags {
  std::string config;
  std::optional<double> alpha, delta, zeta, eps_clip, kl_coef, noise;
  std::string std_mode;
  bool literal_eq7 = false;
  std::optional<int> min_tokens, min_reflections, jobs, instances, fd_instances, theorem_instances;
  std::optional<std::uint64_t> seed;
  std::string oracle, registry, emit, input, gt, pred, out, report, script, templates, few_shots,
      lexicon, base_url, model;
  bool no_reference = false;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file, or an earlier output whose header to reuse");
  app.add_option("--alpha", f.alpha, "entropy scale");
  app.add_option("--delta", f.delta, "entropy advantage cap");
  app.add_option("--zeta", f.zeta, "degeneracy threshold");
  app.add_option("--eps-clip", f.eps_clip, "ratio clip");
  app.add_option("--kl-coef", f.kl_coef, "KL penalty weight");
  app.add_option("--std", f.std_mode, "population or sample")
      ->check(CLI::IsMember({"population", "sample"}));
  app.add_flag("--literal-eq7", f.literal_eq7, "signed vanishing test A < zeta");
  app.add_option("--min-tokens", f.min_tokens, "lazy token threshold");
  app.add_option("--min-reflections", f.min_reflections, "lazy reflection threshold");
  app.add_option("--lexicon", f.lexicon, "behaviour lexicon JSON");
  app.add_option("--oracle", f.oracle, "scripted or http")->check(CLI::IsMember({"scripted", "http"}));
  app.add_option("--script", f.script, "scripted oracle rules, or 'builtin'");
  app.add_option("--noise", f.noise, "base error rate of the noisy oracle wrapper");
  app.add_option("--base-url", f.base_url, "chat completions endpoint root");
  app.add_option("--model", f.model, "model name sent to the endpoint");
  app.add_option("--registry", f.registry, "tool registry JSON, or 'builtin'");
  app.add_option("--templates", f.templates, "directory of prompt templates");
  app.add_option("--few-shots", f.few_shots, "few-shot JSON array, 'builtin' or 'none'");
  app.add_flag("--no-reference", f.no_reference, "omit reference calls from decomposition prompts");
  app.add_option("--input", f.input, "input JSONL");
  app.add_option("--gt", f.gt, "ground-truth JSONL");
  app.add_option("--pred", f.pred, "prediction JSONL");
  app.add_option("--out", f.out, "output path, '-' for stdout");
  app.add_option("--report", f.report, "synthesis report path");
  app.add_option("--instances", f.instances, "gradcheck instance count for every check");
  app.add_option("--fd-instances", f.fd_instances, "finite-difference instances");
  app.add_option("--theorem-instances", f.theorem_instances, "theorem-check instances");
  app.add_option("--jobs", f.jobs, "worker threads");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--emit", f.emit, "jsonl, csv or plots")->check(CLI::IsMember({"jsonl", "csv", "plots"}));
}

template <typename T>
void set(const std::optional<T>& v, T& target) {
  if (v) target = *v;
}

void set(const std::string& v, std::string& target) {
  if (!v.empty()) target = v;
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) c = run_config_from_json(load_config(f.config));
  set(f.alpha, c.da.alpha);
  set(f.delta, c.da.delta);
  set(f.zeta, c.da.zeta);
  set(f.eps_clip, c.da.epsilon_clip);
  set(f.kl_coef, c.da.kl_coef);
  if (!f.std_mode.empty()) c.da.std_mode = f.std_mode == "sample" ? StdMode::Sample : StdMode::Population;
  if (f.literal_eq7) c.da.literal_eq7 = true;
  set(f.min_tokens, c.min_tokens);
  set(f.min_reflections, c.min_reflections);
  set(f.lexicon, c.lexicon);
  set(f.oracle, c.oracle);
  set(f.script, c.script);
  set(f.noise, c.noise);
  set(f.base_url, c.http.base_url);
  set(f.model, c.http.model);
  set(f.registry, c.registry);
  set(f.templates, c.templates);
  set(f.few_shots, c.few_shots);
  if (f.no_reference) c.prompt_with_reference = false;
  set(f.input, c.input);
  set(f.gt, c.gt);
  set(f.pred, c.pred);
  set(f.out, c.out);
  set(f.report, c.report);
  if (f.instances) c.fd_instances = c.theorem_instances = *f.instances;
  set(f.fd_instances, c.fd_instances);
  set(f.theorem_instances, c.theorem_instances);
  set(f.jobs, c.jobs);
  set(f.seed, c.seed);
  set(f.emit, c.emit);
  validate(c);
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tool-call reasoning toolkit: rewards, advantages, lazy-reasoning analysis and "
               "trajectory synthesis"};
  app.name("toolreason");
  app.require_subcommand(1);
  Flags flags;
  add_flags(app, flags);

  using Command = int (*)(const RunConfig&, Sink&, std::ostream&);
  const std::pair<const char*, std::pair<const char*, Command>> table[] = {
      {"score", {"score predictions against ground-truth calls", cmd_score}},
      {"advantage", {"group advantages with entropy reshaping", cmd_advantage}},
      {"gradcheck", {"toy-policy gradient and theorem checks", cmd_gradcheck}},
      {"analyze", {"lazy-reasoning and behaviour statistics", cmd_analyze}},
      {"synthesize", {"build verified reasoning trajectories from seeds", cmd_synthesize}},
      {"verify", {"re-verify synthesized chat records", cmd_verify}},
  };
  for (const auto& [name, entry] : table) app.add_subcommand(name, entry.first)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  try {
    const RunConfig cfg = resolve(flags);
    for (const auto& [name, entry] : table) {
      if (app.got_subcommand(name)) {
        Sink sink(cfg, name, out);
        return entry.second(cfg, sink, err);
      }
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const OracleUnavailable& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace toolreason::cli
