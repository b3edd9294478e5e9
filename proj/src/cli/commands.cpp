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

#include "commands.h"

#include <charconv>
#include <iomanip>
#include <map>
#include <memory>
#include <set>

#include "toolreason/errors.h"
#include "toolreason/gradcheck.h"
#include "toolreason/io.h"
#include "toolreason/kernels.h"
#include "toolreason/pipeline.h"

namespace toolreason::cli {
namespace {

std::string record_id(const Json& row, std::size_t index) {
  if (row.contains("id")) {
    const Json& id = row.at("id");
    if (id.is_string()) return id.get<std::string>();
    if (id.is_number_integer()) return id.dump();
    throw InputError("row " + std::to_string(index + 1) + ": 'id' must be a string or integer");
  }
  return std::to_string(index);
}

std::vector<ToolCall> calls_field(const Json& row, std::size_t index) {
  const char* key = row.contains("ground_truth") ? "ground_truth" : "reference";
  if (!row.contains(key)) return {};
  const Json& list = row.at(key);
  if (!list.is_array()) {
    throw InputError("row " + std::to_string(index + 1) + ": '" + key + "' must be an array");
  }
  std::vector<ToolCall> calls;
  for (const auto& c : list) calls.push_back(tool_call_from_json(c));
  return calls;
}

std::string string_field(const Json& row, const char* key, std::size_t index) {
  if (!row.contains(key)) return "";
  if (!row.at(key).is_string()) {
    throw InputError("row " + std::to_string(index + 1) + ": '" + key + "' must be a string");
  }
  return row.at(key).get<std::string>();
}

void require(const std::string& value, const char* flag, const char* command) {
  if (value.empty()) throw InputError(std::string(command) + " needs " + flag);
}

Json with_leading(Json front, const Json& rest) {
  for (const auto& [k, v] : rest.items()) front[k] = v;
  return front;
}

BehaviorLexicon lexicon_for(const RunConfig& cfg) {
  return cfg.lexicon.empty() ? BehaviorLexicon::defaults() : BehaviorLexicon::load(cfg.lexicon);
}

std::shared_ptr<const OracleClient> make_oracle(const RunConfig& cfg) {
  std::shared_ptr<const OracleClient> oracle;
  if (cfg.oracle == "http") {
    oracle = std::make_shared<HttpOracle>(cfg.http);
  } else {
    oracle = std::make_shared<ScriptedOracle>(cfg.script == "builtin" ? builtin_script()
                                                                      : ScriptedOracle::load(cfg.script));
  }
  if (cfg.noise > 0.0) {
    oracle = std::make_shared<NoisyOracle>(oracle, NoiseModel{cfg.noise, 0.5, 0.5}, cfg.seed);
  }
  return oracle;
}

std::vector<std::string> few_shots_for(const RunConfig& cfg) {
  if (cfg.few_shots == "none" || cfg.few_shots.empty()) return {};
  if (cfg.few_shots == "builtin") return builtin_few_shots();
  const Json j = io::read_json_file(cfg.few_shots);
  if (!j.is_array()) throw InputError("few-shot file must hold a JSON array of strings");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) throw InputError("few-shot file must hold a JSON array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

Sink::Sink(const RunConfig& cfg, const std::string& command, std::ostream& stdout_stream)
    : path_(cfg.out), stdout_(stdout_stream), csv_(cfg.emit != "jsonl") {
  const Json header{{"type", "header"}, {"command", command}, {"config", to_json(cfg)}};
  if (csv_) {
    line("# " + header.dump());
  } else {
    record(header);
  }
}

void Sink::row(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) s += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      s += f;
      continue;
    }
    s += '"';
    for (char c : f) {
      if (c == '"') s += '"';
      s += c;
    }
    s += '"';
  }
  line(s);
}

void Sink::flush() {
  if (path_.empty() || path_ == "-") {
    stdout_ << buf_.str();
    stdout_.flush();
  } else {
    io::write_text_file(path_, buf_.str());
  }
}

std::string csv_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

int cmd_score(const RunConfig& cfg, Sink& out, std::ostream& err) {
  std::vector<std::string> ids;
  std::vector<kernels::ScoreItem> items;

  if (!cfg.input.empty()) {
    const auto rows = io::read_jsonl(cfg.input);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ids.push_back(record_id(rows[i], i));
      items.push_back({string_field(rows[i], "raw", i), calls_field(rows[i], i)});
    }
  } else if (!cfg.gt.empty() && !cfg.pred.empty()) {
    const auto gt_rows = io::read_jsonl(cfg.gt);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < gt_rows.size(); ++i) {
      const std::string id = record_id(gt_rows[i], i);
      if (!index.emplace(id, i).second) throw InputError("duplicate id '" + id + "' in " + cfg.gt);
      ids.push_back(id);
      items.push_back({"", calls_field(gt_rows[i], i)});
    }
    const auto pred_rows = io::read_jsonl(cfg.pred);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < pred_rows.size(); ++i) {
      const std::string id = record_id(pred_rows[i], i);
      auto it = index.find(id);
      if (it == index.end()) throw InputError("prediction '" + id + "' has no ground truth");
      if (!seen.insert(id).second) throw InputError("duplicate id '" + id + "' in " + cfg.pred);
      items[it->second].raw = string_field(pred_rows[i], "raw", i);
    }
  } else {
    throw InputError("score needs --input, or both --gt and --pred");
  }

  const auto results = kernels::score_batch(items, cfg.jobs, cfg.weights, cfg.parse);

  RewardBreakdown mean;
  for (const auto& r : results) {
    mean.format += r.format;
    mean.structure += r.structure;
    mean.key += r.key;
    mean.value += r.value;
    mean.total += r.total;
  }
  const double n = results.empty() ? 1.0 : static_cast<double>(results.size());
  mean.format /= n;
  mean.structure /= n;
  mean.key /= n;
  mean.value /= n;
  mean.total /= n;

  if (cfg.emit == "jsonl") {
    for (std::size_t i = 0; i < results.size(); ++i) out.record(with_leading({{"id", ids[i]}}, to_json(results[i])));
    Json summary = to_json(mean);
    summary.erase("total");
    summary = Json{{"type", "summary"}, {"rows", results.size()}, {"mean", summary},
                   {"mean_total", mean.total}};
    out.record(summary);
  } else if (cfg.emit == "csv") {
    out.row({"id", "format", "struct", "key", "value", "total"});
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      out.row({ids[i], csv_number(r.format), csv_number(r.structure), csv_number(r.key),
               csv_number(r.value), csv_number(r.total)});
    }
  } else {
    out.row({"component", "mean"});
    out.row({"format", csv_number(mean.format)});
    out.row({"struct", csv_number(mean.structure)});
    out.row({"key", csv_number(mean.key)});
    out.row({"value", csv_number(mean.value)});
    out.row({"total", csv_number(mean.total)});
  }
  out.flush();

  err << std::fixed << std::setprecision(4) << "rows    format  struct  key     value   total\n"
      << std::left << std::setw(8) << results.size() << std::setw(8) << mean.format
      << std::setw(8) << mean.structure << std::setw(8) << mean.key << std::setw(8) << mean.value
      << mean.total << "\n";
  return kExitOk;
}

int cmd_advantage(const RunConfig& cfg, Sink& out, std::ostream&) {
  require(cfg.input, "--input", "advantage");
  const auto rows = io::read_jsonl(cfg.input);
  std::vector<RolloutGroup> groups;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Json& row = rows[i];
    const std::string where = "group " + std::to_string(i + 1);
    if (!row.is_object() || !row.contains("rollouts") || !row.at("rollouts").is_array()) {
      throw InputError(where + ": needs a 'rollouts' array");
    }
    RolloutGroup g;
    g.prompt_id = row.contains("prompt_id") ? record_id(Json{{"id", row.at("prompt_id")}}, i)
                                            : std::to_string(i);
    for (const auto& ro : row.at("rollouts")) {
      if (!ro.is_object() || !ro.contains("reward") || !ro.at("reward").is_number()) {
        throw InputError(where + ": every rollout needs a numeric 'reward'");
      }
      g.rewards.push_back(ro.at("reward").get<double>());
      Trajectory t;
      if (ro.contains("tokens")) {
        if (!ro.at("tokens").is_array()) throw InputError(where + ": 'tokens' must be an array");
        std::vector<TokenRecord> toks;
        for (const auto& tk : ro.at("tokens")) {
          if (!tk.is_object() || !tk.contains("logprob") || !tk.at("logprob").is_number()) {
            throw InputError(where + ": every token needs a numeric 'logprob'");
          }
          TokenRecord rec;
          rec.logprob_chosen = tk.at("logprob").get<double>();
          rec.token_id = tk.value("token_id", 0LL);
          if (tk.contains("entropy") && !tk.at("entropy").is_null()) {
            rec.entropy = tk.at("entropy").get<double>();
          }
          if (tk.contains("ratio_old") && !tk.at("ratio_old").is_null()) {
            rec.ratio_old = tk.at("ratio_old").get<double>();
          }
          toks.push_back(rec);
        }
        t.tokens = std::move(toks);
      }
      g.trajectories.push_back(std::move(t));
    }
    groups.push_back(std::move(g));
  }

  const auto results = kernels::advantage_batch(groups, cfg.jobs, cfg.da);

  if (cfg.emit == "jsonl") {
    for (const auto& g : results) {
      for (std::size_t i = 0; i < g.tokens.size(); ++i) {
        for (std::size_t t = 0; t < g.tokens[i].size(); ++t) {
          const auto& rec = g.tokens[i][t];
          out.record({{"type", "token"},
                      {"prompt_id", g.prompt_id},
                      {"rollout", i},
                      {"t", t},
                      {"a_raw", rec.a_raw},
                      {"a_hat", rec.a_hat},
                      {"source", to_string(rec.source)},
                      {"entropy", rec.entropy},
                      {"estimator", to_string(rec.estimator)}});
        }
      }
      out.record({{"type", "group"},
                  {"prompt_id", g.prompt_id},
                  {"mean", g.mean},
                  {"std", g.std},
                  {"advantages", g.per_rollout},
                  {"tokens", g.token_count()},
                  {"entropy_fraction", g.entropy_fraction()}});
    }
  } else if (cfg.emit == "csv") {
    out.row({"prompt_id", "rollout", "t", "a_raw", "a_hat", "source", "entropy", "estimator"});
    for (const auto& g : results) {
      for (std::size_t i = 0; i < g.tokens.size(); ++i) {
        for (std::size_t t = 0; t < g.tokens[i].size(); ++t) {
          const auto& rec = g.tokens[i][t];
          out.row({g.prompt_id, std::to_string(i), std::to_string(t), csv_number(rec.a_raw),
                   csv_number(rec.a_hat), std::string(to_string(rec.source)), csv_number(rec.entropy),
                   std::string(to_string(rec.estimator))});
        }
      }
    }
  } else {
    out.row({"prompt_id", "std", "entropy_fraction"});
    for (const auto& g : results) {
      out.row({g.prompt_id, csv_number(g.std), csv_number(g.entropy_fraction())});
    }
  }
  out.flush();
  return kExitOk;
}

int cmd_gradcheck(const RunConfig& cfg, Sink& out, std::ostream& err) {
  toy::GradcheckOptions opts;
  opts.seed = cfg.seed;
  opts.fd_instances = cfg.fd_instances;
  opts.theorem_instances = cfg.theorem_instances;
  opts.da = cfg.da;
  const toy::GradcheckReport report = toy::run_gradcheck(opts);

  if (cfg.emit == "jsonl") {
    for (const auto& c : report.checks) {
      out.record({{"type", "check"}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    out.record({{"type", "summary"}, {"passed", report.all_passed()}});
  } else if (cfg.emit == "csv") {
    out.row({"check", "passed", "detail"});
    for (const auto& c : report.checks) out.row({c.name, c.passed ? "1" : "0", c.detail});
  } else {
    out.row({"instance", "mode", "relative_error"});
    for (const auto& r : report.residuals) {
      out.row({std::to_string(r.instance), r.mode, csv_number(r.relative_error)});
    }
  }
  out.flush();

  for (const auto& c : report.checks) {
    err << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  return report.all_passed() ? kExitOk : kExitValidation;
}

int cmd_analyze(const RunConfig& cfg, Sink& out, std::ostream& err) {
  require(cfg.input, "--input", "analyze");
  const auto rows = io::read_jsonl(cfg.input);
  std::vector<std::string> ids;
  std::vector<std::string> tags;
  std::vector<std::string> raws;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back(record_id(rows[i], i));
    tags.push_back(string_field(rows[i], "tag", i));
    std::string raw = string_field(rows[i], "raw", i);
    if (raw.empty() && rows[i].contains("reasoning")) {
      raw = cfg.parse.think_open + "\n" + string_field(rows[i], "reasoning", i) + "\n" +
            cfg.parse.think_close + "\n\n";
    }
    if (raw.empty()) throw InputError("row " + std::to_string(i + 1) + ": needs 'raw' or 'reasoning'");
    raws.push_back(std::move(raw));
  }

  const BehaviorLexicon lexicon = lexicon_for(cfg);
  LazyConfig lazy;
  lazy.min_tokens = cfg.min_tokens;
  lazy.min_reflections = cfg.min_reflections;
  lazy.reflection_lexicon = lexicon.of(Behavior::Reflection);
  const auto reports = kernels::lazy_batch(raws, cfg.jobs, lazy, lexicon, cfg.parse);

  std::map<Behavior, std::size_t> counts;
  std::size_t thoughts = 0;
  std::size_t lazy_count = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_tag;  // lazy, total
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const auto& [b, n] : reports[i].behavior_histogram) {
      counts[b] += n;
      thoughts += n;
    }
    if (reports[i].is_lazy) ++lazy_count;
    auto& tag = by_tag[tags[i].empty() ? "untagged" : tags[i]];
    tag.first += reports[i].is_lazy ? 1 : 0;
    ++tag.second;
  }
  auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };

  if (cfg.emit == "jsonl") {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out.record(with_leading({{"id", ids[i]}, {"tag", tags[i]}}, to_json(reports[i])));
    }
    Json dist = Json::object();
    for (const auto& [b, n] : counts) dist[std::string(to_string(b))] = ratio(n, thoughts);
    Json tags_json = Json::object();
    for (const auto& [tag, lt] : by_tag) {
      tags_json[tag] = {{"lazy", lt.first}, {"total", lt.second}, {"ratio", ratio(lt.first, lt.second)}};
    }
    out.record({{"type", "aggregate"},
                {"trajectories", reports.size()},
                {"lazy", lazy_count},
                {"lazy_ratio", ratio(lazy_count, reports.size())},
                {"thoughts", thoughts},
                {"behavior_distribution", dist},
                {"by_tag", tags_json}});
  } else if (cfg.emit == "csv") {
    out.row({"id", "tag", "token_count", "reflection_count", "is_lazy"});
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out.row({ids[i], tags[i], std::to_string(reports[i].token_count),
               std::to_string(reports[i].reflection_count), reports[i].is_lazy ? "1" : "0"});
    }
  } else {
    out.row({"tag", "lazy", "total", "ratio"});
    for (const auto& [tag, lt] : by_tag) {
      out.row({tag, std::to_string(lt.first), std::to_string(lt.second),
               csv_number(ratio(lt.first, lt.second))});
    }
  }
  out.flush();
  err << lazy_count << "/" << reports.size() << " trajectories flagged as lazy\n";
  return kExitOk;
}

int cmd_synthesize(const RunConfig& cfg, Sink& out, std::ostream& err) {
  std::vector<SeedSample> seeds;
  if (cfg.input.empty() || cfg.input == "builtin") {
    seeds = builtin_seeds();
  } else {
    const auto rows = io::read_jsonl(cfg.input);
    for (const auto& r : rows) seeds.push_back(seed_sample_from_json(r));
  }

  const auto oracle = make_oracle(cfg);
  const ToolRegistry registry =
      cfg.registry == "builtin" ? ToolRegistry::builtin() : ToolRegistry::load(cfg.registry);
  PipelineOptions opts;
  opts.templates = cfg.templates.empty() ? TemplateSet::defaults() : TemplateSet::load(cfg.templates);
  opts.params.temperature = cfg.http.temperature;
  opts.params.max_tokens = cfg.http.max_tokens;
  opts.prompt_with_reference = cfg.prompt_with_reference;
  opts.few_shots = few_shots_for(cfg);

  const SynthesisResult result = synthesize(seeds, *oracle, registry, opts, cfg.jobs);

  if (cfg.emit == "jsonl") {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto& o = result.outcomes[i];
      if (o.trajectory) out.record(to_chat_record(seeds[i], *o.trajectory));
    }
  } else {
    out.row({"outcome", "count"});
    out.row({"verified", std::to_string(result.report.verified)});
    for (const auto& [k, v] : result.report.failures) out.row({k, std::to_string(v)});
  }
  out.flush();

  Json report = result.report.to_json();
  Json samples = Json::array();
  for (const auto& o : result.outcomes) {
    Json s{{"id", o.id}, {"status", o.trajectory ? "verified" : "rejected"}};
    if (o.plan) s["plan"] = to_json(*o.plan);
    if (o.failure) {
      s["failure"] = *o.failure;
      s["message"] = o.message;
    }
    samples.push_back(s);
  }
  report["samples"] = samples;
  if (!cfg.report.empty()) io::write_text_file(cfg.report, report.dump(2) + "\n");
  err << "verified " << result.report.verified << "/" << result.report.total << " (success rate "
      << result.report.success_rate() << ")\n";
  for (const auto& [k, v] : result.report.failures) err << "  " << k << ": " << v << "\n";

  return result.report.failures.count(kOracleUnavailable) != 0 ? kExitIo : kExitOk;
}

int cmd_verify(const RunConfig& cfg, Sink& out, std::ostream& err) {
  require(cfg.input, "--input", "verify");
  const auto rows = io::read_jsonl(cfg.input);
  std::size_t ok = 0;
  std::vector<std::pair<std::string, bool>> verdicts;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool v = verify_chat_record(rows[i]);
    ok += v ? 1 : 0;
    verdicts.emplace_back(record_id(rows[i], i), v);
  }
  if (cfg.emit == "jsonl") {
    for (const auto& [id, v] : verdicts) out.record({{"type", "verification"}, {"id", id}, {"verified", v}});
    out.record({{"type", "summary"}, {"records", rows.size()}, {"verified", ok}});
  } else {
    out.row({"id", "verified"});
    for (const auto& [id, v] : verdicts) out.row({id, v ? "1" : "0"});
  }
  out.flush();
  err << ok << "/" << rows.size() << " records verified\n";
  return ok == rows.size() ? kExitOk : kExitValidation;
}

}  // namespace toolreason::cli
