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

#include "toolreason/reward.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <string>

namespace toolreason {
namespace {

const ToolCall* aligned_pred(const std::vector<ToolCall>& pred, const AlignedPair& pair) {
  if (!pair.pred || *pair.pred >= pred.size()) return nullptr;
  return &pred[*pair.pred];
}

// Convention for ground truth without any parameter keys: full credit iff the
// prediction has the same number of calls (for a tool-free turn: none).
double keyless_score(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred) {
  return gt.size() == pred.size() ? 1.0 : 0.0;
}

}  // namespace

Json to_json(const RewardBreakdown& r) {
  return Json{{"format", r.format}, {"struct", r.structure}, {"key", r.key},
              {"value", r.value},   {"total", r.total}};
}

double format_reward(std::string_view raw, const ParseConfig& cfg) {
  const std::string open = cfg.think_open + "\n";
  const std::string close = "\n" + cfg.think_close + "\n\n";
  if (raw.substr(0, open.size()) != open) return 0.0;
  const auto at = raw.find(close, open.size());
  if (at == std::string_view::npos) return 0.0;
  const auto answer = raw.substr(at + close.size());
  const bool has_content = std::any_of(answer.begin(), answer.end(), [](unsigned char c) {
    return std::isspace(c) == 0;
  });
  return has_content ? 1.0 : 0.0;
}

double value_match(const Value& gt, const Value& pred) {
  if (!gt.is_list()) return values_equal(gt, pred) ? 1.0 : 0.0;
  const List& expected = gt.as_list();
  if (expected.empty()) return pred.is_list() && pred.as_list().empty() ? 1.0 : 0.0;
  const List got = pred.is_list() ? pred.as_list() : List{pred};
  std::size_t hits = 0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (k < got.size() && values_equal(expected[k], got[k])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(expected.size());
}

double call_match_score(const ToolCall& gt, const ToolCall& pred) {
  double score = 0.0;
  for (const auto& m : gt.args) {
    if (const Value* v = pred.arg(m.key)) score += 1.0 + value_match(m.value, *v);
  }
  return score;
}

std::size_t key_count(const std::vector<ToolCall>& gt) {
  std::size_t n = 0;
  for (const auto& c : gt) n += c.args.size();
  return n;
}

CallAlignment align_calls(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred) {
  struct Candidate {
    double score;
    bool same_name;
    std::size_t g;
    std::size_t p;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(gt.size() * pred.size());
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) {
      candidates.push_back({call_match_score(gt[g], pred[p]), gt[g].name == pred[p].name, g, p});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.same_name && !b.same_name;
  });

  CallAlignment out;
  out.pairs.reserve(gt.size());
  for (std::size_t g = 0; g < gt.size(); ++g) out.pairs.push_back(AlignedPair{g, std::nullopt});
  std::vector<bool> used(pred.size(), false);
  for (const auto& c : candidates) {
    if (used[c.p] || out.pairs[c.g].pred) continue;
    used[c.p] = true;
    out.pairs[c.g].pred = c.p;
  }
  return out;
}

double struct_reward(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred) {
  if (gt.size() != pred.size()) return 0.0;
  std::map<std::string_view, long> counts;
  for (const auto& c : gt) ++counts[c.name];
  for (const auto& c : pred) --counts[c.name];
  return std::all_of(counts.begin(), counts.end(), [](const auto& kv) { return kv.second == 0; })
             ? 1.0
             : 0.0;
}

double key_reward(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred,
                  const CallAlignment& alignment) {
  const std::size_t total = key_count(gt);
  if (total == 0) return keyless_score(gt, pred);
  std::size_t hits = 0;
  for (const auto& pair : alignment.pairs) {
    const ToolCall* p = aligned_pred(pred, pair);
    if (p == nullptr) continue;
    for (const auto& m : gt[pair.gt].args) {
      if (p->arg(m.key) != nullptr) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

double value_reward(const std::vector<ToolCall>& gt, const std::vector<ToolCall>& pred,
                    const CallAlignment& alignment) {
  const std::size_t total = key_count(gt);
  if (total == 0) return keyless_score(gt, pred);
  double sum = 0.0;
  for (const auto& pair : alignment.pairs) {
    const ToolCall* p = aligned_pred(pred, pair);
    if (p == nullptr) continue;
    for (const auto& m : gt[pair.gt].args) {
      if (const Value* v = p->arg(m.key)) sum += value_match(m.value, *v);
    }
  }
  return sum / static_cast<double>(total);
}

RewardBreakdown score_calls(double format, const std::vector<ToolCall>& gt,
                            const std::vector<ToolCall>& pred, const RewardWeights& w) {
  const CallAlignment alignment = align_calls(gt, pred);
  RewardBreakdown r;
  r.format = format;
  r.structure = struct_reward(gt, pred);
  r.key = key_reward(gt, pred, alignment);
  r.value = value_reward(gt, pred, alignment);
  r.total = w.format * r.format + w.structure * r.structure + w.key * r.key + w.value * r.value;
  return r;
}

RewardBreakdown total_reward(const Trajectory& t, const std::vector<ToolCall>& gt,
                             const RewardWeights& w, const ParseConfig& cfg) {
  return score_calls(format_reward(t.raw, cfg), gt, t.calls, w);
}

RewardBreakdown total_reward(std::string_view raw, const std::vector<ToolCall>& gt,
                             const RewardWeights& w, const ParseConfig& cfg) {
  if (raw.empty()) return score_calls(0.0, gt, {}, w);
  return total_reward(parse_output(raw, cfg).trajectory, gt, w, cfg);
}

}  // namespace toolreason
