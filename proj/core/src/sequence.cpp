// Copyright 2026 The gtadoc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gtadoc/sequence.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <string>

#include "gtadoc/count_table.hpp"
#include "gtadoc/error.hpp"

namespace gtadoc {

std::uint64_t head_tail_bound(std::uint64_t word_size, std::uint32_t l,
                              std::uint64_t sub_rule_size) noexcept {
  const std::uint64_t k = l == 0 ? 0 : l - 1;
  const std::uint64_t total = word_size + k * sub_rule_size;
  return total > k ? total - k : 0;
}

namespace {

// First `need` words of the rule's expansion, or false if a touched sub-rule
// has no head yet.
bool fill_head(const Dag& dag, HeadTailTable& ht, const std::vector<std::uint8_t>& ready,
               std::uint32_t r) {
  const std::uint64_t need = std::min<std::uint64_t>(ht.l - 1, dag.rules[r].exp_len);
  std::vector<SymbolId> out;
  for (SymbolId s : dag.rules[r].body) {
    if (out.size() == need) break;
    if (dag.space.classify(s) == SymbolKind::kWord) {
      out.push_back(s);
      continue;
    }
    const std::uint32_t c = dag.space.rule_index(s);
    if (!ready[c]) return false;
    const auto& h = ht.rules[c].head;
    const std::size_t take = std::min<std::size_t>(need - out.size(), h.size());
    out.insert(out.end(), h.begin(), h.begin() + static_cast<std::ptrdiff_t>(take));
  }
  ht.rules[r].head = std::move(out);
  return true;
}

bool fill_tail(const Dag& dag, HeadTailTable& ht, const std::vector<std::uint8_t>& ready,
               std::uint32_t r) {
  const std::uint64_t need = std::min<std::uint64_t>(ht.l - 1, dag.rules[r].exp_len);
  std::vector<SymbolId> out;  // reversed
  const auto& body = dag.rules[r].body;
  for (auto it = body.rbegin(); it != body.rend(); ++it) {
    if (out.size() == need) break;
    if (dag.space.classify(*it) == SymbolKind::kWord) {
      out.push_back(*it);
      continue;
    }
    const std::uint32_t c = dag.space.rule_index(*it);
    if (!ready[c]) return false;
    const auto& t = ht.rules[c].tail;
    const std::size_t take = std::min<std::size_t>(need - out.size(), t.size());
    out.insert(out.end(), t.rbegin(), t.rbegin() + static_cast<std::ptrdiff_t>(take));
  }
  std::reverse(out.begin(), out.end());
  ht.rules[r].tail = std::move(out);
  return true;
}

void append_rule(const Dag& dag, const HeadTailTable& ht, std::uint32_t c, LocalStream& out) {
  const std::uint64_t l = ht.l;
  const std::uint64_t len = dag.rules[c].exp_len;
  const HeadTail& buf = ht.rules[c];
  const auto begin = static_cast<std::uint32_t>(out.words.size());
  if (len < l) {
    out.words.insert(out.words.end(), buf.head.begin(), buf.head.end());
    return;
  }
  if (len <= 2 * (l - 1)) {
    // head and tail overlap; stitch them into the full expansion
    const std::uint64_t overlap = 2 * (l - 1) - len;
    out.words.insert(out.words.end(), buf.head.begin(), buf.head.end());
    out.words.insert(out.words.end(), buf.tail.begin() + static_cast<std::ptrdiff_t>(overlap),
                     buf.tail.end());
    out.regions.push_back({begin, static_cast<std::uint32_t>(out.words.size()), c, false});
    return;
  }
  out.words.insert(out.words.end(), buf.head.begin(), buf.head.end());
  out.gaps.push_back(static_cast<std::uint32_t>(out.words.size()));
  out.words.insert(out.words.end(), buf.tail.begin(), buf.tail.end());
  out.regions.push_back({begin, static_cast<std::uint32_t>(out.words.size()), c, true});
}

LocalStream stream_of(const Dag& dag, const HeadTailTable& ht, std::span<const SymbolId> body) {
  if (ht.l < 2) throw Error(ErrorCode::kUsage, "local streams need a sequence length of 2 or more");
  LocalStream out;
  for (SymbolId s : body) {
    switch (dag.space.classify(s)) {
      case SymbolKind::kWord:
        out.words.push_back(s);
        break;
      case SymbolKind::kSplitter:
        out.gaps.push_back(static_cast<std::uint32_t>(out.words.size()));
        break;
      case SymbolKind::kRule:
        append_rule(dag, ht, dag.space.rule_index(s), out);
        break;
    }
  }
  return out;
}

}  // namespace

HeadTailTable init_head_tail(const Dag& dag, std::uint32_t l, const TraversalConfig& cfg,
                             RoundExecutor& exec) {
  (void)cfg;
  if (l < 2) throw Error(ErrorCode::kUsage, "head/tail buffers need a sequence length of 2 or more");
  const std::uint32_t n = dag.num_rules();
  HeadTailTable ht;
  ht.l = l;
  ht.rules.resize(n);
  std::vector<std::uint8_t> head_ready(n, 0), tail_ready(n, 0);
  std::vector<std::uint32_t> pending;
  for (std::uint32_t r = 1; r < n; ++r) {
    ht.rules[r].exp_len = dag.rules[r].exp_len;
    pending.push_back(r);
  }

  while (!pending.empty()) {
    if (++ht.rounds > dag.depth) {
      throw Error(ErrorCode::kCorruption, "head/tail initialization exceeded " +
                                              std::to_string(dag.depth) + " rounds");
    }
    // Readiness as of the start of the round; rules that fail retry next round.
    const std::vector<std::uint8_t> heads = head_ready;
    const std::vector<std::uint8_t> tails = tail_ready;
    std::vector<std::uint8_t> got_head(pending.size(), 0), got_tail(pending.size(), 0);
    exec.parallel_for(pending.size(), [&](std::size_t i) {
      const std::uint32_t r = pending[i];
      got_head[i] = heads[r] || fill_head(dag, ht, heads, r);
      got_tail[i] = tails[r] || fill_tail(dag, ht, tails, r);
    });
    std::vector<std::uint32_t> still;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const std::uint32_t r = pending[i];
      head_ready[r] = got_head[i];
      tail_ready[r] = got_tail[i];
      if (got_head[i] && got_tail[i]) {
        ht.rules[r].ready = true;
      } else {
        still.push_back(r);
      }
    }
    if (still.size() == pending.size()) {
      throw Error(ErrorCode::kCorruption, "head/tail initialization made no progress");
    }
    pending.swap(still);
  }
  return ht;
}

std::vector<std::uint32_t> LocalStream::windows(std::uint32_t l) const {
  std::vector<std::uint32_t> out;
  if (l == 0 || words.size() < l) return out;
  const std::size_t n = words.size();
  std::vector<std::uint32_t> run(n, 0), region(n, 0);
  std::size_t g = 0;
  std::uint32_t id = 0;
  for (std::size_t p = 0; p < n; ++p) {
    while (g < gaps.size() && gaps[g] <= p) {
      if (gaps[g] == p && p > 0) ++id;
      ++g;
    }
    run[p] = id;
  }
  for (std::size_t k = 0; k < regions.size(); ++k) {
    for (std::uint32_t p = regions[k].begin; p < regions[k].end; ++p) {
      region[p] = static_cast<std::uint32_t>(k + 1);
    }
  }
  for (std::size_t i = 0; i + l <= n; ++i) {
    const std::size_t last = i + l - 1;
    if (run[i] != run[last]) continue;
    if (region[i] != 0 && region[i] == region[last]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

LocalStream build_local_stream(const Dag& dag, const HeadTailTable& ht, std::uint32_t rule) {
  return stream_of(dag, ht, dag.rules[rule].body);
}

LocalStream build_segment_stream(const Dag& dag, const HeadTailTable& ht, std::uint32_t file) {
  const Segment seg = dag.segments[file];
  return stream_of(dag, ht,
                   std::span<const SymbolId>(dag.root().body).subspan(seg.begin, seg.end - seg.begin));
}

LocalStream build_root_stream(const Dag& dag, const HeadTailTable& ht) {
  return stream_of(dag, ht, dag.root().body);
}

std::uint64_t head_only_window_count(const Dag& dag, const HeadTailTable& ht, std::uint32_t rule) {
  std::uint64_t len = 0;
  for (SymbolId s : dag.rules[rule].body) {
    if (dag.space.classify(s) == SymbolKind::kRule) {
      len += ht.rules[dag.space.rule_index(s)].head.size();
    } else {
      ++len;
    }
  }
  return len >= ht.l ? len - ht.l + 1 : 0;
}

GramCodec::GramCodec(const SymbolSpace& space, std::uint32_t num_rules, std::uint32_t l) : l_(l) {
  if (l == 0) throw Error(ErrorCode::kUsage, "sequence length must be at least 1");
  const std::uint64_t symbols = std::uint64_t{space.rule_base()} + num_rules;
  w_ = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::bit_width(symbols - 1)));
  packed_ = std::uint64_t{l_} * w_ <= 64;
  if (!packed_) shards_ = std::make_unique<std::array<Shard, kShards>>();
}

std::uint64_t GramCodec::encode(std::span<const SymbolId> gram) {
  if (packed_) {
    std::uint64_t key = 0;
    for (SymbolId id : gram) key = (w_ == 64 ? 0 : key << w_) | id;
    return key;
  }
  std::uint64_t fp = mix64(l_);
  for (SymbolId id : gram) fp = mix64(fp ^ id);
  Shard& shard = (*shards_)[fp % kShards];
  std::lock_guard lock(shard.mu);
  auto [it, inserted] = shard.grams.try_emplace(fp);
  if (inserted) {
    it->second.assign(gram.begin(), gram.end());
  } else if (!std::equal(gram.begin(), gram.end(), it->second.begin(), it->second.end())) {
    throw Error(ErrorCode::kOverflow, "two sequences share a 64-bit fingerprint");
  }
  return fp;
}

std::vector<SymbolId> GramCodec::decode(std::uint64_t key) const {
  if (!packed_) {
    const Shard& shard = (*shards_)[key % kShards];
    std::lock_guard lock(shard.mu);
    auto it = shard.grams.find(key);
    if (it == shard.grams.end()) throw Error(ErrorCode::kCorruption, "unknown sequence key");
    return it->second;
  }
  std::vector<SymbolId> ids(l_);
  const std::uint64_t mask = w_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w_) - 1;
  for (std::uint32_t i = l_; i-- > 0;) {
    ids[i] = static_cast<SymbolId>(key & mask);
    key = w_ == 64 ? 0 : key >> w_;
  }
  return ids;
}

std::size_t GramCodec::registry_size() const {
  if (packed_) return 0;
  std::size_t n = 0;
  for (const Shard& s : *shards_) {
    std::lock_guard lock(s.mu);
    n += s.grams.size();
  }
  return n;
}

namespace {

std::vector<KeyCount> stream_elements(const LocalStream& stream, GramCodec& codec) {
  const std::uint32_t l = codec.length();
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (std::uint32_t i : stream.windows(l)) {
    ++counts[codec.encode(std::span<const SymbolId>(stream.words).subspan(i, l))];
  }
  std::vector<KeyCount> out;
  out.reserve(counts.size());
  for (auto [k, c] : counts) out.push_back({k, c});
  std::sort(out.begin(), out.end(),
            [](const KeyCount& a, const KeyCount& b) { return a.key < b.key; });
  return out;
}

}  // namespace

RuleElements window_elements(const Dag& dag, const HeadTailTable& ht, GramCodec& codec,
                             RoundExecutor& exec) {
  const std::uint32_t l = codec.length();
  if (l == 1) return word_elements(dag);  // a 1-gram key is the word id
  const std::uint32_t n = dag.num_rules();
  RuleElements el;
  el.rule.resize(n);
  el.key_limit.assign(n, 0);
  el.segment.resize(dag.num_files());
  exec.parallel_for(n, [&](std::size_t r) {
    const auto rule = static_cast<std::uint32_t>(r);
    const LocalStream s = r == 0 ? build_root_stream(dag, ht) : build_local_stream(dag, ht, rule);
    el.rule[r] = stream_elements(s, codec);
    const std::uint64_t len = dag.rules[r].exp_len;
    el.key_limit[r] = len >= l ? len - l + 1 : 0;
  });
  exec.parallel_for(dag.num_files(), [&](std::size_t f) {
    el.segment[f] = stream_elements(build_segment_stream(dag, ht, static_cast<std::uint32_t>(f)),
                                    codec);
  });
  return el;
}

namespace {

RuleElements prepare(const Dag& dag, GramCodec& codec, const TraversalConfig& cfg,
                     RoundExecutor& exec, SequenceStats* stats) {
  const auto t0 = std::chrono::steady_clock::now();
  HeadTailTable ht;
  ht.l = codec.length();
  if (codec.length() >= 2) {
    ht = init_head_tail(dag, codec.length(), cfg, exec);
    if (stats) stats->head_tail_rounds = ht.rounds;
  }
  RuleElements el = window_elements(dag, ht, codec, exec);
  if (stats) {
    stats->init_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return el;
}

}  // namespace

CountMap count_sequences(const Dag& dag, GramCodec& codec, const TraversalConfig& cfg,
                         RoundExecutor& exec, SequenceStats* stats) {
  const RuleElements el = prepare(dag, codec, cfg, exec, stats);
  EngineStats* es = stats ? &stats->engine : nullptr;
  TraversalState state(dag.num_rules());
  if (cfg.strategy == Strategy::kBottomUp) {
    const LocalTables locals = build_local_tables(dag, state, el, cfg, exec, es);
    return reduce_bottom_up(dag, locals, el, cfg, exec, es);
  }
  init_top_down_masks(dag, state);
  const TraversalStats ts = top_down_traverse(dag, state, TaskHooks{}, cfg, exec);
  if (es) es->top_down_rounds = ts.rounds;
  return reduce_top_down(dag, state, el, cfg, exec, es);
}

std::vector<CountMap> count_sequences_per_file(const Dag& dag, GramCodec& codec,
                                               const TraversalConfig& cfg, RoundExecutor& exec,
                                               SequenceStats* stats) {
  const RuleElements el = prepare(dag, codec, cfg, exec, stats);
  EngineStats* es = stats ? &stats->engine : nullptr;
  TraversalState state(dag.num_rules());
  if (cfg.strategy == Strategy::kBottomUp) {
    const LocalTables locals = build_local_tables(dag, state, el, cfg, exec, es);
    return reduce_bottom_up_per_file(dag, locals, el, cfg, exec, es);
  }
  const FileWeights fw = propagate_file_weights(dag, state, cfg, exec, es);
  return reduce_top_down_per_file(dag, fw, el, cfg, exec, es);
}

}  // namespace gtadoc
