// Acceptance checks. One line per criterion; exit status is non-zero when any
// criterion fails. Tolerances and workload sizes are pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cyclemt/benchmark.hpp"
#include "cyclemt/cache.hpp"
#include "cyclemt/metrics.hpp"
#include "cyclemt/mock_backend.hpp"
#include "cyclemt/pipeline.hpp"
#include "cyclemt/serialization.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

namespace {

using namespace cyclemt;
using Tokens = std::vector<std::string>;

constexpr double kExactTol = 1e-9;
constexpr double kFixtureTol = 1e-6;
constexpr double kNoiseStepMin = 0.1;
constexpr double kScalingGainMin = 0.2;
constexpr std::size_t kSentences = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void require(Outcome& o, bool condition, const std::string& what) {
  if (!condition && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c);
  return buffer;
}

const LanguageTag& lang(std::string_view code) { return default_registry().language(code); }

TokenSequence seq(Tokens tokens) { return TokenSequence{std::move(tokens), lang("en")}; }

std::shared_ptr<MockBackend> mock(double rho, std::uint64_t base_seed = 42) {
  NoiseChannel channel;
  channel.rho = rho;
  channel.base_seed = base_seed;
  return std::make_shared<MockBackend>(channel);
}

std::vector<DatasetRecord> sentences(const char* code, std::size_t count, std::uint64_t seed) {
  return testing::synthetic_dataset(lang(code), count, seed);
}

double mean_selected(const Pipeline& pipeline, const std::vector<DatasetRecord>& data,
                     const LanguageTag& target) {
  double sum = 0.0;
  for (const auto& r : data) sum += pipeline.run(r.text, r.language, target).selected().score.total;
  return sum / static_cast<double>(data.size());
}

Outcome metric_exactness() {
  Outcome o;
  std::mt19937_64 rng(101);
  double worst_rouge = 0.0;
  double worst_bleu = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Tokens x = testing::random_tokens(rng, 2 + rng() % 49, 26);
    worst_rouge = std::max(worst_rouge, std::abs(consistency(seq(x), seq(x)).total - 9.0));
    // BLEU-4 is undefined below four tokens, so the order is capped at |x|.
    const std::size_t order = std::min<std::size_t>(4, x.size());
    worst_bleu = std::max(worst_bleu, std::abs(bleu(seq(x), seq(x), order).value - 1.0));
  }
  require(o, worst_rouge <= kExactTol, fmt("max |total - 9| = %.3g", worst_rouge));
  require(o, worst_bleu <= kExactTol, fmt("max |bleu - 1| = %.3g", worst_bleu));
  if (o.pass) o.detail = fmt("50 sequences, max deviation %.1g / %.1g", worst_rouge, worst_bleu);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::size_t lcs_mismatch = 0;
  for (int i = 0; i < 500; ++i) {
    const Tokens a = testing::random_tokens(rng, rng() % 9, 3);
    const Tokens b = testing::random_tokens(rng, rng() % 9, 3);
    if (lcs_length(seq(a), seq(b)) != testing::brute_force_lcs(a, b)) ++lcs_mismatch;
  }
  std::size_t overlap_mismatch = 0;
  for (int i = 0; i < 500; ++i) {
    const Tokens a = testing::random_tokens(rng, rng() % 16, 4);
    const Tokens b = testing::random_tokens(rng, rng() % 16, 4);
    for (std::size_t n : {1u, 2u}) {
      if (clipped_overlap(ngrams(a, n), ngrams(b, n)) != testing::multiset_overlap(a, b, n)) {
        ++overlap_mismatch;
      }
    }
  }
  require(o, lcs_mismatch == 0, std::to_string(lcs_mismatch) + " LCS mismatches");
  require(o, overlap_mismatch == 0, std::to_string(overlap_mismatch) + " overlap mismatches");
  if (o.pass) o.detail = "500 LCS pairs, 500 overlap pairs (n=1,2), all exact";
  return o;
}

Outcome hand_fixtures() {
  Outcome o;
  const Tokens mat{"the", "cat", "sat", "on", "the", "mat"};
  const Tokens cat{"the", "cat", "sat"};
  const auto near = [](double a, double b) { return std::abs(a - b) <= kFixtureTol; };

  // Independent confirmation from the brute-force oracle first.
  const testing::Prf oracle1 = testing::prf(testing::multiset_overlap(mat, cat, 1), 6, 3);
  require(o, near(oracle1.p, 1.0) && near(oracle1.r, 0.5) && near(oracle1.f, 2.0 / 3.0),
          "oracle disagrees with hand count for ROUGE-1");
  const RougeComponent r1 = rouge_n(seq(mat), seq(cat), 1);
  require(o, near(r1.precision, 1.0) && near(r1.recall, 0.5) && near(r1.f1, 2.0 / 3.0),
          fmt("ROUGE-1 p=%.6f r=%.6f f=%.6f", r1.precision, r1.recall, r1.f1));

  const RougeComponent rl = rouge_l(seq({"a", "b", "c", "d"}), seq({"a", "c", "d"}));
  require(o, testing::brute_force_lcs({"a", "b", "c", "d"}, {"a", "c", "d"}) == 3 &&
                 near(rl.precision, 1.0) && near(rl.recall, 0.75) && near(rl.f1, 6.0 / 7.0),
          fmt("ROUGE-L p=%.6f r=%.6f f=%.6f", rl.precision, rl.recall, rl.f1));

  const BleuScore bp = bleu(seq(mat), seq(cat), 2);
  require(o, near(bp.value, std::exp(-1.0)) && near(bp.brevity_penalty, std::exp(-1.0)),
          fmt("BLEU brevity case %.6f", bp.value));
  const BleuScore clip = bleu(seq({"the", "cat"}), seq({"the", "the", "the"}), 1);
  require(o, near(clip.value, 1.0 / 3.0) && clip.brevity_penalty == 1.0,
          fmt("BLEU clipping case %.6f", clip.value));

  // Nine-component sum of the same pair, confirmed by the oracle.
  const double total = consistency(seq(mat), seq(cat)).total;
  require(o, near(total, testing::oracle_consistency_total(mat, cat)) && near(total, 6.304762),
          fmt("consistency total %.6f", total));
  if (o.pass) {
    o.detail = fmt("ROUGE-1 f=%.4f, BLEU %.4f / %.4f", r1.f1, bp.value, clip.value) +
               fmt(", sum %.6f", total);
  }
  return o;
}

std::string fuzz_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "the", "cat", "Sat", "on", "MAT", ".", ",", "!", "?", "'", "\"", "(", ")", " ", "  ",
      "\t", "\n", "\xe3\x80\x80", "今天", "天气", "好", "。", "Ünïcødé", "Ωμέγα", "Мир",
      "12", "x9", "\xff", "\xe4\xbd", "---", "«", "»"};
  std::string text;
  const std::size_t count = rng() % 40;
  for (std::size_t i = 0; i < count; ++i) text += pieces[rng() % pieces.size()];
  return text;
}

Outcome range_invariant() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const LanguageTag& language = lang(i % 2 == 0 ? "en" : "zh");
    const TokenSequence a = tokenize(fuzz_text(rng), language);
    const TokenSequence b = tokenize(fuzz_text(rng), language);
    const double total = consistency(a, b).total;
    const double value = bleu(a, b, 1 + rng() % 4).value;
    if (!(total >= 0.0 && total <= 9.0) || !(value >= 0.0 && value <= 1.0)) ++violations;
  }
  require(o, violations == 0, std::to_string(violations) + " out-of-range scores");
  if (o.pass) o.detail = "10000 fuzzed pairs in range";
  return o;
}

Outcome noise_monotonicity() {
  Outcome o;
  const auto data = sentences("en", kSentences, 505);
  PipelineConfig config;
  config.n_candidates = 1;
  config.seed = 7;
  std::vector<double> means;
  std::string trace;
  for (double rho : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const Pipeline pipeline(mock(rho), ModelInfo{"mock", 5e8}, config);
    means.push_back(mean_selected(pipeline, data, lang("fr")));
    trace += fmt("%.3f ", means.back());
  }
  for (std::size_t i = 1; i < means.size(); ++i) {
    require(o, means[i - 1] - means[i] > kNoiseStepMin,
            "step " + std::to_string(i) + " too small: " + trace);
  }
  o.detail = "means " + trace;
  return o;
}

Outcome scaling_trend() {
  Outcome o;
  const auto data = sentences("en", kSentences, 606);
  auto backend = mock(0.3);
  std::vector<double> means;
  std::string trace;
  for (std::size_t n : {1u, 2u, 4u, 8u}) {
    PipelineConfig config;
    config.n_candidates = n;
    config.seed = 7;
    const Pipeline pipeline(backend, ModelInfo{"mock", 5e8}, config);
    means.push_back(mean_selected(pipeline, data, lang("de")));
    trace += fmt("%.3f ", means.back());
  }
  for (std::size_t i = 1; i < means.size(); ++i) {
    require(o, means[i] >= means[i - 1], "decrease over N: " + trace);
  }
  require(o, means.back() - means.front() > kScalingGainMin,
          fmt("gain %.3f <= 0.2: ", means.back() - means.front()) + trace);
  o.detail = "N=1,2,4,8 means " + trace + fmt("(gain %.3f)", means.back() - means.front());
  return o;
}

Outcome schedule_and_compute() {
  Outcome o;
  std::vector<double> temps;
  for (const auto& p : temperature_schedule(5, 0.15, 1.5)) temps.push_back(p.temperature);
  require(o, temps == std::vector<double>{0.0, 0.15, 0.30, 0.45, 0.60}, "schedule mismatch");
  const ComputeCost cost = ComputeCost::of(5e8, 4);
  require(o, cost.total == 2e9, fmt("compute %.17g", cost.total));
  if (o.pass) o.detail = "[0, 0.15, 0.3, 0.45, 0.6]; 5e8 x 4 = 2e9";
  return o;
}

Outcome similar_language() {
  Outcome o;
  NoiseChannel channel;
  channel.rho = 0.3;
  channel.base_seed = 42;
  channel.set_pair_rho("es", "pt", 0.05);
  auto backend = std::make_shared<MockBackend>(channel);
  std::vector<DatasetRecord> data;
  std::uint64_t seed = 800;
  for (const char* code : {"en", "es", "pt", "fr"}) {
    auto part = testing::synthetic_dataset(lang(code), 25, seed++);
    data.insert(data.end(), part.begin(), part.end());
  }
  const std::vector<LanguageTag> languages{lang("en"), lang("es"), lang("pt"), lang("fr")};
  const BenchmarkMatrix matrix = run_matrix(data, languages, backend, ModelInfo{"mock", 5e8}, 1);
  double favored = 9.0;
  double best_other = 0.0;
  for (const auto& [pair, stats] : matrix.cells) {
    const bool es_pt = (pair.first == "es" && pair.second == "pt") ||
                       (pair.first == "pt" && pair.second == "es");
    if (es_pt) {
      favored = std::min(favored, stats.mean_total);
    } else {
      best_other = std::max(best_other, stats.mean_total);
    }
  }
  require(o, matrix.cells.size() == 12, "expected 12 cells");
  require(o, favored > best_other, fmt("es/pt %.4f vs best other %.4f", favored, best_other));
  o.detail = fmt("es<->pt min %.4f > best other %.4f", favored, best_other);
  return o;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome reproducibility_and_cache() {
  Outcome o;
  testing::TempDir dir;
  std::vector<DatasetRecord> data;
  std::uint64_t seed = 900;
  for (const char* code : {"en", "fr", "zh"}) {
    auto part = testing::synthetic_dataset(lang(code), 10, seed++);
    data.insert(data.end(), part.begin(), part.end());
  }
  const std::vector<LanguageTag> languages{lang("en"), lang("fr"), lang("zh")};
  const ModelInfo model{"mock", 5e8};
  BenchmarkOptions options;
  options.parallelism = 4;

  const auto first = run_matrix(data, languages, mock(0.3), model, 3, options);
  const auto second = run_matrix(data, languages, mock(0.3), model, 3, options);
  emit_report(first, ReportFormat::kJson, dir / "a.json");
  emit_report(second, ReportFormat::kJson, dir / "b.json");
  require(o, slurp(dir / "a.json") == slurp(dir / "b.json"), "JSON reports differ");

  auto cold_inner = mock(0.3);
  const auto cold = run_matrix(data, languages,
                               cached(cold_inner, TranslationCache::open(dir / "cache")), model, 3,
                               options);
  auto warm_inner = mock(0.3);
  const auto warm = run_matrix(data, languages,
                               cached(warm_inner, TranslationCache::open(dir / "cache")), model, 3,
                               options);
  require(o, warm_inner->invocations() == 0,
          std::to_string(warm_inner->invocations()) + " backend calls on the cached run");
  require(o, matrix_report(cold).dump() == matrix_report(warm).dump(),
          "cached run changed statistics");
  require(o, matrix_report(cold).dump() == matrix_report(first).dump(),
          "caching changed statistics");
  o.detail = "byte-identical reports; cold run " + std::to_string(cold_inner->invocations()) +
             " calls, cached run " + std::to_string(warm_inner->invocations());
  return o;
}

Outcome argmax_determinism() {
  Outcome o;
  const Pipeline pipeline(mock(0.0), ModelInfo{"mock", 5e8}, PipelineConfig{});
  for (int run = 0; run < 20; ++run) {
    const auto result = pipeline.run("all candidates tie here", lang("en"), lang("fr"));
    require(o, result.selected_index == 0, "tie not resolved to index 0");
  }
  for (std::size_t n = 1; n <= 16; ++n) {
    require(o, select_best(std::vector<double>(n, 3.25)) == 0, "equal vector not 0");
  }
  std::mt19937_64 rng(1010);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> scores(1 + rng() % 16);
    for (auto& s : scores) s = static_cast<double>(rng() % 7) * 1.5;
    std::size_t oracle = 0;
    for (std::size_t k = 1; k < scores.size(); ++k) {
      if (scores[k] > scores[oracle]) oracle = k;
    }
    if (select_best(scores) != oracle) ++mismatches;
  }
  require(o, mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
  if (o.pass) o.detail = "ties -> 0 on 20 runs; 1000 random vectors match linear scan";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "metric exactness", 1.0, metric_exactness},
      {2, "oracle equivalence", 10.0, oracle_equivalence},
      {3, "hand-computed fixtures", 0.0, hand_fixtures},
      {4, "range invariant", 0.0, range_invariant},
      {5, "noise monotonicity", 30.0, noise_monotonicity},
      {6, "best-of-N scaling trend", 60.0, scaling_trend},
      {7, "temperature schedule and compute", 0.0, schedule_and_compute},
      {8, "similar-language effect", 0.0, similar_language},
      {9, "reproducibility and caching", 0.0, reproducibility_and_cache},
      {10, "argmax tie-break determinism", 0.0, argmax_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && seconds >= c.budget_s && outcome.pass) {
      outcome = {false, fmt("took %.2f s, budget %.0f s", seconds, c.budget_s)};
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %2d %-34s %8.3f s  %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
