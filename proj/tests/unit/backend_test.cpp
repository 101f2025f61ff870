#include "cyclemt/backend.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "cyclemt/error.hpp"
#include "cyclemt/mock_backend.hpp"
#include "cyclemt/pipeline.hpp"
#include "support/corpus.hpp"

namespace cyclemt {
namespace {

const LanguageTag& lang(std::string_view code) { return default_registry().language(code); }

TranslationRequest request(std::string text, std::string_view src, std::string_view tgt,
                           double temperature = 0.0, std::optional<std::int64_t> seed = 7) {
  return TranslationRequest{std::move(text), lang(src), lang(tgt), {temperature, seed, {}, {}},
                            "mock"};
}

NoiseChannel channel(double rho, double kappa = 0.1, std::uint64_t base_seed = 0) {
  NoiseChannel c;
  c.rho = rho;
  c.kappa = kappa;
  c.base_seed = base_seed;
  return c;
}

TEST(DecodeParamsTest, ValidationRejectsBadValues) {
  EXPECT_NO_THROW((DecodeParams{0.0, {}, {}, {}}).validate());
  EXPECT_THROW((DecodeParams{-0.1, {}, {}, {}}).validate(), UsageError);
  EXPECT_THROW((DecodeParams{std::nan(""), {}, {}, {}}).validate(), UsageError);
  EXPECT_THROW((DecodeParams{0.0, {}, 0, {}}).validate(), UsageError);
  EXPECT_THROW((DecodeParams{0.0, {}, {}, 0}).validate(), UsageError);
}

TEST(DecodeParamsTest, CanonicalFormIsStableAndDistinguishesFields) {
  const DecodeParams a{0.15, 7, {}, {}};
  EXPECT_EQ(canonical_params(a), canonical_params(DecodeParams{0.15, 7, {}, {}}));
  EXPECT_NE(canonical_params(a), canonical_params(DecodeParams{0.3, 7, {}, {}}));
  EXPECT_NE(canonical_params(a), canonical_params(DecodeParams{0.15, 8, {}, {}}));
  EXPECT_NE(canonical_params(a), canonical_params(DecodeParams{0.15, {}, {}, {}}));
}

TEST(BackendContractTest, EmptyTextAndSameLanguageAreRejected) {
  MockBackend backend(channel(0.0));
  EXPECT_THROW(backend.translate(request("", "en", "fr")), UsageError);
  EXPECT_THROW(backend.translate(request("hi", "en", "en")), UsageError);
  EXPECT_EQ(backend.invocations(), 0u);
  backend.set_allow_same_language(true);
  EXPECT_NO_THROW(backend.translate(request("hi", "en", "en")));
  EXPECT_EQ(backend.invocations(), 1u);
}

TEST(MockBackendTest, TemperatureZeroIsDeterministic) {
  MockBackend backend(channel(0.3));
  const auto req = request("Hello", "en", "fr", 0.0, 7);
  EXPECT_EQ(backend.translate(req), backend.translate(req));
}

TEST(MockBackendTest, PerfectChannelTagsAndCyclesBack) {
  MockBackend backend(channel(0.0));
  const std::string forward = backend.translate(request("hello world", "en", "fr"));
  EXPECT_EQ(forward, "fr:hello fr:world");
  const std::string back = backend.translate(request(forward, "fr", "en"));
  EXPECT_EQ(back, "hello world");
  EXPECT_EQ(score_cycle("hello world", back, lang("en")).total, 9.0);
}

TEST(MockBackendTest, CjkSourceIsTaggedPerCharacter) {
  MockBackend backend(channel(0.0));
  const std::string forward = backend.translate(request("今天好", "zh", "en"));
  EXPECT_EQ(forward, "en:今 en:天 en:好");
  EXPECT_EQ(backend.translate(request(forward, "en", "zh")), "今 天 好");
}

TEST(MockBackendTest, FullNoiseJunksEveryToken) {
  MockBackend backend(channel(1.0));
  std::mt19937_64 rng(3);
  const auto words = testing::vocabulary(50);
  for (int i = 0; i < 50; ++i) {
    const std::string text = testing::sentence(rng, words, 3, 10);
    const std::string forward = backend.translate(request(text, "en", "fr", 0.0, i));
    const std::string back = backend.translate(request(forward, "fr", "en", 0.0, i));
    EXPECT_EQ(score_cycle(text, back, lang("en")).total, 0.0) << text << " -> " << back;
  }
}

TEST(MockBackendTest, SeededRunsAreIdentical) {
  MockBackend first(channel(0.3, 0.1, 42));
  MockBackend second(channel(0.3, 0.1, 42));
  std::mt19937_64 rng(4);
  const auto words = testing::vocabulary(200);
  for (int i = 0; i < 100; ++i) {
    const auto req = request(testing::sentence(rng, words, 5, 20), "en", "de", 0.45, 42);
    EXPECT_EQ(first.translate(req), second.translate(req));
  }
}

TEST(MockBackendTest, SeedAndTemperatureChangeTheNoise) {
  MockBackend backend(channel(0.5));
  const std::string text = "one two three four five six seven eight nine ten eleven twelve";
  std::set<std::string> outputs;
  for (std::int64_t seed = 0; seed < 5; ++seed) {
    outputs.insert(backend.translate(request(text, "en", "fr", 0.0, seed)));
  }
  EXPECT_GT(outputs.size(), 1u);
}

TEST(MockBackendTest, EmpiricalCorruptionRateTracksRhoPlusTemperature) {
  const auto words = testing::vocabulary(300);
  for (const auto& [rho, temperature] : std::vector<std::pair<double, double>>{
           {0.0, 0.0}, {0.2, 0.0}, {0.2, 1.0}, {0.5, 0.5}, {0.0, 1.5}}) {
    MockBackend backend(channel(rho));
    std::mt19937_64 rng(5);
    std::size_t tokens = 0;
    std::size_t corrupted = 0;
    for (int i = 0; i < 400; ++i) {
      const std::string text = testing::sentence(rng, words, 10, 10);
      const auto in = tokenize(text, lang("en")).tokens;
      const std::string out = backend.translate(request(text, "en", "fr", temperature, i));
      std::istringstream units(out);
      std::string unit;
      std::size_t k = 0;
      while (units >> unit) {
        ++tokens;
        if (unit != "fr:" + in.at(k)) ++corrupted;
        ++k;
      }
    }
    const double expected = std::min(1.0, rho + 0.1 * temperature);
    EXPECT_NEAR(static_cast<double>(corrupted) / static_cast<double>(tokens), expected, 0.02)
        << "rho=" << rho << " T=" << temperature;
  }
}

TEST(NoiseChannelTest, PairOverridesAreUnordered) {
  NoiseChannel c = channel(0.3);
  c.set_pair_rho("pt", "es", 0.05);
  EXPECT_EQ(c.rho_for(lang("es"), lang("pt")), 0.05);
  EXPECT_EQ(c.rho_for(lang("pt"), lang("es")), 0.05);
  EXPECT_EQ(c.rho_for(lang("en"), lang("es")), 0.3);
  EXPECT_DOUBLE_EQ(c.corruption_rate(lang("en"), lang("fr"), 1.0), 0.4);
  EXPECT_EQ(c.corruption_rate(lang("en"), lang("fr"), 100.0), 1.0);
}

TEST(NoiseChannelTest, ValidationRejectsOutOfRangeRates) {
  EXPECT_THROW(MockBackend(channel(1.5)), ConfigError);
  EXPECT_THROW(MockBackend(channel(0.1, -1.0)), ConfigError);
  NoiseChannel c = channel(0.1);
  c.set_pair_rho("es", "pt", -0.1);
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ModelInfoTest, ParameterCountMustBePositive) {
  EXPECT_THROW((ModelInfo{"m", 0.0}).validate(), ConfigError);
  EXPECT_NO_THROW((ModelInfo{"m", 5e8}).validate());
}

}  // namespace
}  // namespace cyclemt
