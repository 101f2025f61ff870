#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "cyclemt/backend.hpp"
#include "cyclemt/tokenization.hpp"

namespace cyclemt {

/// Noise model of the mock translator.
///
/// A token survives a call with probability 1 - min(1, rho + temperature * kappa);
/// otherwise it is swapped for a pseudorandom junk word. Draws are keyed on
/// (base_seed, request seed, text, language pair, token index), so the channel
/// is a pure function of request and configuration.
struct NoiseChannel {
  double rho = 0.0;
  double kappa = 0.1;
  std::uint64_t base_seed = 0;
  /// Unordered pair overrides of rho, keyed by the two codes in sorted order.
  std::map<std::pair<std::string, std::string>, double> pair_rho;

  void set_pair_rho(const std::string& a, const std::string& b, double value);
  double rho_for(const LanguageTag& a, const LanguageTag& b) const;
  double corruption_rate(const LanguageTag& a, const LanguageTag& b, double temperature) const;

  /// Throws ConfigError when a rate is outside [0,1] or kappa < 0.
  void validate() const;
};

/// Reversible tagging translator. A whitespace unit carrying the source tag
/// ("fr:chat" for a fr->en request) is untagged; anything else is tokenized
/// with the source tokenizer and each token t becomes "<target>:t".
std::string mock_translate(const TranslationRequest& request, const NoiseChannel& channel,
                           const TokenizerRegistry& registry);

class MockBackend final : public Backend {
 public:
  explicit MockBackend(NoiseChannel channel,
                       std::shared_ptr<const TokenizerRegistry> registry = nullptr);

  const NoiseChannel& channel() const noexcept { return channel_; }

 protected:
  std::string do_translate(const TranslationRequest& request) override;

 private:
  NoiseChannel channel_;
  std::shared_ptr<const TokenizerRegistry> registry_;
};

}  // namespace cyclemt
