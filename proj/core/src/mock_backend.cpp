#include "cyclemt/mock_backend.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cyclemt/error.hpp"
#include "hashing.hpp"
#include "unicode.hpp"

namespace cyclemt {

namespace {

constexpr std::uint64_t kNoSeed = 0x6e6f2d73656564ULL;

std::pair<std::string, std::string> ordered(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::vector<std::string> whitespace_units(std::string_view text) {
  const std::u32string decoded = unicode::decode(text);
  std::vector<std::string> units;
  std::u32string current;
  for (char32_t cp : decoded) {
    if (unicode::is_whitespace(cp)) {
      if (!current.empty()) units.push_back(unicode::encode(std::exchange(current, {})));
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) units.push_back(unicode::encode(current));
  return units;
}

std::string junk_word(std::uint64_t bits) {
  std::uint64_t state = detail::splitmix64(bits ^ 0x6a756e6bULL);
  std::string word;
  for (int i = 0; i < 7; ++i) {
    word.push_back(static_cast<char>('a' + state % 26));
    state /= 26;
  }
  return word;
}

bool valid_rate(double r) { return r >= 0.0 && r <= 1.0; }

}  // namespace

void NoiseChannel::set_pair_rho(const std::string& a, const std::string& b, double value) {
  pair_rho.insert_or_assign(ordered(a, b), value);
}

double NoiseChannel::rho_for(const LanguageTag& a, const LanguageTag& b) const {
  const auto it = pair_rho.find(ordered(a.code(), b.code()));
  return it == pair_rho.end() ? rho : it->second;
}

double NoiseChannel::corruption_rate(const LanguageTag& a, const LanguageTag& b,
                                     double temperature) const {
  return std::min(1.0, rho_for(a, b) + temperature * kappa);
}

void NoiseChannel::validate() const {
  if (!valid_rate(rho)) throw ConfigError("mock rho must be in [0,1]");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("mock kappa must be >= 0");
  for (const auto& [pair, value] : pair_rho) {
    if (!valid_rate(value)) {
      throw ConfigError("mock rho override for " + pair.first + "-" + pair.second +
                        " must be in [0,1]");
    }
  }
}

std::string mock_translate(const TranslationRequest& request, const NoiseChannel& channel,
                           const TokenizerRegistry& registry) {
  struct Unit {
    std::string token;
    bool untagged;
  };
  const std::string source_tag = request.source.code() + ":";
  std::vector<Unit> units;
  for (auto& unit : whitespace_units(request.text)) {
    if (unit.size() > source_tag.size() && unit.starts_with(source_tag)) {
      units.push_back({unit.substr(source_tag.size()), true});
    } else {
      for (auto& token : registry.tokenize(unit, request.source).tokens) {
        units.push_back({std::move(token), false});
      }
    }
  }

  const double rate =
      channel.corruption_rate(request.source, request.target, request.params.temperature);
  std::uint64_t key = detail::splitmix64(channel.base_seed);
  key = detail::splitmix64(
      key ^ (request.params.seed ? static_cast<std::uint64_t>(*request.params.seed) : kNoSeed));
  std::uint64_t text_hash = detail::fnv1a(request.text);
  text_hash = detail::fnv1a(request.source.code(), text_hash ^ 0x01);
  text_hash = detail::fnv1a(request.target.code(), text_hash ^ 0x02);
  key = detail::splitmix64(key ^ text_hash);

  std::string out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const std::uint64_t bits = detail::splitmix64(key + (i + 1) * 0x9e3779b97f4a7c15ULL);
    std::string token = detail::unit_interval(bits) < rate ? junk_word(bits) : units[i].token;
    if (!out.empty()) out.push_back(' ');
    if (!units[i].untagged) out += request.target.code() + ":";
    out += token;
  }
  if (out.empty()) throw BackendError("mock backend produced an empty translation");
  return out;
}

MockBackend::MockBackend(NoiseChannel channel, std::shared_ptr<const TokenizerRegistry> registry)
    : channel_(std::move(channel)), registry_(std::move(registry)) {
  channel_.validate();
  if (!registry_) {
    registry_ = std::shared_ptr<const TokenizerRegistry>(std::shared_ptr<void>(),
                                                         &default_registry());
  }
}

std::string MockBackend::do_translate(const TranslationRequest& request) {
  return mock_translate(request, channel_, *registry_);
}

}  // namespace cyclemt
