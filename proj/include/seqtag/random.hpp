#ifndef SEQTAG_RANDOM_HPP
#define SEQTAG_RANDOM_HPP

#include <cstdint>
#include <random>

namespace seqtag {

// Source of randomness for augmentation. Draws are defined in terms of raw
// 64-bit engine output so results do not depend on the standard library's
// distribution implementations.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  // Uniform in [0, 1).
  virtual double uniform() = 0;
  // Uniform integer in [0, n); n > 0.
  virtual std::uint64_t below(std::uint64_t n) = 0;
};

// mt19937_64: uniform() uses the top 53 bits, below() rejects the biased tail.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}
  double uniform() override;
  std::uint64_t below(std::uint64_t n) override;

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer over (seed, index); used to derive per-sentence seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace seqtag

#endif  // SEQTAG_RANDOM_HPP
