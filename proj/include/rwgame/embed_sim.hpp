#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rwgame/game.hpp"

namespace rwgame {

/// Bits stored one per byte, each 0 or 1.
using BitSequence = std::vector<std::uint8_t>;

/// Strictly increasing positions in [0, n).
using PositionSet = std::vector<std::size_t>;

class PayloadTooLarge : public std::runtime_error {
 public:
  PayloadTooLarge(std::size_t payload_bits, std::ptrdiff_t capacity_bits);
  std::size_t payload_bits() const { return payload_bits_; }
  std::ptrdiff_t capacity_bits() const { return capacity_bits_; }
  std::size_t deficit() const;

 private:
  std::size_t payload_bits_;
  std::ptrdiff_t capacity_bits_;
};

/// n i.i.d. Bernoulli(p) bits.
BitSequence generate_cover(std::size_t n, double p, std::uint64_t seed);

/// Uniformly random subset of round(n * fraction) positions, sorted,
/// determined by the key (selection sampling, one draw per index).
PositionSet select_positions(std::size_t n, double fraction, std::uint64_t key);

/// Compressed-stream bytes expanded to bits, most significant bit first.
BitSequence bytes_to_bits(const std::vector<std::uint8_t>& bytes);

struct EmbedResult {
  BitSequence marked;
  PositionSet positions;
  std::vector<std::uint8_t> compressed;  // stream of the bits that were replaced

  std::size_t compressed_bits() const { return compressed.size() * 8; }
  /// Room left for payload: |positions| - compressed length.
  std::ptrdiff_t capacity() const {
    return static_cast<std::ptrdiff_t>(positions.size()) -
           static_cast<std::ptrdiff_t>(compressed_bits());
  }
};

/// Selects positions with `key`, losslessly compresses the bits there and
/// overwrites the positions with compressed code, payload, then keyed
/// uniform filler. With no positions the cover is returned unchanged.
/// Throws PayloadTooLarge when the payload (or the code alone) does not fit.
EmbedResult embed_layer(const BitSequence& cover, double fraction, std::uint64_t key,
                        const BitSequence& payload);

struct ExtractResult {
  BitSequence restored;
  BitSequence payload;
};

/// Inverse of embed_layer given the same fraction and key and the payload
/// length.
ExtractResult extract_layer(const BitSequence& marked, double fraction, std::uint64_t key,
                            std::size_t payload_bits);

struct Measurement {
  double measured = 0.0;
  double predicted = 0.0;
  double std_error = 0.0;  // binomial standard error under the prediction
  double z = 0.0;          // 0 when both agree exactly with zero spread
};

struct SimulationReport {
  std::size_t n = 0;
  double p = 0.0;
  double s = 0.0;
  double t = 0.0;
  std::size_t alice_positions = 0;
  std::size_t bob_positions = 0;

  Measurement cover_frequency;           // empirical p vs p
  Measurement marginal_after_alice;      // vs p + s/2 - p*s
  Measurement flip_rate;                 // at Alice's positions, vs t/2
  std::size_t alice_compressed_bits = 0;
  double alice_compressed_predicted = 0.0;  // n*s*H(p)
  std::size_t bob_compressed_bits = 0;
  double bob_compressed_predicted = 0.0;    // n*t*H(p + s/2 - p*s)

  /// |positions_A| * (1 - H(flip_rate)) - L_A against the Alice payoff formula.
  double alice_capacity_estimate = 0.0;
  double alice_capacity_model = 0.0;
  /// |positions_B| - L_B against the Bob payoff formula.
  double bob_capacity_estimate = 0.0;
  double bob_capacity_model = 0.0;

  /// Restoring Bob's layer, then Alice's, returned the original cover.
  bool restored_exactly = false;
};

struct SimulationSeeds {
  std::uint64_t cover = 1;
  std::uint64_t alice_key = 2;
  std::uint64_t bob_key = 3;
  std::uint64_t payload = 4;
};

/// Two-layer embedding on a single sub-cover: Alice with fraction s, then Bob
/// with fraction t under an independent key. Both fill their capacity with
/// random payload.
SimulationReport simulate_two_layer(const GameConfig& cfg, const StrategyProfile& profile,
                                    const SimulationSeeds& seeds);

/// Seeds for run `index` derived from a base seed.
SimulationSeeds seeds_from(std::uint64_t base, std::uint64_t index = 0);

}  // namespace rwgame
