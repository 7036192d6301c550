#include "rwgame/embed_sim.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "rwgame/arith_coder.hpp"
#include "rwgame/entropy.hpp"
#include "rwgame/rng.hpp"

namespace rwgame {

namespace {

constexpr std::uint64_t kFillerStream = 0xF111E5ULL;

std::string too_large_message(std::size_t payload, std::ptrdiff_t capacity) {
  return "payload of " + std::to_string(payload) + " bits exceeds capacity of " +
         std::to_string(capacity) + " bits";
}

void check_fraction(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ValidationError("embedding fraction outside [0, 1]: " + std::to_string(fraction));
  }
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

Measurement measure(double measured, double predicted, double trials) {
  Measurement m{measured, predicted, 0.0, 0.0};
  if (trials > 0.0) m.std_error = std::sqrt(predicted * (1.0 - predicted) / trials);
  if (m.std_error > 0.0) {
    m.z = (measured - predicted) / m.std_error;
  } else if (trials > 0.0 && measured != predicted) {
    m.z = std::copysign(std::numeric_limits<double>::infinity(), measured - predicted);
  }
  return m;
}

double frequency(const BitSequence& bits) {
  std::size_t ones = 0;
  for (auto b : bits) ones += b;
  return bits.empty() ? 0.0 : static_cast<double>(ones) / static_cast<double>(bits.size());
}

BitSequence random_bits(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  BitSequence out(count);
  for (auto& b : out) b = rng.bit() ? 1 : 0;
  return out;
}

}  // namespace

PayloadTooLarge::PayloadTooLarge(std::size_t payload_bits, std::ptrdiff_t capacity_bits)
    : std::runtime_error(too_large_message(payload_bits, capacity_bits)),
      payload_bits_(payload_bits),
      capacity_bits_(capacity_bits) {}

std::size_t PayloadTooLarge::deficit() const {
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(payload_bits_) - capacity_bits_);
}

BitSequence generate_cover(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("generate_cover: p outside [0, 1]");
  Rng rng(seed);
  BitSequence out(n);
  for (auto& b : out) b = rng.uniform() < p ? 1 : 0;
  return out;
}

PositionSet select_positions(std::size_t n, double fraction, std::uint64_t key) {
  check_fraction(fraction);
  const auto wanted = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
  PositionSet out;
  out.reserve(wanted);
  Rng rng(key);
  for (std::size_t i = 0; i < n && out.size() < wanted; ++i) {
    if (rng.below(n - i) < wanted - out.size()) out.push_back(i);
  }
  return out;
}

BitSequence bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
  BitSequence bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return bits;
}

EmbedResult embed_layer(const BitSequence& cover, double fraction, std::uint64_t key,
                        const BitSequence& payload) {
  EmbedResult out;
  out.positions = select_positions(cover.size(), fraction, key);
  out.marked = cover;
  if (out.positions.empty()) {
    if (!payload.empty()) throw PayloadTooLarge(payload.size(), 0);
    return out;
  }

  BitSequence selected;
  selected.reserve(out.positions.size());
  for (std::size_t pos : out.positions) selected.push_back(cover[pos]);
  out.compressed = compress_bits(selected);

  if (out.capacity() < static_cast<std::ptrdiff_t>(payload.size())) {
    throw PayloadTooLarge(payload.size(), out.capacity());
  }

  const BitSequence code = bytes_to_bits(out.compressed);
  Rng filler(derive_seed(key, kFillerStream));
  for (std::size_t j = 0; j < out.positions.size(); ++j) {
    std::uint8_t bit;
    if (j < code.size()) {
      bit = code[j];
    } else if (j - code.size() < payload.size()) {
      bit = payload[j - code.size()] ? 1 : 0;
    } else {
      bit = filler.bit() ? 1 : 0;
    }
    out.marked[out.positions[j]] = bit;
  }
  return out;
}

ExtractResult extract_layer(const BitSequence& marked, double fraction, std::uint64_t key,
                            std::size_t payload_bits) {
  const PositionSet positions = select_positions(marked.size(), fraction, key);
  ExtractResult out;
  out.restored = marked;
  if (positions.empty()) {
    if (payload_bits != 0) throw PayloadTooLarge(payload_bits, 0);
    return out;
  }

  BitSequence carried;
  carried.reserve(positions.size());
  for (std::size_t pos : positions) carried.push_back(marked[pos]);

  const DecodeResult decoded = decompress_bits(bits_to_bytes(carried));
  if (decoded.bits.size() != positions.size()) {
    throw std::runtime_error("extract_layer: stream describes " +
                             std::to_string(decoded.bits.size()) + " bits, layer has " +
                             std::to_string(positions.size()));
  }
  const std::size_t code_bits = decoded.stream_bytes * 8;
  if (code_bits + payload_bits > carried.size()) {
    throw PayloadTooLarge(payload_bits,
                          static_cast<std::ptrdiff_t>(carried.size()) -
                              static_cast<std::ptrdiff_t>(code_bits));
  }
  out.payload.assign(carried.begin() + static_cast<std::ptrdiff_t>(code_bits),
                     carried.begin() + static_cast<std::ptrdiff_t>(code_bits + payload_bits));
  for (std::size_t j = 0; j < positions.size(); ++j) out.restored[positions[j]] = decoded.bits[j];
  return out;
}

SimulationSeeds seeds_from(std::uint64_t base, std::uint64_t index) {
  return {derive_seed(base, 4 * index), derive_seed(base, 4 * index + 1),
          derive_seed(base, 4 * index + 2), derive_seed(base, 4 * index + 3)};
}

SimulationReport simulate_two_layer(const GameConfig& cfg, const StrategyProfile& profile,
                                    const SimulationSeeds& seeds) {
  cfg.validate();
  check_profile(cfg, profile);
  if (cfg.l() != 1) {
    throw ValidationError("simulate_two_layer: one sub-cover per run (l=" +
                          std::to_string(cfg.l()) + ")");
  }

  SimulationReport r;
  r.n = static_cast<std::size_t>(cfg.cover.n);
  r.p = cfg.cover.p[0];
  r.s = profile.s[0];
  r.t = profile.t[0];
  const double nd = static_cast<double>(r.n);

  const BitSequence cover = generate_cover(r.n, r.p, seeds.cover);

  // Each layer fills its whole capacity with payload.
  auto embed_full = [&](const BitSequence& in, double fraction, std::uint64_t key,
                        std::uint64_t payload_seed) {
    const EmbedResult plan = embed_layer(in, fraction, key, {});
    const auto room = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, plan.capacity()));
    return std::pair{embed_layer(in, fraction, key, random_bits(room, payload_seed)), room};
  };
  const auto [alice, alice_payload] =
      embed_full(cover, r.s, seeds.alice_key, derive_seed(seeds.payload, 1));
  const auto [bob, bob_payload] =
      embed_full(alice.marked, r.t, seeds.bob_key, derive_seed(seeds.payload, 2));

  r.alice_positions = alice.positions.size();
  r.bob_positions = bob.positions.size();

  std::size_t flips = 0;
  for (std::size_t pos : alice.positions) flips += alice.marked[pos] != bob.marked[pos];
  const double flip_rate =
      alice.positions.empty() ? 0.0 : static_cast<double>(flips) / r.alice_positions;

  const double m = marginal_after_embedding(r.p, r.s);
  r.cover_frequency = measure(frequency(cover), r.p, nd);
  r.marginal_after_alice = measure(frequency(alice.marked), m, nd);
  r.flip_rate = measure(flip_rate, 0.5 * r.t, static_cast<double>(r.alice_positions));

  r.alice_compressed_bits = alice.compressed_bits();
  r.alice_compressed_predicted = nd * r.s * binary_entropy(r.p);
  r.bob_compressed_bits = bob.compressed_bits();
  r.bob_compressed_predicted = nd * r.t * binary_entropy(m);

  r.alice_capacity_estimate =
      static_cast<double>(r.alice_positions) * (1.0 - binary_entropy(flip_rate)) -
      static_cast<double>(r.alice_compressed_bits);
  r.alice_capacity_model = alice_subpayoff(nd, r.p, r.s, r.t);
  r.bob_capacity_estimate =
      static_cast<double>(r.bob_positions) - static_cast<double>(r.bob_compressed_bits);
  r.bob_capacity_model = bob_subpayoff(nd, r.p, r.s, r.t);

  // Layers come off in reverse order: Bob's, then Alice's.
  const ExtractResult undo_bob = extract_layer(bob.marked, r.t, seeds.bob_key, bob_payload);
  const ExtractResult undo_alice =
      extract_layer(undo_bob.restored, r.s, seeds.alice_key, alice_payload);
  r.restored_exactly = undo_bob.restored == alice.marked && undo_alice.restored == cover;
  return r;
}

}  // namespace rwgame
