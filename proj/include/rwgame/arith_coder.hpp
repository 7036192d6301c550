#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rwgame {

/// Adaptive binary arithmetic coder.
///
/// Stream layout: the number of coded bits as a 64-bit big-endian integer,
/// followed by the range-coder bytes. The model is a Laplace-smoothed running
/// count, P(bit = 0) = (zeros + 1) / (seen + 2). The coder keeps a 32-bit
/// range and a 32-bit low register with carries propagated into bytes already
/// written. The final flush emits the shortest byte prefix whose every
/// continuation decodes correctly, so a stream may be followed by arbitrary
/// bytes (as when it is embedded ahead of a payload).
///
/// Length: at most n*H(p_hat) + log2(n + 1) + 24 bits beyond the 64-bit
/// header, where p_hat is the empirical frequency of ones.

/// Encodes a bit vector (entries 0 or 1).
std::vector<std::uint8_t> compress_bits(std::span<const std::uint8_t> bits);

struct DecodeResult {
  std::vector<std::uint8_t> bits;
  std::size_t stream_bytes = 0;  // bytes of the stream proper, header included
};

/// Decodes a stream produced by compress_bits. Bytes past the end of the
/// stream are ignored; missing bytes read as zero.
DecodeResult decompress_bits(std::span<const std::uint8_t> stream);

/// Header size in bits.
inline constexpr std::size_t kStreamHeaderBits = 64;

}  // namespace rwgame
