#include "rwgame/arith_coder.hpp"

#include <algorithm>
#include <stdexcept>

namespace rwgame {

namespace {

constexpr std::uint64_t kTop = 1ULL << 32;
constexpr std::uint32_t kRenorm = 1U << 24;

class BitModel {
 public:
  // Split point of the current range for bit = 0.
  std::uint32_t split(std::uint32_t range) const {
    const std::uint64_t total = zeros_ + ones_ + 2;
    std::uint64_t s = static_cast<std::uint64_t>(range) * (zeros_ + 1) / total;
    s = std::clamp<std::uint64_t>(s, 1, range - 1);
    return static_cast<std::uint32_t>(s);
  }
  void update(std::uint8_t bit) { (bit ? ones_ : zeros_) += 1; }

 private:
  std::uint64_t zeros_ = 0;
  std::uint64_t ones_ = 0;
};

class Encoder {
 public:
  explicit Encoder(std::vector<std::uint8_t>& out) : out_(out), first_(out.size()) {}

  void encode(std::uint8_t bit, const BitModel& model) {
    const std::uint32_t split = model.split(range_);
    if (bit) {
      low_ += split;
      range_ -= split;
    } else {
      range_ = split;
    }
    if (low_ >= kTop) {
      low_ -= kTop;
      carry();
    }
    while (range_ < kRenorm) {
      out_.push_back(static_cast<std::uint8_t>(low_ >> 24));
      low_ = (low_ << 8) & (kTop - 1);
      range_ <<= 8;
    }
  }

  // Emits the shortest prefix v such that [v, v + 2^(32 - 8*k)) lies in
  // [low, low + range).
  void flush() {
    const std::uint64_t end = low_ + range_;
    for (int bytes = 0; bytes <= 4; ++bytes) {
      const int shift = 32 - 8 * bytes;
      const std::uint64_t unit = 1ULL << shift;
      const std::uint64_t v = (low_ + unit - 1) >> shift << shift;
      if (v + unit <= end) {
        std::uint64_t value = v;
        if (value >= kTop) {
          value -= kTop;
          carry();
        }
        for (int b = 0; b < bytes; ++b) {
          out_.push_back(static_cast<std::uint8_t>(value >> (24 - 8 * b)));
        }
        return;
      }
    }
  }

 private:
  void carry() {
    for (std::size_t i = out_.size(); i > first_; --i) {
      if (++out_[i - 1] != 0) return;
    }
    throw std::logic_error("arithmetic coder: carry past stream start");
  }

  std::vector<std::uint8_t>& out_;
  std::size_t first_;
  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

class Decoder {
 public:
  Decoder(std::span<const std::uint8_t> data) : data_(data) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next();
  }

  std::uint8_t decode(const BitModel& model) {
    const std::uint32_t split = model.split(range_);
    std::uint8_t bit;
    if (code_ < split) {
      range_ = split;
      bit = 0;
    } else {
      code_ -= split;
      range_ -= split;
      bit = 1;
    }
    while (range_ < kRenorm) {
      code_ = (code_ << 8) | next();
      range_ <<= 8;
    }
    return bit;
  }

 private:
  std::uint32_t next() { return pos_ < data_.size() ? data_[pos_++] : 0u; }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

}  // namespace

std::vector<std::uint8_t> compress_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> out;
  const std::uint64_t count = bits.size();
  for (int b = 7; b >= 0; --b) out.push_back(static_cast<std::uint8_t>(count >> (8 * b)));

  Encoder enc(out);
  BitModel model;
  for (std::uint8_t bit : bits) {
    const std::uint8_t b = bit ? 1 : 0;
    enc.encode(b, model);
    model.update(b);
  }
  enc.flush();
  return out;
}

DecodeResult decompress_bits(std::span<const std::uint8_t> stream) {
  if (stream.size() < kStreamHeaderBits / 8) {
    throw std::invalid_argument("arithmetic coder: stream shorter than its header");
  }
  std::uint64_t count = 0;
  for (int b = 0; b < 8; ++b) count = (count << 8) | stream[b];
  // Corrupt header guard before allocating.
  if (count > (1ULL << 40)) throw std::invalid_argument("arithmetic coder: implausible bit count");

  DecodeResult result;
  result.bits.resize(count);
  Decoder dec(stream.subspan(8));
  BitModel model;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint8_t b = dec.decode(model);
    result.bits[i] = b;
    model.update(b);
  }
  // The decoder reads ahead, so the stream length comes from re-encoding.
  result.stream_bytes = compress_bits(result.bits).size();
  return result;
}

}  // namespace rwgame
