#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "adtn/random.hpp"
#include "adtn/types.hpp"

namespace adtn {

// On-air layout, F octets total:
//
//   nonce[16] || E_k(nonce, len[2, big-endian] || payload[len] || fp[8] || pad)
//
// fp is the first 8 octets of SHA-256(len || payload). The cipher is
// ChaCha20 with the full 16-octet nonce used as its IV. There is no tag
// and no header: without the key the frame is uniform noise.

inline constexpr std::size_t kNonceLen = 16;
inline constexpr std::size_t kLengthLen = 2;
inline constexpr std::size_t kFingerprintLen = 8;
inline constexpr std::size_t kWireOverhead = kNonceLen + kLengthLen + kFingerprintLen;
inline constexpr std::size_t kDefaultFrameSize = 1024;
inline constexpr std::size_t kMinFrameSize = 64;
inline constexpr std::size_t kKeyLen = 32;

/// Raised for contract violations (oversize payload, malformed frame
/// length). A failed trial decryption is not an error.
class WireError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Frame {
  Bytes bytes;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct MessageId {
  std::array<std::uint8_t, 32> digest{};

  std::string hex() const;
  friend auto operator<=>(const MessageId&, const MessageId&) = default;
};

struct MessageIdHash {
  std::size_t operator()(const MessageId& id) const noexcept;
};

/// group_id is a simulator-side label; it is never serialized into a frame.
struct GroupKey {
  std::string group_id;
  std::array<std::uint8_t, kKeyLen> key{};
};

struct Plaintext {
  Bytes payload;
};

/// Frame size is configurable per scenario; everything else is fixed.
class WireFormat {
 public:
  explicit WireFormat(std::size_t frame_size = kDefaultFrameSize);

  std::size_t frame_size() const { return frame_size_; }
  std::size_t max_payload() const { return frame_size_ - kWireOverhead; }

 private:
  std::size_t frame_size_;
};

Frame encode_frame(const WireFormat& format, std::span<const std::uint8_t> payload,
                   const GroupKey& key, RandomStream& rng);

Frame make_cover_frame(const WireFormat& format, RandomStream& rng);

/// Returns nullopt when the key does not open the frame. Throws WireError
/// only when the frame length does not match the format.
std::optional<Plaintext> try_decrypt(const WireFormat& format, const Frame& frame,
                                     const GroupKey& key);

MessageId message_id(std::span<const std::uint8_t> payload);

/// Raw SHA-256, exposed for run identifiers and test oracles.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(std::string_view hex);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace adtn
