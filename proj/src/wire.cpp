#include "adtn/wire.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <memory>

namespace adtn {
namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};

// One context per thread; reinitialised for every keystream use.
EVP_CIPHER_CTX* thread_cipher_ctx() {
  thread_local std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx{EVP_CIPHER_CTX_new()};
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  return ctx.get();
}

// XORs the ChaCha20 keystream for (key, nonce) into data. Stream position
// 0 corresponds to data[0]; encryption and decryption are the same call.
void chacha20_xor(const GroupKey& key, std::span<const std::uint8_t> nonce,
                  std::span<std::uint8_t> data) {
  EVP_CIPHER_CTX* ctx = thread_cipher_ctx();
  if (EVP_EncryptInit_ex(ctx, EVP_chacha20(), nullptr, key.key.data(), nonce.data()) != 1) {
    throw std::runtime_error("chacha20 init failed");
  }
  int out_len = 0;
  if (!data.empty() &&
      EVP_EncryptUpdate(ctx, data.data(), &out_len, data.data(), static_cast<int>(data.size())) !=
          1) {
    throw std::runtime_error("chacha20 update failed");
  }
}

std::array<std::uint8_t, 32> digest_len_payload(std::span<const std::uint8_t> payload) {
  Bytes buf(kLengthLen + payload.size());
  buf[0] = static_cast<std::uint8_t>(payload.size() >> 8);
  buf[1] = static_cast<std::uint8_t>(payload.size() & 0xff);
  if (!payload.empty()) std::memcpy(buf.data() + kLengthLen, payload.data(), payload.size());
  return sha256(buf);
}

}  // namespace

WireFormat::WireFormat(std::size_t frame_size) : frame_size_(frame_size) {
  if (frame_size < kMinFrameSize) {
    throw WireError("frame size must be at least " + std::to_string(kMinFrameSize));
  }
  if (frame_size - kWireOverhead > 0xffff) {
    throw WireError("frame size too large for 16-bit payload length");
  }
}

std::string MessageId::hex() const { return to_hex(digest); }

std::size_t MessageIdHash::operator()(const MessageId& id) const noexcept {
  std::size_t h;
  std::memcpy(&h, id.digest.data(), sizeof h);
  return h;
}

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  return out;
}

MessageId message_id(std::span<const std::uint8_t> payload) {
  return MessageId{digest_len_payload(payload)};
}

Frame encode_frame(const WireFormat& format, std::span<const std::uint8_t> payload,
                   const GroupKey& key, RandomStream& rng) {
  if (payload.size() > format.max_payload()) {
    throw WireError("payload too large: " + std::to_string(payload.size()) + " > " +
                    std::to_string(format.max_payload()));
  }
  Frame frame;
  frame.bytes.resize(format.frame_size());
  std::span<std::uint8_t> all{frame.bytes};
  auto nonce = all.first(kNonceLen);
  auto body = all.subspan(kNonceLen);
  rng.fill(nonce);

  body[0] = static_cast<std::uint8_t>(payload.size() >> 8);
  body[1] = static_cast<std::uint8_t>(payload.size() & 0xff);
  if (!payload.empty()) std::memcpy(body.data() + kLengthLen, payload.data(), payload.size());
  const auto digest = digest_len_payload(payload);
  std::memcpy(body.data() + kLengthLen + payload.size(), digest.data(), kFingerprintLen);
  rng.fill(body.subspan(kLengthLen + payload.size() + kFingerprintLen));

  chacha20_xor(key, nonce, body);
  return frame;
}

Frame make_cover_frame(const WireFormat& format, RandomStream& rng) {
  Frame frame;
  frame.bytes.resize(format.frame_size());
  rng.fill(frame.bytes);
  return frame;
}

std::optional<Plaintext> try_decrypt(const WireFormat& format, const Frame& frame,
                                     const GroupKey& key) {
  if (frame.bytes.size() != format.frame_size()) {
    throw WireError("malformed frame: " + std::to_string(frame.bytes.size()) +
                    " octets, expected " + std::to_string(format.frame_size()));
  }
  std::span<const std::uint8_t> all{frame.bytes};
  const auto nonce = all.first(kNonceLen);
  const auto body = all.subspan(kNonceLen);

  // Decrypt only the length field first; most wrong-key attempts stop here.
  std::array<std::uint8_t, kLengthLen> len_buf{body[0], body[1]};
  chacha20_xor(key, nonce, len_buf);
  const std::size_t len = (std::size_t{len_buf[0]} << 8) | len_buf[1];
  if (len > format.max_payload()) return std::nullopt;

  Bytes prefix(body.begin(), body.begin() + static_cast<std::ptrdiff_t>(kLengthLen + len +
                                                                        kFingerprintLen));
  chacha20_xor(key, nonce, prefix);
  std::span<const std::uint8_t> payload{prefix.data() + kLengthLen, len};
  const auto digest = digest_len_payload(payload);
  if (std::memcmp(digest.data(), prefix.data() + kLengthLen + len, kFingerprintLen) != 0) {
    return std::nullopt;
  }
  return Plaintext{Bytes(payload.begin(), payload.end())};
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw WireError("odd-length hex string");
  auto nibble = [](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw WireError(std::string("invalid hex digit '") + c + "'");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return out;
}

}  // namespace adtn
