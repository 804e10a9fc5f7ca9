#include <gtest/gtest.h>

#include <openssl/evp.h>

#include <set>

#include <boost/math/special_functions/gamma.hpp>

#include "adtn/wire.hpp"
#include "fixtures.hpp"

namespace adtn {
namespace {

using testing::bytes_of;
using testing::make_key;

// Independent decoder: raw OpenSSL ChaCha20 over everything after the nonce.
Bytes raw_decrypt(const Frame& frame, const GroupKey& key) {
  Bytes out(frame.bytes.size() - kNonceLen);
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  int len = 0;
  EVP_DecryptInit_ex(ctx, EVP_chacha20(), nullptr, key.key.data(), frame.bytes.data());
  EVP_DecryptUpdate(ctx, out.data(), &len, frame.bytes.data() + kNonceLen,
                    static_cast<int>(out.size()));
  EVP_CIPHER_CTX_free(ctx);
  return out;
}

TEST(Wire, RoundTripShortPayload) {
  WireFormat fmt;
  RandomStream rng(1, "t");
  const auto key = make_key("A");
  const Frame f = encode_frame(fmt, as_bytes("hi"), key, rng);
  ASSERT_EQ(f.bytes.size(), 1024u);
  auto p = try_decrypt(fmt, f, key);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->payload, bytes_of("hi"));
}

TEST(Wire, MaxPayloadFillsFrameExactly) {
  WireFormat fmt;
  EXPECT_EQ(fmt.max_payload(), 1024u - 26u);
  RandomStream rng(2, "t");
  const auto key = make_key("A");
  Bytes payload(fmt.max_payload(), 0xAB);
  const Frame f = encode_frame(fmt, payload, key, rng);
  EXPECT_EQ(f.bytes.size(), 1024u);
  EXPECT_EQ(try_decrypt(fmt, f, key)->payload, payload);
  // No padding: the fingerprint ends exactly at the frame end.
  const Bytes plain = raw_decrypt(f, key);
  EXPECT_EQ(plain.size(), 2 + payload.size() + kFingerprintLen);
}

TEST(Wire, OversizePayloadRejected) {
  WireFormat fmt;
  RandomStream rng(3, "t");
  Bytes payload(fmt.max_payload() + 1, 0);
  EXPECT_THROW(encode_frame(fmt, payload, make_key("A"), rng), WireError);
}

TEST(Wire, EmptyPayloadRoundTrips) {
  WireFormat fmt(64);
  RandomStream rng(4, "t");
  const auto key = make_key("A");
  auto p = try_decrypt(fmt, encode_frame(fmt, Bytes{}, key, rng), key);
  ASSERT_TRUE(p);
  EXPECT_TRUE(p->payload.empty());
}

TEST(Wire, FrameSizeBounds) {
  EXPECT_NO_THROW(WireFormat(kMinFrameSize));
  EXPECT_THROW(WireFormat(kMinFrameSize - 1), WireError);
  EXPECT_THROW(WireFormat(70000), WireError);
}

TEST(Wire, PlaintextLayoutIsBitExact) {
  WireFormat fmt(128);
  RandomStream rng(5, "t");
  const auto key = make_key("A");
  const Bytes payload = bytes_of("layout check");
  const Frame f = encode_frame(fmt, payload, key, rng);
  const Bytes plain = raw_decrypt(f, key);
  ASSERT_EQ(plain.size(), 128u - kNonceLen);
  EXPECT_EQ(plain[0], 0);
  EXPECT_EQ(plain[1], payload.size());
  EXPECT_TRUE(std::equal(payload.begin(), payload.end(), plain.begin() + 2));
  Bytes header(plain.begin(), plain.begin() + 2 + static_cast<std::ptrdiff_t>(payload.size()));
  const auto digest = sha256(header);
  EXPECT_TRUE(std::equal(digest.begin(), digest.begin() + 8,
                         plain.begin() + 2 + static_cast<std::ptrdiff_t>(payload.size())));
}

TEST(Wire, NoncesDifferAcrossCalls) {
  WireFormat fmt;
  RandomStream rng(6, "t");
  const auto key = make_key("A");
  const Frame a = encode_frame(fmt, as_bytes("same"), key, rng);
  const Frame b = encode_frame(fmt, as_bytes("same"), key, rng);
  EXPECT_NE(a, b);
  EXPECT_FALSE(std::equal(a.bytes.begin(), a.bytes.begin() + kNonceLen, b.bytes.begin()));
}

TEST(Wire, WrongKeyFails) {
  WireFormat fmt;
  RandomStream rng(7, "t");
  const auto k1 = make_key("A");
  const auto k2 = make_key("B");
  for (int i = 0; i < 2000; ++i) {
    Bytes payload(rng.below(fmt.max_payload() + 1));
    rng.fill(payload);
    EXPECT_FALSE(try_decrypt(fmt, encode_frame(fmt, payload, k1, rng), k2));
  }
}

TEST(Wire, CoverFramesAreUnreadableAndDistinct) {
  WireFormat fmt;
  RandomStream rng(1, "cover");
  std::vector<GroupKey> keys;
  for (int k = 0; k < 10; ++k) keys.push_back(make_key("K" + std::to_string(k)));
  std::set<Bytes> seen;
  for (int i = 0; i < 1000; ++i) {
    const Frame f = make_cover_frame(fmt, rng);
    ASSERT_EQ(f.bytes.size(), 1024u);
    EXPECT_TRUE(seen.insert(f.bytes).second);
    for (const auto& k : keys) EXPECT_FALSE(try_decrypt(fmt, f, k));
  }
}

TEST(Wire, TamperedFingerprintRejected) {
  WireFormat fmt(64);
  RandomStream rng(8, "t");
  const auto key = make_key("A");
  Frame f = encode_frame(fmt, as_bytes("abc"), key, rng);
  f.bytes[kNonceLen + 2 + 3] ^= 0x01;  // first fingerprint octet
  EXPECT_FALSE(try_decrypt(fmt, f, key));
}

TEST(Wire, OutOfRangeLengthRejected) {
  WireFormat fmt(64);
  RandomStream rng(9, "t");
  const auto key = make_key("A");
  Frame f = encode_frame(fmt, as_bytes("abc"), key, rng);
  f.bytes[kNonceLen] ^= 0x80;  // length becomes > max_payload
  EXPECT_FALSE(try_decrypt(fmt, f, key));
}

TEST(Wire, MalformedLengthIsHardError) {
  WireFormat fmt;
  Frame f{Bytes(1023, 0)};
  EXPECT_THROW(try_decrypt(fmt, f, make_key("A")), WireError);
}

TEST(Wire, MessageIdIsDigestOfLengthAndPayload) {
  EXPECT_EQ(message_id(as_bytes("hi")), message_id(as_bytes("hi")));
  EXPECT_NE(message_id(as_bytes("hi")), message_id(as_bytes("ho")));
  const Bytes framed{0, 2, 'h', 'i'};
  EXPECT_EQ(message_id(as_bytes("hi")).digest, sha256(framed));
}

TEST(Wire, Sha256KnownAnswer) {
  EXPECT_EQ(to_hex(sha256(as_bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Wire, HexRoundTrip) {
  const Bytes b{0x00, 0x7f, 0xff, 0x10};
  EXPECT_EQ(to_hex(b), "007fff10");
  EXPECT_EQ(from_hex("007FFF10"), b);
  EXPECT_THROW(from_hex("abc"), WireError);
  EXPECT_THROW(from_hex("zz"), WireError);
}

TEST(Wire, CoverByteHistogramIsUniform) {
  // Oracle: plain chi-square over the pooled byte histogram, 255 dof.
  WireFormat fmt;
  RandomStream rng(1, "cover");
  std::array<double, 256> counts{};
  for (int i = 0; i < 10000; ++i) {
    for (std::uint8_t b : make_cover_frame(fmt, rng).bytes) counts[b] += 1;
  }
  const double expected = 10000.0 * 1024 / 256;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_GT(boost::math::gamma_q(255 / 2.0, chi2 / 2), 0.01);
}

}  // namespace
}  // namespace adtn
