#include "catch_amalgamated.hpp"

#include <set>

#include "panini/common/bytes.hpp"
#include "panini/common/hash.hpp"
#include "panini/common/rng.hpp"
#include "panini/games/stats.hpp"

using namespace panini;

TEST_CASE("hex round trip", "[bytes]") {
  const Bytes b = {0x00, 0x01, 0x7f, 0x80, 0xff};
  CHECK(to_hex(b) == "00017f80ff");
  CHECK(from_hex("00017f80ff") == b);
  CHECK(from_hex("00017F80FF") == b);
  CHECK_THROWS_AS(from_hex("abc"), DecodeError);
  CHECK_THROWS_AS(from_hex("zz"), DecodeError);
}

TEST_CASE("writer and reader agree", "[bytes]") {
  ByteWriter w;
  w.u8(7).u32(0xdeadbeef).u64(0x0102030405060708ULL).field(to_bytes("abc")).raw(to_bytes("xy"));
  const Bytes out = w.bytes();
  CHECK(out.size() == 1 + 4 + 8 + 4 + 3 + 2);
  CHECK(out[1] == 0xde);  // big-endian

  ByteReader r(out);
  CHECK(r.u8() == 7);
  CHECK(r.u32() == 0xdeadbeef);
  CHECK(r.u64() == 0x0102030405060708ULL);
  auto f = r.field();
  CHECK(Bytes(f.begin(), f.end()) == to_bytes("abc"));
  CHECK(r.remaining() == 2);
  CHECK_THROWS_AS(r.expect_done(), DecodeError);
  r.raw(2);
  CHECK(r.done());
}

TEST_CASE("reader rejects truncation", "[bytes]") {
  ByteWriter w;
  w.field(Bytes(10, 1));
  Bytes b = w.bytes();
  b.pop_back();
  ByteReader r(b);
  CHECK_THROWS_AS(r.field(), DecodeError);

  ByteReader r2(Bytes{0, 0, 0});
  CHECK_THROWS_AS(r2.u32(), DecodeError);

  ByteReader r3(w.bytes());
  CHECK_THROWS_AS(r3.field(4), DecodeError);
}

TEST_CASE("sha256 and hmac match published vectors", "[hash]") {
  CHECK(to_hex(sha256({as_view(to_bytes("abc"))})) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // Split input hashes like the concatenation.
  CHECK(sha256({as_view(to_bytes("a")), as_view(to_bytes("bc"))}) == sha256({as_view(to_bytes("abc"))}));
  CHECK(to_hex(hmac_sha256(to_bytes("Jefe"), to_bytes("what do ya want for nothing?"))) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
}

TEST_CASE("rng keystream matches an independent AES-CTR computation", "[rng]") {
  // AES-256-CTR, zero IV, key = SHA-256("panini/rng/seed" || u64be(42)), computed with Python's cryptography.
  Rng rng(42);
  CHECK(rng.next_u64() == 0xd896c2c02a05298eULL);
  CHECK(rng.next_u64() == 0xcb0b93521d008264ULL);

  Rng child = Rng(42).derive("network", 3);
  CHECK(child.next_u64() == 0x7551a671c6a76599ULL);
}

TEST_CASE("rng is deterministic and streams are independent", "[rng]") {
  Rng a(1), b(1), c(2);
  const Bytes xa = a.bytes(5000);
  CHECK(xa == b.bytes(5000));
  CHECK(xa != c.bytes(5000));

  Rng parent(9);
  Rng d1 = parent.derive("x", 0);
  Rng d2 = parent.derive("x", 1);
  Rng d3 = parent.derive("y", 0);
  const auto v1 = d1.next_u64();
  CHECK(v1 != d2.next_u64());
  CHECK(v1 != d3.next_u64());
  // derive() does not consume from the parent.
  Rng fresh(9);
  CHECK(parent.next_u64() == fresh.next_u64());
}

TEST_CASE("rng uniform is in range and unbiased", "[rng]") {
  Rng rng(5);
  CHECK_THROWS_AS(rng.uniform(0), std::invalid_argument);
  std::vector<std::uint64_t> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.uniform(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  const std::vector<double> p(7, 1.0 / 7);
  CHECK(stats::chi_square_gof(counts, p).p_value > 0.001);
}
