#include "panini/crypto/lrs.hpp"

#include <openssl/bn.h>
#include <openssl/crypto.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <string_view>

#include "panini/common/hash.hpp"

namespace panini::lrs {

namespace {

struct BnFree {
  void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct GroupFree {
  void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
struct BnCtxFree {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct MdCtxFree {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnFree>;
using PointPtr = std::unique_ptr<EC_POINT, PointFree>;
using GroupPtr = std::unique_ptr<EC_GROUP, GroupFree>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnCtxFree>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;

[[noreturn]] void fail(const char* what) { throw std::runtime_error(std::string("lrs: ") + what); }

ByteView sv(std::string_view s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

constexpr std::string_view kGeneratorLabel = "panini-lrs-v1/H";
constexpr std::string_view kChallengeLabel = "panini-lrs-v1/challenge";

// The curve with its standard generator G, plus a copy whose generator is H so
// that s*H + c*I runs through the same interleaved multiplication as s*G + c*P.
struct Curve {
  GroupPtr g;
  GroupPtr h;
  BnPtr order;

  Curve() {
    g.reset(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1));
    if (!g) fail("cannot load P-256");
    order.reset(BN_dup(EC_GROUP_get0_order(g.get())));
    BnCtxPtr ctx(BN_CTX_new());

    // Try-and-increment hash onto the curve; nobody knows log_G(H).
    PointPtr point(EC_POINT_new(g.get()));
    for (std::uint32_t counter = 0;; ++counter) {
      ByteWriter w;
      w.u32(counter);
      Digest256 d = sha256({sv(kGeneratorLabel), as_view(w.bytes())});
      std::array<std::uint8_t, kPointBytes> enc{};
      enc[0] = 0x02;
      std::copy(d.begin(), d.end(), enc.begin() + 1);
      if (EC_POINT_oct2point(g.get(), point.get(), enc.data(), enc.size(), ctx.get()) == 1 &&
          EC_POINT_is_at_infinity(g.get(), point.get()) == 0)
        break;
    }
    h.reset(EC_GROUP_dup(g.get()));
    if (!h || EC_GROUP_set_generator(h.get(), point.get(), order.get(), BN_value_one()) != 1)
      fail("cannot install second generator");
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wdeprecated-declarations"
    if (EC_GROUP_precompute_mult(h.get(), ctx.get()) != 1) fail("precompute failed");
#pragma GCC diagnostic pop
  }
};

const Curve& curve() {
  static const Curve c;
  return c;
}

BnPtr new_bn() {
  BnPtr b(BN_new());
  if (!b) fail("out of memory");
  return b;
}

PointPtr new_point() {
  PointPtr p(EC_POINT_new(curve().g.get()));
  if (!p) fail("out of memory");
  return p;
}

BnCtxPtr new_ctx() {
  BnCtxPtr c(BN_CTX_new());
  if (!c) fail("out of memory");
  return c;
}

BnPtr bn_from(const Scalar& s) {
  BnPtr b(BN_bin2bn(s.data(), static_cast<int>(s.size()), nullptr));
  if (!b) fail("out of memory");
  return b;
}

/// Parses a scalar, requiring the canonical range [0, order).
BnPtr canonical_scalar(const Scalar& s) {
  BnPtr b = bn_from(s);
  if (BN_cmp(b.get(), curve().order.get()) >= 0) return nullptr;
  return b;
}

Scalar to_scalar(const BIGNUM* b) {
  Scalar out{};
  if (BN_bn2binpad(b, out.data(), static_cast<int>(out.size())) < 0) fail("scalar encode");
  return out;
}

BnPtr random_scalar(Rng& rng) {
  // 48 bytes reduced mod the order: bias below 2^-128.
  for (;;) {
    std::array<std::uint8_t, 48> buf{};
    rng.fill(buf);
    BnPtr wide(BN_bin2bn(buf.data(), static_cast<int>(buf.size()), nullptr));
    BnPtr out = new_bn();
    BnCtxPtr ctx = new_ctx();
    if (!wide || BN_nnmod(out.get(), wide.get(), curve().order.get(), ctx.get()) != 1) fail("scalar reduce");
    OPENSSL_cleanse(buf.data(), buf.size());
    if (!BN_is_zero(out.get())) return out;
  }
}

std::array<std::uint8_t, kPointBytes> encode(const EC_POINT* p, BN_CTX* ctx) {
  std::array<std::uint8_t, kPointBytes> out{};
  if (EC_POINT_point2oct(curve().g.get(), p, POINT_CONVERSION_COMPRESSED, out.data(), out.size(), ctx) !=
      out.size())
    fail("point encode");
  return out;
}

/// Decodes a compressed point; null for anything that is not a valid,
/// non-identity group element.
PointPtr decode(ByteView bytes, BN_CTX* ctx) {
  if (bytes.size() != kPointBytes) return nullptr;
  PointPtr p = new_point();
  if (EC_POINT_oct2point(curve().g.get(), p.get(), bytes.data(), bytes.size(), ctx) != 1) return nullptr;
  if (EC_POINT_is_at_infinity(curve().g.get(), p.get()) == 1) return nullptr;
  return p;
}

/// Hash state committed to (ring, key image, message); each challenge is this
/// prefix extended with one (L, R) pair.
class ChallengeHasher {
 public:
  ChallengeHasher(const Ring& ring, const KeyImage& image, ByteView msg) : prefix_(EVP_MD_CTX_new()), work_(EVP_MD_CTX_new()) {
    if (!prefix_ || !work_ || EVP_DigestInit_ex(prefix_.get(), EVP_sha512(), nullptr) != 1) fail("hash init");
    Bytes ring_bytes = ring.serialize();
    ByteWriter len;
    len.u64(msg.size());
    EVP_DigestUpdate(prefix_.get(), kChallengeLabel.data(), kChallengeLabel.size());
    EVP_DigestUpdate(prefix_.get(), ring_bytes.data(), ring_bytes.size());
    EVP_DigestUpdate(prefix_.get(), image.data(), image.size());
    EVP_DigestUpdate(prefix_.get(), len.bytes().data(), len.bytes().size());
    EVP_DigestUpdate(prefix_.get(), msg.data(), msg.size());
  }

  void next(const EC_POINT* left, const EC_POINT* right, BIGNUM* out, BN_CTX* ctx) {
    auto l = encode(left, ctx);
    auto r = encode(right, ctx);
    if (EVP_MD_CTX_copy_ex(work_.get(), prefix_.get()) != 1) fail("hash copy");
    EVP_DigestUpdate(work_.get(), l.data(), l.size());
    EVP_DigestUpdate(work_.get(), r.data(), r.size());
    std::array<std::uint8_t, 64> digest{};
    unsigned int n = 0;
    EVP_DigestFinal_ex(work_.get(), digest.data(), &n);
    BnPtr wide(BN_bin2bn(digest.data(), static_cast<int>(digest.size()), nullptr));
    if (!wide || BN_nnmod(out, wide.get(), curve().order.get(), ctx) != 1) fail("challenge reduce");
  }

 private:
  MdCtxPtr prefix_;
  MdCtxPtr work_;
};

/// left = s*G + c*P, right = s*H + c*I.
void ring_step(const BIGNUM* s, const BIGNUM* c, const EC_POINT* member, const EC_POINT* image, EC_POINT* left,
               EC_POINT* right, BN_CTX* ctx) {
  const Curve& cv = curve();
  if (EC_POINT_mul(cv.g.get(), left, s, member, c, ctx) != 1) fail("point mul");
  if (EC_POINT_mul(cv.h.get(), right, s, image, c, ctx) != 1) fail("point mul");
}

std::string bytes_str(ByteView b) { return std::string(b.begin(), b.end()); }

}  // namespace

namespace detail {
struct DecodedRing {
  std::vector<PointPtr> points;
};
}  // namespace detail

// ---------------------------------------------------------------------------
// Parameters and keys

bool PublicParams::supported() const { return *this == PublicParams{}; }

Bytes PublicParams::serialize() const {
  ByteWriter w;
  w.field(sv(group)).field(sv(hash)).field(sv(domain)).u32(security_bits);
  return std::move(w).take();
}

PublicParams PublicParams::deserialize(ByteView bytes) {
  ByteReader r(bytes);
  PublicParams pp;
  pp.group = bytes_str(r.field(64));
  pp.hash = bytes_str(r.field(64));
  pp.domain = bytes_str(r.field(64));
  pp.security_bits = r.u32();
  r.expect_done();
  return pp;
}

PublicParams setup(unsigned security_bits) {
  if (security_bits != kSecurityBits) throw UnsupportedSecurityLevel(security_bits);
  (void)curve();
  return PublicParams{};
}

VerificationKey VerificationKey::from_bytes(ByteView bytes) {
  BnCtxPtr ctx = new_ctx();
  if (!decode(bytes, ctx.get())) throw DecodeError("not a valid verification key");
  VerificationKey vk;
  std::copy(bytes.begin(), bytes.end(), vk.bytes.begin());
  return vk;
}

SecretKey::~SecretKey() { OPENSSL_cleanse(scalar_.data(), scalar_.size()); }

SecretKey SecretKey::from_hex(std::string_view hex) {
  Bytes b = panini::from_hex(hex);
  if (b.size() != kScalarBytes) throw DecodeError("secret key must be 32 bytes");
  Scalar s{};
  std::copy(b.begin(), b.end(), s.begin());
  if (!canonical_scalar(s)) throw DecodeError("secret key out of range");
  return SecretKey(s);
}

VerificationKey public_key(const SecretKey& sk) {
  BnPtr x = bn_from(sk.scalar());
  BnCtxPtr ctx = new_ctx();
  PointPtr p = new_point();
  if (EC_POINT_mul(curve().g.get(), p.get(), x.get(), nullptr, nullptr, ctx.get()) != 1) fail("point mul");
  return VerificationKey{encode(p.get(), ctx.get())};
}

KeyPair keygen(const PublicParams& pp, Rng& rng) {
  if (!pp.supported()) throw std::invalid_argument("keygen: unsupported public parameters");
  BnPtr x = random_scalar(rng);
  SecretKey sk(to_scalar(x.get()));
  return KeyPair{public_key(sk), sk};
}

// ---------------------------------------------------------------------------
// Ring

Ring::Ring(std::vector<VerificationKey> members) : members_(std::move(members)) {
  if (members_.empty()) throw InvalidRing("ring must not be empty");
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw InvalidRing("ring contains a duplicate member");
  auto decoded = std::make_shared<detail::DecodedRing>();
  decoded->points.reserve(members_.size());
  BnCtxPtr ctx = new_ctx();
  for (const auto& vk : members_) {
    PointPtr p = decode(vk.bytes, ctx.get());
    if (!p) throw InvalidRing("ring member is not a valid group element");
    decoded->points.push_back(std::move(p));
  }
  decoded_ = std::move(decoded);
}

bool Ring::contains(const VerificationKey& vk) const { return index_of(vk) != size(); }

std::size_t Ring::index_of(const VerificationKey& vk) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), vk);
  if (it == members_.end() || *it != vk) return size();
  return static_cast<std::size_t>(it - members_.begin());
}

Bytes Ring::serialize() const {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(members_.size()));
  for (const auto& vk : members_) w.raw(vk.bytes);
  return std::move(w).take();
}

Ring Ring::deserialize(ByteView bytes) {
  ByteReader r(bytes);
  std::uint32_t count = r.u32();
  if (count == 0 || count > r.remaining() / kPointBytes) throw DecodeError("bad ring length");
  std::vector<VerificationKey> members(count);
  for (auto& vk : members) {
    ByteView b = r.raw(kPointBytes);
    std::copy(b.begin(), b.end(), vk.bytes.begin());
  }
  r.expect_done();
  // A canonical encoding is already sorted; reordered bytes are not canonical.
  if (!std::is_sorted(members.begin(), members.end())) throw DecodeError("ring not in canonical order");
  return Ring(std::move(members));
}

// ---------------------------------------------------------------------------
// Signatures

Bytes Signature::serialize() const {
  ByteWriter w;
  w.raw(key_image).raw(challenge).u32(static_cast<std::uint32_t>(responses.size()));
  for (const auto& s : responses) w.raw(s);
  return std::move(w).take();
}

Signature Signature::deserialize(ByteView bytes) {
  ByteReader r(bytes);
  Signature sig;
  ByteView image = r.raw(kPointBytes);
  std::copy(image.begin(), image.end(), sig.key_image.begin());
  ByteView c = r.raw(kScalarBytes);
  std::copy(c.begin(), c.end(), sig.challenge.begin());
  std::uint32_t count = r.u32();
  if (count == 0 || count != r.remaining() / kScalarBytes) throw DecodeError("bad response count");
  sig.responses.resize(count);
  for (auto& s : sig.responses) {
    ByteView b = r.raw(kScalarBytes);
    std::copy(b.begin(), b.end(), s.begin());
  }
  r.expect_done();
  return sig;
}

Signature sign(const SecretKey& sk, ByteView msg, const Ring& ring, Rng& rng) {
  const std::size_t signer = ring.index_of(public_key(sk));
  if (signer == ring.size()) throw SignerNotInRing();

  const Curve& cv = curve();
  BnCtxPtr ctx = new_ctx();
  BnPtr x = bn_from(sk.scalar());
  const std::size_t l = ring.size();
  const auto& points = ring.decoded().points;

  PointPtr image = new_point();
  if (EC_POINT_mul(cv.h.get(), image.get(), x.get(), nullptr, nullptr, ctx.get()) != 1) fail("point mul");

  Signature sig;
  sig.key_image = encode(image.get(), ctx.get());
  sig.responses.resize(l);
  ChallengeHasher hasher(ring, sig.key_image, msg);

  PointPtr left = new_point();
  PointPtr right = new_point();
  BnPtr c = new_bn();

  // Commitment at the signer's position.
  BnPtr alpha = random_scalar(rng);
  if (EC_POINT_mul(cv.g.get(), left.get(), alpha.get(), nullptr, nullptr, ctx.get()) != 1 ||
      EC_POINT_mul(cv.h.get(), right.get(), alpha.get(), nullptr, nullptr, ctx.get()) != 1)
    fail("point mul");
  hasher.next(left.get(), right.get(), c.get(), ctx.get());

  // Walk the rest of the ring with simulated responses.
  for (std::size_t step = 1; step < l; ++step) {
    const std::size_t i = (signer + step) % l;
    if (i == 0) sig.challenge = to_scalar(c.get());
    BnPtr s = random_scalar(rng);
    sig.responses[i] = to_scalar(s.get());
    ring_step(s.get(), c.get(), points[i].get(), image.get(), left.get(), right.get(), ctx.get());
    hasher.next(left.get(), right.get(), c.get(), ctx.get());
  }
  if (signer == 0) sig.challenge = to_scalar(c.get());

  // Close the ring: s_signer = alpha - c_signer * x.
  BnPtr cx = new_bn();
  BnPtr s = new_bn();
  if (BN_mod_mul(cx.get(), c.get(), x.get(), cv.order.get(), ctx.get()) != 1 ||
      BN_mod_sub(s.get(), alpha.get(), cx.get(), cv.order.get(), ctx.get()) != 1)
    fail("scalar arithmetic");
  sig.responses[signer] = to_scalar(s.get());
  return sig;
}

bool verify(const Signature& sig, ByteView msg, const Ring& ring) {
  const std::size_t l = ring.size();
  if (sig.responses.size() != l) return false;
  try {
    BnCtxPtr ctx = new_ctx();
    PointPtr image = decode(sig.key_image, ctx.get());
    if (!image) return false;
    BnPtr c = canonical_scalar(sig.challenge);
    if (!c) return false;

    ChallengeHasher hasher(ring, sig.key_image, msg);
    PointPtr left = new_point();
    PointPtr right = new_point();
    const auto& points = ring.decoded().points;
    for (std::size_t i = 0; i < l; ++i) {
      BnPtr s = canonical_scalar(sig.responses[i]);
      if (!s) return false;
      ring_step(s.get(), c.get(), points[i].get(), image.get(), left.get(), right.get(), ctx.get());
      hasher.next(left.get(), right.get(), c.get(), ctx.get());
    }
    return to_scalar(c.get()) == sig.challenge;
  } catch (const std::exception&) {
    return false;
  }
}

bool verify(ByteView sig_bytes, ByteView msg, const Ring& ring) {
  try {
    return verify(Signature::deserialize(sig_bytes), msg, ring);
  } catch (const DecodeError&) {
    return false;
  }
}

bool link(const Signature& a, const Signature& b) { return a.key_image == b.key_image; }

bool link(ByteView a, ByteView b) {
  try {
    return link(Signature::deserialize(a), Signature::deserialize(b));
  } catch (const DecodeError&) {
    return false;
  }
}

}  // namespace panini::lrs
