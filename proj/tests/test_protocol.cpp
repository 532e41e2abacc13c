#include "catch_amalgamated.hpp"

#include "panini/protocol/simulation.hpp"

using namespace panini;
using namespace panini::protocol;

namespace {

AnycastRequest request(std::size_t l, std::size_t n, std::string msg = "hello") {
  AnycastRequest r{UserId{0}, to_bytes(msg), n, {}};
  for (std::uint32_t i = 1; i <= l; ++i) r.possible.push_back(UserId{i});
  return r;
}

RunOutput run(const AnycastRequest& req, std::uint64_t seed, const nlohmann::json& script = nullptr,
              net::CorruptionSet corrupted = {}) {
  ScriptedAdversary adv(script, seed + 1000);
  RunOptions o;
  o.seed = seed;
  o.corrupted = std::move(corrupted);
  o.adversary = &adv;
  return run_anycast(req, o);
}

}  // namespace

TEST_CASE("messages survive encoding", "[messages]") {
  Rng rng(1);
  const auto kp = lrs::keygen(lrs::setup(128), rng);
  const auto key = cipher::keygen(rng);
  const std::vector<ProtocolMessage> msgs = {
      KeyReq{RunId{1, 2, 3}, lrs::setup(128).serialize()},
      VkSubmit{kp.vk},
      RingAnnounce{lrs::Ring({kp.vk}).serialize()},
      KeySubmit{key, Bytes{9, 9}},
      CiphertextMsg{cipher::encrypt(cipher::tagged(to_bytes("m")), key, rng)},
  };
  for (const auto& m : msgs) {
    const Bytes b = encode(m);
    CHECK(b[0] == static_cast<std::uint8_t>(kind_of(m)));
    CHECK(encode(decode(b)) == b);
    Bytes longer = b;
    longer.push_back(0);
    CHECK_THROWS_AS(decode(longer), DecodeError);
    CHECK_THROWS_AS(decode(ByteView(b.data(), b.size() - 1)), DecodeError);
  }
  CHECK_THROWS_AS(decode(Bytes{}), DecodeError);
  CHECK_THROWS_AS(decode(Bytes{42}), DecodeError);
}

TEST_CASE("requests are validated", "[protocol]") {
  CHECK_NOTHROW(request(3, 1).validate());
  CHECK_THROWS_AS(request(3, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(request(3, 4).validate(), std::invalid_argument);
  auto r = request(3, 1);
  r.possible.push_back(UserId{0});
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  auto d = request(3, 1);
  d.possible.push_back(UserId{2});
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("honest runs deliver to exactly n receivers", "[protocol]") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto out = run(request(3, n), n);
    CHECK(out.result.outcome == Outcome::Delivered);
    CHECK(out.result.chosen.size() == n);
    CHECK(out.result.chosen == out.result.selected);
    CHECK(out.result.keys_remaining == 3 - n);
    CHECK(out.stats.in_flight == 0);
    CHECK(events_of(out.transcript, "anon_batch").size() == 1);
    CHECK(events_of(out.transcript, "auth_send").size() == 3 + 3 + 3 + 3 * n);
  }
}

TEST_CASE("every possible receiver sees every ciphertext", "[protocol]") {
  const auto out = run(request(4, 2), 9);
  std::map<std::uint32_t, int> got;
  for (const auto* e : events_of(out.transcript, "auth_deliver"))
    if (e->data["label"] == "CiphertextMsg") ++got[e->data["destination"].get<std::uint32_t>()];
  CHECK(got.size() == 4);
  for (const auto& [u, c] : got) CHECK(c == 2);
}

TEST_CASE("scripted attacks end in their abort", "[protocol]") {
  const auto req = request(4, 1);
  SECTION("forged key submission") {
    auto out = run(req, 1, R"([{"action":"insert","forge":"random_key","channel":"anon","nth":0}])"_json);
    CHECK(out.result.outcome == Outcome::InvalidSignature);
  }
  SECTION("replayed key submission") {
    auto out = run(req, 2, R"([{"action":"replay","channel":"anon","label":"KeySubmit","nth":0}])"_json);
    CHECK(out.result.outcome == Outcome::DuplicateKey);
  }
  SECTION("double submission by a corrupted receiver") {
    auto out = run(req, 3,
                   R"([{"action":"insert","forge":"corrupted_key","channel":"anon","from":2},
                       {"action":"drop","channel":"anon","from_corrupted":false,"nth":0}])"_json,
                   net::CorruptionSet{{UserId{2}}});
    CHECK(out.result.outcome == Outcome::LinkedKeys);
  }
  SECTION("double submission without a drop is still linked") {
    auto out = run(req, 3, R"([{"action":"insert","forge":"corrupted_key","channel":"anon","from":2}])"_json,
                   net::CorruptionSet{{UserId{2}}});
    CHECK(out.result.outcome == Outcome::LinkedKeys);
  }
  SECTION("delayed keys time out") {
    auto out = run(req, 4, R"([{"action":"delay","channel":"anon","ticks":101,"nth":0}])"_json);
    CHECK(out.result.outcome == Outcome::Timeout);
  }
  SECTION("a delay within the mix window is tolerated") {
    auto out = run(req, 4, R"([{"action":"delay","channel":"anon","ticks":100,"nth":0}])"_json);
    CHECK(out.result.outcome == Outcome::Delivered);
  }
  SECTION("tampered auth traffic is rejected") {
    auto out = run(req, 5, R"([{"action":"modify","channel":"auth","label":"KeyReq","nth":0}])"_json);
    CHECK(out.result.outcome == Outcome::AuthRejected);
    CHECK_FALSE(events_of(out.transcript, "integrity_violation").empty());
  }
  SECTION("a dropped key stalls until timeout") {
    auto out = run(req, 6, R"([{"action":"drop","channel":"anon","nth":0}])"_json);
    CHECK(out.result.outcome == Outcome::Timeout);
  }
  SECTION("a dropped vk stalls the run") {
    auto out = run(req, 7, R"([{"action":"drop","channel":"auth","label":"VkSubmit","nth":0}])"_json);
    CHECK(out.result.outcome == Outcome::Stalled);
  }
  SECTION("replayed auth traffic is harmless") {
    auto out = run(req, 8, R"([{"action":"replay","channel":"auth","count":2}])"_json);
    CHECK(out.result.outcome == Outcome::Delivered);
  }
}

TEST_CASE("unknown script actions are refused", "[protocol]") {
  CHECK_THROWS_AS(ScriptedAdversary(R"([{"action":"explode"}])"_json, 1), UnknownAdversaryAction);
  CHECK_THROWS_AS(ScriptedAdversary(R"([{"action":"drop","colour":"red"}])"_json, 1), std::invalid_argument);
  CHECK_THROWS_AS(ScriptedAdversary(R"({"action":"drop"})"_json, 1), std::invalid_argument);
}

TEST_CASE("exit codes are distinct", "[protocol]") {
  std::set<int> codes;
  for (Outcome o : {Outcome::Delivered, Outcome::InvalidSignature, Outcome::DuplicateKey, Outcome::LinkedKeys,
                    Outcome::Timeout, Outcome::AuthRejected, Outcome::InconsistentPeer,
                    Outcome::DuplicateVerificationKey, Outcome::ExcessKeys, Outcome::Stalled})
    codes.insert(exit_code(o));
  CHECK(codes.size() == 10);
  CHECK(exit_code(Outcome::Delivered) == 0);
}

TEST_CASE("sender vk collection", "[protocol][sender]") {
  Rng rng(1);
  const auto pp = lrs::setup(128);
  const auto k1 = lrs::keygen(pp, rng), k2 = lrs::keygen(pp, rng), k3 = lrs::keygen(pp, rng);

  auto fresh = [&] {
    Sender s(UserId{0}, Rng(5), {});
    auto out = s.start(request(2, 1), 0);
    REQUIRE(out.size() == 2);
    CHECK(out[0].payload == out[1].payload);
    CHECK(s.phase() == Sender::Phase::CollectVks);
    return s;
  };

  SECTION("outsiders are ignored and replays are harmless") {
    Sender s = fresh();
    CHECK(s.on_vk(k3.vk, UserId{7}, 1).empty());
    CHECK(s.on_vk(k1.vk, UserId{1}, 1).empty());
    CHECK(s.on_vk(k1.vk, UserId{1}, 1).empty());
    CHECK(s.phase() == Sender::Phase::CollectVks);
    auto ring = s.on_vk(k2.vk, UserId{2}, 1);
    CHECK(ring.size() == 2);
    CHECK(s.phase() == Sender::Phase::CollectKeys);
    CHECK(s.deadline() == Tick{201});
  }
  SECTION("two members with one key abort") {
    Sender s = fresh();
    s.on_vk(k1.vk, UserId{1}, 1);
    s.on_vk(k1.vk, UserId{2}, 1);
    CHECK(s.abort_reason() == AbortReason::DuplicateVerificationKey);
  }
  SECTION("a member changing its key aborts") {
    Sender s = fresh();
    s.on_vk(k1.vk, UserId{1}, 1);
    s.on_vk(k2.vk, UserId{1}, 1);
    CHECK(s.abort_reason() == AbortReason::InconsistentPeer);
  }
  SECTION("timeout fires at the deadline") {
    Sender s = fresh();
    s.on_vk(k1.vk, UserId{1}, 1);
    s.on_vk(k2.vk, UserId{2}, 1);
    s.settle(200);
    CHECK(s.phase() == Sender::Phase::CollectKeys);
    s.settle(201);
    CHECK(s.abort_reason() == AbortReason::Timeout);
  }
}

TEST_CASE("sender key collection and distribution", "[protocol][sender]") {
  Rng rng(2);
  const auto pp = lrs::setup(128);
  const auto k1 = lrs::keygen(pp, rng), k2 = lrs::keygen(pp, rng);
  const lrs::Ring ring({k1.vk, k2.vk});
  const auto e1 = cipher::keygen(rng), e2 = cipher::keygen(rng), e3 = cipher::keygen(rng);
  const Bytes s1 = lrs::sign(k1.sk, e1.bytes, ring, rng).serialize();
  const Bytes s2 = lrs::sign(k2.sk, e2.bytes, ring, rng).serialize();

  auto ready = [&] {
    Sender s(UserId{0}, Rng(6), {});
    s.start(request(2, 1, "payload"), 0);
    s.on_vk(k1.vk, UserId{1}, 1);
    s.on_vk(k2.vk, UserId{2}, 1);
    return s;
  };

  SECTION("two valid keys: one ciphertext to both members") {
    Sender s = ready();
    s.on_key(e1, s1, 50);
    s.on_key(e2, s2, 50);
    auto out = s.settle(50);
    REQUIRE(out.size() == 2);
    CHECK(out[0].payload == out[1].payload);
    CHECK(s.phase() == Sender::Phase::Done);
    CHECK(s.keys().size() == 1);
    REQUIRE(s.selected().size() == 1);

    auto msg = std::get<CiphertextMsg>(decode(out[0].payload));
    const auto& chosen = s.selected()[0];
    CHECK(cipher::decrypt(msg.ciphertext, chosen).message == to_bytes("payload"));
    const auto& other = chosen == e1 ? e2 : e1;
    CHECK_FALSE(cipher::decrypt(msg.ciphertext, other).tag_matches());
  }
  SECTION("bad signature") {
    Sender s = ready();
    s.on_key(e3, s1, 50);
    CHECK(s.abort_reason() == AbortReason::InvalidSignature);
  }
  SECTION("duplicate key") {
    Sender s = ready();
    s.on_key(e1, s1, 50);
    s.on_key(e1, s1, 50);
    CHECK(s.abort_reason() == AbortReason::DuplicateKey);
  }
  SECTION("linked keys") {
    Sender s = ready();
    s.on_key(e1, s1, 50);
    s.on_key(e3, lrs::sign(k1.sk, e3.bytes, ring, rng).serialize(), 50);
    s.settle(50);
    CHECK(s.abort_reason() == AbortReason::LinkedKeys);
  }
  SECTION("abort emits nothing") {
    Sender s = ready();
    s.on_key(e3, s1, 50);
    CHECK(s.settle(50).empty());
  }
}

TEST_CASE("receiver behaviour", "[protocol][receiver]") {
  Rng rng(3);
  const auto pp = lrs::setup(128);
  const KeyReq req{RunId{7}, pp.serialize()};

  SECTION("answers the first KeyReq only") {
    Receiver r(UserId{1}, Rng(1));
    auto out = r.on_keyreq(req, UserId{0});
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == MessageKind::VkSubmit);
    CHECK(out[0].to == UserId{0});
    CHECK(r.on_keyreq(req, UserId{0}).empty());
    CHECK(r.status() == Receiver::Status::AwaitRing);
  }
  SECTION("malformed parameters end participation") {
    Receiver r(UserId{1}, Rng(1));
    CHECK(r.on_keyreq(KeyReq{RunId{}, Bytes{1, 2}}, UserId{0}).empty());
    CHECK(r.status() == Receiver::Status::Aborted);
  }
  SECTION("a ring without our key drops us out") {
    Receiver r(UserId{1}, Rng(1));
    r.on_keyreq(req, UserId{0});
    const auto other = lrs::keygen(pp, rng);
    CHECK(r.on_ring(lrs::Ring({other.vk}).serialize(), UserId{0}).empty());
    CHECK(r.status() == Receiver::Status::DroppedOut);
  }
  SECTION("rings from someone else are ignored") {
    Receiver r(UserId{1}, Rng(1));
    r.on_keyreq(req, UserId{0});
    CHECK(r.on_ring(lrs::Ring({r.keypair()->vk}).serialize(), UserId{5}).empty());
    CHECK(r.status() == Receiver::Status::AwaitRing);
  }
  SECTION("a malformed ring ends participation") {
    Receiver r(UserId{1}, Rng(1));
    r.on_keyreq(req, UserId{0});
    CHECK(r.on_ring(Bytes{0, 0, 0, 1}, UserId{0}).empty());
    CHECK(r.status() == Receiver::Status::Aborted);
  }
  SECTION("submits a verifiable key and outputs once on the right tag") {
    Receiver r(UserId{1}, Rng(1));
    r.on_keyreq(req, UserId{0});
    const auto other = lrs::keygen(pp, rng);
    const lrs::Ring ring({other.vk, r.keypair()->vk});
    auto out = r.on_ring(ring.serialize(), UserId{0});
    REQUIRE(out.size() == 1);
    CHECK(out[0].channel == net::Channel::Anon);
    auto ks = std::get<KeySubmit>(decode(out[0].payload));
    CHECK(lrs::verify(ks.signature, ks.key.bytes, ring));
    CHECK(ks.key == *r.ephemeral());

    const auto wrong = cipher::encrypt(cipher::tagged(to_bytes("no")), cipher::keygen(rng), rng);
    CHECK_FALSE(r.on_ciphertext(wrong, UserId{0}));
    const auto right = cipher::encrypt(cipher::tagged(to_bytes("yes")), ks.key, rng);
    CHECK(r.on_ciphertext(right, UserId{9}) == std::nullopt);
    CHECK(r.on_ciphertext(right, UserId{0}) == to_bytes("yes"));
    CHECK(r.on_ciphertext(right, UserId{0}) == std::nullopt);
    CHECK(r.delivered() == to_bytes("yes"));
    CHECK(r.snapshot()["ciphertexts"].size() == 3);
  }
}

TEST_CASE("corrupted parties leak their state into the transcript", "[protocol]") {
  const auto out = run(request(3, 1), 4, nullptr, net::CorruptionSet{{UserId{0}, UserId{2}}});
  CHECK(out.result.outcome == Outcome::Delivered);
  bool sender = false;
  bool receiver = false;
  for (const auto* e : events_of(out.transcript, "corrupt_state")) {
    const auto u = e->data["user"].get<std::uint32_t>();
    CHECK((u == 0 || u == 2));
    if (u == 0) sender = true;
    if (u == 2) receiver = true;
  }
  CHECK(sender);
  CHECK(receiver);
}

TEST_CASE("runs are reproducible from the seed", "[protocol]") {
  const auto a = run(request(3, 1), 77);
  const auto b = run(request(3, 1), 77);
  CHECK(to_jsonl(a.transcript) == to_jsonl(b.transcript));
  CHECK(a.result.chosen == b.result.chosen);
}
