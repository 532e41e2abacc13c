#include "catch_amalgamated.hpp"

#include <functional>

#include "panini/games/stats.hpp"
#include "panini/net/network.hpp"

using namespace panini;
using namespace panini::net;

namespace {

constexpr UserId A{1}, B{2}, C{3}, D{4};

Network make_net(std::uint64_t seed, NetworkConfig cfg = {}) {
  Network n(cfg, seed);
  for (UserId u : {A, B, C, D}) n.register_user(u);
  return n;
}

std::vector<Delivery> drain(Network& n) {
  std::vector<Delivery> out;
  while (auto t = n.next_due()) {
    auto d = n.advance(*t);
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

class Scripted : public Adversary {
 public:
  using Fn = std::function<std::vector<AdversaryAction>(const Interception&, const AdversaryView&)>;
  explicit Scripted(Fn f) : f_(std::move(f)) {}
  std::vector<AdversaryAction> intercept(const Interception& e, const AdversaryView& v) override { return f_(e, v); }

 private:
  Fn f_;
};

std::uint64_t conserved(const NetworkStats& s) { return s.delivered + s.dropped + s.rejected + s.in_flight; }

}  // namespace

TEST_CASE("auth channel delivers after the latency with origin", "[network]") {
  Network n = make_net(1);
  n.auth_send(A, to_bytes("hi"), B, "x");
  CHECK(n.next_due() == Tick{1});
  auto d = n.advance(1);
  REQUIRE(d.size() == 1);
  CHECK(d[0].origin == A);
  CHECK(d[0].destination == B);
  CHECK(d[0].payload == to_bytes("hi"));
  CHECK(d[0].channel == Channel::Auth);

  const auto& t = n.transcript();
  REQUIRE(t.size() == 2);
  CHECK(t[0].kind == "auth_send");
  CHECK(t[0].data["size"] == 2 + Network::kMacOverhead);
  CHECK(t[1].kind == "auth_deliver");
  CHECK(t[1].tick == 1);
  // The observer never sees payload bytes.
  CHECK(to_jsonl(t).find(to_hex(to_bytes("hi"))) == std::string::npos);
}

TEST_CASE("unknown users are rejected", "[network]") {
  Network n = make_net(1);
  CHECK_THROWS_AS(n.auth_send(A, {}, UserId{99}), UnknownUser);
  CHECK_THROWS_AS(n.anon_send(UserId{99}, {}, A), UnknownUser);
  CHECK_THROWS_AS(Network(NetworkConfig{0, 100}, 1), std::invalid_argument);
}

TEST_CASE("anon channel batches, shuffles and strips origins", "[network]") {
  Network n = make_net(2);
  n.anon_send(A, to_bytes("a"), D);
  n.advance(10);
  n.anon_send(B, to_bytes("b"), D);
  n.anon_send(C, to_bytes("c"), D);
  CHECK(n.next_due() == Tick{100});
  auto d = n.advance(100);
  REQUIRE(d.size() == 3);
  for (const auto& x : d) {
    CHECK_FALSE(x.origin.has_value());
    CHECK(x.time == 100);
    CHECK(x.channel == Channel::Anon);
  }
  const auto batches = events_of(n.transcript(), "anon_batch");
  REQUIRE(batches.size() == 1);
  CHECK(batches[0]->data["count"] == 3);
  CHECK_FALSE(batches[0]->data.contains("origin"));
}

TEST_CASE("mix order is uniform and independent of submission order", "[network]") {
  // Three users submit in a fixed order; the position of A's entry in the
  // delivered batch must be uniform.
  std::vector<std::uint64_t> position(3, 0);
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Network n = make_net(seed);
    n.anon_send(A, to_bytes("A"), D);
    n.anon_send(B, to_bytes("B"), D);
    n.anon_send(C, to_bytes("C"), D);
    auto d = drain(n);
    REQUIRE(d.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
      if (d[i].payload == to_bytes("A")) ++position[i];
  }
  const std::vector<double> p(3, 1.0 / 3);
  CHECK(stats::chi_square_gof(position, p).p_value > 0.001);
}

TEST_CASE("arrivals at the closing tick still make the round", "[network]") {
  Network n = make_net(3);
  n.anon_send(A, to_bytes("a"), D);
  n.advance(99);
  Scripted adv([](const Interception&, const AdversaryView&) { return std::vector<AdversaryAction>{Delay{1}}; });
  n.set_adversary(&adv);
  n.anon_send(B, to_bytes("b"), D);  // arrives at 100, same tick as the close
  auto d = n.advance(100);
  CHECK(d.size() == 2);
}

TEST_CASE("late arrivals open a new round", "[network]") {
  Network n = make_net(3);
  Scripted adv([](const Interception& e, const AdversaryView&) {
    if (e.origin == B) return std::vector<AdversaryAction>{Delay{101}};
    return std::vector<AdversaryAction>{};
  });
  n.set_adversary(&adv);
  n.anon_send(A, to_bytes("a"), D);
  n.anon_send(B, to_bytes("b"), D);
  auto first = n.advance(100);
  CHECK(first.size() == 1);
  auto rest = drain(n);
  REQUIRE(rest.size() == 1);
  CHECK(rest[0].time == 201);
}

TEST_CASE("same seed, same transcript", "[network]") {
  auto run = [](std::uint64_t seed) {
    Network n = make_net(seed);
    n.auth_send(A, to_bytes("1"), B);
    n.auth_send(C, to_bytes("2"), B);
    n.anon_send(A, to_bytes("3"), D);
    n.anon_send(B, to_bytes("4"), D);
    n.anon_send(C, to_bytes("5"), D);
    auto d = drain(n);
    Bytes order;
    for (const auto& x : d) order.insert(order.end(), x.payload.begin(), x.payload.end());
    return std::make_pair(to_jsonl(n.transcript()), order);
  };
  CHECK(run(11) == run(11));
  bool differs = false;
  for (std::uint64_t s = 12; s < 40 && !differs; ++s) differs = run(11).second != run(s).second;
  CHECK(differs);
}

TEST_CASE("adversary actions and conservation", "[network]") {
  Network n = make_net(4);
  Scripted adv([](const Interception& e, const AdversaryView&) -> std::vector<AdversaryAction> {
    if (e.label == "drop") return {Drop{}};
    if (e.label == "replay") return {Replay{2}};
    if (e.label == "modify") return {Modify{0, 0x01}};
    if (e.label == "insert") return {Insert{Channel::Auth, C, B, to_bytes("forged"), "forged", 0}};
    return {};
  });
  n.set_adversary(&adv);

  n.auth_send(A, to_bytes("x"), B, "drop");
  n.auth_send(A, to_bytes("x"), B, "replay");
  n.auth_send(A, to_bytes("x"), B, "modify");
  n.auth_send(A, to_bytes("x"), B, "insert");
  n.anon_send(A, to_bytes("y"), D, "replay");
  CHECK(conserved(n.stats()) == n.stats().submitted + n.stats().injected);

  auto d = drain(n);
  const auto& s = n.stats();
  CHECK(s.submitted == 5);
  CHECK(s.injected == 2 + 1 + 2);
  CHECK(s.dropped == 1);
  CHECK(s.rejected == 2);  // the modified envelope and the forged one
  CHECK(s.in_flight == 0);
  CHECK(s.delivered == d.size());
  CHECK(conserved(s) == s.submitted + s.injected);

  std::size_t replays = 0;
  for (const auto& x : d)
    if (x.label == "replay") ++replays;
  CHECK(replays == 6);
  CHECK(events_of(n.transcript(), "integrity_violation").size() == 2);
  CHECK(events_of(n.transcript(), "adversary").size() == 5);
}

TEST_CASE("state leaks only for corrupted users", "[network]") {
  Network n = make_net(5);
  n.set_corruption(CorruptionSet{{B}});
  n.leak_state(A, {{"secret", 1}});
  n.leak_state(B, {{"secret", 2}});
  const auto leaks = events_of(n.transcript(), "corrupt_state");
  REQUIRE(leaks.size() == 1);
  CHECK(leaks[0]->data["user"] == B.value);

  const nlohmann::json* seen = nullptr;
  Scripted adv([&](const Interception&, const AdversaryView& v) {
    if (v.corrupted.count(B)) seen = &v.corrupted.at(B);
    return std::vector<AdversaryAction>{};
  });
  n.set_adversary(&adv);
  n.auth_send(A, {}, B);
  REQUIRE(seen != nullptr);
  CHECK((*seen)["secret"] == 2);
}

TEST_CASE("observe returns each event once", "[network]") {
  Network n = make_net(6);
  n.auth_send(A, {}, B);
  CHECK(n.observe().size() == 1);
  CHECK(n.observe().empty());
  n.advance(1);
  CHECK(n.observe().size() == 1);
  CHECK_THROWS_AS(n.advance(0), std::invalid_argument);
}

TEST_CASE("transcript survives a JSONL round trip", "[network]") {
  Network n = make_net(7);
  n.auth_send(A, to_bytes("x"), B, "KeyReq");
  n.anon_send(C, to_bytes("y"), D, "KeySubmit");
  drain(n);
  const std::string text = to_jsonl(n.transcript());
  CHECK(from_jsonl(text) == n.transcript());
  CHECK(to_jsonl(from_jsonl(text)) == text);
}
