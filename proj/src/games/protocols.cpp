#include <algorithm>
#include <stdexcept>

#include "panini/games/anycast.hpp"

namespace panini::games {

namespace {

enum class Flaw { None, PublishMessage, FirstMembers, PublishReceivers };

class Panini : public AnycastProtocol {
 public:
  Panini(std::string name, Flaw flaw, net::NetworkConfig network)
      : name_(std::move(name)), flaw_(flaw), network_(network) {}

  std::string name() const override { return name_; }

  Execution execute(const AnycastRequest& req, const net::CorruptionSet& corrupted, std::uint64_t seed) override {
    protocol::RunOptions opts;
    opts.network = network_;
    opts.corrupted = corrupted;
    opts.seed = seed;
    if (flaw_ == Flaw::FirstMembers) {
      const std::vector<UserId> order = req.possible;
      opts.selector = [order](std::span<const cipher::SymmetricKey> keys, const protocol::KeyOwnerOracle& owner,
                              Rng&) {
        std::size_t best = 0;
        std::size_t best_rank = order.size();
        for (std::size_t i = 0; i < keys.size(); ++i) {
          const auto u = owner(keys[i]);
          if (!u) continue;
          const auto rank = static_cast<std::size_t>(std::find(order.begin(), order.end(), *u) - order.begin());
          if (rank < best_rank) {
            best_rank = rank;
            best = i;
          }
        }
        return best;
      };
    }

    protocol::RunOutput run = protocol::run_anycast(req, opts);
    Execution ex{run.result.selected, std::move(run.transcript), run.result.outcome};
    const net::Tick end = ex.transcript.empty() ? 0 : ex.transcript.back().tick;
    if (flaw_ == Flaw::PublishMessage && ex.outcome == protocol::Outcome::Delivered) {
      ex.transcript.push_back({end, "published_message", {{"message", to_hex(req.message)}}});
    }
    if (flaw_ == Flaw::PublishReceivers && ex.outcome == protocol::Outcome::Delivered) {
      auto users = nlohmann::json::array();
      for (UserId u : ex.actual) users.push_back(u.value);
      ex.transcript.push_back({end, "published_receivers", {{"users", users}}});
    }
    return ex;
  }

 private:
  std::string name_;
  Flaw flaw_;
  net::NetworkConfig network_;
};

}  // namespace

std::unique_ptr<AnycastProtocol> make_panini(net::NetworkConfig network) {
  return std::make_unique<Panini>("panini", Flaw::None, network);
}

std::unique_ptr<AnycastProtocol> make_protocol(std::string_view name) {
  if (name == "panini") return make_panini();
  if (name == "ideal") return make_ideal();
  if (name == "p1") return std::make_unique<Panini>("p1", Flaw::PublishMessage, net::NetworkConfig{});
  if (name == "p2") return std::make_unique<Panini>("p2", Flaw::FirstMembers, net::NetworkConfig{});
  if (name == "p5") return std::make_unique<Panini>("p5", Flaw::PublishReceivers, net::NetworkConfig{});
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

std::vector<std::string> protocol_names() { return {"panini", "ideal", "p1", "p2", "p5"}; }

}  // namespace panini::games
