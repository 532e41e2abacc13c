#include <algorithm>
#include <stdexcept>

#include "panini/games/anycast.hpp"

namespace panini::games {

std::set<UserId> ideal_anycast(const AnycastRequest& req, Rng& rng) {
  if (req.n == 0 || req.n > req.possible.size()) throw std::invalid_argument("n must satisfy 1 <= n <= |U_p|");
  std::vector<UserId> pool = req.possible;
  std::set<UserId> out;
  for (std::size_t i = 0; i < req.n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform(pool.size() - i));
    std::swap(pool[i], pool[j]);
    out.insert(pool[i]);
  }
  return out;
}

namespace {

class Ideal : public AnycastProtocol {
 public:
  std::string name() const override { return "ideal"; }
  Execution execute(const AnycastRequest& req, const net::CorruptionSet&, std::uint64_t seed) override {
    req.validate();
    Rng rng(seed);
    return Execution{ideal_anycast(req, rng), {}, protocol::Outcome::Delivered};
  }
};

}  // namespace

std::unique_ptr<AnycastProtocol> make_ideal() { return std::make_unique<Ideal>(); }

}  // namespace panini::games
