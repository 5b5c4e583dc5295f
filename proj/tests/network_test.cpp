#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcsp/errors.hpp"
#include "dcsp/network.hpp"

#include <numeric>
#include <random>

using namespace dcsp;

namespace {

std::vector<Payload> dense_payloads(std::size_t nodes, Eigen::Index length) {
  std::vector<Payload> out;
  for (std::size_t l = 0; l < nodes; ++l) out.emplace_back(Vector::Constant(length, double(l + 1)));
  return out;
}

std::uint64_t received(const std::vector<Inbox>& inboxes) {
  std::uint64_t total = 0;
  for (const auto& inbox : inboxes)
    for (const auto& m : inbox) total += m.declared_length;
  return total;
}

}  // namespace

TEST_CASE("ring topology follows the index formula") {
  const auto t = ring_topology(6, 3);
  CHECK(t.neighborhood(1) == IndexSet{1, 3, 4});
  CHECK(t.neighborhood(5) == IndexSet{1, 2, 5});
  CHECK(t.neighborhood(6) == IndexSet{2, 3, 6});
  for (std::size_t l = 1; l <= 6; ++l) CHECK(t.neighborhood(l).size() == 3);
  CHECK(t.degree_excess_sum() == 12);
  CHECK_FALSE(t.is_full_mesh());
}

TEST_CASE("ring degree excess is L(g - 1)") {
  for (std::size_t l = 2; l <= 25; ++l) {
    for (std::size_t g = 2; g <= l; ++g) {
      const auto t = ring_topology(l, g);
      CHECK(t.degree_excess_sum() == l * (g - 1));
      for (std::size_t i = 1; i <= l; ++i) {
        CHECK(t.neighborhood(i).contains(i));
        CHECK(t.neighborhood(i).size() == g);
      }
    }
  }
}

TEST_CASE("full collaboration") {
  const auto t = ring_topology(5, 5);
  CHECK(t.is_full_mesh());
  for (std::size_t l = 1; l <= 5; ++l) CHECK(t.neighborhood(l) == IndexSet::range(1, 5));
  const auto two = ring_topology(2, 2);
  CHECK(two.neighborhood(1) == IndexSet{1, 2});
  CHECK(two.neighborhood(2) == IndexSet{1, 2});
}

TEST_CASE("invalid degrees") {
  CHECK_THROWS_AS(ring_topology(6, 1), InvalidDegree);
  CHECK_THROWS_AS(ring_topology(6, 7), InvalidDegree);
  CHECK_THROWS_AS(Topology({IndexSet{2}, IndexSet{2}}), InvalidDegree);
  CHECK_THROWS_AS(Topology({IndexSet{1, 3}, IndexSet{2}}), InvalidDegree);
}

TEST_CASE("adjacency listing") {
  const auto t = topology_from_adjacency(4, "1: 2,3 ; 2:4; 4:1");
  CHECK(t.neighborhood(1) == IndexSet{1, 2, 3});
  CHECK(t.neighborhood(2) == IndexSet{2, 4});
  CHECK(t.neighborhood(3) == IndexSet{3});
  CHECK(t.neighborhood(4) == IndexSet{1, 4});
  CHECK_THROWS_AS(topology_from_adjacency(3, "1:4"), ConfigError);
  CHECK_THROWS_AS(topology_from_adjacency(3, "1 2"), ConfigError);
  CHECK_THROWS_AS(topology_from_adjacency(3, "1:x"), ConfigError);
  CHECK_THROWS_AS(topology_from_adjacency(3, "1:2,2"), ConfigError);
}

TEST_CASE("neighbor exchange charges sum (|G_l| - 1) * frame") {
  SUBCASE("full mesh of 3") {
    Fabric f(Topology::full_mesh(3));
    const auto in = f.exchange_neighbors("x", dense_payloads(3, 5), 5);
    CHECK(f.wire().neighbor_scalars() == 30);
    CHECK(received(in) == 30);
  }
  SUBCASE("ring 6, g = 3, length 200") {
    Fabric f(ring_topology(6, 3));
    const auto in = f.exchange_neighbors("c", dense_payloads(6, 200), 200);
    CHECK(f.wire().neighbor_scalars() == 2400);
    CHECK(received(in) == 2400);
    // Node 1 hears from exactly the other members of G_1, in order.
    REQUIRE(in[0].size() == 2);
    CHECK(in[0][0].sender == 3);
    CHECK(in[0][1].sender == 4);
    CHECK(std::get<Vector>(*in[0][0].payload)(0) == 3.0);
  }
}

TEST_CASE("broadcast charges (L - 1) L * frame") {
  Fabric f(ring_topology(6, 3));
  std::vector<Payload> sets(6, Payload{IndexSet::range(1, 10)});
  auto in = f.broadcast_all("gamma", sets, 10);
  CHECK(f.wire().broadcast_scalars() == 300);
  CHECK(received(in) == 300);

  std::vector<Payload> scalars(6, Payload{1.5});
  in = f.broadcast_all("rnorm", scalars, 1);
  CHECK(f.wire().broadcast_scalars() == 330);
  CHECK(received(in) == 30);

  Fabric pair(Topology::full_mesh(2));
  std::vector<Payload> two(2, Payload{0.0});
  pair.broadcast_all("rnorm", two, 1);
  CHECK(pair.wire().charged() == 2);
}

TEST_CASE("framing pads short payloads and rejects long ones") {
  Fabric f(Topology::full_mesh(2));
  std::vector<Payload> coeffs(2, Payload{SparseCoefficients{IndexSet{1, 4, 7}, Vector::Ones(3)}});
  f.exchange_neighbors("xbar", coeffs, 4);
  CHECK(f.wire().neighbor_scalars() == 8);
  CHECK_THROWS_AS(f.exchange_neighbors("xbar", coeffs, 2), std::invalid_argument);
  CHECK_THROWS_AS(f.exchange_neighbors("bad", std::vector<Payload>(1, Payload{1.0}), 1),
                  std::invalid_argument);
}

TEST_CASE("uncharged channel and round breakdown") {
  Fabric f(Topology::full_mesh(4));
  f.broadcast_all("init", std::vector<Payload>(4, Payload{2.0}), 1, Channel::Uncharged);
  f.exchange_neighbors("c", dense_payloads(4, 3), 3);
  CHECK(f.wire().uncharged_scalars() == 12);
  CHECK(f.wire().charged() == 36);
  REQUIRE(f.wire().rounds().size() == 2);
  CHECK(f.wire().rounds()[0].step == "init");
  CHECK(f.wire().rounds()[1].scalars == 36);
}

TEST_CASE("conservation across random schedules") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t l = 2 + rng() % 10;
    const std::size_t g = 2 + rng() % (l - 1);
    Fabric f(ring_topology(l, g));
    std::uint64_t before = 0;
    for (int round = 0; round < 5; ++round) {
      const std::size_t len = 1 + rng() % 20;
      const auto in = (rng() & 1) ? f.exchange_neighbors("n", dense_payloads(l, Eigen::Index(len)), len)
                                  : f.broadcast_all("b", dense_payloads(l, Eigen::Index(len)), len);
      const auto after = f.wire().charged();
      CHECK(after - before == received(in));
      CHECK(after >= before);
      before = after;
    }
  }
}
