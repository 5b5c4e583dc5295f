#pragma once

// Round-synchronous message passing between the nodes of a simulated
// network, with a per-scalar tally of everything put on the wire.

#include "dcsp/linalg.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dcsp {

/// 1-based node id.
using NodeId = std::size_t;

/// Node count plus one neighborhood G_l per node, each containing l itself.
class Topology {
 public:
  /// Throws InvalidDegree when a neighborhood omits its own node or names a
  /// node outside [1, L].
  explicit Topology(std::vector<IndexSet> neighborhoods);

  static Topology full_mesh(std::size_t node_count);

  std::size_t node_count() const noexcept { return neighborhoods_.size(); }
  const IndexSet& neighborhood(NodeId l) const { return neighborhoods_.at(l - 1); }
  const std::vector<IndexSet>& neighborhoods() const noexcept { return neighborhoods_; }

  /// sum_l (|G_l| - 1)
  std::uint64_t degree_excess_sum() const noexcept;
  bool is_full_mesh() const noexcept;

 private:
  std::vector<IndexSet> neighborhoods_;
};

/// G_l = {l} U {mod(l + i, L) + 1 : i = 1..g-1}. Throws InvalidDegree unless
/// 2 <= g <= L.
Topology ring_topology(std::size_t node_count, std::size_t degree);

/// Parses "1:3,4; 2:4,5; ..." (node: neighbors). Each node is added to its
/// own neighborhood; nodes not listed get only themselves.
Topology topology_from_adjacency(std::size_t node_count, std::string_view listing);

/// Projection coefficients together with the support they live on.
struct SparseCoefficients {
  IndexSet support;
  Vector values;
};

using Payload = std::variant<Vector, IndexSet, double, SparseCoefficients>;

/// Number of real values the payload actually carries.
std::size_t payload_scalars(const Payload& payload);

struct Message {
  NodeId sender = 0;
  NodeId recipient = 0;
  std::shared_ptr<const Payload> payload;
  std::size_t declared_length = 0;
};

/// Messages received by one node in one round, ordered by sender.
using Inbox = std::vector<Message>;

enum class Channel {
  Neighbor,   ///< within G_l
  Broadcast,  ///< to every other node
  Uncharged,  ///< required by the protocol but outside the closed-form cost
};

struct RoundTally {
  std::string step;
  Channel channel = Channel::Neighbor;
  std::uint64_t scalars = 0;
};

class WireCounter {
 public:
  void add(std::string step, Channel channel, std::uint64_t scalars);

  std::uint64_t neighbor_scalars() const noexcept { return neighbor_; }
  std::uint64_t broadcast_scalars() const noexcept { return broadcast_; }
  std::uint64_t uncharged_scalars() const noexcept { return uncharged_; }
  /// Neighbor plus broadcast traffic; the quantity the cost formulas count.
  std::uint64_t charged() const noexcept { return neighbor_ + broadcast_; }
  const std::vector<RoundTally>& rounds() const noexcept { return rounds_; }

 private:
  std::uint64_t neighbor_ = 0;
  std::uint64_t broadcast_ = 0;
  std::uint64_t uncharged_ = 0;
  std::vector<RoundTally> rounds_;
};

/// Delivers one payload per node per round and charges the wire.
///
/// Every message is framed at a fixed declared length; a payload carrying
/// fewer values than the frame is zero-padded (only sparse coefficient
/// payloads are shorter in practice), one carrying more is rejected.
class Fabric {
 public:
  explicit Fabric(Topology topology) : topology_(std::move(topology)) {}

  /// Node l receives the payload of every j in G_l \ {l}.
  std::vector<Inbox> exchange_neighbors(std::string step, std::span<const Payload> payloads,
                                        std::size_t frame_length);

  /// Node l receives the payload of every j != l, charged pairwise.
  std::vector<Inbox> broadcast_all(std::string step, std::span<const Payload> payloads,
                                   std::size_t frame_length,
                                   Channel channel = Channel::Broadcast);

  const Topology& topology() const noexcept { return topology_; }
  const WireCounter& wire() const noexcept { return wire_; }

 private:
  std::vector<Inbox> deliver(std::string step, std::span<const Payload> payloads,
                             std::size_t frame_length, Channel channel, bool neighbors_only);

  Topology topology_;
  WireCounter wire_;
};

}  // namespace dcsp
