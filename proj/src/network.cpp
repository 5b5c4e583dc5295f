#include "dcsp/network.hpp"

#include "dcsp/errors.hpp"

#include <charconv>
#include <stdexcept>

namespace dcsp {

Topology::Topology(std::vector<IndexSet> neighborhoods) : neighborhoods_(std::move(neighborhoods)) {
  const auto count = neighborhoods_.size();
  for (std::size_t l = 1; l <= count; ++l) {
    const auto& g = neighborhoods_[l - 1];
    if (!g.contains(l)) {
      throw InvalidDegree("topology: node " + std::to_string(l) + " missing from its own neighborhood");
    }
    if (g.back() > count) {
      throw InvalidDegree("topology: node " + std::to_string(l) + " names neighbor " +
                          std::to_string(g.back()) + " outside 1.." + std::to_string(count));
    }
  }
}

Topology Topology::full_mesh(std::size_t node_count) {
  return Topology(std::vector<IndexSet>(node_count, IndexSet::range(1, node_count)));
}

std::uint64_t Topology::degree_excess_sum() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& g : neighborhoods_) sum += g.size() - 1;
  return sum;
}

bool Topology::is_full_mesh() const noexcept {
  for (const auto& g : neighborhoods_) {
    if (g.size() != neighborhoods_.size()) return false;
  }
  return true;
}

Topology ring_topology(std::size_t node_count, std::size_t degree) {
  if (degree < 2 || degree > node_count) {
    throw InvalidDegree("ring_topology: need 2 <= g <= L, got g=" + std::to_string(degree) +
                        " L=" + std::to_string(node_count));
  }
  // The index formula reaches offsets +2..+g, so at g = L it wraps onto l
  // itself and skips l + 1. Full collaboration is the full mesh.
  if (degree == node_count) return Topology::full_mesh(node_count);
  std::vector<IndexSet> hoods;
  hoods.reserve(node_count);
  for (std::size_t l = 1; l <= node_count; ++l) {
    std::vector<std::size_t> g{l};
    for (std::size_t i = 1; i < degree; ++i) g.push_back((l + i) % node_count + 1);
    hoods.emplace_back(std::move(g));
  }
  return Topology(std::move(hoods));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t parse_id(std::string_view token, std::string_view listing) {
  token = trim(token);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
    throw ConfigError("adjacency: bad node id '" + std::string(token) + "' in '" +
                      std::string(listing) + "'");
  }
  return value;
}

}  // namespace

Topology topology_from_adjacency(std::size_t node_count, std::string_view listing) {
  std::vector<std::vector<std::size_t>> hoods(node_count);
  for (std::size_t l = 1; l <= node_count; ++l) hoods[l - 1].push_back(l);

  std::string_view rest = listing;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    const auto entry = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("adjacency: expected 'node: neighbors' in '" + std::string(entry) + "'");
    }
    const auto node = parse_id(entry.substr(0, colon), listing);
    if (node > node_count) throw ConfigError("adjacency: node id beyond L");
    auto& g = hoods[node - 1];
    std::string_view ids = entry.substr(colon + 1);
    while (!trim(ids).empty()) {
      const auto comma = ids.find(',');
      const auto id = parse_id(ids.substr(0, comma), listing);
      if (id != node) g.push_back(id);
      ids = comma == std::string_view::npos ? std::string_view{} : ids.substr(comma + 1);
    }
  }
  std::vector<IndexSet> sets;
  sets.reserve(node_count);
  for (auto& g : hoods) {
    try {
      sets.emplace_back(std::move(g));
    } catch (const std::invalid_argument&) {
      throw ConfigError("adjacency: repeated neighbor in '" + std::string(listing) + "'");
    }
  }
  try {
    return Topology(std::move(sets));
  } catch (const InvalidDegree& e) {
    throw ConfigError(e.what());
  }
}

std::size_t payload_scalars(const Payload& payload) {
  struct {
    std::size_t operator()(const Vector& v) const { return static_cast<std::size_t>(v.size()); }
    std::size_t operator()(const IndexSet& s) const { return s.size(); }
    std::size_t operator()(double) const { return 1; }
    std::size_t operator()(const SparseCoefficients& c) const {
      return static_cast<std::size_t>(c.values.size());
    }
  } visitor;
  return std::visit(visitor, payload);
}

void WireCounter::add(std::string step, Channel channel, std::uint64_t scalars) {
  switch (channel) {
    case Channel::Neighbor: neighbor_ += scalars; break;
    case Channel::Broadcast: broadcast_ += scalars; break;
    case Channel::Uncharged: uncharged_ += scalars; break;
  }
  rounds_.push_back({std::move(step), channel, scalars});
}

std::vector<Inbox> Fabric::exchange_neighbors(std::string step, std::span<const Payload> payloads,
                                              std::size_t frame_length) {
  return deliver(std::move(step), payloads, frame_length, Channel::Neighbor, true);
}

std::vector<Inbox> Fabric::broadcast_all(std::string step, std::span<const Payload> payloads,
                                         std::size_t frame_length, Channel channel) {
  return deliver(std::move(step), payloads, frame_length, channel, false);
}

std::vector<Inbox> Fabric::deliver(std::string step, std::span<const Payload> payloads,
                                   std::size_t frame_length, Channel channel,
                                   bool neighbors_only) {
  const auto count = topology_.node_count();
  if (payloads.size() != count) {
    throw std::invalid_argument("fabric: expected one payload per node in step " + step);
  }
  std::vector<std::shared_ptr<const Payload>> shared;
  shared.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (payload_scalars(payloads[j]) > frame_length) {
      throw std::invalid_argument("fabric: payload of node " + std::to_string(j + 1) +
                                  " exceeds its frame in step " + step);
    }
    shared.push_back(std::make_shared<const Payload>(payloads[j]));
  }

  std::vector<Inbox> inboxes(count);
  std::uint64_t scalars = 0;
  for (NodeId l = 1; l <= count; ++l) {
    auto& inbox = inboxes[l - 1];
    auto receive = [&](NodeId j) {
      if (j == l) return;
      inbox.push_back(Message{j, l, shared[j - 1], frame_length});
      scalars += frame_length;
    };
    if (neighbors_only) {
      for (auto j : topology_.neighborhood(l)) receive(j);
    } else {
      for (NodeId j = 1; j <= count; ++j) receive(j);
    }
  }
  wire_.add(std::move(step), channel, scalars);
  return inboxes;
}

}  // namespace dcsp
