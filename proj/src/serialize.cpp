#include "h22/serialize.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>

namespace h22 {
namespace {

using nlohmann::json;

json box_json(const BoxSpec& s) {
  return json{{"family", "box"},   {"dim", s.dim},     {"levels", s.levels},
              {"wbar", s.wbar},    {"alpha", s.alpha}, {"tail_rel", s.tail_rel}};
}

json hierarchical_json(const HierarchicalSpec& s) {
  return json{{"family", "hierarchical"},
              {"levels", s.levels},
              {"level_weights", s.level_weights},
              {"pinning", s.pinning}};
}

json chain_json(const ChainSpec& s) {
  json node{{"family", "chain"},
            {"length", s.length},
            {"wbar", s.wbar},
            {"alpha", s.alpha},
            {"pinning_mode", s.mode == ChainPinning::kExplicit ? "explicit" : "last_vertex"}};
  if (s.mode == ChainPinning::kExplicit) node["pinning"] = s.pinning;
  if (!s.extra_edges.empty()) {
    json edges = json::array();
    for (const auto& [a, b, w] : s.extra_edges) edges.push_back(json::array({a, b, w}));
    node["extra_edges"] = edges;
  }
  return node;
}

json effective_chain_json(const EffectiveChainSpec& s) {
  return json{{"family", "effective_chain"},
              {"length", s.length},
              {"level_weights", s.level_weights},
              {"pinning_base", s.pinning_base}};
}

json custom_json(const CustomSpec& s) {
  json node{{"family", "custom"}, {"weights", s.weights}, {"pinning", s.pinning}};
  if (!s.labels.empty()) node["labels"] = s.labels;
  return node;
}

HierarchicalSpec parse_hierarchical(const json& node) {
  HierarchicalSpec s;
  s.levels = node.at("levels").get<int>();
  if (node.contains("level_weights")) {
    s.level_weights = node.at("level_weights").get<std::vector<double>>();
    s.pinning = node.at("pinning").get<double>();
  } else {
    const double wbar = node.at("wbar").get<double>();
    const double alpha = node.at("alpha").get<double>();
    s.level_weights = hierarchical_level_weights(s.levels, wbar, alpha);
    s.pinning = hierarchical_pinning_weight(s.levels, wbar, alpha);
  }
  return s;
}

ChainSpec parse_chain(const json& node) {
  ChainSpec s;
  s.length = node.at("length").get<int>();
  s.wbar = node.at("wbar").get<double>();
  s.alpha = node.at("alpha").get<double>();
  const std::string mode = node.at("pinning_mode").get<std::string>();
  if (mode == "explicit") {
    s.mode = ChainPinning::kExplicit;
    s.pinning = node.at("pinning").get<std::vector<double>>();
  } else if (mode == "last_vertex") {
    s.mode = ChainPinning::kLastVertexPinned;
  } else {
    throw std::invalid_argument("unknown pinning_mode: " + mode);
  }
  if (node.contains("extra_edges")) {
    for (const auto& e : node.at("extra_edges")) {
      if (!e.is_array() || e.size() != 3) throw std::invalid_argument("extra edge must be [i,j,w]");
      s.extra_edges.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
    }
  }
  return s;
}

EffectiveChainSpec parse_effective_chain(const json& node) {
  EffectiveChainSpec s;
  s.length = node.at("length").get<int>();
  if (node.contains("level_weights")) {
    s.level_weights = node.at("level_weights").get<std::vector<double>>();
    s.pinning_base = node.at("pinning_base").get<double>();
  } else {
    const double wbar = node.at("wbar").get<double>();
    const double alpha = node.at("alpha").get<double>();
    s.level_weights = hierarchical_level_weights(s.length, wbar, alpha);
    s.pinning_base = hierarchical_pinning_weight(s.length, wbar, alpha);
  }
  return s;
}

CustomSpec parse_custom(const json& node) {
  CustomSpec s;
  s.weights = node.at("weights").get<std::vector<std::vector<double>>>();
  s.pinning = node.at("pinning").get<std::vector<double>>();
  if (node.contains("labels")) s.labels = node.at("labels").get<std::vector<std::string>>();
  return s;
}

}  // namespace

std::string family_name(const GraphSpec& spec) {
  struct Visitor {
    std::string operator()(const BoxSpec&) const { return "box"; }
    std::string operator()(const HierarchicalSpec&) const { return "hierarchical"; }
    std::string operator()(const ChainSpec&) const { return "chain"; }
    std::string operator()(const EffectiveChainSpec&) const { return "effective_chain"; }
    std::string operator()(const CustomSpec&) const { return "custom"; }
  };
  return std::visit(Visitor{}, spec);
}

nlohmann::json graph_spec_to_json(const GraphSpec& spec) {
  struct Visitor {
    json operator()(const BoxSpec& s) const { return box_json(s); }
    json operator()(const HierarchicalSpec& s) const { return hierarchical_json(s); }
    json operator()(const ChainSpec& s) const { return chain_json(s); }
    json operator()(const EffectiveChainSpec& s) const { return effective_chain_json(s); }
    json operator()(const CustomSpec& s) const { return custom_json(s); }
  };
  return std::visit(Visitor{}, spec);
}

GraphSpec graph_spec_from_json(const nlohmann::json& node) {
  const std::string family = node.at("family").get<std::string>();
  if (family == "box") {
    BoxSpec s;
    s.dim = node.at("dim").get<int>();
    s.levels = node.at("levels").get<int>();
    s.wbar = node.at("wbar").get<double>();
    s.alpha = node.at("alpha").get<double>();
    if (node.contains("tail_rel")) s.tail_rel = node.at("tail_rel").get<double>();
    return s;
  }
  if (family == "hierarchical") return parse_hierarchical(node);
  if (family == "chain") return parse_chain(node);
  if (family == "effective_chain") return parse_effective_chain(node);
  if (family == "custom") return parse_custom(node);
  throw std::invalid_argument("unknown graph family: " + family);
}

PinnedGraph build_graph(const GraphSpec& spec) {
  struct Visitor {
    PinnedGraph operator()(const BoxSpec& s) const {
      WeightProfile profile(s.dim, s.alpha, s.wbar);
      return build_long_range_box(s.dim, s.levels, profile, s.tail_rel);
    }
    PinnedGraph operator()(const HierarchicalSpec& s) const {
      return build_hierarchical(s.levels, s.level_weights, s.pinning);
    }
    PinnedGraph operator()(const ChainSpec& s) const {
      Eigen::VectorXd pin(static_cast<Eigen::Index>(s.pinning.size()));
      for (Eigen::Index i = 0; i < pin.size(); ++i) pin[i] = s.pinning[static_cast<size_t>(i)];
      return build_chain(s.length, s.wbar, s.alpha, s.mode, pin, s.extra_edges);
    }
    PinnedGraph operator()(const EffectiveChainSpec& s) const {
      return build_effective_chain(s.length, s.level_weights, s.pinning_base);
    }
    PinnedGraph operator()(const CustomSpec& s) const {
      const int n = static_cast<int>(s.pinning.size());
      Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(s.weights.size()) != n || static_cast<int>(s.weights[size_t(i)].size()) != n)
          throw std::invalid_argument("custom weights must be an n x n matrix");
        for (int j = 0; j < n; ++j) weights(i, j) = s.weights[size_t(i)][size_t(j)];
      }
      Eigen::VectorXd pinning(n);
      for (int i = 0; i < n; ++i) pinning[i] = s.pinning[static_cast<size_t>(i)];
      return PinnedGraph(std::move(weights), std::move(pinning), s.labels);
    }
  };
  return std::visit(Visitor{}, spec);
}

namespace {

// FIPS 180-4 SHA-256, block-at-a-time; plenty for fingerprinting configs.
constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

void sha256_block(std::array<std::uint32_t, 8>& h, const unsigned char* p) {
  std::uint32_t w[64];
  for (int i = 0; i < 16; ++i) {
    w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
           (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
  }
  for (int i = 16; i < 64; ++i) {
    const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
    const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
    w[i] = w[i - 16] + s0 + w[i - 7] + s1;
  }
  auto [a, b, c, d, e, f, g, hh] = h;
  for (int i = 0; i < 64; ++i) {
    const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
    const std::uint32_t ch = (e & f) ^ (~e & g);
    const std::uint32_t t1 = hh + s1 + ch + kSha256K[static_cast<size_t>(i)] + w[i];
    const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
    const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
    const std::uint32_t t2 = s0 + maj;
    hh = g; g = f; f = e; e = d + t1;
    d = c; c = b; b = a; a = t1 + t2;
  }
  h[0] += a; h[1] += b; h[2] += c; h[3] += d;
  h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
  std::string padded = data;
  const std::uint64_t bit_len = std::uint64_t(data.size()) * 8;
  padded.push_back('\x80');
  while (padded.size() % 64 != 56) padded.push_back('\0');
  for (int i = 7; i >= 0; --i) padded.push_back(char((bit_len >> (8 * i)) & 0xff));
  for (std::size_t off = 0; off < padded.size(); off += 64) {
    sha256_block(h, reinterpret_cast<const unsigned char*>(padded.data()) + off);
  }
  static const char* digits = "0123456789abcdef";
  std::string hex;
  hex.reserve(64);
  for (std::uint32_t word : h) {
    for (int i = 7; i >= 0; --i) hex.push_back(digits[(word >> (4 * i)) & 0xf]);
  }
  return hex;
}

}  // namespace h22
