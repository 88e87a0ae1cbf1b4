#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "aml/graph/csr_graph.hpp"
#include "aml/nn/tape.hpp"

namespace aml::model {

// Aml: message passing for heads, pre-encoded MLP for tails.
// AmlR: the mirror image, MLP for heads and message passing for tails.
// Smlp: pre-encoded MLP on both sides.
// SymmetricGnn: message passing on both sides with shared weights.
enum class Variant { Aml, AmlR, Smlp, SymmetricGnn };
enum class PredictorKind { Mlp, Sum };

struct Toggles {
  bool knowledge_transfer = true;  // MLP path reuses the message-passing weights
  bool residual_delta = true;      // add the MLP over X - A^L X
  bool pre_encode = true;          // MLP input is A^L X instead of X
  bool homophily = true;           // add the MLP representation into the GNN side

  friend bool operator==(const Toggles&, const Toggles&) = default;
};

struct ModelConfig {
  int layers = 2;
  int hidden = 32;
  int input_dim = 0;  // feature width u (0: taken from the features); layer 1 is u x r
  Variant variant = Variant::Aml;
  Toggles toggles;
  nn::Activation activation = nn::Activation::Relu;
  PredictorKind predictor = PredictorKind::Mlp;
  bool batch_norm = false;  // per-branch norm after the affine map of layers 1..L-1
  graph::NormMode norm = graph::NormMode::Row;
  bool self_loops = false;
  // Neighbours sampled per node at each layer (index 0 is layer 1). Empty, or
  // an entry <= 0, means the full neighbourhood. A single entry applies to
  // every layer.
  std::vector<int> fanout;

  // Throws ConfigError.
  void validate() const;
  int fanout_at(int layer) const;
};

enum class Path { Gnn, Mlp };

struct ForwardPlan {
  Path head = Path::Gnn;
  Path tail = Path::Mlp;
  // Side that receives the homophily term (the message-passing side).
  bool homophily = false;
  bool needs_pre_encoding = false;
  // Message passing aggregates over in-links (used when tails run the GNN).
  bool transposed_graph = false;
  Toggles effective;

  int gnn_stages() const { return (head == Path::Gnn) + (tail == Path::Gnn); }
};

// Resolves which path serves each side and which toggles are in force.
ForwardPlan variant_wire(const ModelConfig& config);

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);
std::string_view display_name(Variant v);

}  // namespace aml::model
