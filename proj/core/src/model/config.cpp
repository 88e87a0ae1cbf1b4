#include "aml/model/config.hpp"

#include <string>

#include "aml/core/error.hpp"

namespace aml::model {

void ModelConfig::validate() const {
  if (layers < 1) throw ConfigError("layers must be >= 1");
  if (hidden < 1) throw ConfigError("hidden dimension must be >= 1");
  if (input_dim < 0) throw ConfigError("input dimension must be >= 1, or 0 to take it from the features");
  if (!fanout.empty() && fanout.size() != 1 && fanout.size() != static_cast<std::size_t>(layers)) {
    throw ConfigError("fanout needs 1 or " + std::to_string(layers) + " entries, got " +
                      std::to_string(fanout.size()));
  }
}

int ModelConfig::fanout_at(int layer) const {
  if (fanout.empty()) return 0;
  const int f = fanout.size() == 1 ? fanout[0] : fanout[static_cast<std::size_t>(layer - 1)];
  return f > 0 ? f : 0;
}

ForwardPlan variant_wire(const ModelConfig& config) {
  config.validate();
  ForwardPlan plan;
  plan.effective = config.toggles;
  switch (config.variant) {
    case Variant::Aml:
      plan.head = Path::Gnn;
      plan.tail = Path::Mlp;
      break;
    case Variant::AmlR:
      plan.head = Path::Mlp;
      plan.tail = Path::Gnn;
      plan.transposed_graph = true;
      break;
    case Variant::Smlp:
      plan.head = Path::Mlp;
      plan.tail = Path::Mlp;
      // No message-passing weights to transfer from and no GNN side to
      // receive a homophily term.
      plan.effective.knowledge_transfer = true;
      plan.effective.homophily = false;
      break;
    case Variant::SymmetricGnn:
      plan.head = Path::Gnn;
      plan.tail = Path::Gnn;
      plan.effective = Toggles{true, false, false, false};
      break;
  }
  if (!plan.effective.pre_encode) plan.effective.residual_delta = false;
  plan.homophily = plan.effective.homophily;
  plan.needs_pre_encoding =
      (plan.head == Path::Mlp || plan.tail == Path::Mlp) && plan.effective.pre_encode;
  return plan;
}

Variant parse_variant(std::string_view name) {
  if (name == "aml") return Variant::Aml;
  if (name == "aml_r") return Variant::AmlR;
  if (name == "smlp") return Variant::Smlp;
  if (name == "sym_gnn") return Variant::SymmetricGnn;
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected aml|aml_r|smlp|sym_gnn)");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Aml: return "aml";
    case Variant::AmlR: return "aml_r";
    case Variant::Smlp: return "smlp";
    case Variant::SymmetricGnn: return "sym_gnn";
  }
  return "?";
}

std::string_view display_name(Variant v) {
  switch (v) {
    case Variant::Aml: return "AML";
    case Variant::AmlR: return "AML-R";
    case Variant::Smlp: return "SMLP";
    case Variant::SymmetricGnn: return "SAGE";
  }
  return "?";
}

}  // namespace aml::model
