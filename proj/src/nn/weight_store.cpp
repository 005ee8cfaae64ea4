#include "thermo/nn/weight_store.hpp"

#include "thermo/core/error.hpp"

namespace thermo {

bool is_config_record(const std::string& name) {
  return name.size() >= kConfigSuffix.size() &&
         name.compare(name.size() - kConfigSuffix.size(), kConfigSuffix.size(), kConfigSuffix) == 0;
}

void WeightStore::set(const std::string& name, Tensor<float> value) {
  require(!name.empty(), "weight store: empty record name");
  tensors_[name] = std::move(value);
}

const Tensor<float>& WeightStore::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw LoadError("weights: missing record '" + name + "'");
  return it->second;
}

const Tensor<float>& WeightStore::expect(const std::string& name, const Shape& shape) const {
  const Tensor<float>& t = get(name);
  if (t.shape() != shape) {
    throw LoadError("weights: record '" + name + "' has shape " + shape_string(t.shape()) + ", expected " +
                    shape_string(shape));
  }
  return t;
}

WeightStore WeightStore::with_prefix(const std::string& prefix) const {
  WeightStore out;
  for (const auto& [k, v] : tensors_)
    if (k.rfind(prefix, 0) == 0) out.tensors_.emplace(k, v);
  return out;
}

void WeightStore::merge(const WeightStore& other) {
  for (const auto& [k, v] : other.tensors_) tensors_[k] = v;
}

std::vector<std::string> WeightStore::parameter_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : tensors_)
    if (!is_config_record(k)) out.push_back(k);
  return out;
}

}  // namespace thermo
