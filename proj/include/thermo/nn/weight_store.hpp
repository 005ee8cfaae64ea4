#pragma once

#include <map>
#include <string>
#include <vector>

#include "thermo/core/tensor.hpp"

namespace thermo {

template <typename T>
using TensorMap = std::map<std::string, Tensor<T>>;

// Records whose name ends with this suffix hold network configuration,
// not trainable parameters.
inline constexpr std::string_view kConfigSuffix = ".cfg";

bool is_config_record(const std::string& name);

/// Named float tensors making up one or more networks.
class WeightStore {
 public:
  WeightStore() = default;
  explicit WeightStore(TensorMap<float> tensors) : tensors_(std::move(tensors)) {}

  void set(const std::string& name, Tensor<float> value);
  bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
  // Throws LoadError when missing.
  const Tensor<float>& get(const std::string& name) const;
  // Throws LoadError when missing or shaped differently.
  const Tensor<float>& expect(const std::string& name, const Shape& shape) const;

  const TensorMap<float>& tensors() const { return tensors_; }
  TensorMap<float>& tensors() { return tensors_; }
  std::size_t size() const { return tensors_.size(); }

  // Records whose names start with prefix.
  WeightStore with_prefix(const std::string& prefix) const;
  void merge(const WeightStore& other);
  // Trainable parameter names (config records excluded).
  std::vector<std::string> parameter_names() const;

  friend bool operator==(const WeightStore&, const WeightStore&) = default;

 private:
  TensorMap<float> tensors_;
};

template <typename T>
TensorMap<T> cast_map(const TensorMap<float>& in) {
  TensorMap<T> out;
  for (const auto& [k, v] : in) out.emplace(k, v.template cast<T>());
  return out;
}

}  // namespace thermo
