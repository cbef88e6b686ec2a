#pragma once

#include <string_view>
#include <vector>

#include "polyarena/sprite.hpp"

namespace polyarena {

/// A contacting sprite pair, as indices into the two layers.
struct LayerContact {
  std::size_t a = 0;
  std::size_t b = 0;
};

/// Every contacting (A, B) pair between two layers in layer order. The same
/// layer on both sides yields each unordered pair once, with a < b.
/// Throws UnknownLayer.
std::vector<LayerContact> layer_contacts(const State& state, std::string_view layer_a, std::string_view layer_b);

bool any_layer_contact(const State& state, std::string_view layer_a, std::string_view layer_b);

}  // namespace polyarena
