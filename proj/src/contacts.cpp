#include "polyarena/contacts.hpp"

namespace polyarena {

namespace {

struct Hull {
  std::vector<Vec2> verts;
  Bounds box;
};

std::vector<Hull> hulls(const std::vector<Sprite>& sprites) {
  std::vector<Hull> out(sprites.size());
  for (std::size_t i = 0; i < sprites.size(); ++i) {
    sprite_world_vertices_into(sprites[i], out[i].verts);
    out[i].box = bounds_of(out[i].verts);
  }
  return out;
}

template <class Visit>
void for_each_contact(const State& state, std::string_view layer_a, std::string_view layer_b, Visit&& visit) {
  const auto& sa = state.layer(layer_a).sprites;
  const auto& sb = state.layer(layer_b).sprites;
  const bool same = layer_a == layer_b;
  const auto ha = hulls(sa);
  const auto hb = same ? std::vector<Hull>{} : hulls(sb);
  const auto& other = same ? ha : hb;
  for (std::size_t i = 0; i < ha.size(); ++i) {
    for (std::size_t j = same ? i + 1 : 0; j < other.size(); ++j) {
      if (!ha[i].box.overlaps(other[j].box)) continue;
      if (!detect_contact(ha[i].verts, other[j].verts)) continue;
      if (!visit(LayerContact{i, j})) return;
    }
  }
}

}  // namespace

std::vector<LayerContact> layer_contacts(const State& state, std::string_view layer_a, std::string_view layer_b) {
  std::vector<LayerContact> out;
  for_each_contact(state, layer_a, layer_b, [&](LayerContact c) {
    out.push_back(c);
    return true;
  });
  return out;
}

bool any_layer_contact(const State& state, std::string_view layer_a, std::string_view layer_b) {
  bool hit = false;
  for_each_contact(state, layer_a, layer_b, [&](LayerContact) {
    hit = true;
    return false;
  });
  return hit;
}

}  // namespace polyarena
