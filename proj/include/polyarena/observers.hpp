#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polyarena/sprite.hpp"

namespace polyarena {

/// 8-bit RGB, row-major, row 0 at the top of the arena (y = 1).
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(3 * w * h), 0) {}

  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const std::size_t i = 3 * (static_cast<std::size_t>(y) * width + x);
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
  friend bool operator==(const Image&, const Image&) = default;
};

struct Drawable {
  std::vector<Vec2> points;  ///< world coordinates, counter-clockwise
  std::array<int, 3> color{};
  int opacity = 255;
  friend bool operator==(const Drawable&, const Drawable&) = default;
};

/// Back-to-front drawables.
using DisplayList = std::vector<Drawable>;

DisplayList render_display_list(const State& state);

/// Scanline polygon filler. Pixel centers are sampled; a center on a polygon
/// boundary belongs to it for left and top edges only. Owns scratch buffers, so
/// one instance renders repeatedly without reallocating.
class Rasterizer {
 public:
  /// Throws InvariantViolation unless width, height >= 1 and supersample is 1, 2 or 4.
  Rasterizer(int width, int height, int supersample = 1);

  const Image& render(const DisplayList& list);
  const Image& render(const State& state);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int supersample() const noexcept { return k_; }

 private:
  void fill(const Drawable& d, Image& target);

  int width_, height_, k_;
  Image hi_;   ///< supersampled target (unused when k = 1)
  Image out_;
  DisplayList scratch_list_;
  std::vector<double> crossings_;
};

Image rasterize(const State& state, int width, int height, int supersample = 1);

/// Fixed-length numeric view: `fields` of each sprite in z-order restricted to
/// `layers` (all layers when empty), padded with `pad` up to `max_sprites`.
/// Throws CapacityExceeded when there are more sprites than fit.
std::vector<double> state_features(const State& state, std::span<const std::string> layers,
                                   std::span<const std::string> fields, std::size_t max_sprites, double pad = -1.0);

/// Deterministic PNG encoding (no timestamps or text chunks).
std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> bytes);
/// Throws IoError naming the path.
void write_png(const Image& image, const std::filesystem::path& path);

struct ObservationSpec {
  enum class Kind { kImage, kFeatures, kDisplayList };
  Kind kind = Kind::kImage;
  std::vector<int> shape;  ///< {h, w, 3} for images, {n} for features, {} for display lists
  friend bool operator==(const ObservationSpec&, const ObservationSpec&) = default;
};

using Observation = std::variant<Image, std::vector<double>, DisplayList>;

class Observer {
 public:
  virtual ~Observer() = default;
  virtual Observation observe(const State& state) = 0;
  virtual ObservationSpec spec() const = 0;
  virtual std::unique_ptr<Observer> clone() const = 0;
};

class ImageObserver final : public Observer {
 public:
  ImageObserver(int width, int height, int supersample = 1);
  Observation observe(const State& state) override { return raster_.render(state); }
  ObservationSpec spec() const override;
  std::unique_ptr<Observer> clone() const override { return std::make_unique<ImageObserver>(*this); }

 private:
  Rasterizer raster_;
};

class FeatureObserver final : public Observer {
 public:
  FeatureObserver(std::vector<std::string> layers, std::vector<std::string> fields, std::size_t max_sprites,
                  double pad = -1.0);
  Observation observe(const State& state) override;
  ObservationSpec spec() const override;
  std::unique_ptr<Observer> clone() const override { return std::make_unique<FeatureObserver>(*this); }

 private:
  std::vector<std::string> layers_, fields_;
  std::size_t max_sprites_;
  double pad_;
};

class DisplayListObserver final : public Observer {
 public:
  Observation observe(const State& state) override { return render_display_list(state); }
  ObservationSpec spec() const override { return {ObservationSpec::Kind::kDisplayList, {}}; }
  std::unique_ptr<Observer> clone() const override { return std::make_unique<DisplayListObserver>(*this); }
};

}  // namespace polyarena
