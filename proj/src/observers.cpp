#include "polyarena/observers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <png.h>

#include "polyarena/errors.hpp"

namespace polyarena {

DisplayList render_display_list(const State& state) {
  DisplayList list;
  list.reserve(state.sprite_count());
  for (const Sprite* s : z_order(state)) list.push_back({sprite_world_vertices(*s), s->color, s->opacity});
  return list;
}

Rasterizer::Rasterizer(int width, int height, int supersample) : width_(width), height_(height), k_(supersample) {
  if (width_ < 1 || height_ < 1) throw InvariantViolation(fmt::format("image size {}x{} must be positive", width_, height_));
  if (k_ != 1 && k_ != 2 && k_ != 4) throw InvariantViolation(fmt::format("supersample {} not in {{1, 2, 4}}", k_));
  out_ = Image(width_, height_);
  if (k_ > 1) hi_ = Image(width_ * k_, height_ * k_);
}

void Rasterizer::fill(const Drawable& d, Image& target) {
  if (d.opacity == 0 || d.points.size() < 3) return;
  const int w = target.width, h = target.height;
  double lo_y = d.points[0].y, hi_y = d.points[0].y;
  for (const Vec2& p : d.points) {
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  // Rows whose center y lies in (lo_y, hi_y], widened by one to absorb rounding.
  const auto row_of = [h](double v) { return std::clamp((1.0 - v) * h - 0.5, -2.0, h + 1.0); };
  const int r0 = std::max(0, static_cast<int>(std::floor(row_of(hi_y))));
  const int r1 = std::min(h - 1, static_cast<int>(std::ceil(row_of(lo_y))));

  const int alpha = d.opacity;
  const std::array<int, 3> src = d.color;
  const std::size_t n = d.points.size();
  for (int r = r0; r <= r1; ++r) {
    const double y = 1.0 - (r + 0.5) / h;
    crossings_.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 p = d.points[i], q = d.points[(i + 1) % n];
      if (p.y == q.y) continue;
      const double ymin = std::min(p.y, q.y), ymax = std::max(p.y, q.y);
      if (!(ymin < y && y <= ymax)) continue;
      crossings_.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
    }
    std::sort(crossings_.begin(), crossings_.end());
    std::uint8_t* row = target.rgb.data() + 3 * static_cast<std::size_t>(r) * w;
    for (std::size_t i = 0; i + 1 < crossings_.size(); i += 2) {
      const auto col_of = [w](double v) { return std::clamp(v * w - 0.5, -1.0, w + 1.0); };
      const int c0 = std::max(0, static_cast<int>(std::ceil(col_of(crossings_[i]))));
      const int c1 = std::min(w, static_cast<int>(std::ceil(col_of(crossings_[i + 1]))));
      for (int c = c0; c < c1; ++c) {
        std::uint8_t* px = row + 3 * c;
        for (int ch = 0; ch < 3; ++ch) {
          px[ch] = alpha == 255 ? static_cast<std::uint8_t>(src[ch])
                                : static_cast<std::uint8_t>((src[ch] * alpha + px[ch] * (255 - alpha) + 127) / 255);
        }
      }
    }
  }
}

const Image& Rasterizer::render(const DisplayList& list) {
  Image& target = k_ == 1 ? out_ : hi_;
  std::fill(target.rgb.begin(), target.rgb.end(), 0);
  for (const Drawable& d : list) fill(d, target);
  if (k_ == 1) return out_;

  const int kk = k_ * k_;
  const int hw = hi_.width;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      int sum[3] = {0, 0, 0};
      for (int dy = 0; dy < k_; ++dy) {
        const std::uint8_t* src = hi_.rgb.data() + 3 * (static_cast<std::size_t>(y * k_ + dy) * hw + x * k_);
        for (int dx = 0; dx < k_; ++dx) {
          sum[0] += src[3 * dx];
          sum[1] += src[3 * dx + 1];
          sum[2] += src[3 * dx + 2];
        }
      }
      std::uint8_t* dst = out_.rgb.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
      for (int ch = 0; ch < 3; ++ch) dst[ch] = static_cast<std::uint8_t>((sum[ch] + kk / 2) / kk);
    }
  }
  return out_;
}

const Image& Rasterizer::render(const State& state) {
  scratch_list_.resize(state.sprite_count());
  std::size_t i = 0;
  for (const Sprite* s : z_order(state)) {
    Drawable& d = scratch_list_[i++];
    sprite_world_vertices_into(*s, d.points);
    d.color = s->color;
    d.opacity = s->opacity;
  }
  return render(scratch_list_);
}

Image rasterize(const State& state, int width, int height, int supersample) {
  Rasterizer r(width, height, supersample);
  return r.render(state);
}

std::vector<double> state_features(const State& state, std::span<const std::string> layers,
                                   std::span<const std::string> fields, std::size_t max_sprites, double pad) {
  std::vector<double> out;
  out.reserve(max_sprites * fields.size());
  std::size_t count = 0;
  const auto emit = [&](const State::Layer& layer) {
    for (const Sprite& s : layer.sprites) {
      if (++count > max_sprites) {
        throw CapacityExceeded(fmt::format("more than {} sprites for the feature view", max_sprites));
      }
      for (const std::string& f : fields) out.push_back(numeric_field(s, f));
    }
  };
  if (layers.empty()) {
    for (const auto& layer : state.layers()) emit(layer);
  } else {
    for (const std::string& name : layers) emit(state.layer(name));
  }
  out.resize(max_sprites * fields.size(), pad);
  return out;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.rgb.data(), 0, nullptr)) {
    throw IoError(fmt::format("png encode failed: {}", img.message));
  }
  std::vector<std::uint8_t> bytes(size);
  if (!png_image_write_to_memory(&img, bytes.data(), &size, 0, image.rgb.data(), 0, nullptr)) {
    throw IoError(fmt::format("png encode failed: {}", img.message));
  }
  bytes.resize(size);
  return bytes;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    throw IoError(fmt::format("png decode failed: {}", img.message));
  }
  img.format = PNG_FORMAT_RGB;
  Image out(static_cast<int>(img.width), static_cast<int>(img.height));
  if (!png_image_finish_read(&img, nullptr, out.rgb.data(), 0, nullptr)) {
    png_image_free(&img);
    throw IoError(fmt::format("png decode failed: {}", img.message));
  }
  return out;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError(fmt::format("write failed: {}", path.string()));
}

ImageObserver::ImageObserver(int width, int height, int supersample) : raster_(width, height, supersample) {}

ObservationSpec ImageObserver::spec() const {
  return {ObservationSpec::Kind::kImage, {raster_.height(), raster_.width(), 3}};
}

FeatureObserver::FeatureObserver(std::vector<std::string> layers, std::vector<std::string> fields,
                                 std::size_t max_sprites, double pad)
    : layers_(std::move(layers)), fields_(std::move(fields)), max_sprites_(max_sprites), pad_(pad) {
  if (fields_.empty()) throw InvariantViolation("feature observer needs at least one field");
}

Observation FeatureObserver::observe(const State& state) {
  return state_features(state, layers_, fields_, max_sprites_, pad_);
}

ObservationSpec FeatureObserver::spec() const {
  return {ObservationSpec::Kind::kFeatures, {static_cast<int>(max_sprites_ * fields_.size())}};
}

}  // namespace polyarena
