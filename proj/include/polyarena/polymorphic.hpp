#pragma once

#include <memory>
#include <type_traits>
#include <utility>

namespace polyarena {

/// Owning handle with value semantics for a polymorphic component: copying
/// deep-copies through `T::clone()`. Components held this way make every
/// aggregate that owns them copyable, which is what environment cloning needs.
template <class T>
class Polymorphic {
 public:
  Polymorphic() = default;
  Polymorphic(std::unique_ptr<T> p) : p_(std::move(p)) {}  // NOLINT(google-explicit-constructor)
  template <class U, class = std::enable_if_t<std::is_base_of_v<T, U>>>
  Polymorphic(U value) : p_(std::make_unique<U>(std::move(value))) {}  // NOLINT(google-explicit-constructor)

  Polymorphic(const Polymorphic& o) : p_(o.p_ ? o.p_->clone() : nullptr) {}
  Polymorphic& operator=(const Polymorphic& o) {
    if (this != &o) p_ = o.p_ ? o.p_->clone() : nullptr;
    return *this;
  }
  Polymorphic(Polymorphic&&) noexcept = default;
  Polymorphic& operator=(Polymorphic&&) noexcept = default;

  T& operator*() const { return *p_; }
  T* operator->() const { return p_.get(); }
  T* get() const { return p_.get(); }
  explicit operator bool() const noexcept { return static_cast<bool>(p_); }

 private:
  std::unique_ptr<T> p_;
};

}  // namespace polyarena
