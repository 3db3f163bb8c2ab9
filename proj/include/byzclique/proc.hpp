#pragma once

#include <coroutine>
#include <exception>
#include <optional>
#include <utility>

namespace byz {

template <class T>
class Proc;

namespace detail {

template <class T>
struct PromiseStorage {
  std::optional<T> value;
  void return_value(T v) { value.emplace(std::move(v)); }
};

template <>
struct PromiseStorage<void> {
  void return_void() {}
};

}  // namespace detail

/// A lazily started coroutine used for node programs. Awaiting a Proc
/// from another Proc transfers control into the child; when the child
/// finishes, its parent resumes. Roots are driven by the round engine.
template <class T = void>
class [[nodiscard]] Proc {
 public:
  struct promise_type : detail::PromiseStorage<T> {
    std::coroutine_handle<> continuation;
    std::exception_ptr error;

    Proc get_return_object() {
      return Proc(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    auto final_suspend() noexcept {
      struct FinalAwaiter {
        bool await_ready() noexcept { return false; }
        std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> h) noexcept {
          auto cont = h.promise().continuation;
          return cont ? cont : std::noop_coroutine();
        }
        void await_resume() noexcept {}
      };
      return FinalAwaiter{};
    }
    void unhandled_exception() { error = std::current_exception(); }
  };

  Proc() = default;
  explicit Proc(std::coroutine_handle<promise_type> h) : h_(h) {}
  Proc(Proc&& o) noexcept : h_(std::exchange(o.h_, nullptr)) {}
  Proc& operator=(Proc&& o) noexcept {
    if (this != &o) {
      destroy();
      h_ = std::exchange(o.h_, nullptr);
    }
    return *this;
  }
  Proc(const Proc&) = delete;
  Proc& operator=(const Proc&) = delete;
  ~Proc() { destroy(); }

  /// Start a root coroutine (runs until its first suspension point).
  void start() { h_.resume(); }
  bool done() const { return !h_ || h_.done(); }

  /// Result of a completed root; rethrows any stored exception.
  T result() {
    rethrow();
    if constexpr (!std::is_void_v<T>) return std::move(*h_.promise().value);
  }

  // Awaiting starts the child and suspends the parent until it finishes.
  bool await_ready() const noexcept { return false; }
  std::coroutine_handle<> await_suspend(std::coroutine_handle<> parent) noexcept {
    h_.promise().continuation = parent;
    return h_;
  }
  T await_resume() { return result(); }

 private:
  void rethrow() {
    if (h_ && h_.promise().error) std::rethrow_exception(h_.promise().error);
  }
  void destroy() {
    if (h_) {
      h_.destroy();
      h_ = nullptr;
    }
  }
  std::coroutine_handle<promise_type> h_;
};

}  // namespace byz
