#pragma once

#include <exception>
#include <mutex>

namespace zigzag {

/// Exceptions may not escape an OpenMP region; parallel loop bodies run
/// through this collector and the first captured exception is rethrown on
/// the calling thread once the loop has finished.
class ExceptionCollector {
 public:
  template <class F>
  void run(F&& body) noexcept {
    try {
      body();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!first_) first_ = std::current_exception();
    }
  }

  void rethrow() {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::exception_ptr first_;
  std::mutex mutex_;
};

}  // namespace zigzag
