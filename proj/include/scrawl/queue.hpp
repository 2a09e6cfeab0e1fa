#pragma once

#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <optional>

namespace scrawl {

// Bounded single-producer/single-consumer handoff queue. The producer can
// park an exception in it; the consumer rethrows on its next pop so worker
// failures surface on the draining thread instead of dying silently.
template <typename T>
class BoundedQueue {
  public:
    explicit BoundedQueue(size_t capacity = 64) : capacity_(capacity) {}

    void push(T item) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
        if (closed_) return; // consumer is gone; drop quietly
        items_.push_back(std::move(item));
        not_empty_.notify_one();
    }

    // Blocks until an item, close, or a parked exception arrives.
    std::optional<T> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !items_.empty() || closed_ || error_; });
        if (!items_.empty()) {
            T item = std::move(items_.front());
            items_.pop_front();
            not_full_.notify_one();
            return item;
        }
        if (error_) {
            std::exception_ptr e = error_;
            error_ = nullptr;
            std::rethrow_exception(e);
        }
        return std::nullopt; // closed and drained
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

    void fail(std::exception_ptr e) {
        std::lock_guard lock(mutex_);
        error_ = e;
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

  private:
    const size_t capacity_;
    std::mutex mutex_;
    std::condition_variable not_empty_;
    std::condition_variable not_full_;
    std::deque<T> items_;
    bool closed_ = false;
    std::exception_ptr error_;
};

} // namespace scrawl
