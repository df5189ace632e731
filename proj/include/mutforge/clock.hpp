#pragma once

#include <chrono>
#include <cstdint>
#include <thread>
#include <vector>

namespace mutforge {

// Time source behind the client's rate pacing. Injectable so pacing and
// retry behavior are testable without real waiting.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() = 0;
    virtual void sleep_ms(std::int64_t ms) = 0;
};

class SystemClock final : public Clock {
public:
    std::int64_t now_ms() override {
        auto now = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
    }
    void sleep_ms(std::int64_t ms) override {
        if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    }
};

// Manually advanced clock; sleeping advances time instantly.
class ManualClock final : public Clock {
public:
    explicit ManualClock(std::int64_t start_ms = 0) : now_(start_ms) {}

    std::int64_t now_ms() override { return now_; }
    void sleep_ms(std::int64_t ms) override {
        if (ms > 0) {
            now_ += ms;
            sleeps_.push_back(ms);
        }
    }
    void advance(std::int64_t ms) { now_ += ms; }
    const std::vector<std::int64_t>& sleeps() const { return sleeps_; }

private:
    std::int64_t now_;
    std::vector<std::int64_t> sleeps_;
};

} // namespace mutforge
