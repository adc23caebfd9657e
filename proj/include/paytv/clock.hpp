#ifndef PAYTV_CLOCK_HPP
#define PAYTV_CLOCK_HPP

#include <cstdint>

#include "paytv/errors.hpp"

namespace paytv {

using Ticks = std::uint64_t;

// Logical clock: integer ticks, monotone per instance. Each channel send
// costs one tick, which makes both window outcomes reachable in tests.
class SimClock {
public:
    SimClock() = default;
    explicit SimClock(Ticks start) : now_(start) {}

    Ticks now() const { return now_; }
    void advance(Ticks n = 1) { now_ += n; }

private:
    Ticks now_ = 0;
};

// T_recv - T_send <= delta, boundary inclusive. The receiver's clock may
// not be behind the sender's in the simulation.
inline bool check_window(Ticks t_send, Ticks t_recv, Ticks delta) {
    if (t_recv < t_send)
        fail(Err::ClockSkew, "receive tick before send tick");
    return t_recv - t_send <= delta;
}

} // namespace paytv

#endif
