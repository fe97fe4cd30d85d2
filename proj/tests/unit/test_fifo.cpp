#include <catch2/catch_amalgamated.hpp>

#include <deque>
#include <random>

#include "udec/pipeline.hpp"

using namespace udec;
using udec::pipeline::FwftFifo;

// Randomized producer/consumer schedules against a plain std::deque model.
TEST_CASE("fwft fifo under randomized stall patterns") {
    std::mt19937_64 rng(0x51A11);
    for (int trial = 0; trial < 1000; ++trial) {
        FwftFifo<int, 2> fifo;
        std::deque<int> model;
        int next_val = 0;
        bool saw_fall_through = false;
        const u64 before_falls = fifo.fall_throughs();
        for (u64 cycle = 1; cycle <= 200; ++cycle) {
            const bool produce = (rng() & 3) != 0;  // 75% production pressure
            const bool consume = (rng() & 1) != 0;  // 50% consumption
            bool pushed_this_cycle = false;
            if (produce && !fifo.full()) {
                fifo.push(next_val, cycle);
                model.push_back(next_val);
                ++next_val;
                pushed_this_cycle = fifo.size() == 1;
            }
            REQUIRE(fifo.size() <= 2);
            if (consume && !fifo.empty()) {
                const int got = fifo.pop(cycle);
                REQUIRE(!model.empty());
                CHECK(got == model.front());  // order preserved, nothing dropped
                model.pop_front();
                if (pushed_this_cycle && fifo.empty()) saw_fall_through = true;
            }
            CHECK(fifo.size() == model.size());
        }
        // Drain and confirm nothing was lost.
        u64 cycle = 1000;
        while (!fifo.empty()) {
            CHECK(fifo.pop(cycle) == model.front());
            model.pop_front();
        }
        CHECK(model.empty());
        if (saw_fall_through) CHECK(fifo.fall_throughs() > before_falls);
    }
}

TEST_CASE("fwft fall-through: push into empty queue pops the same cycle") {
    FwftFifo<int, 2> fifo;
    fifo.push(7, 42);
    REQUIRE(!fifo.empty());
    CHECK(fifo.pop(42) == 7);
    CHECK(fifo.fall_throughs() == 1);

    // A queued entry popped on a later cycle is not a fall-through.
    fifo.push(8, 50);
    CHECK(fifo.pop(51) == 8);
    CHECK(fifo.fall_throughs() == 1);
}

TEST_CASE("fifo overflow/underflow guard rails") {
    FwftFifo<int, 2> fifo;
    fifo.push(1, 1);
    fifo.push(2, 1);
    CHECK(fifo.full());
    CHECK_THROWS_AS(fifo.push(3, 1), SimError);
    fifo.clear();
    CHECK(fifo.empty());
    CHECK_THROWS_AS(fifo.pop(1), SimError);
}
