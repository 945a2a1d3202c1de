#include <doctest.h>

#include <vector>

#include "logbed/core/rng.hpp"
#include "logbed/sim/engine.hpp"

using logbed::sim::Engine;
using logbed::sim::weighted_index;

TEST_CASE("events fire in time order, ties in insertion order") {
    Engine e;
    std::vector<int> hits;
    e.at(50, [&] { hits.push_back(3); });
    e.at(10, [&] { hits.push_back(1); });
    e.at(50, [&] { hits.push_back(4); });
    e.at(20, [&] { hits.push_back(2); });
    e.run_until(100);
    CHECK(hits == std::vector<int>{1, 2, 3, 4});
    CHECK(e.now() == 100);
    CHECK(e.pending() == 0);
}

TEST_CASE("events scheduled in the past run at the current instant") {
    Engine e;
    std::vector<long long> at;
    e.at(40, [&] {
        e.at(5, [&] { at.push_back(e.now()); });
    });
    e.run_until(60);
    REQUIRE(at.size() == 1);
    CHECK(at[0] == 40);
}

TEST_CASE("handlers can keep scheduling while the clock runs") {
    Engine e;
    int count = 0;
    std::function<void()> tick = [&] {
        ++count;
        if (count < 5) e.after(10, tick);
    };
    e.at(0, tick);
    e.run_until(200);
    CHECK(count == 5);
}

TEST_CASE("events beyond the horizon stay pending") {
    Engine e;
    bool fired = false;
    e.at(150, [&] { fired = true; });
    e.run_until(100);
    CHECK(!fired);
    CHECK(e.pending() == 1);
    e.run_until(200);
    CHECK(fired);
}

TEST_CASE("weighted choice tracks the weights") {
    auto r = logbed::rng::derive(7, "weights");
    std::vector<double> w = {1.0, 1.0};
    int first = 0;
    for (int i = 0; i < 10000; ++i)
        if (weighted_index(r, w) == 0) ++first;
    CHECK(first > 4700);
    CHECK(first < 5300);

    std::vector<double> lopsided = {0.0, 5.0};
    for (int i = 0; i < 100; ++i) CHECK(weighted_index(r, lopsided) == 1);

    CHECK_THROWS(weighted_index(r, {}));
    CHECK_THROWS(weighted_index(r, {0.0, 0.0}));
    CHECK_THROWS(weighted_index(r, {1.0, -2.0}));
}
