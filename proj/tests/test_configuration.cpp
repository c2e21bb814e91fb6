#include <stdexcept>

#include "doctest.h"
#include "percolab/configuration.hpp"
#include "percolab/rng.hpp"

using namespace percolab;

TEST_CASE("fresh configuration reads all-vacant") {
    Configuration c(Window::sized({4, 5}, 3));
    for (std::size_t i = 0; i < c.site_count(); ++i) {
        CHECK(c.at_index(i) == 0);
    }
}

TEST_CASE("set then get round-trips; out-of-window access rejected") {
    Configuration c(Window::sized({4, 4}, 4));
    c.set({2, 3}, 3);
    CHECK(c.at({2, 3}) == 3);
    CHECK_THROWS_AS(c.at({4, 0}), std::out_of_range);
    CHECK_THROWS_AS(c.set({0, -1}, 1), std::out_of_range);
    CHECK_THROWS_AS(c.set({0, 0}, 4), std::invalid_argument);
    CHECK(c.state_or_vacant({-10, 0}) == 0);
}

TEST_CASE("iteration order covers each site exactly once") {
    const Window w(2, {-1, -1}, {2, 3}, 2);
    Configuration c(w);
    std::size_t visits = 0;
    for (std::size_t i = 0; i < c.site_count(); ++i) {
        c.set_index(i, 1);
        ++visits;
    }
    CHECK(visits == w.site_count());
    CHECK(c.occupied_count() == w.site_count());
}

TEST_CASE("snapshot text round-trips") {
    for (int d = 2; d <= 3; ++d) {
        Coords size(d, 5);
        Configuration c(Window::sized(size, 3));
        auto eng = RngPolicy(42).stream(static_cast<std::uint64_t>(d));
        for (std::size_t i = 0; i < c.site_count(); ++i) {
            c.set_index(i, static_cast<std::uint8_t>(eng() % 3));
        }
        const Configuration back = snapshot_from_text(snapshot_to_text(c));
        CHECK(back == c);
    }
}

TEST_CASE("snapshot rejects malformed input") {
    CHECK_THROWS(snapshot_from_text("not a snapshot"));
    Configuration c(Window::sized({3, 3}, 2));
    std::string text = snapshot_to_text(c);
    text.pop_back();
    text.pop_back();  // truncate the data
    CHECK_THROWS(snapshot_from_text(text));
}

TEST_CASE("csv export has one row per site plus header") {
    Configuration c(Window::sized({3, 4}, 2));
    const std::string csv = configuration_to_csv(c);
    std::size_t lines = 0;
    for (char ch : csv) {
        if (ch == '\n') ++lines;
    }
    CHECK(lines == 1 + c.site_count());
}
