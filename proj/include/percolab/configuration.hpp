#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "percolab/geometry.hpp"

namespace percolab {

/// A q-state site field on a finite window. Everything outside the window is
/// vacant; `state_or_vacant` implements that convention for neighbour reads.
class Configuration {
public:
    explicit Configuration(Window window);

    const Window& window() const { return window_; }
    std::size_t site_count() const { return states_.size(); }

    std::uint8_t at(const Coords& x) const;
    void set(const Coords& x, std::uint8_t s);

    std::uint8_t at_index(std::size_t idx) const { return states_[idx]; }
    void set_index(std::size_t idx, std::uint8_t s);

    /// State of x, or 0 when x lies outside the window.
    std::uint8_t state_or_vacant(const Coords& x) const;

    const std::vector<std::uint8_t>& states() const { return states_; }
    std::vector<std::uint8_t>& mutable_states() { return states_; }

    std::size_t occupied_count() const;

    bool operator==(const Configuration& other) const {
        return window_ == other.window_ && states_ == other.states_;
    }

private:
    Window window_;
    std::vector<std::uint8_t> states_;
};

/// Snapshot file: text header (d, q, lo, hi) followed by run-length encoded
/// states in lexicographic site order, tokens `count*state`.
std::string snapshot_to_text(const Configuration& config);
Configuration snapshot_from_text(const std::string& text);

void write_snapshot(const Configuration& config, const std::string& path);
Configuration read_snapshot(const std::string& path);

/// Debug CSV: one row per site, columns x1..xd then state.
std::string configuration_to_csv(const Configuration& config);

}  // namespace percolab
