#include "percolab/configuration.hpp"

#include <sstream>
#include <stdexcept>

#include "percolab/textio.hpp"

namespace percolab {

Configuration::Configuration(Window window)
    : window_(std::move(window)), states_(window_.site_count(), 0) {}

std::uint8_t Configuration::at(const Coords& x) const {
    return states_[window_.index_of(x)];
}

void Configuration::set(const Coords& x, std::uint8_t s) {
    if (s >= window_.states()) {
        throw std::invalid_argument("Configuration::set: state out of range");
    }
    states_[window_.index_of(x)] = s;
}

void Configuration::set_index(std::size_t idx, std::uint8_t s) {
    if (s >= window_.states()) {
        throw std::invalid_argument("Configuration::set_index: state out of range");
    }
    states_.at(idx) = s;
}

std::uint8_t Configuration::state_or_vacant(const Coords& x) const {
    if (!window_.contains(x)) return 0;
    return states_[window_.index_of(x)];
}

std::size_t Configuration::occupied_count() const {
    std::size_t n = 0;
    for (std::uint8_t s : states_) {
        if (s == 1) ++n;
    }
    return n;
}

std::string snapshot_to_text(const Configuration& config) {
    const Window& w = config.window();
    std::ostringstream out;
    out << "percolab snapshot 1\n";
    out << "d " << w.dim() << "\n";
    out << "q " << w.states() << "\n";
    out << "lo";
    for (int v : w.lo()) out << ' ' << v;
    out << "\nhi";
    for (int v : w.hi()) out << ' ' << v;
    out << "\ndata\n";
    const auto& states = config.states();
    std::size_t i = 0;
    int tokens_on_line = 0;
    while (i < states.size()) {
        std::size_t j = i;
        while (j < states.size() && states[j] == states[i]) ++j;
        out << (j - i) << '*' << static_cast<int>(states[i]);
        ++tokens_on_line;
        if (tokens_on_line == 12) {
            out << '\n';
            tokens_on_line = 0;
        } else {
            out << ' ';
        }
        i = j;
    }
    if (tokens_on_line != 0) out << '\n';
    return out.str();
}

Configuration snapshot_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string magic1, magic2;
    int version = 0;
    in >> magic1 >> magic2 >> version;
    if (magic1 != "percolab" || magic2 != "snapshot" || version != 1) {
        throw std::runtime_error("snapshot: bad header");
    }
    std::string tag;
    int d = 0, q = 0;
    in >> tag >> d;
    if (tag != "d") throw std::runtime_error("snapshot: expected d");
    in >> tag >> q;
    if (tag != "q") throw std::runtime_error("snapshot: expected q");
    Coords lo(d), hi(d);
    in >> tag;
    if (tag != "lo") throw std::runtime_error("snapshot: expected lo");
    for (int i = 0; i < d; ++i) in >> lo[i];
    in >> tag;
    if (tag != "hi") throw std::runtime_error("snapshot: expected hi");
    for (int i = 0; i < d; ++i) in >> hi[i];
    in >> tag;
    if (tag != "data") throw std::runtime_error("snapshot: expected data");
    Configuration config(Window(d, lo, hi, q));
    auto& states = config.mutable_states();
    std::size_t filled = 0;
    std::string token;
    while (filled < states.size() && in >> token) {
        const std::size_t star = token.find('*');
        if (star == std::string::npos) {
            throw std::runtime_error("snapshot: malformed token " + token);
        }
        const auto count = parse_int(token.substr(0, star));
        const auto state = parse_int(token.substr(star + 1));
        if (!count || !state || *count <= 0 || *state < 0 || *state >= q) {
            throw std::runtime_error("snapshot: malformed token " + token);
        }
        if (filled + static_cast<std::size_t>(*count) > states.size()) {
            throw std::runtime_error("snapshot: run overflows window");
        }
        for (long long k = 0; k < *count; ++k) {
            states[filled++] = static_cast<std::uint8_t>(*state);
        }
    }
    if (filled != states.size()) {
        throw std::runtime_error("snapshot: truncated data");
    }
    return config;
}

void write_snapshot(const Configuration& config, const std::string& path) {
    atomic_write_file(path, snapshot_to_text(config));
}

Configuration read_snapshot(const std::string& path) {
    return snapshot_from_text(read_text_file(path));
}

std::string configuration_to_csv(const Configuration& config) {
    const Window& w = config.window();
    std::vector<std::string> header;
    for (int i = 0; i < w.dim(); ++i) header.push_back("x" + std::to_string(i + 1));
    header.push_back("state");
    CsvBuilder csv(header);
    Coords x(w.lo());
    for (std::size_t idx = 0; idx < config.site_count(); ++idx) {
        std::vector<std::string> row;
        for (int v : x) row.push_back(std::to_string(v));
        row.push_back(std::to_string(static_cast<int>(config.at_index(idx))));
        csv.add_row(row);
        int axis = w.dim() - 1;
        while (axis >= 0) {
            if (++x[axis] < w.hi()[axis]) break;
            x[axis] = w.lo()[axis];
            --axis;
        }
    }
    return csv.str();
}

}  // namespace percolab
