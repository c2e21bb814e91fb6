#include "percolab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "percolab/textio.hpp"

namespace percolab {

namespace {

constexpr double kProbSumTolerance = 1e-12;

void validate_prob_vector(const std::vector<double>& probs, int q,
                          const char* what) {
    if (static_cast<int>(probs.size()) != q) {
        throw std::invalid_argument(std::string(what) +
                                    ": need exactly q probabilities");
    }
    double sum = 0;
    for (double v : probs) {
        if (v < 0.0 || std::isnan(v)) {
            throw std::invalid_argument(std::string(what) +
                                        ": negative or NaN probability");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance) {
        throw std::invalid_argument(std::string(what) +
                                    ": probabilities must sum to 1");
    }
}

// Enumerates per-state count vectors summing to `total`, in lexicographic
// order; the enumeration rank is the dense row index.
void enumerate_multisets(int q, int total,
                         const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> counts(static_cast<std::size_t>(q), 0);
    std::function<void(int, int)> rec = [&](int state, int remaining) {
        if (state == q - 1) {
            counts[state] = remaining;
            fn(counts);
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            counts[state] = k;
            rec(state + 1, remaining - k);
        }
    };
    rec(0, total);
}

std::uint8_t draw_state(const std::vector<double>& probs,
                        std::mt19937_64& eng) {
    const double u = uniform01(eng);
    double cum = 0;
    const int q = static_cast<int>(probs.size());
    for (int s = 0; s < q - 1; ++s) {
        cum += probs[s];
        if (u < cum) return static_cast<std::uint8_t>(s);
    }
    return static_cast<std::uint8_t>(q - 1);
}

}  // namespace

ProductMeasureSpec ProductMeasureSpec::bernoulli(double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
    }
    return ProductMeasureSpec{2, {1.0 - p, p}};
}

void ProductMeasureSpec::validate() const {
    if (q < 2) throw std::invalid_argument("product spec: q must be >= 2");
    validate_prob_vector(probs, q, "product spec");
}

std::size_t MarkovConditionalSpec::row_count(int q, int d) {
    // multisets of size 2d over q states: C(2d + q - 1, q - 1)
    const int n = 2 * d + q - 1;
    const int k = q - 1;
    std::size_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<std::size_t>(n - k + i) /
                 static_cast<std::size_t>(i);
    }
    return result;
}

std::vector<std::vector<int>> MarkovConditionalSpec::multisets(int q, int d) {
    std::vector<std::vector<int>> out;
    enumerate_multisets(q, 2 * d,
                        [&](const std::vector<int>& counts) { out.push_back(counts); });
    return out;
}

std::size_t MarkovConditionalSpec::multiset_index(
    const std::vector<int>& state_counts) const {
    if (static_cast<int>(state_counts.size()) != q) {
        throw std::invalid_argument("multiset_index: need q counts");
    }
    int sum = 0;
    for (int c : state_counts) {
        if (c < 0) throw std::invalid_argument("multiset_index: negative count");
        sum += c;
    }
    if (sum != 2 * d) {
        throw std::invalid_argument("multiset_index: counts must sum to 2d");
    }
    // Rows are laid out in the (descending lexicographic) enumeration order.
    static thread_local std::vector<std::vector<int>> cache;
    static thread_local int cache_q = -1, cache_d = -1;
    if (cache_q != q || cache_d != d) {
        cache = multisets(q, d);
        cache_q = q;
        cache_d = d;
    }
    const auto it = std::lower_bound(cache.begin(), cache.end(), state_counts,
                                     std::greater<std::vector<int>>());
    if (it == cache.end() || *it != state_counts) {
        throw std::invalid_argument("multiset_index: unknown multiset");
    }
    return static_cast<std::size_t>(it - cache.begin());
}

void MarkovConditionalSpec::validate() const {
    if (q < 2) throw std::invalid_argument("markov spec: q must be >= 2");
    if (d < 2) throw std::invalid_argument("markov spec: d must be >= 2");
    const std::size_t expected = row_count(q, d);
    if (rows.size() != expected) {
        throw std::invalid_argument(
            "markov spec: need one row per neighbour multiset (" +
            std::to_string(expected) + " rows)");
    }
    for (const auto& row : rows) {
        validate_prob_vector(row, q, "markov spec row");
    }
}

MarkovConditionalSpec MarkovConditionalSpec::independent(
    int d, std::vector<double> probs) {
    MarkovConditionalSpec spec;
    spec.q = static_cast<int>(probs.size());
    spec.d = d;
    validate_prob_vector(probs, spec.q, "independent spec");
    spec.rows.assign(row_count(spec.q, d), probs);
    return spec;
}

MarkovConditionalSpec MarkovConditionalSpec::ising(int d, double beta) {
    MarkovConditionalSpec spec;
    spec.q = 2;
    spec.d = d;
    spec.rows.resize(row_count(2, d));
    std::size_t rank = 0;
    enumerate_multisets(2, 2 * d, [&](const std::vector<int>& counts) {
        // counts[0] neighbours at spin -1, counts[1] at spin +1
        const double field = static_cast<double>(counts[1] - counts[0]);
        const double p_up = 1.0 / (1.0 + std::exp(-2.0 * beta * field));
        spec.rows[rank++] = {1.0 - p_up, p_up};
    });
    return spec;
}

double finite_energy_h(const ProductMeasureSpec& spec) {
    spec.validate();
    double h = 1.0;
    for (double v : spec.probs) h = std::min(h, v);
    return h;
}

double finite_energy_h(const MarkovConditionalSpec& spec) {
    spec.validate();
    double h = 1.0;
    for (const auto& row : spec.rows) {
        for (double v : row) h = std::min(h, v);
    }
    return h;
}

double finite_energy_h(const ModelSpec& spec) {
    return std::visit([](const auto& s) { return finite_energy_h(s); }, spec);
}

bool has_finite_energy(const ModelSpec& spec) {
    return finite_energy_h(spec) > 0.0;
}

Configuration sample_product(const Window& window,
                             const ProductMeasureSpec& spec,
                             std::mt19937_64& eng) {
    spec.validate();
    if (spec.q != window.states()) {
        throw std::invalid_argument("sample_product: q mismatch with window");
    }
    Configuration config(window);
    auto& states = config.mutable_states();
    if (spec.q == 2) {
        const double p1 = spec.probs[1];
        for (auto& s : states) s = uniform01(eng) < p1 ? 1 : 0;
    } else {
        for (auto& s : states) s = draw_state(spec.probs, eng);
    }
    return config;
}

Configuration sample_product(const Window& window,
                             const ProductMeasureSpec& spec,
                             std::uint64_t seed) {
    auto eng = RngPolicy(seed).stream(0);
    return sample_product(window, spec, eng);
}

Configuration sample_markov(const Window& window,
                            const MarkovConditionalSpec& spec,
                            std::mt19937_64& eng, long sweeps,
                            const Configuration& init) {
    spec.validate();
    if (spec.q != window.states() || spec.d != window.dim()) {
        throw std::invalid_argument("sample_markov: spec/window shape mismatch");
    }
    if (!(init.window() == window)) {
        throw std::invalid_argument("sample_markov: init window mismatch");
    }
    if (sweeps < 0) throw std::invalid_argument("sample_markov: sweeps < 0");

    Configuration config(init);
    auto& states = config.mutable_states();
    const int d = window.dim();
    const auto& strides = window.strides();

    // Rows indexed by neighbour-state counts; q=2 keeps a direct table by
    // occupied-neighbour count.
    std::vector<const std::vector<double>*> rows_by_occupied;
    if (spec.q == 2) {
        rows_by_occupied.resize(static_cast<std::size_t>(2 * d) + 1);
        std::vector<int> counts(2);
        for (int k = 0; k <= 2 * d; ++k) {
            counts[0] = 2 * d - k;
            counts[1] = k;
            rows_by_occupied[k] = &spec.rows[spec.multiset_index(counts)];
        }
    }

    std::vector<int> counts(static_cast<std::size_t>(spec.q));
    Coords x(window.lo());
    for (long sweep = 0; sweep < sweeps; ++sweep) {
        x = window.lo();
        for (std::size_t idx = 0; idx < states.size(); ++idx) {
            if (spec.q == 2) {
                int occupied = 0;
                for (int axis = 0; axis < d; ++axis) {
                    if (x[axis] > window.lo()[axis] &&
                        states[idx - strides[axis]] == 1) {
                        ++occupied;
                    }
                    if (x[axis] < window.hi()[axis] - 1 &&
                        states[idx + strides[axis]] == 1) {
                        ++occupied;
                    }
                }
                const auto& row = *rows_by_occupied[occupied];
                states[idx] = uniform01(eng) < row[1] ? 1 : 0;
            } else {
                std::fill(counts.begin(), counts.end(), 0);
                for (int axis = 0; axis < d; ++axis) {
                    const int lo_state =
                        x[axis] > window.lo()[axis]
                            ? states[idx - strides[axis]]
                            : 0;
                    const int hi_state =
                        x[axis] < window.hi()[axis] - 1
                            ? states[idx + strides[axis]]
                            : 0;
                    ++counts[lo_state];
                    ++counts[hi_state];
                }
                const auto& row = spec.rows[spec.multiset_index(counts)];
                states[idx] = draw_state(row, eng);
            }
            int axis = d - 1;
            while (axis >= 0) {
                if (++x[axis] < window.hi()[axis]) break;
                x[axis] = window.lo()[axis];
                --axis;
            }
        }
    }
    return config;
}

Configuration sample_markov(const Window& window,
                            const MarkovConditionalSpec& spec,
                            std::uint64_t seed, long sweeps,
                            const Configuration& init) {
    auto eng = RngPolicy(seed).stream(0);
    return sample_markov(window, spec, eng, sweeps, init);
}

ModelSpec parse_model_text(const std::string& text) {
    const auto entries = parse_key_value_text(text);
    std::string model;
    std::optional<double> p;
    std::optional<std::vector<double>> probs;
    int q = 2;
    int d = 2;
    std::vector<std::pair<std::vector<int>, std::vector<double>>> table_rows;

    for (const auto& e : entries) {
        if (e.key == "model") {
            model = e.value;
        } else if (e.key == "p") {
            const auto v = parse_double(e.value);
            if (!v) throw std::runtime_error("model file: bad p value");
            p = *v;
        } else if (e.key == "q") {
            const auto v = parse_int(e.value);
            if (!v) throw std::runtime_error("model file: bad q value");
            q = static_cast<int>(*v);
        } else if (e.key == "d") {
            const auto v = parse_int(e.value);
            if (!v) throw std::runtime_error("model file: bad d value");
            d = static_cast<int>(*v);
        } else if (e.key == "probs") {
            std::vector<double> vec;
            for (const auto& f : split_fields(e.value)) {
                const auto v = parse_double(f);
                if (!v) throw std::runtime_error("model file: bad probs entry");
                vec.push_back(*v);
            }
            probs = std::move(vec);
        } else if (e.key.rfind("row", 0) == 0) {
            // `row c_0 ... c_{q-1} = p_0 ... p_{q-1}`
            std::vector<int> key_counts;
            for (const auto& f : split_fields(e.key.substr(3))) {
                const auto v = parse_int(f);
                if (!v) throw std::runtime_error("model file: bad row counts");
                key_counts.push_back(static_cast<int>(*v));
            }
            std::vector<double> row;
            for (const auto& f : split_fields(e.value)) {
                const auto v = parse_double(f);
                if (!v) throw std::runtime_error("model file: bad row probs");
                row.push_back(*v);
            }
            table_rows.emplace_back(std::move(key_counts), std::move(row));
        } else {
            throw std::runtime_error("model file: unknown key " + e.key);
        }
    }

    if (model == "bernoulli") {
        if (!p) throw std::runtime_error("model file: bernoulli needs p");
        auto spec = ProductMeasureSpec::bernoulli(*p);
        spec.validate();
        return spec;
    }
    if (model == "product") {
        if (!probs) throw std::runtime_error("model file: product needs probs");
        ProductMeasureSpec spec{static_cast<int>(probs->size()), *probs};
        spec.validate();
        return spec;
    }
    if (model == "markov_table") {
        MarkovConditionalSpec spec;
        spec.q = q;
        spec.d = d;
        spec.rows.assign(MarkovConditionalSpec::row_count(q, d), {});
        for (auto& [counts, row] : table_rows) {
            int sum = 0;
            for (int c : counts) sum += c;
            if (static_cast<int>(counts.size()) != q || sum != 2 * d) {
                throw std::runtime_error(
                    "model file: row counts must be q values summing to 2d");
            }
            spec.rows[spec.multiset_index(counts)] = row;
        }
        for (const auto& row : spec.rows) {
            if (row.empty()) {
                throw std::runtime_error("model file: missing markov rows");
            }
        }
        spec.validate();
        return spec;
    }
    throw std::runtime_error("model file: unknown model '" + model + "'");
}

ModelSpec read_model_file(const std::string& path) {
    return parse_model_text(read_text_file(path));
}

std::string model_to_text(const ModelSpec& spec) {
    std::ostringstream out;
    if (const auto* prod = std::get_if<ProductMeasureSpec>(&spec)) {
        if (prod->q == 2) {
            out << "model = bernoulli\n";
            out << "p = " << format_double(prod->probs[1]) << "\n";
        } else {
            out << "model = product\n";
            out << "probs =";
            for (double v : prod->probs) out << ' ' << format_double(v);
            out << "\n";
        }
        return out.str();
    }
    const auto& markov = std::get<MarkovConditionalSpec>(spec);
    out << "model = markov_table\n";
    out << "q = " << markov.q << "\n";
    out << "d = " << markov.d << "\n";
    std::size_t rank = 0;
    enumerate_multisets(markov.q, 2 * markov.d, [&](const std::vector<int>& counts) {
        out << "row";
        for (int c : counts) out << ' ' << c;
        out << " =";
        for (double v : markov.rows[rank++]) out << ' ' << format_double(v);
        out << "\n";
    });
    return out.str();
}

}  // namespace percolab
