#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "percolab/configuration.hpp"
#include "percolab/rng.hpp"

namespace percolab {

/// Per-state probabilities of an i.i.d. product measure.
struct ProductMeasureSpec {
    int q = 2;
    std::vector<double> probs;

    static ProductMeasureSpec bernoulli(double p);
    void validate() const;  // throws on malformed probability vectors
};

/// Translation-invariant nearest-neighbour conditional law. Rows are keyed
/// by the multiset of the 2d neighbour states, encoded as per-state counts
/// summing to 2d; every multiset must carry a stochastic row.
struct MarkovConditionalSpec {
    int q = 2;
    int d = 2;
    /// rows[k] = conditional distribution over states for multiset k, where
    /// k is the dense index produced by multiset_index().
    std::vector<std::vector<double>> rows;

    std::size_t multiset_index(const std::vector<int>& state_counts) const;
    static std::size_t row_count(int q, int d);
    /// All neighbour multisets in row order (counts vectors summing to 2d).
    static std::vector<std::vector<int>> multisets(int q, int d);
    void validate() const;

    /// Independence case: every row equals the given single-site law.
    static MarkovConditionalSpec independent(int d, std::vector<double> probs);
    /// Heat-bath conditional of the two-state Ising model at inverse
    /// temperature beta (states 0/1 mapped to spins -1/+1, no external field).
    static MarkovConditionalSpec ising(int d, double beta);
};

using ModelSpec = std::variant<ProductMeasureSpec, MarkovConditionalSpec>;

/// Minimum conditional probability over all states and neighbourhoods; zero
/// means the spec lacks the finite-energy property.
double finite_energy_h(const ProductMeasureSpec& spec);
double finite_energy_h(const MarkovConditionalSpec& spec);
double finite_energy_h(const ModelSpec& spec);
bool has_finite_energy(const ModelSpec& spec);

/// I.i.d. draw of every site from the product law.
Configuration sample_product(const Window& window,
                             const ProductMeasureSpec& spec,
                             std::mt19937_64& eng);
Configuration sample_product(const Window& window,
                             const ProductMeasureSpec& spec,
                             std::uint64_t seed);

/// Single-site heat-bath sweeps in deterministic raster order, starting from
/// `init`. Border sites read the vacant exterior as fixed neighbour values.
/// sweeps = 0 returns init unchanged.
Configuration sample_markov(const Window& window,
                            const MarkovConditionalSpec& spec,
                            std::mt19937_64& eng, long sweeps,
                            const Configuration& init);
Configuration sample_markov(const Window& window,
                            const MarkovConditionalSpec& spec,
                            std::uint64_t seed, long sweeps,
                            const Configuration& init);

/// Model spec files: flat key-value text. `model = bernoulli` with `p = ...`
/// (or `probs = ...` for q > 2), or `model = markov_table` with `q`, `d` and
/// one `row <counts> = <probs>` entry per neighbour multiset.
ModelSpec parse_model_text(const std::string& text);
ModelSpec read_model_file(const std::string& path);
std::string model_to_text(const ModelSpec& spec);

}  // namespace percolab
