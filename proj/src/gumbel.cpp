#include "percolab/gumbel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "percolab/parallel.hpp"
#include "percolab/textio.hpp"

namespace percolab {

MaxClusterSample simulate_max_clusters(double p, int box_half_width,
                                       int margin, long replicates,
                                       std::uint64_t seed, MaxClusterMode mode,
                                       int d, int workers) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("simulate_max_clusters: p outside [0, 1]");
    }
    if (box_half_width < 0 || margin < 0) {
        throw std::invalid_argument(
            "simulate_max_clusters: box_half_width and margin must be >= 0");
    }
    if (replicates < 1) {
        throw std::invalid_argument("simulate_max_clusters: replicates >= 1");
    }
    const Window window = Window::centered_box(d, box_half_width + margin, 2);
    constexpr std::size_t kMaxSites = std::size_t{1} << 28;
    if (window.site_count() > kMaxSites) {
        throw std::invalid_argument(
            "simulate_max_clusters: box exceeds the memory budget");
    }

    MaxClusterSample sample;
    sample.p = p;
    sample.box_half_width = box_half_width;
    sample.margin = margin;
    sample.d = d;
    sample.mode = mode;
    sample.seed = seed;
    sample.values.assign(static_cast<std::size_t>(replicates), 0);

    Region box;
    box.lo = Coords(d, -box_half_width);
    box.hi = Coords(d, box_half_width + 1);

    const RngPolicy policy(seed);
    const ProductMeasureSpec spec = ProductMeasureSpec::bernoulli(p);
    parallel_for_indexed(
        static_cast<std::size_t>(replicates), workers, [&](std::size_t rep) {
            auto eng = policy.stream(rep);
            const Configuration config = sample_product(window, spec, eng);
            sample.values[rep] = max_cluster_size(config, box, mode);
        });
    return sample;
}

CenteringChoice choose_un(const std::vector<int>& n_values,
                          const std::vector<double>& p_tail,
                          double box_sites) {
    if (n_values.size() != p_tail.size() || n_values.empty()) {
        throw std::invalid_argument("choose_un: mismatched or empty tail");
    }
    if (!(box_sites >= 1)) {
        throw std::invalid_argument("choose_un: box must contain sites");
    }
    CenteringChoice choice;
    bool found = false;
    bool any_below = false;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (!(p_tail[i] >= 0)) {
            throw std::invalid_argument("choose_un: negative tail entry");
        }
        if (box_sites * p_tail[i] >= 1.0) {
            choice.u_n = n_values[i];
            found = true;
        } else {
            any_below = true;
        }
    }
    if (!found) {
        throw std::runtime_error(
            "choose_un: tail range insufficient (box_sites * p_k < 1 throughout)");
    }
    if (!any_below) {
        // The expected exceedance count never drops below one inside the
        // available range; report the range maximum and flag it.
        choice.flagged = true;
    }
    return choice;
}

GumbelReport gumbel_compare(const std::vector<long>& values, int u_n,
                            double mu) {
    if (values.empty()) {
        throw std::invalid_argument("gumbel_compare: empty sample");
    }
    if (!(mu > 0.0) || !(mu < 1.0)) {
        throw std::invalid_argument("gumbel_compare: mu must lie in (0, 1)");
    }
    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    if (*min_it == *max_it) {
        throw std::invalid_argument("gumbel_compare: degenerate (constant) sample");
    }

    // Empirical CDF on integers.
    std::map<long, long> counts;
    for (long v : values) ++counts[v];
    const double total = static_cast<double>(values.size());
    std::vector<long> support;
    std::vector<double> cdf;
    double running = 0;
    for (const auto& [v, cnt] : counts) {
        running += static_cast<double>(cnt);
        support.push_back(v);
        cdf.push_back(running / total);
    }

    GumbelReport report;
    report.u_n = u_n;
    report.mu = mu;

    const double log_mu = std::log(mu);
    double sum_log_a = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const double f = cdf[i];
        if (!(f > 0.0) || !(f < 1.0)) continue;
        const int x = static_cast<int>(support[i] - u_n);
        const double log_a = std::log(-std::log(f)) - x * log_mu;
        report.offsets.push_back(x);
        report.a_per_offset.push_back(std::exp(log_a));
        sum_log_a += log_a;
        ++report.usable_offsets;
    }
    if (report.usable_offsets < 3) {
        throw std::runtime_error("gumbel_compare: fewer than 3 usable offsets");
    }
    report.a_n = std::exp(sum_log_a / static_cast<double>(report.usable_offsets));

    // Sup distance between the empirical CDF and the fitted curve, evaluated
    // over the sample support padded by one step on each side.
    double sup = 0;
    auto fitted = [&](long v) {
        const double x = static_cast<double>(v - u_n);
        return std::exp(-report.a_n * std::pow(mu, x));
    };
    auto empirical = [&](long v) {
        // rightmost support point <= v
        auto it = std::upper_bound(support.begin(), support.end(), v);
        if (it == support.begin()) return 0.0;
        return cdf[static_cast<std::size_t>(it - support.begin()) - 1];
    };
    for (long v = support.front() - 1; v <= support.back() + 1; ++v) {
        sup = std::max(sup, std::abs(empirical(v) - fitted(v)));
    }
    report.sup_distance = sup;
    return report;
}

std::string max_cluster_sample_to_csv(const MaxClusterSample& sample) {
    CsvBuilder csv({"replicate", "value"});
    for (std::size_t i = 0; i < sample.values.size(); ++i) {
        csv.add_row({std::to_string(i), std::to_string(sample.values[i])});
    }
    return csv.str();
}

}  // namespace percolab
