#include "percolab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "percolab/numeric.hpp"
#include "percolab/textio.hpp"

namespace percolab {

namespace {

void require_consecutive_positive(const std::vector<TailPoint>& tail,
                                  const char* what) {
    if (tail.empty()) throw std::invalid_argument(std::string(what) + ": empty tail");
    for (std::size_t i = 0; i < tail.size(); ++i) {
        if (!(tail[i].c > 0)) {
            throw std::invalid_argument(std::string(what) +
                                        ": tail entries must be positive");
        }
        if (i > 0 && tail[i].n != tail[i - 1].n + 1) {
            throw std::invalid_argument(std::string(what) +
                                        ": tail sizes must be consecutive");
        }
    }
}

}  // namespace

MuEstimates estimate_mu(const std::vector<TailPoint>& tail) {
    require_consecutive_positive(tail, "estimate_mu");
    const std::size_t m = tail.size();
    MuEstimates est;
    est.n.resize(m);
    est.root.resize(m);
    est.ratio.assign(m, std::numeric_limits<double>::quiet_NaN());
    est.ratio_se.assign(m, 0.0);
    est.p_completed.resize(m + 1);

    for (std::size_t i = 0; i < m; ++i) {
        est.n[i] = tail[i].n;
        est.root[i] = std::pow(tail[i].c, 1.0 / tail[i].n);
    }

    // Geometric completion of the suffix sums beyond the horizon.
    double beyond = 0.0;
    if (m >= 2) {
        const double rho = tail[m - 1].c / tail[m - 2].c;
        if (rho > 0 && rho < 1) {
            beyond = tail[m - 1].c * rho / (1.0 - rho);
            est.completion_applied = true;
        }
    }
    est.p_completed[m] = beyond;
    for (std::size_t i = m; i-- > 0;) {
        est.p_completed[i] = est.p_completed[i + 1] + tail[i].c;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (est.p_completed[i] > 0 && est.p_completed[i + 1] > 0) {
            est.ratio[i] = est.p_completed[i + 1] / est.p_completed[i];
        }
        // Normal propagation: p_n = c_n + p_{n+1}, treating the per-n
        // estimates as independent.
        if (tail[i].se > 0) {
            double var_tail = 0;
            for (std::size_t k = i + 1; k < m; ++k) {
                var_tail += tail[k].se * tail[k].se;
            }
            const double r = est.ratio[i];
            const double pn = est.p_completed[i];
            if (pn > 0 && std::isfinite(r)) {
                const double var =
                    (r * r * tail[i].se * tail[i].se + (1 - r) * (1 - r) * var_tail) /
                    (pn * pn);
                est.ratio_se[i] = std::sqrt(var);
            }
        }
    }
    return est;
}

StretchedFit fit_stretched(const std::vector<TailPoint>& tail) {
    require_consecutive_positive(tail, "fit_stretched");
    if (tail.size() < 5) {
        throw std::invalid_argument("fit_stretched: need at least 5 points");
    }
    std::vector<double> x, y;
    for (const TailPoint& pt : tail) {
        if (!(pt.c < 1.0)) {
            throw std::invalid_argument("fit_stretched: tail values must be < 1");
        }
        x.push_back(std::log(static_cast<double>(pt.n)));
        y.push_back(std::log(-std::log(pt.c)));
    }
    const LineFit fit = least_squares(x, y);
    StretchedFit out;
    out.beta = fit.slope;
    out.nu = std::exp(-std::exp(fit.intercept));
    return out;
}

std::vector<ClusterPatternRecord> harvest_pattern_records(
    const Configuration& config, const ClusterLabeling& labeling,
    const Pattern& p, const Pattern& p_prime) {
    const Window& w = config.window();
    const int clearance = p.r() + 2;
    const auto counts_p = count_occurrences_by_cluster(config, labeling, p);
    const auto counts_pp =
        count_occurrences_by_cluster(config, labeling, p_prime);

    std::vector<ClusterPatternRecord> records;
    for (std::size_t id = 0; id < labeling.clusters.size(); ++id) {
        const ClusterInfo& info = labeling.clusters[id];
        if (info.touches_boundary) continue;
        bool clear = true;
        for (int axis = 0; axis < w.dim(); ++axis) {
            if (info.bbox_lo[axis] - w.lo()[axis] < clearance ||
                w.hi()[axis] - 1 - info.bbox_hi[axis] < clearance) {
                clear = false;
                break;
            }
        }
        if (!clear) continue;
        ClusterPatternRecord rec;
        rec.size = info.size;
        const auto ip = counts_p.find(static_cast<std::int32_t>(id));
        const auto ipp = counts_pp.find(static_cast<std::int32_t>(id));
        rec.n_p = ip == counts_p.end() ? 0 : ip->second;
        rec.n_p_prime = ipp == counts_pp.end() ? 0 : ipp->second;
        records.push_back(rec);
    }
    return records;
}

std::vector<double> geometric_bin_edges(double lo, double hi, double factor) {
    if (!(lo > 0) || !(hi > lo) || !(factor > 1)) {
        throw std::invalid_argument("geometric_bin_edges: need 0 < lo < hi, factor > 1");
    }
    std::vector<double> edges{lo};
    double e = lo;
    while (e * factor < hi) {
        e *= factor;
        edges.push_back(e);
    }
    edges.push_back(hi);
    return edges;
}

ConcentrationReport conditional_pattern_stats(
    const std::vector<ClusterPatternRecord>& records,
    const std::vector<double>& bin_edges, double gamma_ref) {
    if (bin_edges.size() < 2) {
        throw std::invalid_argument("conditional_pattern_stats: need >= 2 bin edges");
    }
    ConcentrationReport report;
    report.gamma_ref = gamma_ref;
    const std::size_t nbins = bin_edges.size() - 1;

    struct Acc {
        long count = 0;
        double sum_size = 0, sum_np = 0, sum_npp = 0;
        double sum_np2 = 0, sum_npp2 = 0;
        double sum_ratio = 0;
        long ratio_n = 0, ratio_excluded = 0;
    };
    std::vector<Acc> acc(nbins);

    for (const ClusterPatternRecord& rec : records) {
        const double s = static_cast<double>(rec.size);
        if (s < bin_edges.front() || s >= bin_edges.back()) continue;
        std::size_t b =
            static_cast<std::size_t>(std::upper_bound(bin_edges.begin(),
                                                      bin_edges.end(), s) -
                                     bin_edges.begin()) -
            1;
        if (b >= nbins) b = nbins - 1;
        Acc& a = acc[b];
        ++a.count;
        a.sum_size += s;
        a.sum_np += static_cast<double>(rec.n_p);
        a.sum_npp += static_cast<double>(rec.n_p_prime);
        a.sum_np2 += static_cast<double>(rec.n_p) * rec.n_p;
        a.sum_npp2 += static_cast<double>(rec.n_p_prime) * rec.n_p_prime;
        if (rec.n_p_prime > 0) {
            a.sum_ratio += static_cast<double>(rec.n_p) / rec.n_p_prime;
            ++a.ratio_n;
        } else {
            ++a.ratio_excluded;
        }
    }

    for (std::size_t b = 0; b < nbins; ++b) {
        const Acc& a = acc[b];
        ConcentrationBin bin;
        bin.lo = bin_edges[b];
        bin.hi = bin_edges[b + 1];
        bin.count = a.count;
        if (a.count > 0) {
            const double n = static_cast<double>(a.count);
            bin.mean_size = a.sum_size / n;
            bin.mean_np = a.sum_np / n;
            bin.mean_npp = a.sum_npp / n;
            bin.var_np = std::max(0.0, a.sum_np2 / n - bin.mean_np * bin.mean_np);
            bin.var_npp =
                std::max(0.0, a.sum_npp2 / n - bin.mean_npp * bin.mean_npp);
            bin.mean_ratio = a.ratio_n > 0 ? a.sum_ratio / a.ratio_n : 0.0;
            bin.ratio_excluded = a.ratio_excluded;
            bin.ratio_of_means = a.sum_npp > 0 ? a.sum_np / a.sum_npp : 0.0;
        }
        report.bins.push_back(bin);
    }
    return report;
}

PatternTheoremReport pattern_theorem_report(
    const std::vector<ClusterPatternRecord>& records,
    const std::vector<double>& bin_edges, const std::vector<double>& a_grid) {
    if (bin_edges.size() < 2) {
        throw std::invalid_argument("pattern_theorem_report: need >= 2 bin edges");
    }
    PatternTheoremReport report;
    report.a_grid = a_grid;
    const std::size_t nbins = bin_edges.size() - 1;
    std::vector<std::vector<long>> hits(nbins,
                                        std::vector<long>(a_grid.size(), 0));
    std::vector<long> totals(nbins, 0);
    for (const ClusterPatternRecord& rec : records) {
        const double s = static_cast<double>(rec.size);
        if (s < bin_edges.front() || s >= bin_edges.back()) continue;
        std::size_t b =
            static_cast<std::size_t>(std::upper_bound(bin_edges.begin(),
                                                      bin_edges.end(), s) -
                                     bin_edges.begin()) -
            1;
        if (b >= nbins) b = nbins - 1;
        ++totals[b];
        for (std::size_t k = 0; k < a_grid.size(); ++k) {
            if (static_cast<double>(rec.n_p) <= a_grid[k] * s) ++hits[b][k];
        }
    }
    for (std::size_t b = 0; b < nbins; ++b) {
        report.bin_lo.push_back(bin_edges[b]);
        report.bin_hi.push_back(bin_edges[b + 1]);
        report.bin_count.push_back(totals[b]);
        std::vector<double> fr(a_grid.size(), 0.0);
        for (std::size_t k = 0; k < a_grid.size(); ++k) {
            if (totals[b] > 0) {
                fr[k] = static_cast<double>(hits[b][k]) /
                        static_cast<double>(totals[b]);
            }
        }
        report.fraction.push_back(std::move(fr));
    }
    return report;
}

RatioLimitReport ratio_limit_report(const std::vector<TailPoint>& tail,
                                    std::optional<double> beta) {
    const MuEstimates mu = estimate_mu(tail);
    RatioLimitReport report;
    report.mu_ref = mu.ratio_last();
    report.beta = beta;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        RatioLimitRow row;
        row.n = tail[i].n;
        row.c_ratio = (i + 1 < tail.size())
                          ? tail[i + 1].c / tail[i].c
                          : std::numeric_limits<double>::quiet_NaN();
        row.p_ratio = mu.ratio[i];
        row.dev_from_mu = std::isfinite(row.c_ratio)
                              ? std::abs(row.c_ratio - report.mu_ref)
                              : std::numeric_limits<double>::quiet_NaN();
        row.route_gap = std::isfinite(row.c_ratio)
                            ? std::abs(row.c_ratio - row.p_ratio)
                            : std::numeric_limits<double>::quiet_NaN();
        if (beta && std::isfinite(row.c_ratio)) {
            row.strengthened = std::pow(static_cast<double>(row.n),
                                        (1.0 - *beta) / 2.0) *
                               std::abs(row.c_ratio - 1.0);
        }
        report.rows.push_back(row);
    }
    return report;
}

std::vector<TailPoint> mc_tail_from_censuses(
    const std::vector<SizeCensus>& censuses, double region_sites, int n_max) {
    if (censuses.empty()) {
        throw std::invalid_argument("mc_tail_from_censuses: no censuses");
    }
    if (!(region_sites > 0)) {
        throw std::invalid_argument("mc_tail_from_censuses: empty census region");
    }
    const double m = static_cast<double>(censuses.size());
    std::vector<TailPoint> tail;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<double> per_rep(censuses.size(), 0.0);
        long total_clusters = 0;
        for (std::size_t k = 0; k < censuses.size(); ++k) {
            const auto it = censuses[k].counts.find(n);
            const long cnt = it == censuses[k].counts.end() ? 0 : it->second;
            total_clusters += cnt;
            per_rep[k] = static_cast<double>(n) * static_cast<double>(cnt) /
                         region_sites;
        }
        TailPoint pt;
        pt.n = n;
        pt.c = sample_mean(per_rep);
        pt.se = censuses.size() > 1 ? sample_stddev(per_rep) / std::sqrt(m) : 0.0;
        pt.clusters = total_clusters;
        tail.push_back(pt);
    }
    return tail;
}

int largest_reliable_n(const std::vector<TailPoint>& tail, long min_clusters) {
    int best = 0;
    for (const TailPoint& pt : tail) {
        if (pt.clusters >= min_clusters && pt.c > 0) best = std::max(best, pt.n);
    }
    if (best == 0) {
        throw std::runtime_error(
            "largest_reliable_n: no size reaches the cluster-count threshold");
    }
    return best;
}

std::string tail_to_csv(const std::vector<TailPoint>& tail) {
    CsvBuilder csv({"n", "c", "se", "clusters"});
    for (const TailPoint& pt : tail) {
        csv.add_row({std::to_string(pt.n), format_double(pt.c),
                     format_double(pt.se), std::to_string(pt.clusters)});
    }
    return csv.str();
}

std::vector<TailPoint> tail_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("tail csv: empty file");
    }
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    const auto header = split(line);
    int n_col = -1, c_col = -1, se_col = -1, clusters_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "n") n_col = static_cast<int>(i);
        if (header[i] == "c" || header[i] == "c_n") c_col = static_cast<int>(i);
        if (header[i] == "se") se_col = static_cast<int>(i);
        if (header[i] == "clusters") clusters_col = static_cast<int>(i);
    }
    if (n_col < 0 || c_col < 0) {
        throw std::runtime_error("tail csv: need columns n and c (or c_n)");
    }
    std::vector<TailPoint> tail;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        TailPoint pt;
        const auto n = parse_int(cells.at(n_col));
        const auto c = parse_double(cells.at(c_col));
        if (!n || !c) throw std::runtime_error("tail csv: malformed row");
        pt.n = static_cast<int>(*n);
        pt.c = *c;
        if (se_col >= 0 && se_col < static_cast<int>(cells.size())) {
            pt.se = parse_double(cells[se_col]).value_or(0.0);
        }
        if (clusters_col >= 0 && clusters_col < static_cast<int>(cells.size())) {
            pt.clusters = parse_int(cells[clusters_col]).value_or(0);
        }
        tail.push_back(pt);
    }
    return tail;
}

std::string concentration_to_csv(const ConcentrationReport& report) {
    CsvBuilder csv({"bin_lo", "bin_hi", "count", "mean_size", "mean_np",
                    "var_np", "mean_npp", "var_npp", "mean_ratio",
                    "ratio_excluded", "ratio_of_means", "gamma_ref"});
    for (const ConcentrationBin& b : report.bins) {
        csv.add_row({format_double(b.lo), format_double(b.hi),
                     std::to_string(b.count), format_double(b.mean_size),
                     format_double(b.mean_np), format_double(b.var_np),
                     format_double(b.mean_npp), format_double(b.var_npp),
                     format_double(b.mean_ratio),
                     std::to_string(b.ratio_excluded),
                     format_double(b.ratio_of_means),
                     format_double(report.gamma_ref)});
    }
    return csv.str();
}

std::string pattern_theorem_to_csv(const PatternTheoremReport& report) {
    CsvBuilder csv({"bin_lo", "bin_hi", "count", "a", "fraction_le"});
    for (std::size_t b = 0; b < report.bin_lo.size(); ++b) {
        for (std::size_t k = 0; k < report.a_grid.size(); ++k) {
            csv.add_row({format_double(report.bin_lo[b]),
                         format_double(report.bin_hi[b]),
                         std::to_string(report.bin_count[b]),
                         format_double(report.a_grid[k]),
                         format_double(report.fraction[b][k])});
        }
    }
    return csv.str();
}

std::string ratio_limit_to_csv(const RatioLimitReport& report) {
    CsvBuilder csv({"n", "c_ratio", "p_ratio", "dev_from_mu", "route_gap",
                    "strengthened"});
    for (const RatioLimitRow& row : report.rows) {
        csv.add_row({std::to_string(row.n), format_double(row.c_ratio),
                     format_double(row.p_ratio), format_double(row.dev_from_mu),
                     format_double(row.route_gap),
                     format_double(row.strengthened)});
    }
    return csv.str();
}

}  // namespace percolab
