#include "percolab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "percolab/clusters.hpp"
#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"
#include "percolab/gumbel.hpp"
#include "percolab/parallel.hpp"
#include "percolab/patterns.hpp"
#include "percolab/rng.hpp"
#include "percolab/sampler.hpp"
#include "percolab/textio.hpp"
#include "percolab/version.hpp"

namespace percolab {

namespace {

using nlohmann::json;

// Identity tolerances for the verify kind.
constexpr double kSwapIdentityTol = 1e-10;
constexpr double kLeftEndpointIdentityTol = 1e-12;

const std::vector<std::string> kKnownKinds = {
    "sample", "census", "patterns", "exact", "verify", "estimate", "gumbel"};

struct Artifact {
    std::string name;
    std::string content;
};

std::vector<std::string> list_values(const ExperimentConfig& cfg,
                                     const std::string& key) {
    std::vector<std::string> out;
    auto [lo, hi] = cfg.values.equal_range(key);
    for (auto it = lo; it != hi; ++it) out.push_back(it->second);
    return out;
}

// ---------------------------------------------------------------------------
// validation helpers

class Validator {
public:
    explicit Validator(const ExperimentConfig& cfg) : cfg_(cfg) {}

    std::vector<Diagnostic> take() { return std::move(diags_); }

    void fail(const std::string& field, const std::string& message) {
        diags_.push_back({field, message});
    }

    std::optional<long long> opt_int(const std::string& key, long long lo,
                                     long long hi) {
        const auto raw = cfg_.get(key);
        if (!raw) return std::nullopt;
        const auto v = parse_int(*raw);
        if (!v || *v < lo || *v > hi) {
            fail(key, "expected integer in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "], got '" + *raw + "'");
            return std::nullopt;
        }
        return v;
    }

    long long int_or(const std::string& key, long long fallback, long long lo,
                     long long hi) {
        return opt_int(key, lo, hi).value_or(fallback);
    }

    std::optional<long long> req_int(const std::string& key, long long lo,
                                     long long hi) {
        if (!cfg_.get(key)) {
            fail(key, "required field is missing");
            return std::nullopt;
        }
        return opt_int(key, lo, hi);
    }

    std::optional<double> opt_double(const std::string& key, double lo,
                                     double hi) {
        const auto raw = cfg_.get(key);
        if (!raw) return std::nullopt;
        const auto v = parse_double(*raw);
        if (!v || *v < lo || *v > hi) {
            fail(key, "expected number in [" + format_double(lo) + ", " +
                          format_double(hi) + "], got '" + *raw + "'");
            return std::nullopt;
        }
        return v;
    }

    std::optional<double> req_double(const std::string& key, double lo,
                                     double hi) {
        if (!cfg_.get(key)) {
            fail(key, "required field is missing");
            return std::nullopt;
        }
        return opt_double(key, lo, hi);
    }

    std::optional<std::string> req_file(const std::string& key) {
        const auto raw = cfg_.get(key);
        if (!raw) {
            fail(key, "required field is missing");
            return std::nullopt;
        }
        const std::string path = cfg_.resolve_path(*raw);
        if (!std::filesystem::exists(path)) {
            fail(key, "file not found: " + path);
            return std::nullopt;
        }
        return path;
    }

    const ExperimentConfig& cfg_;
    std::vector<Diagnostic> diags_;
};

std::optional<std::vector<double>> parse_double_list(const std::string& raw) {
    std::vector<double> out;
    for (const auto& tok : split_fields(raw)) {
        const auto v = parse_double(tok);
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

std::optional<std::vector<long long>> parse_int_list(const std::string& raw) {
    std::vector<long long> out;
    for (const auto& tok : split_fields(raw)) {
        const auto v = parse_int(tok);
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

// ---------------------------------------------------------------------------
// shared runtime pieces

Window window_from_config(const ExperimentConfig& cfg, int q) {
    const int d =
        static_cast<int>(parse_int(cfg.get_or("geometry.d", "2")).value_or(2));
    const auto size_raw = cfg.get("geometry.size");
    if (!size_raw) throw std::runtime_error("geometry.size missing");
    const auto sizes = parse_int_list(*size_raw);
    if (!sizes || static_cast<int>(sizes->size()) != d) {
        throw std::runtime_error("geometry.size needs d positive extents");
    }
    Coords size;
    for (long long v : *sizes) size.push_back(static_cast<int>(v));
    return Window::sized(size, q);
}

int model_states(const ModelSpec& model) {
    if (const auto* prod = std::get_if<ProductMeasureSpec>(&model)) {
        return prod->q;
    }
    return std::get<MarkovConditionalSpec>(model).q;
}

Configuration sample_one(const ModelSpec& model, const Window& window,
                         const ExperimentConfig& cfg, std::mt19937_64& eng) {
    if (const auto* prod = std::get_if<ProductMeasureSpec>(&model)) {
        return sample_product(window, *prod, eng);
    }
    const auto& markov = std::get<MarkovConditionalSpec>(model);
    const long sweeps =
        parse_int(cfg.get_or("model.sweeps", "0")).value_or(0);
    const std::string init_kind = cfg.get_or("model.init", "zero");
    Configuration init(window);
    if (init_kind.rfind("product:", 0) == 0) {
        const double p = parse_double(init_kind.substr(8)).value_or(0.5);
        init = sample_product(window, ProductMeasureSpec::bernoulli(p), eng);
    }
    return sample_markov(window, markov, eng, sweeps, init);
}

json manifest_json(const ExperimentConfig& cfg, std::uint64_t seed, int workers,
                   const std::vector<std::string>& inputs,
                   const std::vector<Artifact>& artifacts, double wall_s) {
    json m;
    m["tool"] = "percolab";
    m["version"] = kVersion;
    m["kind"] = cfg.kind;
    m["config"] = cfg.path;
    m["seed"] = seed;
    m["workers"] = workers;
    m["inputs"] = inputs;
    std::vector<std::string> outputs;
    for (const auto& a : artifacts) outputs.push_back(a.name);
    m["outputs"] = outputs;
    m["wall_time_s"] = wall_s;
    return m;
}

struct RunContext {
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir;
    std::vector<std::string> inputs;
    std::vector<Artifact> artifacts;
};

// ---------------------------------------------------------------------------
// kind: sample

void run_sample(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::string model_path = cfg.resolve_path(*cfg.get("model.file"));
    const ModelSpec model = read_model_file(model_path);
    ctx.inputs.push_back(model_path);
    const Window window = window_from_config(cfg, model_states(model));
    const long replicates =
        parse_int(cfg.get_or("sample.replicates", "1")).value_or(1);
    const bool export_csv = cfg.get_or("sample.export_csv", "false") == "true";
    const bool diag = cfg.get_or("sample.diag", "false") == "true";

    const RngPolicy policy(ctx.seed);
    std::vector<Configuration> configs;
    configs.reserve(static_cast<std::size_t>(replicates));
    for (long rep = 0; rep < replicates; ++rep) {
        auto eng = policy.stream(static_cast<std::uint64_t>(rep));
        configs.push_back(sample_one(model, window, cfg, eng));
    }
    for (long rep = 0; rep < replicates; ++rep) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%04ld.txt", rep);
        ctx.artifacts.push_back({name, snapshot_to_text(configs[rep])});
        if (export_csv) {
            std::snprintf(name, sizeof(name), "snapshot_%04ld.csv", rep);
            ctx.artifacts.push_back({name, configuration_to_csv(configs[rep])});
        }
    }

    if (diag && std::holds_alternative<MarkovConditionalSpec>(model)) {
        // Sweep-by-sweep occupied fraction on one replicate, as an
        // equilibration aid; equilibration itself stays the caller's call.
        const auto& markov = std::get<MarkovConditionalSpec>(model);
        const long sweeps = parse_int(cfg.get_or("model.sweeps", "0")).value_or(0);
        auto eng = policy.stream(0);
        const std::string init_kind = cfg.get_or("model.init", "zero");
        Configuration state(window);
        if (init_kind.rfind("product:", 0) == 0) {
            const double p = parse_double(init_kind.substr(8)).value_or(0.5);
            state = sample_product(window, ProductMeasureSpec::bernoulli(p), eng);
        }
        CsvBuilder csv({"sweep", "occupied_fraction"});
        for (long s = 0; s <= sweeps; ++s) {
            const double frac = static_cast<double>(state.occupied_count()) /
                                static_cast<double>(state.site_count());
            csv.add_row({std::to_string(s), format_double(frac)});
            if (s < sweeps) state = sample_markov(window, markov, eng, 1, state);
        }
        ctx.artifacts.push_back({"equilibration.csv", csv.str()});
    }

    json summary;
    summary["kind"] = "sample";
    summary["replicates"] = replicates;
    summary["sites"] = window.site_count();
    double occ = 0;
    for (const auto& c : configs) occ += static_cast<double>(c.occupied_count());
    summary["mean_occupied_fraction"] =
        occ / (static_cast<double>(replicates) *
               static_cast<double>(window.site_count()));
    ctx.artifacts.push_back({"summary.json", summary.dump(2) + "\n"});
}

// ---------------------------------------------------------------------------
// kind: census

void run_census(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::string model_path = cfg.resolve_path(*cfg.get("model.file"));
    const ModelSpec model = read_model_file(model_path);
    ctx.inputs.push_back(model_path);
    const Window window = window_from_config(cfg, model_states(model));
    const long replicates =
        parse_int(cfg.get_or("census.replicates", "1")).value_or(1);
    const int margin =
        static_cast<int>(parse_int(cfg.get_or("census.margin", "12")).value_or(12));
    const int n_max =
        static_cast<int>(parse_int(cfg.get_or("census.n_max", "64")).value_or(64));

    const Region region = shrunk_region(window, margin);
    if (region.empty()) throw std::runtime_error("census: margin empties the window");
    double region_sites = 1;
    for (int i = 0; i < window.dim(); ++i) {
        region_sites *= static_cast<double>(region.hi[i] - region.lo[i]);
    }

    const RngPolicy policy(ctx.seed);
    std::vector<SizeCensus> censuses(static_cast<std::size_t>(replicates));
    parallel_for_indexed(
        static_cast<std::size_t>(replicates), ctx.workers, [&](std::size_t rep) {
            auto eng = policy.stream(rep);
            const Configuration config = sample_one(model, window, cfg, eng);
            const ClusterLabeling labeling = extract_clusters(config);
            censuses[rep] = size_census(window, labeling, region);
        });

    SizeCensus merged;
    for (const SizeCensus& c : censuses) {
        for (const auto& [size, cnt] : c.counts) merged.counts[size] += cnt;
        for (const auto& [size, cnt] : c.boundary_touching) {
            merged.boundary_touching[size] += cnt;
        }
    }
    const auto tail = mc_tail_from_censuses(censuses, region_sites, n_max);

    ctx.artifacts.push_back({"census.csv", census_to_csv(merged)});
    ctx.artifacts.push_back({"tail.csv", tail_to_csv(tail)});

    json summary;
    summary["kind"] = "census";
    summary["replicates"] = replicates;
    summary["margin"] = margin;
    summary["n_max"] = n_max;
    summary["region_sites"] = region_sites;
    summary["boundary_touching_total"] = merged.boundary_touching_total();
    ctx.artifacts.push_back({"summary.json", summary.dump(2) + "\n"});
}

// ---------------------------------------------------------------------------
// kind: patterns

void run_patterns(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::string model_path = cfg.resolve_path(*cfg.get("model.file"));
    const ModelSpec model = read_model_file(model_path);
    ctx.inputs.push_back(model_path);
    const auto* prod = std::get_if<ProductMeasureSpec>(&model);
    if (!prod) throw std::runtime_error("patterns: model must be a product measure");

    const Window window = window_from_config(cfg, prod->q);
    const std::string p_path = cfg.resolve_path(*cfg.get("patterns.pattern"));
    const std::string pp_path =
        cfg.resolve_path(*cfg.get("patterns.pattern_prime"));
    const Pattern pat = read_pattern_file(p_path, prod->q);
    const Pattern pat_prime = read_pattern_file(pp_path, prod->q);
    ctx.inputs.push_back(p_path);
    ctx.inputs.push_back(pp_path);

    double mu = 1.0;
    if (const auto mu_raw = cfg.get("patterns.mu")) {
        mu = parse_double(*mu_raw).value();
    } else if (const auto tail_raw = cfg.get("patterns.mu_tail")) {
        const std::string tail_path = cfg.resolve_path(*tail_raw);
        ctx.inputs.push_back(tail_path);
        auto tail = tail_from_csv(read_text_file(tail_path));
        const long min_clusters =
            parse_int(cfg.get_or("patterns.min_clusters", "200")).value_or(200);
        const int n_star = largest_reliable_n(tail, min_clusters);
        tail.resize(static_cast<std::size_t>(n_star));
        mu = estimate_mu(tail).ratio_last();
    }

    const long replicates =
        parse_int(cfg.get_or("patterns.replicates", "1")).value_or(1);
    const double bin_lo =
        parse_double(cfg.get_or("patterns.bin_lo", "200")).value();
    const double bin_hi =
        parse_double(cfg.get_or("patterns.bin_hi", "2000")).value();
    const double bin_factor =
        parse_double(cfg.get_or("patterns.bin_factor", "1.4142135623730951"))
            .value();
    std::vector<double> a_grid{0,   0.01, 0.02, 0.03, 0.04, 0.05,
                               0.06, 0.08, 0.1,  0.15, 0.2};
    if (const auto a_raw = cfg.get("patterns.a_grid")) {
        a_grid = parse_double_list(*a_raw).value();
    }

    const RngPolicy policy(ctx.seed);
    std::vector<std::vector<ClusterPatternRecord>> per_rep(
        static_cast<std::size_t>(replicates));
    parallel_for_indexed(
        static_cast<std::size_t>(replicates), ctx.workers, [&](std::size_t rep) {
            auto eng = policy.stream(rep);
            const Configuration config = sample_product(window, *prod, eng);
            const ClusterLabeling labeling = extract_clusters(config);
            per_rep[rep] =
                harvest_pattern_records(config, labeling, pat, pat_prime);
        });
    std::vector<ClusterPatternRecord> records;
    for (const auto& r : per_rep) {
        records.insert(records.end(), r.begin(), r.end());
    }

    const PatternPairContext pair_ctx =
        make_pair_context(pat, pat_prime, mu, prod->probs);
    const auto edges = geometric_bin_edges(bin_lo, bin_hi, bin_factor);
    const ConcentrationReport conc =
        conditional_pattern_stats(records, edges, pair_ctx.gamma);
    const PatternTheoremReport theorem =
        pattern_theorem_report(records, edges, a_grid);

    ctx.artifacts.push_back({"concentration.csv", concentration_to_csv(conc)});
    ctx.artifacts.push_back(
        {"pattern_theorem.csv", pattern_theorem_to_csv(theorem)});

    json summary;
    summary["kind"] = "patterns";
    summary["replicates"] = replicates;
    summary["harvested_clusters"] = records.size();
    summary["mu"] = mu;
    summary["gamma_ref"] = pair_ctx.gamma;
    summary["c_p"] = pair_ctx.c_p;
    summary["c_p_prime"] = pair_ctx.c_p_prime;
    summary["delta_c"] = pair_ctx.delta_c;
    summary["box_p"] = pair_ctx.box_p;
    summary["box_p_prime"] = pair_ctx.box_p_prime;
    json bins = json::array();
    for (const auto& b : conc.bins) {
        bins.push_back({{"lo", b.lo},
                        {"hi", b.hi},
                        {"count", b.count},
                        {"ratio_of_means", b.ratio_of_means}});
    }
    summary["bins"] = bins;
    ctx.artifacts.push_back({"summary.json", summary.dump(2) + "\n"});
}

// ---------------------------------------------------------------------------
// kind: exact

void run_exact(const ExperimentConfig& cfg, RunContext& ctx) {
    const auto p_list = parse_double_list(*cfg.get("exact.p_list")).value();
    const int n_max = static_cast<int>(parse_int(cfg.get_or("exact.n_max", "10"))
                                           .value_or(10));
    const int budget = static_cast<int>(
        parse_int(cfg.get_or("exact.budget",
                             std::to_string(kAnimalBudgetDefault)))
            .value_or(kAnimalBudgetDefault));

    const TailPolynomial poly = tail_polynomial(n_max, budget);
    json summary;
    summary["kind"] = "exact";
    summary["n_max"] = n_max;
    json per_p = json::array();
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        const ExactTail tail = evaluate_tail(poly, p_list[i]);
        char name[64];
        std::snprintf(name, sizeof(name), "exact_tail_p%zu.csv", i);
        ctx.artifacts.push_back({name, exact_tail_to_csv(tail)});
        const SupermultiCheck super = verify_supermulti(tail);
        per_p.push_back({{"p", p_list[i]},
                         {"identity_max_rel_error", tail.max_identity_rel_error},
                         {"supermulti_a_hat", super.a_hat}});
    }
    summary["tails"] = per_p;
    ctx.artifacts.push_back({"summary.json", summary.dump(2) + "\n"});
}

// ---------------------------------------------------------------------------
// kind: verify

void run_verify(const ExperimentConfig& cfg, RunContext& ctx) {
    const auto p_list = parse_double_list(*cfg.get("verify.p_list")).value();
    const int n_lo =
        static_cast<int>(parse_int(*cfg.get("verify.n_lo")).value());
    const int n_hi =
        static_cast<int>(parse_int(*cfg.get("verify.n_hi")).value());
    const int budget = static_cast<int>(
        parse_int(cfg.get_or("verify.budget",
                             std::to_string(kAnimalBudgetDefault)))
            .value_or(kAnimalBudgetDefault));
    const std::string p_path = cfg.resolve_path(*cfg.get("verify.pattern"));
    const std::string pp_path =
        cfg.resolve_path(*cfg.get("verify.pattern_prime"));
    const Pattern pat = read_pattern_file(p_path, 2);
    const Pattern pat_prime = read_pattern_file(pp_path, 2);
    ctx.inputs.push_back(p_path);
    ctx.inputs.push_back(pp_path);

    std::vector<int> sizes;
    for (int n = n_lo; n <= n_hi; ++n) sizes.push_back(n);
    const auto polys = joint_occurrence_polynomials(sizes, pat, pat_prime, budget);
    const TailPolynomial tail_poly = tail_polynomial(n_hi, budget);

    bool all_ok = true;
    json report;
    report["tolerances"] = {{"swap_identity", kSwapIdentityTol},
                            {"left_endpoint_identity", kLeftEndpointIdentityTol}};
    json per_p = json::array();
    for (const double p : p_list) {
        json entry;
        entry["p"] = p;
        const ExactTail tail = evaluate_tail(tail_poly, p);
        entry["left_endpoint_identity_rel_error"] = tail.max_identity_rel_error;
        entry["shift_counts_consistent"] = tail.shift_counts_consistent;
        const SupermultiCheck super = verify_supermulti(tail);
        entry["supermulti_a_hat"] = super.a_hat;
        bool ok = tail.max_identity_rel_error <= kLeftEndpointIdentityTol &&
                  tail.shift_counts_consistent && super.a_hat > 0;
        json swaps = json::array();
        for (int n = n_lo; n < n_hi; ++n) {
            const JointCountTable at_n = evaluate_joint(polys.at(n), p);
            const JointCountTable at_n1 = evaluate_joint(polys.at(n + 1), p);
            const SwapIdentityCheck check =
                verify_swap_identity(at_n, at_n1, pat, pat_prime);
            swaps.push_back({{"n", n},
                             {"max_rel_error", check.max_rel_error},
                             {"buckets", check.buckets_checked}});
            ok = ok && check.max_rel_error <= kSwapIdentityTol &&
                 check.buckets_checked > 0;
        }
        entry["swap_identity"] = swaps;
        entry["pass"] = ok;
        all_ok = all_ok && ok;
        per_p.push_back(entry);
    }
    report["results"] = per_p;
    report["pass"] = all_ok;
    ctx.artifacts.push_back({"verify.json", report.dump(2) + "\n"});
    if (!all_ok) {
        throw std::runtime_error("verify: identity checks exceeded tolerance");
    }
}

// ---------------------------------------------------------------------------
// kind: estimate

void run_estimate(const ExperimentConfig& cfg, RunContext& ctx) {
    const std::string tail_path = cfg.resolve_path(*cfg.get("estimate.tail"));
    ctx.inputs.push_back(tail_path);
    auto tail = tail_from_csv(read_text_file(tail_path));
    // Trim trailing non-positive estimates from Monte-Carlo tails.
    while (!tail.empty() && !(tail.back().c > 0)) tail.pop_back();

    const MuEstimates mu = estimate_mu(tail);
    CsvBuilder mu_csv({"n", "mu_root", "mu_ratio", "mu_ratio_se"});
    for (std::size_t i = 0; i < mu.n.size(); ++i) {
        mu_csv.add_row({std::to_string(mu.n[i]), format_double(mu.root[i]),
                        format_double(mu.ratio[i]),
                        format_double(mu.ratio_se[i])});
    }
    ctx.artifacts.push_back({"mu.csv", mu_csv.str()});

    std::optional<double> beta;
    if (const auto raw = cfg.get("estimate.beta")) beta = parse_double(*raw);
    const RatioLimitReport ratio = ratio_limit_report(tail, beta);
    ctx.artifacts.push_back({"ratio_limit.csv", ratio_limit_to_csv(ratio)});

    json summary;
    summary["kind"] = "estimate";
    summary["mu_root_last"] = mu.root_last();
    summary["mu_ratio_last"] = mu.ratio_last();
    if (cfg.get_or("estimate.fit", "none") == "stretched") {
        const StretchedFit fit = fit_stretched(tail);
        summary["beta_hat"] = fit.beta;
        summary["nu_hat"] = fit.nu;
    }
    ctx.artifacts.push_back({"summary.json", summary.dump(2) + "\n"});
}

// ---------------------------------------------------------------------------
// kind: gumbel

void run_gumbel(const ExperimentConfig& cfg, RunContext& ctx) {
    const double p = parse_double(*cfg.get("gumbel.p")).value();
    const auto boxes = parse_int_list(*cfg.get("gumbel.boxes")).value();
    const int margin = static_cast<int>(
        parse_int(cfg.get_or("gumbel.margin", "48")).value_or(48));
    const long replicates =
        parse_int(cfg.get_or("gumbel.replicates", "2000")).value_or(2000);
    const MaxClusterMode mode = cfg.get_or("gumbel.mode", "all") == "finite_only"
                                    ? MaxClusterMode::kFiniteOnly
                                    : MaxClusterMode::kAll;
    const std::string tail_path = cfg.resolve_path(*cfg.get("gumbel.tail"));
    ctx.inputs.push_back(tail_path);
    const long min_clusters =
        parse_int(cfg.get_or("gumbel.min_clusters", "200")).value_or(200);

    auto tail = tail_from_csv(read_text_file(tail_path));
    const int n_star = largest_reliable_n(tail, min_clusters);
    tail.resize(static_cast<std::size_t>(n_star));
    const MuEstimates mu_est = estimate_mu(tail);
    const double mu = mu_est.ratio_last();

    std::vector<int> n_values;
    std::vector<double> p_tail;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        n_values.push_back(tail[i].n);
        p_tail.push_back(mu_est.p_completed[i]);
    }

    json summary;
    summary["kind"] = "gumbel";
    summary["p"] = p;
    summary["mode"] = mode == MaxClusterMode::kAll ? "all" : "finite_only";
    summary["mu"] = mu;
    summary["seed"] = ctx.seed;
    json per_box = json::array();
    for (std::size_t bi = 0; bi < boxes.size(); ++bi) {
        const int half = static_cast<int>(boxes[bi]);
        const double box_sites = std::pow(2.0 * half + 1.0, 2);
        const CenteringChoice centering = choose_un(n_values, p_tail, box_sites);
        const MaxClusterSample sample = simulate_max_clusters(
            p, half, margin, replicates,
            ctx.seed + 1000003ULL * (bi + 1), mode, 2, ctx.workers);
        char name[64];
        std::snprintf(name, sizeof(name), "maxcluster_box%d.csv", half);
        ctx.artifacts.push_back({name, max_cluster_sample_to_csv(sample)});
        const GumbelReport report =
            gumbel_compare(sample.values, centering.u_n, mu);
        per_box.push_back({{"box_half_width", half},
                           {"u_n", centering.u_n},
                           {"u_n_flagged", centering.flagged},
                           {"a_n", report.a_n},
                           {"sup_distance", report.sup_distance},
                           {"usable_offsets", report.usable_offsets}});
    }
    summary["boxes"] = per_box;
    ctx.artifacts.push_back({"summary.json", summary.dump(2) + "\n"});
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<std::string> ExperimentConfig::get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    return it->second;
}

std::string ExperimentConfig::get_or(const std::string& key,
                                     const std::string& fallback) const {
    return get(key).value_or(fallback);
}

std::string ExperimentConfig::resolve_path(const std::string& relative) const {
    const std::filesystem::path p(relative);
    if (p.is_absolute() || base_dir.empty()) return relative;
    return (std::filesystem::path(base_dir) / p).string();
}

ExperimentConfig load_experiment_config(const std::string& path) {
    ExperimentConfig cfg;
    cfg.path = path;
    cfg.base_dir = std::filesystem::path(path).parent_path().string();
    const auto entries = parse_key_value_text(read_text_file(path));
    for (const auto& e : entries) {
        const std::string key =
            e.section.empty() ? e.key : e.section + "." + e.key;
        if (key == "kind") {
            cfg.kind = e.value;
        } else {
            cfg.values.emplace(key, e.value);
        }
    }
    return cfg;
}

std::vector<Diagnostic> validate_experiment(const ExperimentConfig& cfg) {
    Validator v(cfg);

    bool kind_known = false;
    for (const auto& k : kKnownKinds) kind_known = kind_known || k == cfg.kind;
    if (cfg.kind.empty()) {
        v.fail("kind", "required field is missing");
    } else if (!kind_known) {
        v.fail("kind", "unknown experiment kind '" + cfg.kind + "'");
    }

    v.opt_int("rng.seed", 0, std::numeric_limits<long long>::max());
    v.opt_int("run.workers", 1, 4096);

    const bool needs_model =
        cfg.kind == "sample" || cfg.kind == "census" || cfg.kind == "patterns";
    std::optional<ModelSpec> model;
    if (needs_model) {
        if (const auto path = v.req_file("model.file")) {
            try {
                model = read_model_file(*path);
            } catch (const std::exception& e) {
                v.fail("model.file", e.what());
            }
        }
        const int d = static_cast<int>(v.int_or("geometry.d", 2, 2, 4));
        const auto size_raw = cfg.get("geometry.size");
        if (!size_raw) {
            v.fail("geometry.size", "required field is missing");
        } else {
            const auto sizes = parse_int_list(*size_raw);
            if (!sizes || static_cast<int>(sizes->size()) != d) {
                v.fail("geometry.size", "need exactly d positive extents");
            } else {
                for (long long s : *sizes) {
                    if (s < 1) v.fail("geometry.size", "extents must be positive");
                }
            }
        }
        if (model && std::holds_alternative<MarkovConditionalSpec>(*model)) {
            const auto& mk = std::get<MarkovConditionalSpec>(*model);
            if (mk.d != d) {
                v.fail("model.file", "markov spec dimension differs from geometry.d");
            }
            v.opt_int("model.sweeps", 0, 1000000);
        }
    }

    if (cfg.kind == "sample") {
        v.opt_int("sample.replicates", 1, 100000);
    } else if (cfg.kind == "census") {
        v.opt_int("census.replicates", 1, 10000000);
        v.opt_int("census.margin", 0, 100000);
        v.opt_int("census.n_max", 1, 1000000);
    } else if (cfg.kind == "patterns") {
        v.opt_int("patterns.replicates", 1, 10000000);
        if (model && !std::holds_alternative<ProductMeasureSpec>(*model)) {
            v.fail("model.file",
                   "patterns experiments need a product measure (exact box "
                   "probabilities)");
        }
        const int q = model ? model_states(*model) : 2;
        std::optional<Pattern> pat_a, pat_b;
        if (const auto path = v.req_file("patterns.pattern")) {
            try {
                pat_a = read_pattern_file(*path, q);
            } catch (const std::exception& e) {
                v.fail("patterns.pattern", e.what());
            }
        }
        if (const auto path = v.req_file("patterns.pattern_prime")) {
            try {
                pat_b = read_pattern_file(*path, q);
            } catch (const std::exception& e) {
                v.fail("patterns.pattern_prime", e.what());
            }
        }
        if (pat_a && pat_b && (pat_a->r() != pat_b->r())) {
            v.fail("patterns.pattern_prime", "patterns must share the diameter r");
        }
        const bool has_mu = cfg.get("patterns.mu").has_value();
        const bool has_tail = cfg.get("patterns.mu_tail").has_value();
        if (has_mu && has_tail) {
            v.fail("patterns.mu", "give either mu or mu_tail, not both");
        }
        if (has_mu) v.opt_double("patterns.mu", 1e-9, 1.0);
        if (has_tail) v.req_file("patterns.mu_tail");
        const auto lo = v.opt_double("patterns.bin_lo", 1, 1e18);
        const auto hi = v.opt_double("patterns.bin_hi", 1, 1e18);
        if (lo && hi && !(*lo < *hi)) {
            v.fail("patterns.bin_hi", "bin_hi must exceed bin_lo");
        }
        v.opt_double("patterns.bin_factor", 1.0000001, 100);
        if (const auto raw = cfg.get("patterns.a_grid")) {
            if (!parse_double_list(*raw)) {
                v.fail("patterns.a_grid", "expected a list of numbers");
            }
        }
    } else if (cfg.kind == "exact") {
        if (const auto raw = cfg.get("exact.p_list")) {
            const auto ps = parse_double_list(*raw);
            if (!ps) {
                v.fail("exact.p_list", "expected a list of numbers");
            } else {
                for (double pv : *ps) {
                    if (!(pv > 0 && pv < 1)) {
                        v.fail("exact.p_list", "entries must lie in (0, 1)");
                    }
                }
            }
        } else {
            v.fail("exact.p_list", "required field is missing");
        }
        const auto budget = v.opt_int("exact.budget", 1, 16);
        v.opt_int("exact.n_max", 1, budget.value_or(kAnimalBudgetDefault));
    } else if (cfg.kind == "verify") {
        if (const auto raw = cfg.get("verify.p_list")) {
            const auto ps = parse_double_list(*raw);
            if (!ps) {
                v.fail("verify.p_list", "expected a list of numbers");
            } else {
                for (double pv : *ps) {
                    if (!(pv > 0 && pv < 1)) {
                        v.fail("verify.p_list", "entries must lie in (0, 1)");
                    }
                }
            }
        } else {
            v.fail("verify.p_list", "required field is missing");
        }
        const auto budget = v.opt_int("verify.budget", 1, 16);
        const auto n_lo = v.req_int("verify.n_lo", 1, 16);
        const auto n_hi =
            v.req_int("verify.n_hi", 1, budget.value_or(kAnimalBudgetDefault));
        if (n_lo && n_hi && !(*n_lo < *n_hi)) {
            v.fail("verify.n_hi", "n_hi must exceed n_lo");
        }
        for (const char* key : {"verify.pattern", "verify.pattern_prime"}) {
            if (const auto path = v.req_file(key)) {
                try {
                    const Pattern pat = read_pattern_file(*path, 2);
                    if (!is_cluster_determined(pat)) {
                        v.fail(key, "pattern is not cluster-determined");
                    }
                } catch (const std::exception& e) {
                    v.fail(key, e.what());
                }
            }
        }
    } else if (cfg.kind == "estimate") {
        v.req_file("estimate.tail");
        v.opt_double("estimate.beta", 0.0, 1.0);
        const std::string fit = cfg.get_or("estimate.fit", "none");
        if (fit != "none" && fit != "stretched") {
            v.fail("estimate.fit", "expected none or stretched");
        }
    } else if (cfg.kind == "gumbel") {
        v.req_double("gumbel.p", 1e-9, 1.0 - 1e-9);
        if (const auto raw = cfg.get("gumbel.boxes")) {
            const auto bs = parse_int_list(*raw);
            if (!bs) {
                v.fail("gumbel.boxes", "expected a list of box half-widths");
            } else {
                for (long long b : *bs) {
                    if (b < 1) v.fail("gumbel.boxes", "half-widths must be >= 1");
                }
            }
        } else {
            v.fail("gumbel.boxes", "required field is missing");
        }
        v.opt_int("gumbel.margin", 0, 100000);
        v.opt_int("gumbel.replicates", 1, 10000000);
        v.opt_int("gumbel.min_clusters", 1, 1000000000);
        const std::string mode = cfg.get_or("gumbel.mode", "all");
        if (mode != "all" && mode != "finite_only") {
            v.fail("gumbel.mode", "expected all or finite_only");
        }
        v.req_file("gumbel.tail");
    }

    return v.take();
}

int run_experiment(const ExperimentConfig& cfg, const RunOverrides& overrides,
                   std::ostream& log) {
    const auto diagnostics = validate_experiment(cfg);
    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics) {
            log << "invalid: " << d.field << ": " << d.message << "\n";
        }
        return kExitValidation;
    }

    RunContext ctx;
    ctx.seed = overrides.seed.value_or(static_cast<std::uint64_t>(
        parse_int(cfg.get_or("rng.seed", "1")).value_or(1)));
    ctx.workers = overrides.workers.value_or(static_cast<int>(
        parse_int(cfg.get_or("run.workers", "1")).value_or(1)));
    ctx.out_dir = overrides.out_dir.value_or(
        cfg.resolve_path(cfg.get_or("output.dir", "out")));
    ctx.inputs.push_back(cfg.path);

    const auto started = std::chrono::steady_clock::now();
    try {
        if (cfg.kind == "sample") {
            run_sample(cfg, ctx);
        } else if (cfg.kind == "census") {
            run_census(cfg, ctx);
        } else if (cfg.kind == "patterns") {
            run_patterns(cfg, ctx);
        } else if (cfg.kind == "exact") {
            run_exact(cfg, ctx);
        } else if (cfg.kind == "verify") {
            run_verify(cfg, ctx);
        } else if (cfg.kind == "estimate") {
            run_estimate(cfg, ctx);
        } else if (cfg.kind == "gumbel") {
            run_gumbel(cfg, ctx);
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        // verify failures still publish their report for inspection
        if (cfg.kind == "verify" && !ctx.artifacts.empty()) {
            const double wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              started)
                    .count();
            for (const auto& a : ctx.artifacts) {
                atomic_write_file(
                    (std::filesystem::path(ctx.out_dir) / a.name).string(),
                    a.content);
            }
            const json manifest = manifest_json(cfg, ctx.seed, ctx.workers,
                                                ctx.inputs, ctx.artifacts,
                                                wall);
            atomic_write_file(
                (std::filesystem::path(ctx.out_dir) / "manifest.json").string(),
                manifest.dump(2) + "\n");
        }
        return kExitRuntime;
    }

    const double wall = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    for (const auto& a : ctx.artifacts) {
        atomic_write_file((std::filesystem::path(ctx.out_dir) / a.name).string(),
                          a.content);
    }
    const json manifest = manifest_json(cfg, ctx.seed, ctx.workers, ctx.inputs,
                                        ctx.artifacts, wall);
    atomic_write_file(
        (std::filesystem::path(ctx.out_dir) / "manifest.json").string(),
        manifest.dump(2) + "\n");
    log << "wrote " << ctx.artifacts.size() + 1 << " artifacts to " << ctx.out_dir
        << "\n";
    return kExitOk;
}

}  // namespace percolab
