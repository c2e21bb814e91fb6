#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "percolab/animals.hpp"
#include "percolab/patterns.hpp"

namespace percolab {

/// Integer enumeration output: animal counts refined by site perimeter.
/// Probabilities are evaluated last, so one enumeration serves every p.
struct TailPolynomial {
    int n_max = 0;
    /// anchored[n][t] = animals with left-endpoint at the origin, size n,
    /// perimeter t.
    std::vector<std::map<int, long long>> anchored;
    /// origin_shifts[n][t] = (animal, shift) pairs placing one animal site at
    /// the origin; exactly n shifts per anchored animal.
    std::vector<std::map<int, long long>> origin_shifts;
};

TailPolynomial tail_polynomial(int n_max, int budget = kAnimalBudgetDefault);

/// Exact cluster-size tail for d=2 Bernoulli site percolation.
/// c[n] = probability the origin's cluster has size n, summed over origin
/// translates; c_star[n] = same for the left-endpoint cluster; p_partial[n] =
/// partial sum of c over [n, n_max] (truncated at the horizon).
struct ExactTail {
    double p = 0;
    int n_max = 0;
    std::vector<double> c;          // index n, entries 1..n_max
    std::vector<double> c_star;
    std::vector<double> p_partial;
    /// max over n of |c_n - n c*_n| / c_n: two evaluation routes through the
    /// anchored and per-shift counts.
    double max_identity_rel_error = 0;
    /// true when origin_shifts[n][t] == n * anchored[n][t] for every bucket.
    bool shift_counts_consistent = true;
};

ExactTail evaluate_tail(const TailPolynomial& poly, double p);
ExactTail compute_exact_tail(double p, int n_max,
                             int budget = kAnimalBudgetDefault);
double exact_cn(int n, double p, int budget = kAnimalBudgetDefault);

/// Joint occurrence counts for a cluster-determined pattern pair, refined by
/// perimeter: terms[(i, j)][t] = number of (animal, shift) pairs of size n
/// with i occurrences of P and j of P' on the cluster at counting-grid sites.
struct JointPolynomial {
    int n = 0;
    std::map<std::pair<int, int>, std::map<int, long long>> terms;
};

std::map<int, JointPolynomial> joint_occurrence_polynomials(
    const std::vector<int>& sizes, const Pattern& p, const Pattern& p_prime,
    int budget = kAnimalBudgetDefault);

/// c_n(i, j) = probability that |C| = n with i occurrences of P and j of P'.
struct JointCountTable {
    int n = 0;
    double p = 0;
    std::map<std::pair<int, int>, double> mass;
    double total() const;
};

JointCountTable evaluate_joint(const JointPolynomial& poly, double p);
JointCountTable exact_joint_counts(int n, double p, const Pattern& pat,
                                   const Pattern& pat_prime,
                                   int budget = kAnimalBudgetDefault);

/// Checks the one-occurrence swap identity
///   c_{n+1}(i-1, j+1) = i/(j+1) * P(box P')/P(box P) * c_n(i, j)
/// over all populated buckets with i >= 1. Requires c_{P'} - c_P = 1.
struct SwapIdentityCheck {
    double max_rel_error = 0;
    long buckets_checked = 0;
};

SwapIdentityCheck verify_swap_identity(const JointCountTable& at_n,
                                       const JointCountTable& at_n_plus_1,
                                       const Pattern& pat,
                                       const Pattern& pat_prime);

/// Best constant in c_{n+m}/(n+m) >= A (c_n/n)(c_m/m) over n+m <= n_max.
struct SupermultiCheck {
    double a_hat = 0;
    int n_at = 0;
    int m_at = 0;
};

SupermultiCheck verify_supermulti(const ExactTail& tail);

/// CSV serializations with stable column order.
std::string exact_tail_to_csv(const ExactTail& tail);
std::string joint_table_to_csv(const JointCountTable& table);

}  // namespace percolab
