#pragma once

// Independent reference implementations used only by tests. None of them
// call into the library's algorithms; they work on plain adjacency
// matrices and exhaustive search.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lexgraph/digraph.hpp"
#include "lexgraph/lexicon.hpp"

namespace lexgraph::testing {

using Matrix = std::vector<std::vector<char>>;

Matrix adjacency(const DefGraph& g);

/// Random digraph on n vertices; each ordered pair (u != v) is an arc with
/// probability `density`, each self-loop with probability `loop_density`.
DefGraph random_digraph(std::size_t n, double density, std::mt19937_64& rng, double loop_density = 0.0);

/// Kahn's algorithm on the matrix with `removed` vertices deleted.
bool acyclic_oracle(const Matrix& a, std::uint32_t removed_mask);

/// Size of a minimum feedback vertex set by subset search (n <= 20).
std::size_t brute_min_fvs(const DefGraph& g);

/// Every minimum feedback vertex set, each sorted, in lexicographic order.
std::vector<VertexSet> brute_all_min_fvs(const DefGraph& g);

/// Transitive closure (Warshall); reach[u][v] iff a path of length >= 1.
Matrix transitive_closure(const DefGraph& g);

/// SCCs by mutual reachability, ordered by smallest member.
std::vector<VertexSet> brute_sccs(const DefGraph& g);

/// Vertices that can reach a vertex lying on a cycle.
VertexSet brute_kernel(const DefGraph& g);

/// Learnability by naive repeated sweeps.
bool brute_learnable(const DefGraph& g, const VertexSet& known);

/// Closed lexicon from word -> definition words. Every definition word must
/// be a key.
Lexicon make_lexicon(const std::map<std::string, std::vector<std::string>>& defs);
DefGraph graph_of(const std::map<std::string, std::vector<std::string>>& defs);

/// a <-> b, c defined by {a, b}.
std::map<std::string, std::vector<std::string>> fixture_f1();
/// a <-> b, c <-> d, c uses a, d uses b, e uses c and d.
std::map<std::string, std::vector<std::string>> fixture_f2();

/// Density of the F(d1, d2) distribution.
double f_density(double x, double d1, double d2);
/// P(F > x) by adaptive Simpson integration of the density.
double f_upper_tail_numeric(double x, double d1, double d2);

/// Least squares with intercept via the normal equations and Gaussian
/// elimination with partial pivoting. Returns intercept then slopes.
std::vector<double> normal_equations(const std::vector<std::vector<double>>& columns, const std::vector<double>& y);

/// Pooled-variance two-sample t statistic.
double pooled_t(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace lexgraph::testing
