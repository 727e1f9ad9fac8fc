#pragma once
#include <eulerwedge/rational.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ew {

enum class Family { A, B, C, D, E, F, G, BC };

std::string family_name(Family f);
Family family_from_name(std::string_view s);

// Admissible ranks: A >= 1, B >= 2, C >= 3, D >= 4, E in {6,7,8}, F = 4,
// G = 2, BC >= 1.
bool rank_admissible(Family f, int rank);

struct RootSystemSpec {
  Family family;
  int rank;
};

struct RootSystem {
  Family family;
  int rank;
  int ambient_dim;
  std::vector<RatVec> roots;         // closed under negation
  std::vector<RatVec> simple_roots;  // Bourbaki numbering, 0-based storage
  std::vector<std::vector<long long>> cartan_matrix;
};

struct Coweight {
  RatVec vector;  // ambient coordinates, lies in span(simple_roots)
  int node;       // 1-based index j
};

struct GradingDims {
  long long d_plus;
  long long d_zero;
  long long d_minus;
};

RootSystem build_root_system(const RootSystemSpec& spec);

// Exact solution of <alpha_k, h> = delta_jk within span(simple_roots).
Coweight fundamental_coweight(const RootSystem& rs, int j);

// true iff <alpha, h_j> lies in {-1, 0, 1} for every root alpha
bool is_euler_node(const RootSystem& rs, int j);

std::set<int> euler_nodes(const RootSystem& rs);

// Closure of {v} under simple reflections (breadth-first). The returned set
// is ordered lexicographically, so iteration order is canonical.
std::set<RatVec> weyl_orbit(const RootSystem& rs, const RatVec& v,
                            std::size_t bound = 1000000);

// Conjugacy test -h_j in W.h_j. Two routes are evaluated on the same orbit:
// direct membership of -h_j, and comparison of the orbit's unique
// antidominant element with -h_j. They must agree.
bool is_symmetric_euler(const RootSystem& rs, int j);

// d+ = #{alpha : <alpha,h_j> = 1}, d- likewise for -1,
// d0 = rank + #{alpha : <alpha,h_j> = 0}
GradingDims grading_dimensions(const RootSystem& rs, int j);

}  // namespace ew
