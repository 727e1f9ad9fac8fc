#include <eulerwedge/errors.hpp>
#include <eulerwedge/rootsys.hpp>

#include <algorithm>
#include <deque>

namespace ew {

const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidRank: return "InvalidRank";
    case Err::IndexOutOfRange: return "IndexOutOfRange";
    case Err::ParseError: return "ParseError";
    case Err::IoError: return "IoError";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::OrbitTooLarge: return "OrbitTooLarge";
    case Err::NotEuler: return "NotEuler";
    case Err::JacobiViolation: return "JacobiViolation";
    case Err::NumericalFailure: return "NumericalFailure";
    case Err::AutomorphismViolation: return "AutomorphismViolation";
    case Err::CriteriaDisagree: return "CriteriaDisagree";
    case Err::SolverFailure: return "SolverFailure";
    case Err::NotInvariant: return "NotInvariant";
    case Err::NotSkewHermitian: return "NotSkewHermitian";
    case Err::InvariantViolation: return "InvariantViolation";
    case Err::NoGeometricRealization: return "NoGeometricRealization";
    case Err::NotProper: return "NotProper";
    case Err::NotOnManifold: return "NotOnManifold";
    case Err::EmptyRegionSample: return "EmptyRegionSample";
    case Err::NotModularPair: return "NotModularPair";
    case Err::NotStandard: return "NotStandard";
    case Err::ModularRelationViolation: return "ModularRelationViolation";
    case Err::AmbiguousInclusion: return "AmbiguousInclusion";
    case Err::PreconditionViolated: return "PreconditionViolated";
    case Err::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case Err::GeneratorIllConditioned: return "GeneratorIllConditioned";
    case Err::EmptyDictionary: return "EmptyDictionary";
  }
  return "Unknown";
}

bool is_io_error(Err e) { return e == Err::ParseError || e == Err::IoError; }

RatVec solve_exact(RatMat M, RatVec rhs) {
  const std::size_t n = M.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && M[piv][col] == Rat(0)) ++piv;
    if (piv == n) throw Error(Err::NumericalFailure, "singular exact system");
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    const Rat p = M[col][col];
    for (auto& x : M[col]) x /= p;
    rhs[col] /= p;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col] == Rat(0)) continue;
      const Rat f = M[r][col];
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::E: return "E";
    case Family::F: return "F";
    case Family::G: return "G";
    case Family::BC: return "BC";
  }
  return "?";
}

Family family_from_name(std::string_view s) {
  if (s == "A") return Family::A;
  if (s == "B") return Family::B;
  if (s == "C") return Family::C;
  if (s == "D") return Family::D;
  if (s == "E") return Family::E;
  if (s == "F") return Family::F;
  if (s == "G") return Family::G;
  if (s == "BC") return Family::BC;
  throw Error(Err::ParseError, "unknown family '" + std::string(s) + "'");
}

bool rank_admissible(Family f, int rank) {
  switch (f) {
    case Family::A: return rank >= 1;
    case Family::B: return rank >= 2;
    case Family::C: return rank >= 3;
    case Family::D: return rank >= 4;
    case Family::E: return rank == 6 || rank == 7 || rank == 8;
    case Family::F: return rank == 4;
    case Family::G: return rank == 2;
    case Family::BC: return rank >= 1;
  }
  return false;
}

namespace {

RatVec unit(int dim, int i, Rat v = Rat(1)) {
  RatVec u(dim, Rat(0));
  u[i] = v;
  return u;
}

void add_pair_roots(std::vector<RatVec>& roots, int dim, int lo, int hi) {
  // +-e_i +- e_j over lo <= i < j < hi
  for (int i = lo; i < hi; ++i)
    for (int j = i + 1; j < hi; ++j)
      for (int si : {1, -1})
        for (int sj : {1, -1}) {
          RatVec v(dim, Rat(0));
          v[i] = Rat(si);
          v[j] = Rat(sj);
          roots.push_back(v);
        }
}

// sign patterns with prescribed parity of minus signs over `m` slots
void for_each_sign_pattern(int m, int parity, auto&& fn) {
  for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
    if (__builtin_popcount(bits) % 2 != parity) continue;
    fn(bits);
  }
}

std::vector<RatVec> classical_simple(Family f, int n) {
  std::vector<RatVec> s;
  for (int i = 0; i + 1 < n; ++i) {
    RatVec v(n, Rat(0));
    v[i] = Rat(1);
    v[i + 1] = Rat(-1);
    s.push_back(v);
  }
  RatVec last(n, Rat(0));
  switch (f) {
    case Family::B:
    case Family::BC: last[n - 1] = Rat(1); break;
    case Family::C: last[n - 1] = Rat(2); break;
    case Family::D:
      last[n - 2] = Rat(1);
      last[n - 1] = Rat(1);
      break;
    default: break;
  }
  s.push_back(last);
  return s;
}

}  // namespace

RootSystem build_root_system(const RootSystemSpec& spec) {
  if (!rank_admissible(spec.family, spec.rank))
    throw Error(Err::InvalidRank, family_name(spec.family) + " rank " +
                                      std::to_string(spec.rank));
  RootSystem rs;
  rs.family = spec.family;
  rs.rank = spec.rank;
  const int n = spec.rank;

  switch (spec.family) {
    case Family::A: {
      rs.ambient_dim = n + 1;
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          if (i == j) continue;
          RatVec v(n + 1, Rat(0));
          v[i] = Rat(1);
          v[j] = Rat(-1);
          rs.roots.push_back(v);
        }
      for (int i = 0; i < n; ++i) {
        RatVec v(n + 1, Rat(0));
        v[i] = Rat(1);
        v[i + 1] = Rat(-1);
        rs.simple_roots.push_back(v);
      }
      break;
    }
    case Family::B:
    case Family::C:
    case Family::D:
    case Family::BC: {
      rs.ambient_dim = n;
      if (n >= 2) add_pair_roots(rs.roots, n, 0, n);
      if (spec.family == Family::B || spec.family == Family::BC)
        for (int i = 0; i < n; ++i)
          for (int s : {1, -1}) rs.roots.push_back(unit(n, i, Rat(s)));
      if (spec.family == Family::C || spec.family == Family::BC)
        for (int i = 0; i < n; ++i)
          for (int s : {1, -1}) rs.roots.push_back(unit(n, i, Rat(2 * s)));
      rs.simple_roots = classical_simple(spec.family, n);
      break;
    }
    case Family::E: {
      rs.ambient_dim = 8;
      if (n == 8) {
        add_pair_roots(rs.roots, 8, 0, 8);
        for_each_sign_pattern(8, 0, [&](std::uint32_t bits) {
          RatVec v(8);
          for (int i = 0; i < 8; ++i)
            v[i] = (bits >> i) & 1 ? Rat(-1, 2) : Rat(1, 2);
          rs.roots.push_back(v);
        });
      } else if (n == 7) {
        add_pair_roots(rs.roots, 8, 0, 6);
        for (int s : {1, -1}) {
          RatVec v(8, Rat(0));
          v[6] = Rat(-s);
          v[7] = Rat(s);
          rs.roots.push_back(v);
        }
        for_each_sign_pattern(6, 1, [&](std::uint32_t bits) {
          for (int s : {1, -1}) {
            RatVec v(8);
            for (int i = 0; i < 6; ++i)
              v[i] = (bits >> i) & 1 ? Rat(-s, 2) : Rat(s, 2);
            v[6] = Rat(-s, 2);
            v[7] = Rat(s, 2);
            rs.roots.push_back(v);
          }
        });
      } else {  // n == 6
        add_pair_roots(rs.roots, 8, 0, 5);
        for_each_sign_pattern(5, 0, [&](std::uint32_t bits) {
          for (int s : {1, -1}) {
            RatVec v(8);
            for (int i = 0; i < 5; ++i)
              v[i] = (bits >> i) & 1 ? Rat(-s, 2) : Rat(s, 2);
            v[5] = Rat(-s, 2);
            v[6] = Rat(-s, 2);
            v[7] = Rat(s, 2);
            rs.roots.push_back(v);
          }
        });
      }
      RatVec a1(8, Rat(-1, 2));
      a1[0] = Rat(1, 2);
      a1[7] = Rat(1, 2);
      rs.simple_roots.push_back(a1);
      RatVec a2(8, Rat(0));
      a2[0] = Rat(1);
      a2[1] = Rat(1);
      rs.simple_roots.push_back(a2);
      for (int k = 3; k <= n; ++k) {
        RatVec v(8, Rat(0));
        v[k - 3] = Rat(-1);
        v[k - 2] = Rat(1);
        rs.simple_roots.push_back(v);
      }
      break;
    }
    case Family::F: {
      rs.ambient_dim = 4;
      for (int i = 0; i < 4; ++i)
        for (int s : {1, -1}) rs.roots.push_back(unit(4, i, Rat(s)));
      add_pair_roots(rs.roots, 4, 0, 4);
      for (std::uint32_t bits = 0; bits < 16; ++bits) {
        RatVec v(4);
        for (int i = 0; i < 4; ++i)
          v[i] = (bits >> i) & 1 ? Rat(-1, 2) : Rat(1, 2);
        rs.roots.push_back(v);
      }
      rs.simple_roots = {
          {Rat(0), Rat(1), Rat(-1), Rat(0)},
          {Rat(0), Rat(0), Rat(1), Rat(-1)},
          {Rat(0), Rat(0), Rat(0), Rat(1)},
          {Rat(1, 2), Rat(-1, 2), Rat(-1, 2), Rat(-1, 2)},
      };
      break;
    }
    case Family::G: {
      rs.ambient_dim = 3;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          RatVec v(3, Rat(0));
          v[i] = Rat(1);
          v[j] = Rat(-1);
          rs.roots.push_back(v);
        }
      for (int i = 0; i < 3; ++i) {
        RatVec v(3, Rat(-1));
        v[i] = Rat(2);
        rs.roots.push_back(v);
        rs.roots.push_back(-v);
      }
      rs.simple_roots = {
          {Rat(1), Rat(-1), Rat(0)},
          {Rat(-2), Rat(1), Rat(1)},
      };
      break;
    }
  }

  const int r = rs.rank;
  rs.cartan_matrix.assign(r, std::vector<long long>(r, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Rat a = Rat(2) * dot(rs.simple_roots[i], rs.simple_roots[j]) /
                    dot(rs.simple_roots[j], rs.simple_roots[j]);
      if (a.denominator() != 1)
        throw Error(Err::NumericalFailure, "non-integral Cartan entry");
      rs.cartan_matrix[i][j] = a.numerator();
    }
  return rs;
}

Coweight fundamental_coweight(const RootSystem& rs, int j) {
  if (j < 1 || j > rs.rank)
    throw Error(Err::IndexOutOfRange,
                "node " + std::to_string(j) + " of rank " +
                    std::to_string(rs.rank));
  const int r = rs.rank;
  RatMat gram(r, RatVec(r));
  for (int k = 0; k < r; ++k)
    for (int m = 0; m < r; ++m)
      gram[k][m] = dot(rs.simple_roots[k], rs.simple_roots[m]);
  RatVec rhs(r, Rat(0));
  rhs[j - 1] = Rat(1);
  const RatVec c = solve_exact(gram, rhs);
  RatVec h(rs.ambient_dim, Rat(0));
  for (int m = 0; m < r; ++m)
    for (int i = 0; i < rs.ambient_dim; ++i)
      h[i] += c[m] * rs.simple_roots[m][i];
  return Coweight{h, j};
}

bool is_euler_node(const RootSystem& rs, int j) {
  const Coweight h = fundamental_coweight(rs, j);
  for (const auto& alpha : rs.roots) {
    const Rat p = dot(alpha, h.vector);
    if (p != Rat(-1) && p != Rat(0) && p != Rat(1)) return false;
  }
  return true;
}

std::set<int> euler_nodes(const RootSystem& rs) {
  std::set<int> out;
  for (int j = 1; j <= rs.rank; ++j)
    if (is_euler_node(rs, j)) out.insert(j);
  return out;
}

namespace {

RatVec reflect(const RatVec& v, const RatVec& alpha) {
  const Rat c = Rat(2) * dot(v, alpha) / dot(alpha, alpha);
  RatVec w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] - c * alpha[i];
  return w;
}

}  // namespace

std::set<RatVec> weyl_orbit(const RootSystem& rs, const RatVec& v,
                            std::size_t bound) {
  if (static_cast<int>(v.size()) != rs.ambient_dim)
    throw Error(Err::DimensionMismatch, "orbit seed dimension");
  std::set<RatVec> seen{v};
  std::deque<RatVec> frontier{v};
  while (!frontier.empty()) {
    const RatVec cur = frontier.front();
    frontier.pop_front();
    for (const auto& alpha : rs.simple_roots) {
      RatVec w = reflect(cur, alpha);
      if (seen.insert(w).second) {
        if (seen.size() > bound)
          throw Error(Err::OrbitTooLarge,
                      "bound " + std::to_string(bound) + " exceeded");
        frontier.push_back(std::move(w));
      }
    }
  }
  return seen;
}

bool is_symmetric_euler(const RootSystem& rs, int j) {
  if (!is_euler_node(rs, j))
    throw Error(Err::NotEuler, "node " + std::to_string(j) + " of " +
                                   family_name(rs.family) +
                                   std::to_string(rs.rank));
  const Coweight h = fundamental_coweight(rs, j);
  const auto orb = weyl_orbit(rs, h.vector);
  const bool direct = orb.count(-h.vector) > 0;

  // second route: h is dominant, so its orbit holds exactly one antidominant
  // element (all pairings with simple roots <= 0); symmetry means that
  // element is -h
  bool antidominant_match = false;
  int antidominant_count = 0;
  for (const auto& w : orb) {
    bool anti = true;
    for (const auto& alpha : rs.simple_roots)
      if (dot(alpha, w) > Rat(0)) {
        anti = false;
        break;
      }
    if (anti) {
      ++antidominant_count;
      if (w == -h.vector) antidominant_match = true;
    }
  }
  if (antidominant_count != 1)
    throw Error(Err::NumericalFailure, "antidominant element not unique");
  if (direct != antidominant_match)
    throw Error(Err::CriteriaDisagree, "orbit membership vs antidominant");
  return direct;
}

GradingDims grading_dimensions(const RootSystem& rs, int j) {
  if (!is_euler_node(rs, j))
    throw Error(Err::NotEuler, "node " + std::to_string(j));
  const Coweight h = fundamental_coweight(rs, j);
  GradingDims d{0, rs.rank, 0};
  for (const auto& alpha : rs.roots) {
    const Rat p = dot(alpha, h.vector);
    if (p == Rat(1))
      ++d.d_plus;
    else if (p == Rat(-1))
      ++d.d_minus;
    else
      ++d.d_zero;
  }
  return d;
}

}  // namespace ew
