#include <eulerwedge/cli.hpp>

#include <eulerwedge/causal.hpp>
#include <eulerwedge/cones.hpp>
#include <eulerwedge/errors.hpp>
#include <eulerwedge/liealg.hpp>
#include <eulerwedge/models.hpp>
#include <eulerwedge/nets.hpp>
#include <eulerwedge/numeric.hpp>
#include <eulerwedge/rootsys.hpp>
#include <eulerwedge/stdsp.hpp>
#include <eulerwedge/wedgespace.hpp>

#include "json_out.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ew::cli {
namespace {

constexpr const char* kToolVersion = "0.1.0";

#ifndef EW_DATA_DIR
#define EW_DATA_DIR "data"
#endif

// ----------------------------------------------------------------------
// Global options shared by every subcommand.

struct GlobalOpts {
  unsigned seed = 0;
  double tol = 1e-9;
  bool tol_explicit = false;  // --tol given or EULERWEDGE_TOL set
  std::string format = "text";
  bool parallel = false;

  // Library entry points carry their own calibrated defaults; an explicit
  // --tol (or the environment override) wins over all of them.
  double pick(double lib_default) const {
    return tol_explicit ? tol : lib_default;
  }
};

// Incremental digest over the byte inputs of a run: the command path, the
// echoed option values, and the raw bytes of every file read.
struct Digest {
  std::uint64_t h = 14695981039346656037ull;
  void add(const std::string& bytes) {
    h = fnv1a(bytes, h);
    h = fnv1a(std::string(1, '\x1f'), h);
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
  }
};

// ----------------------------------------------------------------------
// Small parsers and converters.

Eigen::VectorXd parse_vector(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      vals.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(Err::ParseError, "bad number '" + item + "' in '" + s + "'");
    }
  }
  if (vals.empty()) throw Error(Err::ParseError, "empty vector '" + s + "'");
  return Eigen::Map<Eigen::VectorXd>(vals.data(),
                                     static_cast<Eigen::Index>(vals.size()));
}

// Rows separated by ';', entries by ','.  All rows must have equal length.
Eigen::MatrixXd parse_matrix(const std::string& s) {
  std::vector<Eigen::VectorXd> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(parse_vector(row));
  if (rows.empty()) throw Error(Err::ParseError, "empty matrix '" + s + "'");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw Error(Err::ParseError, "ragged matrix '" + s + "'");
    m.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  return m;
}

std::string read_file(const std::string& path, Digest& dig) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Err::IoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string bytes = buf.str();
  dig.add(bytes);
  return bytes;
}

nlohmann::json load_json_file(const std::string& path, Digest& dig) {
  const std::string bytes = read_file(path, dig);
  try {
    return nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Err::ParseError, path + ": " + e.what());
  }
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j,
                                 const std::string& where) {
  const nlohmann::json& arr = j.is_object() && j.contains("matrix")
                                  ? j.at("matrix")
                                  : j;
  if (!arr.is_array() || arr.empty() || !arr[0].is_array())
    throw Error(Err::ParseError, where + ": expected a 2-d array");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(arr.size()),
                    static_cast<Eigen::Index>(arr[0].size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = arr[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols())
      throw Error(Err::ParseError, where + ": ragged matrix");
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = row[static_cast<size_t>(c)].get<double>();
  }
  return m;
}

Json vec_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push(Json::num(v(i)));
  return a;
}

Json mat_to_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    a.push(vec_to_json(m.row(r).transpose()));
  return a;
}

Json intset_to_json(const std::set<int>& s) {
  Json a = Json::array();
  for (int v : s) a.push(Json::integer(v));
  return a;
}

Json trend_to_json(const TrendReport& t) {
  Json o = Json::object();
  o.set("coarse", Json::num(t.coarse));
  o.set("fine", Json::num(t.fine));
  o.set("ratio", Json::num(t.ratio));
  o.set("improved", Json::boolean(t.improved));
  return o;
}

// ----------------------------------------------------------------------
// Shared geometry builders.

Eigen::VectorXd unit_vec(int n, int i, double s = 1.0) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v(i) = s;
  return v;
}

Eigen::MatrixXd boost01_matrix(int d, double t) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(d, d);
  m(0, 0) = std::cosh(t);
  m(0, 1) = std::sinh(t);
  m(1, 0) = std::sinh(t);
  m(1, 1) = std::cosh(t);
  return m;
}

// Adjoint action of the affine map (lorentz, a) on poincare(d), written in
// the algebra's basis coordinates via the (d+1)x(d+1) matrix picture.
GradedGroupElement poincare_group_element(const LieAlgebra& L,
                                          const Eigen::MatrixXd& lorentz,
                                          const Eigen::VectorXd& a) {
  const int d = static_cast<int>(lorentz.rows());
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(d + 1, d + 1);
  big.topLeftCorner(d, d) = lorentz;
  big.col(d).head(d) = a;
  const Eigen::MatrixXd big_inv = big.inverse();
  Eigen::MatrixXd m(L.dim, L.dim);
  for (int k = 0; k < L.dim; ++k)
    m.col(k) = matrix_coordinates(L, big * L.matrix_basis[k] * big_inv);
  return make_graded_element(L, m, +1);
}

// ----------------------------------------------------------------------
// Algebra resolution: "builtin:KIND" or a TOML file path.  The compact
// single-argument form gl2 / sl3 / sp4 expands to gl(2) / sl(3) / sp(4);
// multi-argument kinds need explicit parentheses, e.g. builtin:so(3,1).

LieAlgebra resolve_algebra(const std::string& spec, Digest& dig) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) {
    std::string kind = spec.substr(prefix.size());
    if (kind.find('(') == std::string::npos) {
      size_t split = kind.size();
      while (split > 0 &&
             std::isdigit(static_cast<unsigned char>(kind[split - 1])))
        --split;
      if (split == 0 || split == kind.size())
        throw Error(Err::ParseError, "bad builtin kind '" + kind + "'");
      kind = kind.substr(0, split) + "(" + kind.substr(split) + ")";
    }
    return build_algebra(kind);
  }
  read_file(spec, dig);  // digest the bytes; errors map to exit 2
  return load_algebra_toml(spec);
}

PolyhedralCone cone_from_file(const std::string& path, Digest& dig) {
  const nlohmann::json j = load_json_file(path, dig);
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("generators"))
    throw Error(Err::ParseError,
                path + ": expected {\"ambient_dim\": n, \"generators\": [...]}");
  const int n = j.at("ambient_dim").get<int>();
  std::vector<Eigen::VectorXd> gens;
  for (const auto& g : j.at("generators")) {
    if (!g.is_array() || static_cast<int>(g.size()) != n)
      throw Error(Err::ParseError, path + ": generator length != ambient_dim");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = g[static_cast<size_t>(i)].get<double>();
    gens.push_back(v);
  }
  return make_cone(n, std::move(gens));
}

Eigen::MatrixXd matrix_from_file(const std::string& path, Digest& dig) {
  return matrix_from_json(load_json_file(path, dig), path);
}

AntiUnitaryOp op_from_file(const ComplexSpace& s, const std::string& path,
                           Digest& dig, double tol) {
  const nlohmann::json j = load_json_file(path, dig);
  int parity = +1;
  if (j.is_object() && j.contains("parity")) parity = j.at("parity").get<int>();
  return make_antiunitary(s, matrix_from_json(j, path), parity, tol);
}

// ----------------------------------------------------------------------
// The built-in two-mode net: a graph subspace {(z, 2 conj z)} on C^2 with
// its modular pair, moved by a small wedge-indexed family over R^{1,2}.

struct BuiltinNet {
  ComplexSpace s = make_space(2);
  ModularPair pair;
  RealSubspace V;

  BuiltinNet() {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 0.25;
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    pair = make_modular_pair(s, realify(d),
                             realify(swap) * coordinate_conjugation(s));
    V = subspace_from_modular(s, pair);
  }

  AntiUnitaryOp identity_op() const {
    return make_antiunitary(s, Eigen::MatrixXd::Identity(2 * s.n, 2 * s.n),
                            +1);
  }

  AntiUnitaryOp mixing_unitary(double theta) const {
    Eigen::MatrixXcd r(2, 2);
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return make_antiunitary(s, realify(r), +1);
  }

  static IsometryElement identity3() {
    return make_isometry(Eigen::MatrixXd::Identity(3, 3),
                         Eigen::VectorXd::Zero(3));
  }

  static IsometryElement translate3(double a0, double a1, double a2) {
    Eigen::VectorXd a(3);
    a << a0, a1, a2;
    return make_isometry(Eigen::MatrixXd::Identity(3, 3), a);
  }

  // Operators follow the geometry: flows for the boost and both
  // translations, so every verdict of the direct report holds.
  NetConfig compatible() const {
    std::vector<FamilyElement> fam;
    fam.push_back({identity3(), identity_op()});
    fam.push_back({make_isometry(boost01_matrix(3, 0.8),
                                 Eigen::VectorXd::Zero(3)),
                   modular_flow(s, pair.Delta, 0.5)});
    fam.push_back({translate3(0, 1, 0), modular_flow(s, pair.Delta, 0.3)});
    fam.push_back({translate3(0, -1, 0), modular_flow(s, pair.Delta, -0.3)});
    return make_net_config(s, V, fam);
  }

  // The forward translation carries a mixing rotation instead, so the
  // report's verdicts all fail and the offender is named.
  NetConfig violating() const {
    const AntiUnitaryOp u = mixing_unitary(0.7);
    const AntiUnitaryOp uinv = make_antiunitary(s, u.matrix.transpose(), +1);
    std::vector<FamilyElement> fam;
    fam.push_back({identity3(), identity_op()});
    fam.push_back({make_isometry(boost01_matrix(3, 0.8),
                                 Eigen::VectorXd::Zero(3)),
                   modular_flow(s, pair.Delta, 0.5)});
    fam.push_back({translate3(0, 1, 0), u});
    fam.push_back({translate3(0, -1, 0), uinv});
    return make_net_config(s, V, fam);
  }
};

Region ball_region(const Eigen::VectorXd& c, double radius) {
  Eigen::VectorXd r = Eigen::VectorXd::Constant(c.size(), radius);
  return make_region(
      [c, radius](const SpacetimePoint& x) { return (x - c).norm() < radius; },
      c - r, c + r);
}

// "ball:c0,c1,c2,r" -> center and radius.
Region parse_region(const std::string& spec) {
  const std::string prefix = "ball:";
  if (spec.rfind(prefix, 0) != 0)
    throw Error(Err::ParseError,
                "bad region '" + spec + "' (expected ball:c0,c1,c2,r)");
  const Eigen::VectorXd v = parse_vector(spec.substr(prefix.size()));
  if (v.size() != 4)
    throw Error(Err::ParseError,
                "bad region '" + spec + "' (expected ball:c0,c1,c2,r)");
  if (v(3) <= 0)
    throw Error(Err::InvariantViolation, "region radius must be positive");
  return ball_region(v.head(3), v(3));
}

// ----------------------------------------------------------------------
// classify

Json classify_rank(Family fam, int rank) {
  if (!rank_admissible(fam, rank))
    throw Error(Err::InvariantViolation,
                "rank " + std::to_string(rank) + " not admissible for " +
                    family_name(fam));
  const RootSystem rs = build_root_system({fam, rank});
  const std::set<int> euler = euler_nodes(rs);
  std::set<int> symmetric;
  Json nodes = Json::array();
  for (int j = 1; j <= rank; ++j) {
    Json n = Json::object();
    n.set("node", Json::integer(j));
    const bool is_euler = euler.count(j) > 0;
    n.set("euler", Json::boolean(is_euler));
    if (is_euler) {
      const bool sym = is_symmetric_euler(rs, j);
      if (sym) symmetric.insert(j);
      n.set("symmetric", Json::boolean(sym));
      const GradingDims gd = grading_dimensions(rs, j);
      Json g = Json::object();
      g.set("dim_plus", Json::integer(gd.d_plus));
      g.set("dim_zero", Json::integer(gd.d_zero));
      g.set("dim_minus", Json::integer(gd.d_minus));
      n.set("grading", std::move(g));
    }
    nodes.push(std::move(n));
  }
  Json out = Json::object();
  out.set("family", Json::str(family_name(fam)));
  out.set("rank", Json::integer(rank));
  out.set("euler_nodes", intset_to_json(euler));
  out.set("symmetric_euler_nodes", intset_to_json(symmetric));
  out.set("nodes", std::move(nodes));
  return out;
}

Json run_classify(const std::string& family, const std::vector<int>& ranks,
                  const GlobalOpts& g) {
  const Family fam = family_from_name(family);
  Json arr = Json::array();
  if (g.parallel && ranks.size() > 1) {
    std::vector<std::future<Json>> futs;
    futs.reserve(ranks.size());
    for (int r : ranks)
      futs.push_back(std::async(std::launch::async, classify_rank, fam, r));
    for (auto& f : futs) arr.push(f.get());
  } else {
    for (int r : ranks) arr.push(classify_rank(fam, r));
  }
  Json out = Json::object();
  out.set("systems", std::move(arr));
  return out;
}

// ----------------------------------------------------------------------
// analyze

Json run_analyze(const std::string& algebra, const std::string& h_spec,
                 const GlobalOpts& g, Digest& dig) {
  const LieAlgebra L = resolve_algebra(algebra, dig);
  const Eigen::VectorXd h = parse_vector(h_spec);
  if (h.size() != L.dim)
    throw Error(Err::DimensionMismatch,
                "h has " + std::to_string(h.size()) + " coordinates, algebra dim is " +
                    std::to_string(L.dim));
  const double eig_tol = g.pick(1e-8);
  const EulerReport rep = euler_report(L, h, eig_tol);

  Json out = Json::object();
  out.set("algebra_dim", Json::integer(L.dim));
  out.set("is_euler", Json::boolean(rep.is_euler));
  Json spec = Json::array();
  for (double v : rep.spectrum) spec.push(Json::num(v));
  out.set("ad_spectrum", std::move(spec));
  if (rep.is_euler) {
    Json gd = Json::object();
    gd.set("dim_plus", Json::integer(rep.grading_bases.g_plus.cols()));
    gd.set("dim_zero", Json::integer(rep.grading_bases.g_zero.cols()));
    gd.set("dim_minus", Json::integer(rep.grading_bases.g_minus.cols()));
    out.set("grading", std::move(gd));
    out.set("anti_elliptic", Json::boolean(rep.anti_elliptic));
    out.set("h_in_commutator", Json::boolean(rep.h_in_commutator));
    out.set("n_h_dim", Json::integer(rep.n_h_basis.cols()));
    out.set("n_h_natural_dim", Json::integer(rep.n_h_natural_basis.cols()));
    out.set("centralizer_dim",
            Json::integer(centralizer(L, h, eig_tol).cols()));
  }
  return out;
}

// ----------------------------------------------------------------------
// cone

Json run_cone_member(const std::string& file, const std::string& x_spec,
                     const GlobalOpts& g, Digest& dig) {
  const PolyhedralCone C = cone_from_file(file, dig);
  const Eigen::VectorXd x = parse_vector(x_spec);
  if (x.size() != C.ambient_dim)
    throw Error(Err::DimensionMismatch, "x does not match the ambient dimension");
  Json out = Json::object();
  out.set("ambient_dim", Json::integer(C.ambient_dim));
  out.set("generator_count", Json::integer(
      static_cast<long long>(C.generators.size())));
  out.set("member", Json::boolean(cone_member(C, x, g.pick(1e-8))));
  return out;
}

Json run_cone_parts(const std::string& file, const std::string& algebra,
                    const std::string& h_spec, const std::string& x_spec,
                    const GlobalOpts& g, Digest& dig) {
  const PolyhedralCone C = cone_from_file(file, dig);
  const LieAlgebra L = resolve_algebra(algebra, dig);
  const Eigen::VectorXd h = parse_vector(h_spec);
  if (h.size() != L.dim)
    throw Error(Err::DimensionMismatch, "h does not match the algebra dimension");
  const double tol = g.pick(1e-8);
  const GradedConeParts parts = graded_cone_parts(C, L, h, tol, g.seed, 64);
  const Grading gr = grading(L, h, tol);
  const LieWedge W = lie_wedge_LSW(gr.g_zero, parts.plus, parts.minus);

  Json out = Json::object();
  out.set("plus_generators", Json::integer(
      static_cast<long long>(parts.plus.generators.size())));
  out.set("minus_generators", Json::integer(
      static_cast<long long>(parts.minus.generators.size())));
  out.set("edge_dim", Json::integer(W.edge.cols()));
  out.set("cone_generators", Json::integer(
      static_cast<long long>(W.cone.generators.size())));
  if (!x_spec.empty()) {
    const Eigen::VectorXd x = parse_vector(x_spec);
    if (x.size() != L.dim)
      throw Error(Err::DimensionMismatch, "x does not match the algebra dimension");
    out.set("wedge_member", Json::boolean(lie_wedge_member(W, x, tol)));
  }
  return out;
}

// ----------------------------------------------------------------------
// wedge

Json run_wedge_member(int d, const std::string& lorentz_spec,
                      const std::string& trans_spec, int starts, int iters,
                      bool certify_out, const GlobalOpts& g) {
  if (d < 2) throw Error(Err::InvariantViolation, "need d >= 2");
  const Eigen::MatrixXd lorentz = lorentz_spec.empty()
                                      ? Eigen::MatrixXd::Identity(d, d)
                                      : parse_matrix(lorentz_spec);
  if (lorentz.rows() != d || lorentz.cols() != d)
    throw Error(Err::DimensionMismatch, "lorentz matrix must be d x d");
  const Eigen::VectorXd a = trans_spec.empty() ? Eigen::VectorXd::Zero(d)
                                               : parse_vector(trans_spec);
  if (a.size() != d)
    throw Error(Err::DimensionMismatch, "translation must have d entries");

  const WedgeOrderConfig cfg = poincare_wedge_config(d);
  const LieAlgebra& L = cfg.algebra;
  const double tol = g.pick(1e-8);
  const EulerCouple W = standard_couple(L, unit_vec(L.dim, d), tol);
  const GradedGroupElement gg = poincare_group_element(L, lorentz, a);
  const GradedGroupElement id = make_graded_element(
      L, Eigen::MatrixXd::Identity(L.dim, L.dim), +1, tol);

  const SemigroupVerdict sv =
      semigroup_member(cfg, W, gg, tol, g.seed, starts, iters, certify_out);
  const OrderVerdict fwd =
      wedge_leq(cfg, W, gg, id, tol, g.seed, starts, iters, certify_out);
  const OrderVerdict rev =
      wedge_leq(cfg, W, id, gg, tol, g.seed, starts, iters, certify_out);

  Json out = Json::object();
  out.set("algebra_dim", Json::integer(L.dim));
  out.set("semigroup", Json::str(to_string(sv)));
  out.set("gW_leq_W", Json::str(to_string(fwd)));
  out.set("W_leq_gW", Json::str(to_string(rev)));
  const auto decoded = poincare_decode(L, gg.matrix, d, tol);
  out.set("decode_consistent",
          Json::boolean(decoded.has_value() &&
                        (decoded->first - lorentz).norm() < 1e-8 &&
                        (decoded->second - a).norm() < 1e-8));
  return out;
}

// ----------------------------------------------------------------------
// geom

Space parse_space(const std::string& s) {
  if (s == "mink") return Space::Minkowski;
  if (s == "ds") return Space::DeSitter;
  throw Error(Err::ParseError, "unknown space '" + s + "' (mink|ds)");
}

bool wedge_flag(Space space, const SpacetimePoint& x, double tol) {
  return space == Space::Minkowski ? in_wedge_WR(x)
                                   : wedge_region_dS_member(x, tol);
}

Json run_geom_member(const std::string& space_s, const std::string& x_spec,
                     const GlobalOpts& g) {
  const Space space = parse_space(space_s);
  const Eigen::VectorXd x = parse_vector(x_spec);
  const double tol = g.pick(1e-9);
  Json out = Json::object();
  out.set("on_manifold", Json::boolean(on_manifold(space, x, tol)));
  out.set("wedge_member", Json::boolean(wedge_flag(space, x, tol)));
  out.set("positivity_member",
          Json::boolean(positivity_region_member(space, x, tol)));
  return out;
}

Json run_geom_flow(const std::string& space_s, const std::string& x_spec,
                   const std::vector<double>& times, const GlobalOpts& g) {
  const Space space = parse_space(space_s);
  const Eigen::VectorXd x = parse_vector(x_spec);
  const double tol = g.pick(1e-9);
  const int d = static_cast<int>(x.size());
  if (d < 2) throw Error(Err::InvariantViolation, "need at least 2 coordinates");

  Json traj = Json::array();
  bool all_inside = true;
  for (double t : times) {
    const Eigen::VectorXd y = boost01_matrix(d, t) * x;
    const bool inside = wedge_flag(space, y, tol);
    all_inside = all_inside && inside;
    Json row = Json::object();
    row.set("t", Json::num(t));
    row.set("point", vec_to_json(y));
    row.set("wedge_member", Json::boolean(inside));
    traj.push(std::move(row));
  }
  Json out = Json::object();
  out.set("field_at_start",
          vec_to_json(modular_vector_field(ModularKind::boost_01, x)));
  out.set("start_in_wedge", Json::boolean(wedge_flag(space, x, tol)));
  out.set("trajectory", std::move(traj));
  out.set("stays_inside", Json::boolean(all_inside));
  return out;
}

Json run_geom_compress(int d, const std::string& lorentz_spec,
                       const std::string& trans_spec, int samples,
                       const GlobalOpts& g) {
  if (d < 2) throw Error(Err::InvariantViolation, "need d >= 2");
  const Eigen::MatrixXd lorentz = lorentz_spec.empty()
                                      ? Eigen::MatrixXd::Identity(d + 1, d + 1)
                                      : parse_matrix(lorentz_spec);
  const Eigen::VectorXd a = trans_spec.empty()
                                ? Eigen::VectorXd::Zero(d + 1)
                                : parse_vector(trans_spec);
  if (lorentz.rows() != d + 1 || lorentz.cols() != d + 1 || a.size() != d + 1)
    throw Error(Err::DimensionMismatch,
                "lorentz must be (d+1)x(d+1) and translation length d+1");
  const double tol = g.pick(1e-9);
  const IsometryElement iso = make_isometry(lorentz, a, tol);
  const bool exact = compression_member_poincare(iso, d, tol);
  const CompressionCheck sampled = sampled_compression_check(
      iso, [](const SpacetimePoint& x) { return in_wedge_WR(x); }, samples,
      g.seed);

  Json out = Json::object();
  out.set("exact_member", Json::boolean(exact));
  out.set("sampled_consistent", Json::boolean(sampled.consistent));
  out.set("agree", Json::boolean(exact == sampled.consistent));
  if (sampled.witness)
    out.set("witness", vec_to_json(*sampled.witness));
  return out;
}

// ----------------------------------------------------------------------
// stdsp

Json subspace_summary(const ComplexSpace& s, const RealSubspace& V,
                      const NumCtx& ctx, bool with_span) {
  Json out = Json::object();
  out.set("space_dim", Json::integer(s.n));
  out.set("subspace_dim", Json::integer(V.span_matrix.cols()));
  out.set("cyclic", Json::boolean(is_cyclic(s, V, ctx)));
  out.set("separating", Json::boolean(is_separating(s, V, ctx)));
  out.set("standard", Json::boolean(is_standard(s, V, ctx)));
  if (with_span) out.set("span", mat_to_json(V.span_matrix));
  return out;
}

Json run_stdsp_from_modular(const std::string& delta_file,
                            const std::string& j_file, const GlobalOpts& g,
                            Digest& dig) {
  const Eigen::MatrixXd delta = matrix_from_file(delta_file, dig);
  const Eigen::MatrixXd jmat = matrix_from_file(j_file, dig);
  if (delta.rows() != delta.cols() || delta.rows() % 2 != 0)
    throw Error(Err::DimensionMismatch, "Delta must be square 2n x 2n");
  const ComplexSpace s = make_space(static_cast<int>(delta.rows() / 2));
  const ModularPair pair = make_modular_pair(s, delta, jmat, g.pick(1e-10));
  const NumCtx ctx{g.tol, nullptr};
  const RealSubspace V = subspace_from_modular(s, pair, ctx);
  return subspace_summary(s, V, ctx, true);
}

Json run_stdsp_to_modular(const std::string& span_file, const GlobalOpts& g,
                          Digest& dig) {
  const Eigen::MatrixXd raw = matrix_from_file(span_file, dig);
  if (raw.rows() % 2 != 0)
    throw Error(Err::DimensionMismatch, "span rows must be even (2n)");
  const ComplexSpace s = make_space(static_cast<int>(raw.rows() / 2));
  const NumCtx ctx{g.tol, nullptr};
  const RealSubspace V = make_subspace(s, raw, ctx);
  const ModularPair pair = modular_from_subspace(s, V, ctx);
  const RealSubspace back = subspace_from_modular(s, pair, ctx);

  Json out = Json::object();
  out.set("space_dim", Json::integer(s.n));
  out.set("subspace_dim", Json::integer(V.span_matrix.cols()));
  out.set("delta", mat_to_json(pair.Delta));
  out.set("j", mat_to_json(pair.J));
  out.set("roundtrip_equal",
          Json::boolean(spans_equal(back.span_matrix, V.span_matrix, g.tol)));
  return out;
}

Json run_stdsp_complement(const std::string& span_file, const GlobalOpts& g,
                          Digest& dig) {
  const Eigen::MatrixXd raw = matrix_from_file(span_file, dig);
  if (raw.rows() % 2 != 0)
    throw Error(Err::DimensionMismatch, "span rows must be even (2n)");
  const ComplexSpace s = make_space(static_cast<int>(raw.rows() / 2));
  const NumCtx ctx{g.tol, nullptr};
  const RealSubspace V = make_subspace(s, raw, ctx);
  const RealSubspace Vp = symplectic_complement(s, V, ctx);
  Json out = subspace_summary(s, Vp, ctx, true);
  Json in = subspace_summary(s, V, ctx, false);
  out.set("input", std::move(in));
  return out;
}

Json run_stdsp_intersect(const std::string& span_file,
                         const std::vector<std::string>& op_files,
                         const GlobalOpts& g, Digest& dig) {
  const Eigen::MatrixXd raw = matrix_from_file(span_file, dig);
  if (raw.rows() % 2 != 0)
    throw Error(Err::DimensionMismatch, "span rows must be even (2n)");
  const ComplexSpace s = make_space(static_cast<int>(raw.rows() / 2));
  const NumCtx ctx{g.tol, nullptr};
  const RealSubspace V = make_subspace(s, raw, ctx);
  std::vector<AntiUnitaryOp> ops;
  for (const auto& f : op_files)
    ops.push_back(op_from_file(s, f, dig, g.pick(1e-9)));
  const RealSubspace W = intersect_family(s, V, ops, ctx);
  Json out = Json::object();
  out.set("space_dim", Json::integer(s.n));
  out.set("input_dim", Json::integer(V.span_matrix.cols()));
  out.set("operator_count", Json::integer(
      static_cast<long long>(ops.size())));
  out.set("intersection_dim", Json::integer(W.span_matrix.cols()));
  out.set("span", mat_to_json(W.span_matrix));
  return out;
}

Json run_stdsp_tensor(const std::string& a_file, const std::string& b_file,
                      const GlobalOpts& g, Digest& dig) {
  const Eigen::MatrixXd raw_a = matrix_from_file(a_file, dig);
  const Eigen::MatrixXd raw_b = matrix_from_file(b_file, dig);
  if (raw_a.rows() % 2 != 0 || raw_b.rows() % 2 != 0)
    throw Error(Err::DimensionMismatch, "span rows must be even (2n)");
  const ComplexSpace a = make_space(static_cast<int>(raw_a.rows() / 2));
  const ComplexSpace b = make_space(static_cast<int>(raw_b.rows() / 2));
  const NumCtx ctx{g.tol, nullptr};
  const RealSubspace Va = make_subspace(a, raw_a, ctx);
  const RealSubspace Vb = make_subspace(b, raw_b, ctx);
  const RealSubspace Vt = tensor(a, Va, b, Vb, ctx);
  const ComplexSpace t = tensor_space(a, b);
  Json out = Json::object();
  out.set("dim_a", Json::integer(a.n));
  out.set("dim_b", Json::integer(b.n));
  out.set("dim_tensor", Json::integer(t.n));
  out.set("subspace_dim", Json::integer(Vt.span_matrix.cols()));
  out.set("standard", Json::boolean(is_standard(t, Vt, ctx)));
  return out;
}

// ----------------------------------------------------------------------
// net

Json run_net_report(bool violating, int samples, const GlobalOpts& g) {
  const BuiltinNet net;
  const NetConfig cfg = violating ? net.violating() : net.compatible();
  const DirectNetReport rep = direct_net_report(cfg, samples, g.seed);
  Json out = Json::object();
  out.set("family_size", Json::integer(4));
  out.set("compressors_fix_v", Json::boolean(rep.compressors_fix_v));
  out.set("hmax_equals_v", Json::boolean(rep.hmax_equals_v));
  out.set("hmax_standard", Json::boolean(rep.hmax_standard));
  out.set("hmax_cyclic", Json::boolean(rep.hmax_cyclic));
  out.set("hmin_equals_v", Json::boolean(rep.hmin_equals_v));
  out.set("hmin_standard", Json::boolean(rep.hmin_standard));
  out.set("hmin_separating", Json::boolean(rep.hmin_separating));
  out.set("consistent", Json::boolean(rep.consistent));
  if (rep.violating_index)
    out.set("violating_index", Json::integer(*rep.violating_index));
  return out;
}

Json run_net_h(bool is_max, const std::string& region_spec, int samples,
               const GlobalOpts& g) {
  const BuiltinNet net;
  const NetConfig cfg = net.compatible();
  const Region O = parse_region(region_spec);
  const RealSubspace H = is_max ? h_max(cfg, O, samples, g.seed)
                                : h_min(cfg, O, samples, g.seed);
  Json out = Json::object();
  out.set("subspace_dim", Json::integer(H.span_matrix.cols()));
  out.set("equals_base",
          Json::boolean(spans_equal(H.span_matrix, cfg.V.span_matrix, g.tol)));
  const NumCtx ctx{g.tol, nullptr};
  out.set("standard", Json::boolean(is_standard(net.s, H, ctx)));
  return out;
}

Json run_net_degeneracy(bool violating, const GlobalOpts& g) {
  const BuiltinNet net;
  const NetConfig cfg = violating ? net.violating() : net.compatible();
  std::vector<AntiUnitaryOp> ops;
  for (const auto& fe : cfg.family) ops.push_back(fe.op);
  const NumCtx ctx{g.tol, nullptr};
  const DegeneracyReport rep = degeneracy_report(net.s, net.V, ops, ctx);
  Json out = Json::object();
  out.set("fixed_dim", Json::integer(rep.V_G.span_matrix.cols()));
  out.set("v_cap_vprime_dim",
          Json::integer(rep.V_cap_Vprime.span_matrix.cols()));
  out.set("equal", Json::boolean(rep.equal));
  return out;
}

// ----------------------------------------------------------------------
// model

struct ModelArgs {
  std::string kind;
  std::string demo;
  int N = 0;
  double p_min = 0.0;
  double p_max = 0.0;
  double half_width = 8.0;
};

void apply_model_defaults(ModelArgs& m) {
  if (m.N == 0) m.N = 128;
  if (m.p_min == 0.0 && m.p_max == 0.0) {
    if (m.demo == "kms") {
      m.p_min = 0.01;
      m.p_max = 100.0;
    } else if (m.demo == "codim") {
      m.p_min = 0.05;
      m.p_max = 60.0;
    } else {
      m.p_min = 0.05;
      m.p_max = 20.0;
    }
  }
}

Json run_model_kms(const ModelArgs& m) {
  Json out = Json::object();
  const TrendReport kms = kms_refinement(m.N, m.p_min, m.p_max);
  const TrendReport pairing = pairing_refinement(m.N, m.p_min, m.p_max);
  const TrendReport dil =
      dilation_defect_refinement(m.N, m.p_min, m.p_max, std::exp(0.37));
  out.set("kms_residual", trend_to_json(kms));
  out.set("pairing_error", trend_to_json(pairing));
  out.set("dilation_defect", trend_to_json(dil));
  out.set("verdict",
          Json::boolean(kms.improved && pairing.improved && dil.improved));
  return out;
}

// Overlapping sub-intervals of (1, 3); wide enough that the span of
// derivative dictionaries closes before the codimension count is read off.
const std::vector<std::pair<double, double>>& codim_intervals() {
  static const std::vector<std::pair<double, double>> v = {
      {1.0, 3.0}, {1.0, 2.0}, {2.0, 3.0}, {1.25, 2.75}, {1.5, 2.5}};
  return v;
}

Json codim_entry(const GridOperatorSet& ops, int k, int l, int dict,
                 bool& ok_out) {
  const Eigen::VectorXd s = codim_profile(ops, codim_intervals(), k, l, dict);
  const int expected = l - k;
  const bool ok = s(expected - 1) > 1e-2 && s(expected) < 1e-6;
  ok_out = ok;
  Json out = Json::object();
  out.set("k", Json::integer(k));
  out.set("l", Json::integer(l));
  out.set("expected", Json::integer(expected));
  out.set("s_kept_min", Json::num(s(expected - 1)));
  out.set("s_cut_max", Json::num(s(expected)));
  out.set("gap", Json::num(s(expected - 1) / std::max(s(expected), 1e-300)));
  out.set("ok", Json::boolean(ok));
  Json head = Json::array();
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(s.size(), expected + 3);
       ++i)
    head.push(Json::num(s(i)));
  out.set("profile_head", std::move(head));
  return out;
}

Json run_model_codim(const ModelArgs& m) {
  const int dict = 60;
  Json out = Json::object();
  out.set("dictionary_size", Json::integer(dict));
  bool all_ok = true;
  for (int N : {m.N, 2 * m.N}) {
    const GridOperatorSet ops = build_u1_current(N, m.p_min, m.p_max);
    Json res = Json::object();
    for (auto [k, l] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
      bool ok = false;
      Json e = codim_entry(ops, k, l, dict, ok);
      all_ok = all_ok && ok;
      res.set("k" + std::to_string(k) + "_l" + std::to_string(l),
              std::move(e));
    }
    out.set("N" + std::to_string(N), std::move(res));
  }
  out.set("verdict", Json::boolean(all_ok));
  return out;
}

Json run_model_regularity(const ModelArgs& m, const GlobalOpts& g) {
  Json out = Json::object();
  bool all_recovered = true;
  for (int N : {m.N, 2 * m.N}) {
    const GridOperatorSet ops = build_u1_current(N, m.p_min, m.p_max);
    const BglGridResult bgl = bgl_subspace_grid(ops);
    const std::vector<std::pair<double, double>> pairs = {
        {1.0, 0.3}, {0.7, -0.4}, {-0.5, 0.8}};
    Eigen::VectorXd scales(4);
    scales << 1.0, 0.5, 0.25, 0.1;
    const RegularityTrajectory traj =
        regularity_demo(ops, bgl.V, pairs, scales, g.pick(1e-5));
    Json r = Json::object();
    r.set("v_dim", Json::integer(traj.v_dim));
    r.set("max_kms_residual",
          Json::num(bgl.kms_residuals.size()
                        ? bgl.kms_residuals.maxCoeff()
                        : 0.0));
    Json ranks = Json::array();
    for (int v : traj.ranks) ranks.push(Json::integer(v));
    r.set("scales", vec_to_json(traj.scales));
    r.set("ranks", std::move(ranks));
    const bool recovered =
        !traj.ranks.empty() && traj.ranks.back() == traj.v_dim;
    r.set("recovered", Json::boolean(recovered));
    all_recovered = all_recovered && recovered;
    out.set("N" + std::to_string(N), std::move(r));
  }
  out.set("verdict", Json::boolean(all_recovered));
  return out;
}

Json run_model_spread(const ModelArgs& m) {
  Json out = Json::object();
  bool ok = true;
  for (int N : {m.N, 2 * m.N}) {
    const GridOperatorSet ops = build_aff_rep(N, m.half_width);
    const SpreadReport rep = shift_generator_spread(ops);
    Json r = Json::object();
    r.set("max_node_mass", Json::num(rep.max_node_mass));
    r.set("interior_count", Json::integer(rep.interior_count));
    ok = ok && rep.max_node_mass < 0.05 && rep.interior_count > N / 3;
    out.set("N" + std::to_string(N), std::move(r));
  }
  out.set("verdict", Json::boolean(ok));
  return out;
}

Json run_model_commutator(const ModelArgs& m) {
  const TrendReport tr = commutator_refinement(m.N, m.half_width);
  const GridOperatorSet ops = build_aff_rep(m.N, m.half_width);
  const double du = 2.0 * m.half_width / (m.N - 1);
  const double t = du * (m.N / 8);
  const double defect = scaling_conjugation_defect(ops, t);
  Json out = Json::object();
  out.set("commutator", trend_to_json(tr));
  out.set("conjugation_shift", Json::num(t));
  out.set("conjugation_defect", Json::num(defect));
  out.set("verdict", Json::boolean(tr.improved && defect < 1e-10));
  return out;
}

Json run_model(ModelArgs m, const GlobalOpts& g) {
  static const std::set<std::string> u1_demos = {"kms", "codim", "regularity"};
  static const std::set<std::string> aff_demos = {"spread", "commutator"};
  if (m.kind != "u1" && m.kind != "aff")
    throw Error(Err::ParseError, "unknown model '" + m.kind + "' (u1|aff)");
  const bool is_u1 = m.kind == "u1";
  if (is_u1 && !u1_demos.count(m.demo))
    throw Error(Err::InvariantViolation,
                "demo '" + m.demo + "' needs the line model 'aff'");
  if (!is_u1 && !aff_demos.count(m.demo))
    throw Error(Err::InvariantViolation,
                "demo '" + m.demo + "' needs the periodic model 'u1'");
  apply_model_defaults(m);
  if (m.demo == "kms") return run_model_kms(m);
  if (m.demo == "codim") return run_model_codim(m);
  if (m.demo == "regularity") return run_model_regularity(m, g);
  if (m.demo == "spread") return run_model_spread(m);
  return run_model_commutator(m);
}

// ----------------------------------------------------------------------
// tables

std::string canonical_table(const std::string& name) {
  if (name == "euler-nodes" || name == "eulelts2") return "euler-nodes";
  if (name == "symmetric-euler" || name == "symmeuler")
    return "symmetric-euler";
  throw Error(Err::ParseError,
              "unknown table '" + name +
                  "' (euler-nodes|symmetric-euler, aliases eulelts2|symmeuler)");
}

std::string table_path(const std::string& canonical, const std::string& dir) {
  const std::string base = canonical == "euler-nodes" ? "euler_nodes.json"
                                                      : "symmetric_euler.json";
  return dir + "/" + base;
}

std::set<int> computed_nodes(const std::string& canonical, Family fam,
                             int rank) {
  const RootSystem rs = build_root_system({fam, rank});
  if (canonical == "euler-nodes") return euler_nodes(rs);
  std::set<int> out;
  for (int j : euler_nodes(rs))
    if (is_symmetric_euler(rs, j)) out.insert(j);
  return out;
}

std::pair<Json, int> run_tables(const std::vector<std::string>& names,
                                const std::string& print_name,
                                const std::string& dir, Digest& dig) {
  Json out = Json::object();
  int rc = 0;
  if (!print_name.empty()) {
    const std::string canonical = canonical_table(print_name);
    const std::string path = table_path(canonical, dir);
    const nlohmann::json j = load_json_file(path, dig);
    Json tbl = Json::object();
    tbl.set("table", Json::str(canonical));
    if (j.contains("description"))
      tbl.set("description", Json::str(j.at("description").get<std::string>()));
    Json entries = Json::array();
    for (const auto& e : j.at("entries")) {
      Json row = Json::object();
      row.set("family", Json::str(e.at("family").get<std::string>()));
      row.set("rank", Json::integer(e.at("rank").get<int>()));
      Json nodes = Json::array();
      for (const auto& n : e.at("nodes")) nodes.push(Json::integer(n.get<int>()));
      row.set("nodes", std::move(nodes));
      entries.push(std::move(row));
    }
    tbl.set("entries", std::move(entries));
    out.set("print", std::move(tbl));
    return {std::move(out), 0};
  }

  Json checks = Json::array();
  for (const auto& name : names) {
    const std::string canonical = canonical_table(name);
    const std::string path = table_path(canonical, dir);
    const nlohmann::json j = load_json_file(path, dig);
    if (!j.is_object() || !j.contains("entries"))
      throw Error(Err::ParseError, path + ": expected {\"entries\": [...]}");
    int checked = 0;
    int mismatch_count = 0;
    Json mismatches = Json::array();
    for (const auto& e : j.at("entries")) {
      const Family fam = family_from_name(e.at("family").get<std::string>());
      const int rank = e.at("rank").get<int>();
      std::set<int> expected;
      for (const auto& n : e.at("nodes")) expected.insert(n.get<int>());
      const std::set<int> got = computed_nodes(canonical, fam, rank);
      ++checked;
      if (got != expected) {
        ++mismatch_count;
        Json mm = Json::object();
        mm.set("family", Json::str(family_name(fam)));
        mm.set("rank", Json::integer(rank));
        mm.set("expected", intset_to_json(expected));
        mm.set("computed", intset_to_json(got));
        mismatches.push(std::move(mm));
      }
    }
    if (mismatch_count > 0) rc = 1;
    Json one = Json::object();
    one.set("table", Json::str(canonical));
    one.set("file", Json::str(path));
    one.set("entries_checked", Json::integer(checked));
    one.set("mismatch_count", Json::integer(mismatch_count));
    if (mismatch_count > 0) one.set("mismatches", std::move(mismatches));
    one.set("pass", Json::boolean(mismatch_count == 0));
    checks.push(std::move(one));
  }
  out.set("checks", std::move(checks));
  out.set("pass", Json::boolean(rc == 0));
  return {std::move(out), rc};
}

// ----------------------------------------------------------------------
// Envelope and printing.

Json envelope(const std::string& command, const GlobalOpts& g,
              Json inputs, Json results, Digest& dig) {
  std::uint64_t h = fnv1a(command);
  h = fnv1a(inputs.dump(), h);
  h = fnv1a(dig.hex(), h);
  Digest final_dig;
  final_dig.h = h;

  Json root = Json::object();
  root.set("schema_version", Json::integer(1));
  root.set("tool_version", Json::str(kToolVersion));
  root.set("command", Json::str(command));
  root.set("inputs", std::move(inputs));
  root.set("inputs_digest", Json::str(final_dig.hex()));
  root.set("seed", Json::integer(g.seed));
  root.set("tol", Json::num(g.tol));
  root.set("results", std::move(results));
  return root;
}

void print_root(const Json& root, const GlobalOpts& g) {
  if (g.format == "json")
    std::cout << root.dump() << "\n";
  else
    std::cout << root.render_text();
}

}  // namespace

// ----------------------------------------------------------------------

int run_cli(int argc, const char* const* argv) {
  GlobalOpts g;
  bool env_tol = false;
  if (const char* env = std::getenv("EULERWEDGE_TOL")) {
    try {
      size_t pos = 0;
      g.tol = std::stod(env, &pos);
      if (pos != std::string(env).size()) throw std::invalid_argument(env);
      env_tol = true;
    } catch (const std::exception&) {
      std::cerr << "error: bad EULERWEDGE_TOL '" << env << "'\n";
      return 2;
    }
  }

  CLI::App app{
      "Euler-element toolkit: root-system node tables, Lie-algebra gradings, "
      "invariant cones, wedge order semigroups, causal geometry, standard "
      "subspaces, covariant nets, and grid models."};
  app.name("eulerwedge");
  app.fallthrough();
  app.require_subcommand(1);
  bool json_flag = false;
  app.add_option("--seed", g.seed, "Seed for all sampled certificates");
  app.add_option("--tol", g.tol, "Numerical tolerance override");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--json", json_flag, "Shorthand for --format json");
  app.add_flag("--parallel", g.parallel, "Classify ranks concurrently");

  // classify
  std::string cl_family;
  std::vector<int> cl_ranks;
  CLI::App* classify = app.add_subcommand(
      "classify", "Euler and symmetric nodes of a root-system family");
  classify->add_option("--family", cl_family, "A|B|C|D|E|F|G|BC")->required();
  classify->add_option("--rank", cl_ranks, "Ranks, comma separated")
      ->required()
      ->delimiter(',');

  // analyze
  std::string an_algebra, an_h;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Grading report for an element of a Lie algebra");
  analyze
      ->add_option("--algebra", an_algebra,
                   "builtin:KIND (gl2, sl3, so(3,1), aff(1), poincare(3)) or "
                   "a TOML file")
      ->required();
  analyze->add_option("--h", an_h, "Basis coordinates, comma separated")
      ->required();

  // cone
  CLI::App* cone = app.add_subcommand("cone", "Polyhedral-cone queries");
  cone->require_subcommand(1);
  std::string cm_file, cm_x;
  CLI::App* cone_member_cmd =
      cone->add_subcommand("member", "Nonnegative-span membership");
  cone_member_cmd->add_option("--file", cm_file, "Cone JSON file")->required();
  cone_member_cmd->add_option("--x", cm_x, "Point, comma separated")
      ->required();
  std::string cp_file, cp_algebra, cp_h, cp_x;
  CLI::App* cone_parts_cmd = cone->add_subcommand(
      "parts", "Graded parts of an invariant cone and the induced wedge");
  cone_parts_cmd->add_option("--file", cp_file, "Cone JSON file")->required();
  cone_parts_cmd->add_option("--algebra", cp_algebra, "Algebra spec")
      ->required();
  cone_parts_cmd->add_option("--h", cp_h, "Grading element coordinates")
      ->required();
  cone_parts_cmd->add_option("--x", cp_x, "Optional membership probe");

  // wedge
  CLI::App* wedge = app.add_subcommand(
      "wedge", "Order semigroup of the spacetime wedge in poincare(d)");
  wedge->require_subcommand(1);
  int wm_d = 3;
  std::string wm_lorentz, wm_trans;
  int wm_starts = 200, wm_iters = 100;
  bool wm_certify = false;
  CLI::App* wedge_member_cmd =
      wedge->add_subcommand("member", "Semigroup and order verdicts");
  wedge_member_cmd->add_option("--d", wm_d, "Spacetime dimension (default 3)");
  wedge_member_cmd->add_option("--lorentz", wm_lorentz,
                               "d x d matrix, rows ';' separated");
  wedge_member_cmd->add_option("--trans", wm_trans, "Translation, d entries");
  wedge_member_cmd->add_option("--starts", wm_starts,
                               "Certificate search restarts");
  wedge_member_cmd->add_option("--iters", wm_iters, "Iterations per start");
  wedge_member_cmd->add_flag("--certify-out", wm_certify,
                             "Search for a geometric Out witness");

  // geom
  CLI::App* geom = app.add_subcommand(
      "geom", "Wedge geometry on Minkowski space and de Sitter space");
  geom->require_subcommand(1);
  std::string gm_space = "mink", gm_x;
  CLI::App* geom_member_cmd =
      geom->add_subcommand("member", "Wedge and positivity membership");
  geom_member_cmd->add_option("--space", gm_space, "mink|ds");
  geom_member_cmd->add_option("--x", gm_x, "Point, comma separated")
      ->required();
  std::string gf_space = "mink", gf_x;
  std::vector<double> gf_times;
  CLI::App* geom_flow_cmd =
      geom->add_subcommand("flow", "Boost orbit through a point");
  geom_flow_cmd->add_option("--space", gf_space, "mink|ds");
  geom_flow_cmd->add_option("--x", gf_x, "Start point")->required();
  geom_flow_cmd->add_option("--t", gf_times, "Flow times, comma separated")
      ->required()
      ->delimiter(',');
  int gc_d = 3, gc_samples = 400;
  std::string gc_lorentz, gc_trans;
  CLI::App* geom_compress_cmd = geom->add_subcommand(
      "compress", "Wedge compression test for a Poincare isometry");
  geom_compress_cmd->add_option("--d", gc_d, "Spatial dimension count d");
  geom_compress_cmd->add_option("--lorentz", gc_lorentz,
                                "(d+1) x (d+1) matrix, rows ';' separated");
  geom_compress_cmd->add_option("--trans", gc_trans,
                                "Translation, d+1 entries");
  geom_compress_cmd->add_option("--samples", gc_samples, "Sampled points");

  // stdsp
  CLI::App* stdsp = app.add_subcommand(
      "stdsp", "Standard subspaces and modular pairs on C^n");
  stdsp->require_subcommand(1);
  std::string sm_delta, sm_j;
  CLI::App* stdsp_from_cmd = stdsp->add_subcommand(
      "from-modular", "Standard subspace of a modular pair");
  stdsp_from_cmd->add_option("--delta", sm_delta, "Delta matrix JSON file")
      ->required();
  stdsp_from_cmd->add_option("--j", sm_j, "Conjugation matrix JSON file")
      ->required();
  std::string st_span;
  CLI::App* stdsp_to_cmd = stdsp->add_subcommand(
      "to-modular", "Modular pair of a standard subspace");
  stdsp_to_cmd->add_option("--span", st_span, "Span matrix JSON file")
      ->required();
  std::string sc_span;
  CLI::App* stdsp_comp_cmd =
      stdsp->add_subcommand("complement", "Symplectic complement");
  stdsp_comp_cmd->add_option("--span", sc_span, "Span matrix JSON file")
      ->required();
  std::string si_span;
  std::vector<std::string> si_ops;
  CLI::App* stdsp_int_cmd = stdsp->add_subcommand(
      "intersect", "Intersection of images under an operator family");
  stdsp_int_cmd->add_option("--span", si_span, "Span matrix JSON file")
      ->required();
  stdsp_int_cmd
      ->add_option("--op", si_ops,
                   "Operator JSON file {matrix, parity}; repeatable")
      ->required();
  std::string sx_a, sx_b;
  CLI::App* stdsp_tensor_cmd =
      stdsp->add_subcommand("tensor", "Tensor product of two subspaces");
  stdsp_tensor_cmd->add_option("--a", sx_a, "First span JSON file")->required();
  stdsp_tensor_cmd->add_option("--b", sx_b, "Second span JSON file")
      ->required();

  // net
  CLI::App* net = app.add_subcommand(
      "net", "Built-in two-mode covariant net over R^{1,2}");
  net->require_subcommand(1);
  bool nr_violate = false;
  int nr_samples = 400;
  CLI::App* net_report_cmd = net->add_subcommand(
      "report", "Seven-way equivalence report at the base wedge");
  net_report_cmd->add_flag("--violate", nr_violate,
                           "Swap in a mixing operator that breaks covariance");
  net_report_cmd->add_option("--samples", nr_samples, "Region sample count");
  std::string nh_region;
  int nh_samples = 400;
  CLI::App* net_hmax_cmd =
      net->add_subcommand("hmax", "Intersection over wedges containing O");
  net_hmax_cmd->add_option("--region", nh_region, "ball:c0,c1,c2,r")
      ->required();
  net_hmax_cmd->add_option("--samples", nh_samples, "Region sample count");
  std::string nl_region;
  int nl_samples = 400;
  CLI::App* net_hmin_cmd =
      net->add_subcommand("hmin", "Span over wedges inside O");
  net_hmin_cmd->add_option("--region", nl_region, "ball:c0,c1,c2,r")
      ->required();
  net_hmin_cmd->add_option("--samples", nl_samples, "Region sample count");
  bool nd_violate = false;
  CLI::App* net_degen_cmd = net->add_subcommand(
      "degeneracy", "Fixed subspace of the family against V and V'");
  net_degen_cmd->add_flag("--violate", nd_violate,
                          "Use the covariance-breaking family");

  // model
  ModelArgs ma;
  CLI::App* model = app.add_subcommand(
      "model", "Grid models: periodic chiral current (u1) and line model (aff)");
  model->add_option("kind", ma.kind, "u1|aff")->required();
  model->add_option("--demo", ma.demo,
                    "u1: kms|codim|regularity; aff: spread|commutator")
      ->required();
  model->add_option("--N", ma.N, "Grid resolution (doubled internally)");
  model->add_option("--p-min", ma.p_min, "Lower end of the spectral range");
  model->add_option("--p-max", ma.p_max, "Upper end of the spectral range");
  model->add_option("--half-width", ma.half_width,
                    "Half width of the line grid (aff)");

  // tables
  std::vector<std::string> tb_names;
  std::string tb_print;
  std::string tb_dir = EW_DATA_DIR;
  CLI::App* tables = app.add_subcommand(
      "tables", "Check the shipped node tables against computed values");
  tables->add_option("--check", tb_names,
                     "Tables to verify (default: both)")
      ->delimiter(',');
  tables->add_option("--print", tb_print, "Print one table and exit");
  tables->add_option("--data", tb_dir, "Table directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (json_flag) g.format = "json";
  g.tol_explicit = env_tol || app.count("--tol") > 0;

  try {
    Digest dig;
    Json inputs = Json::object();
    Json results = Json::object();
    std::string command;
    int rc = 0;

    if (classify->parsed()) {
      command = "classify";
      inputs.set("family", Json::str(cl_family));
      Json ranks = Json::array();
      for (int r : cl_ranks) ranks.push(Json::integer(r));
      inputs.set("ranks", std::move(ranks));
      results = run_classify(cl_family, cl_ranks, g);
    } else if (analyze->parsed()) {
      command = "analyze";
      inputs.set("algebra", Json::str(an_algebra));
      inputs.set("h", Json::str(an_h));
      results = run_analyze(an_algebra, an_h, g, dig);
    } else if (cone_member_cmd->parsed()) {
      command = "cone member";
      inputs.set("file", Json::str(cm_file));
      inputs.set("x", Json::str(cm_x));
      results = run_cone_member(cm_file, cm_x, g, dig);
    } else if (cone_parts_cmd->parsed()) {
      command = "cone parts";
      inputs.set("file", Json::str(cp_file));
      inputs.set("algebra", Json::str(cp_algebra));
      inputs.set("h", Json::str(cp_h));
      if (!cp_x.empty()) inputs.set("x", Json::str(cp_x));
      results = run_cone_parts(cp_file, cp_algebra, cp_h, cp_x, g, dig);
    } else if (wedge_member_cmd->parsed()) {
      command = "wedge member";
      inputs.set("d", Json::integer(wm_d));
      inputs.set("lorentz", Json::str(wm_lorentz));
      inputs.set("trans", Json::str(wm_trans));
      inputs.set("starts", Json::integer(wm_starts));
      inputs.set("iters", Json::integer(wm_iters));
      inputs.set("certify_out", Json::boolean(wm_certify));
      results = run_wedge_member(wm_d, wm_lorentz, wm_trans, wm_starts,
                                 wm_iters, wm_certify, g);
    } else if (geom_member_cmd->parsed()) {
      command = "geom member";
      inputs.set("space", Json::str(gm_space));
      inputs.set("x", Json::str(gm_x));
      results = run_geom_member(gm_space, gm_x, g);
    } else if (geom_flow_cmd->parsed()) {
      command = "geom flow";
      inputs.set("space", Json::str(gf_space));
      inputs.set("x", Json::str(gf_x));
      Json ts = Json::array();
      for (double t : gf_times) ts.push(Json::num(t));
      inputs.set("t", std::move(ts));
      results = run_geom_flow(gf_space, gf_x, gf_times, g);
    } else if (geom_compress_cmd->parsed()) {
      command = "geom compress";
      inputs.set("d", Json::integer(gc_d));
      inputs.set("lorentz", Json::str(gc_lorentz));
      inputs.set("trans", Json::str(gc_trans));
      inputs.set("samples", Json::integer(gc_samples));
      results = run_geom_compress(gc_d, gc_lorentz, gc_trans, gc_samples, g);
    } else if (stdsp_from_cmd->parsed()) {
      command = "stdsp from-modular";
      inputs.set("delta", Json::str(sm_delta));
      inputs.set("j", Json::str(sm_j));
      results = run_stdsp_from_modular(sm_delta, sm_j, g, dig);
    } else if (stdsp_to_cmd->parsed()) {
      command = "stdsp to-modular";
      inputs.set("span", Json::str(st_span));
      results = run_stdsp_to_modular(st_span, g, dig);
    } else if (stdsp_comp_cmd->parsed()) {
      command = "stdsp complement";
      inputs.set("span", Json::str(sc_span));
      results = run_stdsp_complement(sc_span, g, dig);
    } else if (stdsp_int_cmd->parsed()) {
      command = "stdsp intersect";
      inputs.set("span", Json::str(si_span));
      Json ops = Json::array();
      for (const auto& f : si_ops) ops.push(Json::str(f));
      inputs.set("ops", std::move(ops));
      results = run_stdsp_intersect(si_span, si_ops, g, dig);
    } else if (stdsp_tensor_cmd->parsed()) {
      command = "stdsp tensor";
      inputs.set("a", Json::str(sx_a));
      inputs.set("b", Json::str(sx_b));
      results = run_stdsp_tensor(sx_a, sx_b, g, dig);
    } else if (net_report_cmd->parsed()) {
      command = "net report";
      inputs.set("violate", Json::boolean(nr_violate));
      inputs.set("samples", Json::integer(nr_samples));
      results = run_net_report(nr_violate, nr_samples, g);
    } else if (net_hmax_cmd->parsed()) {
      command = "net hmax";
      inputs.set("region", Json::str(nh_region));
      inputs.set("samples", Json::integer(nh_samples));
      results = run_net_h(true, nh_region, nh_samples, g);
    } else if (net_hmin_cmd->parsed()) {
      command = "net hmin";
      inputs.set("region", Json::str(nl_region));
      inputs.set("samples", Json::integer(nl_samples));
      results = run_net_h(false, nl_region, nl_samples, g);
    } else if (net_degen_cmd->parsed()) {
      command = "net degeneracy";
      inputs.set("violate", Json::boolean(nd_violate));
      results = run_net_degeneracy(nd_violate, g);
    } else if (model->parsed()) {
      command = "model " + ma.kind;
      ModelArgs effective = ma;
      apply_model_defaults(effective);
      inputs.set("kind", Json::str(ma.kind));
      inputs.set("demo", Json::str(ma.demo));
      inputs.set("N", Json::integer(effective.N));
      if (ma.kind == "u1") {
        inputs.set("p_min", Json::num(effective.p_min));
        inputs.set("p_max", Json::num(effective.p_max));
      } else {
        inputs.set("half_width", Json::num(effective.half_width));
      }
      results = run_model(ma, g);
    } else if (tables->parsed()) {
      command = "tables";
      std::vector<std::string> names = tb_names;
      if (names.empty() && tb_print.empty())
        names = {"euler-nodes", "symmetric-euler"};
      Json ns = Json::array();
      for (const auto& n : names) ns.push(Json::str(n));
      inputs.set("check", std::move(ns));
      if (!tb_print.empty()) inputs.set("print", Json::str(tb_print));
      inputs.set("data", Json::str(tb_dir));
      auto [res, table_rc] = run_tables(names, tb_print, tb_dir, dig);
      results = std::move(res);
      rc = table_rc;
    }

    print_root(envelope(command, g, std::move(inputs), std::move(results),
                        dig),
               g);
    return rc;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_io_error(e.code()) ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ew::cli
