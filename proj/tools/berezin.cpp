// Command-line front end: spanning trees, edge probabilities, transfer
// matrices, sampling, cumulant tables, superintegration and the invariant
// battery. Exit status: 0 success, 1 property failure, 2 usage or input error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include "CLI11.hpp"
#include "json.hpp"

#include "berezin/cumulants.hpp"
#include "berezin/graph.hpp"
#include "berezin/graph_io.hpp"
#include "berezin/superspace.hpp"
#include "berezin/verify.hpp"
#include "berezin/wilson.hpp"

using json = nlohmann::ordered_json;
using namespace berezin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string mode = "exact";
  std::string format = "json";
  std::uint64_t seed = 1;
  std::string graph;
  std::size_t root = 0;
  std::string edges;
  std::string excluded;
  std::size_t samples = 30000;
  std::string lattice = "6x6";
  std::string boundary = "all-sides";
  std::size_t kmax = 3;
  std::string a;
  std::string matrix;
  std::string g;
  std::size_t instances = 100;
};

template <Scalar T>
json value(const T& v) {
  if constexpr (std::is_same_v<T, Rational>)
    return v.str();
  else
    return v;
}

template <Scalar T>
json matrix_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(value(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

template <Scalar T>
std::string matrix_tsv(const Matrix<T>& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << ScalarTraits<T>::to_string(m(i, j)) << (j + 1 == m.cols() ? '\n' : '\t');
  return out.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::size_t parse_index(const std::string& s, const char* what) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ArgumentError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

/// "0-1,1-2" → edge indices of g.
template <Scalar T>
std::vector<std::size_t> parse_edge_list(const WeightedGraph<T>& g, const std::string& spec) {
  std::vector<std::size_t> out;
  for (const auto& item : split(spec, ',')) {
    const auto ends = split(item, '-');
    if (ends.size() != 2) throw ArgumentError("edges are written u-v, got '" + item + "'");
    out.push_back(g.edge_index(parse_index(ends[0], "vertex"), parse_index(ends[1], "vertex")));
  }
  return out;
}

template <Scalar T>
json edge_json(const WeightedGraph<T>& g, const std::vector<std::size_t>& edges) {
  json arr = json::array();
  for (auto k : edges) arr.push_back({g.oriented(k).from, g.oriented(k).to});
  return arr;
}

void emit(const Options& opt, const json& j, const std::string& tsv) {
  if (opt.format == "tsv")
    std::cout << tsv;
  else
    std::cout << j.dump(2) << '\n';
}

// ---- subcommands ----

template <Scalar T>
int count_trees(const Options& opt) {
  const auto g = read_graph_file<T>(opt.graph);
  json out;
  out["vertices"] = g.vertex_count();
  out["edges"] = g.edge_count();
  out["root"] = opt.root;
  const auto det = tree_count(g, opt.root);
  out["det"] = value(det.value);
  bool agree = true;
  std::string tsv = "route\tvalue\ndet\t" + ScalarTraits<T>::to_string(det.value) + "\n";
  if (g.vertex_count() <= 13) {
    const T b = tree_count_berezin(g, opt.root);
    out["berezin"] = value(b);
    agree = agree && ScalarTraits<T>::equal(b, det.value);
    tsv += "berezin\t" + ScalarTraits<T>::to_string(b) + "\n";
  }
  if (g.edge_count() <= kMaxEnumerationEdges) {
    const T e = enumerate_trees(g).total;
    out["enumeration"] = value(e);
    agree = agree && ScalarTraits<T>::equal(e, det.value);
    tsv += "enumeration\t" + ScalarTraits<T>::to_string(e) + "\n";
  }
  out["agree"] = agree;
  emit(opt, out, tsv);
  return agree ? kExitOk : kExitFailure;
}

template <Scalar T>
int edge_prob(const Options& opt) {
  const auto g = read_graph_file<T>(opt.graph);
  const auto f = parse_edge_list(g, opt.edges);
  const auto fx = parse_edge_list(g, opt.excluded);
  json out;
  out["edges"] = edge_json(g, f);
  out["exclude_edges"] = edge_json(g, fx);
  std::map<std::string, T> routes;
  if (fx.empty()) {
    routes["determinantal"] = edge_inclusion_probability(g, f, opt.root);
  } else {
    routes["inclusion_exclusion"] = edge_event_inclusion_exclusion(g, f, fx, opt.root);
  }
  routes["fermionic"] = edge_event_probability(g, f, fx, opt.root);
  if (g.edge_count() <= kMaxEnumerationEdges) routes["enumeration"] = enumerate_trees(g).probability(f, fx);
  bool agree = true;
  std::string tsv = "route\tvalue\n";
  const T& ref = routes.begin()->second;
  for (const auto& [name, v] : routes) {
    out[name] = value(v);
    agree = agree && ScalarTraits<T>::equal(v, ref);
    tsv += name + "\t" + ScalarTraits<T>::to_string(v) + "\n";
  }
  out["agree"] = agree;
  emit(opt, out, tsv);
  return agree ? kExitOk : kExitFailure;
}

template <Scalar T>
int transfer(const Options& opt) {
  const auto g = read_graph_file<T>(opt.graph);
  std::vector<std::size_t> f = parse_edge_list(g, opt.edges);
  if (f.empty()) {
    f.resize(g.edge_count());
    std::iota(f.begin(), f.end(), 0);
  }
  const auto ti = transfer_impedance(g, opt.root, std::span<const std::size_t>(f));
  json out;
  out["root"] = opt.root;
  out["edges"] = edge_json(g, f);
  out["T"] = matrix_json(ti.bare);
  out["Y"] = matrix_json(ti.weighted);
  emit(opt, out, "# T\n" + matrix_tsv(ti.bare) + "# Y\n" + matrix_tsv(ti.weighted));
  return kExitOk;
}

double chi2_critical_99(std::size_t dof) {
  return boost::math::quantile(boost::math::chi_squared(static_cast<double>(dof)), 0.99);
}

template <Scalar T>
int sample(const Options& opt) {
  const auto g = read_graph_file<T>(opt.graph);
  std::map<SpanningTree, std::size_t> freq;
  for (std::size_t s = 0; s < opt.samples; ++s) ++freq[sample_ust(g, opt.seed + s, opt.root)];
  json out;
  out["samples"] = opt.samples;
  out["seed"] = opt.seed;
  json trees = json::array();
  std::string tsv = "tree\tcount\texpected\n";
  bool pass = true;
  if (g.edge_count() <= kMaxEnumerationEdges) {
    const auto en = enumerate_trees(g);
    double chi2 = 0;
    for (std::size_t k = 0; k < en.trees.size(); ++k) {
      const double p = ScalarTraits<T>::to_double(en.weights[k] / en.total);
      const double expected = p * static_cast<double>(opt.samples);
      const auto it = freq.find(en.trees[k]);
      const std::size_t count = it == freq.end() ? 0 : it->second;
      const double diff = static_cast<double>(count) - expected;
      chi2 += diff * diff / expected;
      trees.push_back({{"edges", edge_json(g, en.trees[k].edges)}, {"count", count}, {"expected", expected}});
      tsv += edge_json(g, en.trees[k].edges).dump() + "\t" + std::to_string(count) + "\t" +
             std::to_string(expected) + "\n";
    }
    const std::size_t dof = en.trees.size() > 1 ? en.trees.size() - 1 : 1;
    out["chi2"] = chi2;
    out["dof"] = dof;
    out["critical_99"] = chi2_critical_99(dof);
    pass = en.trees.size() == 1 || chi2 < chi2_critical_99(dof);
    out["pass"] = pass;
    tsv += "# chi2\t" + std::to_string(chi2) + "\tdof\t" + std::to_string(dof) + "\n";
  } else {
    for (const auto& [t, c] : freq) {
      trees.push_back({{"edges", edge_json(g, t.edges)}, {"count", c}});
      tsv += edge_json(g, t.edges).dump() + "\t" + std::to_string(c) + "\t\n";
    }
  }
  out["trees"] = trees;
  emit(opt, out, tsv);
  return pass ? kExitOk : kExitFailure;
}

GridSpec parse_lattice(const Options& opt) {
  std::vector<std::size_t> sides;
  for (const auto& s : split(opt.lattice, 'x')) sides.push_back(parse_index(s, "lattice side"));
  if (sides.empty()) throw ArgumentError("lattice is written LxW");
  if (opt.boundary != "all-sides") throw ArgumentError("only --boundary all-sides is supported");
  return GridSpec::all_sides(sides);
}

template <Scalar T>
int cumulants(const Options& opt) {
  const GridSpec grid = parse_lattice(opt);
  const auto cov = dgff_covariance<T>(grid);
  std::vector<std::size_t> anchor(grid.dimension(), 1);
  if (grid.dimension() > 1) anchor[1] = grid.sides[1] / 2;
  json out;
  out["lattice"] = grid.sides;
  out["boundary"] = opt.boundary;
  std::string tsv;
  for (auto q : {TableQuantity::field_squared, TableQuantity::gradient_squared}) {
    const auto rows = cumulant_table(grid, cov, q, opt.kmax, anchor);
    json arr = json::array();
    for (const auto& r : rows) {
      json pts = json::array();
      for (const auto& p : r.points) pts.push_back(p);
      arr.push_back({{"k", r.k}, {"points", pts}, {"value", value(r.value)}});
    }
    out[to_string(q)] = arr;
    tsv += std::string("# ") + to_string(q) + "\n" + to_tsv(rows);
  }
  emit(opt, out, tsv);
  return kExitOk;
}

Matrix<Rational> parse_matrix(const std::string& spec) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : split(spec, ';')) {
    rows.emplace_back();
    for (const auto& c : split(r, ',')) rows.back().push_back(parse_rational(c));
  }
  Matrix<Rational> m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ArgumentError("matrix rows differ in length");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

int susy(const Options& opt) {
  Matrix<Rational> a;
  if (!opt.matrix.empty())
    a = parse_matrix(opt.matrix);
  else
    a = Matrix<Rational>{{parse_rational(opt.a.empty() ? "1" : opt.a)}};
  std::vector<Rational> g;
  for (const auto& c : split(opt.g, ',')) g.push_back(parse_rational(c));
  const SuperFunction f = g.empty() ? supergaussian(a) : polynomial_of_form(a, g);
  const auto r = localization_check(f);
  json out;
  out["matrix"] = matrix_json(r.matrix);
  out["integral"] = value(r.integral);
  out["body_at_zero"] = value(r.body_at_zero);
  out["q_closed"] = r.q_closed;
  emit(opt, out,
       "integral\t" + r.integral.str() + "\nbody_at_zero\t" + r.body_at_zero.str() + "\nq_closed\t" +
           (r.q_closed ? "true" : "false") + "\n");
  return r.consistent() ? kExitOk : kExitFailure;
}

int verify(const Options& opt) {
  const auto results = run_verification({opt.seed, opt.instances});
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  if (opt.format == "tsv") {
    std::cout << "status\tproperty\tinstances\tcounterexample\n";
    for (const auto& r : results)
      std::cout << (r.passed ? "PASS" : "FAIL") << '\t' << r.module << '.' << r.name << '\t' << r.instances << '\t'
                << r.counterexample << '\n';
  } else {
    std::cout << transcript(results);
  }
  return ok ? kExitOk : kExitFailure;
}

/// Runs f with the coefficient type selected by --mode.
template <typename F>
int with_mode(const Options& opt, F&& f) {
  return opt.mode == "float" ? f(double{}) : f(Rational{});
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Grassmann calculus, spanning trees, Gaussian cumulants and superintegration"};
  app.require_subcommand(1);
  app.add_option("--mode", opt.mode, "coefficient arithmetic")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--seed", opt.seed, "random seed");

  auto graph_cmd = [&](const std::string& name, const std::string& help) {
    auto* c = app.add_subcommand(name, help)->fallthrough();
    c->add_option("graph", opt.graph, "edge-list file")->required();
    c->add_option("--root", opt.root, "root vertex");
    return c;
  };
  auto* ct = graph_cmd("count-trees", "spanning-tree count by determinant, Berezin integral and enumeration");
  auto* ep = graph_cmd("edge-prob", "probability that a uniform spanning tree contains and avoids edge sets");
  ep->add_option("--edges", opt.edges, "included edges, e.g. 0-1,1-2");
  ep->add_option("--exclude-edges", opt.excluded, "excluded edges");
  auto* tr = graph_cmd("transfer", "transfer-impedance matrices");
  tr->add_option("--edges", opt.edges, "edges to index the matrix (default: all)");
  auto* sm = graph_cmd("sample", "Wilson sampler frequencies against exact tree probabilities");
  sm->add_option("--samples", opt.samples, "number of samples");
  sm->add_option("--seed", opt.seed, "random seed");

  auto* cu = app.add_subcommand("cumulants", "squared-field and gradient-squared cumulant tables of the DGFF")->fallthrough();
  cu->add_option("--lattice", opt.lattice, "box sides, e.g. 6x6");
  cu->add_option("--boundary", opt.boundary, "zero-boundary set")->check(CLI::IsMember({"all-sides"}));
  cu->add_option("--kmax", opt.kmax, "largest cumulant order")->check(CLI::Range(1, 5));

  auto* su = app.add_subcommand("susy", "superintegral and localization report for g((u,Au)) exp(-(u,Au))")->fallthrough();
  su->add_option("--a", opt.a, "single-site coefficient a (A = [a])");
  su->add_option("--matrix", opt.matrix, "symmetric matrix, rows split by ';', e.g. 2,1;1,3");
  su->add_option("--g", opt.g, "coefficients of g, constant first (default: g = 1)");

  auto* ve = app.add_subcommand("verify", "seeded invariant battery")->fallthrough();
  ve->add_option("--seed", opt.seed, "random seed");
  ve->add_option("--instances", opt.instances, "instances per calculus property")->check(CLI::Range(1, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ct->parsed()) return with_mode(opt, [&](auto t) { return count_trees<decltype(t)>(opt); });
    if (ep->parsed()) return with_mode(opt, [&](auto t) { return edge_prob<decltype(t)>(opt); });
    if (tr->parsed()) return with_mode(opt, [&](auto t) { return transfer<decltype(t)>(opt); });
    if (sm->parsed()) return with_mode(opt, [&](auto t) { return sample<decltype(t)>(opt); });
    if (cu->parsed()) return with_mode(opt, [&](auto t) { return cumulants<decltype(t)>(opt); });
    if (su->parsed()) return susy(opt);
    if (ve->parsed()) return verify(opt);
  } catch (const berezin::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
