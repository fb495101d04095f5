#include "warpcone/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "warpcone/baselines.hpp"
#include "warpcone/dynamics.hpp"
#include "warpcone/embed.hpp"
#include "warpcone/spectral.hpp"
#include "warpcone/warp.hpp"
#include "csv.hpp"

namespace warpcone {

namespace {

struct RunState {
  const Config* cfg = nullptr;
  std::string name;
  long long seed = 0;
  long long cap = 0;  // 0 -> per-experiment default
  std::vector<std::string> failures;
  // filename -> content, written at the end in insertion order
  std::vector<std::pair<std::string, std::string>> files;
  Config manifest;

  void check(bool cond, const std::string& msg) {
    if (!cond) failures.push_back(msg);
  }
  void note(const std::string& section, const std::string& key, double v) {
    manifest.set(section, key, csv_num(v));
  }
  void note(const std::string& section, const std::string& key, const std::string& v) {
    manifest.set(section, key, v);
  }
};

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir == ".") return file;
  if (dir.back() == '/') return dir + file;
  return dir + "/" + file;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<double> getd_list(const Config& cfg, const std::string& sec, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : cfg.list(sec, key)) out.push_back(parse_rat(tok).to_double());
  if (out.empty()) throw std::invalid_argument("config: empty list [" + sec + "] " + key);
  return out;
}

std::vector<long long> geti_list(const Config& cfg, const std::string& sec, const std::string& key) {
  std::vector<long long> out;
  for (const auto& tok : cfg.list(sec, key)) out.push_back(std::stoll(tok));
  if (out.empty()) throw std::invalid_argument("config: empty list [" + sec + "] " + key);
  return out;
}

// ---------------------------------------------------------------------------
// [space] / [action] construction

SpaceKind parse_space_kind(const std::string& s) {
  if (s == "torus") return SpaceKind::torus;
  if (s == "sphere3") return SpaceKind::sphere3;
  if (s == "profinite") return SpaceKind::profinite;
  throw std::invalid_argument("config: unknown space kind '" + s + "'");
}

std::vector<Rat> parse_rat_list(const Config& cfg, const std::string& sec, const std::string& key) {
  std::vector<Rat> out;
  for (const auto& tok : cfg.list(sec, key)) out.push_back(parse_rat(tok));
  return out;
}

}  // namespace

BuiltAction make_built_action(const Config& cfg) {
  NetSpec ns;
  const std::string kind = cfg.get("space", "kind");
  ns.kind = parse_space_kind(kind);
  ns.resolution = static_cast<int>(cfg.geti_or("space", "resolution", 16));
  ns.dim = static_cast<int>(cfg.geti_or("space", "dim", 1));
  ns.seed = static_cast<std::uint64_t>(cfg.geti_or("space", "seed", 1));
  ns.certify_samples = static_cast<int>(cfg.geti_or("space", "certify_samples", 0));
  if (ns.kind == SpaceKind::profinite) {
    long long base = cfg.geti_or("space", "base", 2);
    long long depth = cfg.geti_or("space", "depth", 3);
    double lambda = cfg.getd_or("space", "lambda", 0.5);
    ns.profinite = ProfiniteSpec::cyclic_tower(base, static_cast<int>(depth), lambda);
  }

  BuiltAction b;
  b.inner_space = std::make_shared<FiniteSpace>(build_net(ns));

  const std::string akind = cfg.get("action", "kind");
  if (akind == "trivial") {
    b.inner = trivial_action(b.inner_space);
  } else if (akind == "rotation") {
    b.inner = rotation_action(b.inner_space, parse_rat_list(cfg, "action", "shift"));
  } else if (akind == "cyclic-rotation") {
    long long mod = cfg.geti("action", "mod");
    b.inner = cyclic_rotation_action(b.inner_space, mod, parse_rat_list(cfg, "action", "shift"));
  } else if (akind == "double-rotation") {
    b.inner = double_rotation_action(b.inner_space, parse_rat_list(cfg, "action", "shift"),
                                     parse_rat_list(cfg, "action", "shift2"));
  } else if (akind == "sl2") {
    b.inner = sl2_action(b.inner_space);
  } else if (akind == "quaternion") {
    b.inner = quaternion_action(b.inner_space);
  } else if (akind == "profinite-shift") {
    b.inner = profinite_shift_action(b.inner_space);
  } else {
    throw std::invalid_argument("config: unknown action kind '" + akind + "'");
  }

  b.wrap = cfg.get_or("space", "wrap", "none");
  if (b.wrap == "none") {
    b.space = b.inner_space;
    b.action = b.inner;
  } else if (b.wrap == "cone") {
    std::vector<double> thetas;
    for (const auto& r : parse_rat_list(cfg, "space", "thetas")) thetas.push_back(r.to_double());
    std::sort(thetas.begin(), thetas.end());
    auto cone = std::make_shared<FiniteSpace>(compact_cone_space(b.inner_space, thetas));
    b.space = cone;
    b.action = cone_lift_action(b.inner, cone);
  } else if (b.wrap == "ext") {
    double sd = cfg.getd_or("space", "star_distance", 0.0);
    if (sd <= 0.0) {
      double diam = b.inner_space->diameter();
      sd = diam > 0.0 ? diam : 1.0;
    }
    auto ext = std::make_shared<FiniteSpace>(one_point_extension(b.inner_space, sd));
    b.space = ext;
    b.action = star_extension_action(b.inner, ext);
  } else {
    throw std::invalid_argument("config: unknown wrap '" + b.wrap + "'");
  }
  return b;
}

namespace {

// ---------------------------------------------------------------------------
// warp-metric: warped level matrices with the defining inequalities asserted.

void exp_warp_metric(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  std::vector<double> levels = getd_list(cfg, "params", "levels");
  const std::string rule_s = cfg.get_or("params", "rule", "complete");
  BaseEdgeRule rule = BaseEdgeRule::complete;
  int knn_k = 0;
  if (rule_s == "knn") {
    rule = BaseEdgeRule::knn;
    knn_k = static_cast<int>(cfg.geti("params", "knn_k"));
  } else if (rule_s != "complete") {
    throw std::invalid_argument("config: unknown rule '" + rule_s + "'");
  }
  std::size_t mem_cap = st.cap > 0 ? static_cast<std::size_t>(st.cap)
                                   : std::size_t(512) * 1024 * 1024;

  std::ostringstream csv;
  csv << "r,i,j,distance\n";
  double snap_max = 0.0;
  for (double r : levels) {
    WarpedLevel lvl = build_warped_level(built.action, r, rule, knn_k, mem_cap);
    snap_max = std::max(snap_max, lvl.snap_error_max);
    const FiniteSpace& sp = *built.action.space;
    for (std::size_t i = 0; i < static_cast<std::size_t>(lvl.n); ++i) {
      for (std::size_t j = 0; j < static_cast<std::size_t>(lvl.n); ++j) {
        double dij = lvl.d(i, j);
        csv << csv_num(r) << "," << csv_num(static_cast<long long>(i)) << ","
            << csv_num(static_cast<long long>(j)) << "," << csv_num(dij) << "\n";
        if (rule == BaseEdgeRule::complete && !lvl.knn_fallback_used) {
          st.check(dij <= r * sp.dist(i, j),
                   "warp-metric: base bound violated at r=" + csv_num(r) + " pair (" +
                       std::to_string(i) + "," + std::to_string(j) + "): " + csv_num(dij) +
                       " > " + csv_num(r * sp.dist(i, j)));
        }
      }
      for (std::size_t g = 0; g < built.action.maps.size(); ++g) {
        std::size_t t = lvl.shortcut_to[i][g];
        st.check(lvl.d(i, t) <= 1.0,
                 "warp-metric: shortcut bound violated at r=" + csv_num(r) + " point " +
                     std::to_string(i) + " generator " + std::to_string(g) + ": " +
                     csv_num(lvl.d(i, t)) + " > 1");
      }
    }
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.note("results", "snap_error_max", snap_max);
  st.note("tolerances", "base_bound", "exact");
  st.note("tolerances", "shortcut_bound", "exact");
}

// ---------------------------------------------------------------------------
// quotient-check: induced quotient metric against the warped matrix.

void exp_quotient_check(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  std::vector<double> levels = getd_list(cfg, "params", "levels");
  std::size_t hop_cap = static_cast<std::size_t>(cfg.geti_or("params", "hop_cap", 0));
  bool expect_exact = cfg.geti_or("params", "expect_exact", 0) != 0;

  std::ostringstream csv;
  csv << "r,hop_cap,max_discrepancy,tol,argmax_x,argmax_xp,snap_error_max\n";
  double worst = 0.0;
  for (double r : levels) {
    QuotientCheckResult q = quotient_metric_check(built.action, r, hop_cap);
    csv << csv_num(r) << "," << csv_num(static_cast<long long>(q.hop_cap)) << ","
        << csv_num(q.max_discrepancy) << "," << csv_num(q.tol) << ","
        << csv_num(static_cast<long long>(q.argmax_x)) << ","
        << csv_num(static_cast<long long>(q.argmax_xp)) << ","
        << csv_num(q.snap_error_max) << "\n";
    worst = std::max(worst, q.max_discrepancy);
    st.check(q.max_discrepancy <= q.tol,
             "quotient-check: discrepancy above tolerance at r=" + csv_num(r) + ": " +
                 csv_num(q.max_discrepancy) + " > " + csv_num(q.tol) + " at pair (" +
                 std::to_string(q.argmax_x) + "," + std::to_string(q.argmax_xp) + ")");
    if (expect_exact) {
      st.check(q.max_discrepancy == 0.0,
               "quotient-check: expected exact agreement at r=" + csv_num(r) +
                   " but discrepancy is " + csv_num(q.max_discrepancy) + " at pair (" +
                   std::to_string(q.argmax_x) + "," + std::to_string(q.argmax_xp) + ")");
    }
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.note("results", "max_discrepancy", worst);
}

// ---------------------------------------------------------------------------
// faithful-radius: dichotomy per requested radius.

const char* faith_status_name(FaithStatus s) {
  switch (s) {
    case FaithStatus::faithful_at: return "faithful_at";
    case FaithStatus::failure: return "failure";
    default: return "undetermined";
  }
}

void exp_faithful_radius(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  std::vector<long long> radii = geti_list(cfg, "params", "radii");
  std::vector<double> schedule = getd_list(cfg, "params", "schedule");
  const std::string expect = cfg.get_or("params", "expect", "faithful");
  if (expect != "faithful" && expect != "failure") {
    throw std::invalid_argument("config: expect must be faithful or failure");
  }

  ActionFactory factory = [built](double) { return built.action; };

  std::ostringstream csv, lv;
  csv << "N,status,level,epsilon,witness_word,witness_point\n";
  lv << "N,level,injective,iso_defect,tol,pass\n";
  double prev_level = 0.0;
  for (long long N : radii) {
    FaithfulnessReport rep = faithfulness_radius(factory, static_cast<int>(N), schedule);
    csv << csv_num(N) << "," << faith_status_name(rep.status) << ","
        << csv_num(rep.level) << "," << csv_num(rep.epsilon) << ","
        << rep.witness_word << "," << csv_num(static_cast<long long>(rep.witness_point))
        << "\n";
    for (const auto& row : rep.rows) {
      lv << csv_num(N) << "," << csv_num(row.level) << ","
         << csv_num(static_cast<long long>(row.injective ? 1 : 0)) << ","
         << csv_num(row.iso_defect) << "," << csv_num(row.tol) << ","
         << csv_num(static_cast<long long>(row.pass ? 1 : 0)) << "\n";
    }
    if (expect == "faithful") {
      st.check(rep.status == FaithStatus::faithful_at,
               "faithful-radius: expected a faithful level at N=" + std::to_string(N) +
                   " but status is " + faith_status_name(rep.status));
      st.check(rep.level >= prev_level,
               "faithful-radius: level decreased at N=" + std::to_string(N) + ": " +
                   csv_num(rep.level) + " < " + csv_num(prev_level));
      prev_level = rep.level;
    } else {
      st.check(rep.status == FaithStatus::failure,
               "faithful-radius: expected failure at N=" + std::to_string(N) +
                   " but status is " + faith_status_name(rep.status));
      st.check(!rep.witness_word.empty(),
               "faithful-radius: failure reported without a witness word at N=" +
                   std::to_string(N));
    }
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.files.emplace_back(st.name + "_levels.csv", lv.str());
  st.note("results", "expect", expect);
}

// ---------------------------------------------------------------------------
// schreier-family / spectral: shared row writer.

SpectralReport spectral_row(std::ostringstream& csv, long long label, const Graph& g,
                            std::size_t exhaustive_limit, RunState& st,
                            const std::string& who, bool assert_sandwich) {
  SpectralReport sp = spectral_gap(g);
  CheegerResult ch = cheeger_bounds(g, exhaustive_limit);
  double dlb = sp.components == 1 ? distortion_lower_bound(g) : 0.0;
  csv << csv_num(label) << "," << csv_num(static_cast<long long>(g.n)) << ","
      << csv_num(sp.lambda1_norm) << "," << csv_num(sp.lambda1_comb) << ","
      << csv_num(ch.lower) << "," << csv_num(ch.upper) << "," << csv_num(dlb) << "\n";
  if (assert_sandwich && ch.exact.has_value()) {
    st.check(ch.lower <= *ch.exact + 1e-12 && *ch.exact <= ch.upper + 1e-12,
             who + ": Cheeger sandwich violated at n=" + std::to_string(label) + ": " +
                 csv_num(ch.lower) + " <= " + csv_num(*ch.exact) + " <= " +
                 csv_num(ch.upper) + " fails");
  }
  return sp;
}

void exp_schreier_family(RunState& st) {
  const Config& cfg = *st.cfg;
  std::vector<long long> moduli = geti_list(cfg, "params", "moduli");
  bool assert_connected = cfg.geti_or("params", "assert_connected", 1) != 0;
  bool assert_prime_count = cfg.geti_or("params", "assert_prime_count", 0) != 0;
  double floor = cfg.getd_or("params", "gap_floor", -1.0);
  std::size_t exhaustive = static_cast<std::size_t>(cfg.geti_or("params", "exhaustive_limit", 20));

  GroupPresentation g = sl2z_presentation();
  std::ostringstream csv;
  csv << "n,vertices,lambda1_norm,lambda1_comb,cheeger_lower,cheeger_upper,distortion_lb\n";
  double min_gap = std::numeric_limits<double>::infinity();
  for (long long n : moduli) {
    SchreierGraph sg = schreier_graph(g, n, {1, 0});
    SpectralReport sp = spectral_row(csv, n, sg.graph, exhaustive, st, "schreier-family", true);
    if (assert_connected) {
      st.check(sp.components == 1, "schreier-family: graph disconnected at n=" +
                                       std::to_string(n) + " (" +
                                       std::to_string(sp.components) + " components)");
    }
    if (assert_prime_count) {
      st.check(static_cast<long long>(sg.graph.n) == n * n - 1,
               "schreier-family: vertex count at n=" + std::to_string(n) + " is " +
                   std::to_string(sg.graph.n) + ", expected " + std::to_string(n * n - 1));
    }
    min_gap = std::min(min_gap, sp.lambda1_norm);
  }
  if (floor >= 0.0) {
    st.check(min_gap >= floor - baselines::kFloorTol,
             "schreier-family: normalized gap fell below the floor: " + csv_num(min_gap) +
                 " < " + csv_num(floor));
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.note("results", "min_lambda1_norm", min_gap);
}

void exp_spectral(RunState& st) {
  const Config& cfg = *st.cfg;
  const std::string graph = cfg.get("params", "graph");
  std::size_t exhaustive = static_cast<std::size_t>(cfg.geti_or("params", "exhaustive_limit", 20));

  std::ostringstream csv;
  csv << "n,vertices,lambda1_norm,lambda1_comb,cheeger_lower,cheeger_upper,distortion_lb\n";
  std::vector<double> gaps;
  if (graph == "cycle" || graph == "complete") {
    for (long long n : geti_list(cfg, "params", "sizes")) {
      Graph g = graph == "cycle" ? cycle_graph(static_cast<std::size_t>(n))
                                 : complete_graph(static_cast<std::size_t>(n));
      gaps.push_back(spectral_row(csv, n, g, exhaustive, st, "spectral", true).lambda1_norm);
    }
  } else if (graph == "random") {
    long long n = cfg.geti("params", "n");
    long long extra = cfg.geti_or("params", "extra_edges", n);
    long long count = cfg.geti_or("params", "count", 1);
    for (long long i = 0; i < count; ++i) {
      Graph g = random_connected_graph(static_cast<std::size_t>(n),
                                       static_cast<std::size_t>(extra),
                                       static_cast<std::uint64_t>(st.seed + i));
      gaps.push_back(spectral_row(csv, i, g, exhaustive, st, "spectral", true).lambda1_norm);
    }
  } else if (graph == "action-level") {
    std::vector<double> levels = getd_list(cfg, "params", "levels");
    double res_factor = cfg.getd_or("params", "resolution_factor", 4.0);
    long long ring_k = cfg.geti_or("params", "ring_k", 2);
    for (double r : levels) {
      Config c2 = cfg;
      c2.set("space", "resolution",
             std::to_string(static_cast<long long>(std::lround(r * res_factor))));
      BuiltAction built = make_built_action(c2);
      Graph g = action_level_graph(built.action, static_cast<int>(ring_k));
      gaps.push_back(spectral_row(csv, static_cast<long long>(std::lround(r)), g,
                                  exhaustive, st, "spectral", false)
                         .lambda1_norm);
    }
  } else {
    throw std::invalid_argument("config: unknown graph kind '" + graph + "'");
  }

  if (cfg.geti_or("params", "assert_gap_decreasing", 0) != 0 && gaps.size() >= 2) {
    st.check(gaps.front() > gaps.back(),
             "spectral: gap did not decrease across levels: first " + csv_num(gaps.front()) +
                 " vs last " + csv_num(gaps.back()));
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  if (!gaps.empty()) {
    st.note("results", "first_lambda1_norm", gaps.front());
    st.note("results", "last_lambda1_norm", gaps.back());
  }
}

// ---------------------------------------------------------------------------
// distortion: Kuratowski embedding of the space or of a warped level.

void exp_distortion(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  std::vector<double> ps = getd_list(cfg, "params", "p");
  const std::string metric = cfg.get_or("params", "metric", "space");
  double band = cfg.getd_or("params", "assert_band", 0.0);
  bool assert_upper = cfg.geti_or("params", "assert_upper", 1) != 0;

  const FiniteSpace& sp = *built.space;
  std::vector<double> dmat;
  std::size_t n = sp.size();
  if (metric == "space") {
    dmat.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dmat[i * n + j] = sp.dist(i, j);
  } else if (metric == "warped") {
    double r = cfg.getd("params", "r");
    WarpedLevel lvl = build_warped_level(built.action, r);
    dmat = lvl.dmat;
  } else {
    throw std::invalid_argument("config: metric must be space or warped");
  }

  std::ostringstream csv, rho;
  csv << "p,expansion_max,contraction_min,distortion,zero_pairs\n";
  rho << "p,d,rho_minus,rho_plus\n";
  double dist_min = std::numeric_limits<double>::infinity();
  double dist_max = 0.0;
  for (double p : ps) {
    EmbeddingTable table = kuratowski_embed_matrix(dmat, n, sp.weights, p);
    DistortionReport rep = distortion(dmat, n, table);
    csv << csv_num(p) << "," << csv_num(rep.expansion_max) << ","
        << csv_num(rep.contraction_min) << "," << csv_num(rep.distortion) << ","
        << csv_num(static_cast<long long>(rep.zero_pairs)) << "\n";
    for (const auto& s : rep.rho_samples) {
      rho << csv_num(p) << "," << csv_num(s.d) << "," << csv_num(s.rho_minus) << ","
          << csv_num(s.rho_plus) << "\n";
    }
    if (assert_upper) {
      double mu = std::pow(sp.total_weight(), 1.0 / p);
      st.check(rep.expansion_max <= mu + 1e-9,
               "distortion: expansion above the mass bound at p=" + csv_num(p) + ": " +
                   csv_num(rep.expansion_max) + " > " + csv_num(mu));
    }
    dist_min = std::min(dist_min, rep.distortion);
    dist_max = std::max(dist_max, rep.distortion);
  }
  if (band > 0.0 && ps.size() >= 2) {
    st.check(dist_max <= band * dist_min,
             "distortion: spread across p exceeds the band: " + csv_num(dist_max) + " > " +
                 csv_num(band) + " * " + csv_num(dist_min));
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.files.emplace_back(st.name + "_rho.csv", rho.str());
  st.note("results", "distortion_min", dist_min);
  st.note("results", "distortion_max", dist_max);
}

// ---------------------------------------------------------------------------
// embed-profinite: closed-form distortion of the tower embedding.

void exp_embed_profinite(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  const FiniteSpace& sp = *built.space;
  if (sp.kind != SpaceKind::profinite) {
    throw std::invalid_argument("config: embed-profinite requires a profinite space");
  }
  std::vector<double> ps = getd_list(cfg, "params", "p");
  double tol = cfg.getd_or("params", "tol", 1e-9);

  const ProfiniteSpec& spec_ = *sp.profinite_;

  std::ostringstream csv;
  csv << "p,distortion,closed_form,expansion_max,contraction_min\n";
  for (double p : ps) {
    EmbeddingTable table = profinite_embed(spec_, sp.points, p);
    DistortionReport rep = distortion(sp, table);
    double lam_p = p == 1.0   ? spec_.lambda
                   : p == 2.0 ? spec_.lambda * spec_.lambda
                              : std::pow(spec_.lambda, p);
    double closed = 1.0 / (p == 1.0   ? (1.0 - lam_p)
                           : p == 2.0 ? std::sqrt(1.0 - lam_p)
                                      : std::pow(1.0 - lam_p, 1.0 / p));
    csv << csv_num(p) << "," << csv_num(rep.distortion) << "," << csv_num(closed) << ","
        << csv_num(rep.expansion_max) << "," << csv_num(rep.contraction_min) << "\n";
    st.check(std::fabs(rep.distortion - closed) <= tol,
             "embed-profinite: measured distortion misses the closed form at p=" +
                 csv_num(p) + ": " + csv_num(rep.distortion) + " vs " + csv_num(closed));
    if (p == 1.0 && spec_.lambda == 0.5) {
      st.check(rep.distortion == 2.0,
               "embed-profinite: p=1 distortion is " + csv_num(rep.distortion) +
                   ", expected exactly 2");
    }
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.note("tolerances", "closed_form", tol);
}

// ---------------------------------------------------------------------------
// kernel-check: truncated kernel, symmetry, properness, negative-type form.

void exp_kernel_check(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  std::vector<double> levels = getd_list(cfg, "params", "levels");
  int word_radius = static_cast<int>(cfg.geti("params", "word_radius"));
  int support_radius = static_cast<int>(cfg.geti_or("params", "support_radius", word_radius));
  long long trials = cfg.geti_or("params", "trials", 200);
  double ndc_tol = cfg.getd_or("params", "ndc_tol", 1e-8);
  bool expect_exact_symmetry = cfg.geti_or("params", "expect_exact_symmetry", 0) != 0;

  std::vector<EmbeddingTable> embeds;
  for (double r : levels) {
    WarpedLevel lvl = build_warped_level(built.action, r);
    embeds.push_back(kuratowski_embed_matrix(lvl.dmat, lvl.n, built.space->weights, 2.0));
  }
  KernelData k = truncated_kernel(built.action, levels, embeds, word_radius);

  double h_id_max = 0.0;
  for (double v : k.h[0]) h_id_max = std::max(h_id_max, std::fabs(v));
  st.check(h_id_max == 0.0,
           "kernel-check: kernel at the identity is not zero, max " + csv_num(h_id_max));
  if (expect_exact_symmetry) {
    st.check(k.symmetry_defect == 0.0, "kernel-check: symmetry defect is " +
                                           csv_num(k.symmetry_defect) + ", expected 0");
  }

  NdcResult ndc = negative_definite_check(k, support_radius, static_cast<int>(trials),
                                          static_cast<std::uint64_t>(st.seed));
  st.check(ndc.max_form <= ndc_tol,
           "kernel-check: negative-type form reached " + csv_num(ndc.max_form) +
               " above tolerance " + csv_num(ndc_tol));

  std::ostringstream csv, prop;
  csv << "word_radius,levels,snap_error_max,symmetry_defect,h_identity_max,"
         "ndc_max_form,ndc_trials,ndc_skipped\n";
  csv << csv_num(static_cast<long long>(word_radius)) << ","
      << csv_num(static_cast<long long>(levels.size())) << ","
      << csv_num(k.snap_error_max) << "," << csv_num(k.symmetry_defect) << ","
      << csv_num(h_id_max) << "," << csv_num(ndc.max_form) << ","
      << csv_num(static_cast<long long>(ndc.trials)) << ","
      << csv_num(static_cast<long long>(ndc.skipped)) << "\n";
  prop << "word_length,min_h\n";
  std::vector<double> profile = properness_profile(k);
  for (std::size_t l = 0; l < profile.size(); ++l) {
    prop << csv_num(static_cast<long long>(l)) << "," << csv_num(profile[l]) << "\n";
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.files.emplace_back(st.name + "_properness.csv", prop.str());
  st.note("tolerances", "ndc", ndc_tol);
  st.note("results", "ndc_max_form", ndc.max_form);
}

// ---------------------------------------------------------------------------
// roe-transfer: coarse transfer maps, mass defects, window comparison.

void exp_roe_transfer(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  double r = cfg.getd("params", "r");
  int n_label = static_cast<int>(cfg.geti_or("params", "n", 1));
  double delta = cfg.getd_or("params", "delta", 0.0);
  const std::string maps_kind = cfg.get_or("params", "maps", "folner");

  PropertyAMaps maps;
  double expected = -1.0;
  if (maps_kind == "folner") {
    long long gen = cfg.geti_or("params", "gen", 0);
    long long half = cfg.geti("params", "half_width");
    maps = folner_window(built.action, static_cast<std::size_t>(gen),
                         static_cast<int>(half));
    if (cfg.geti_or("params", "expect_folner_defect", 1) != 0) {
      expected = 2.0 / static_cast<double>(2 * half + 1);
    }
  } else if (maps_kind == "point-mass") {
    maps = point_mass_maps(built.action);
  } else {
    throw std::invalid_argument("config: maps must be folner or point-mass");
  }

  TransferResult res = roe_transfer(built.action, r, maps, n_label, delta);
  std::ostringstream csv;
  csv << "n,m,r,delta,defect,mass_deficit_max\n";
  csv << csv_num(static_cast<long long>(res.n)) << ","
      << csv_num(static_cast<long long>(res.m)) << "," << csv_num(res.r) << ","
      << csv_num(res.delta) << "," << csv_num(res.defect) << ","
      << csv_num(res.mass_deficit_max) << "\n";
  st.files.emplace_back(st.name + ".csv", csv.str());

  if (expected >= 0.0) {
    st.check(std::fabs(res.defect - expected) <= 1e-9,
             "roe-transfer: window defect is " + csv_num(res.defect) + ", expected " +
                 csv_num(expected));
  }
  if (cfg.geti_or("params", "assert_inequality", 1) != 0) {
    st.check(res.defect <= res.comparison_rhs + 1e-12,
             "roe-transfer: defect " + csv_num(res.defect) +
                 " exceeds the window comparison " + csv_num(res.comparison_rhs));
  }
  st.note("results", "epsilon", res.epsilon);
  st.note("results", "comparison_rhs", res.comparison_rhs);
  st.note("results", "defect", res.defect);
}

// ---------------------------------------------------------------------------
// cone-slice: slice of the warped cone against the rescaled warped level.

void exp_cone_slice(RunState& st) {
  const Config& cfg = *st.cfg;
  BuiltAction built = make_built_action(cfg);
  if (built.wrap != "cone") {
    throw std::invalid_argument("config: cone-slice requires wrap = cone");
  }
  double scale = cfg.getd("params", "scale");
  bool expect_exact = cfg.geti_or("params", "expect_exact", 0) != 0;

  WarpedLevel cone_lvl = build_warped_level(built.action, scale);
  const FiniteSpace& cone_sp = *built.space;
  const FiniteSpace& base_sp = *built.inner_space;
  double lip = built.inner.max_lipschitz();

  std::set<double> thetas;
  for (std::size_t i = 0; i < cone_sp.points.size(); ++i) {
    if (cone_sp.cone_base_index[i] >= 0) thetas.insert(cone_sp.cone_thetas[i]);
  }

  std::ostringstream csv;
  csv << "theta,scale,slice_points,max_discrepancy,tol\n";
  double worst = 0.0;
  for (double theta : thetas) {
    std::vector<std::size_t> slice;
    for (std::size_t i = 0; i < cone_sp.points.size(); ++i) {
      if (cone_sp.cone_thetas[i] == theta) slice.push_back(i);
    }
    WarpedLevel lvl = build_warped_level(built.inner, theta * scale);
    double disc = 0.0;
    for (std::size_t a = 0; a < slice.size(); ++a) {
      for (std::size_t b = 0; b < slice.size(); ++b) {
        auto ba = static_cast<std::size_t>(cone_sp.cone_base_index[slice[a]]);
        auto bb = static_cast<std::size_t>(cone_sp.cone_base_index[slice[b]]);
        disc = std::max(disc, std::fabs(cone_lvl.d(slice[a], slice[b]) - lvl.d(ba, bb)));
      }
    }
    double tol = 4.0 * base_sp.mesh * scale * lip;
    csv << csv_num(theta) << "," << csv_num(scale) << ","
        << csv_num(static_cast<long long>(slice.size())) << "," << csv_num(disc) << ","
        << csv_num(tol) << "\n";
    st.check(disc <= tol, "cone-slice: slice discrepancy at theta=" + csv_num(theta) +
                              " is " + csv_num(disc) + " above tolerance " + csv_num(tol));
    if (expect_exact) {
      st.check(disc == 0.0, "cone-slice: expected exact slice agreement at theta=" +
                                csv_num(theta) + " but discrepancy is " + csv_num(disc));
    }
    worst = std::max(worst, disc);
  }
  st.files.emplace_back(st.name + ".csv", csv.str());
  st.note("results", "max_discrepancy", worst);
}

// ---------------------------------------------------------------------------
// report: merge previously produced CSV files into one long-format table.

void exp_report(RunState& st, const std::string& out_dir) {
  const Config& cfg = *st.cfg;
  std::ostringstream out;
  out << "source,row,column,value\n";
  for (const auto& fname : cfg.list("report", "files")) {
    std::ifstream in(join_path(out_dir, fname));
    if (!in) throw std::invalid_argument("report: cannot open input file " + fname);
    std::string line;
    std::vector<std::string> header;
    long long rownum = 0;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::string cur;
      for (char c : line) {
        if (c == ',') {
          cells.push_back(cur);
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      cells.push_back(cur);
      if (header.empty()) {
        header = cells;
        continue;
      }
      for (std::size_t c = 0; c < cells.size(); ++c) {
        out << fname << "," << rownum << ","
            << (c < header.size() ? header[c] : "col" + std::to_string(c)) << ","
            << cells[c] << "\n";
      }
      ++rownum;
    }
  }
  st.files.emplace_back(st.name + "_report.csv", out.str());
}

std::string render_manifest(const RunState& st, const std::string& experiment) {
  Config m;
  m.set("run", "version", kArtifactVersion);
  m.set("run", "experiment", experiment);
  m.set("run", "name", st.name);
  m.set("run", "seed", std::to_string(st.seed));
  m.set("run", "status", st.failures.empty() ? "pass" : "fail");
  for (const auto& sec : st.manifest.sections) {
    for (const auto& kv : sec.entries) m.set(sec.name, kv.first, kv.second);
  }
  for (const auto& sec : st.cfg->sections) {
    for (const auto& kv : sec.entries) m.set(sec.name, kv.first, kv.second);
  }
  std::ostringstream out;
  write_config(m, out);
  return out.str();
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "warp-metric",   "quotient-check", "faithful-radius", "schreier-family",
      "spectral",      "distortion",     "embed-profinite", "kernel-check",
      "roe-transfer",  "cone-slice",     "report"};
  return kinds;
}

RunOutcome run_scenario(const Config& cfg, const std::string& experiment,
                        const RunOptions& opt) {
  RunOutcome out;
  RunState st;
  st.cfg = &cfg;
  try {
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), experiment) == kinds.end()) {
      throw std::invalid_argument("unknown experiment kind '" + experiment + "'");
    }
    st.name = cfg.get("scenario", "name");
    const std::string declared = cfg.get("scenario", "kind");
    if (declared != experiment) {
      throw std::invalid_argument("config declares kind '" + declared +
                                  "' but experiment '" + experiment + "' was requested");
    }
    st.seed = opt.seed.value_or(cfg.geti_or("params", "seed", 1));
    st.cap = opt.cap.value_or(cfg.geti_or("params", "cap", 0));

    if (experiment == "warp-metric") exp_warp_metric(st);
    else if (experiment == "quotient-check") exp_quotient_check(st);
    else if (experiment == "faithful-radius") exp_faithful_radius(st);
    else if (experiment == "schreier-family") exp_schreier_family(st);
    else if (experiment == "spectral") exp_spectral(st);
    else if (experiment == "distortion") exp_distortion(st);
    else if (experiment == "embed-profinite") exp_embed_profinite(st);
    else if (experiment == "kernel-check") exp_kernel_check(st);
    else if (experiment == "roe-transfer") exp_roe_transfer(st);
    else if (experiment == "cone-slice") exp_cone_slice(st);
    else if (experiment == "report") exp_report(st, opt.out_dir);
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.failures.push_back(e.what());
    return out;
  }

  try {
    st.files.emplace_back(st.name + ".manifest", render_manifest(st, experiment));
    for (const auto& f : st.files) {
      write_file(join_path(opt.out_dir, f.first), f.second);
      out.outputs.push_back(f.first);
    }
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.failures.push_back(e.what());
    return out;
  }

  out.failures = st.failures;
  out.exit_code = st.failures.empty() ? 0 : 1;
  return out;
}

}  // namespace warpcone
