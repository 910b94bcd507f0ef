#include "wardrobe/segmentation.hpp"

#include "wardrobe/bvh.hpp"
#include "wardrobe/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wardrobe {
namespace {

std::vector<std::vector<int>> adjacency(const MrfProblem& problem) {
  std::vector<std::vector<int>> adj(problem.vertex_count());
  for (const Edge& e : problem.edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  return adj;
}

double local_cost(const MrfProblem& problem, const std::vector<std::vector<int>>& adj, const std::vector<int>& labels,
                  int v, int l) {
  double c = problem.unary(v, l);
  if (problem.prior.size() != 0) c += problem.lambda_prior * problem.prior(v, l);
  int cut = 0;
  for (int w : adj[v]) cut += labels[w] != l;
  return c + problem.lambda_pair * cut;
}

std::vector<int> row_argmin(const Eigen::MatrixXd& table) {
  std::vector<int> out(table.rows());
  for (Eigen::Index v = 0; v < table.rows(); ++v) {
    Eigen::Index arg = 0;
    table.row(v).minCoeff(&arg);  // first minimum, so the lowest label on ties
    out[v] = static_cast<int>(arg);
  }
  return out;
}

std::vector<int> icm(const MrfProblem& problem, const std::vector<std::vector<int>>& adj, std::vector<int> labels) {
  const int n = problem.vertex_count(), L = problem.label_count();
  for (int sweep = 0; sweep < 10000; ++sweep) {
    bool changed = false;
    for (int v = 0; v < n; ++v) {
      double best = local_cost(problem, adj, labels, v, labels[v]);
      int best_label = labels[v];
      for (int l = 0; l < L; ++l) {
        const double c = local_cost(problem, adj, labels, v, l);
        if (c < best) {
          best = c;
          best_label = l;
        }
      }
      if (best_label != labels[v]) {
        labels[v] = best_label;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return labels;
}

// Relabels whole same-label connected components; applies the single most
// improving move, returns false when none lowers the energy.
bool component_move(const MrfProblem& problem, const std::vector<std::vector<int>>& adj, std::vector<int>& labels) {
  const int n = problem.vertex_count(), L = problem.label_count();
  std::vector<int> component(n, -1);
  double best_delta = -1e-12;
  std::vector<int> best_members;
  int best_label = -1;
  for (int seed = 0; seed < n; ++seed) {
    if (component[seed] >= 0) continue;
    const int cur = labels[seed];
    std::vector<int> members{seed};
    component[seed] = seed;
    for (size_t i = 0; i < members.size(); ++i) {
      for (int w : adj[members[i]]) {
        if (component[w] < 0 && labels[w] == cur) {
          component[w] = seed;
          members.push_back(w);
        }
      }
    }
    for (int l = 0; l < L; ++l) {
      if (l == cur) continue;
      double delta = 0.0;
      for (int v : members) {
        delta += problem.unary(v, l) - problem.unary(v, cur);
        if (problem.prior.size() != 0) delta += problem.lambda_prior * (problem.prior(v, l) - problem.prior(v, cur));
        for (int w : adj[v]) {
          if (component[w] != seed) delta += problem.lambda_pair * ((labels[w] != l) - 1.0);
        }
      }
      if (delta < best_delta) {
        best_delta = delta;
        best_members = members;
        best_label = l;
      }
    }
  }
  if (best_label < 0) return false;
  for (int v : best_members) labels[v] = best_label;
  return true;
}

// Dinic max-flow on a small dense-indexed graph; after run(), reachable()
// marks the source side of a minimum cut.
class FlowGraph {
 public:
  explicit FlowGraph(int nodes) : head_(nodes, -1), level_(nodes), next_(nodes) {}

  void add_edge(int from, int to, double cap, double reverse_cap = 0.0) {
    arcs_.push_back({to, head_[from], cap});
    head_[from] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({from, head_[to], reverse_cap});
    head_[to] = static_cast<int>(arcs_.size()) - 1;
  }

  double run(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      next_ = head_;
      while (const double f = push(s, t, std::numeric_limits<double>::infinity())) flow += f;
    }
    return flow;
  }

  [[nodiscard]] bool reachable(int v) const { return level_[v] >= 0; }

 private:
  struct Arc {
    int to;
    int next;
    double cap;
  };
  static constexpr double kEps = 1e-15;

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> queue{s};
    level_[s] = 0;
    for (size_t i = 0; i < queue.size(); ++i) {
      for (int a = head_[queue[i]]; a >= 0; a = arcs_[a].next) {
        if (arcs_[a].cap > kEps && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[queue[i]] + 1;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double push(int v, int t, double limit) {
    if (v == t) return limit;
    for (int& a = next_[v]; a >= 0; a = arcs_[a].next) {
      Arc& arc = arcs_[a];
      if (arc.cap <= kEps || level_[arc.to] != level_[v] + 1) continue;
      if (const double f = push(arc.to, t, std::min(limit, arc.cap)); f > 0.0) {
        arc.cap -= f;
        arcs_[a ^ 1].cap += f;
        return f;
      }
    }
    return 0.0;
  }

  std::vector<Arc> arcs_;
  std::vector<int> head_, level_, next_;
};

// Best alpha-expansion for label `alpha` (exact min cut for Potts pairwise
// terms). Returns true and updates `labels` if it lowers the energy.
bool expansion_move(const MrfProblem& problem, std::vector<int>& labels, int alpha) {
  const int n = problem.vertex_count();
  const int s = n, t = n + 1;
  FlowGraph graph(n + 2);
  auto cost = [&](int v, int l) {
    double c = problem.unary(v, l);
    if (problem.prior.size() != 0) c += problem.lambda_prior * problem.prior(v, l);
    return c;
  };
  // x_v = 1 means "switch to alpha"; source side is x = 0.
  std::vector<double> linear(n, 0.0);
  for (int v = 0; v < n; ++v) {
    if (labels[v] != alpha) linear[v] += cost(v, alpha) - cost(v, labels[v]);
  }
  const double lam = problem.lambda_pair;
  for (const Edge& e : problem.edges) {
    const int u = e[0], v = e[1];
    const double A = lam * (labels[u] != labels[v]), B = lam * (labels[u] != alpha);
    const double C = lam * (alpha != labels[v]);
    const bool u_free = labels[u] != alpha, v_free = labels[v] != alpha;
    if (u_free && v_free) {
      // A + (C - A) x_u + (0 - C) x_v + (B + C - A) (1 - x_u) x_v
      linear[u] += C - A;
      linear[v] -= C;
      graph.add_edge(u, v, B + C - A);
    } else if (u_free) {
      linear[u] -= A;  // A (1 - x_u)
    } else if (v_free) {
      linear[v] -= A;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (labels[v] == alpha) continue;
    if (linear[v] > 0.0) graph.add_edge(s, v, linear[v]);
    else if (linear[v] < 0.0) graph.add_edge(v, t, -linear[v]);
  }
  graph.run(s, t);
  std::vector<int> proposal = labels;
  for (int v = 0; v < n; ++v) {
    if (labels[v] != alpha && !graph.reachable(v)) proposal[v] = alpha;
  }
  if (mrf_energy(problem, proposal) < mrf_energy(problem, labels) - 1e-12) {
    labels = std::move(proposal);
    return true;
  }
  return false;
}

std::vector<int> local_search(const MrfProblem& problem, const std::vector<std::vector<int>>& adj,
                              std::vector<int> labels) {
  for (;;) {
    labels = icm(problem, adj, std::move(labels));
    if (component_move(problem, adj, labels)) continue;
    bool expanded = false;
    for (int alpha = 0; alpha < problem.label_count(); ++alpha) {
      expanded = expansion_move(problem, labels, alpha) || expanded;
    }
    if (!expanded) return labels;
  }
}

}  // namespace

GarmentPrior build_prior(const TriMesh& body, const std::vector<int>& region, double kappa) {
  const int n = body.vertex_count();
  if (region.empty()) throw Error("build_prior: empty region");
  if (!(kappa >= 0.0)) throw Error("build_prior: kappa must be nonnegative");
  GarmentPrior prior;
  prior.region.assign(n, 0);
  for (int v : region) {
    if (v < 0 || v >= n) throw Error("build_prior: region vertex " + std::to_string(v) + " out of range");
    prior.region[v] = 1;
  }
  const auto nbrs = vertex_neighbors(body);
  std::vector<int> boundary;
  for (int v = 0; v < n; ++v) {
    if (!prior.region[v]) continue;
    if (std::any_of(nbrs[v].begin(), nbrs[v].end(), [&](int w) { return !prior.region[w]; })) boundary.push_back(v);
  }
  if (boundary.empty()) throw Error("build_prior: region has no boundary (it covers its whole component)");

  const std::vector<double> dist = geodesic_distance(body, boundary);
  prior.cost_in.assign(n, 0.0);
  prior.cost_out.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    // Vertices unreachable from the boundary are in a different component; they stay at cost 0.
    const double d = std::isfinite(dist[v]) ? kappa * dist[v] : 0.0;
    (prior.region[v] ? prior.cost_in : prior.cost_out)[v] = d;
  }
  return prior;
}

Eigen::MatrixXd prior_cost_table(const std::vector<GarmentPrior>& priors, const std::vector<int>& prior_labels,
                                 int label_count) {
  if (priors.size() != prior_labels.size()) throw Error("prior_cost_table: one label per prior required");
  if (priors.empty()) return {};
  const auto n = static_cast<Eigen::Index>(priors.front().region.size());
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n, label_count);
  for (size_t p = 0; p < priors.size(); ++p) {
    const int g = prior_labels[p];
    if (g < 0 || g >= label_count) throw Error("prior_cost_table: prior label out of range");
    if (static_cast<Eigen::Index>(priors[p].region.size()) != n) throw Error("prior_cost_table: size mismatch");
    for (Eigen::Index v = 0; v < n; ++v) {
      for (int l = 0; l < label_count; ++l) {
        table(v, l) += (l == g) ? priors[p].cost_out[v] : priors[p].cost_in[v];
      }
    }
  }
  return table;
}

void MrfProblem::validate() const {
  const int n = vertex_count();
  if (label_count() < 1) throw Error("MRF: at least one label is required");
  if (!unary.allFinite()) throw Error("MRF: unary costs must be finite");
  if (prior.size() != 0 && (prior.rows() != n || prior.cols() != label_count())) {
    throw Error("MRF: prior table dimensions do not match the unary table");
  }
  if (!(lambda_prior >= 0.0) || !(lambda_pair >= 0.0)) throw Error("MRF: weights must be nonnegative");
  for (const Edge& e : edges) {
    if (e[0] < 0 || e[0] >= n || e[1] < 0 || e[1] >= n) throw Error("MRF: edge index out of range");
  }
}

double mrf_energy(const MrfProblem& problem, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != problem.vertex_count()) throw Error("mrf_energy: label count mismatch");
  double e = 0.0;
  for (int v = 0; v < problem.vertex_count(); ++v) {
    const int l = labels[v];
    if (l < 0 || l >= problem.label_count()) throw Error("mrf_energy: label out of range");
    e += problem.unary(v, l);
    if (problem.prior.size() != 0) e += problem.lambda_prior * problem.prior(v, l);
  }
  for (const Edge& edge : problem.edges) e += problem.lambda_pair * (labels[edge[0]] != labels[edge[1]]);
  return e;
}

MrfSolution solve_mrf(const MrfProblem& problem) {
  problem.validate();
  const int n = problem.vertex_count(), L = problem.label_count();
  const auto adj = adjacency(problem);

  std::vector<std::vector<int>> starts;
  for (int l = 0; l < L; ++l) starts.emplace_back(n, l);
  starts.push_back(row_argmin(problem.unary));
  if (problem.prior.size() != 0) {
    starts.push_back(row_argmin(problem.prior));
    starts.push_back(row_argmin(problem.unary + problem.lambda_prior * problem.prior));
  }

  MrfSolution best;
  best.energy = std::numeric_limits<double>::infinity();
  for (size_t s = 0; s < starts.size(); ++s) {
    std::vector<int> labels = local_search(problem, adj, starts[s]);
    const double e = mrf_energy(problem, labels);
    best.start_energies.push_back(e);
    if (e < best.energy) {
      best.energy = e;
      best.labels = std::move(labels);
      best.best_start = static_cast<int>(s);
    }
  }
  return best;
}

MrfSolution solve_mrf_exhaustive(const MrfProblem& problem) {
  problem.validate();
  const int n = problem.vertex_count(), L = problem.label_count();
  double total = std::pow(static_cast<double>(L), n);
  if (total > 2e7) throw Error("solve_mrf_exhaustive: problem too large");
  MrfSolution best;
  best.energy = std::numeric_limits<double>::infinity();
  std::vector<int> labels(n, 0);
  while (true) {
    const double e = mrf_energy(problem, labels);
    if (e < best.energy) {
      best.energy = e;
      best.labels = labels;
    }
    int k = 0;
    while (k < n && ++labels[k] == L) labels[k++] = 0;
    if (k == n) break;
  }
  return best;
}

LabelTransfer transfer_labels(const TriMesh& body, const std::vector<int>& body_labels, const TriMesh& scan,
                              double flag_distance) {
  if (scan.vertex_count() == 0) throw Error("transfer_labels: empty scan");
  if (static_cast<int>(body_labels.size()) != body.vertex_count()) {
    throw Error("transfer_labels: expected one label per body vertex");
  }
  const SurfaceBVH bvh(body);
  LabelTransfer out;
  out.labels.resize(scan.vertex_count());
  for (int i = 0; i < scan.vertex_count(); ++i) {
    const SurfacePoint s = bvh.closest_point(scan.vertices.row(i).transpose());
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 3; ++c) {
      const int v = body.faces(s.face, c);
      const double d2 = (body.vertices.row(v).transpose() - s.point).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && v < best)) {
        best_d2 = d2;
        best = v;
      }
    }
    out.labels[i] = body_labels[best];
    if (s.distance > flag_distance) out.flagged.push_back(i);
  }
  return out;
}

}  // namespace wardrobe
